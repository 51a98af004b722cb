"""
Differential equations as normalized left-hand sides over a jet space.
"""

from dataclasses import dataclass
from typing import Mapping, Optional, Set

import sympy as sp

from .errors import UndeclaredVariableError, UnsupportedOperationError
from .jet import JetSpace, JetSymbol, jet_symbols
from .normal_form import normalize, proportional
from .parser import parse, to_dsl


@dataclass(frozen=True)
class DifferentialEquation:
    """
    The equation lhs == 0.

    Attributes:
        lhs: Normalized left-hand side
        space: Jet space the equation lives in
        label: Human readable identifier
    """

    lhs: sp.Expr
    space: JetSpace
    label: str = ""

    def __post_init__(self):
        lhs = normalize(self.lhs)
        for jet in jet_symbols(lhs):
            if not self.space.owns(jet):
                raise UndeclaredVariableError(
                    f"Jet {jet} does not belong to the space {self.space.describe()}"
                )
        object.__setattr__(self, "lhs", lhs)

    @classmethod
    def from_dsl(cls, text: str, independents, dependents, label: str = "") -> "DifferentialEquation":
        space = JetSpace(tuple(independents), tuple(dependents))
        return cls(parse(text, space), space, label)

    @property
    def jets(self) -> Set[JetSymbol]:
        return self.space.jets_of(self.lhs)

    @property
    def order(self) -> int:
        return max((j.order for j in self.jets), default=0)

    @property
    def is_ode(self) -> bool:
        return len(self.space.independents) == 1

    @property
    def base(self) -> JetSymbol:
        return self.space.base()

    @property
    def independent(self) -> str:
        if not self.is_ode:
            raise UnsupportedOperationError(f"{self.label or 'Equation'} is not an ODE")
        return self.space.independents[0]

    @property
    def parameters(self) -> Set[sp.Symbol]:
        independents = set(self.space.independent_symbols)
        return {
            s for s in self.lhs.free_symbols
            if not isinstance(s, JetSymbol) and s not in independents
        }

    def leading_jet(self) -> JetSymbol:
        """Highest-order jet, ties broken towards derivatives in later variables."""
        jets = self.jets
        if not jets:
            raise UnsupportedOperationError("Equation contains no derivatives")
        return max(jets, key=lambda j: (j.order, j.counts[::-1], j.dependent))

    def with_lhs(self, lhs: sp.Expr, label: Optional[str] = None) -> "DifferentialEquation":
        return DifferentialEquation(lhs, self.space, self.label if label is None else label)

    def bind(self, bindings: Mapping) -> "DifferentialEquation":
        """Substitute parameter values."""
        values = {sp.Symbol(str(k)) if isinstance(k, str) else k: sp.sympify(v) for k, v in bindings.items()}
        return self.with_lhs(self.lhs.xreplace(values))

    def equivalent(self, other: "DifferentialEquation") -> bool:
        return proportional(self.lhs, other.lhs) is not None

    def to_dsl(self) -> str:
        return to_dsl(self.lhs)

    def __str__(self) -> str:
        return f"{self.label or 'H'}{self.space.describe()}: {self.to_dsl()} = 0"
