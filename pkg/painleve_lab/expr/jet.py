"""
Jet-space coordinates.

A jet variable u_J is a sympy Symbol subclass that remembers its dependent
variable, the independent variables of its space and the derivative counts
along each of them. Independent variables and parameters are plain Symbols.
"""

import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence, Set, Tuple, Union

import sympy as sp

from .errors import UndeclaredVariableError

_IDENTIFIER = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")

Counts = Tuple[int, ...]


def _jet_name(dependent: str, independents: Sequence[str], counts: Counts) -> str:
    if not any(counts):
        return dependent
    suffix = "".join(var * k for var, k in zip(independents, counts))
    return f"{dependent}_{suffix}"


class JetSymbol(sp.Symbol):
    """Coordinate u_J of a jet space."""

    def __new__(cls, dependent: str, independents: Sequence[str], counts: Sequence[int] = ()):
        independents = tuple(independents)
        counts = tuple(int(k) for k in counts) or (0,) * len(independents)
        if len(counts) != len(independents) or any(k < 0 for k in counts):
            raise UndeclaredVariableError(
                f"Bad derivative counts {counts} for variables {independents}"
            )
        obj = sp.Symbol.__xnew__(cls, _jet_name(dependent, independents, counts))
        obj.dependent = dependent
        obj.independents = independents
        obj.counts = counts
        return obj

    def __getnewargs_ex__(self):
        return ((self.dependent, self.independents, self.counts), {})

    def _hashable_content(self):
        return (self.name, self.dependent, self.independents, self.counts)

    @property
    def order(self) -> int:
        return sum(self.counts)

    def count(self, var: str) -> int:
        return self.counts[self._position(var)]

    def bump(self, var: str, times: int = 1) -> "JetSymbol":
        """Return the jet differentiated `times` more along `var`."""
        position = self._position(var)
        counts = list(self.counts)
        counts[position] += times
        return JetSymbol(self.dependent, self.independents, counts)

    def base(self) -> "JetSymbol":
        return JetSymbol(self.dependent, self.independents)

    def _position(self, var: str) -> int:
        try:
            return self.independents.index(var)
        except ValueError:
            raise UndeclaredVariableError(
                f"Variable '{var}' is not an independent variable of {self.name}"
            )


def jet_symbols(expr: sp.Basic) -> Set[JetSymbol]:
    """All jet coordinates occurring in an expression."""
    return {s for s in sp.sympify(expr).free_symbols if isinstance(s, JetSymbol)}


def jet_sort_key(jet: JetSymbol):
    return (jet.dependent, jet.order, tuple(-k for k in jet.counts))


@dataclass(frozen=True)
class JetSpace:
    """
    Independent and dependent variable names of a differential equation.

    Attributes:
        independents: Ordered independent variable names, e.g. ("t", "x")
        dependents: Ordered dependent variable names, e.g. ("u",)
    """

    independents: Tuple[str, ...]
    dependents: Tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "independents", tuple(self.independents))
        object.__setattr__(self, "dependents", tuple(self.dependents))
        names = self.independents + self.dependents
        if not self.independents or not self.dependents:
            raise UndeclaredVariableError(
                "A jet space needs at least one independent and one dependent variable"
            )
        for name in names:
            if not _IDENTIFIER.match(name) or name == "D":
                raise UndeclaredVariableError(f"Invalid variable name '{name}'")
        if len(set(names)) != len(names):
            raise UndeclaredVariableError(f"Duplicate variable names in {names}")

    def symbol(self, name: str) -> sp.Symbol:
        if name not in self.independents:
            raise UndeclaredVariableError(f"'{name}' is not an independent variable")
        return sp.Symbol(name)

    @property
    def independent_symbols(self) -> Tuple[sp.Symbol, ...]:
        return tuple(sp.Symbol(name) for name in self.independents)

    def base(self, dependent: Optional[str] = None) -> JetSymbol:
        """Order-zero jet of a dependent variable (the only one if omitted)."""
        if dependent is None:
            if len(self.dependents) != 1:
                raise UndeclaredVariableError(
                    f"Ambiguous dependent variable among {self.dependents}"
                )
            dependent = self.dependents[0]
        return self.jet(dependent)

    def jet(
        self,
        dependent: str,
        derivatives: Union[Mapping[str, int], Iterable[str], None] = None,
    ) -> JetSymbol:
        """
        Build u_J from a {variable: count} mapping or a sequence of variable names.

        Raises:
            UndeclaredVariableError: If a name is not declared in this space
        """
        if dependent not in self.dependents:
            raise UndeclaredVariableError(f"'{dependent}' is not a dependent variable")
        counts = [0] * len(self.independents)
        if derivatives is None:
            derivatives = {}
        items = (
            derivatives.items()
            if isinstance(derivatives, Mapping)
            else ((var, 1) for var in derivatives)
        )
        for var, k in items:
            if var not in self.independents:
                raise UndeclaredVariableError(
                    f"'{var}' is not an independent variable of this space"
                )
            counts[self.independents.index(var)] += int(k)
        return JetSymbol(dependent, self.independents, counts)

    def owns(self, jet: JetSymbol) -> bool:
        return jet.dependent in self.dependents and jet.independents == self.independents

    def jets_of(self, expr: sp.Basic, dependent: Optional[str] = None) -> Set[JetSymbol]:
        return {
            j
            for j in jet_symbols(expr)
            if self.owns(j) and (dependent is None or j.dependent == dependent)
        }

    def rename(self, dependent: str, new_name: str) -> "JetSpace":
        return JetSpace(
            self.independents,
            tuple(new_name if d == dependent else d for d in self.dependents),
        )

    def describe(self) -> str:
        return f"({', '.join(self.independents)}; {', '.join(self.dependents)})"
