"""
Built-in equations, their symmetry generators and default parameters.

Ids with a trailing "(n)" take a positive integer power, e.g. "gen-benney-lin(3)".
"""

import re
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

import sympy as sp

from .expr import DifferentialEquation, JetSpace
from .lie import VectorField
from .lie.vector_field import combine


class RegistryError(Exception):
    """Base exception for registry lookups."""

    pass


class UnknownEquationError(RegistryError):
    """Raised when an id is not in the registry."""

    pass


_LINEAR_PART = "D(u,x:3) + beta*(D(u,x:2) + D(u,x:4)) + alpha*D(u,x:5)"
_TW_LINEAR = "alpha*D({v},s:5) + beta*(D({v},s:4) + D({v},s:2)) + D({v},s:3)"
_TW_INTEGRATED_LINEAR = "alpha*D({v},s:4) + beta*(D({v},s:3) + D({v},s)) + D({v},s:2)"

TRANSLATIONS = {
    "X1": "xi_t=1",
    "X2": "xi_x=1",
}
GALILEAN = {"X3": "xi_x=t; eta=1"}

# Optimal-system representatives, as coefficients of X1, X2, X3
OPTIMAL_SYSTEM = {
    "X1": {"X1": 1},
    "X2": {"X2": 1},
    "X3": {"X3": 1},
    "X1+c*X2": {"X1": 1, "X2": "c"},
    "X1+gamma*X3": {"X1": 1, "X3": "gamma"},
}

# Reductions along one generator of each optimal-system class
REDUCTIONS = {
    "i": {"X1": 1},
    "ii": {"X2": 1},
    "iii": {"X3": 1},
    "iv": {"X1": 1, "X2": "c"},
    "v": {"X1": 1, "X3": "gamma"},
    "vi": {"X2": "gamma1", "X3": "gamma2"},
    "vii": {"X1": 1, "X2": "c", "X3": "gamma"},
}
FIRST_ORDER_REDUCTIONS = ("ii", "iii", "vi")


@dataclass(frozen=True)
class RegistryEntry:
    """
    A built-in equation.

    Attributes:
        id: Registry id, including the instantiated power for families
        equation: The equation with symbolic parameters
        generators: Symmetry generators as DSL text
        defaults: Parameter values bound by default (e.g. beta = 0 for Kawahara)
        description: One line for listings
    """

    id: str
    equation: DifferentialEquation
    generators: Dict[str, str] = field(default_factory=dict)
    defaults: Dict[str, sp.Expr] = field(default_factory=dict)
    description: str = ""

    @property
    def dsl(self) -> str:
        return self.equation.to_dsl()

    def symmetry_fields(self) -> Dict[str, VectorField]:
        space = self.equation.space
        return {name: VectorField.from_dsl(text, space, name) for name, text in self.generators.items()}

    def reduction_generators(self) -> Dict[str, VectorField]:
        """Generators of the optimal-system reductions available for this algebra."""
        fields = self.symmetry_fields()
        result = {}
        for label, combination in REDUCTIONS.items():
            if not set(combination) <= set(fields):
                continue
            coefficients = [sp.sympify(combination.get(name, 0)) for name in fields]
            total = combine(list(fields.values()), coefficients)
            result[label] = VectorField(total.space, total.xi, total.eta, label)
        return result


def _pde(dsl: str, label: str) -> DifferentialEquation:
    return DifferentialEquation.from_dsl(dsl, ("t", "x"), ("u",), label)


def _ode(dsl: str, dependent: str, label: str) -> DifferentialEquation:
    return DifferentialEquation.from_dsl(dsl, ("s",), (dependent,), label)


def _power(n: Optional[int]) -> int:
    if n is None or n <= 0:
        raise UnknownEquationError("Family ids need a positive integer power, e.g. gen-benney-lin(3)")
    return n


def _benney_lin(n: Optional[int]) -> RegistryEntry:
    equation = _pde(f"D(u,t) + u*D(u,x) + {_LINEAR_PART}", "benney-lin")
    return RegistryEntry("benney-lin", equation, {**TRANSLATIONS, **GALILEAN}, description="Benney-Lin PDE")


def _kawahara(n: Optional[int]) -> RegistryEntry:
    base = _benney_lin(n)
    bound = base.equation.bind({"beta": 0})
    equation = bound.with_lhs(bound.lhs, "kawahara")
    return RegistryEntry("kawahara", equation, base.generators, {"beta": sp.S.Zero}, "Kawahara PDE (beta = 0)")


def _gen_benney_lin(n: Optional[int]) -> RegistryEntry:
    n = _power(n)
    ident = f"gen-benney-lin({n})"
    equation = _pde(f"D(u,t) + u^{n}*D(u,x) + {_LINEAR_PART}", ident)
    generators = dict(TRANSLATIONS) if n != 1 else {**TRANSLATIONS, **GALILEAN}
    return RegistryEntry(ident, equation, generators, description=f"Generalized Benney-Lin PDE, power {n}")


def _tw_ode(n: Optional[int]) -> RegistryEntry:
    equation = _ode(f"{_TW_LINEAR.format(v='u')} + D(u,s)*(u - c)", "u", "tw-ode")
    return RegistryEntry("tw-ode", equation, description="Traveling-wave reduction, fifth order")


def _tw_integrated(n: Optional[int]) -> RegistryEntry:
    equation = _ode(f"{_TW_INTEGRATED_LINEAR.format(v='v')} + v^2/2 - delta", "v", "tw-integrated")
    return RegistryEntry("tw-integrated", equation, description="Integrated traveling-wave ODE, fourth order")


def _tw_fifth(n: Optional[int]) -> RegistryEntry:
    equation = _ode(f"{_TW_LINEAR.format(v='v')} + D(v,s)*v + gamma", "v", "tw-fifth")
    return RegistryEntry("tw-fifth", equation, description="Galilean traveling-wave reduction, shifted")


def _tw_fifth_integrated(n: Optional[int]) -> RegistryEntry:
    equation = _ode(f"{_TW_INTEGRATED_LINEAR.format(v='v')} + v^2/2 + gamma*s - delta", "v", "tw-fifth-integrated")
    return RegistryEntry("tw-fifth-integrated", equation, description="Non-autonomous fourth-order ODE")


def _gen_tw_ode(n: Optional[int]) -> RegistryEntry:
    n = _power(n)
    ident = f"gen-tw-ode({n})"
    equation = _ode(f"{_TW_LINEAR.format(v='u')} + D(u,s)*(u^{n} - c)", "u", ident)
    return RegistryEntry(ident, equation, description=f"Generalized traveling-wave ODE, power {n}")


def _gen_tw_integrated(n: Optional[int]) -> RegistryEntry:
    n = _power(n)
    ident = f"gen-tw-integrated({n})"
    dsl = f"{_TW_INTEGRATED_LINEAR.format(v='u')} + u^{n + 1}/{n + 1} - c*u - delta"
    return RegistryEntry(ident, _ode(dsl, "u", ident), description=f"Integrated generalized ODE, power {n}")


def _wtc_demo(n: Optional[int]) -> RegistryEntry:
    equation = _pde("u*D(u,x:2) + D(u,x)^2 - u^2*D(u,t)", "wtc-demo")
    return RegistryEntry("wtc-demo", equation, description="Singular manifold demonstration PDE")


def _burgers(n: Optional[int]) -> RegistryEntry:
    equation = _pde("D(u,t) + u*D(u,x) - D(u,x:2)", "burgers")
    return RegistryEntry("burgers", equation, dict(TRANSLATIONS), description="Burgers equation")


_BUILDERS: Dict[str, Callable[[Optional[int]], RegistryEntry]] = {
    "benney-lin": _benney_lin,
    "kawahara": _kawahara,
    "gen-benney-lin": _gen_benney_lin,
    "tw-ode": _tw_ode,
    "tw-integrated": _tw_integrated,
    "tw-fifth": _tw_fifth,
    "tw-fifth-integrated": _tw_fifth_integrated,
    "gen-tw-ode": _gen_tw_ode,
    "gen-tw-integrated": _gen_tw_integrated,
    "wtc-demo": _wtc_demo,
    "burgers": _burgers,
}
FAMILIES = ("gen-benney-lin", "gen-tw-ode", "gen-tw-integrated")

_ID = re.compile(r"^([a-z-]+)(?:\(([0-9]+)\))?$")


def registry_ids() -> List[str]:
    return [f"{name}(n)" if name in FAMILIES else name for name in _BUILDERS]


def registry_lookup(ident: str) -> RegistryEntry:
    """
    Return the built-in equation for an id.

    Raises:
        UnknownEquationError: With the list of valid ids
    """
    match = _ID.match(ident.strip())
    if match is None or match.group(1) not in _BUILDERS:
        raise UnknownEquationError(f"Unknown equation '{ident}'. Valid ids: {', '.join(registry_ids())}")
    name, power = match.group(1), match.group(2)
    if (name in FAMILIES) != (power is not None):
        raise UnknownEquationError(f"Unknown equation '{ident}'. Valid ids: {', '.join(registry_ids())}")
    return _BUILDERS[name](int(power) if power else None)


def custom_equation(dsl: str, dependent: str, independents: List[str], label: str = "custom") -> RegistryEntry:
    """Wrap an equation given on the command line."""
    space = JetSpace(tuple(independents), (dependent,))
    equation = DifferentialEquation.from_dsl(dsl, space.independents, space.dependents, label)
    return RegistryEntry(label, equation, description="User supplied equation")
