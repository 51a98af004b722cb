"""
Published forms of intermediate results, kept as comparison targets.

Mechanical results are authoritative; every comparison yields a
Discrepancy record when the two forms disagree and None otherwise.
"""

from collections import Counter
from typing import Iterable, Optional

import sympy as sp
from loguru import logger

from .expr import DifferentialEquation, JetSpace, normalize, parse, proportional, to_dsl
from .report.models import Discrepancy

ORDER_REDUCED_SPACE = JetSpace(("z",), ("y",))
MANIFOLD_SPACE = JetSpace(("t", "x"), ("phi", "u0", "u1"))

ORDER_REDUCED = (
    "alpha*(D(y,z)^3 + 2*y*D(y,z)*D(y,z:2) + 6*y^2*D(y,z)*D(y,z:2) + 2*y^3*D(y,z:3))"
    " + 2*beta*y*(D(y,z:2) + y^2*D(y,z)^2 + 1) + 4*y*D(y,z) + z^2 - 2*delta"
)
KAWAHARA_INTEGRAL = "y*D(y,z)^2 + 2*y^3*D(y,z:2) + 2*y^2 + z^3/3 - 2*delta*z + kappa"
GENERALIZED_ORDER_REDUCED = (
    "alpha*(D(y,z)^3/2 + y*D(y,z)*D(y,z:2) + 3*y^2*D(y,z)*D(y,z:2) + y^3*D(y,z:3))"
    " + beta*y*(D(y,z:2) + y^2*D(y,z)^2 + 1) + 2*y*D(y,z) + z^{m}/{m} - c*z - delta"
)

V0, V1, V2 = sp.symbols("V0 V1 V2")
ALPHA, BETA, DELTA = sp.symbols("alpha beta delta")
SERIES_V3 = -(
    DELTA * V0**4
    + 24 * ALPHA * V1**3
    + 2 * V0**2 * V1
    + BETA * (6 * V0**3 * V2 - V0**2 - V0 * V1**2)
    - 48 * V0 * V1 * V2
) / (24 * ALPHA * V0**2)

# p = -1, -2, -3, -4 balances of the inverted fourth-order equation
INVERTED_RESONANCES = {
    -1: [-1, 0, 1, 2],
    -2: [-1, 0, 1, -2],
    -3: [-1, 0, -1, -2],
    -4: [-1, -2, -3, -4],
}

WTC_DEMO_LEADING = "-D(phi,x)^2/D(phi,t)"
WTC_DEMO_RESONANCES = [-1, 1]
WTC_DEMO_ORDER0 = "D(phi,x)^2 + u0*D(phi,t)"
WTC_DEMO_ORDER1 = "u0*(D(phi,x:2) + D(u0,x)) - 2*u1*(D(phi,x)^2 + u0*D(phi,t))"
BENNEY_LIN_ARBITRARY_ORDERS = [0, 1, 2, 4]

E, K, C, A, B, G, D = sp.symbols("E k c a b g d")
CONTE_LEADING = -K * C**2 * (A + B * E) / (G + D * E) ** 2


def order_reduced() -> DifferentialEquation:
    return DifferentialEquation(parse(ORDER_REDUCED, ORDER_REDUCED_SPACE), ORDER_REDUCED_SPACE, "printed")


def kawahara_integral() -> DifferentialEquation:
    return DifferentialEquation(parse(KAWAHARA_INTEGRAL, ORDER_REDUCED_SPACE), ORDER_REDUCED_SPACE, "printed")


def kawahara_exponential_integral() -> sp.Expr:
    """Claimed integral of the second-order Kawahara equation, up to its constant lambda."""
    y, y_z = ORDER_REDUCED_SPACE.base(), ORDER_REDUCED_SPACE.jet("y", {"z": 1})
    z, kappa = sp.symbols("z kappa")
    return sp.exp(-1 / (2 * y**2)) * y_z + 2 * y**3 / 3 + z**4 / 12 - DELTA * z**2 + kappa * z


def generalized_order_reduced(n: int) -> DifferentialEquation:
    text = GENERALIZED_ORDER_REDUCED.replace("{m}", str(n + 1))
    return DifferentialEquation(parse(text, ORDER_REDUCED_SPACE), ORDER_REDUCED_SPACE, "printed")


def leading_power(n: int) -> sp.Expr:
    """n-th power of the published leading coefficient of the generalized equation."""
    n = sp.Integer(n)
    return -ALPHA * (4 + 3 * n) * (2 + n) * (n + 1) / (8 * n**4)


def manifold_expression(text: str) -> sp.Expr:
    return parse(text, MANIFOLD_SPACE)


def _report(discrepancy: Discrepancy) -> Discrepancy:
    logger.warning(f"{discrepancy.topic}: printed {discrepancy.printed} vs mechanical {discrepancy.mechanical}")
    return discrepancy


def compare_equations(
    topic: str, printed: DifferentialEquation, mechanical: DifferentialEquation
) -> Optional[Discrepancy]:
    """Equations agree when their left sides are proportional."""
    if printed.space == mechanical.space and printed.equivalent(mechanical):
        return None
    return _report(Discrepancy(topic=topic, printed=printed.to_dsl(), mechanical=mechanical.to_dsl()))


def compare_expressions(
    topic: str, printed: sp.Expr, mechanical: sp.Expr, up_to_factor: bool = False
) -> Optional[Discrepancy]:
    if up_to_factor:
        agree = proportional(printed, mechanical) is not None
    else:
        agree = normalize(sp.together(sp.sympify(printed) - sp.sympify(mechanical))) == 0
    if agree:
        return None
    return _report(Discrepancy(topic=topic, printed=to_dsl(printed), mechanical=to_dsl(mechanical)))


def compare_lists(topic: str, printed: Iterable, mechanical: Iterable) -> Optional[Discrepancy]:
    """Compare as multisets."""
    printed, mechanical = [sp.sympify(v) for v in printed], [sp.sympify(v) for v in mechanical]
    if Counter(printed) == Counter(mechanical):
        return None
    return _report(Discrepancy(topic=topic, printed=_listing(printed), mechanical=_listing(mechanical)))


def _listing(values) -> str:
    return "[" + ", ".join(to_dsl(v) for v in sorted(values, key=sp.default_sort_key)) + "]"
