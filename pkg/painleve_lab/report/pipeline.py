"""
Analysis stages and their concurrent orchestration.

Each stage turns a registry entry into an immutable fragment plus any
printed-vs-mechanical discrepancies; run_pipeline merges the fragments in
STAGES order so the report does not depend on completion order.
"""

import re
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import sympy as sp
from loguru import logger

from .. import __version__, printed
from ..config import Config
from ..expr import DifferentialEquation, ExpressionError, to_dsl
from ..lie import BracketTable, LieError, adjoint_table, check_optimal_system, format_combination, symmetry_residual
from ..painleve import (
    ArsOptions,
    PainleveError,
    analyze,
    conte_substitute,
    leading_constraint,
    pde_analyze_with_inversion,
)
from ..painleve.ars import ArsPass, BalanceAnalysis
from ..painleve.balance import DominantBalance
from ..painleve.wtc import WtcBranch, WtcPass
from ..reduction import (
    IntegrationOutcome,
    NonAutonomousError,
    ReductionError,
    autonomous_order_reduce,
    integrate_once_exact,
    reduction_recipes,
)
from ..registry import FIRST_ORDER_REDUCTIONS, OPTIMAL_SYSTEM, RegistryEntry, RegistryError, registry_lookup
from ..validation import ValidationError, integral_drift, load_samples, run_sample
from .models import (
    AdjointFragment,
    AnalysisReport,
    ArsFragment,
    ArsPassModel,
    BalanceModel,
    BracketFragment,
    Discrepancy,
    EquationInput,
    FirstIntegralModel,
    NumericFragment,
    ReductionFragment,
    ReductionModel,
    SymmetryFragment,
    WtcBranchModel,
    WtcFragment,
    WtcPassModel,
)

STAGES = ("symmetries", "brackets", "adjoint", "reductions", "ars", "wtc", "numeric")
COMMAND_STAGES = {
    "symmetries": ("symmetries",),
    "brackets": ("brackets",),
    "adjoint": ("adjoint",),
    "reduce": ("reductions",),
    "ars": ("ars",),
    "wtc": ("wtc",),
    "validate": ("numeric",),
    "full": STAGES,
}
TRAVELING_WAVE = "iv"

# Numeric check of the printed exponential integral of the Kawahara equation
EXPONENTIAL_INTEGRAL = "exp(-1/(2*y^2))*D(y,z) + 2*y^3/3 + z^4/12 - delta*z^2 + kappa*z + lambda"
EXPONENTIAL_SAMPLE = {"delta": 1, "kappa": 0}
EXPONENTIAL_START = (1.0, 0.0)
EXPONENTIAL_SPAN = (0.0, 0.5)
DRIFT_TOLERANCE = 1e-6

# Errors a stage may raise on valid input; anything else is a bug and propagates
STAGE_ERRORS = (ExpressionError, LieError, ReductionError, PainleveError, ValidationError, RegistryError)


@dataclass
class PipelineOptions:
    """
    Attributes:
        config: Loaded configuration
        invert: "off", "force" or "auto"
        order: Overrides wtc.order (and ars.series_order for ODEs) when given
        kruskal: Overrides wtc.kruskal when given
        parameters: Parameter values bound before every stage
    """

    config: Config
    invert: str = "auto"
    order: Optional[int] = None
    kruskal: Optional[bool] = None
    parameters: Dict[str, sp.Expr] = field(default_factory=dict)


@dataclass(frozen=True)
class StageResult:
    """Fragment of one stage. A verdict of None means the stage does not apply."""

    name: str
    fragment: object = None
    verdict: Optional[bool] = None
    discrepancies: Tuple[Discrepancy, ...] = ()
    warnings: Tuple[str, ...] = ()


def _found(*discrepancies: Optional[Discrepancy]) -> Tuple[Discrepancy, ...]:
    return tuple(d for d in discrepancies if d is not None)


def _family(entry: RegistryEntry) -> Tuple[str, Optional[int]]:
    match = re.match(r"^([a-z-]+)(?:\(([0-9]+)\))?$", entry.id)
    if match is None:
        return entry.id, None
    return match.group(1), int(match.group(2)) if match.group(2) else None


def _bindings(entry: RegistryEntry, options: PipelineOptions) -> Dict[str, sp.Expr]:
    return {**{str(k): v for k, v in entry.defaults.items()}, **options.parameters}


def stage_symmetries(entry: RegistryEntry, options: PipelineOptions) -> StageResult:
    fields = entry.symmetry_fields()
    if not fields:
        return StageResult("symmetries", warnings=(f"{entry.id}: no symmetry generators registered",))
    residuals = {name: to_dsl(symmetry_residual(f, entry.equation)) for name, f in fields.items()}
    fragment = SymmetryFragment(
        equation_id=entry.id,
        generators={name: f.to_dsl() for name, f in fields.items()},
        residuals=residuals,
    )
    return StageResult("symmetries", fragment, fragment.all_vanish)


def stage_brackets(entry: RegistryEntry, options: PipelineOptions) -> StageResult:
    fields = entry.symmetry_fields()
    if not fields:
        return StageResult("brackets", warnings=(f"{entry.id}: no symmetry generators registered",))
    table = BracketTable.build(list(fields.values()))
    fragment = BracketFragment(
        equation_id=entry.id,
        names=table.names,
        rows=table.rows(),
        antisymmetric=table.is_antisymmetric(),
        jacobi=table.jacobi_holds(),
    )
    return StageResult("brackets", fragment, fragment.antisymmetric and fragment.jacobi)


def stage_adjoint(entry: RegistryEntry, options: PipelineOptions) -> StageResult:
    fields = entry.symmetry_fields()
    if not fields:
        return StageResult("adjoint", warnings=(f"{entry.id}: no symmetry generators registered",))
    table = adjoint_table(list(fields.values()), bound=options.config.adjoint_bound)
    fragment = AdjointFragment(equation_id=entry.id, names=table.names, rows=table.rows())
    discrepancies = []
    if set(table.names) >= {name for combination in OPTIMAL_SYSTEM.values() for name in combination}:
        check = check_optimal_system(table, list(OPTIMAL_SYSTEM.values()))
        labels = list(OPTIMAL_SYSTEM)
        classes = [format_combination(dict(zip(table.names, c))) for c in check.classes]
        fragment.representatives = labels
        for i, j in check.duplicates:
            fragment.equivalent_pairs.append([labels[i], labels[j]])
            discrepancies.append(
                Discrepancy(
                    topic="optimal system",
                    printed=f"{labels[i]} and {labels[j]} listed as distinct",
                    mechanical=f"{labels[i]} ~ {labels[j]} under the adjoint action",
                    note="classes: " + "; ".join(classes[k] for k in (i, j)),
                )
            )
    return StageResult("adjoint", fragment, True, tuple(discrepancies))


def _integral_model(source: str, outcome: IntegrationOutcome) -> FirstIntegralModel:
    return FirstIntegralModel(
        source=source,
        exact=outcome.exact,
        shift=to_dsl(outcome.shift) if outcome.shift is not None else None,
        constant=str(outcome.constant) if outcome.constant is not None else None,
        equation=outcome.equation.to_dsl() if outcome.exact else None,
        residual=None if outcome.exact else to_dsl(outcome.residual),
    )


def _integrate_repeatedly(equation: DifferentialEquation) -> List[Tuple[DifferentialEquation, IntegrationOutcome]]:
    """Integrate while the equation stays exact, shifting the dependent variable on the first step only."""
    steps = []
    current, shift = equation, "auto"
    for _ in range(equation.order):
        outcome = integrate_once_exact(current, shift=shift)
        steps.append((current, outcome))
        if not outcome.exact:
            break
        current, shift = outcome.equation, None
    return steps


def _printed_order_reduced(entry: RegistryEntry, bindings: Mapping) -> Optional[DifferentialEquation]:
    family, power = _family(entry)
    if family in ("benney-lin", "kawahara", "tw-ode", "tw-integrated"):
        return printed.order_reduced().bind(bindings)
    if family in ("gen-benney-lin", "gen-tw-ode", "gen-tw-integrated"):
        return printed.generalized_order_reduced(power).bind(bindings)
    return None


def stage_reductions(entry: RegistryEntry, options: PipelineOptions) -> StageResult:
    equation = entry.equation
    fragment = ReductionFragment(equation_id=entry.id)
    discrepancies: List[Optional[Discrepancy]] = []
    verdict = True
    bindings = _bindings(entry, options)

    if equation.is_ode:
        ode = equation
    else:
        recipes = reduction_recipes(equation, entry.reduction_generators())
        if not recipes:
            return StageResult("reductions", fragment, warnings=(f"{entry.id}: no reductions available",))
        for label, recipe in recipes.items():
            fragment.reductions.append(
                ReductionModel(
                    label=label,
                    generator=recipe.generator.to_dsl(),
                    invariants=recipe.pair.describe(),
                    equation=recipe.result.to_dsl(),
                    order=recipe.result.order,
                    verified=recipe.verify(),
                    first_order=label in FIRST_ORDER_REDUCTIONS,
                )
            )
        verdict = all(r.verified for r in fragment.reductions)
        if TRAVELING_WAVE not in recipes:
            return StageResult("reductions", fragment, verdict)
        ode = recipes[TRAVELING_WAVE].result

    steps = _integrate_repeatedly(ode)
    for source, outcome in steps:
        fragment.integrals.append(_integral_model(source.label or "equation", outcome))
    first = steps[0][1]
    if entry.id == "tw-ode" and first.exact:
        target = registry_lookup("tw-integrated").equation.bind(bindings)
        discrepancies.append(printed.compare_equations("first integral of tw-ode", target, first.equation))
    source, last = steps[-1]
    integrated = last.equation if last.exact else source

    try:
        reduced = autonomous_order_reduce(integrated)
    except NonAutonomousError as e:
        return StageResult("reductions", fragment, verdict, _found(*discrepancies), (str(e),))
    fragment.order_reductions[integrated.label or "equation"] = reduced.to_dsl()
    target = _printed_order_reduced(entry, bindings)
    if target is not None:
        discrepancies.append(printed.compare_equations("order-reduced equation", target, reduced))

    outcome = integrate_once_exact(reduced)
    fragment.integrals.append(_integral_model(reduced.label or "order-reduced equation", outcome))
    if outcome.exact and _family(entry)[0] == "kawahara":
        discrepancies.append(
            printed.compare_equations("Kawahara first integral", printed.kawahara_integral(), outcome.equation)
        )
    return StageResult("reductions", fragment, verdict, _found(*discrepancies))


def _leading_text(balance: DominantBalance) -> str:
    if balance.arbitrary:
        return "arbitrary"
    if balance.coefficient is not None:
        return to_dsl(balance.coefficient)
    return f"{to_dsl(balance.relation)} = 0"


def _balance_model(analysis: BalanceAnalysis) -> BalanceModel:
    balance, verdict = analysis.balance, analysis.verdict
    series = verdict.series
    return BalanceModel(
        exponent=str(balance.exponent),
        leading=_leading_text(balance),
        arbitrary=balance.arbitrary,
        resonance_polynomial=analysis.resonances.factored_text() if analysis.resonances else None,
        resonances=analysis.resonances.roots_text() if analysis.resonances else [],
        classification=verdict.classification,
        series=[to_dsl(c) for c in series.coefficients] if series else [],
        arbitrary_indices=sorted(series.arbitrary) if series else [],
        residuals={str(k): to_dsl(v) for k, v in verdict.residuals.items()},
        note=verdict.note or analysis.error,
    )


def _ars_pass_model(result: ArsPass) -> ArsPassModel:
    return ArsPassModel(
        equation=result.equation.to_dsl(),
        balances=[_balance_model(b) for b in result.balances],
        passes=result.passes,
        note=result.note,
    )


def _ars_discrepancies(entry: RegistryEntry, analysis, bindings: Mapping) -> List[Optional[Discrepancy]]:
    family, power = _family(entry)
    found: List[Optional[Discrepancy]] = []
    if family == "tw-integrated" and analysis.inverted is not None:
        for item in analysis.inverted.balances:
            p = int(item.balance.exponent) if item.balance.exponent.is_Integer else None
            if p in printed.INVERTED_RESONANCES and item.resonances is not None:
                found.append(
                    printed.compare_lists(
                        f"inverted resonances at p = {p}",
                        printed.INVERTED_RESONANCES[p],
                        item.resonances.rational_roots,
                    )
                )
            series = item.verdict.series
            if p == -1 and series is not None and series.order >= 3:
                values = {sp.Symbol(str(k)): v for k, v in bindings.items()}
                found.append(
                    printed.compare_expressions(
                        "series coefficient V3", printed.SERIES_V3.xreplace(values), series.coefficients[3]
                    )
                )
    if family == "gen-tw-integrated":
        target = sp.Rational(-4, power)
        for item in analysis.direct.balances:
            if item.balance.exponent != target or item.balance.arbitrary:
                continue
            leading = item.balance.leading_power()
            if leading is not None and leading[0] == power:
                found.append(
                    printed.compare_expressions(
                        f"leading coefficient to the power {power}", printed.leading_power(power), leading[1]
                    )
                )
    return found


def stage_ars(entry: RegistryEntry, options: PipelineOptions) -> StageResult:
    if not entry.equation.is_ode:
        return StageResult("ars", warnings=(f"{entry.id}: ARS analysis applies to ODEs",))
    config = options.config
    bindings = _bindings(entry, options)
    ars_options = ArsOptions(
        invert=options.invert,
        series_order=options.order or config.series_order,
        probe_depth=config.probe_depth,
        denominator_bound=config.denominator_bound,
        bindings=dict(options.parameters),
    )
    analysis = analyze(entry.equation, ars_options)
    fragment = ArsFragment(
        equation_id=entry.id,
        direct=_ars_pass_model(analysis.direct),
        inverted=_ars_pass_model(analysis.inverted) if analysis.inverted is not None else None,
        inversion_factor=to_dsl(analysis.inversion_factor) if analysis.inversion_factor is not None else None,
        passes=analysis.passes,
        verdict=analysis.verdict,
    )
    return StageResult("ars", fragment, analysis.passes, _found(*_ars_discrepancies(entry, analysis, bindings)))


def _wtc_branch_model(branch: WtcBranch) -> WtcBranchModel:
    return WtcBranchModel(
        exponent=str(branch.balance.exponent),
        leading=_leading_text(branch.balance),
        resonance_polynomial=branch.resonances.factored_text() if branch.resonances else None,
        resonances=branch.resonances.roots_text() if branch.resonances else [],
        classification=branch.classification,
        statuses={str(k): v for k, v in branch.consistency.statuses.items()} if branch.consistency else {},
        expected_arbitrary=branch.expected_arbitrary,
        passes=branch.passes,
        note=branch.error,
    )


def _wtc_pass_model(result: WtcPass) -> WtcPassModel:
    return WtcPassModel(
        equation=result.equation.to_dsl(),
        branches=[_wtc_branch_model(b) for b in result.branches],
        passes=result.passes,
        note=result.note,
    )


def _branch(result: Optional[WtcPass], exponent: int) -> Optional[WtcBranch]:
    if result is None:
        return None
    return next((b for b in result.branches if b.balance.exponent == exponent), None)


def _wtc_discrepancies(entry: RegistryEntry, analysis, kruskal: bool) -> List[Optional[Discrepancy]]:
    family, _ = _family(entry)
    found: List[Optional[Discrepancy]] = []
    if family == "wtc-demo":
        branch = _branch(analysis.direct, -1)
        if branch is None:
            return found
        found.append(
            printed.compare_expressions(
                "leading coefficient u0",
                printed.manifold_expression(printed.WTC_DEMO_LEADING),
                branch.balance.leading_value(),
            )
        )
        if branch.resonances is not None:
            roots = branch.resonances.rational_roots
            found.append(printed.compare_lists("resonances", printed.WTC_DEMO_RESONANCES, roots))
        found.append(
            printed.compare_expressions(
                "order-0 equation",
                printed.manifold_expression(printed.WTC_DEMO_ORDER0),
                leading_constraint(entry.equation, branch.balance, kruskal),
                up_to_factor=True,
            )
        )
        if branch.expansion is not None and not kruskal:
            k, c, a, b, g, d = sp.symbols("k c a b g d")
            conte = conte_substitute(branch.expansion, k, c, a, b, g, d)
            found.append(printed.compare_expressions("Moebius ansatz u0", printed.CONTE_LEADING, conte.leading))
    if family == "benney-lin":
        branch = _branch(analysis.inverted, -1) or _branch(analysis.direct, -1)
        if branch is not None and branch.consistency is not None:
            found.append(
                printed.compare_lists(
                    "arbitrary orders", printed.BENNEY_LIN_ARBITRARY_ORDERS, branch.consistency.arbitrary_orders
                )
            )
    return found


def stage_wtc(entry: RegistryEntry, options: PipelineOptions) -> StageResult:
    if entry.equation.is_ode:
        return StageResult("wtc", warnings=(f"{entry.id}: the singular manifold test applies to PDEs",))
    config = options.config
    order = options.order or config.wtc_order
    kruskal = config.wtc_kruskal if options.kruskal is None else options.kruskal
    analysis = pde_analyze_with_inversion(entry.equation, order, kruskal, options.invert)
    fragment = WtcFragment(
        equation_id=entry.id,
        order=order,
        kruskal=kruskal,
        direct=_wtc_pass_model(analysis.direct),
        inverted=_wtc_pass_model(analysis.inverted) if analysis.inverted is not None else None,
        passes=analysis.passes,
    )
    return StageResult("wtc", fragment, analysis.passes, _found(*_wtc_discrepancies(entry, analysis, kruskal)))


def _exponential_integral_check(options: PipelineOptions) -> Optional[Discrepancy]:
    """The printed exponential integral of the Kawahara second-order equation, checked numerically only."""
    values = {sp.Symbol(k): v for k, v in EXPONENTIAL_SAMPLE.items()}
    equation = printed.kawahara_integral().bind(values)
    integral = printed.kawahara_exponential_integral().xreplace(values)
    drift = integral_drift(equation, integral, EXPONENTIAL_START, *EXPONENTIAL_SPAN, options.config.tolerance)
    if drift < DRIFT_TOLERANCE:
        return None
    return Discrepancy(
        topic="Kawahara exponential integral",
        printed=f"{EXPONENTIAL_INTEGRAL} is constant along solutions",
        mechanical=f"varies by {drift:.3e} on z in [{EXPONENTIAL_SPAN[0]}, {EXPONENTIAL_SPAN[1]}]",
        note=f"delta = 1, kappa = 0, y = {EXPONENTIAL_START[0]}, D(y,z) = {EXPONENTIAL_START[1]} at z = 0",
    )


def stage_numeric(entry: RegistryEntry, options: PipelineOptions) -> StageResult:
    manifest = load_samples()
    version = int(manifest["version"])
    fragments = []
    warnings: List[str] = []
    for name, sample in sorted(manifest["samples"].items()):
        if sample["equation"] != entry.id:
            continue
        result = run_sample(name, sample, version, options.config.window, options.config.tolerance)
        fragments.append(
            NumericFragment(
                equation_id=entry.id,
                sample=name,
                samples_version=version,
                residual_slope=result.residual.measured,
                expected_slope=result.residual.expected,
                deviations={str(n): d for n, d in sorted(result.deviations.items())},
                window=list(result.window),
                tolerance=result.tolerance,
                deviation_tolerance=result.deviation_tolerance,
                monotone=result.monotone,
                failed=result.failed_checks(),
                passes=result.passes,
            )
        )
        if not result.monotone:
            orders = ", ".join(str(n) for n in sorted(result.deviations))
            warnings.append(
                f"{entry.id}: sample {name} deviation from integration is not monotone over N = {orders} "
                f"on window [{result.window[0]}, {result.window[1]}]"
            )
    discrepancies = _found(_exponential_integral_check(options)) if _family(entry)[0] == "kawahara" else ()
    if not fragments:
        warning = f"{entry.id}: no numeric samples in the manifest"
        return StageResult("numeric", [], discrepancies=discrepancies, warnings=(warning,))
    return StageResult("numeric", fragments, all(f.passes for f in fragments), discrepancies, tuple(warnings))


STAGE_FUNCTIONS: Dict[str, Callable[[RegistryEntry, PipelineOptions], StageResult]] = {
    "symmetries": stage_symmetries,
    "brackets": stage_brackets,
    "adjoint": stage_adjoint,
    "reductions": stage_reductions,
    "ars": stage_ars,
    "wtc": stage_wtc,
    "numeric": stage_numeric,
}


def bind_entry(entry: RegistryEntry, parameters: Mapping[str, sp.Expr]) -> RegistryEntry:
    if not parameters:
        return entry
    return replace(entry, equation=entry.equation.bind(parameters))


def run_pipeline(
    entry: RegistryEntry,
    stages: Sequence[str],
    options: PipelineOptions,
    command: str = "full",
    arguments: Sequence[str] = (),
    max_workers: Optional[int] = None,
) -> AnalysisReport:
    """
    Run stages concurrently and merge their fragments into one report.

    Stage failures are logged and recorded under `failures`; the other
    stages still contribute.
    """
    unknown = [s for s in stages if s not in STAGE_FUNCTIONS]
    if unknown:
        raise ValueError(f"Unknown stages {unknown}; valid stages are {list(STAGES)}")
    bound = bind_entry(entry, options.parameters)
    report = AnalysisReport(
        tool_version=__version__,
        command=command,
        arguments=list(arguments),
        input=EquationInput(
            id=entry.id,
            dsl=bound.dsl,
            independents=list(bound.equation.space.independents),
            dependent=bound.equation.space.dependents[0],
            parameters={k: to_dsl(sp.sympify(v)) for k, v in sorted(options.parameters.items())},
        ),
    )

    results: Dict[str, StageResult] = {}
    failures: Dict[str, str] = {}
    with ThreadPoolExecutor(max_workers=max_workers or len(stages) or 1) as executor:
        future_to_stage = {executor.submit(STAGE_FUNCTIONS[name], bound, options): name for name in stages}
        for future in as_completed(future_to_stage):
            name = future_to_stage[future]
            try:
                results[name] = future.result()
                logger.info(f"Stage {name} finished for {entry.id}")
            except STAGE_ERRORS as e:
                logger.error(f"Stage {name} failed for {entry.id}: {e}")
                failures[name] = f"{type(e).__name__}: {e}"

    for name in STAGES:
        if name in failures:
            report.failures[name] = failures[name]
            continue
        result = results.get(name)
        if result is None:
            continue
        if name == "numeric":
            report.numeric = list(result.fragment or [])
        elif result.fragment is not None:
            setattr(report, name, result.fragment)
        if result.verdict is not None:
            report.verdicts[name] = result.verdict
        report.discrepancies.extend(result.discrepancies)
        report.warnings.extend(result.warnings)
    return report
