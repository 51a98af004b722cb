"""
Text and structured renderings of an AnalysisReport.
"""

import json
from typing import Iterable, List

from .models import AnalysisReport, ArsPassModel, WtcPassModel

FORMATS = ("text", "structured")


def render_structured(report: AnalysisReport) -> str:
    return json.dumps(report.model_dump(mode="json"), sort_keys=True, indent=2) + "\n"


def parse_structured(text: str) -> AnalysisReport:
    return AnalysisReport.model_validate_json(text)


def _table(names: List[str], rows: List[List[str]]) -> List[str]:
    cells = [[""] + names] + [[name] + row for name, row in zip(names, rows)]
    widths = [max(len(row[k]) for row in cells) for k in range(len(cells[0]))]
    return ["  " + " | ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in cells]


def _section(title: str) -> List[str]:
    return ["", title, "-" * len(title)]


def _ars_pass(label: str, result: ArsPassModel) -> Iterable[str]:
    yield f"{label}: {result.equation} = 0"
    if result.note:
        yield f"  {result.note}"
    for b in result.balances:
        yield f"  p = {b.exponent}: leading {b.leading} -> {b.classification}"
        if b.resonance_polynomial:
            yield f"    resonance polynomial {b.resonance_polynomial}; resonances {', '.join(b.resonances)}"
        if b.series:
            yield f"    series coefficients {', '.join(b.series)}"
        if b.arbitrary_indices:
            yield f"    arbitrary at {b.arbitrary_indices}"
        for index, residual in b.residuals.items():
            yield f"    compatibility fails at {index}: {residual}"
        if b.note:
            yield f"    {b.note}"


def _wtc_pass(label: str, result: WtcPassModel) -> Iterable[str]:
    yield f"{label}: {result.equation} = 0"
    if result.note:
        yield f"  {result.note}"
    for b in result.branches:
        yield f"  p = {b.exponent}: u0 = {b.leading} -> {b.classification}"
        if b.resonance_polynomial:
            yield f"    resonance polynomial {b.resonance_polynomial}; resonances {', '.join(b.resonances)}"
        if b.statuses:
            orders = ", ".join(f"{k}: {v}" for k, v in b.statuses.items())
            yield f"    orders {orders}; expected arbitrary {b.expected_arbitrary}"
        if b.note:
            yield f"    {b.note}"


def render_text(report: AnalysisReport) -> str:
    lines = [
        f"painleve-lab {report.tool_version} (schema {report.schema_version})",
        f"command: {report.command} {' '.join(report.arguments)}".rstrip(),
        f"equation {report.input.id}: {report.input.dsl} = 0",
    ]
    if report.input.parameters:
        lines.append("parameters: " + ", ".join(f"{k} = {v}" for k, v in report.input.parameters.items()))

    if report.symmetries:
        lines += _section("Symmetries")
        for name, generator in report.symmetries.generators.items():
            lines.append(f"  {name} = {generator}: residual {report.symmetries.residuals[name]}")
    if report.brackets:
        lines += _section("Lie brackets")
        lines += _table(report.brackets.names, report.brackets.rows)
        lines.append(f"  antisymmetric: {report.brackets.antisymmetric}, Jacobi: {report.brackets.jacobi}")
    if report.adjoint:
        lines += _section("Adjoint representation")
        lines += _table(report.adjoint.names, report.adjoint.rows)
        if report.adjoint.representatives:
            lines.append(f"  optimal system: {', '.join(report.adjoint.representatives)}")
        for a, b in report.adjoint.equivalent_pairs:
            lines.append(f"  {a} ~ {b}")
    if report.reductions:
        lines += _section("Reductions")
        for r in report.reductions.reductions:
            kind = "first order" if r.first_order else f"order {r.order}"
            lines.append(f"  ({r.label}) {r.generator}: {r.invariants}")
            lines.append(f"      {r.equation} = 0 [{kind}, verified: {r.verified}]")
        for i in report.reductions.integrals:
            if i.exact:
                shift = f" after shift {i.shift}" if i.shift else ""
                lines.append(f"  integral of {i.source}{shift}: {i.equation} = 0")
            else:
                lines.append(f"  {i.source} is not exact: Euler residual {i.residual}")
        for source, reduced in report.reductions.order_reductions.items():
            lines.append(f"  order reduction of {source}: {reduced} = 0")
    if report.ars:
        lines += _section("ARS test")
        lines += list(_ars_pass("direct", report.ars.direct))
        if report.ars.inverted:
            lines += list(_ars_pass(f"inverted (cleared {report.ars.inversion_factor})", report.ars.inverted))
        lines.append(f"  {report.input.id} {report.ars.verdict}")
    if report.wtc:
        lines += _section("Singular manifold test")
        lines.append(f"  order {report.wtc.order}, kruskal gauge: {report.wtc.kruskal}")
        lines += list(_wtc_pass("direct", report.wtc.direct))
        if report.wtc.inverted:
            lines += list(_wtc_pass("inverted", report.wtc.inverted))
    if report.numeric:
        lines += _section("Numeric validation")
        for n in report.numeric:
            slope = "exact" if n.residual_slope is None else f"{n.residual_slope:.4f}"
            lines.append(
                f"  {n.sample} (samples v{n.samples_version}): residual slope {slope}, expected {n.expected_slope}"
            )
            if n.window:
                lines.append(f"    window [{n.window[0]}, {n.window[1]}], deviation bound {n.deviation_tolerance:g}")
            for order, deviation in n.deviations.items():
                lines.append(f"    N = {order}: max relative deviation {deviation:.3e}")
            lines.append(f"    monotone over N: {n.monotone}")
            for problem in n.failed:
                lines.append(f"    failed: {problem}")
            lines.append(f"    passes: {n.passes}")

    if report.verdicts:
        lines += _section("Verdicts")
        lines += [f"  {stage}: {'pass' if ok else 'fail'}" for stage, ok in report.verdicts.items()]
    if report.failures:
        lines += _section("Failures")
        lines += [f"  {stage}: {message}" for stage, message in report.failures.items()]
    if report.discrepancies:
        lines += _section("Discrepancy warnings")
        for d in report.discrepancies:
            lines.append(f"  {d.topic}")
            lines.append(f"    printed:    {d.printed}")
            lines.append(f"    mechanical: {d.mechanical}")
            if d.note:
                lines.append(f"    {d.note}")
    if report.warnings:
        lines += _section("Warnings")
        lines += [f"  {w}" for w in report.warnings]
    return "\n".join(lines) + "\n"


def render_report(report: AnalysisReport, format: str = "text") -> str:
    """
    Deterministic rendering of a report.

    Raises:
        ValueError: For an unknown format
    """
    if format == "text":
        return render_text(report)
    if format == "structured":
        return render_structured(report)
    raise ValueError(f"Unknown format '{format}', expected one of {FORMATS}")
