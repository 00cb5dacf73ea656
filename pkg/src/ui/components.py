"""
Text and JSON rendering of analysis results.
"""

import json
from typing import List, Optional

from config.config import APP_TITLE
from src.models.embedding import Embedding, FieldExpr
from src.models.series import Value
from src.utils.report import AnalysisReport, OrderCheckReport, ResidueChain, series_terms
from src.utils.transform import Trace
from .styles import VERDICT_COLORS, colorstr


def render_json(payload: dict) -> str:
    """Deterministic JSON text (insertion order, two-space indent)."""
    return json.dumps(payload, indent=2, ensure_ascii=False)


def render_header(subtitle: str) -> str:
    """Render the report heading."""
    return f"{colorstr(APP_TITLE)} - {subtitle}\n" + "-" * 60


def render_section(title: str, lines: List[str]) -> str:
    body = "\n".join(f"  {line}" for line in lines) if lines else "  (none)"
    return f"{colorstr('bold', title)}\n{body}"


def render_value(value: Value) -> str:
    """Plain value: an integer, `infinite` or the precision notice."""
    return str(value)


def render_values(emb: Embedding) -> str:
    return ", ".join(f"v({name}) = {v}" for name, v in zip(emb.variables, emb.values()))


def render_trace(trace: Trace) -> List[str]:
    lines = []
    for number, (step, values) in enumerate(trace, start=1):
        lines.append(f"{number:3d}. {step.describe(trace.presentation):<32} values {values}")
    return lines


def render_series(emb: Embedding, index: int, name: Optional[str] = None) -> str:
    name = name or emb.variables[index - 1]
    terms = series_terms(emb.image(index), emb.presentation, emb.cap)
    text = " + ".join(f"({term['c']})*t^{term['e']}" for term in terms)
    return f"{name} -> {text} + ..."


def render_chain(chain: ResidueChain) -> List[str]:
    fmt = chain.presentation.format
    origin = f" (from {chain.origin})" if chain.origin and chain.origin != chain.variable else ""
    lines = [f"{chain.variable}{origin}: {chain.terminal_dict()}"]
    for step in chain.steps:
        lines.append(f"    r = {step.exponent:<3} residue {fmt(step.residue):<24} {step.kind}")
    if chain.lift is not None:
        lines.append(f"    lift {chain.lift}")
    return lines


def render_unit_element(source: Embedding, trace: Trace, unit: FieldExpr, final: Embedding) -> str:
    sections = [
        render_header("element of value 1"),
        render_section("Values", [render_values(source)]),
        render_section("Trace", render_trace(trace)),
        render_section("Unit element", [f"{unit}  (value 1)"]),
        render_section("Final values", [render_values(final)]),
    ]
    return "\n\n".join(sections)


def render_analysis(report: AnalysisReport) -> str:
    """Human-readable rendering of an analysis report."""
    fmt = report.presentation.format
    targets = report.trace.target_variables
    verdict = colorstr(VERDICT_COLORS[report.verdict], report.verdict.upper())

    chain_lines = []
    for chain in report.ordered_chains():
        chain_lines.extend(render_chain(chain))

    generator_lines = [
        f"{chain.variable}: {fmt(chain.transcendental_residue())}" for chain in report.generators
    ]
    implicit_lines = [
        f"{element.name} = {element.expression}  value {element.value}"
        for element in report.implicit_elements
    ]
    exact = "exact" if report.dimension_exact else "lower bound"

    sections = [
        render_header("analysis"),
        render_section("Values", [render_values(report.source)]),
        render_section("Trace", render_trace(report.trace)),
        render_section("Unit element", [f"{report.unit_element}  (value 1)"]),
        render_section("Residue chains", chain_lines),
        render_section("Transcendental generators", generator_lines),
        render_section("Dimension", [f"{report.dimension} ({exact})"]),
        render_section("Order function", [f"{verdict}"]),
        render_section("Final embedding", [
            render_series(report.final, i, targets[i - 1]) for i in range(1, report.final.n + 1)
        ]),
        render_section("Implicit elements", implicit_lines),
    ]
    if report.diagnostics:
        sections.append(render_section("Diagnostics", report.diagnostics))
    return "\n\n".join(sections)


def render_residues(chains: List[ResidueChain]) -> str:
    lines = []
    for chain in chains:
        lines.extend(render_chain(chain))
    return "\n\n".join([render_header("residue chains"), render_section("Chains", lines)])


def render_order_check(check: OrderCheckReport) -> str:
    if check.passed:
        status = colorstr("green", f"PASS ({check.checked} trials, degree <= {check.degree}, seed {check.seed})")
        return f"{render_header('order function check')}\n{status}"
    status = colorstr("red", "FAIL")
    detail = (
        f"counterexample {check.witness}: value {check.witness_value}, "
        f"expected {check.expected}"
    )
    return f"{render_header('order function check')}\n{status}\n  {detail}"
