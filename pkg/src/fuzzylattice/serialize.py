"""Payload builders and renderers shared by the CLI and the HTTP facade.

Both surfaces serialize through `dump_json`, so the CLI's structured output
mirrors API response bodies byte for byte. Text rendering uses dot-decimal
formatting regardless of locale.
"""

from __future__ import annotations

import json

from .inference import (
    ConsultationReport,
    ExplanationRow,
    PhaseResult,
    ProbableDisease,
    SurfaceGrid,
)
from .kb import CompiledKB

NO_EVIDENCE_CELL = "NA"


def dump_json(payload) -> str:
    """Canonical JSON text: compact separators, keys in insertion order."""
    return json.dumps(payload, ensure_ascii=False, allow_nan=False, separators=(",", ":"))


def kb_summary(kb: CompiledKB, checksum: str | None = None) -> dict:
    sys = kb.system
    summary = {
        "format": sys.format_version,
        "attributes": [
            {
                "name": a,
                "label": sys.attribute_labels.get(a, a),
                "universe": list(sys.variables[a].universe),
                "terms": [
                    {"name": t.name, "vertices": [t.mf.a, t.mf.b, t.mf.c]}
                    for t in sys.variables[a].terms
                ],
            }
            for a in sys.attributes
        ],
        "output": {
            "name": sys.output.name,
            "universe": list(sys.output.universe),
            "terms": [
                {"name": t.name, "vertices": [t.mf.a, t.mf.b, t.mf.c]}
                for t in sys.output.terms
            ],
        },
        "diseases": [
            {"name": d, "label": sys.disease_labels.get(d, d)} for d in sys.diseases
        ],
        "phases": [
            {"index": p.index, "name": p.name, "attributes": list(p.attributes)}
            for p in sys.phases
        ],
        "stats": {
            "nodes": kb.stats.node_count,
            "nodes_per_level": list(kb.stats.nodes_per_level),
            "rules_per_level": list(kb.stats.rules_per_level),
            "rules": kb.stats.rule_count,
            "conflicts_resolved": kb.stats.conflicts_resolved,
        },
    }
    if checksum is not None:
        summary["checksum"] = checksum
    return summary


def rule_payload(rule) -> dict:
    return {
        "antecedent": [[a, t] for a, t in rule.antecedent],
        "disease": rule.disease,
        "term": rule.disease_term,
        "reliability": rule.reliability,
        "origin": {"subset": [a for a, _ in rule.antecedent], "class": rule.origin_class},
    }


def activation_payload(act) -> dict:
    payload = rule_payload(act.rule)
    payload["strength"] = act.strength
    payload["clauses"] = [[a, d] for a, d in act.clause_degrees]
    return payload


def assessment_payload(a) -> dict:
    return {
        "disease": a.disease,
        "crisp": a.crisp_chance,
        "label": a.label,
        "no_evidence": a.no_evidence,
        "evaluated": a.evaluated,
        "activations": [activation_payload(act) for act in a.activations],
    }


def probable_payload(entries: tuple[ProbableDisease, ...]) -> list[dict]:
    return [{"disease": p.disease, "crisp": p.crisp, "label": p.label} for p in entries]


def phase_result_payload(result: PhaseResult) -> dict:
    return {
        "phase": result.phase,
        "mode": result.mode,
        "provided": list(result.provided),
        "assessments": [assessment_payload(a) for a in result.assessments],
    }


def report_payload(report: ConsultationReport) -> dict:
    return {
        "threshold": report.threshold,
        "mode": report.mode,
        "phases": [
            {**phase_result_payload(res), "refined": probable_payload(refined)}
            for res, refined in zip(report.phases, report.refined)
        ],
        "final": probable_payload(report.final),
    }


def surface_payload(grid: SurfaceGrid) -> dict:
    return {
        "disease": grid.disease,
        "mode": grid.mode,
        "x": {"attribute": grid.attr_x, "values": list(grid.x_values)},
        "y": {"attribute": grid.attr_y, "values": list(grid.y_values)},
        "cells": [
            [NO_EVIDENCE_CELL if c is None else c for c in row] for row in grid.cells
        ],
    }


# ---------------------------------------------------------------------------
# text rendering


def _fmt(value: float) -> str:
    return repr(float(value))


def render_report_text(report: ConsultationReport, kb: CompiledKB) -> str:
    """Human report: per phase one line per disease, sorted by crisp desc."""
    lines = []
    for result, refined in zip(report.phases, report.refined):
        spec = kb.system.phase(result.phase)
        lines.append(f"Phase {result.phase} ({spec.name}), mode {result.mode}")
        lines.append(f"  inputs: {', '.join(result.provided)}")
        ranked = sorted(
            result.assessments,
            key=lambda a: (a.no_evidence, -a.crisp_chance, a.disease),
        )
        for a in ranked:
            if a.no_evidence:
                lines.append(f"  {a.disease:<10} {'—':>7}  No evidence")
            else:
                lines.append(f"  {a.disease:<10} {a.crisp_chance:>7.1f}  {a.label}")
        lines.append(
            "  probable: "
            + (", ".join(p.disease for p in refined) if refined else "(none)")
        )
        lines.append("")
    lines.append(f"Final (threshold {report.threshold:g})")
    if report.final:
        for p in report.final:
            lines.append(f"  {p.disease:<10} {p.crisp:>7.1f}  {p.label}")
    else:
        lines.append("  (no probable diseases)")
    return "\n".join(lines) + "\n"


def render_explanation_text(rows: tuple[ExplanationRow, ...]) -> str:
    """Rule-viewer table: strength, rule, consequent, clause degrees."""
    if not rows:
        return "(no rule fired)\n"
    lines = [f"{'strength':>8}  {'rule':<58} {'r_s':>5}  clause degrees"]
    for row in rows:
        ante = " AND ".join(f"{a}={t}" for a, t in row.antecedent)
        rule = f"IF {ante} THEN {row.disease}={row.disease_term}"
        clauses = ", ".join(f"{a}:{d:.3f}" for a, d in row.clause_degrees)
        lines.append(f"{row.strength:>8.3f}  {rule:<58} {row.reliability:>5.2f}  {clauses}")
    return "\n".join(lines) + "\n"


def render_validation_text(kb: CompiledKB) -> str:
    s = kb.stats
    per_level = " ".join(
        f"{lvl}:{cnt}" for lvl, cnt in enumerate(s.rules_per_level) if lvl > 0
    )
    nodes_per_level = "/".join(str(c) for c in s.nodes_per_level)
    return (
        f"format version: {s.format_version}\n"
        f"attributes (n): {s.attribute_count}\n"
        f"diseases (x): {s.disease_count}\n"
        f"phases: {s.phase_count}\n"
        f"lattice: {s.node_count} nodes (levels {nodes_per_level})\n"
        f"rules per level: {per_level} (total {s.rule_count})\n"
        f"conflicts resolved: {s.conflicts_resolved}\n"
    )


def surface_csv(grid: SurfaceGrid) -> str:
    """Header row carries attr_x values, first column attr_y values."""
    lines = ["," + ",".join(_fmt(x) for x in grid.x_values)]
    for yv, row in zip(grid.y_values, grid.cells):
        cells = ",".join(NO_EVIDENCE_CELL if c is None else _fmt(c) for c in row)
        lines.append(f"{_fmt(yv)},{cells}")
    return "\n".join(lines) + "\n"
