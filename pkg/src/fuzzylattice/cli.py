"""Operator command line: validate, infer, explain, surface, serve.

Exit codes: 0 success, 1 validation or inference failure, 2 usage error.
Diagnostics go to stderr, data to stdout.
"""

from __future__ import annotations

import hashlib
import os
import socket
from pathlib import Path

import click

from . import __version__
from .errors import FuzzyLatticeError, InconsistentKnowledgeError
from .inference import (
    DEFAULT_THRESHOLD,
    MODES,
    SUBSET_CLOSURE,
    explain as explain_phase,
    run_consultation,
    surface_grid,
)
from .kb import CompiledKB, load_kb
from .patient import load_patient_record
from .serialize import (
    dump_json,
    render_explanation_text,
    render_report_text,
    render_validation_text,
    report_payload,
    surface_csv,
)

KB_ARG = click.Path(exists=True, dir_okay=False, path_type=Path)


def _load_kb(path: Path) -> CompiledKB:
    try:
        return load_kb(path)
    except InconsistentKnowledgeError as exc:
        if exc.report is not None:
            for c in exc.report.entries:
                ante = " AND ".join(f"{a}={t}" for a, t in c.antecedent)
                click.echo(
                    f"conflict [{ante}] disease {c.disease}: "
                    f"{', '.join(f'{t} (r_s={r})' for t, r in c.candidates)} "
                    f"-> {c.resolution}",
                    err=True,
                )
        raise click.ClickException(str(exc))
    except FuzzyLatticeError as exc:
        raise click.ClickException(str(exc))


@click.group()
@click.version_option(__version__, prog_name="fuzzylattice")
def main():
    """Lattice-based fuzzy expert-system toolkit."""


@main.command()
@click.argument("kb_file", type=KB_ARG)
def validate(kb_file: Path):
    """Parse and compile a knowledge base, printing its statistics."""
    kb = _load_kb(kb_file)
    click.echo(render_validation_text(kb), nl=False)


@main.command()
@click.argument("kb_file", type=KB_ARG)
@click.option("--patient", "patient_file", required=True, type=KB_ARG,
              help="Patient record (YAML, phase-indexed inputs).")
@click.option("--mode", type=click.Choice(MODES), default=SUBSET_CLOSURE,
              show_default=True, help="Rule matching strategy.")
@click.option("--threshold", type=float, default=DEFAULT_THRESHOLD,
              show_default=True, help="Probable-disease refinement threshold.")
@click.option("--format", "fmt", type=click.Choice(["text", "structured"]),
              default="text", show_default=True)
def infer(kb_file: Path, patient_file: Path, mode: str, threshold: float, fmt: str):
    """Run a phased consultation for one patient record."""
    kb = _load_kb(kb_file)
    lo, hi = kb.system.output.universe
    if not lo <= threshold <= hi:
        raise click.UsageError(
            f"--threshold must lie in the output universe [{lo:g}, {hi:g}]"
        )
    try:
        phases = load_patient_record(patient_file)
        report = run_consultation(kb, phases, mode=mode, threshold=threshold)
    except FuzzyLatticeError as exc:
        raise click.ClickException(str(exc))
    if fmt == "structured":
        click.echo(dump_json(report_payload(report)))
    else:
        click.echo(render_report_text(report, kb), nl=False)
    if all(a.no_evidence for r in report.phases for a in r.assessments):
        click.echo(
            f"warning: no rule fired above zero in {mode} mode; "
            "every disease is reported as no-evidence",
            err=True,
        )


@main.command()
@click.argument("kb_file", type=KB_ARG)
@click.option("--patient", "patient_file", required=True, type=KB_ARG)
@click.option("--disease", default=None, help="Restrict the table to one disease.")
@click.option("--mode", type=click.Choice(MODES), default=SUBSET_CLOSURE,
              show_default=True)
def explain(kb_file: Path, patient_file: Path, disease: str | None, mode: str):
    """Print the rule activations behind a consultation."""
    kb = _load_kb(kb_file)
    if disease is not None and disease not in kb.system.diseases:
        raise click.UsageError(
            f"unknown disease '{disease}' (diseases: {', '.join(kb.system.diseases)})"
        )
    try:
        phases = load_patient_record(patient_file)
        report = run_consultation(kb, phases, mode=mode)
    except FuzzyLatticeError as exc:
        raise click.ClickException(str(exc))
    for result in report.phases:
        spec = kb.system.phase(result.phase)
        click.echo(f"Phase {result.phase} ({spec.name})")
        click.echo(render_explanation_text(explain_phase(result, disease)), nl=False)


@main.command()
@click.argument("kb_file", type=KB_ARG)
@click.option("--disease", required=True)
@click.option("--x", "attr_x", required=True, help="Swept attribute on the x axis.")
@click.option("--y", "attr_y", required=True, help="Swept attribute on the y axis.")
@click.option("--resolution", type=click.IntRange(min=2), default=21, show_default=True)
@click.option("--fixed", multiple=True, metavar="ATTR=VALUE",
              help="Hold a remaining attribute at a crisp value (repeatable).")
@click.option("--mode", type=click.Choice(MODES), default=SUBSET_CLOSURE,
              show_default=True)
def surface(kb_file: Path, disease: str, attr_x: str, attr_y: str,
            resolution: int, fixed: tuple[str, ...], mode: str):
    """Export one disease's crisp-chance surface over two attributes as CSV."""
    kb = _load_kb(kb_file)
    if attr_x == attr_y:
        raise click.UsageError("--x and --y must name different attributes")
    if disease not in kb.system.diseases:
        raise click.UsageError(
            f"unknown disease '{disease}' (diseases: {', '.join(kb.system.diseases)})"
        )
    held: dict[str, float] = {}
    for item in fixed:
        attr, sep, value = item.partition("=")
        if not sep:
            raise click.UsageError(f"--fixed expects ATTR=VALUE, got '{item}'")
        try:
            held[attr] = float(value)
        except ValueError:
            raise click.UsageError(f"--fixed value for '{attr}' must be a number")
    try:
        grid = surface_grid(
            kb, disease, attr_x, attr_y,
            fixed=held, resolution=resolution, mode=mode,
        )
    except FuzzyLatticeError as exc:
        raise click.ClickException(str(exc))
    click.echo(surface_csv(grid), nl=False)


@main.command()
@click.argument("kb_file", type=KB_ARG, required=False, envvar="FUZZYLATTICE_KB")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8420, show_default=True)
@click.option("--journal", "journal_path", envvar="FUZZYLATTICE_JOURNAL",
              type=click.Path(dir_okay=False, path_type=Path), default=None,
              help="Append-only session journal, replayed at startup.")
def serve(kb_file: Path | None, host: str, port: int, journal_path: Path | None):
    """Serve the HTTP API (and the UI bundle, when present)."""
    if kb_file is None:
        raise click.UsageError("provide a KB file or set FUZZYLATTICE_KB")
    kb = _load_kb(kb_file)  # invalid KB exits before any socket is bound
    checksum = hashlib.sha256(kb_file.read_bytes()).hexdigest()
    try:
        max_sessions = int(os.environ.get("FUZZYLATTICE_MAX_SESSIONS", "1000"))
    except ValueError:
        raise click.ClickException("FUZZYLATTICE_MAX_SESSIONS must be an integer")
    ui_dir = os.environ.get("FUZZYLATTICE_UI_DIR", "frontend/dist")
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.bind((host, port))
    except OSError as exc:
        raise click.ClickException(f"cannot bind {host}:{port}: {exc}")
    finally:
        probe.close()

    import uvicorn

    from .service import create_app

    app = create_app(
        kb,
        checksum=checksum,
        max_sessions=max_sessions,
        journal_path=journal_path,
        ui_dir=ui_dir if Path(ui_dir).is_dir() else None,
    )
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
