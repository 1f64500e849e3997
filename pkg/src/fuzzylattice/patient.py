"""Patient-record files: phase-indexed crisp attribute values."""

from __future__ import annotations

from pathlib import Path

import yaml

from .errors import PatientFileError

PhaseInputs = list[tuple[int, dict[str, float]]]


def parse_patient_record(text: str, source: str = "<patient>") -> PhaseInputs:
    """Parse a patient record into ordered (phase, inputs) pairs.

    Expected shape:

        phases:
          - phase: 1
            inputs: {a1: 4.8, a4: 5}

    Value validity against the knowledge base (universes, phase membership)
    is checked downstream by the engine, not here.
    """
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise PatientFileError(f"{source}: not valid YAML: {exc}") from exc
    if not isinstance(doc, dict) or not isinstance(doc.get("phases"), list):
        raise PatientFileError(f"{source}: expected a mapping with a 'phases' list")
    phases: PhaseInputs = []
    for i, raw in enumerate(doc["phases"]):
        loc = f"{source}: phases[{i}]"
        if not isinstance(raw, dict):
            raise PatientFileError(f"{loc}: expected a mapping")
        index = raw.get("phase")
        if isinstance(index, bool) or not isinstance(index, int):
            raise PatientFileError(f"{loc}: 'phase' must be an integer index")
        inputs = raw.get("inputs")
        if not isinstance(inputs, dict) or not inputs:
            raise PatientFileError(f"{loc}: 'inputs' must be a nonempty mapping")
        values: dict[str, float] = {}
        for attr, value in inputs.items():
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise PatientFileError(
                    f"{loc}: value for '{attr}' must be a number, got "
                    f"{type(value).__name__}"
                )
            values[str(attr)] = float(value)
        phases.append((index, values))
    if not phases:
        raise PatientFileError(f"{source}: 'phases' list is empty")
    return phases


def load_patient_record(path: str | Path) -> PhaseInputs:
    path = Path(path)
    return parse_patient_record(path.read_text(encoding="utf-8"), source=str(path))
