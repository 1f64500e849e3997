"""Phased consultation engine.

Selects applicable rules from the lattice for the attributes a patient
actually provided, fires them (Mamdani min), aggregates per disease
(clip + max), defuzzifies by centroid, labels the crisp chance, and refines
the probable-disease list across phases. Pure with respect to the compiled
knowledge base; consultations can run concurrently against one KB.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import (
    InvalidAxesError,
    NoInputsError,
    PhaseOrderError,
    UnknownAttributeError,
    UnknownDiseaseError,
)
from .fuzzy import (
    DEFAULT_RESOLUTION,
    TermActivation,
    clip_and_aggregate,
    defuzz_centroid,
    fuzzify,
    label_crisp,
)
from .kb import AttributeSubset, CompiledKB, PhaseSpec, Rule

SUBSET_CLOSURE = "subset-closure"
STRICT_LEVEL = "strict-level"
MODES = (SUBSET_CLOSURE, STRICT_LEVEL)

DEFAULT_THRESHOLD = 10.0  # upper bound of the "No" output range

PatientInputs = Mapping[str, float]


@dataclass(frozen=True)
class RuleActivation:
    """One fired rule: strength is the minimum of the clause degrees."""

    rule: Rule
    strength: float
    clause_degrees: tuple[tuple[str, float], ...]


@dataclass(frozen=True)
class DiseaseAssessment:
    """Per-disease outcome of one phase.

    `evaluated` records whether any selected rule names the disease at all;
    `no_evidence` whether none of those rules fired above zero. A
    no-evidence disease reports crisp 0 and the label at the universe floor
    rather than a fabricated mid-scale centroid.
    """

    disease: str
    crisp_chance: float
    label: str
    activations: tuple[RuleActivation, ...]
    no_evidence: bool
    evaluated: bool


@dataclass(frozen=True)
class PhaseResult:
    phase: int
    mode: str
    provided: tuple[str, ...]
    assessments: tuple[DiseaseAssessment, ...]

    def assessment(self, disease: str) -> DiseaseAssessment:
        for a in self.assessments:
            if a.disease == disease:
                return a
        raise UnknownDiseaseError(disease)


@dataclass(frozen=True)
class ProbableDisease:
    disease: str
    crisp: float
    label: str


@dataclass(frozen=True)
class ConsultationReport:
    phases: tuple[PhaseResult, ...]
    refined: tuple[tuple[ProbableDisease, ...], ...]  # after each phase
    final: tuple[ProbableDisease, ...]
    threshold: float
    mode: str


@dataclass(frozen=True)
class ExplanationRow:
    """One line of the rule-viewer: a fired rule with its clause degrees."""

    disease: str
    strength: float
    antecedent: tuple[tuple[str, str], ...]
    disease_term: str
    reliability: float
    clause_degrees: tuple[tuple[str, float], ...]
    origin_subset: tuple[str, ...]
    origin_mask: int
    origin_class: int


@dataclass(frozen=True)
class SurfaceGrid:
    """Crisp chances for one disease over a swept attribute pair.

    cells[i][j] is the chance at (y_values[i], x_values[j]); None marks a
    cell where no rule fired.
    """

    disease: str
    attr_x: str
    attr_y: str
    x_values: tuple[float, ...]
    y_values: tuple[float, ...]
    cells: tuple[tuple[float | None, ...], ...]
    mode: str


def _check_mode(mode: str) -> str:
    if mode not in MODES:
        raise ValueError(f"unknown matching mode {mode!r} (expected one of {MODES})")
    return mode


def select_rules(
    kb: CompiledKB,
    provided: AttributeSubset | Sequence[str],
    mode: str = SUBSET_CLOSURE,
) -> tuple[Rule, ...]:
    """Rules applicable to the provided attribute subset.

    strict-level: only the node whose subset equals `provided` (the p-th
    level search). subset-closure: every node whose subset is a nonempty
    subset of `provided`, in mask order.
    """
    _check_mode(mode)
    subset = (
        provided
        if isinstance(provided, AttributeSubset)
        else kb.system.subset(provided)
    )
    if subset.mask == 0:
        raise NoInputsError("no attributes provided; nothing to match")
    if mode == STRICT_LEVEL:
        return kb.lattice.node(subset).rules
    submasks = []
    s = subset.mask
    while s:
        submasks.append(s)
        s = (s - 1) & subset.mask
    rules: list[Rule] = []
    for mask in sorted(submasks):
        rules.extend(kb.lattice.node(mask).rules)
    return tuple(rules)


def _fire(
    rules: Sequence[Rule], fuzzified: Mapping[str, Mapping[str, float]]
) -> list[RuleActivation]:
    fired = []
    for rule in rules:
        degrees = tuple(
            (attr, fuzzified[attr][term]) for attr, term in rule.antecedent
        )
        strength = min(d for _, d in degrees)
        fired.append(RuleActivation(rule, strength, degrees))
    return fired


def _assess(
    kb: CompiledKB,
    disease: str,
    fired: Sequence[RuleActivation],
    resolution: int,
    weighted: bool,
) -> DiseaseAssessment:
    output = kb.system.output
    levels: dict[str, float] = {}
    positive = []
    for act in fired:
        if act.strength <= 0.0:
            continue
        positive.append(act)
        level = act.strength * act.rule.reliability if weighted else act.strength
        term = act.rule.disease_term
        if level > levels.get(term, 0.0):
            levels[term] = level
    if not any(levels.values()):
        lo, hi = output.universe
        return DiseaseAssessment(
            disease=disease,
            crisp_chance=0.0,
            label=label_crisp(output, min(max(0.0, lo), hi)),
            activations=(),
            no_evidence=True,
            evaluated=bool(fired),
        )
    agg = clip_and_aggregate(
        output,
        [TermActivation(t, lv) for t, lv in levels.items()],
        resolution,
    )
    crisp = defuzz_centroid(agg)
    positive.sort(key=lambda a: (-a.strength, a.rule.origin_mask, a.rule.origin_class))
    return DiseaseAssessment(
        disease=disease,
        crisp_chance=crisp,
        label=label_crisp(output, crisp),
        activations=tuple(positive),
        no_evidence=False,
        evaluated=True,
    )


def infer_phase(
    kb: CompiledKB,
    phase: PhaseSpec | int,
    inputs: PatientInputs,
    mode: str = SUBSET_CLOSURE,
    resolution: int = DEFAULT_RESOLUTION,
    weighted: bool = False,
) -> PhaseResult:
    """Assess every declared disease from one phase's crisp inputs.

    Inputs must be a nonempty subset of the phase's attributes, each value
    inside its variable's universe. `weighted` scales each rule's clip level
    by its reliability (experimental; activation strengths stay the raw
    clause minima).
    """
    _check_mode(mode)
    spec = kb.system.phase(phase) if isinstance(phase, int) else phase
    if not inputs:
        raise NoInputsError(f"phase {spec.index} received no inputs")
    for attr in inputs:
        if attr not in kb.system.variables:
            raise UnknownAttributeError(attr)
        if attr not in spec.attributes:
            raise UnknownAttributeError(
                attr,
                f"is not part of phase {spec.index} "
                f"(attributes: {', '.join(spec.attributes)})",
            )
    fuzzified = {
        attr: fuzzify(kb.system.variable(attr), float(inputs[attr]))
        for attr in inputs
    }
    provided = tuple(a for a in kb.system.attributes if a in inputs)
    rules = select_rules(kb, provided, mode)
    by_disease: dict[str, list[RuleActivation]] = {d: [] for d in kb.system.diseases}
    for act in _fire(rules, fuzzified):
        by_disease[act.rule.disease].append(act)
    assessments = tuple(
        _assess(kb, d, by_disease[d], resolution, weighted)
        for d in kb.system.diseases
    )
    return PhaseResult(
        phase=spec.index, mode=mode, provided=provided, assessments=assessments
    )


def refine_list(
    previous: tuple[ProbableDisease, ...] | None,
    result: PhaseResult,
    threshold: float = DEFAULT_THRESHOLD,
) -> tuple[ProbableDisease, ...]:
    """Refine the probable-disease list with one phase's assessments.

    First phase (previous is None): keep every disease at or above the
    threshold. Later phases only narrow: a reassessed disease below the
    threshold is dropped, a disease the phase never evaluated carries
    forward unchanged, and kept diseases adopt their newest crisp value.
    Threshold validity against the output universe is the caller's job.
    """
    order = {a.disease: i for i, a in enumerate(result.assessments)}
    if previous is None:
        kept = [
            ProbableDisease(a.disease, a.crisp_chance, a.label)
            for a in result.assessments
            if a.crisp_chance >= threshold
        ]
    else:
        by_disease = {a.disease: a for a in result.assessments}
        kept = []
        for entry in previous:
            a = by_disease.get(entry.disease)
            if a is None or not a.evaluated:
                kept.append(entry)
            elif a.crisp_chance >= threshold:
                kept.append(ProbableDisease(a.disease, a.crisp_chance, a.label))
    kept.sort(key=lambda p: (-p.crisp, order.get(p.disease, len(order))))
    return tuple(kept)


def run_consultation(
    kb: CompiledKB,
    phase_inputs: Sequence[tuple[int, PatientInputs]],
    mode: str = SUBSET_CLOSURE,
    threshold: float = DEFAULT_THRESHOLD,
    resolution: int = DEFAULT_RESOLUTION,
    weighted: bool = False,
) -> ConsultationReport:
    """Chain phases in index order, refining the probable list after each."""
    _check_mode(mode)
    if not phase_inputs:
        raise NoInputsError("consultation received no phases")
    lo, hi = kb.system.output.universe
    if not lo <= threshold <= hi:
        raise ValueError(
            f"threshold {threshold} outside the output universe [{lo}, {hi}]"
        )
    first_index = kb.system.phases[0].index
    results: list[PhaseResult] = []
    refined_history: list[tuple[ProbableDisease, ...]] = []
    refined: tuple[ProbableDisease, ...] | None = None
    last = None
    for index, inputs in phase_inputs:
        kb.system.phase(index)  # raises UnknownPhaseError
        if last is None and index != first_index:
            raise PhaseOrderError(
                f"consultation must start at phase {first_index}, got {index}"
            )
        if last is not None and index <= last:
            raise PhaseOrderError(
                f"phase {index} submitted after phase {last}; indices must "
                "strictly increase"
            )
        result = infer_phase(
            kb, index, inputs, mode, resolution=resolution, weighted=weighted
        )
        refined = refine_list(refined, result, threshold)
        results.append(result)
        refined_history.append(refined)
        last = index
    return ConsultationReport(
        phases=tuple(results),
        refined=tuple(refined_history),
        final=refined if refined is not None else (),
        threshold=threshold,
        mode=mode,
    )


def explain(result: PhaseResult, disease: str | None = None) -> tuple[ExplanationRow, ...]:
    """Flatten a phase's activations into rule-viewer rows.

    Rows are sorted by strength descending, then rule origin (subset mask,
    class index), then disease declaration order; repeated calls are
    byte-identical.
    """
    if disease is not None:
        result.assessment(disease)  # raises UnknownDiseaseError
    order = {a.disease: i for i, a in enumerate(result.assessments)}
    rows = []
    for assessment in result.assessments:
        if disease is not None and assessment.disease != disease:
            continue
        for act in assessment.activations:
            rows.append(
                ExplanationRow(
                    disease=assessment.disease,
                    strength=act.strength,
                    antecedent=act.rule.antecedent,
                    disease_term=act.rule.disease_term,
                    reliability=act.rule.reliability,
                    clause_degrees=act.clause_degrees,
                    origin_subset=tuple(a for a, _ in act.rule.antecedent),
                    origin_mask=act.rule.origin_mask,
                    origin_class=act.rule.origin_class,
                )
            )
    rows.sort(
        key=lambda r: (-r.strength, r.origin_mask, r.origin_class, order[r.disease])
    )
    return tuple(rows)


def surface_grid(
    kb: CompiledKB,
    disease: str,
    attr_x: str,
    attr_y: str,
    fixed: PatientInputs | None = None,
    resolution: int = 21,
    mode: str = SUBSET_CLOSURE,
) -> SurfaceGrid:
    """Sweep two attributes over their universes and chart one disease.

    The remaining attributes are held at `fixed` values or simply omitted
    (subset-closure matching then works on whatever is present). Cells
    where no rule fires are None, never a numeric zero.
    """
    _check_mode(mode)
    if attr_x == attr_y:
        raise InvalidAxesError(f"axes must differ, got '{attr_x}' twice")
    if resolution < 2:
        raise ValueError(f"resolution must be >= 2, got {resolution}")
    if disease not in kb.system.diseases:
        raise UnknownDiseaseError(disease)
    fixed = dict(fixed or {})
    for attr in (attr_x, attr_y, *fixed):
        if attr not in kb.system.variables:
            raise UnknownAttributeError(attr)
    if attr_x in fixed or attr_y in fixed:
        raise InvalidAxesError("a swept attribute cannot also be fixed")
    phase = next(
        (p for p in kb.system.phases if attr_x in p.attributes), None
    )
    if phase is None or attr_y not in phase.attributes or any(
        a not in phase.attributes for a in fixed
    ):
        raise InvalidAxesError(
            "swept and fixed attributes must all belong to one phase"
        )
    for attr, value in fixed.items():
        kb.system.variable(attr).check_in_universe(float(value))

    def axis(attr: str) -> tuple[float, ...]:
        lo, hi = kb.system.variable(attr).universe
        step = (hi - lo) / (resolution - 1)
        return tuple(lo + i * step for i in range(resolution))

    xs, ys = axis(attr_x), axis(attr_y)
    provided = tuple(
        a for a in kb.system.attributes if a in {attr_x, attr_y, *fixed}
    )
    rules = [
        r for r in select_rules(kb, provided, mode) if r.disease == disease
    ]
    var_x, var_y = kb.system.variable(attr_x), kb.system.variable(attr_y)
    fixed_fuzz = {
        attr: fuzzify(kb.system.variable(attr), float(v)) for attr, v in fixed.items()
    }
    cells = []
    for yv in ys:
        row: list[float | None] = []
        fy = fuzzify(var_y, yv)
        for xv in xs:
            fuzzified = {attr_x: fuzzify(var_x, xv), attr_y: fy, **fixed_fuzz}
            assessment = _assess(
                kb, disease, _fire(rules, fuzzified), DEFAULT_RESOLUTION, False
            )
            row.append(None if assessment.no_evidence else assessment.crisp_chance)
        cells.append(tuple(row))
    return SurfaceGrid(
        disease=disease,
        attr_x=attr_x,
        attr_y=attr_y,
        x_values=xs,
        y_values=ys,
        cells=tuple(cells),
        mode=mode,
    )
