"""Knowledge-base construction.

Parses a fuzzy information system from its YAML document, materializes the
power-set lattice of attribute subsets with the elementary sets (equivalence
classes of the indiscernibility relation) at every node, and generates the
reliability-resolved production rules. The compiled artifact is deterministic:
rows keep file order, subsets are ordered by bitmask, classes by first member.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping

import yaml

from .errors import (
    CapacityExceededError,
    EmptySystemError,
    InconsistentKnowledgeError,
    KBFormatError,
    UnknownAttributeError,
    UnknownPhaseError,
)
from .fuzzy import KIND_INPUT, KIND_OUTPUT, LinguisticVariable, term_from_range

KB_FORMAT_VERSION = 1
DEFAULT_NODE_CAP = 20  # 2^n lattice nodes are materialized eagerly

UNRESOLVABLE = "unresolvable"


@dataclass(frozen=True)
class InfoRow:
    """One information-system tuple: (disease, term), attribute terms, r_s."""

    disease: str
    disease_term: str
    attr_terms: Mapping[str, str]
    reliability: float

    def __post_init__(self):
        if not 0.0 <= self.reliability <= 1.0:
            raise ValueError(
                f"reliability must be in [0, 1], got {self.reliability}"
            )


@dataclass(frozen=True)
class PhaseSpec:
    """A consultation phase and the attribute subset it interrogates."""

    index: int
    name: str
    attributes: tuple[str, ...]


@dataclass(frozen=True)
class AttributeSubset:
    """Subset of the declared attributes, canonically an n-bit mask.

    Bit i corresponds to the i-th declared attribute. Meet is intersection,
    join is union; together with inclusion these make the full power set a
    lattice.
    """

    mask: int
    all_attributes: tuple[str, ...]

    @classmethod
    def from_names(cls, names: Iterable[str], all_attributes: tuple[str, ...]) -> "AttributeSubset":
        index = {a: i for i, a in enumerate(all_attributes)}
        mask = 0
        for name in names:
            if name not in index:
                raise UnknownAttributeError(name)
            mask |= 1 << index[name]
        return cls(mask, all_attributes)

    @property
    def members(self) -> tuple[str, ...]:
        return tuple(
            a for i, a in enumerate(self.all_attributes) if self.mask >> i & 1
        )

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __contains__(self, name: str) -> bool:
        return name in self.members

    def __le__(self, other: "AttributeSubset") -> bool:
        return self.mask & ~other.mask == 0

    def meet(self, other: "AttributeSubset") -> "AttributeSubset":
        return AttributeSubset(self.mask & other.mask, self.all_attributes)

    def join(self, other: "AttributeSubset") -> "AttributeSubset":
        return AttributeSubset(self.mask | other.mask, self.all_attributes)


@dataclass(frozen=True)
class ElementarySet:
    """An equivalence class of rows under indiscernibility on one subset."""

    defining_values: tuple[tuple[str, str], ...]  # (attribute, term) pairs
    members: tuple[tuple[str, str, float], ...]  # (disease, term, reliability)
    row_indices: tuple[int, ...]


@dataclass(frozen=True)
class Rule:
    """Conjunctive production rule with its origin in the lattice."""

    antecedent: tuple[tuple[str, str], ...]
    disease: str
    disease_term: str
    reliability: float
    origin_mask: int
    origin_class: int

    @property
    def consequent(self) -> tuple[str, str]:
        return (self.disease, self.disease_term)


@dataclass(frozen=True)
class LatticeNode:
    subset: AttributeSubset
    classes: tuple[ElementarySet, ...]
    rules: tuple[Rule, ...] = ()


@dataclass(frozen=True)
class Lattice:
    """All 2^n attribute subsets, indexed by mask, ordered by inclusion."""

    attributes: tuple[str, ...]
    nodes: tuple[LatticeNode, ...]

    def node(self, subset: AttributeSubset | int) -> LatticeNode:
        mask = subset.mask if isinstance(subset, AttributeSubset) else subset
        return self.nodes[mask]

    def level(self, k: int) -> tuple[LatticeNode, ...]:
        return tuple(n for n in self.nodes if len(n.subset) == k)


@dataclass(frozen=True)
class Conflict:
    """Same disease, distinct terms inside one elementary set."""

    subset: tuple[str, ...]
    class_index: int
    antecedent: tuple[tuple[str, str], ...]
    disease: str
    candidates: tuple[tuple[str, float], ...]  # (term, reliability), r_s desc
    kept: str | None  # None when the top reliabilities tie

    @property
    def resolution(self) -> str:
        return self.kept if self.kept is not None else UNRESOLVABLE


@dataclass(frozen=True)
class ConflictReport:
    entries: tuple[Conflict, ...] = ()

    def __bool__(self) -> bool:
        return bool(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def resolved(self) -> tuple[Conflict, ...]:
        return tuple(e for e in self.entries if e.kept is not None)

    @property
    def unresolvable(self) -> tuple[Conflict, ...]:
        return tuple(e for e in self.entries if e.kept is None)


class ConflictPolicy(Enum):
    """Tie handling verbosity. Both end in a failed build on a tie."""

    STRICT = "strict"  # fail at the first unresolvable conflict
    LENIENT = "lenient"  # gather the full report, then fail


@dataclass(frozen=True)
class InformationSystem:
    """Validated fuzzy information system plus its variable declarations."""

    attributes: tuple[str, ...]
    variables: Mapping[str, LinguisticVariable]
    output: LinguisticVariable
    diseases: tuple[str, ...]
    rows: tuple[InfoRow, ...]
    phases: tuple[PhaseSpec, ...]
    attribute_labels: Mapping[str, str] = field(default_factory=dict)
    disease_labels: Mapping[str, str] = field(default_factory=dict)
    format_version: int = KB_FORMAT_VERSION

    def variable(self, attribute: str) -> LinguisticVariable:
        var = self.variables.get(attribute)
        if var is None:
            raise UnknownAttributeError(attribute)
        return var

    def subset(self, names: Iterable[str]) -> AttributeSubset:
        return AttributeSubset.from_names(names, self.attributes)

    def phase(self, index: int) -> PhaseSpec:
        for p in self.phases:
            if p.index == index:
                return p
        raise UnknownPhaseError(index)


@dataclass(frozen=True)
class KBStats:
    format_version: int
    attribute_count: int
    disease_count: int
    phase_count: int
    node_count: int
    nodes_per_level: tuple[int, ...]
    rules_per_level: tuple[int, ...]
    rule_count: int
    conflicts_resolved: int


@dataclass(frozen=True)
class CompiledKB:
    system: InformationSystem
    lattice: Lattice
    conflicts: ConflictReport
    stats: KBStats

    def node_for(self, names: Iterable[str]) -> LatticeNode:
        return self.lattice.node(self.system.subset(names))


# ---------------------------------------------------------------------------
# parsing


def _require(mapping, key, kind, location, kind_name=None):
    if not isinstance(mapping, dict):
        raise KBFormatError(f"expected a mapping, got {type(mapping).__name__}", location)
    if key not in mapping:
        raise KBFormatError(f"missing required key '{key}'", location)
    value = mapping[key]
    if kind is object:
        return value
    if not isinstance(value, kind) or (isinstance(value, bool) and kind is not bool):
        expected = kind_name or getattr(kind, "__name__", str(kind))
        raise KBFormatError(
            f"key '{key}' must be {expected}, got {type(value).__name__}",
            location,
        )
    return value


def _term_name(value, location):
    if isinstance(value, bool):
        # PyYAML reads an unquoted No/Yes/On/Off as a boolean; this is the
        # single most common authoring mistake with a term literally named
        # "No", so point straight at it.
        raise KBFormatError(
            "got a YAML boolean where a term name belongs; quote the value "
            '(e.g. "No")',
            location,
        )
    if not isinstance(value, str):
        raise KBFormatError(
            f"term name must be a string, got {type(value).__name__}", location
        )
    return value


def _number(value, location, label="value"):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise KBFormatError(
            f"{label} must be a number, got {type(value).__name__}", location
        )
    return float(value)


def _parse_variable(doc, location, kind) -> LinguisticVariable:
    name = _require(doc, "name", str, location)
    universe = _require(doc, "universe", list, location, "a [lo, hi] pair")
    if len(universe) != 2:
        raise KBFormatError("universe must be a [lo, hi] pair", f"{location}.universe")
    lo = _number(universe[0], f"{location}.universe")
    hi = _number(universe[1], f"{location}.universe")
    raw_terms = _require(doc, "terms", list, location)
    if not raw_terms:
        raise KBFormatError("at least one term is required", f"{location}.terms")
    terms = []
    for i, raw in enumerate(raw_terms):
        tloc = f"{location}.terms[{i}]"
        tname = _term_name(_require(raw, "name", object, tloc), f"{tloc}.name")
        rng = _require(raw, "range", list, tloc, "a [l, u] pair")
        if len(rng) != 2:
            raise KBFormatError("range must be a [l, u] pair", f"{tloc}.range")
        l = _number(rng[0], f"{tloc}.range")
        u = _number(rng[1], f"{tloc}.range")
        try:
            terms.append(term_from_range(tname, (lo, hi), (l, u)))
        except ValueError as exc:
            raise KBFormatError(str(exc), f"{tloc}.range") from exc
    try:
        return LinguisticVariable(name, (lo, hi), tuple(terms), kind)
    except ValueError as exc:
        raise KBFormatError(str(exc), location) from exc


def parse_information_system(text: str, source: str = "<kb>") -> InformationSystem:
    """Parse and validate a knowledge-base document.

    Raises KBFormatError with an element location for every violation the
    file format can express: unknown terms, out-of-range reliabilities,
    missing or surplus attribute columns, duplicate (disease, term) pairs.
    """
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise KBFormatError(f"not valid YAML: {exc}", source) from exc
    if not isinstance(doc, dict):
        raise KBFormatError("top level must be a mapping", source)

    version = doc.get("format")
    if version != KB_FORMAT_VERSION:
        raise KBFormatError(
            f"unsupported format version {version!r} (expected {KB_FORMAT_VERSION})",
            "format",
        )

    raw_attrs = _require(doc, "attributes", list, source)
    attributes: list[str] = []
    variables: dict[str, LinguisticVariable] = {}
    attribute_labels: dict[str, str] = {}
    for i, raw in enumerate(raw_attrs):
        loc = f"attributes[{i}]"
        var = _parse_variable(raw, loc, KIND_INPUT)
        if var.name in variables:
            raise KBFormatError(f"duplicate attribute '{var.name}'", loc)
        attributes.append(var.name)
        variables[var.name] = var
        if isinstance(raw, dict) and isinstance(raw.get("label"), str):
            attribute_labels[var.name] = raw["label"]

    output = _parse_variable(_require(doc, "output", dict, source), "output", KIND_OUTPUT)

    raw_phases = _require(doc, "phases", list, source)
    if not raw_phases:
        raise KBFormatError("at least one phase is required", "phases")
    if len(raw_phases) > 3:
        raise KBFormatError("at most three phases are supported", "phases")
    phases: list[PhaseSpec] = []
    claimed: dict[str, int] = {}
    for i, raw in enumerate(raw_phases):
        loc = f"phases[{i}]"
        index = _require(raw, "index", int, loc)
        if index != i + 1:
            raise KBFormatError(
                f"phase indices must run 1..{len(raw_phases)} in order, got {index}",
                loc,
            )
        name = _require(raw, "name", str, loc)
        members = _require(raw, "attributes", list, loc)
        for a in members:
            if a not in variables:
                raise KBFormatError(f"unknown attribute '{a}'", f"{loc}.attributes")
            if a in claimed:
                raise KBFormatError(
                    f"attribute '{a}' already belongs to phase {claimed[a]}; "
                    "phase attribute sets must be disjoint",
                    f"{loc}.attributes",
                )
            claimed[a] = index
        phases.append(PhaseSpec(index, name, tuple(members)))

    raw_rows = _require(doc, "rows", list, source)
    if not raw_rows:
        raise EmptySystemError("the information system declares no rows", "rows")
    rows: list[InfoRow] = []
    diseases: list[str] = []
    seen_pairs: dict[tuple[str, str], int] = {}
    for i, raw in enumerate(raw_rows):
        loc = f"rows[{i}]"
        disease = _require(raw, "disease", str, loc)
        chance = _term_name(_require(raw, "chance", object, loc), f"{loc}.chance")
        if chance not in output.term_names:
            raise KBFormatError(
                f"unknown output term '{chance}' (terms: {', '.join(output.term_names)})",
                f"{loc}.chance",
            )
        reliability = _number(_require(raw, "reliability", object, loc), f"{loc}.reliability", "reliability")
        if not 0.0 <= reliability <= 1.0:
            raise KBFormatError(
                f"reliability must be in [0, 1], got {reliability}",
                f"{loc}.reliability",
            )
        values = _require(raw, "values", dict, loc)
        attr_terms: dict[str, str] = {}
        for attr in attributes:
            if attr not in values:
                raise KBFormatError(f"missing attribute column '{attr}'", f"{loc}.values")
            term = _term_name(values[attr], f"{loc}.values.{attr}")
            var = variables[attr]
            if term not in var.term_names:
                raise KBFormatError(
                    f"unknown term '{term}' for attribute '{attr}' "
                    f"(terms: {', '.join(var.term_names)})",
                    f"{loc}.values.{attr}",
                )
            attr_terms[attr] = term
        for attr in values:
            if attr not in variables:
                raise KBFormatError(f"unknown attribute '{attr}'", f"{loc}.values")
        pair = (disease, chance)
        if pair in seen_pairs:
            raise KBFormatError(
                f"duplicate (disease, term) pair ({disease}, {chance}); "
                f"first declared at rows[{seen_pairs[pair]}]",
                loc,
            )
        seen_pairs[pair] = i
        if disease not in diseases:
            diseases.append(disease)
        rows.append(InfoRow(disease, chance, attr_terms, reliability))

    disease_labels: dict[str, str] = {}
    raw_labels = doc.get("diseases")
    if raw_labels is not None:
        if not isinstance(raw_labels, dict):
            raise KBFormatError("diseases must map identifier to label", "diseases")
        for d, label in raw_labels.items():
            if d not in diseases:
                raise KBFormatError(f"label for undeclared disease '{d}'", "diseases")
            disease_labels[d] = str(label)

    return InformationSystem(
        attributes=tuple(attributes),
        variables=variables,
        output=output,
        diseases=tuple(diseases),
        rows=tuple(rows),
        phases=tuple(phases),
        attribute_labels=attribute_labels,
        disease_labels=disease_labels,
    )


def load_information_system(path: str | Path) -> InformationSystem:
    path = Path(path)
    return parse_information_system(path.read_text(encoding="utf-8"), source=str(path))


# ---------------------------------------------------------------------------
# indiscernibility and the lattice


def indiscernible(row_i: InfoRow, row_j: InfoRow, subset: AttributeSubset) -> bool:
    """True iff the two rows carry the same term on every subset attribute."""
    return all(row_i.attr_terms[a] == row_j.attr_terms[a] for a in subset.members)


def equivalence_classes(
    sys: InformationSystem, subset: AttributeSubset
) -> tuple[ElementarySet, ...]:
    """Partition the rows under indiscernibility on `subset`.

    Classes are ordered by their first row index; defining values are read
    off any member (all members agree by construction).
    """
    members = subset.members
    groups: dict[tuple[str, ...], list[int]] = {}
    for idx, row in enumerate(sys.rows):
        key = tuple(row.attr_terms[a] for a in members)
        groups.setdefault(key, []).append(idx)
    classes = []
    for key, indices in groups.items():  # insertion order = first-row order
        classes.append(
            ElementarySet(
                defining_values=tuple(zip(members, key)),
                members=tuple(
                    (sys.rows[i].disease, sys.rows[i].disease_term, sys.rows[i].reliability)
                    for i in indices
                ),
                row_indices=tuple(indices),
            )
        )
    return tuple(classes)


def build_lattice(sys: InformationSystem, node_cap: int = DEFAULT_NODE_CAP) -> Lattice:
    """Materialize all 2^n subset nodes with their elementary sets."""
    n = len(sys.attributes)
    if n > node_cap:
        raise CapacityExceededError(
            f"{n} attributes would materialize 2^{n} lattice nodes "
            f"(cap {node_cap}); split the attributes into smaller per-phase "
            "knowledge bases or raise the cap"
        )
    nodes = []
    for mask in range(1 << n):
        subset = AttributeSubset(mask, sys.attributes)
        nodes.append(LatticeNode(subset=subset, classes=equivalence_classes(sys, subset)))
    return Lattice(attributes=sys.attributes, nodes=tuple(nodes))


# ---------------------------------------------------------------------------
# rule generation


def generate_rules(
    node: LatticeNode, policy: ConflictPolicy = ConflictPolicy.STRICT
) -> tuple[tuple[Rule, ...], tuple[Conflict, ...]]:
    """Produce one rule per elementary-set member, resolving disease conflicts.

    Inside a class, the same disease with distinct terms is resolved in
    favor of the greater reliability; an exact tie is unresolvable and, under
    the strict policy, raises immediately. The empty subset yields no rules
    (an empty antecedent would fire unconditionally).
    """
    if node.subset.mask == 0:
        return (), ()
    rules: list[Rule] = []
    conflicts: list[Conflict] = []
    for class_idx, cls in enumerate(node.classes):
        by_disease: dict[str, list[int]] = {}
        for pos, (disease, _term, _rs) in enumerate(cls.members):
            by_disease.setdefault(disease, []).append(pos)
        dropped: set[int] = set()
        for disease, positions in by_disease.items():
            if len(positions) < 2:
                continue
            ranked = sorted(positions, key=lambda p: -cls.members[p][2])
            top = cls.members[ranked[0]]
            tie = cls.members[ranked[1]][2] == top[2]
            kept = None if tie else top[1]
            conflict = Conflict(
                subset=node.subset.members,
                class_index=class_idx,
                antecedent=cls.defining_values,
                disease=disease,
                candidates=tuple((cls.members[p][1], cls.members[p][2]) for p in ranked),
                kept=kept,
            )
            conflicts.append(conflict)
            if tie:
                if policy is ConflictPolicy.STRICT:
                    raise InconsistentKnowledgeError(
                        f"unresolvable conflict at node {{{', '.join(node.subset.members)}}} "
                        f"class {class_idx}: disease '{disease}' carries terms "
                        f"{[t for t, _ in conflict.candidates]} with equal max "
                        f"reliability {top[2]}",
                        report=ConflictReport(tuple(conflicts)),
                    )
                dropped.update(positions)
            else:
                dropped.update(p for p in positions if p != ranked[0])
        for pos, (disease, term, reliability) in enumerate(cls.members):
            if pos in dropped:
                continue
            rules.append(
                Rule(
                    antecedent=cls.defining_values,
                    disease=disease,
                    disease_term=term,
                    reliability=reliability,
                    origin_mask=node.subset.mask,
                    origin_class=class_idx,
                )
            )
    return tuple(rules), tuple(conflicts)


def compile_kb(
    sys: InformationSystem,
    policy: ConflictPolicy = ConflictPolicy.STRICT,
    node_cap: int = DEFAULT_NODE_CAP,
) -> CompiledKB:
    """Build the full knowledge base: lattice, rules, conflict report, stats."""
    lattice = build_lattice(sys, node_cap=node_cap)
    nodes: list[LatticeNode] = []
    entries: list[Conflict] = []
    for node in lattice.nodes:
        rules, conflicts = generate_rules(node, policy)
        nodes.append(replace(node, rules=rules))
        entries.extend(conflicts)
    report = ConflictReport(tuple(entries))
    if report.unresolvable:
        first = report.unresolvable[0]
        raise InconsistentKnowledgeError(
            f"{len(report.unresolvable)} unresolvable conflict(s); first at node "
            f"{{{', '.join(first.subset)}}} class {first.class_index}, disease "
            f"'{first.disease}'",
            report=report,
        )
    n = len(sys.attributes)
    nodes_per_level = [0] * (n + 1)
    rules_per_level = [0] * (n + 1)
    for node in nodes:
        k = len(node.subset)
        nodes_per_level[k] += 1
        rules_per_level[k] += len(node.rules)
    stats = KBStats(
        format_version=sys.format_version,
        attribute_count=n,
        disease_count=len(sys.diseases),
        phase_count=len(sys.phases),
        node_count=len(nodes),
        nodes_per_level=tuple(nodes_per_level),
        rules_per_level=tuple(rules_per_level),
        rule_count=sum(rules_per_level),
        conflicts_resolved=len(report.resolved),
    )
    return CompiledKB(
        system=sys,
        lattice=Lattice(attributes=sys.attributes, nodes=tuple(nodes)),
        conflicts=report,
        stats=stats,
    )


def load_kb(path: str | Path, policy: ConflictPolicy = ConflictPolicy.STRICT) -> CompiledKB:
    """Parse and compile a knowledge-base file in one step."""
    return compile_kb(load_information_system(path), policy=policy)


# ---------------------------------------------------------------------------
# compiled-artifact serialization

ARTIFACT_VERSION = 1


def _variable_dict(var: LinguisticVariable) -> dict:
    return {
        "name": var.name,
        "universe": [var.universe[0], var.universe[1]],
        "terms": [
            {"name": t.name, "vertices": [t.mf.a, t.mf.b, t.mf.c]} for t in var.terms
        ],
    }


def _variable_from_dict(doc: dict, kind: str) -> LinguisticVariable:
    from .fuzzy import LinguisticTerm, TriangularMF

    terms = tuple(
        LinguisticTerm(t["name"], TriangularMF(*t["vertices"])) for t in doc["terms"]
    )
    return LinguisticVariable(doc["name"], tuple(doc["universe"]), terms, kind)


def dump_compiled(kb: CompiledKB) -> str:
    """Serialize the compiled artifact to canonical JSON text."""
    sys = kb.system
    doc = {
        "artifact": "fuzzylattice-kb",
        "artifact_version": ARTIFACT_VERSION,
        "format": sys.format_version,
        "attributes": [_variable_dict(sys.variables[a]) for a in sys.attributes],
        "attribute_labels": dict(sys.attribute_labels),
        "output": _variable_dict(sys.output),
        "diseases": list(sys.diseases),
        "disease_labels": dict(sys.disease_labels),
        "phases": [
            {"index": p.index, "name": p.name, "attributes": list(p.attributes)}
            for p in sys.phases
        ],
        "rows": [
            {
                "disease": r.disease,
                "chance": r.disease_term,
                "values": {a: r.attr_terms[a] for a in sys.attributes},
                "reliability": r.reliability,
            }
            for r in sys.rows
        ],
        "nodes": [
            {
                "mask": node.subset.mask,
                "classes": [
                    {
                        "values": list(map(list, cls.defining_values)),
                        "members": list(map(list, cls.members)),
                        "rows": list(cls.row_indices),
                    }
                    for cls in node.classes
                ],
                "rules": [
                    {
                        "antecedent": list(map(list, r.antecedent)),
                        "disease": r.disease,
                        "term": r.disease_term,
                        "reliability": r.reliability,
                        "class": r.origin_class,
                    }
                    for r in node.rules
                ],
            }
            for node in kb.lattice.nodes
        ],
        "conflicts": [
            {
                "subset": list(c.subset),
                "class": c.class_index,
                "antecedent": list(map(list, c.antecedent)),
                "disease": c.disease,
                "candidates": list(map(list, c.candidates)),
                "kept": c.kept,
            }
            for c in kb.conflicts.entries
        ],
        "stats": {
            "format_version": kb.stats.format_version,
            "attribute_count": kb.stats.attribute_count,
            "disease_count": kb.stats.disease_count,
            "phase_count": kb.stats.phase_count,
            "node_count": kb.stats.node_count,
            "nodes_per_level": list(kb.stats.nodes_per_level),
            "rules_per_level": list(kb.stats.rules_per_level),
            "rule_count": kb.stats.rule_count,
            "conflicts_resolved": kb.stats.conflicts_resolved,
        },
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def save_compiled(kb: CompiledKB, path: str | Path) -> None:
    Path(path).write_text(dump_compiled(kb), encoding="utf-8")


def load_compiled(path: str | Path) -> CompiledKB:
    """Reconstruct a compiled knowledge base from its artifact file.

    The loaded object reproduces the saved stats bit for bit; no
    recompilation happens.
    """
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    if doc.get("artifact") != "fuzzylattice-kb" or doc.get("artifact_version") != ARTIFACT_VERSION:
        raise KBFormatError("not a fuzzylattice compiled artifact", str(path))
    variables = {}
    attributes = []
    for raw in doc["attributes"]:
        var = _variable_from_dict(raw, KIND_INPUT)
        attributes.append(var.name)
        variables[var.name] = var
    attributes = tuple(attributes)
    output = _variable_from_dict(doc["output"], KIND_OUTPUT)
    rows = tuple(
        InfoRow(r["disease"], r["chance"], dict(r["values"]), r["reliability"])
        for r in doc["rows"]
    )
    phases = tuple(
        PhaseSpec(p["index"], p["name"], tuple(p["attributes"])) for p in doc["phases"]
    )
    system = InformationSystem(
        attributes=attributes,
        variables=variables,
        output=output,
        diseases=tuple(doc["diseases"]),
        rows=rows,
        phases=phases,
        attribute_labels=dict(doc["attribute_labels"]),
        disease_labels=dict(doc["disease_labels"]),
        format_version=doc["format"],
    )
    nodes = []
    for raw in doc["nodes"]:
        subset = AttributeSubset(raw["mask"], attributes)
        classes = tuple(
            ElementarySet(
                defining_values=tuple(tuple(v) for v in cls["values"]),
                members=tuple((d, t, rs) for d, t, rs in cls["members"]),
                row_indices=tuple(cls["rows"]),
            )
            for cls in raw["classes"]
        )
        rules = tuple(
            Rule(
                antecedent=tuple(tuple(c) for c in r["antecedent"]),
                disease=r["disease"],
                disease_term=r["term"],
                reliability=r["reliability"],
                origin_mask=raw["mask"],
                origin_class=r["class"],
            )
            for r in raw["rules"]
        )
        nodes.append(LatticeNode(subset=subset, classes=classes, rules=rules))
    conflicts = ConflictReport(
        tuple(
            Conflict(
                subset=tuple(c["subset"]),
                class_index=c["class"],
                antecedent=tuple(tuple(v) for v in c["antecedent"]),
                disease=c["disease"],
                candidates=tuple((t, rs) for t, rs in c["candidates"]),
                kept=c["kept"],
            )
            for c in doc["conflicts"]
        )
    )
    s = doc["stats"]
    stats = KBStats(
        format_version=s["format_version"],
        attribute_count=s["attribute_count"],
        disease_count=s["disease_count"],
        phase_count=s["phase_count"],
        node_count=s["node_count"],
        nodes_per_level=tuple(s["nodes_per_level"]),
        rules_per_level=tuple(s["rules_per_level"]),
        rule_count=s["rule_count"],
        conflicts_resolved=s["conflicts_resolved"],
    )
    return CompiledKB(
        system=system,
        lattice=Lattice(attributes=attributes, nodes=tuple(nodes)),
        conflicts=conflicts,
        stats=stats,
    )
