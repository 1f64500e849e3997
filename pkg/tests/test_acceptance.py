"""Acceptance suite: one test per release criterion, at pinned tolerances.

Run with `pytest tests/test_acceptance.py -v -s` to get one PASS line per
criterion on the terminal.
"""

import json
import random
import time
from pathlib import Path

import pytest
from click.testing import CliRunner
from fastapi.testclient import TestClient

from fuzzylattice import (
    AttributeSubset,
    ConflictPolicy,
    ElementarySet,
    InconsistentKnowledgeError,
    LatticeNode,
    STRICT_LEVEL,
    TermActivation,
    bundled_kb_path,
    clip_and_aggregate,
    compile_kb,
    defuzz_centroid,
    equivalence_classes,
    generate_rules,
    infer_phase,
    load_information_system,
)
from fuzzylattice.cli import main as cli_main
from fuzzylattice.patient import load_patient_record
from fuzzylattice.service import create_app

from _oracles import (
    FIG6_INPUTS,
    FIG6_LABELS,
    TABLE1_ROWS,
    brute_classes,
    random_activation_levels,
    random_output_variable,
    random_system,
)
from conftest import DATA_DIR, GOLDEN_DIR

DOCS = Path(__file__).parent.parent / "docs"


def _ok(name: str):
    print(f"\nACCEPTANCE PASS: {name}")


def test_criterion_lattice_shape():
    """32 nodes with level sizes (1,5,10,10,5,1), compiled in under 1 s."""
    start = time.perf_counter()
    kb = compile_kb(load_information_system(bundled_kb_path()))
    elapsed = time.perf_counter() - start
    assert kb.stats.node_count == 32
    assert kb.stats.nodes_per_level == (1, 5, 10, 10, 5, 1)
    assert elapsed < 1.0, f"compile took {elapsed:.3f}s"
    _ok(f"lattice shape: 32 nodes, levels (1,5,10,10,5,1), compiled in {elapsed * 1000:.0f} ms")


def test_criterion_top_node_fidelity(kb):
    """The full-attribute node reproduces the reference table exactly."""
    node = kb.node_for(kb.system.attributes)
    assert len(node.rules) == 5
    for rule, (disease, term, values, reliability) in zip(node.rules, TABLE1_ROWS):
        assert rule.disease == disease
        assert rule.disease_term == term
        assert rule.reliability == reliability
        assert rule.antecedent == tuple((a, values[a]) for a in kb.system.attributes)
    assert [r.consequent for r in node.rules] == [
        ("d1", "High"), ("d2", "High"), ("d3", "Moderate"), ("d4", "High"), ("d5", "Low")
    ]
    _ok("top-node fidelity: 5 rules equal the reference rows, reliabilities (0.8, 0.7, 0.6, 0.6, 0.4)")


def test_criterion_reference_consultation_labels(kb):
    """Reference inputs give d1/d2/d4 High, d3 Moderate, d5 Low; strict mode is silent."""
    result = infer_phase(kb, 1, FIG6_INPUTS)
    labels = {a.disease: a.label for a in result.assessments}
    assert labels == FIG6_LABELS
    assert all(0.0 <= a.crisp_chance <= 100.0 for a in result.assessments)

    strict = infer_phase(kb, 1, FIG6_INPUTS, STRICT_LEVEL)
    assert all(a.no_evidence for a in strict.assessments)
    assert all(not a.activations for a in strict.assessments)

    analysis = DOCS / "matching-modes.md"
    assert analysis.is_file()
    text = analysis.read_text()
    assert "strict-level" in text and "subset-closure" in text
    _ok("reference consultation: exact label match under subset-closure; "
        "strict-level fires all-zero; deviation analysis shipped in docs/")


def test_criterion_centroid_numerics(kb):
    """Symmetric apex +-1e-3; (60,100,100) -> 86.667 +-1e-3 at 1001; doubling drift <=1e-3."""
    out = kb.system.output
    for level in (0.15, 0.4, 0.73, 1.0):
        agg = clip_and_aggregate(out, [TermActivation("Moderate", level)], 1001)
        assert defuzz_centroid(agg) == pytest.approx(45.0, abs=1e-3)

    agg = clip_and_aggregate(out, [TermActivation("High", 1.0)], 1001)
    assert defuzz_centroid(agg) == pytest.approx((60 + 100 + 100) / 3, abs=1e-3)

    rng = random.Random(20250810)
    worst = 0.0
    for i in range(100):
        var = out if i % 4 == 0 else random_output_variable(rng)
        levels = random_activation_levels(rng, var)
        activations = [TermActivation(t, lv) for t, lv in levels.items() if lv > 0]
        c1 = defuzz_centroid(clip_and_aggregate(var, activations, 1001))
        c2 = defuzz_centroid(clip_and_aggregate(var, activations, 2001))
        worst = max(worst, abs(c1 - c2))
    assert worst <= 1e-3, f"worst resolution-doubling drift {worst:.2e}"
    _ok(f"centroid numerics: apex exact, 86.667 +-1e-3 at 1001, "
        f"worst doubling drift {worst:.2e} over 100 random aggregates")


def test_criterion_rough_set_properties():
    """500 random systems: valid partitions, refinement monotonicity, oracle match."""
    rng = random.Random(13)
    systems = 0
    while systems < 500:
        sys_ = random_system(rng)
        systems += 1
        n = len(sys_.attributes)
        labelings = {}
        for mask in range(1 << n):
            subset = AttributeSubset(mask, sys_.attributes)
            classes = equivalence_classes(sys_, subset)
            # partition: pairwise disjoint, union covers all rows
            seen = [i for cls in classes for i in cls.row_indices]
            assert sorted(seen) == list(range(len(sys_.rows)))
            # brute-force pairwise oracle agreement
            assert [list(c.row_indices) for c in classes] == brute_classes(
                sys_.rows, subset.members
            )
            labeling = {}
            for ci, cls in enumerate(classes):
                for i in cls.row_indices:
                    labeling[i] = ci
            labelings[mask] = labeling
        for small in range(1 << n):
            for big in range(1 << n):
                if small & ~big:
                    continue
                targets = {}
                for i, fine_class in labelings[big].items():
                    targets.setdefault(fine_class, set()).add(labelings[small][i])
                assert all(len(t) == 1 for t in targets.values())
    _ok("rough-set properties: partitions valid, refinement monotone, "
        "brute-force oracle matched on 500 random systems")


def test_criterion_conflict_resolution():
    """Greater reliability wins; equal reliabilities abort the build with a location."""
    resolvable = ElementarySet(
        defining_values=(("a", "Low"),),
        members=(("d", "Moderate", 0.4), ("d", "High", 0.8)),
        row_indices=(0, 1),
    )
    node = LatticeNode(AttributeSubset(1, ("a",)), (resolvable,))
    rules, conflicts = generate_rules(node)
    assert [(r.disease_term, r.reliability) for r in rules] == [("High", 0.8)]
    assert conflicts[0].kept == "High"

    tied = ElementarySet(
        defining_values=(("a", "Low"),),
        members=(("d", "High", 0.6), ("d", "Low", 0.6)),
        row_indices=(0, 1),
    )
    node = LatticeNode(AttributeSubset(1, ("a",)), (tied,))
    with pytest.raises(InconsistentKnowledgeError) as strict_exc:
        generate_rules(node, ConflictPolicy.STRICT)
    assert "{a}" in str(strict_exc.value) and "'d'" in str(strict_exc.value)

    rules, conflicts = generate_rules(node, ConflictPolicy.LENIENT)
    assert rules == () and conflicts[0].kept is None
    _ok("conflict resolution: max reliability wins; ties abort with a located diagnostic")


def test_criterion_engine_api_cli_coherence(kb, kb_path):
    """CLI infer and POST /phases agree numerically at 1e-9."""
    patient = DATA_DIR / "patients" / "p1_reference_sample.yaml"
    runner = CliRunner()
    res = runner.invoke(
        cli_main,
        ["infer", str(kb_path), "--patient", str(patient), "--format", "structured"],
    )
    assert res.exit_code == 0
    cli_doc = json.loads(res.output)

    client = TestClient(create_app(kb))
    sid = client.post("/api/sessions").json()["id"]
    api_doc = client.post(
        f"/api/sessions/{sid}/phases/1",
        json={"inputs": load_patient_record(patient)[0][1]},
    ).json()

    cli_assessments = cli_doc["phases"][0]["assessments"]
    api_assessments = api_doc["assessments"]
    assert len(cli_assessments) == len(api_assessments) == 5
    for via_cli, via_api in zip(cli_assessments, api_assessments):
        assert via_cli["disease"] == via_api["disease"]
        assert via_cli["label"] == via_api["label"]
        assert abs(via_cli["crisp"] - via_api["crisp"]) <= 1e-9
        for act_cli, act_api in zip(via_cli["activations"], via_api["activations"]):
            assert abs(act_cli["strength"] - act_api["strength"]) <= 1e-9
    _ok("engine/API/CLI coherence: identical assessments at 1e-9 through both surfaces")


def test_criterion_golden_reports(kb_path):
    """Clinical-records substitute: golden-file reports for 5 synthetic patients."""
    runner = CliRunner()
    patients = sorted((DATA_DIR / "patients").glob("*.yaml"))
    assert len(patients) == 5
    for patient in patients:
        res = runner.invoke(cli_main, ["infer", str(kb_path), "--patient", str(patient)])
        assert res.exit_code == 0
        golden = (GOLDEN_DIR / f"{patient.stem}.txt").read_text()
        assert res.output == golden, f"report drift for {patient.name}"
    _ok("golden reports: 5 synthetic patient files reproduce their checked-in reports byte for byte")
