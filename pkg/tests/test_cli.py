import socket

import pytest
from click.testing import CliRunner
from fastapi.testclient import TestClient

from fuzzylattice import run_consultation
from fuzzylattice.cli import main
from fuzzylattice.patient import load_patient_record
from fuzzylattice.serialize import dump_json, report_payload
from fuzzylattice.service import create_app

from conftest import DATA_DIR

P1 = DATA_DIR / "patients" / "p1_reference_sample.yaml"

BAD_KB = """
format: 1
attributes:
  - name: a
    universe: [0, 10]
    terms:
      - {name: "Low", range: [0, 6]}
      - {name: "High", range: [4, 10]}
output:
  name: chance
  universe: [0, 100]
  terms:
    - {name: "No", range: [0, 10]}
    - {name: "Some", range: [8, 100]}
phases:
  - {index: 1, name: history, attributes: [a]}
rows:
  - {disease: d1, chance: "Some", reliability: 1.2, values: {a: "Low"}}
"""


@pytest.fixture()
def runner():
    return CliRunner()


class TestValidate:
    def test_reference_kb(self, runner, kb_path):
        res = runner.invoke(main, ["validate", str(kb_path)])
        assert res.exit_code == 0
        assert "32 nodes" in res.output
        assert "total 155" in res.output

    def test_invalid_reliability_exits_one(self, runner, tmp_path):
        bad = tmp_path / "bad.yaml"
        bad.write_text(BAD_KB)
        res = runner.invoke(main, ["validate", str(bad)])
        assert res.exit_code == 1
        assert "reliability" in res.output

    def test_missing_file_exits_two(self, runner):
        res = runner.invoke(main, ["validate", "/no/such/file.yaml"])
        assert res.exit_code == 2


class TestInfer:
    def test_text_report(self, runner, kb_path):
        res = runner.invoke(main, ["infer", str(kb_path), "--patient", str(P1)])
        assert res.exit_code == 0
        for line in ("d1", "High", "d3", "Moderate", "d5", "Low", "Final"):
            assert line in res.output

    def test_structured_mirrors_api_payload(self, runner, kb_path, kb):
        res = runner.invoke(
            main,
            ["infer", str(kb_path), "--patient", str(P1), "--format", "structured"],
        )
        assert res.exit_code == 0
        expected = dump_json(
            report_payload(run_consultation(kb, load_patient_record(P1)))
        )
        assert res.output.strip() == expected

    def test_strict_level_warns_but_succeeds(self, runner, kb_path):
        res = runner.invoke(
            main,
            ["infer", str(kb_path), "--patient", str(P1), "--mode", "strict-level"],
        )
        assert res.exit_code == 0
        assert "No evidence" in res.output
        assert "warning" in res.output

    def test_malformed_patient_exits_one(self, runner, kb_path, tmp_path):
        broken = tmp_path / "broken.yaml"
        broken.write_text("phases: {not: a list}\n")
        res = runner.invoke(main, ["infer", str(kb_path), "--patient", str(broken)])
        assert res.exit_code == 1

    def test_out_of_universe_exits_one(self, runner, kb_path, tmp_path):
        patient = tmp_path / "p.yaml"
        patient.write_text("phases:\n  - phase: 1\n    inputs: {a1: 42}\n")
        res = runner.invoke(main, ["infer", str(kb_path), "--patient", str(patient)])
        assert res.exit_code == 1
        assert "a1" in res.output

    def test_threshold_outside_universe_is_usage_error(self, runner, kb_path):
        res = runner.invoke(
            main,
            ["infer", str(kb_path), "--patient", str(P1), "--threshold", "500"],
        )
        assert res.exit_code == 2


class TestExplain:
    def test_disease_filter_shows_top_rule(self, runner, kb_path):
        res = runner.invoke(
            main, ["explain", str(kb_path), "--patient", str(P1), "--disease", "d1"]
        )
        assert res.exit_code == 0
        lines = [l for l in res.output.splitlines() if l.strip().startswith("1.000")]
        assert lines and "a4=Moderate" in lines[0]

    def test_unknown_disease_exits_two(self, runner, kb_path):
        res = runner.invoke(
            main, ["explain", str(kb_path), "--patient", str(P1), "--disease", "zz"]
        )
        assert res.exit_code == 2

    def test_deterministic(self, runner, kb_path):
        first = runner.invoke(main, ["explain", str(kb_path), "--patient", str(P1)])
        second = runner.invoke(main, ["explain", str(kb_path), "--patient", str(P1)])
        assert first.output == second.output


class TestSurface:
    def test_csv_shape(self, runner, kb_path):
        res = runner.invoke(
            main,
            ["surface", str(kb_path), "--disease", "d1", "--x", "a1", "--y", "a4",
             "--resolution", "3"],
        )
        assert res.exit_code == 0
        lines = res.output.strip().splitlines()
        assert len(lines) == 4
        assert all(len(line.split(",")) == 4 for line in lines)

    def test_same_axes_exits_two(self, runner, kb_path):
        res = runner.invoke(
            main,
            ["surface", str(kb_path), "--disease", "d1", "--x", "a1", "--y", "a1"],
        )
        assert res.exit_code == 2

    def test_unknown_disease_exits_two(self, runner, kb_path):
        res = runner.invoke(
            main,
            ["surface", str(kb_path), "--disease", "zz", "--x", "a1", "--y", "a2"],
        )
        assert res.exit_code == 2

    def test_values_match_api(self, runner, kb_path, kb):
        res = runner.invoke(
            main,
            ["surface", str(kb_path), "--disease", "d1", "--x", "a1", "--y", "a4",
             "--resolution", "3"],
        )
        client = TestClient(create_app(kb))
        api = client.get(
            "/api/surface",
            params={"disease": "d1", "x": "a1", "y": "a4", "resolution": 3},
        ).json()
        csv_rows = [line.split(",")[1:] for line in res.output.strip().splitlines()[1:]]
        for csv_row, api_row in zip(csv_rows, api["cells"]):
            for csv_cell, api_cell in zip(csv_row, api_row):
                if csv_cell == "NA":
                    assert api_cell == "NA"
                else:
                    assert float(csv_cell) == api_cell

    def test_fixed_option(self, runner, kb_path):
        res = runner.invoke(
            main,
            ["surface", str(kb_path), "--disease", "d1", "--x", "a1", "--y", "a4",
             "--resolution", "3", "--fixed", "a3=8.0"],
        )
        assert res.exit_code == 0

    def test_bad_fixed_syntax_exits_two(self, runner, kb_path):
        res = runner.invoke(
            main,
            ["surface", str(kb_path), "--disease", "d1", "--x", "a1", "--y", "a4",
             "--fixed", "a3"],
        )
        assert res.exit_code == 2


class TestServe:
    def test_invalid_kb_exits_one_before_binding(self, runner, tmp_path):
        bad = tmp_path / "bad.yaml"
        bad.write_text(BAD_KB)
        res = runner.invoke(main, ["serve", str(bad), "--port", "8421"])
        assert res.exit_code == 1

    def test_busy_port_exits_one(self, runner, kb_path):
        blocker = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        blocker.bind(("127.0.0.1", 0))
        port = blocker.getsockname()[1]
        try:
            res = runner.invoke(main, ["serve", str(kb_path), "--port", str(port)])
            assert res.exit_code == 1
            assert "bind" in res.output
        finally:
            blocker.close()

    def test_missing_kb_argument_exits_two(self, runner, monkeypatch):
        monkeypatch.delenv("FUZZYLATTICE_KB", raising=False)
        res = runner.invoke(main, ["serve"])
        assert res.exit_code == 2


class TestGoldenReports:
    @pytest.mark.parametrize(
        "name",
        [
            "p1_reference_sample",
            "p2_forward_bending_only",
            "p3_severe_everywhere",
            "p4_rest_pain_partial",
            "p5_leg_dominant",
        ],
    )
    def test_report_matches_golden(self, runner, kb_path, name):
        from conftest import GOLDEN_DIR

        patient = DATA_DIR / "patients" / f"{name}.yaml"
        res = runner.invoke(main, ["infer", str(kb_path), "--patient", str(patient)])
        assert res.exit_code == 0
        assert res.output == (GOLDEN_DIR / f"{name}.txt").read_text()
