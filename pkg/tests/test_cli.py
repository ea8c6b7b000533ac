import json
import subprocess
import sys

import numpy as np
import pytest

from mubkit.analysis import classify_pair
from mubkit.cli import (
    main,
    matrix_from_json,
    observable_from_json,
    observable_to_json,
    parse_partition_spec,
    report_from_json,
    report_to_json,
)
from mubkit.errors import BadPartition
from mubkit.fourier import (
    example_partitions,
    fourier_matrix,
    momentum_observable,
    position_observable,
)


def run(argv, capsys):
    code = main(argv)
    cap = capsys.readouterr()
    return code, cap.out, cap.err


@pytest.fixture()
def files(tmp_path, capsys):
    main(["construct", "position", "4", "--out", str(tmp_path / "q4.json")])
    main(["construct", "momentum", "4", "--out", str(tmp_path / "p4.json")])
    main(["construct", "position", "2", "--out", str(tmp_path / "q2.json")])
    main(["construct", "example5", "4", "--out", str(tmp_path / "ex5.json")])
    main(["construct", "example6", "4", "--out", str(tmp_path / "ex6.json")])
    capsys.readouterr()
    return tmp_path


class TestConstruct:
    def test_file_output_matches_library(self, tmp_path, capsys):
        out = tmp_path / "q3.json"
        code, _, err = run(["construct", "position", "3", "--out", str(out)], capsys)
        assert code == 0 and f"wrote {out}" in err
        assert json.loads(out.read_text()) == observable_to_json(position_observable(3))

    def test_stdout_mode(self, capsys):
        code, out, _ = run(["construct", "momentum", "2"], capsys)
        assert code == 0
        obs = observable_from_json(json.loads(out))
        expected = momentum_observable(2)
        for got, want in zip(obs.effects, expected.effects):
            assert np.allclose(got.matrix, want.matrix, atol=1e-15)

    def test_fourier_output(self, capsys):
        code, out, _ = run(["construct", "fourier", "4"], capsys)
        assert code == 0
        obj = json.loads(out)
        assert obj["dim"] == 4
        assert np.allclose(matrix_from_json(obj["matrix"]), fourier_matrix(4), atol=0)

    def test_example5_writes_pair(self, files):
        q_half, p_parity, _ = example_partitions()
        got_q = json.loads((files / "ex5.qprime.json").read_text())
        got_p = json.loads((files / "ex5.pprime.json").read_text())
        assert got_q == observable_to_json(q_half)
        assert got_p == observable_to_json(p_parity)

    def test_example6_writes_pair(self, files):
        _, _, p_half = example_partitions()
        assert (files / "ex6.qprime.json").exists()
        got = json.loads((files / "ex6.pdprime.json").read_text())
        assert got == observable_to_json(p_half)

    def test_example_kind_needs_dim4(self, tmp_path, capsys):
        code, _, err = run(["construct", "example5", "3",
                            "--out", str(tmp_path / "x.json")], capsys)
        assert code == 2 and "error:" in err

    def test_example_kind_needs_out(self, capsys):
        code, _, err = run(["construct", "example6", "4"], capsys)
        assert code == 2 and "error:" in err

    def test_bad_dimension(self, capsys):
        code, _, err = run(["construct", "fourier", "0"], capsys)
        assert code == 2 and "error:" in err


class TestCheck:
    def test_all_holds_exit_zero(self, files, capsys):
        code, out, err = run(["check", "all", str(files / "q4.json"),
                              str(files / "p4.json")], capsys)
        assert code == 0
        obj = json.loads(out)
        assert obj["tool"]["name"] == "mubkit"
        assert obj["inputs"] == [str(files / "q4.json"), str(files / "p4.json")]
        assert obj["tolerance"] == pytest.approx(4e-9)
        rep = obj["report"]
        assert rep["dim"] == 4 and rep["m"] == 4 and rep["n"] == 4
        assert rep["verdicts"]["mu"]["holds"] and rep["verdicts"]["condition1"]["holds"]
        assert rep["alpha"] == pytest.approx(0.25)
        assert "mu: holds" in err

    def test_failing_predicate_exit_one(self, files, capsys):
        code, out, err = run(["check", "condition1", str(files / "ex6.qprime.json"),
                              str(files / "ex6.pdprime.json")], capsys)
        assert code == 1
        obj = json.loads(out)
        verdict = obj["report"]["verdicts"]["condition1"]
        assert not verdict["holds"]
        assert verdict["witness"]["side"] in ("A∘B", "B∘A")
        assert "condition1: FAILS" in err

    def test_gmu_still_holds_for_failing_pair(self, files, capsys):
        code, out, _ = run(["check", "generalized-mu", str(files / "ex6.qprime.json"),
                            str(files / "ex6.pdprime.json")], capsys)
        assert code == 0
        assert json.loads(out)["report"]["alpha"] == 1.0

    def test_mu_on_non_atomic_is_usage_error(self, files, capsys):
        code, _, err = run(["check", "mu", str(files / "ex5.qprime.json"),
                            str(files / "ex5.pprime.json")], capsys)
        assert code == 2 and "error:" in err

    def test_dim_mismatch(self, files, capsys):
        code, _, err = run(["check", "all", str(files / "q2.json"),
                            str(files / "q4.json")], capsys)
        assert code == 2 and "error:" in err

    def test_unreadable_and_malformed_files(self, files, capsys):
        code, _, err = run(["check", "all", str(files / "nope.json"),
                            str(files / "q4.json")], capsys)
        assert code == 2 and "error:" in err
        bad = files / "bad.json"
        bad.write_text("[1, 2]")
        code, _, err = run(["check", "all", str(bad), str(files / "q4.json")], capsys)
        assert code == 2 and "not an observable file" in err

    def test_report_round_trip_is_lossless(self):
        q_half, _, p_half = example_partitions()
        rep = classify_pair(q_half, p_half)
        assert report_from_json(report_to_json(rep)) == rep
        q, p = position_observable(3), momentum_observable(3)
        rep2 = classify_pair(q, p)
        assert report_from_json(report_to_json(rep2)) == rep2


class TestToleranceResolution:
    def test_env_variable_applies(self, files, capsys, monkeypatch):
        args = ["check", "condition1", str(files / "ex6.qprime.json"),
                str(files / "ex6.pdprime.json")]
        monkeypatch.setenv("MUBKIT_TOL", "0.5")
        code, _, _ = run(args, capsys)
        assert code == 0  # deviation 0.354 now counts as holding

    def test_flag_beats_env(self, files, capsys, monkeypatch):
        monkeypatch.setenv("MUBKIT_TOL", "0.5")
        code, _, _ = run(["check", "condition1", str(files / "ex6.qprime.json"),
                          str(files / "ex6.pdprime.json"), "--tol", "1e-9"], capsys)
        assert code == 1

    def test_bad_env_value(self, files, capsys, monkeypatch):
        monkeypatch.setenv("MUBKIT_TOL", "lots")
        code, _, err = run(["check", "all", str(files / "q4.json"),
                            str(files / "p4.json")], capsys)
        assert code == 2 and "error:" in err


class TestCoarseGrain:
    def test_merge_to_stdout(self, files, capsys):
        code, out, _ = run(["coarse-grain", str(files / "q4.json"), "0,1|2,3"], capsys)
        assert code == 0
        obs = observable_from_json(json.loads(out))
        q_half, _, _ = example_partitions()
        assert obs.outcomes == ("0", "1")
        for got, want in zip(obs.effects, q_half.effects):
            assert np.allclose(got.matrix, want.matrix, atol=1e-15)

    def test_identity_and_total_merge(self, files, capsys):
        code, out, _ = run(["coarse-grain", str(files / "q4.json"), "0|1|2|3"], capsys)
        assert code == 0 and len(json.loads(out)["effects"]) == 4
        code, out, _ = run(["coarse-grain", str(files / "q4.json"), "0,1,2,3"], capsys)
        assert code == 0
        merged = observable_from_json(json.loads(out))
        assert np.allclose(merged.effects[0].matrix, np.eye(4), atol=1e-15)

    def test_spaces_tolerated(self, files, capsys):
        code, out, _ = run(["coarse-grain", str(files / "q4.json"), "0, 1 | 2 ,3"], capsys)
        assert code == 0 and len(json.loads(out)["effects"]) == 2

    def test_file_output(self, files, capsys):
        out_path = files / "merged.json"
        code, _, err = run(["coarse-grain", str(files / "q4.json"), "0,1|2,3",
                            "--out", str(out_path)], capsys)
        assert code == 0 and out_path.exists() and "wrote" in err

    @pytest.mark.parametrize("spec", ["0,1|2", "0,1|1,2,3", "0,1|2,3,9", "0,,1|2,3"])
    def test_bad_specs_are_usage_errors(self, files, capsys, spec):
        code, _, err = run(["coarse-grain", str(files / "q4.json"), spec], capsys)
        assert code == 2 and "error:" in err

    def test_parse_partition_spec_messages(self):
        outcomes = ("0", "1", "2")
        with pytest.raises(BadPartition, match="not covered"):
            parse_partition_spec("0|1", outcomes)
        with pytest.raises(BadPartition, match="more than one fiber"):
            parse_partition_spec("0,1|1,2", outcomes)
        with pytest.raises(BadPartition, match="unknown"):
            parse_partition_spec("0,1|2,7", outcomes)


class TestPaperSuite:
    def test_runs_green(self, capsys):
        code, out, err = run(["paper-suite"], capsys)
        assert code == 0
        obj = json.loads(out)
        assert obj["passed"] is True
        assert len(obj["fixtures"]) >= 20
        assert all(f["passed"] for f in obj["fixtures"])
        assert "fixtures passed" in err


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "mubkit", "construct", "fourier", "2"],
                          capture_output=True, text=True, cwd=tmp_path)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["dim"] == 2
