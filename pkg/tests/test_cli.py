"""End-to-end command-line checks: determinism, exit codes, formats."""

import json

import pytest

from vreslab.betti import betti_numbers, betti_window, point_presentation
from vreslab.cli import derive_seed, main
from vreslab.diffcalc import alternating_betti_from_hilbert
from vreslab.points import hilbert_matrix, hilbert_window, random_points
from vreslab.vres import predicted_pair_shape


def run(capsys, argv):
    rc = main(argv)
    return rc, capsys.readouterr().out


class TestDeterminism:
    def test_points_replay_identical(self, capsys):
        rc1, out1 = run(capsys, ["points", "--N", "4", "--seed", "11"])
        rc2, out2 = run(capsys, ["points", "--N", "4", "--seed", "11"])
        assert rc1 == rc2 == 0
        assert out1 == out2

    def test_out_file_matches_stdout(self, capsys, tmp_path):
        rc1, out1 = run(capsys, ["betti", "--N", "3", "--seed", "5"])
        target = tmp_path / "bt.json"
        rc2, _ = run(capsys, ["betti", "--N", "3", "--seed", "5",
                              "--out", str(target)])
        assert rc1 == rc2 == 0
        assert target.read_text() == out1

    def test_seed_splitting_is_stable_and_spread(self):
        a = derive_seed(7, 12, 0)
        assert a == derive_seed(7, 12, 0)
        assert len({derive_seed(7, N, t) for N in range(2, 10)
                    for t in range(10)}) == 80


class TestPayloads:
    def test_hilbert_csv_matches_library(self, capsys):
        rc, out = run(capsys, ["hilbert", "--N", "4", "--seed", "11"])
        ps = random_points(1, 2, 4, seed=11, require_generic=True)
        want = hilbert_matrix(ps, hilbert_window(4, 1, 2)).to_csv().rstrip("\n")
        assert rc == 0 and out.rstrip("\n") == want

    def test_dh_csv_matches_library(self, capsys):
        rc, out = run(capsys, ["dh", "--N", "4", "--seed", "11"])
        ps = random_points(1, 2, 4, seed=11, require_generic=True)
        h = hilbert_matrix(ps, hilbert_window(4, 1, 2))
        want = alternating_betti_from_hilbert(h, 1, 2).to_csv().rstrip("\n")
        assert rc == 0 and out.rstrip("\n") == want

    def test_betti_json_matches_library(self, capsys):
        rc, out = run(capsys, ["betti", "--N", "3", "--seed", "5"])
        ps = random_points(1, 2, 3, seed=5, require_generic=True)
        bt = betti_numbers(point_presentation(ps, betti_window(3, 1, 2)))
        assert rc == 0 and out.strip() == bt.to_json()

    def test_pair_shape_matches_closed_form(self, capsys):
        rc, out = run(capsys, ["vres-pair", "--N", "6", "--d", "5,0",
                               "--seed", "106"])
        assert rc == 0
        assert out.strip() == predicted_pair_shape(6).to_json()

    def test_intersect_reports_length(self, capsys):
        rc, out = run(capsys, ["vres-intersect", "--N", "5", "--t", "4",
                               "--seed", "2"])
        assert rc == 0
        payload = json.loads(out)
        assert payload["length"] == 3
        assert payload["table"]["boundary_clean"] is True

    def test_prime_env_override(self, capsys, monkeypatch):
        monkeypatch.setenv("VRES_PRIME", "101")
        rc, out = run(capsys, ["points", "--N", "2", "--seed", "3"])
        assert rc == 0 and json.loads(out)["p"] == 101
        rc, out = run(capsys, ["points", "--N", "2", "--seed", "3",
                               "--prime", "32003"])
        assert rc == 0 and json.loads(out)["p"] == 32003


class TestTrialsAndRegression:
    def test_mrc_small_range(self, capsys):
        rc, out = run(capsys, ["mrc", "--nmin", "2", "--nmax", "4",
                               "--trials", "3", "--seed", "7"])
        assert rc == 0
        summary = json.loads(out)
        assert summary["total"] == summary["passed"] == 9
        assert summary["failed"] == []

    def test_mrc_jobs_do_not_change_output(self, capsys):
        argv = ["mrc", "--nmin", "2", "--nmax", "3", "--trials", "2",
                "--seed", "7"]
        rc1, out1 = run(capsys, argv)
        rc2, out2 = run(capsys, argv + ["--jobs", "2"])
        assert rc1 == rc2 == 0 and out1 == out2

    def test_regress_appendix(self, capsys):
        rc, out = run(capsys, ["regress", "appendix", "--seed", "0"])
        assert rc == 0
        assert json.loads(out)["mismatches"] == []

    def test_regress_final(self, capsys):
        rc, out = run(capsys, ["regress", "final", "--seed", "0"])
        assert rc == 0
        assert json.loads(out)["checks"] == 1

    def test_log_records_have_metadata(self, capsys, tmp_path):
        log = tmp_path / "exp.jsonl"
        run(capsys, ["points", "--N", "3", "--seed", "5", "--log", str(log)])
        run(capsys, ["points", "--N", "3", "--seed", "5", "--log", str(log)])
        lines = log.read_text().splitlines()
        assert len(lines) == 2
        rec = json.loads(lines[0])
        assert rec["command"] == "points"
        assert "timestamp" in rec and "runtime_ms" in rec
        assert rec["verdicts"] == {"generated": True}


class TestExitCodes:
    def test_uncertified_degree_fails_with_report(self, capsys):
        rc, out = run(capsys, ["vres-pair", "--N", "5", "--d", "0,0",
                               "--seed", "2"])
        assert rc == 1
        assert json.loads(out)["failures"][0]["error"] == "NotInRegularity"

    def test_missing_seed_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["points", "--N", "3"])
        assert exc.value.code == 2

    def test_malformed_bidegree_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["vres-pair", "--N", "5", "--d", "nope", "--seed", "1"])
        assert exc.value.code == 2

    def test_unknown_command_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 2
