"""Command-line interface: subcommands, reports, exit codes."""

import json

import pytest

from dlc.calculus import CALCULI, fixtures_dir, _atom
from dlc.cli import run
from dlc.core import _node_to_json

FIX = fixtures_dir()
SPEC = str(FIX / "robustness.spec")
NET = str(FIX / "identity_net.json")
INPUTS = str(FIX / "robustness_inputs.json")


def read_json(path):
    with open(path) as fh:
        return json.load(fh)


class TestEval:
    def test_dl2_golden(self, tmp_path):
        out = tmp_path / "r.json"
        code = run(
            [
                "eval", SPEC, "--inputs", INPUTS, "--net", f"N={NET}",
                "--logic", "dl2", "--grad", "x", "--out", str(out),
            ]
        )
        assert code == 0
        rep = read_json(out)
        assert rep["version"] == "dlc-report/1"
        assert rep["loss"] == pytest.approx(-0.05)
        assert rep["gradient"][0] == pytest.approx(-1.0)

    def test_stl_flag_violation_is_usage_error(self):
        code = run(
            [
                "eval", SPEC, "--inputs", INPUTS, "--net", f"N={NET}",
                "--logic", "stl", "--nu", "1",
            ]
        )
        assert code == 2

    def test_missing_file(self):
        assert run(["eval", "nope.spec", "--inputs", INPUTS,
                    "--logic", "dl2"]) == 2


def test_compile(tmp_path):
    out = tmp_path / "c.json"
    assert run(["compile", SPEC, "--logic", "dl2", "--out", str(out)]) == 0
    rep = read_json(out)
    assert rep["kind"] == "compile" and rep["expr"]["kind"] == "impl"


def test_laws_small_budget(tmp_path):
    out = tmp_path / "laws.json"
    code = run(["laws", "--samples", "60", "--seed", "7", "--out", str(out)])
    assert code == 0
    rep = read_json(out)
    assert rep["expected_mismatches"] == []


class TestShadow:
    def test_dl2_passes(self, tmp_path):
        out = tmp_path / "s.json"
        assert run(["shadow", "--logic", "dl2", "--out", str(out)]) == 0

    def test_goedel_fails_verdict(self, tmp_path):
        out = tmp_path / "s.json"
        assert run(["shadow", "--logic", "goedel", "--out", str(out)]) == 1
        assert read_json(out)["witness"] is not None


class TestConverge:
    def test_stl(self, tmp_path):
        out = tmp_path / "c.json"
        code = run(
            ["converge", "--logic", "stl", "--nu", "100",
             "--tol", "1e-3", "--out", str(out)]
        )
        assert code == 0

    def test_yager(self, tmp_path):
        out = tmp_path / "c.json"
        code = run(
            ["converge", "--logic", "yager", "--r", "32",
             "--tol", "1e-2", "--out", str(out)]
        )
        assert code == 0

    def test_wrong_logic_is_usage_error(self):
        assert run(["converge", "--logic", "dl2"]) == 2


class TestProof:
    def test_check_bundled(self, tmp_path):
        out = tmp_path / "p.json"
        code = run(
            ["proof", "check", str(FIX / "limpl_ext_luka.json"),
             "--out", str(out)]
        )
        assert code == 0
        assert read_json(out)["passed"]

    def test_check_wrong_calculus_fails(self, tmp_path):
        code = run(
            ["proof", "check", str(FIX / "limpl_ext_luka.json"),
             "--calculus", "product"]
        )
        assert code in (1, 2)

    def test_search(self, tmp_path):
        pf = CALCULI["dl2"].profile
        a = _node_to_json(_atom(1, pf))
        goal = tmp_path / "goal.json"
        goal.write_text(json.dumps({"components": [{"left": [a], "right": [a]}]}))
        out = tmp_path / "proof.json"
        code = run(
            ["proof", "search", "--calculus", "dl2", "--goal", str(goal),
             "--out", str(out)]
        )
        assert code == 0
        assert read_json(out)["found"]


def test_weakcomp(tmp_path):
    out = tmp_path / "w.json"
    assert run(["weakcomp", "--calculus", "stl-inf", "--out", str(out)]) == 0
    rep = read_json(out)
    assert rep["passed"]


def test_fuzz_soundness(tmp_path):
    out = tmp_path / "f.json"
    code = run(
        ["fuzz-soundness", "--calculus", "product", "--samples", "100",
         "--out", str(out)]
    )
    assert code == 0


def test_train_demo(tmp_path):
    out = tmp_path / "t.json"
    code = run(
        [
            "train-demo", SPEC, "--inputs", INPUTS, "--net", f"N={NET}",
            "--logic", "dl2", "--steps", "5", "--out", str(out),
        ]
    )
    assert code == 0
    trace = read_json(out)["trace"]
    losses = [t["loss"] for t in trace]
    assert all(b >= a - 1e-12 for a, b in zip(losses, losses[1:]))


def test_usage_error_exit_code():
    assert run(["no-such-command"]) == 2
    assert run(["eval"]) == 2  # missing required arguments
