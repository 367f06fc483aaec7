"""Suite registry behavior plus the command line end to end."""

import json
import subprocess
import sys
from fractions import Fraction

import pytest

from carnot_filiform.cli import main
from carnot_filiform.serialize import canonical_dumps
from carnot_filiform.verify import SUITES, run_suite, suite_names

EXPECTED_SUITES = {"group-axioms", "bch-coeffs", "conjugation", "rank",
                   "dilation", "automorphisms", "shear-roundtrip", "pansu",
                   "lift-criterion", "distortion", "geodesic"}


def test_registry_names():
    assert set(SUITES) == EXPECTED_SUITES
    assert suite_names() == list(SUITES)


def test_run_suite_rank():
    report = run_suite("rank")
    assert report.ok
    assert report.cases == 1200
    assert report.elapsed == 0.0
    assert report.seed == 0
    assert report.invocation == "carnot-filiform verify rank --seed 0"


def test_unknown_suite_raises():
    with pytest.raises(KeyError):
        run_suite("spectral-gap")


def test_report_bytes_are_reproducible():
    a = run_suite("conjugation", seed=3, vectors=10)
    b = run_suite("conjugation", seed=3, vectors=10)
    assert canonical_dumps(a.to_json()) == canonical_dumps(b.to_json())
    c = run_suite("conjugation", seed=4, vectors=10)
    assert canonical_dumps(c.to_json()) != canonical_dumps(a.to_json())


def test_timings_flag_controls_elapsed():
    timed = run_suite("rank", timings=True, vectors=5)
    assert timed.elapsed > 0.0
    untimed = run_suite("rank", vectors=5)
    assert untimed.elapsed == 0.0


def _run_cli(args, capsys):
    code = main(args)
    out, err = capsys.readouterr()
    return code, out, err


def test_cli_mul(tmp_path, capsys):
    x = tmp_path / "x.json"
    y = tmp_path / "y.json"
    x.write_text(json.dumps({"algebra_label": "fr2",
                             "coords": ["1", "0", "0"]}))
    y.write_text(json.dumps({"algebra_label": "fr2",
                             "coords": ["0", "1", "0"]}))
    code, out, _ = _run_cli(["mul", str(x), str(y)], capsys)
    assert code == 0
    obj = json.loads(out)
    assert obj["coords"] == ["1", "1", "1/2"]


def test_cli_bch_coeffs(capsys):
    code, out, _ = _run_cli(["bch-coeffs", "--n", "5"], capsys)
    assert code == 0
    obj = json.loads(out)
    assert obj["coefficients"]["2"] == "1/12"
    assert obj["coefficients"]["4"] == "-1/720"


def test_cli_dist_inline_points(capsys):
    code, out, _ = _run_cli(["--algebra", "fr2", "dist", "0,0,0", "0,0,1"],
                            capsys)
    assert code == 0
    obj = json.loads(out)
    assert obj["metric"] == "homogeneous"
    assert obj["value"] == 1.0


def test_cli_usage_errors(capsys):
    code, _, err = _run_cli(["mul", "/nonexistent/a.json",
                             "/nonexistent/b.json"], capsys)
    assert code == 2
    assert err.strip()
    code, _, err = _run_cli(["--algebra", "fr9", "dist", "0,0,0", "1,0,0"],
                            capsys)
    assert code == 2


def test_cli_infeasible_exit(capsys):
    # one segment cannot reach a purely vertical fr2 target
    code, _, err = _run_cli(["--algebra", "fr2", "dist", "--metric",
                             "carnot-upper", "--segments", "1", "--starts",
                             "1", "0,0,0", "0,0,1"], capsys)
    assert code == 3
    assert err.strip()


def test_cli_verify_exit_and_formats(capsys):
    code, out, _ = _run_cli(["verify", "rank"], capsys)
    assert code == 0
    obj = json.loads(out)
    assert obj["suite"] == "rank" and obj["cases"] == 1200
    code, out, _ = _run_cli(["--format", "csv", "verify", "rank"], capsys)
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "suite,cases,failures,elapsed,seed"
    assert lines[1] == "rank,1200,0,0.0,0"


def test_cli_verify_figures(tmp_path, capsys):
    figdir = tmp_path / "figs"
    code, _, _ = _run_cli(["--figures", str(figdir), "verify", "pansu"],
                          capsys)
    assert code == 0
    pngs = list(figdir.glob("*.png"))
    assert pngs, "expected at least one rendered figure"


def test_cli_subprocess_entry(tmp_path):
    # the console script must work outside this process too
    proc = subprocess.run([sys.executable, "-m", "carnot_filiform.cli",
                           "verify", "conjugation"],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    obj = json.loads(proc.stdout)
    assert obj["cases"] == 200
    assert obj["failures"] == []


def test_cli_seed_changes_output(capsys):
    code, out1, _ = _run_cli(["--seed", "5", "verify", "conjugation"], capsys)
    assert code == 0
    code, out2, _ = _run_cli(["--seed", "6", "verify", "conjugation"], capsys)
    assert code == 0
    assert json.loads(out1)["seed"] == 5
    assert json.loads(out2)["seed"] == 6
    assert out1 != out2
