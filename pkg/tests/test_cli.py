import csv
import io
import json

import pytest

from orbitcoset import harness
from orbitcoset.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_wilson_interval():
    lo, hi = harness.wilson_interval(0, 200)
    assert lo == 0.0 and 0.02 < hi < 0.04
    lo, hi = harness.wilson_interval(100, 200)
    assert lo < 0.5 < hi


def test_trial_streams_are_independent():
    a = harness.trial_rng(7, 0).integers(1 << 30, size=4)
    b = harness.trial_rng(7, 1).integers(1 << 30, size=4)
    assert list(a) != list(b)
    assert list(a) == list(harness.trial_rng(7, 0).integers(1 << 30, size=4))


def test_ht_run_csv_and_determinism(capsys):
    code, first, _ = run(capsys, "ht-run", "--p", "3", "--n", "2", "--trials", "20", "--seed", "7")
    assert code == 0
    row = next(csv.DictReader(io.StringIO(first)))
    assert int(row["mismatches"]) == 0
    assert float(row["abort_rate"]) < 0.5
    assert row["samples_per_run"] == "117"
    _, second, _ = run(capsys, "ht-run", "--p", "3", "--n", "2", "--trials", "20", "--seed", "7")
    assert first == second


@pytest.mark.parametrize("argv", [
    ["ht-run", "--p", "3", "--n", "0"],
    ["ht-run", "--p", "4"],
    ["ht-run", "--trials", "0"],
    ["orbit-demo", "--group", "missing"],
    ["orbit-demo", "--action", "missing"],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert "error" in err


def test_unknown_verb_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_lemma_check_passes(capsys):
    code, out, _ = run(capsys, "lemma-check", "--p", "3", "--n", "2", "--exhaustive")
    assert code == 0
    assert out.count("PASS") == 4


def test_lemma_check_degenerate_prime(capsys):
    code, out, _ = run(capsys, "lemma-check", "--p", "2", "--n", "3", "--exhaustive")
    assert code == 0 and "line_lemma: PASS" in out


def test_lemma_check_reports_counterexample(capsys):
    code, out, _ = run(capsys, "lemma-check", "--p", "3", "--n", "2", "--exhaustive", "--inject-fault")
    assert code == 1
    assert "line_lemma: FAIL" in out
    assert "counterexample" in out


def test_lemma_check_cap(capsys):
    code, _, err = run(capsys, "lemma-check", "--p", "7", "--n", "6", "--exhaustive")
    assert code == 2 and "cap" in err.lower()


def test_distribution_tables(capsys):
    code, out, _ = run(capsys, "distribution", "--p", "3", "--n", "2", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    rows = {(r["k"], r["c"]): r["probability"] for r in doc["trials"]}
    assert rows[(1, 1)] == pytest.approx(0.25)
    assert rows[(2, 1)] == pytest.approx(0.25)
    assert rows[(0, 1)] == 0
    assert sum(rows.values()) == pytest.approx(1.0)
    assert doc["summary"]["statevector_tv"] < 1e-9
    _, out, _ = run(capsys, "distribution", "--p", "2", "--n", "1", "--mode", "shortcut")
    table = list(csv.DictReader(io.StringIO(out)))
    assert {(r["k"], r["c"], r["probability"]) for r in table} >= {("1", "1", "0.5")}


def test_orbit_demo_transparent_fidelity(capsys):
    code, out, _ = run(capsys, "orbit-demo", "--action", "all")
    assert code == 0
    for row in csv.DictReader(io.StringIO(out)):
        assert float(row["min_fidelity"]) >= 1 - 1e-6


def test_orbit_demo_group(capsys, tmp_path):
    dest = tmp_path / "oc.json"
    code, _, _ = run(capsys, "orbit-demo", "--group", "z3sq_semidirect_z2", "--mode", "transparent",
                     "--trials", "3", "--format", "json", "--out", str(dest))
    assert code == 0
    doc = json.loads(dest.read_text())
    assert doc["summary"]["exact"] == 3
    assert len(doc["trials"]) == 3


def test_hsp_zero(capsys):
    code, out, _ = run(capsys, "hsp-run", "--p", "3", "--n", "2", "--trials", "3", "--zero",
                       "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert all(t["generator"] == [[0, 0], 1] for t in doc["trials"])


def test_stabilizer_run(capsys):
    code, out, _ = run(capsys, "stabilizer-run", "--action", "s3-points", "--trials", "2")
    assert code == 0
    row = next(csv.DictReader(io.StringIO(out)))
    assert row["correct"] == "2"


def test_make_instance(capsys):
    _, sealed, _ = run(capsys, "make-instance", "--p", "3", "--n", "2")
    _, shown, _ = run(capsys, "make-instance", "--p", "3", "--n", "2", "--reveal")
    assert "u" not in json.loads(sealed)
    assert len(json.loads(shown)["u"]) == 2
