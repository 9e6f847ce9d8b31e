"""Tests for the command-line interface: verbs, exit codes, formats."""

import csv
import io
import json

import pytest

from wfgcpe.cli import TABLE3_PUBLISHED, main
from wfgcpe.empirical import (empirical_wfgcpe, exact_moments_power_square,
                              load_dataset)
from wfgcpe.weights import weight_x


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_compute_pretty(capsys):
    code, out, err = run(capsys, "compute", "--dist", "power", "--b", "1",
                         "--c", "2", "--weight", "x", "--gamma", "0.5")
    assert code == 0
    assert "0.176777" in out
    assert "closed_form" in out


def test_compute_json_schema(capsys):
    args = ("compute", "--dist", "power", "--b", "1", "--c", "2",
            "--weight", "x", "--gamma", "0.5", "--format", "json")
    code, out, _ = run(capsys, *args)
    doc = json.loads(out)
    assert set(doc) == {"metadata", "rows"}
    row = doc["rows"][0]
    assert set(row) == {"measure", "dist", "weight", "gamma", "value",
                        "method"}
    assert abs(row["value"] - 0.17677669529663687) < 1e-15
    # schema-stable across runs
    code2, out2, _ = run(capsys, *args)
    assert out2 == out


def test_compute_csv(capsys):
    code, out, _ = run(capsys, "compute", "--dist", "uniform", "--a", "1",
                       "--weight", "x2", "--gamma", "1.0", "--format", "csv")
    assert code == 0
    lines = [ln for ln in out.splitlines() if not ln.startswith("#")]
    rows = list(csv.DictReader(io.StringIO("\n".join(lines))))
    assert rows[0]["method"] == "closed_form"
    assert float(rows[0]["value"]) > 0


def test_compute_normalized_flag(capsys):
    code, out, _ = run(capsys, "compute", "--dist", "power", "--b", "1",
                       "--c", "2", "--weight", "x", "--gamma", "1.0",
                       "--normalized", "--format", "json")
    doc = json.loads(out)
    normalized = [r for r in doc["rows"]
                  if r["measure"] == "normalized_wfgcpe"]
    assert abs(normalized[0]["value"] - 1.0) < 1e-9


def test_compute_extreme_gamma_no_crash(capsys):
    code, out, _ = run(capsys, "compute", "--dist", "power", "--b", "1",
                       "--c", "2", "--weight", "x", "--gamma", "1e9")
    assert code in (0, 4)


def test_compute_constraint_exit(capsys):
    code, _, err = run(capsys, "compute", "--dist", "frechet", "--b", "1",
                       "--c", "4", "--weight", "x2", "--gamma", "0.5")
    assert code == 2
    assert "gamma" in err


def test_usage_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["conjugate", "--gamma", "1"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["compute", "--dist", "power", "--gamma", "1", "--frobnicate"])
    assert exc.value.code == 2


def test_estimate_builtin(capsys):
    code, out, _ = run(capsys, "estimate", "--builtin", "blood_cancer_43",
                       "--reading", "corrected", "--weight", "x",
                       "--gamma", "0.25", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["metadata"]["reading"] == "corrected"
    assert doc["metadata"]["n"] == 43
    expected = empirical_wfgcpe(load_dataset("blood_cancer_43", "corrected"),
                                weight_x(), 0.25)
    assert doc["rows"][0]["value"] == expected


def test_estimate_missing_file_exit_3(capsys):
    code, _, err = run(capsys, "estimate", "--input", "/no/such/file.csv",
                       "--weight", "x", "--gamma", "0.5")
    assert code == 3 and err


def test_estimate_bad_file_exit_3(capsys, tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("1.0\nnot-a-number\n")
    code, _, err = run(capsys, "estimate", "--input", str(p),
                       "--weight", "x", "--gamma", "0.5")
    assert code == 3


def test_estimate_export_round_trip(capsys, tmp_path):
    out_file = tmp_path / "exported.txt"
    code, out1, _ = run(capsys, "estimate", "--builtin", "blood_cancer_43",
                        "--weight", "sqrtx", "--gamma", "0.25",
                        "--export", str(out_file), "--format", "json")
    assert code == 0
    code, out2, _ = run(capsys, "estimate", "--input", str(out_file),
                        "--weight", "sqrtx", "--gamma", "0.25",
                        "--format", "json")
    assert code == 0
    v1 = json.loads(out1)["rows"][0]["value"]
    v2 = json.loads(out2)["rows"][0]["value"]
    assert v1 == v2


def test_custom_weight_table(capsys):
    code, out, _ = run(capsys, "compute", "--dist", "uniform", "--a", "0",
                       "--weight-custom", "0:1;10:1", "--gamma", "1.0",
                       "--format", "json")
    assert code == 0
    # constant table reproduces the unweighted closed form 1/2^2
    assert abs(json.loads(out)["rows"][0]["value"] - 0.25) < 1e-9


def test_simulate_seed_reproducibility(capsys):
    args = ("simulate", "--pop", "power-square", "--n", "5", "--gamma",
            "0.25", "--replicates", "400", "--seed", "99", "--format", "json")
    _, out1, _ = run(capsys, *args)
    _, out2, _ = run(capsys, *args)
    assert out1 == out2
    doc = json.loads(out1)
    assert doc["metadata"]["seed"] == 99
    row = doc["rows"][0]
    assert "exact_mean" in row and "mc_mean" in row


def test_simulate_derives_and_prints_seed(capsys):
    code, out, _ = run(capsys, "simulate", "--pop", "power-square", "--n",
                       "5", "--gamma", "0.25", "--replicates", "50",
                       "--format", "json")
    assert code == 0
    doc = json.loads(out)
    seed = doc["metadata"]["seed"]
    # re-running with the printed seed reproduces the rows exactly
    _, out2, _ = run(capsys, "simulate", "--pop", "power-square", "--n", "5",
                     "--gamma", "0.25", "--replicates", "50", "--seed",
                     str(seed), "--format", "json")
    assert json.loads(out2)["rows"] == doc["rows"]


def test_reproduce_table4(capsys):
    code, out, _ = run(capsys, "reproduce", "--table", "4",
                       "--format", "json")
    assert code == 0
    rows = json.loads(out)["rows"]
    assert len(rows) == 20
    cell = {(r["gamma"], r["n"]): r for r in rows}
    mean, var = exact_moments_power_square(5, 0.25)
    assert cell[(0.25, 5)]["mean"] == mean
    assert cell[(0.25, 5)]["variance"] == var


def test_reproduce_table3_records_reading(capsys):
    code, out, _ = run(capsys, "reproduce", "--table", "3",
                       "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["metadata"]["matching_reading"] == "corrected"
    assert len(doc["rows"]) == 2 * len(TABLE3_PUBLISHED)
    corrected = [r for r in doc["rows"] if r["reading"] == "corrected"]
    assert all(r["rel_discrepancy"] <= 0.01 for r in corrected)


def test_reproduce_table3_single_reading(capsys):
    code, out, _ = run(capsys, "reproduce", "--table", "3", "--reading",
                       "literal", "--format", "json")
    doc = json.loads(out)
    assert {r["reading"] for r in doc["rows"]} == {"literal"}
    assert doc["metadata"]["matching_reading"] == "none"


def test_reproduce_tables_1_and_2(capsys):
    for table in ("1", "2"):
        code, out, _ = run(capsys, "reproduce", "--table", table,
                           "--format", "json")
        assert code == 0
        rows = json.loads(out)["rows"]
        assert rows, table
        finite = [r for r in rows if r["value"] == r["value"]]
        assert all(r["value"] >= 0 for r in finite)


def test_bounds_verb(capsys):
    code, out, _ = run(capsys, "bounds", "--dist", "power", "--b", "1",
                       "--c", "2", "--weight", "x", "--gamma", "1.5",
                       "--format", "json")
    assert code == 0
    rows = json.loads(out)["rows"]
    assert all(r["holds"] for r in rows)


def test_threads_env(capsys, monkeypatch):
    monkeypatch.setenv("WFGCPE_THREADS", "4")
    code, _, _ = run(capsys, "compute", "--dist", "power", "--b", "1",
                     "--c", "2", "--weight", "x", "--gamma", "0.5")
    assert code == 0
    monkeypatch.setenv("WFGCPE_THREADS", "zero")
    code, _, err = run(capsys, "compute", "--dist", "power", "--b", "1",
                       "--c", "2", "--weight", "x", "--gamma", "0.5")
    assert code == 2 and "WFGCPE_THREADS" in err


def test_threads_env_never_affects_results(capsys, monkeypatch):
    args = ("compute", "--dist", "power", "--b", "1", "--c", "2",
            "--weight", "x", "--gamma", "0.5", "--format", "json")
    _, base, _ = run(capsys, *args)
    monkeypatch.setenv("WFGCPE_THREADS", "16")
    _, capped, _ = run(capsys, *args)
    assert base == capped
