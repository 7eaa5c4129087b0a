import json
import subprocess
import sys

import pytest

from qconcepts import ingest
from qconcepts.cli import main
from qconcepts.wavefield import read_pgm


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_model_corpus(tmp_path, capsys):
    code, out, err = run(capsys, "model", "@corpus", tmp_path)
    assert code == 0 and err == ""
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["scalars"]["S"] == pytest.approx(0.0154, abs=1e-3)
    assert report["scalars"]["c_m"] == pytest.approx(0.8032, abs=1e-3)
    assert (tmp_path / "report.txt").exists()
    assert len((tmp_path / "vectors.csv").read_text().splitlines()) == 26


def test_model_empty_csv(tmp_path, capsys):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    code, _, err = run(capsys, "model", empty, tmp_path / "out")
    assert code == 1
    assert len(err.strip().splitlines()) == 1 and err.startswith("qconcepts: error:")


def test_model_infeasible_item(tmp_path, capsys, corpus):
    mu_ab = corpus.mu_ab.copy()
    mu_ab[4] = 0.2
    bad = tmp_path / "bad.csv"
    bad.write_text(ingest.serialize_csv(corpus.with_columns(mu_ab=mu_ab)))
    code, _, err = run(capsys, "model", "--no-renormalize", bad, tmp_path / "out")
    assert code == 2
    assert len(err.strip().splitlines()) == 1 and "Coconut" in err


def test_missing_input(tmp_path, capsys):
    code, _, err = run(capsys, "model", tmp_path / "nope.csv", tmp_path)
    assert code == 1 and len(err.strip().splitlines()) == 1


def test_usage_error(capsys):
    code, _, err = run(capsys, "model")
    assert code == 1 and len(err.strip().splitlines()) == 1
    code, _, _ = run(capsys, "wavefield", "--grid", "0x3", "@table2", "@corpus", "out")
    assert code == 1


def test_wavefield_table2(tmp_path, capsys):
    code, _, err = run(capsys, "wavefield", "--grid", "64x48", "@table2", "@corpus", tmp_path)
    assert code == 0, err
    sol = json.loads((tmp_path / "phase_solution.json").read_text())
    assert sol["relative_residual"] <= 1e-6
    assert len(sol["coefficients"]) == 24 and len(sol["points"]) == 24
    assert sol["midpoint_max_error_a"] <= 5e-3 and sol["midpoint_max_error_b"] <= 5e-3
    for which in ("A", "B", "AorB"):
        assert read_pgm((tmp_path / f"wavefield_{which}.pgm").read_bytes()).shape == (48, 64)
        rows = (tmp_path / f"wavefield_{which}.csv").read_text().splitlines()
        assert len(rows) == 48 and len(rows[0].split(",")) == 64


def test_wavefield_single_pixel(tmp_path, capsys):
    code, _, _ = run(capsys, "wavefield", "--grid", "1x1", "--name", "tiny", "@table2", "@corpus", tmp_path)
    assert code == 0
    blob = (tmp_path / "tiny_AorB.pgm").read_bytes()
    assert blob.startswith(b"P5\n1 1\n255\n") and read_pgm(blob).shape == (1, 1)


def test_wavefield_missing_spec(tmp_path, capsys):
    code, _, err = run(capsys, "wavefield", tmp_path / "missing.json", "@corpus", tmp_path)
    assert code == 1 and len(err.strip().splitlines()) == 1


def test_predict_round_trip(tmp_path, capsys):
    src = tmp_path / "cn.csv"
    src.write_text("label,mu_ab,mu_ab_notb,mu_nota_b,mu_nota_notb\n"
                   "a,0.5,0.4,0.4,0.5\nb,0.81,0.5,0.5,\nc,0,0,0,\n")
    code, _, _ = run(capsys, "predict", src, tmp_path / "out")
    assert code == 0
    rows = json.loads((tmp_path / "out" / "predictions.json").read_text())["items"]
    assert [(r["classical"], r["quantum"], r["quantum_out_of_range"]) for r in rows] == [
        (-0.3, 0.51, False), (-0.81, 0.0, False), (1.0, 1.81, True)]


def test_validate(tmp_path, capsys, raw_corpus):
    code, out, _ = run(capsys, "validate", "@corpus")
    assert code == 0 and "24 items ok" in out
    raw = tmp_path / "raw.csv"
    raw.write_text(ingest.serialize_csv(raw_corpus))
    code, out, _ = run(capsys, "validate", "--no-renormalize", raw)
    assert code == 2 and "column" in out


def test_outputs_are_byte_identical(tmp_path, capsys):
    for sub in ("one", "two"):
        assert run(capsys, "model", "@corpus", tmp_path / sub / "m")[0] == 0
        assert run(capsys, "wavefield", "--grid", "32x24", "@table2", "@corpus", tmp_path / sub / "w")[0] == 0
    one = sorted(p.relative_to(tmp_path / "one") for p in (tmp_path / "one").rglob("*") if p.is_file())
    two = sorted(p.relative_to(tmp_path / "two") for p in (tmp_path / "two").rglob("*") if p.is_file())
    assert one == two and len(one) == 10
    for rel in one:
        assert (tmp_path / "one" / rel).read_bytes() == (tmp_path / "two" / rel).read_bytes()


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "qconcepts", "model", "@corpus", str(tmp_path)],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "c_m = 0.802606" in proc.stdout
