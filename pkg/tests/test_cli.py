import numpy as np
import pytest

from twisted_splines import cli, mra
from twisted_splines.splines import phi2_closed


def run(capsys, *argv):
    rc = cli.main(list(argv))
    out = capsys.readouterr()
    return rc, out.out, out.err


def read_csv(path):
    with open(path) as fh:
        lines = fh.read().splitlines()
    header = [l for l in lines if l.startswith("#")]
    cols = [l for l in lines if not l.startswith("#")][0].split(",")
    data = np.loadtxt(path, delimiter=",", comments="#", skiprows=len(header) + 1)
    return header, cols, data


def test_eval_examples(capsys):
    assert run(capsys, "eval", "2", "1", "1")[:2] == (0, "0.405284734569 0.0\n")
    assert run(capsys, "eval", "1", "0.5", "0.5")[:2] == (0, "1.0 0.0\n")
    assert run(capsys, "eval", "3", "3.5", "1")[:2] == (0, "0.0 0.0\n")


def test_usage_errors(capsys):
    assert run(capsys, "eval", "0", "1", "1")[0] == 2
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys, "eval", "2", "x", "1")[0] == 2
    assert run(capsys, "report", "unknown")[0] == 2
    assert run(capsys, "report", "mra")[0] == 2
    assert run(capsys, "eval", "2", "1", "1", "--nodes", "1")[0] == 2


def test_grid_phi2(tmp_path, capsys):
    out = tmp_path / "phi2.csv"
    rc, text, _ = run(capsys, "grid", "phi_n", "2", "--out", str(out))
    assert rc == 0 and text.strip() == str(out)
    header, cols, data = read_csv(out)
    assert cols == ["x", "y", "re", "im"]
    assert any(h.startswith("# tolerance") for h in header) and any("seed" in h for h in header)
    assert data.shape == (65 * 65, 4)
    xs = np.linspace(0, 2, 65)
    X, Y = np.meshgrid(xs, xs, indexing="ij")
    assert abs(data[:, 2].max() - phi2_closed(X, Y).max()) < 1e-10


def test_grid_tensor_symmetric(tmp_path, capsys):
    out = tmp_path / "b2.csv"
    assert run(capsys, "grid", "tensor_bspline", "2", "--samples", "21", "--out", str(out))[0] == 0
    _, _, data = read_csv(out)
    V = data[:, 2].reshape(21, 21)
    assert np.allclose(V, V.T, atol=1e-11)


def test_grid_basis_fn(tmp_path, capsys):
    out = tmp_path / "n.csv"
    assert run(capsys, "grid", "basis_fn", "1", "1", "2", "--samples", "41", "--out", str(out))[0] == 0
    _, cols, data = read_csv(out)
    assert cols == ["x", "y", "modulus", "re", "im"]
    nz = data[data[:, 2] > 0]
    assert len(nz) > 0
    assert np.all((nz[:, 0] >= 1) & (nz[:, 0] <= 1.5) & (nz[:, 1] >= 2) & (nz[:, 1] <= 2.5))


def test_grid_outdir_env(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv(cli.OUTDIR_ENV, str(tmp_path))
    rc, text, _ = run(capsys, "grid", "tensor_bspline", "3", "--samples", "5")
    assert rc == 0 and (tmp_path / "tensor_bspline_3.csv").exists()


def test_grid_unwritable(capsys, tmp_path):
    rc, _, err = run(capsys, "grid", "phi_n", "1", "--samples", "3", "--out", str(tmp_path / "no" / "x.csv"))
    assert rc == 2 and "error" in err


def test_determinism(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run(capsys, "grid", "phi_n", "3", "--samples", "9", "--out", str(a))
    run(capsys, "grid", "phi_n", "3", "--samples", "9", "--out", str(b))
    assert a.read_bytes() == b.read_bytes()
    r1 = run(capsys, "report", "mra", "-1", "--seed", "7")[1]
    r2 = run(capsys, "report", "mra", "-1", "--seed", "7")[1]
    assert r1 == r2 and "seed = 7" in r1


def test_report_gramian(capsys):
    rc, text, _ = run(capsys, "report", "gramian")
    assert rc == 0
    assert "riesz_certified = PASS" in text and text.startswith("# command: report gramian")
    assert "quoted_i3" in text and "quoted_i9" in text


def test_report_mra(capsys):
    rc, text, _ = run(capsys, "report", "mra", "-2")
    assert rc == 0
    kv = dict(l.split(" = ", 1) for l in text.splitlines() if " = " in l and not l.startswith("#"))
    assert abs(float(kv["riesz_lower"]) - (1 - 2 / np.pi)) < 1e-11
    assert float(kv["observed_min"]) >= float(kv["riesz_lower"])
    assert kv["status"] == "PASS" and kv["card_A"] == "48"


def test_report_cphi2(capsys, tmp_path):
    out = tmp_path / "c.txt"
    rc, text, _ = run(capsys, "report", "cphi2", "--out", str(out))
    assert rc == 0 and out.read_text() == text
    assert "quoted_partial_sum = 0.000160507 PASS" in text
    assert "tail_bound" in text and "radius: 100" in text


def test_report_other(capsys):
    rc, text, _ = run(capsys, "report", "pou", "--radius", "5")
    assert rc == 0 and "pointwise_status = PASS" in text
    rc, text, _ = run(capsys, "report", "moments", "2")
    assert rc == 0 and "closed_form" in text
    rc, text, _ = run(capsys, "report", "riesz")
    assert rc == 0 and "status = PASS" in text


def test_certification_failure_exit(capsys, monkeypatch):
    monkeypatch.setattr(mra, "RIESZ_LOWER", 0.99)
    rc, text, _ = run(capsys, "report", "mra", "-2")
    assert rc == 3 and "status = FAIL" in text
