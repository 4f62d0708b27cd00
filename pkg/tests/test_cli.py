import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from qbargmann import __version__
from qbargmann.cli import main, parse_complex, parse_grid
from qbargmann.cstates import coeff_h


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def table(text):
    lines = text.splitlines()
    assert lines[0].startswith("# ")
    rows = list(csv.reader(io.StringIO("\n".join(lines[1:]))))
    return lines[0], rows[0], rows[1:]


def column(header, rows, name, kind=float):
    i = header.index(name)
    return np.array([kind(r[i]) for r in rows])


def test_parse_helpers():
    assert parse_complex("1+0.5i") == 1 + 0.5j
    assert parse_complex(" -2j ") == -2j
    re, im = parse_grid("0:1:3,-1:1:2")
    assert list(re) == [0.0, 0.5, 1.0] and list(im) == [-1.0, 1.0]


def test_metadata_line(capsys):
    code, out, _ = run(capsys, "eval", "--function", "N", "--q", "0.5", "--m", "1", "--z", "0")
    meta, header, rows = table(out)
    assert code == 0
    for token in ("q=0.5", "m=1", "rel_tol=1e-13", __version__):
        assert token in meta
    assert header == ["z_re", "z_im", "value_re", "value_im", "est_error"]


def test_eval_normalization_at_origin(capsys):
    _, out, _ = run(capsys, "eval", "--function", "N", "--q", "0.5", "--m", "1", "--z", "0")
    _, header, rows = table(out)
    assert float(rows[0][header.index("value_re")]) == pytest.approx(0.5, rel=1e-15)


def test_eval_coeff_constant_column(capsys):
    _, out, _ = run(capsys, "eval", "--function", "coeff_h", "--m", "0", "--j", "0",
                    "--grid=-1:1:3,-1:1:3")
    _, header, rows = table(out)
    assert len(rows) == 9
    assert np.all(column(header, rows, "value_re") == 1.0)
    assert np.all(column(header, rows, "value_im") == 0.0)


def test_eval_phi_ground_state(capsys):
    _, out, _ = run(capsys, "eval", "--function", "phi", "--j", "0", "--q", "0.5", "--xi", "0:0:1")
    _, header, rows = table(out)
    assert float(rows[0][header.index("value_re")]) == pytest.approx(
        math.sqrt(math.pi ** -0.5 * 0.5 ** 0.125), rel=1e-15)


@pytest.mark.parametrize("fn", ["omega", "mu", "nu", "sigma"])
def test_eval_other_functions(capsys, fn):
    code, out, _ = run(capsys, "eval", "--function", fn, "--m", "2", "--z", "0.5+0.2j",
                       "--w", "0.3-0.1j")
    assert code == 0
    _, header, rows = table(out)
    assert len(rows) == 1 and "est_error" in header


def test_eval_sigma_needs_w(capsys):
    code, _, err = run(capsys, "eval", "--function", "sigma", "--z", "1")
    assert code == 2 and "--w" in err


def test_invalid_q_is_config_error(capsys):
    for q in ("1.0", "0", "-0.3", "2"):
        code, out, err = run(capsys, "eval", "--function", "N", "--q", q)
        assert code == 2
        assert "0 < q < 1" in err
        assert out == ""


def test_invalid_m_and_grid(capsys):
    assert run(capsys, "kernel-grid", "--m", "-1")[0] == 2
    assert run(capsys, "kernel-grid", "--grid", "0:1:2")[0] == 2
    assert run(capsys, "eval", "--function", "N", "--grid", "0:1:x,0:1:2")[0] == 2


def test_kernel_grid_single_point(capsys):
    _, out, _ = run(capsys, "kernel-grid", "--m", "0", "--z", "0")
    _, header, rows = table(out)
    assert len(rows) == 1
    assert float(rows[0][header.index("K_re")]) == 1.0


def test_kernel_grid_columns(capsys):
    _, out, _ = run(capsys, "kernel-grid", "--q", "0.4", "--m", "2", "--grid=-1:1:3,-0.5:0.5:2")
    _, header, rows = table(out)
    i, j = column(header, rows, "i", int), column(header, rows, "j", int)
    K = column(header, rows, "K_re") + 1j * column(header, rows, "K_im")
    N = column(header, rows, "N_z")
    herm = column(header, rows, "hermiticity_defect")
    diag = i == j
    assert len(rows) == 36
    assert np.max(np.abs(K[diag] - N[diag]) / (1 + N[diag])) < 1e-10
    assert herm.max() < 1e-11


def test_transform_ground_state(capsys):
    _, out, _ = run(capsys, "transform", "--signal", "hermite_q:0", "--m", "0",
                    "--grid=-1:1:3,0:1:2")
    _, header, rows = table(out)
    B = column(header, rows, "B_re") + 1j * column(header, rows, "B_im")
    assert np.max(np.abs(B - 1)) < 1e-7
    assert np.all(column(header, rows, "quad_error_est") < 1e-7)


def test_transform_matches_coefficient(capsys):
    _, out, _ = run(capsys, "transform", "--signal", "hermite_q:2", "--m", "1", "--q", "0.5",
                    "--grid", "0:1:3,-0.5:0.5:3")
    _, header, rows = table(out)
    z = column(header, rows, "z_re") + 1j * column(header, rows, "z_im")
    B = column(header, rows, "B_re") + 1j * column(header, rows, "B_im")
    assert np.max(np.abs(B - coeff_h(2, 1, z, 0.5))) < 1e-7


def test_transform_zero_csv(capsys, tmp_path):
    p = tmp_path / "zero.csv"
    p.write_text("xi,f\n-2,0\n0,0\n2,0\n", encoding="utf-8")
    _, out, _ = run(capsys, "transform", "--signal", str(p), "--grid", "0:1:2,0:1:2")
    _, header, rows = table(out)
    assert np.all(column(header, rows, "B_re") == 0) and np.all(column(header, rows, "B_im") == 0)


def test_transform_rejects_non_monotone_csv(capsys, tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("xi,f\n0,1\n-1,2\n", encoding="utf-8")
    code, _, err = run(capsys, "transform", "--signal", str(p))
    assert code == 2 and "increasing" in err


def test_transform_missing_csv(capsys, tmp_path):
    code, _, _ = run(capsys, "transform", "--signal", str(tmp_path / "none.csv"))
    assert code == 2


def test_numeric_failure_exit_code(capsys, monkeypatch):
    from qbargmann import cli
    from qbargmann.errors import TruncationExceeded

    def boom(*a, **k):
        raise TruncationExceeded("coefficient series did not settle")

    monkeypatch.setattr(cli, "overlap_closed", boom)
    code, _, err = run(capsys, "kernel-grid", "--z", "1")
    assert code == 3
    assert "TruncationExceeded" in err and "kernel-grid" in err


def test_limits_tables(capsys):
    code, out, _ = run(capsys, "limits", "--m", "1", "--z", "0.5", "--w", "0.2j")
    _, header, rows = table(out)
    assert code == 0 and header == ["sweep", "q", "one_minus_q", "error"]
    sweeps = {}
    for r in rows:
        sweeps.setdefault(r[0], []).append(float(r[3]))
    assert set(sweeps) == {"kernel", "transform_kernel", "transform"}
    for errs in sweeps.values():
        assert len(errs) == 14
        assert errs[-1] < 1e-3
    assert all(b < a for a, b in zip(sweeps["kernel"], sweeps["kernel"][1:]))


def test_limits_origin_level_zero_is_exact(capsys):
    _, out, _ = run(capsys, "limits", "--m", "0", "--z", "0", "--w", "0")
    _, header, rows = table(out)
    kern = [float(r[3]) for r in rows if r[0] == "kernel"]
    assert kern == [0.0] * len(kern)


def test_json_mirrors_csv(capsys):
    argv = ["kernel-grid", "--m", "1", "--grid", "0:1:2,0:0:1"]
    _, out_csv, _ = run(capsys, *argv)
    _, out_json, _ = run(capsys, *argv, "--format", "json")
    _, header, rows = table(out_csv)
    doc = json.loads(out_json)
    assert doc["columns"] == header
    assert doc["metadata"]["q"] == 0.5 and doc["metadata"]["m"] == 1
    assert len(doc["rows"]) == len(rows)
    for jr, cr in zip(doc["rows"], rows):
        assert [float(v) for v in jr] == [float(v) for v in cr]


def test_out_file(capsys, tmp_path):
    p = tmp_path / "o.csv"
    assert run(capsys, "eval", "--function", "omega", "--out", str(p))[0] == 0
    assert p.read_text(encoding="utf-8").startswith("# library=qbargmann")


def test_figure_flag(capsys, tmp_path):
    for argv in (["kernel-grid", "--grid", "0:1:3,0:1:3"],
                 ["transform", "--grid", "0:1:3,0:1:3"],
                 ["transform", "--grid", "0:1:3,0:0:1"],
                 ["limits", "--kmax", "6"]):
        p = tmp_path / f"{argv[0]}.png"
        assert run(capsys, *argv, "--figure", str(p))[0] == 0
        assert p.stat().st_size > 1000


def test_verify_default_and_deterministic(capsys):
    code1, out1, _ = run(capsys, "verify", "--seed", "42")
    code2, out2, _ = run(capsys, "verify", "--seed", "42")
    assert code1 == code2 == 0
    assert out1 == out2
    _, header, rows = table(out1)
    assert header == ["check", "max_residual", "tol", "samples", "seed", "status"]
    assert all(r[-1] == "pass" for r in rows)
    assert "status=pass" in out1.splitlines()[0]


def test_verify_with_corruption_fails(capsys):
    code, out, _ = run(capsys, "verify", "--inject-corruption")
    assert code == 1
    assert "corrupted_q_binomial" in out and "FAIL" in out


def test_hidden_flag_not_in_help(capsys):
    with pytest.raises(SystemExit):
        main(["verify", "--help"])
    assert "inject" not in capsys.readouterr().out


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "qbargmann", "eval", "--function", "N", "--q", "1.5"],
                         capture_output=True, text=True)
    assert res.returncode == 2
    assert "0 < q < 1" in res.stderr
