import json
import subprocess
import sys

import numpy as np
import pytest

from pdmlab.cli import main
from pdmlab.output import read_csv

SMALL = ["--xmin", "-8", "--xmax", "8", "--n", "401"]


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_spectrum_example(tmp_path, capsys):
    out = tmp_path / "s.csv"
    argv = ["spectrum", "--profile", "const", "--a", "-0.25", "--xmin", "-10", "--xmax", "10", "--n", "2001"]
    code, _, err = run(argv + ["--levels", "6", "--out", str(out)], capsys)
    assert code == 0, err
    header, rows = read_csv(out)
    assert header == ["n", "E", "residual"]
    assert len(rows) == 6
    np.testing.assert_allclose([r[1] for r in rows], np.arange(6) + 0.5, atol=5e-4)


def test_scan_example(tmp_path, capsys):
    out = tmp_path / "scan.csv"
    code, _, err = run(["scan", "--profile", "poly1", "--a-steps", "33", "--n", "801", "--out", str(out)], capsys)
    assert code == 0, err
    header, rows = read_csv(out)
    assert header[:5] == ["a", "b", "deviation", "c1", "c2"]
    assert len(rows) == 33
    dat = (tmp_path / "scan.dat").read_text().splitlines()
    assert dat[0].startswith("#") and len(dat) == 34


def test_constraint_violation(tmp_path, capsys):
    code, _, err = run(["spectrum", "--a", "0.3", "--b", "0.3", "--out", str(tmp_path / "x.csv")], capsys)
    assert code == 1
    assert "constraint a+b=-1/2 violated" in err
    assert len(err.strip().splitlines()) == 1
    assert not (tmp_path / "x.csv").exists()


def test_presets_resolve(capsys):
    for name, ab in (("bdd", (0.0, -0.5)), ("zk", (-0.5, 0.0)), ("mm", (-0.25, -0.25))):
        code, out, _ = run(["operator", "--preset", name] + SMALL, capsys)
        assert code == 0
        j, k, l = ab[0], 2 * ab[1], ab[0]
        assert f"({j}, {k}, {l})" in out


def test_usage_errors(capsys):
    assert run([], capsys)[0] == 1
    assert run(["bogus"], capsys)[0] == 1
    assert run(["spectrum", "--n", "many"], capsys)[0] == 1
    assert run(["spectrum", "--profile", "nope", "--out", "x.csv"], capsys)[0] == 1


def test_numerical_failure_exit_code(tmp_path, capsys):
    argv = ["classical", "--profile", "soliton", "--potential", "free", "--x0", "0", "--p0", "1"]
    code, _, err = run(argv + ["--tend", "3", "--dt", "1e-3", "--out", str(tmp_path / "t.csv")], capsys)
    assert code == 2
    assert "t=1.5" in err


def test_byte_identical_outputs(tmp_path, capsys):
    argv = ["spectrum", "--profile", "poly1", "--preset", "mm", "--levels", "4"] + SMALL
    assert run(argv + ["--out", str(tmp_path / "a.csv")], capsys)[0] == 0
    assert run(argv + ["--out", str(tmp_path / "b.csv")], capsys)[0] == 0
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_seventeen_significant_digits(tmp_path, capsys):
    out = tmp_path / "p.csv"
    assert run(["pct-table", "--profile", "poly1", "--n", "5", "--out", str(out)], capsys)[0] == 0
    line = out.read_text().splitlines()[1]
    mantissa = line.split(",")[0].split("e")[0]
    assert len(mantissa.replace("-", "").replace(".", "")) == 17


def test_dump_config_round_trip(tmp_path, capsys):
    argv = ["spectrum", "--profile-expr", "1+lam*x^2", "--param", "lam=0.5", "--preset", "mm", "--levels", "3"]
    argv += SMALL + ["--out", str(tmp_path / "direct.csv")]
    code, cfg, _ = run(argv + ["--dump-config"], capsys)
    assert code == 0
    config = json.loads(cfg)
    config["out"] = str(tmp_path / "replayed.csv")
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(config))
    assert run(argv, capsys)[0] == 0
    assert run(["spectrum", "--config", str(path)], capsys)[0] == 0
    assert (tmp_path / "direct.csv").read_bytes() == (tmp_path / "replayed.csv").read_bytes()


def test_flags_override_config(tmp_path, capsys):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"levels": 2, "n": 401, "xmin": -8, "xmax": 8, "out": str(tmp_path / "c.csv")}))
    assert run(["spectrum", "--config", str(path), "--levels", "3"], capsys)[0] == 0
    assert len(read_csv(tmp_path / "c.csv")[1]) == 3


def test_bad_config(tmp_path, capsys):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"nodes": 5}))
    code, _, err = run(["spectrum", "--config", str(path)], capsys)
    assert code == 1 and "nodes" in err
    path.write_text("{")
    assert run(["spectrum", "--config", str(path)], capsys)[0] == 1


def test_every_subcommand_writes(tmp_path, capsys):
    jobs = {
        "classical": ["--profile", "poly1", "--tend", "1", "--out", "t.csv"],
        "potentials": ["--profile", "poly1", "--a", "0", "--n", "101", "--out", "v.csv"],
        "pct-table": ["--profile", "soliton", "--n", "101", "--out", "q.csv"],
        "verify-ladder": ["--profile", "poly1", "--a", "-0.25", "--out", "l.json"] + SMALL,
        "verify-pct": ["--profile", "poly1", "--preset", "mm", "--n", "201", "--out", "p.json"],
        "operator": ["--preset", "bdd", "--n", "11", "--dump", "o.csv"],
    }
    for command, argv in jobs.items():
        argv = [str(tmp_path / a) if a.endswith((".csv", ".json")) else a for a in argv]
        code, _, err = run([command] + argv, capsys)
        assert code == 0, (command, err)
    header, rows = read_csv(tmp_path / "v.csv")
    assert header == ["x", "q", "V", "V_eff", "V_plus", "V_minus"]
    report = json.loads((tmp_path / "l.json").read_text())
    assert report["factorization"]["worst"] <= 0.05
    assert len(read_csv(tmp_path / "o.csv")[1]) == 9


def test_eigenvector_files(tmp_path, capsys):
    argv = ["spectrum", "--levels", "2", "--out", str(tmp_path / "s.csv"), "--eigvec-out", str(tmp_path / "psi.csv")]
    assert run(argv + SMALL, capsys)[0] == 0
    header, rows = read_csv(tmp_path / "psi_1.csv")
    assert header == ["x", "psi"] and len(rows) == 401


def test_thread_env_in_subprocess(tmp_path):
    outs = []
    for threads in ("1", "4"):
        out = tmp_path / f"scan{threads}.csv"
        argv = [sys.executable, "-m", "pdmlab.cli", "scan", "--profile", "poly1", "--a-steps", "5", "--n", "401"]
        res = subprocess.run(argv + ["--out", str(out)], env={"PDMLAB_THREADS": threads, "PATH": ""}, capture_output=True)
        assert res.returncode == 0, res.stderr
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
