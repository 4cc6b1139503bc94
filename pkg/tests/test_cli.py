import json

import numpy as np
import pytest

from fracmfe.cli import main


def run(argv):
    return main([str(a) for a in argv])


def test_solve_writes_artifacts(tmp_path):
    out = tmp_path / "run"
    code = run(["solve", "--rho", "3.14159", "--output", out])
    assert code == 0
    csv = out / "solution_rho_3.141590.csv"
    js = out / "solution_rho_3.141590.json"
    assert csv.exists() and js.exists()
    header = json.loads(js.read_text())
    assert header["schema_version"] == 1
    assert header["converged"] is True
    assert header["grid"] == {"n": 256, "kind": "graded_composite"}
    assert "constants_version" in header
    rows = csv.read_text().splitlines()
    assert rows[0] == "x,u"
    assert len(rows) == 257


def test_solve_supercritical_exits_nonzero(tmp_path):
    code = run(["solve", "--rho", "7.0", "--output", tmp_path / "x",
                "--max-iter", "300"])
    assert code in (2, 3)


def test_solve_rejects_negative_rho(tmp_path):
    assert run(["solve", "--rho", "-1", "--output", tmp_path / "x"]) == 1


def test_solve_rejects_unknown_config_key(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"rho": 1.0, "bogus": 3}))
    assert run(["solve", "--config", cfg, "--output", tmp_path / "x"]) == 1


def test_solve_config_file_with_flag_precedence(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"rho": 1.0, "n": 96}))
    out = tmp_path / "run"
    assert run(["solve", "--config", cfg, "--output", out]) == 0
    header = json.loads((out / "solution_rho_1.000000.json").read_text())
    assert header["grid"]["n"] == 96      # config applied
    out2 = tmp_path / "run2"
    assert run(["solve", "--config", cfg, "--n", "128",
                "--output", out2]) == 0
    header2 = json.loads((out2 / "solution_rho_1.000000.json").read_text())
    assert header2["grid"]["n"] == 128    # flag wins over config


def test_continue_small_range(tmp_path):
    out = tmp_path / "cont"
    code = run(["continue", "--rho-start", "0.5", "--rho-end", "1.0",
                "--step", "0.1", "--output", out])
    assert code == 0
    rows = (out / "branch.csv").read_text().splitlines()
    assert rows[0].startswith("rho,u0")
    u0 = [float(r.split(",")[1]) for r in rows[1:]]
    assert len(u0) == 6
    assert all(a < b for a, b in zip(u0, u0[1:]))


def test_continue_rejects_empty_range(tmp_path):
    assert run(["continue", "--rho-start", "1.0", "--rho-end", "0.5",
                "--output", tmp_path / "x"]) == 1


def test_audit_roundtrip(tmp_path):
    out = tmp_path / "run"
    assert run(["solve", "--rho", "3.14159", "--output", out]) == 0
    prefix = out / "solution_rho_3.141590"
    assert run(["audit", prefix]) == 0


def test_audit_detects_tampered_rho(tmp_path):
    out = tmp_path / "run"
    assert run(["solve", "--rho", "3.14159", "--output", out]) == 0
    js = out / "solution_rho_3.141590.json"
    header = json.loads(js.read_text())
    header["rho"] = 7.0
    js.write_text(json.dumps(header, indent=2, sort_keys=True) + "\n")
    assert run(["audit", out / "solution_rho_3.141590"]) == 4


def test_audit_rejects_truncated_csv(tmp_path):
    out = tmp_path / "run"
    assert run(["solve", "--rho", "3.14159", "--output", out]) == 0
    csv = out / "solution_rho_3.141590.csv"
    lines = csv.read_text().splitlines()
    csv.write_text("\n".join(lines[:100]) + "\n")
    assert run(["audit", out / "solution_rho_3.141590"]) == 1


def test_green_samples_file(tmp_path):
    out = tmp_path / "green.csv"
    assert run(["green", "--points=-1.5:1.5:7", "--output", out]) == 0
    rows = out.read_text().splitlines()
    assert rows[0] == "x,G0,H"
    table = {float(r.split(",")[0]): r.split(",")[1:] for r in rows[1:]}
    assert float(table[1.5][0]) == 0.0            # exterior sample
    assert abs(float(table[0.5][0]) - 0.41920072) < 1e-7
    # symmetric spec produces a file symmetric under x -> -x
    for x in (0.5, 1.0, 1.5):
        assert table[x] == table[-x]


def test_green_samples_stdout(capsys):
    assert run(["green", "--points", "0.5,1.2"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("x,G0,H\n")
    assert "1.2,0,0" in out


def test_green_rejects_bad_points(tmp_path):
    assert run(["green", "--points", "nonsense"]) == 1


def test_solve_determinism(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run(["solve", "--rho", "2.5", "--output", a]) == 0
    assert run(["solve", "--rho", "2.5", "--output", b]) == 0
    for suffix in (".csv", ".json"):
        fa = a / ("solution_rho_2.500000" + suffix)
        fb = b / ("solution_rho_2.500000" + suffix)
        assert fa.read_bytes() == fb.read_bytes()


def test_green_determinism(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(["green", "--points=-0.9:0.9:31", "--output", a]) == 0
    assert run(["green", "--points=-0.9:0.9:31", "--output", b]) == 0
    assert a.read_bytes() == b.read_bytes()
