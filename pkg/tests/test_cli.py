import json
from pathlib import Path

import numpy as np
import pytest

from hwp.cli import main, parse_scenario
from hwp.errors import ConfigurationError


MINIMAL_SOLVE = """
# minimal solve scenario
grid.nx = 17
grid.ny_w = 17
grid.ny_h = 17
forcing.wave = mode:2
"""


def test_parse_minimal_solve_fills_defaults():
    scn = parse_scenario(MINIMAL_SOLVE, "solve")
    assert scn["modes"] == 16
    assert scn["tol"] == 1e-10
    assert scn["period"] == pytest.approx(2 * np.pi)
    assert scn.name == "run"


def test_parse_rejects_negative_mode_count():
    with pytest.raises(ConfigurationError) as err:
        parse_scenario(MINIMAL_SOLVE + "modes = -1\n", "solve")
    assert "modes" in str(err.value)


def test_parse_rejects_unknown_key():
    with pytest.raises(ConfigurationError) as err:
        parse_scenario("gridd.nx = 9\n", "solve")
    assert "gridd.nx" in str(err.value)


def test_parse_reports_missing_required_keys():
    with pytest.raises(ConfigurationError) as err:
        parse_scenario("resolution = 16\n", "geometry-check")
    msg = str(err.value)
    assert "domain" in msg and "field" in msg


def test_parse_rejects_missing_forcing_file():
    with pytest.raises(FileNotFoundError) as err:
        parse_scenario(MINIMAL_SOLVE + "forcing.heat = file:/does/not/exist.csv\n",
                       "solve")
    assert "/does/not/exist.csv" in str(err.value)


def test_parse_command_mismatch():
    with pytest.raises(ConfigurationError):
        parse_scenario("command = solve\n", "geometry-check")


def _write(tmp_path, text):
    p = tmp_path / "scenario.cfg"
    p.write_text(text)
    return str(p)


def test_solve_scenario_end_to_end(tmp_path):
    cfg = _write(tmp_path, MINIMAL_SOLVE + "name = demo\nmodes = 3\n")
    out = tmp_path / "out"
    assert main(["solve", "--config", cfg, "--out", str(out)]) == 0
    summary = json.loads((out / "solve_demo.json").read_text())
    assert summary["max_residual"] <= 1e-9
    assert summary["relative_error_vs_analytic"] < 0.1
    assert (out / "solve_demo_modes.csv").exists()
    assert (out / "solve_demo_w_t0.csv").exists()
    assert (out / "solve_demo_u_t7.csv").exists()


def test_solve_determinism_byte_identical(tmp_path):
    cfg = _write(tmp_path, MINIMAL_SOLVE + "modes = 2\nseed = 7\n")
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert main(["solve", "--config", cfg, "--out", str(out1)]) == 0
    assert main(["solve", "--config", cfg, "--out", str(out2)]) == 0
    for p1 in sorted(out1.glob("*.csv")):
        p2 = out2 / p1.name
        assert p1.read_bytes() == p2.read_bytes()


def test_geometry_check_spiral_on_shell(tmp_path):
    cfg = _write(tmp_path, """
domain = shell
field = spiral:0.2
resolution = 16
name = shell
""")
    out = tmp_path / "out"
    assert main(["geometry-check", "--config", cfg, "--out", str(out)]) == 0
    payload = json.loads((out / "geometry_check_shell.json").read_text())
    assert payload["contractivity_margin"] == pytest.approx(0.2, abs=1e-10)
    assert payload["verdicts"]["generalized_optics"]
    assert (out / "geometry_check_shell_boundary.csv").exists()


def test_geometry_check_unit_square_with_poincare(tmp_path):
    cfg = _write(tmp_path, """
domain = unit-square
field = graph-vertical:2
resolution = 16
poincare = true
poincare.nx = 9
poincare.ny = 9
""")
    out = tmp_path / "out"
    assert main(["geometry-check", "--config", cfg, "--out", str(out)]) == 0
    payload = json.loads((out / "geometry_check_run.json").read_text())
    assert payload["poincare"]["rayleigh_min"] > 0
    assert payload["graph_quadform_margin"] >= 0.24


def test_identity_check_scenario(tmp_path):
    cfg = _write(tmp_path, "grid.nx = 33\ngrid.ny_w = 33\ngrid.ny_h = 5\nmode = 2\n")
    out = tmp_path / "out"
    assert main(["identity-check", "--config", cfg, "--out", str(out)]) == 0
    payload = json.loads((out / "identity_check_run.json").read_text())
    assert payload["residual"] < 1e-2
    assert payload["equipartition_residual"] < 1e-2


def test_regularity_scan_scenario(tmp_path):
    cfg = _write(tmp_path, "rule = G1\ntruncations = 4,8\ngrid.nx = 33\ngrid.ny_w = 17\n")
    out = tmp_path / "out"
    assert main(["regularity-scan", "--config", cfg, "--out", str(out)]) == 0
    payload = json.loads((out / "regularity_scan_run.json").read_text())
    assert payload["verdicts"]["s1_increasing"]


def test_example_gen_roundtrip_as_forcing_file(tmp_path):
    cfg = _write(tmp_path, "mode = 2\ngrid.nx = 17\ngrid.ny_w = 17\ngrid.ny_h = 17\n")
    out = tmp_path / "out"
    assert main(["example-gen", "--config", cfg, "--out", str(out)]) == 0
    coeffs = out / "example_gen_run_g_coeffs.csv"
    assert coeffs.exists()
    solve_cfg = _write(tmp_path, f"""
grid.nx = 17
grid.ny_w = 17
grid.ny_h = 17
modes = 3
forcing.wave = file:{coeffs}
name = fromfile
""")
    out2 = tmp_path / "out2"
    assert main(["solve", "--config", solve_cfg, "--out", str(out2)]) == 0
    ref_cfg = _write(tmp_path, MINIMAL_SOLVE + "modes = 3\nname = direct\n")
    out3 = tmp_path / "out3"
    assert main(["solve", "--config", ref_cfg, "--out", str(out3)]) == 0
    a = json.loads((out2 / "solve_fromfile.json").read_text())["norms"]
    b = json.loads((out3 / "solve_direct.json").read_text())["norms"]
    assert a["w_l2"] == pytest.approx(b["w_l2"], rel=1e-12)


def test_error_path_writes_machine_readable_record(tmp_path):
    cfg = _write(tmp_path, "domain = trapezoid\nfield = arc\nresolution = 16\n")
    out = tmp_path / "out"
    # arc-renormalized field is undefined at y = 0 on the trapezoid interface
    code = main(["geometry-check", "--config", cfg, "--out", str(out)])
    assert code == 11
    record = json.loads((out / "geometry_check_run_error.json").read_text())
    assert record["exit_code"] == 11
    assert record["error_type"] == "FieldDomainError"


def test_bad_config_path_exit_code():
    assert main(["solve", "--config", "/nope/missing.cfg"]) == 3


def test_threaded_solve_matches_serial(tmp_path, monkeypatch):
    cfg = _write(tmp_path, MINIMAL_SOLVE + "modes = 3\n")
    out1, out2 = tmp_path / "serial", tmp_path / "threads"
    assert main(["solve", "--config", cfg, "--out", str(out1)]) == 0
    monkeypatch.setenv("HWP_THREADS", "2")
    assert main(["solve", "--config", cfg, "--out", str(out2)]) == 0
    a = (out1 / "solve_run_modes.csv").read_bytes()
    b = (out2 / "solve_run_modes.csv").read_bytes()
    assert a == b
