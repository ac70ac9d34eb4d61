"""Scenario-driven command line front end.

Usage:
    hwp <command> --config <path> [--out <dir>] [--seed <u64>]

Commands: solve, epsilon-sweep, geometry-check, identity-check,
regularity-scan, example-gen. Configs are flat ``key = value`` text files
(``#`` comments allowed); dotted keys group related settings. All outputs
are written as ``<command>_<name>.json`` plus CSV tables with deterministic
formatting, so identical configs and seeds reproduce identical bytes.
The environment variable HWP_THREADS caps the worker count used for
independent per-mode solves.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass, field as dc_field
from pathlib import Path

import numpy as np

from . import analysis, closedform, geometry, reporting
from . import quadrature as quadr
from .errors import (AliasingError, AnalysisError, ClosedFormError,
                     ConfigurationError, FieldDomainError, GeometryCheckError,
                     HwpError, MeshError, SolverError)
from .fields import parse_field
from .mesh import DEMO_DOMAINS, build_stacked_rectangles, sample_domain
from .periodic import EpsilonParams, epsilon_march, solve_periodic_harmonic
from .timefourier import HEAT, WAVE, FourierField

COMMANDS = ("solve", "epsilon-sweep", "geometry-check", "identity-check",
            "regularity-scan", "example-gen")

_EXIT_CODES = (
    (ConfigurationError, 2),
    (FileNotFoundError, 3),
    (MeshError, 10),
    (FieldDomainError, 11),
    (GeometryCheckError, 11),
    (SolverError, 12),
    (AliasingError, 13),
    (AnalysisError, 14),
    (ClosedFormError, 15),
)


@dataclass
class _Key:
    typ: str                     # int | float | str | bool | ints | floats
    default: object = None
    required: bool = False
    lo: float | None = None
    hi: float | None = None
    choices: tuple | None = None


def _k(typ, default=None, required=False, lo=None, hi=None, choices=None):
    return _Key(typ, default, required, lo, hi, choices)


_GRID_KEYS = {
    "grid.nx": _k("int", 33, lo=3, hi=4097),
    "grid.ny_w": _k("int", 33, lo=3, hi=4097),
    "grid.ny_h": _k("int", 33, lo=3, hi=4097),
    "grid.lx": _k("float", float(np.pi), lo=1e-8),
    "grid.ly_w": _k("float", 1.0, lo=1e-8),
    "grid.ly_h": _k("float", 1.0, lo=1e-8),
    "period": _k("float", float(2 * np.pi), lo=1e-8),
}

_COMMON_KEYS = {
    "command": _k("str"),
    "name": _k("str", "run"),
    "seed": _k("int", 0, lo=0),
    "tol": _k("float", 1e-10, lo=1e-16, hi=1e-2),
}

_FORCING_KEYS = {
    "forcing.wave": _k("str", "mode:2"),
    "forcing.wave.amplitude": _k("float", 1.0),
    "forcing.heat": _k("str", "none"),
    "forcing.heat.amplitude": _k("float", 1.0),
}

SCHEMAS: dict[str, dict[str, _Key]] = {
    "solve": {**_COMMON_KEYS, **_GRID_KEYS, **_FORCING_KEYS,
              "modes": _k("int", 16, lo=0, hi=512),
              "check.weak": _k("bool", False),
              "check.weak.tests": _k("int", 5, lo=1, hi=100)},
    "epsilon-sweep": {**_COMMON_KEYS, **_GRID_KEYS, **_FORCING_KEYS,
                      "modes": _k("int", 8, lo=1, hi=128),
                      "epsilons": _k("floats", (0.2, 0.1, 0.05)),
                      "steps": _k("int", 512, lo=4, hi=65536),
                      "period_tol": _k("float", 1e-7, lo=1e-14, hi=1e-1),
                      "max_periods": _k("int", 400, lo=1, hi=100000)},
    "geometry-check": {**_COMMON_KEYS,
                       "domain": _k("str", required=True, choices=DEMO_DOMAINS),
                       "resolution": _k("int", 32, lo=8, hi=4096),
                       "field": _k("str", required=True),
                       "directions": _k("int", 64, lo=64, hi=4096),
                       "poincare": _k("bool", False),
                       "poincare.nx": _k("int", 17, lo=5, hi=513),
                       "poincare.ny": _k("int", 17, lo=5, hi=513)},
    "identity-check": {**_COMMON_KEYS, **_GRID_KEYS,
                       "mode": _k("int", 2, lo=1, hi=64),
                       "field": _k("str", "graph-vertical:2"),
                       "equipartition": _k("bool", True)},
    "regularity-scan": {**_COMMON_KEYS,
                        "grid.nx": _k("int", 129, lo=3, hi=4097),
                        "grid.ny_w": _k("int", 65, lo=3, hi=4097),
                        "rule": _k("str", "G1", choices=("G1", "G2")),
                        "truncations": _k("ints", (8, 64))},
    "example-gen": {**_COMMON_KEYS, **_GRID_KEYS,
                    "mode": _k("int", 2, lo=1, hi=256)},
}


@dataclass
class Scenario:
    command: str
    values: dict = dc_field(default_factory=dict)
    out_dir: str = "."

    def __getitem__(self, key):
        return self.values[key]

    def get(self, key, default=None):
        return self.values.get(key, default)

    @property
    def name(self) -> str:
        return self.values["name"]

    @property
    def seed(self) -> int:
        return self.values["seed"]


def _convert(key: str, spec: _Key, raw: str):
    try:
        if spec.typ == "int":
            val = int(raw)
        elif spec.typ == "float":
            val = float(raw)
        elif spec.typ == "bool":
            low = raw.strip().lower()
            if low not in ("true", "false", "0", "1", "yes", "no"):
                raise ValueError(f"not a boolean: {raw!r}")
            val = low in ("true", "1", "yes")
        elif spec.typ == "ints":
            val = tuple(int(p) for p in raw.split(",") if p.strip())
        elif spec.typ == "floats":
            val = tuple(float(p) for p in raw.split(",") if p.strip())
        else:
            val = raw.strip()
    except ValueError as exc:
        raise ConfigurationError(f"key {key!r}: {exc}") from exc
    if spec.typ in ("int", "float"):
        if spec.lo is not None and val < spec.lo:
            raise ConfigurationError(
                f"key {key!r}: value {val} below minimum {spec.lo}")
        if spec.hi is not None and val > spec.hi:
            raise ConfigurationError(
                f"key {key!r}: value {val} above maximum {spec.hi}")
    if spec.choices is not None and val not in spec.choices:
        raise ConfigurationError(
            f"key {key!r}: {val!r} not one of {', '.join(map(str, spec.choices))}")
    return val


def parse_scenario(text: str, command: str, out_dir: str = ".") -> Scenario:
    """Parse and validate a flat key=value config for one command."""
    if command not in SCHEMAS:
        raise ConfigurationError(
            f"unknown command {command!r}; available: {', '.join(COMMANDS)}")
    schema = SCHEMAS[command]
    values: dict = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigurationError(f"line {lineno}: expected 'key = value'")
        key, _, raw = stripped.partition("=")
        key = key.strip()
        if key not in schema:
            raise ConfigurationError(
                f"unknown key {key!r} for command {command!r}")
        values[key] = _convert(key, schema[key], raw.strip())
    if values.get("command") not in (None, command):
        raise ConfigurationError(
            f"config says command={values['command']!r} but {command!r} was invoked")
    missing = [k for k, s in schema.items() if s.required and k not in values]
    if missing:
        raise ConfigurationError(
            f"missing required keys for {command!r}: {', '.join(sorted(missing))}")
    for key, spec in schema.items():
        values.setdefault(key, spec.default)
    values["command"] = command

    # referenced files must exist before execution starts
    for key in ("forcing.wave", "forcing.heat"):
        val = values.get(key)
        if isinstance(val, str) and val.startswith("file:"):
            path = val[5:]
            if not Path(path).is_file():
                raise FileNotFoundError(f"forcing file not found: {path}")
    return Scenario(command=command, values=values, out_dir=out_dir)


# ---------------------------------------------------------------------------
# Forcing construction
# ---------------------------------------------------------------------------

def _load_coefficient_file(path: str, period: float, shape, domain: str) -> FourierField:
    raw = np.genfromtxt(path, delimiter=",", names=True)
    raw = np.atleast_1d(raw)
    ks = raw["k"].astype(int)
    n = int(np.max(np.abs(ks))) if len(ks) else 0
    f = FourierField.zeros(period, n, shape, domain)
    for rec in raw:
        k, j, i = int(rec["k"]), int(rec["j"]), int(rec["i"])
        f.coeffs[k + n, j, i] += rec["re"] + 1j * rec["im"]
    return f


def _wave_forcing(scn: Scenario, grid) -> tuple[FourierField | None, dict]:
    text = scn["forcing.wave"]
    amp = scn["forcing.wave.amplitude"]
    meta = {"spec": text, "amplitude": amp}
    if text == "none":
        return None, meta
    if text.startswith("mode:"):
        n = int(text[5:])
        g, w_ref = closedform.analytic_mode(n, grid)
        meta["analytic_mode"] = n
        return g.scaled(amp), {**meta, "_w_ref": w_ref.scaled(amp)}
    if text.startswith("series:"):
        parts = text.split(":")
        rule = closedform.series_rule(parts[1])
        n_terms = int(parts[2]) if len(parts) > 2 else 8
        g, _ = closedform.series_forcing(rule, n_terms, grid)
        return g.scaled(amp), meta
    if text.startswith("file:"):
        return _load_coefficient_file(text[5:], scn["period"],
                                      (grid.ny_w, grid.nx), WAVE).scaled(amp), meta
    raise ConfigurationError(f"bad forcing.wave spec {text!r}")


def smooth_heat_forcing(grid, period: float, k: int = 1,
                        amplitude: float = 1.0) -> FourierField:
    """cos(k w t) * sin(pi x / Lx) * (1 + y / Ly_h) on the heat subdomain."""
    shape = np.sin(np.pi * grid.x / grid.lx)[None, :] * (1.0 + grid.y_h / grid.ly_h)[:, None]
    c = 0.5 * amplitude * shape
    return FourierField.from_mode_dict(period, max(k, 1), {k: c, -k: c}, HEAT)


def _heat_forcing(scn: Scenario, grid) -> tuple[FourierField | None, dict]:
    text = scn["forcing.heat"]
    amp = scn["forcing.heat.amplitude"]
    meta = {"spec": text, "amplitude": amp}
    if text == "none":
        return None, meta
    if text.startswith("smooth:"):
        k = int(text[7:])
        return smooth_heat_forcing(grid, scn["period"], k, amp), meta
    if text.startswith("file:"):
        return _load_coefficient_file(text[5:], scn["period"],
                                      (grid.ny_h, grid.nx), HEAT).scaled(amp), meta
    raise ConfigurationError(f"bad forcing.heat spec {text!r}")


def _build_grid(scn: Scenario):
    return build_stacked_rectangles(
        scn["grid.lx"], scn["grid.ly_w"], scn["grid.ly_h"],
        scn["grid.nx"], scn["grid.ny_w"], scn["grid.ny_h"])


def _out(scn: Scenario, suffix: str) -> str:
    stem = f"{scn.command.replace('-', '_')}_{scn.name}"
    return str(Path(scn.out_dir) / f"{stem}{suffix}")


def _phase(msg: str) -> None:
    print(f"[hwp] {msg}")


# ---------------------------------------------------------------------------
# Command runners
# ---------------------------------------------------------------------------

def _run_solve(scn: Scenario) -> dict:
    grid = _build_grid(scn)
    g, meta_w = _wave_forcing(scn, grid)
    f, meta_h = _heat_forcing(scn, grid)
    w_ref = meta_w.pop("_w_ref", None)
    _phase(f"solving {scn['modes']} modes on {grid.nx}x{grid.ny_w}+{grid.ny_h} grid")
    t0 = time.perf_counter()
    report = solve_periodic_harmonic(grid, f, g, scn["modes"], tol=scn["tol"])
    elapsed = time.perf_counter() - t0

    mode_rows = []
    mass_w = quadr.trap_mass(grid.ny_w, grid.nx, grid.hx, grid.hy_w)
    mass_h = quadr.trap_mass(grid.ny_h, grid.nx, grid.hx, grid.hy_h)
    for k in range(-scn["modes"], scn["modes"] + 1):
        u_k = report.u.mode(k)
        w_k = report.w.mode(k)
        mode_rows.append((k,
                          float(np.sqrt(quadr.norm_sq(mass_h, u_k))),
                          float(np.sqrt(quadr.norm_sq(mass_w, w_k))),
                          report.mode_residuals.get(abs(k), 0.0)))
    reporting.write_csv(_out(scn, "_modes.csv"), ["k", "u_norm", "w_norm", "residual"],
                        mode_rows)

    for j in range(8):
        t = j * report.period / 8.0
        w_snap = report.w.sample_real(np.array([t]))[0]
        u_snap = report.u.sample_real(np.array([t]))[0]
        reporting.write_grid_csv(_out(scn, f"_w_t{j}.csv"), w_snap)
        reporting.write_grid_csv(_out(scn, f"_u_t{j}.csv"), u_snap)

    summary = {
        "grid": {"nx": grid.nx, "ny_w": grid.ny_w, "ny_h": grid.ny_h,
                 "lx": grid.lx, "ly_w": grid.ly_w, "ly_h": grid.ly_h},
        "period": report.period,
        "modes": scn["modes"],
        "forcing": {"wave": meta_w, "heat": meta_h},
        "max_residual": report.max_residual(),
        "norms": {
            "u_l2": analysis.sobolev_time_norm(report.u, 0, grid, "l2"),
            "w_l2": analysis.sobolev_time_norm(report.w, 0, grid, "l2"),
            "w_h1": analysis.sobolev_time_norm(report.w, 0, grid, "h1"),
        },
        "timings": report.timings,
        "wall_seconds": elapsed,
        "seed": scn.seed,
    }
    if w_ref is not None and f is None:
        diff = report.w - w_ref
        rel = (analysis.sobolev_time_norm(diff, 0, grid, "l2")
               / max(analysis.sobolev_time_norm(w_ref, 0, grid, "l2"), 1e-300))
        summary["relative_error_vs_analytic"] = rel
        _phase(f"relative error vs analytic solution: {rel:.3e}")
    if scn["check.weak"]:
        summary["weak_residual"] = analysis.weak_residual(
            report, f, g, grid, n_tests=scn["check.weak.tests"], seed=scn.seed)
    reporting.write_json(_out(scn, ".json"), summary)
    _phase(f"max mode residual {report.max_residual():.3e}, wrote {_out(scn, '.json')}")
    return summary


def _run_epsilon_sweep(scn: Scenario) -> dict:
    grid = _build_grid(scn)
    g, meta_w = _wave_forcing(scn, grid)
    f, meta_h = _heat_forcing(scn, grid)
    meta_w.pop("_w_ref", None)
    _phase("reference harmonic solve")
    reference = solve_periodic_harmonic(grid, f, g, scn["modes"], tol=scn["tol"])
    w_ref_norm = max(analysis.sobolev_time_norm(reference.w, 0, grid, "l2"), 1e-300)

    rows = []
    gaps = []
    ratios = []
    for eps in scn["epsilons"]:
        params = EpsilonParams(eps=eps, n_steps=scn["steps"],
                               period_tol=scn["period_tol"],
                               max_periods=scn["max_periods"],
                               n_report_modes=scn["modes"])
        _phase(f"damped march eps={eps:g}")
        rep = epsilon_march(grid, f, g, params, period=scn["period"])
        gap = (analysis.sobolev_time_norm(rep.w - reference.w, 0, grid, "l2")
               / w_ref_norm)
        est = analysis.estimate_check(rep, f, g, "damped-energy", k=0)
        contraction = rep.params["contraction"]
        rows.append((eps, rep.params["dt"], rep.params["periods"],
                     contraction[-1] if contraction else np.nan, gap, est["ratio"]))
        gaps.append(gap)
        ratios.append(est["ratio"])
        _phase(f"eps={eps:g}: {rep.params['periods']} periods, gap {gap:.3e}")
    reporting.write_csv(_out(scn, ".csv"),
                        ["epsilon", "dt", "periods", "contraction", "gap_rel",
                         "damped_energy_ratio"], rows)
    summary = {
        "epsilons": list(scn["epsilons"]),
        "gaps": gaps,
        "damped_energy_ratios": ratios,
        "forcing": {"wave": meta_w, "heat": meta_h},
        "steps": scn["steps"],
        "seed": scn.seed,
    }
    reporting.write_json(_out(scn, ".json"), summary)
    return summary


def _run_geometry_check(scn: Scenario) -> dict:
    spec = parse_field(scn["field"])
    _phase(f"sampling domain {scn['domain']} at resolution {scn['resolution']}")
    samples = sample_domain(scn["domain"], scn["resolution"])
    report = geometry.check_conditions(spec, samples, tol=scn["tol"],
                                       n_directions=scn["directions"])
    payload = report.as_dict()
    payload["area"] = samples.area
    reporting.write_csv(_out(scn, "_boundary.csv"),
                        ["x", "y", "nx", "ny", "tag", "b_dot_n"],
                        geometry.boundary_sign_table(spec, samples))
    if scn["domain"] == "trapezoid":
        obs = geometry.trapezoid_obstruction(spec, scn["resolution"], tol=scn["tol"])
        payload["trapezoid_obstruction"] = obs.as_dict()
        _phase(f"trapezoid counting identity mismatch {obs.mismatch:.3e}, "
               f"{len(obs.sign_violations)} sign violations")
    if scn["poincare"]:
        if scn["domain"] not in ("unit-square", "rectangle"):
            raise ConfigurationError(
                "the Rayleigh-quotient check runs on rectangular domains only")
        lx = 1.0 if scn["domain"] == "unit-square" else np.pi
        grid = build_stacked_rectangles(lx, 1.0, 1.0,
                                        scn["poincare.nx"], scn["poincare.ny"], 3)
        pc = geometry.check_poincare(spec, grid)
        payload["poincare"] = {"rayleigh_min": pc.rayleigh_min,
                               "iterations": pc.iterations,
                               "converged": pc.converged}
        _phase(f"rayleigh_min = {pc.rayleigh_min:.6e} in {pc.iterations} iterations")
    reporting.write_json(_out(scn, ".json"), payload)
    _phase(f"verdicts: {report.verdicts}")
    return payload


def _run_identity_check(scn: Scenario) -> dict:
    grid = _build_grid(scn)
    spec = parse_field(scn["field"])
    n = scn["mode"]
    g, w = closedform.analytic_mode(n, grid)
    _phase(f"flow-multiplier identity for analytic mode {n}, field {spec.describe()}")
    report = analysis.multiplier_identity_residual(w, g, None, None, spec, grid)
    payload = report.as_dict()
    payload["mode"] = n
    payload["field"] = spec.describe()
    if scn["equipartition"]:
        payload["equipartition_residual"] = analysis.equipartition_residual(w, g, grid)
    reporting.write_csv(_out(scn, "_terms.csv"), ["term", "value"],
                        sorted(report.terms.items()))
    reporting.write_json(_out(scn, ".json"), payload)
    _phase(f"identity residual {report.residual:.3e} "
           f"(lhs {report.lhs_value:.6e}, rhs {report.rhs_value:.6e})")
    return payload


def _run_regularity_scan(scn: Scenario) -> dict:
    grid = build_stacked_rectangles(np.pi, 1.0, 1.0, scn["grid.nx"],
                                    scn["grid.ny_w"], 3)
    rule = closedform.series_rule(scn["rule"])
    _phase(f"scan rule {rule.tag}, truncations {scn['truncations']}")
    result = analysis.regularity_scan(rule, scn["truncations"], grid)
    reporting.write_csv(_out(scn, ".csv"), ["n_terms", "s0", "s1", "grad_norm"],
                        result["rows"])
    reporting.write_json(_out(scn, ".json"),
                         {"rule": result["rule"], "verdicts": result["verdicts"],
                          "seed": scn.seed})
    _phase(f"verdicts: {result['verdicts']}")
    return result


def _run_example_gen(scn: Scenario) -> dict:
    grid = _build_grid(scn)
    n = scn["mode"]
    g, w = closedform.analytic_mode(n, grid)
    rows = []
    for k in (n, -n):
        c = g.mode(k)
        for j in range(grid.ny_w):
            for i in range(grid.nx):
                if c[j, i] != 0:
                    rows.append((k, j, i, c[j, i].real, c[j, i].imag))
    reporting.write_csv(_out(scn, "_g_coeffs.csv"), ["k", "j", "i", "re", "im"], rows)
    amp_w = np.sin(n * grid.x)[None, :] * closedform.bump_profile().phi(grid.y_w)[:, None]
    reporting.write_grid_csv(_out(scn, "_w_amplitude.csv"), amp_w)
    payload = {
        "mode": n,
        "w_l2": analysis.sobolev_time_norm(w, 0, grid, "l2"),
        "w_h1": analysis.sobolev_time_norm(w, 0, grid, "h1"),
        "g_l2": analysis.sobolev_time_norm(g, 0, grid, "l2"),
        "seed": scn.seed,
    }
    reporting.write_json(_out(scn, ".json"), payload)
    _phase(f"wrote analytic mode {n} data")
    return payload


_RUNNERS = {
    "solve": _run_solve,
    "epsilon-sweep": _run_epsilon_sweep,
    "geometry-check": _run_geometry_check,
    "identity-check": _run_identity_check,
    "regularity-scan": _run_regularity_scan,
    "example-gen": _run_example_gen,
}


def run_scenario(scn: Scenario) -> int:
    """Execute a parsed scenario; returns the process exit status."""
    try:
        Path(scn.out_dir).mkdir(parents=True, exist_ok=True)
        _RUNNERS[scn.command](scn)
        return 0
    except Exception as exc:  # mapped to per-module exit codes below
        code = 1
        for klass, c in _EXIT_CODES:
            if isinstance(exc, klass):
                code = c
                break
        record = {"error_type": type(exc).__name__, "message": str(exc),
                  "exit_code": code}
        try:
            reporting.write_json(_out(scn, "_error.json"), record)
        except OSError:
            pass
        print(f"[hwp] error ({type(exc).__name__}): {exc}", file=sys.stderr)
        if not isinstance(exc, (HwpError, FileNotFoundError)):
            raise
        return code


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="hwp",
        description="Periodic heat-wave solver and verifier scenarios.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", required=True, help="flat key=value config file")
    parser.add_argument("--out", default=".", help="output directory")
    parser.add_argument("--seed", type=int, default=None,
                        help="override the config seed")
    args = parser.parse_args(argv)
    try:
        text = Path(args.config).read_text()
    except OSError as exc:
        print(f"[hwp] cannot read config: {exc}", file=sys.stderr)
        return 3
    try:
        scn = parse_scenario(text, args.command, out_dir=args.out)
    except (ConfigurationError, FileNotFoundError) as exc:
        print(f"[hwp] config error: {exc}", file=sys.stderr)
        return 2 if isinstance(exc, ConfigurationError) else 3
    if args.seed is not None:
        scn.values["seed"] = args.seed
    return run_scenario(scn)


if __name__ == "__main__":
    sys.exit(main())
