"""Command-line front end: named experiments writing deterministic CSVs.

Config format is flat ``key=value`` text, one key per line, ``#`` comments;
flags override file values, presets sit below both.  Every output file
starts with a header row and all floats carry 17 significant digits so that
repeated runs are byte-identical.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np

from . import bic as bic_mod
from .dde_solver import SolverDivergence
from .dynamics import default_step, simulate_emission
from .field import default_grid_spacing, intensity_map
from .mode_oracle import NormDrift, build_mode_grid, default_bandwidth, integrate_modes
from .model import AmplitudePair, SystemParams, dressed_basis

EXPERIMENTS = (
    "decay",
    "dressed-scan",
    "bic-design",
    "bic-scan",
    "field-map",
    "oracle-compare",
)

_STR_KEYS = ("experiment", "out", "note")
_INT_KEYS = ("nx", "nt", "n_modes", "design_m", "design_k", "scan_count")
_FLOAT_KEYS = (
    "gamma",
    "omega_rabi",
    "omega_e",
    "delta",
    "distance",
    "velocity",
    "re_ce0",
    "im_ce0",
    "re_cs0",
    "im_cs0",
    "t_end",
    "step",
    "x_max",
    "bandwidth",
    "scan_start",
    "scan_stop",
    "tol_phase",
)
VALID_KEYS = _STR_KEYS + _INT_KEYS + _FLOAT_KEYS


class ConfigError(ValueError):
    """Bad configuration: unknown key, bad value, or violated invariant."""


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str = ""
    gamma: float = 1.0
    omega_rabi: float = 0.0
    omega_e: float | None = None
    delta: float = 0.0
    distance: float = 0.0
    velocity: float = 1.0
    re_ce0: float = 1.0
    im_ce0: float = 0.0
    re_cs0: float = 0.0
    im_cs0: float = 0.0
    t_end: float = 20.0
    step: float | None = None
    nx: int | None = None
    nt: int = 201
    x_max: float | None = None
    n_modes: int = 4001
    bandwidth: float | None = None
    design_m: int = 10
    design_k: int = 1
    scan_start: float = 0.0
    scan_stop: float | None = None
    scan_count: int = 101
    tol_phase: float | None = None
    out: str = ""
    note: str = ""

    def initial(self) -> AmplitudePair:
        return AmplitudePair(
            complex(self.re_ce0, self.im_ce0),
            complex(self.re_cs0, self.im_cs0),
            "bare",
        )

    def resolved_omega_e(self) -> float:
        # non-BIC experiments default to 100*gamma; bic-design derives its own
        return self.omega_e if self.omega_e is not None else 100.0 * self.gamma

    def system_params(self) -> SystemParams:
        try:
            return SystemParams(
                gamma=self.gamma,
                omega_rabi=self.omega_rabi,
                omega_e=self.resolved_omega_e(),
                delta=self.delta,
                distance=self.distance,
                velocity=self.velocity,
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc


def _convert(key: str, raw: str):
    if key in _STR_KEYS:
        return raw
    try:
        if key in _INT_KEYS:
            return int(raw)
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"invalid value {raw!r} for key {key!r}") from exc


def parse_config_text(text: str) -> dict:
    """Parse flat key=value text into a typed dict."""
    out: dict = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"line {lineno}: expected key=value, got {body!r}")
        key, _, raw = body.partition("=")
        key = key.strip()
        if key not in VALID_KEYS:
            raise ConfigError(
                f"unknown key {key!r}; valid keys: {', '.join(VALID_KEYS)}"
            )
        out[key] = _convert(key, raw.strip())
    return out


def load_config(
    path: str | Path | None = None,
    overrides: dict | None = None,
    preset: str | None = None,
) -> ExperimentConfig:
    """Merge preset < file < overrides on top of the defaults."""
    merged: dict = {}
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(
                f"unknown preset {preset!r}; valid presets: {', '.join(sorted(PRESETS))}"
            )
        merged.update(PRESETS[preset])
    if path is not None:
        p = Path(path)
        if not p.is_file():
            raise ConfigError(f"config file not found: {p}")
        merged.update(parse_config_text(p.read_text()))
    if overrides:
        for key in overrides:
            if key not in VALID_KEYS:
                raise ConfigError(
                    f"unknown key {key!r}; valid keys: {', '.join(VALID_KEYS)}"
                )
        merged.update(overrides)

    cfg = ExperimentConfig(**merged)
    if cfg.experiment not in EXPERIMENTS:
        raise ConfigError(
            f"unknown experiment {cfg.experiment!r}; valid: {', '.join(EXPERIMENTS)}"
        )
    if not (cfg.t_end > 0.0):
        raise ConfigError("t_end must be > 0")
    if not cfg.out:
        raise ConfigError("output directory 'out' is required")
    return cfg


# ---------------------------------------------------------------------------
# deterministic serialization

def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if x is None:
        return ""
    return f"{float(x):.17g}"


def _write_rows(path: Path, header: str, rows) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _write_metadata(path: Path, cfg: ExperimentConfig, extra: dict) -> None:
    values = {f.name: getattr(cfg, f.name) for f in fields(cfg)}
    values.update(extra)
    with open(path, "w", newline="") as fh:
        for key in sorted(values):
            val = values[key]
            if val is None:
                continue
            fh.write(f"{key}={_fmt(val) if isinstance(val, (int, float, np.floating, np.integer)) else val}\n")


def _population_rows(run):
    ce, cs = run.bare_amplitudes(run.times)
    for t, a, b, pe, ps in zip(run.times, ce, cs, run.p_e, run.p_s):
        yield t, a.real, a.imag, b.real, b.imag, pe, ps


def _write_population(out: Path, run) -> None:
    _write_rows(
        out / "population.csv",
        "t,re_ce,im_ce,re_cs,im_cs,pe,ps",
        _population_rows(run),
    )


def _write_bic(out: Path, sol: bic_mod.BicSolution, basis) -> None:
    _write_rows(
        out / "bic.csv",
        "omega_plus,omega_minus,n_plus,n_minus,"
        "re_res_plus,im_res_plus,re_res_minus,im_res_minus",
        [
            (
                basis.omega_plus,
                basis.omega_minus,
                sol.n_plus,
                sol.n_minus,
                sol.residue_plus.real,
                sol.residue_plus.imag,
                sol.residue_minus.real,
                sol.residue_minus.imag,
            )
        ],
    )


# ---------------------------------------------------------------------------
# experiments

def _run_decay(cfg: ExperimentConfig, out: Path) -> dict:
    p = cfg.system_params()
    run = simulate_emission(p, cfg.initial(), cfg.t_end, h=cfg.step)
    _write_population(out, run)
    return {"tau": p.tau, "omega_s": p.omega_s, "step_used": run.trajectory.step}

def _run_dressed_scan(cfg: ExperimentConfig, out: Path) -> dict:
    p0 = cfg.system_params()
    stop = cfg.scan_stop
    if stop is None:
        stop = 2.0 * max(cfg.omega_rabi, cfg.gamma)
    tol = cfg.tol_phase if cfg.tol_phase is not None else bic_mod.TOL_PHASE_DETECT
    rows = []
    for om in np.linspace(cfg.scan_start, stop, cfg.scan_count):
        p = replace(p0, omega_rabi=float(om))
        if p.omega_rabi == 0.0 and p.delta == 0.0:
            continue  # dressed basis undefined at the degenerate point
        b = dressed_basis(p)
        if 0.0 < p.tau < math.inf:
            res_p, _ = bic_mod.phase_residual(b.omega_plus, p.tau)
            res_m, _ = bic_mod.phase_residual(b.omega_minus, p.tau)
            flags = (int(abs(res_p) <= tol), int(abs(res_m) <= tol))
        else:
            res_p = res_m = math.nan
            flags = (0, 0)
        rows.append(
            (om, b.omega_plus, b.omega_minus, b.delta_big, b.sin_theta,
             b.cos_theta, res_p, res_m, flags[0], flags[1])
        )
    _write_rows(
        out / "dressed.csv",
        "omega_rabi,omega_plus,omega_minus,delta_big,sin_theta,cos_theta,"
        "phase_plus,phase_minus,bic_plus,bic_minus",
        rows,
    )
    return {"tau": p0.tau, "scan_stop_used": stop, "tol_phase_used": tol}

def _run_bic_design(cfg: ExperimentConfig, out: Path) -> dict:
    p = bic_mod.design_bic_geometry(
        cfg.gamma, cfg.omega_rabi, cfg.delta, cfg.design_m, cfg.design_k,
        velocity=cfg.velocity,
    )
    sol = bic_mod.bic_frequencies(p, init=cfg.initial())
    _write_bic(out, sol, dressed_basis(p))
    run = simulate_emission(p, cfg.initial(), cfg.t_end, h=cfg.step)
    _write_population(out, run)
    return {
        "designed_omega_e": p.omega_e,
        "designed_distance": p.distance,
        "tau": p.tau,
        "n_plus": sol.n_plus,
        "n_minus": sol.n_minus,
        "step_used": run.trajectory.step,
    }

def _run_bic_scan(cfg: ExperimentConfig, out: Path) -> dict:
    p = cfg.system_params()
    tol = cfg.tol_phase if cfg.tol_phase is not None else bic_mod.TOL_PHASE_DETECT
    sol = bic_mod.bic_frequencies(p, tol_phase=tol, init=cfg.initial())
    _write_bic(out, sol, dressed_basis(p))
    return {"tau": p.tau, "tol_phase_used": tol,
            "has_plus": int(sol.has_plus), "has_minus": int(sol.has_minus)}

def _run_field_map(cfg: ExperimentConfig, out: Path) -> dict:
    p = cfg.system_params()
    x_max = cfg.x_max
    if x_max is None:
        x_max = p.velocity * cfg.t_end + p.distance + 0.5 * p.coherence_length
    nx = cfg.nx
    if nx is None:
        # resolve the fastest fringe, capped to keep files tractable
        nx = min(2001, int(math.ceil(x_max / default_grid_spacing(p))) + 1)
    run = simulate_emission(p, cfg.initial(), cfg.t_end, h=cfg.step)
    grid = intensity_map(run, x_max, nx, cfg.nt, t_max=cfg.t_end)
    _write_rows(
        out / "intensity.csv",
        "t,x,intensity",
        (
            (t, x, grid.intensity[i, j])
            for i, t in enumerate(grid.t_grid)
            for j, x in enumerate(grid.x_grid)
        ),
    )
    norm_rows = []
    for i, t in enumerate(grid.t_grid):
        if x_max > p.velocity * t + p.distance:
            photon = float(np.trapezoid(grid.intensity[i], grid.x_grid))
            ce, cs = run.bare_amplitudes(float(t))
            pe, ps = abs(ce) ** 2, abs(cs) ** 2
            norm_rows.append((t, pe, ps, photon, pe + ps + photon))
    _write_rows(out / "norm.csv", "t,pe,ps,photon_norm,total", norm_rows)
    _write_population(out, run)
    return {"x_max_used": x_max, "nx_used": nx, "tau": p.tau,
            "step_used": run.trajectory.step}

def _run_oracle_compare(cfg: ExperimentConfig, out: Path) -> dict:
    p = cfg.system_params()
    bw = cfg.bandwidth if cfg.bandwidth is not None else default_bandwidth(p)
    grid = build_mode_grid(p, bw, cfg.n_modes, t_end=cfg.t_end)
    h = cfg.step if cfg.step is not None else 1e-3 / p.gamma
    oracle = integrate_modes(p, grid, cfg.initial(), cfg.t_end, h=h)
    run = simulate_emission(p, cfg.initial(), cfg.t_end, h=h)
    ce, _ = run.bare_amplitudes(oracle.times)
    pe_dde = np.abs(ce) ** 2
    diff = np.abs(oracle.p_e - pe_dde)
    _write_rows(
        out / "oracle.csv",
        "t,pe_dde,pe_oracle,abs_diff,norm",
        zip(oracle.times, pe_dde, oracle.p_e, diff, oracle.norm),
    )
    report = {
        "n_modes": cfg.n_modes,
        "bandwidth": bw,
        "dk": grid.dk,
        "recurrence_time": grid.recurrence_time,
        "norm_drift": oracle.norm_drift,
        "max_abs_diff": float(diff.max()),
    }
    with open(out / "report.txt", "w", newline="") as fh:
        for key in ("n_modes", "bandwidth", "dk", "recurrence_time", "norm_drift"):
            fh.write(f"{key}={_fmt(report[key])}\n")
        fh.write(f"max_abs_diff={_fmt(report['max_abs_diff'])}\n")
    return report


_RUNNERS = {
    "decay": _run_decay,
    "dressed-scan": _run_dressed_scan,
    "bic-design": _run_bic_design,
    "bic-scan": _run_bic_scan,
    "field-map": _run_field_map,
    "oracle-compare": _run_oracle_compare,
}


def run_experiment(cfg: ExperimentConfig) -> Path:
    """Run the configured experiment, writing its artifacts plus run.txt."""
    out = Path(cfg.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ConfigError(f"cannot create output directory {out}: {exc}") from exc
    extra = _RUNNERS[cfg.experiment](cfg, out)
    _write_metadata(out / "run.txt", cfg, extra)
    return out


# ---------------------------------------------------------------------------
# presets

def _design_distance(omega_rabi: float, k: int) -> float:
    return k * math.pi / omega_rabi  # tau/2 for the delta=0 two-BIC design

#: drive making the upper dressed energy round-trip commensurate
#: (omega_plus * tau = 2*pi*11) at d = 0.315 with omega_e = 100
_FIG3B_RABI = 22.0 * math.pi / 0.63 - 100.0

_FIG3_COMMON = {"experiment": "decay", "gamma": 1.0, "omega_e": 100.0,
                "delta": 0.0, "t_end": 20.0}

PRESETS: dict[str, dict] = {
    "decay": {"experiment": "decay", "gamma": 1.0, "omega_rabi": 0.0,
              "omega_e": 100.0, "distance": 1e9, "t_end": 10.0},
    "fig3a": {**_FIG3_COMMON, "omega_rabi": 0.0, "distance": 0.316},
    "fig3b": {**_FIG3_COMMON, "omega_rabi": _FIG3B_RABI, "distance": 0.315,
              "note": "omega_rabi chosen so d = 11*lambda_plus/2"},
    "fig3c": {**_FIG3_COMMON, "omega_rabi": 10.0,
              "distance": _design_distance(10.0, 1),
              "note": "exact two-BIC design m=10 k=1"},
    "fig3d": {**_FIG3_COMMON, "omega_rabi": 0.0, "distance": 0.94},
    "fig3e": {**_FIG3_COMMON, "omega_rabi": _FIG3B_RABI, "distance": 0.94},
    "fig3f": {**_FIG3_COMMON, "omega_rabi": 10.0, "distance": 0.94},
    "fig3g": {**_FIG3_COMMON, "omega_rabi": 0.0, "distance": 18.0,
              "t_end": 120.0},
    "fig3h": {**_FIG3_COMMON, "omega_rabi": _FIG3B_RABI, "distance": 18.0,
              "t_end": 120.0},
    "fig3i": {**_FIG3_COMMON, "omega_rabi": 10.0, "distance": 18.0,
              "t_end": 120.0},
    "fig3def": {**_FIG3_COMMON, "distance": 0.94},
    "fig3ghi": {**_FIG3_COMMON, "distance": 18.0, "t_end": 120.0},
    "fig4a": {"experiment": "field-map", "gamma": 1.0, "omega_rabi": 10.0,
              "omega_e": 100.0, "delta": 0.0, "distance": 0.94,
              "t_end": 20.0, "nt": 241, "nx": 1201, "x_max": 21.5},
    "fig4b": {"experiment": "field-map", "gamma": 1.0, "omega_rabi": 10.0,
              "omega_e": 100.0, "delta": 0.0, "distance": 18.0,
              "t_end": 120.0, "nt": 241, "nx": 1201, "x_max": 60.0},
}


def format_presets() -> str:
    lines = []
    for name in sorted(PRESETS):
        body = " ".join(f"{k}={v}" for k, v in sorted(PRESETS[name].items()))
        lines.append(f"{name}: {body}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# entry point

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mirrorqed",
        description="Emission dynamics of a driven three-level emitter in a "
        "mirror-terminated waveguide",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one experiment")
    run_p.add_argument("--config", help="flat key=value config file")
    run_p.add_argument("--preset", help="named preset applied below the config")
    for key in VALID_KEYS:
        if key == "out":
            continue
        flag = "--" + key.replace("_", "-")
        run_p.add_argument(flag, dest=key, default=None)
    run_p.add_argument("--out", dest="out", default=None,
                       help="output directory")

    presets_p = sub.add_parser("presets", help="preset utilities")
    presets_p.add_argument("action", choices=["list"])
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "presets":
        print(format_presets())
        return 0

    overrides = {}
    for key in VALID_KEYS:
        raw = getattr(args, key, None)
        if raw is not None:
            overrides[key] = _convert(key, raw) if isinstance(raw, str) else raw
    try:
        cfg = load_config(args.config, overrides, preset=args.preset)
        run_experiment(cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (SolverDivergence, NormDrift, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
