"""Acceptance criteria, one test per criterion, each printing PASS/FAIL.

Run with ``pytest tests/test_acceptance.py -s`` to see one line per
criterion.  Every tolerance is stated inline; none are tuned at runtime.
"""

import cmath
import math
import time

import numpy as np
import pytest

from mirrorqed.bic import bic_frequencies, design_bic_geometry
from mirrorqed.dde_solver import DdeProblem, evaluate_history, integrate_dde
from mirrorqed.dynamics import simulate_emission
from mirrorqed.field import field_profile, intensity_map, photon_norm
from mirrorqed.mode_oracle import build_mode_grid, integrate_modes
from mirrorqed.model import AmplitudePair, SystemParams

EXCITED = AmplitudePair(1.0 + 0.0j, 0.0j, "bare")


def _report(num: int, name: str, ok: bool, detail: str) -> None:
    print(f"[criterion {num:02d}] {name}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"criterion {num:02d} {name}: {detail}"


@pytest.fixture(scope="module")
def fig3f_run():
    p = SystemParams(gamma=1.0, omega_rabi=10.0, omega_e=100.0, delta=0.0,
                     distance=0.94)
    return simulate_emission(p, EXCITED, 20.5, h=1e-3)


def test_criterion_01_exponential_decay_limit():
    p = SystemParams(gamma=1.0, omega_rabi=0.0, omega_e=100.0, distance=1e9)
    start = time.perf_counter()
    run = simulate_emission(p, EXCITED, 10.0, h=1e-3)
    elapsed = time.perf_counter() - start
    err = float(np.max(np.abs(run.p_e - np.exp(-run.times))))
    ok = err < 1e-6 and elapsed < 1.0
    _report(1, "exponential-decay-limit", ok,
            f"max_err={err:.2e} < 1e-6, runtime={elapsed:.2f}s < 1s")


def test_criterion_02_underdamped_threshold():
    counts = {}
    for om in (0.2, 0.5):
        p = SystemParams(gamma=1.0, omega_rabi=om, delta=0.0, omega_e=100.0,
                         distance=1e9)
        run = simulate_emission(p, EXCITED, 8.0, h=1e-3)
        pe = run.p_e
        inner = (pe[1:-1] > pe[:-2]) & (pe[1:-1] > pe[2:]) & (pe[1:-1] > 1e-12)
        counts[om] = int(np.sum(inner))
    ok = counts[0.2] == 0 and counts[0.5] >= 1
    _report(2, "underdamped-threshold", ok,
            f"maxima(0.2G)={counts[0.2]} == 0, maxima(0.5G)={counts[0.5]} >= 1")


def test_criterion_03_zero_delay_rabi():
    tau = 1e-3
    p = SystemParams(gamma=1.0, omega_rabi=0.5, delta=0.0,
                     omega_e=2 * math.pi / tau, distance=tau / 2)
    run = simulate_emission(p, EXCITED, 5 * math.pi / 0.5, h=5e-4)
    err = float(np.max(np.abs(run.p_e - np.cos(0.5 * run.times) ** 2)))
    ok = err < 5e-3
    _report(3, "zero-delay-rabi", ok, f"max_err={err:.2e} < 5e-3")


def test_criterion_04_two_bic_persistent_oscillation(two_bic_params):
    p = two_bic_params
    start = time.perf_counter()
    run = simulate_emission(p, EXCITED, 40.0, h=1e-3)
    elapsed = time.perf_counter() - start
    sol = bic_frequencies(p)
    phi = 0.5 * (cmath.phase(sol.residue_minus) - cmath.phase(sol.residue_plus))
    amp = 4.0 / (2.0 + p.tau * p.gamma / 2.0) ** 2
    sel = (run.times >= 30.0) & (run.times <= 40.0)
    envelope = amp * np.cos(10.0 * run.times[sel] + phi) ** 2
    err = float(np.max(np.abs(run.p_e[sel] - envelope)))
    peak = float(np.max(run.p_e[sel]))
    ok = err < 0.01 and abs(peak - 0.7469) <= 0.01 and elapsed < 10.0
    _report(4, "two-bic-persistent-oscillation", ok,
            f"max_err={err:.2e} < 0.01, peak={peak:.4f} = 0.7469 +/- 0.01, "
            f"runtime={elapsed:.1f}s < 10s")


def test_criterion_05_single_bic_plateau():
    tau = 3 * math.pi / 20  # upper branch winds 6 turns, lower lands on 9*pi
    p = SystemParams(gamma=1.0, omega_rabi=10.0, omega_e=70.0, delta=0.0,
                     distance=tau / 2)
    sol = bic_frequencies(p)
    assert sol.has_plus and not sol.has_minus
    run = simulate_emission(p, EXCITED, 50.0, h=1e-3)
    window = run.p_e[(run.times >= 40.0) & (run.times <= 50.0)]
    level = abs(sol.residue_plus) ** 2
    ok = window.std() < 1e-3 and abs(window.mean() - level) <= 0.01
    _report(5, "single-bic-plateau", ok,
            f"std={window.std():.2e} < 1e-3, "
            f"mean={window.mean():.5f} = {level:.5f} +/- 0.01")


def test_criterion_06_oracle_equivalence():
    start = time.perf_counter()
    diffs, drifts = {}, {}
    for om in (0.0, 10.0):
        p = SystemParams(gamma=1.0, omega_rabi=om, omega_e=100.0, delta=0.0,
                         distance=0.94)
        grid = build_mode_grid(p, bandwidth_w=55.0, n_modes=4001, t_end=10.0)
        oracle = integrate_modes(p, grid, EXCITED, 10.0, h=1e-3)
        run = simulate_emission(p, EXCITED, 10.0, h=1e-3)
        ce, _ = run.bare_amplitudes(oracle.times)
        diffs[om] = float(np.max(np.abs(oracle.p_e - np.abs(ce) ** 2)))
        drifts[om] = oracle.norm_drift
    elapsed = time.perf_counter() - start
    ok = (
        all(d < 5e-3 for d in diffs.values())
        and all(d < 1e-4 for d in drifts.values())
        and elapsed < 120.0
    )
    _report(6, "oracle-equivalence", ok,
            f"max_diff(0)={diffs[0.0]:.2e}, max_diff(10G)={diffs[10.0]:.2e} "
            f"vs 5e-3; drift={max(drifts.values()):.1e} < 1e-4; "
            f"runtime={elapsed:.0f}s < 120s")


def test_criterion_07_unitarity_via_field(fig3f_run):
    run = fig3f_run
    p = run.params
    dx = 2 * math.pi * p.velocity / p.omega_e / 20.0
    devs = {}
    for t in (1.0, 5.0, 20.0):
        x_max = p.velocity * t + p.distance + 0.3
        nx = int(math.ceil(x_max / dx)) + 1
        ce, cs = run.bare_amplitudes(t)
        total = abs(ce) ** 2 + abs(cs) ** 2 + photon_norm(run, t, x_max, nx)
        devs[t] = abs(total - 1.0)
    ok = all(v < 1e-2 for v in devs.values())
    _report(7, "unitarity-via-field", ok,
            "deviation " + ", ".join(f"t={t}: {v:.1e}" for t, v in devs.items())
            + " all < 1e-2")


def test_criterion_08_bic_field_confinement(two_bic_run, two_bic_params):
    from mirrorqed.field import bic_field_profile

    p = two_bic_params
    d = p.distance
    t = 50.0
    inside = np.linspace(0.0, d * 0.999, 400)
    outside = np.linspace(d * 1.001, 2 * d, 400)
    psi_in = field_profile(two_bic_run, inside, t)
    peak = float(np.max(np.abs(psi_in) ** 2))
    leak = float(np.mean(np.abs(field_profile(two_bic_run, outside, t)) ** 2))
    sol = bic_frequencies(p)
    _, _, steady = bic_field_profile(sol, p, inside, t)
    mismatch = float(np.max(np.abs(psi_in - steady)))
    bound = 1e-2 * math.sqrt(p.gamma / p.velocity)
    ok = leak < 1e-3 * peak and mismatch < bound
    _report(8, "bic-field-confinement", ok,
            f"leak/peak={leak / peak:.1e} < 1e-3, "
            f"|psi - steady|={mismatch:.1e} < {bound:.1e}")


def test_criterion_09_solver_order():
    def err(h):
        prob = DdeProblem(1, lambda t, z, zd: -z, 2.0,
                          np.array([1.0 + 0.0j]))
        traj = integrate_dde(prob, 1.0, h)
        return abs(evaluate_history(traj, 1.0)[0] - math.exp(-1.0))

    ratio = err(0.01) / err(0.005)
    ok = 12.0 <= ratio <= 20.0
    _report(9, "solver-order", ok, f"error ratio={ratio:.2f} in [12, 20]")


def test_criterion_10_mirror_node_and_causality(fig3f_run, two_bic_run):
    results = []
    for run, x_max, nt in ((fig3f_run, 8.0, 81), (two_bic_run, 3.0, 81)):
        grid = intensity_map(run, x_max=x_max, nx=401, nt=nt,
                             t_max=min(10.0, run.trajectory.t_end))
        peak = float(np.max(np.abs(grid.psi)))
        mirror = float(np.max(np.abs(grid.psi[:, 0])))
        x, t = np.meshgrid(grid.x_grid, grid.t_grid)
        # guard band of a few ulps: the wavefront itself carries the jump
        beyond = x > run.params.velocity * t + run.params.distance + 1e-9
        causal = float(np.max(grid.intensity[beyond])) if beyond.any() else 0.0
        results.append((mirror, peak, causal))
    ok = all(m < 1e-10 * pk and c < 1e-12 for m, pk, c in results)
    _report(10, "mirror-node-and-causality", ok,
            "; ".join(f"|psi(0)|={m:.1e} < 1e-10*{pk:.2f}, beyond={c:.1e}"
                      for m, pk, c in results))
