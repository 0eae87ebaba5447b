import math

import numpy as np
import pytest

from mirrorqed.dynamics import simulate_emission
from mirrorqed.field import field_profile
from mirrorqed.mode_oracle import (
    NormDrift,
    build_mode_grid,
    default_bandwidth,
    integrate_modes,
    reconstruct_field_from_modes,
)
from mirrorqed.model import AmplitudePair, SystemParams

EXCITED = AmplitudePair(1.0 + 0.0j, 0.0j, "bare")


# --- grid construction -------------------------------------------------------

def test_grid_spacing_and_recurrence():
    p = SystemParams(gamma=1.0, omega_e=100.0, distance=0.94)
    grid = build_mode_grid(p, bandwidth_w=50.0, n_modes=4001, t_end=125.0)
    assert grid.dk == pytest.approx(0.025)
    assert grid.recurrence_time == pytest.approx(2 * math.pi / 0.025)
    with pytest.raises(ValueError, match="increase n_modes"):
        build_mode_grid(p, bandwidth_w=50.0, n_modes=4001, t_end=130.0)


def test_grid_couplings():
    p = SystemParams(gamma=1.0, omega_e=100.0, distance=0.0)
    grid = build_mode_grid(p, bandwidth_w=50.0, n_modes=101)
    assert np.all(grid.couplings == 0.0)  # emitter at the mirror node

    bound = math.sqrt(1.0 / math.pi)
    p = SystemParams(gamma=1.0, omega_e=100.0, distance=0.94)
    grid = build_mode_grid(p, bandwidth_w=50.0, n_modes=5001)
    assert np.max(np.abs(grid.couplings)) <= bound + 1e-12
    assert np.max(np.abs(grid.couplings)) > 0.999 * bound


def test_grid_stays_on_positive_wavenumbers():
    # window poking below k=0 falls back to cell midpoints on (0, k_hi]
    p = SystemParams(gamma=1.0, omega_e=30.0, distance=0.5)
    grid = build_mode_grid(p, bandwidth_w=50.0, n_modes=64)
    assert np.all(grid.k_values > 0.0)
    assert grid.k_values[0] == pytest.approx(grid.dk / 2)
    assert grid.frequencies[-1] < 80.0


def test_default_bandwidth():
    p = SystemParams(gamma=2.0, omega_rabi=4.0)
    assert default_bandwidth(p) == pytest.approx(120.0)


# --- integration -------------------------------------------------------------

def test_decoupled_emitter_is_closed_rabi():
    p = SystemParams(gamma=1.0, omega_rabi=2.0, delta=0.0, omega_e=100.0,
                     distance=0.0)
    grid = build_mode_grid(p, bandwidth_w=30.0, n_modes=201)
    run = integrate_modes(p, grid, EXCITED, 3.0, h=1e-3)
    assert run.norm_drift < 1e-12
    expected = np.cos(2.0 * run.times) ** 2
    assert np.max(np.abs(run.p_e - expected)) < 1e-9


def test_norm_conserved_at_default_resolution():
    p = SystemParams(gamma=1.0, omega_rabi=0.0, omega_e=100.0, distance=0.94)
    grid = build_mode_grid(p, bandwidth_w=55.0, n_modes=4001, t_end=5.0)
    run = integrate_modes(p, grid, EXCITED, 5.0, h=1e-3)
    assert run.norm_drift < 1e-4


def test_coarse_step_detected_by_norm_drift():
    p = SystemParams(gamma=1.0, omega_rabi=0.0, omega_e=100.0, distance=0.94)
    grid = build_mode_grid(p, bandwidth_w=55.0, n_modes=801)
    with pytest.raises(NormDrift, match="step too large"):
        integrate_modes(p, grid, EXCITED, 5.0, h=0.05)


@pytest.mark.parametrize("distance,bound", [(0.316, 8e-3), (0.94, 5e-3), (18.0, 5e-3)])
def test_settled_dynamics_match_delay_equation(distance, bound):
    # after the bandwidth-limited onset transient, the discretized continuum
    # follows the delay equation across all three distance regimes
    p = SystemParams(gamma=1.0, omega_rabi=0.0, omega_e=100.0, delta=0.0,
                     distance=distance)
    grid = build_mode_grid(p, bandwidth_w=55.0, n_modes=4001, t_end=10.0)
    oracle = integrate_modes(p, grid, EXCITED, 10.0, h=1e-3)
    run = simulate_emission(p, EXCITED, 10.0, h=1e-3)
    ce, _ = run.bare_amplitudes(oracle.times)
    diff = np.abs(oracle.p_e - np.abs(ce) ** 2)
    settled = oracle.times >= 1.0
    assert diff[settled].max() < bound
    assert oracle.norm_drift < 1e-4


def test_refining_modes_converges_to_delay_equation():
    # in the regime where the mode comb is the binding error source, each
    # doubling of n_modes tightens the match
    p = SystemParams(gamma=1.0, omega_rabi=0.0, omega_e=100.0, delta=0.0,
                     distance=0.94)
    run = simulate_emission(p, EXCITED, 4.0, h=1e-3)
    discrepancies = []
    for n_modes in (13, 26, 52):
        grid = build_mode_grid(p, bandwidth_w=25.0, n_modes=n_modes)
        oracle = integrate_modes(p, grid, EXCITED, 4.0, h=1e-3, norm_tol=10.0)
        ce, _ = run.bare_amplitudes(oracle.times)
        diff = np.abs(oracle.p_e - np.abs(ce) ** 2)
        discrepancies.append(diff[oracle.times >= 1.0].max())
    assert discrepancies[0] > discrepancies[1] > discrepancies[2]


# --- field reconstruction ----------------------------------------------------

def test_reconstruct_field_zeroes():
    p = SystemParams(gamma=1.0, omega_e=100.0, distance=0.5)
    grid = build_mode_grid(p, bandwidth_w=30.0, n_modes=301)
    run = integrate_modes(p, grid, EXCITED, 1.0, h=1e-3, snapshot_times=(1.0,))
    snap = run.snapshots[0]
    assert reconstruct_field_from_modes(snap, grid, 0.0) == 0.0
    empty = type(snap)(time=0.0, c_e=1.0, c_s=0.0, beta=np.zeros_like(snap.beta))
    assert np.all(reconstruct_field_from_modes(empty, grid, np.linspace(0, 3, 7)) == 0.0)
    with pytest.raises(ValueError, match="x must be"):
        reconstruct_field_from_modes(snap, grid, -1.0)


def test_mode_field_matches_retarded_reconstruction():
    p = SystemParams(gamma=1.0, omega_rabi=2.0, delta=0.0, omega_e=100.0,
                     distance=0.94)
    grid = build_mode_grid(p, bandwidth_w=55.0, n_modes=4001, t_end=4.0)
    oracle = integrate_modes(p, grid, EXCITED, 3.0, h=1e-3, snapshot_times=(3.0,))
    snap = oracle.snapshots[0]
    run = simulate_emission(p, EXCITED, 3.2, h=1e-3)
    x = np.linspace(0.0, 3.9, 800)
    i_direct = np.abs(field_profile(run, x, 3.0)) ** 2
    i_modes = np.abs(reconstruct_field_from_modes(snap, grid, x)) ** 2
    # keep clear of the kinks at the emitter and at the two wavefronts,
    # where the finite mode window rings over a few pi*v/W lobes
    mask = np.ones_like(x, dtype=bool)
    for edge in (p.distance, 3.0 - p.distance, 3.0 + p.distance):
        mask &= np.abs(x - edge) > 0.2
    rel = np.max(np.abs(i_direct[mask] - i_modes[mask])) / np.max(i_direct)
    assert rel < 5e-2
