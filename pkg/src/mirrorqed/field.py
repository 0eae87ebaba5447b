"""Emitted-field reconstruction from the excited-state history.

A detector at x >= 0 sees three retarded copies of the bare excited
amplitude: the wave reflected off the mirror (path x + d), and the direct
wave (path |x - d|), which enters with opposite sign on either side of the
emitter.  At the mirror the reflected and direct contributions cancel
exactly.  All time gates are evaluated right-continuously (a front counts
from the instant it arrives)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bic import BicSolution
from .dynamics import EmissionRun
from .model import SystemParams, dressed_basis


@dataclass(frozen=True)
class FieldGrid:
    """Space-time tabulation of the emitted field; psi has shape
    (len(t_grid), len(x_grid))."""

    x_grid: np.ndarray
    t_grid: np.ndarray
    psi: np.ndarray
    intensity: np.ndarray


def field_profile(run: EmissionRun, x, t: float):
    """Complex field amplitude at position(s) ``x`` and time ``t``.

    Requires the run to cover [0, t]; every retarded time that passes its
    gate lies in that interval, and out-of-range requests are errors rather
    than clamped (clamping would corrupt interference patterns).
    """
    p = run.params
    d, v = p.distance, p.velocity
    if t > run.trajectory.t_end * (1.0 + 1e-12):
        raise ValueError(
            f"field at t={t} needs history beyond the trajectory end "
            f"{run.trajectory.t_end}"
        )
    x_arr = np.asarray(x, dtype=float)
    scalar = x_arr.ndim == 0
    x_arr = np.atleast_1d(x_arr)

    t_reflected = t - (x_arr + d) / v
    t_direct_in = t + (x_arr - d) / v
    t_direct_out = t - (x_arr - d) / v
    inside = x_arr <= d

    psi = np.zeros(x_arr.shape, dtype=complex)
    for rt, sign, region in (
        (t_reflected, 1.0, np.ones_like(inside)),
        (t_direct_in, -1.0, inside),
        (t_direct_out, -1.0, ~inside),
    ):
        live = region & (rt >= 0.0)
        if np.any(live):
            ce, _ = run.bare_amplitudes(rt[live])
            psi[live] += sign * ce
    psi *= math.sqrt(0.5 * p.gamma / v)
    return psi[0] if scalar else psi


def intensity_map(
    run: EmissionRun,
    x_max: float,
    nx: int,
    nt: int,
    t_max: float | None = None,
) -> FieldGrid:
    """Tabulate |psi|^2 on a uniform space-time grid covering the run."""
    p = run.params
    if nx < 2 or nt < 2:
        raise ValueError("nx and nt must be >= 2")
    if not (x_max > p.distance):
        raise ValueError("x_max must exceed the emitter position")
    if t_max is None:
        t_max = run.trajectory.t_end
    x_grid = np.linspace(0.0, x_max, nx)
    t_grid = np.linspace(0.0, t_max, nt)
    psi = np.empty((nt, nx), dtype=complex)
    for i, t in enumerate(t_grid):
        psi[i] = field_profile(run, x_grid, float(t))
    return FieldGrid(x_grid, t_grid, psi, np.abs(psi) ** 2)


def default_grid_spacing(p: SystemParams) -> float:
    """Spacing resolving the fastest standing-wave fringe with 20 points."""
    omega_max = p.omega_e
    if p.omega_rabi != 0.0 or p.delta != 0.0:
        omega_max = max(omega_max, dressed_basis(p).omega_plus)
    if omega_max <= 0.0:
        raise ValueError("no positive frequency sets a wavelength")
    return 2.0 * math.pi * p.velocity / omega_max / 20.0


def bic_field_profile(sol: BicSolution, p: SystemParams, x, t: float):
    """Long-time field of the undamped branches: two sinusoids pinned at the
    mirror and at the emitter, zero beyond the emitter.

    Returns (psi_plus, psi_minus, psi_plus + psi_minus).
    """
    b = dressed_basis(p)
    x_arr = np.asarray(x, dtype=float)
    scalar = x_arr.ndim == 0
    x_arr = np.atleast_1d(x_arr)
    confined = x_arr < p.distance
    pref = 1j * math.sqrt(2.0 * p.gamma / p.velocity)

    def branch(residue: complex, omega: float) -> np.ndarray:
        out = np.zeros(x_arr.shape, dtype=complex)
        if residue != 0.0:
            arg = omega * (x_arr[confined] - p.distance) / p.velocity
            out[confined] = (
                pref * residue * np.sin(arg) * np.exp(-1j * omega * t)
            )
        return out

    psi_p = branch(sol.residue_plus, b.omega_plus)
    psi_m = branch(sol.residue_minus, b.omega_minus)
    psi = psi_p + psi_m
    if scalar:
        return psi_p[0], psi_m[0], psi[0]
    return psi_p, psi_m, psi


def photon_norm(run: EmissionRun, t: float, x_max: float, nx: int) -> float:
    """Trapezoidal integral of the intensity over [0, x_max] at time ``t``.

    ``x_max`` must lie beyond the first emitted wavefront, else part of the
    photon is missed."""
    p = run.params
    if not (x_max > p.velocity * t + p.distance):
        raise ValueError("wavefront truncated: need x_max > v*t + d")
    x = np.linspace(0.0, x_max, nx)
    psi = field_profile(run, x, t)
    return float(np.trapezoid(np.abs(psi) ** 2, x))
