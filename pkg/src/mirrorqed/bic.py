"""Laplace-domain analysis: bound states in the continuum (BICs).

Transforming the bare-frame delay equation gives emitter amplitudes with
denominator

    D(s) = (s + i*omega_e + gamma/2 - (gamma/2) e^{-s tau}) (s + i*omega_s)
           + omega_rabi^2.

Poles on the imaginary axis, s = -i*omega, are undamped states; they require
the round-trip phase to be commensurate (omega*tau = 2*n*pi, which makes the
full complex feedback factor e^{-s tau} equal 1) together with the dressed
resonance omega = omega_pm.  When a dressed energy satisfies both, part of
the excitation never decays; with both energies commensurate the surviving
amplitude beats at the dressed splitting forever.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .model import AmplitudePair, SystemParams, dressed_basis, frame_transform

#: default phase tolerance for analytically designed geometries
TOL_PHASE_DESIGN = 1e-6
#: looser tolerance when scanning user-supplied geometries
TOL_PHASE_DETECT = 1e-2

_EXCITED_START = AmplitudePair(1.0 + 0.0j, 0.0j, "bare")


@dataclass(frozen=True)
class BicSolution:
    """Which dressed energies are undamped, their winding integers, and the
    constant amplitudes they retain from a given initial state.

    Residues of non-commensurate branches are reported as 0: they belong to
    decaying poles and vanish from the long-time amplitude.
    """

    has_plus: bool
    has_minus: bool
    n_plus: int | None
    n_minus: int | None
    residue_plus: complex
    residue_minus: complex


def characteristic_function(p: SystemParams, s: complex) -> complex:
    """Denominator of the Laplace-transformed amplitudes at s (scalar or
    array).  An infinite delay drops the feedback term (mirror out of
    reach)."""
    s = s if np.isscalar(s) else np.asarray(s, dtype=complex)
    half_g = 0.5 * p.gamma
    feedback = half_g * np.exp(-s * p.tau) if math.isfinite(p.tau) else 0.0
    return (s + 1j * p.omega_e + half_g - feedback) * (
        s + 1j * p.omega_s
    ) + p.omega_rabi**2


def _residues(
    p: SystemParams, ce0: complex, cs0: complex
) -> tuple[complex, complex]:
    """Residues of C_e(s) e^{st} at the undamped poles s = -i*omega_pm,
    assuming the commensurability condition holds exactly there.

    Evaluating N(s)/D'(s) at the pole with e^{-s tau} = 1 gives

        R_pm = [(Delta +/- delta/2) C_e(0) +/- Omega C_s(0)]
               / (Delta (2 + gamma tau (cos/sin)^2 theta)).
    """
    b = dressed_basis(p)
    big, d2 = b.delta_big, 0.5 * p.delta
    gt = p.gamma * p.tau
    r_plus = ((big + d2) * ce0 + p.omega_rabi * cs0) / (
        big * (2.0 + gt * b.cos_theta**2)
    )
    r_minus = ((big - d2) * ce0 - p.omega_rabi * cs0) / (
        big * (2.0 + gt * b.sin_theta**2)
    )
    return r_plus, r_minus


def phase_residual(omega: float, tau: float) -> tuple[float, int]:
    """Distance of omega*tau from the nearest multiple of 2*pi, and that
    multiple."""
    turns = omega * tau / (2.0 * math.pi)
    n = round(turns)
    return (turns - n) * 2.0 * math.pi, n


def bic_frequencies(
    p: SystemParams,
    tol_phase: float = TOL_PHASE_DESIGN,
    init: AmplitudePair | None = None,
) -> BicSolution:
    """Check both dressed energies for round-trip commensurability.

    ``init`` (bare frame; default: excited emitter) sets the residue
    amplitudes of the surviving branches.
    """
    tau = p.tau
    if tau == 0.0:
        raise ValueError("no cavity region: tau = 0")
    if not math.isfinite(tau):
        raise ValueError("no feedback: tau is infinite")
    b = dressed_basis(p)

    if init is None:
        init = _EXCITED_START
    a0 = frame_transform(init, 0.0, p, "bare")
    r_plus, r_minus = _residues(p, a0.c_upper, a0.c_lower)

    res_p, n_p = phase_residual(b.omega_plus, tau)
    res_m, n_m = phase_residual(b.omega_minus, tau)
    has_plus = abs(res_p) <= tol_phase and b.omega_plus > 0.0
    has_minus = abs(res_m) <= tol_phase and b.omega_minus > 0.0
    return BicSolution(
        has_plus=has_plus,
        has_minus=has_minus,
        n_plus=n_p if has_plus else None,
        n_minus=n_m if has_minus else None,
        residue_plus=r_plus if has_plus else 0.0j,
        residue_minus=r_minus if has_minus else 0.0j,
    )


def design_bic_geometry(
    gamma: float,
    omega_rabi: float,
    delta: float,
    m: int,
    k: int,
    velocity: float = 1.0,
) -> SystemParams:
    """Inverse design: geometry where both dressed energies are undamped.

    Solving omega_pm * tau = 2*(m +/- k)*pi gives tau = 2*k*pi/Delta and
    mean energy m*Delta/k, hence winding integers n_pm = m +/- k.
    """
    if not (m > k >= 1):
        raise ValueError("need integers m > k >= 1")
    if not (omega_rabi > 0.0):
        raise ValueError("design requires omega_rabi > 0")
    big = math.hypot(0.5 * delta, omega_rabi)
    tau = 2.0 * k * math.pi / big
    omega_bar = m * big / k
    if omega_bar - 0.5 * delta <= 0.0:
        raise ValueError("unphysical design: omega_s would be <= 0")
    return SystemParams(
        gamma=gamma,
        omega_rabi=omega_rabi,
        omega_e=omega_bar + 0.5 * delta,
        delta=delta,
        distance=0.5 * velocity * tau,
        velocity=velocity,
    )


def longtime_amplitude(
    p: SystemParams,
    init: AmplitudePair,
    t,
    tol_phase: float = TOL_PHASE_DESIGN,
) -> complex | np.ndarray:
    """Bare excited-state amplitude after all damped poles have died out.

    Sums the undamped-branch residues times their phase factors; branches
    that fail the commensurability check contribute nothing.  Vectorized
    over ``t``.
    """
    if p.omega_rabi > 0.0:
        b = dressed_basis(p)
        # strict |delta| < 2*Delta whenever the drive couples the branches
        assert abs(p.delta) < 2.0 * b.delta_big
    sol = bic_frequencies(p, tol_phase=tol_phase, init=init)
    b = dressed_basis(p)
    t_arr = np.asarray(t, dtype=float)
    out = np.zeros(t_arr.shape, dtype=complex)
    if sol.has_plus:
        out = out + sol.residue_plus * np.exp(-1j * b.omega_plus * t_arr)
    if sol.has_minus:
        out = out + sol.residue_minus * np.exp(-1j * b.omega_minus * t_arr)
    if np.ndim(t) == 0:
        return complex(out)
    return out
