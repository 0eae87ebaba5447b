"""Emitter equations of motion and excitation histories.

The mirror feeds part of the emitted field back after one round trip, which
turns the amplitude equations into a two-component delay differential
equation.  Three equivalent formulations are available:

* ``bare``     -- amplitudes (C_e, C_s) with the optical carrier included;
* ``rotated``  -- carrier exp(-i*omega_e*t) removed, the default for
  integration since the step is then set by gamma, omega_rabi and the
  dressed splitting rather than by omega_e;
* ``dressed``  -- amplitudes on the drive-dressed states, where the delayed
  feedback appears with phases exp(i*omega_pm*tau) that decide between
  accelerated, inhibited, or persistent dynamics.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import numpy as np

from .dde_solver import DdeProblem, Trajectory, evaluate_history, integrate_dde
from .model import AmplitudePair, FRAMES, SystemParams, dressed_basis, frame_transform

VARIANTS = ("infinite_waveguide", "zero_delay_rabi")


def emitter_rhs(
    p: SystemParams, frame: str
) -> Callable[[float, np.ndarray, np.ndarray | None], np.ndarray]:
    """Right-hand side of the delay equation in the requested frame.

    The delayed argument is None while the feedback gate is closed (handled
    by the solver); the feedback term carries the round-trip phase of the
    frame's carrier.
    """
    g = p.gamma
    om = p.omega_rabi
    tau = p.tau

    if frame == "bare":
        we, ws = p.omega_e, p.omega_s

        def rhs_bare(t, z, zd):
            d_ce = -(1j * we + 0.5 * g) * z[0] - 1j * om * z[1]
            d_cs = -1j * ws * z[1] - 1j * om * z[0]
            if zd is not None:
                d_ce = d_ce + 0.5 * g * zd[0]
            return np.array([d_ce, d_cs])

        return rhs_bare

    if frame == "rotated":
        delta = p.delta
        fb = 0.5 * g * cmath.exp(1j * p.omega_e * tau) if math.isfinite(tau) else 0.0

        def rhs_rotated(t, z, zd):
            d_ce = -0.5 * g * z[0] - 1j * om * z[1]
            d_cs = 1j * delta * z[1] - 1j * om * z[0]
            if zd is not None:
                d_ce = d_ce + fb * zd[0]
            return np.array([d_ce, d_cs])

        return rhs_rotated

    if frame == "dressed":
        b = dressed_basis(p)
        rate_p = 0.5 * g * b.cos_theta**2
        rate_m = 0.5 * g * b.sin_theta**2
        rate_x = 0.25 * om * g / b.delta_big
        if math.isfinite(tau):
            ph_p = cmath.exp(1j * b.omega_plus * tau)
            ph_m = cmath.exp(1j * b.omega_minus * tau)
        else:
            ph_p = ph_m = 0.0

        def rhs_dressed(t, z, zd):
            if zd is not None:
                fb_p = ph_p * zd[0] - z[0]
                fb_m = ph_m * zd[1] - z[1]
            else:
                fb_p = -z[0]
                fb_m = -z[1]
            beat = cmath.exp(2j * b.delta_big * t)
            d_cp = rate_p * fb_p + rate_x * beat * fb_m
            d_cm = rate_m * fb_m + rate_x * fb_p / beat
            return np.array([d_cp, d_cm])

        return rhs_dressed

    raise ValueError(f"unknown frame {frame!r}, expected one of {FRAMES}")


def default_step(p: SystemParams) -> float:
    """Step resolving the fastest envelope frequency with >= 50 points,
    capped at 1e-3/gamma.  The solver still snaps it to divide tau."""
    cands = [p.omega_rabi]
    if p.omega_rabi != 0.0 or p.delta != 0.0:
        cands.append(dressed_basis(p).delta_big)
    if 0.0 < p.tau and math.isfinite(p.tau):
        cands.append(1.0 / p.tau)
    fastest = max(cands)
    h = 1e-3 / p.gamma
    if fastest > 0.0:
        h = min(h, 2.0 * math.pi / (50.0 * fastest))
    return h


@dataclass(frozen=True)
class EmissionRun:
    """A simulated emission history plus the parameters that produced it."""

    params: SystemParams
    frame: str
    trajectory: Trajectory

    @property
    def times(self) -> np.ndarray:
        return self.trajectory.times

    def bare_amplitudes(self, t) -> tuple[np.ndarray, np.ndarray]:
        """(C_e, C_s) in the bare frame at arbitrary time(s) inside the run."""
        z = np.atleast_2d(evaluate_history(self.trajectory, t))
        t_arr = np.atleast_1d(np.asarray(t, dtype=float))
        p = self.params
        if self.frame == "bare":
            ce, cs = z[:, 0], z[:, 1]
        elif self.frame == "rotated":
            ph = np.exp(-1j * p.omega_e * t_arr)
            ce, cs = z[:, 0] * ph, z[:, 1] * ph
        else:
            b = dressed_basis(p)
            up = z[:, 0] * np.exp(-1j * b.omega_plus * t_arr)
            lo = z[:, 1] * np.exp(-1j * b.omega_minus * t_arr)
            ce = b.cos_theta * up + b.sin_theta * lo
            cs = b.sin_theta * up - b.cos_theta * lo
        if np.ndim(t) == 0:
            return ce[0], cs[0]
        return ce, cs

    @cached_property
    def _populations(self) -> tuple[np.ndarray, np.ndarray]:
        ce, cs = self.bare_amplitudes(self.times)
        return np.abs(ce) ** 2, np.abs(cs) ** 2

    @property
    def p_e(self) -> np.ndarray:
        return self._populations[0]

    @property
    def p_s(self) -> np.ndarray:
        return self._populations[1]


def simulate_emission(
    p: SystemParams,
    init: AmplitudePair,
    t_end: float,
    h: float | None = None,
    frame: str = "rotated",
) -> EmissionRun:
    """Integrate the delay equation in ``frame`` and return the run.

    ``init`` may be given in any frame but must be normalized; populations
    are always reported in the bare frame.
    """
    if abs(init.norm_sq - 1.0) > 1e-9:
        raise ValueError("initial amplitudes must be normalized to 1")
    a0 = frame_transform(init, 0.0, p, frame)
    prob = DdeProblem(
        dimension=2,
        rhs=emitter_rhs(p, frame),
        delay=p.tau,
        initial=np.array([a0.c_upper, a0.c_lower]),
    )
    if h is None:
        h = default_step(p)
    traj = integrate_dde(prob, t_end, h)
    return EmissionRun(params=p, frame=frame, trajectory=traj)


def analytic_reference(
    p: SystemParams, init: AmplitudePair, t: float, variant: str
) -> AmplitudePair:
    """Closed-form rotated-frame amplitudes in two solvable limits.

    ``infinite_waveguide``: no drive, mirror never felt; the excited
    amplitude decays as exp(-gamma*t/2) while c_s evolves freely.

    ``zero_delay_rabi``: emitter at a feedback-transparent spot
    (omega_e*tau in 2*pi*Z, tau -> 0), where the returning field cancels the
    damping and the pair undergoes lossless two-level oscillation at the
    dressed splitting.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}, expected one of {VARIANTS}")
    a0 = frame_transform(init, 0.0, p, "rotated")
    ce0, cs0 = a0.c_upper, a0.c_lower

    if variant == "infinite_waveguide":
        if p.omega_rabi != 0.0:
            raise ValueError("infinite_waveguide reference requires omega_rabi = 0")
        ce = ce0 * math.exp(-0.5 * p.gamma * t)
        cs = cs0 * cmath.exp(1j * p.delta * t)
        return AmplitudePair(ce, cs, "rotated")

    big = math.hypot(0.5 * p.delta, p.omega_rabi)
    if big == 0.0:
        return AmplitudePair(ce0, cs0, "rotated")
    # exp of i*t*[[0, -Om], [-Om, delta]] via its traceless part, whose
    # square is big^2 * identity
    ph = cmath.exp(0.5j * p.delta * t)
    cos_t = math.cos(big * t)
    sin_t = math.sin(big * t) / big
    ce = ph * (cos_t * ce0 + 1j * sin_t * (-0.5 * p.delta * ce0 - p.omega_rabi * cs0))
    cs = ph * (cos_t * cs0 + 1j * sin_t * (0.5 * p.delta * cs0 - p.omega_rabi * ce0))
    return AmplitudePair(ce, cs, "rotated")
