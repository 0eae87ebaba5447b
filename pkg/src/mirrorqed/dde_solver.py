"""Fixed-step integrator for complex ODE systems with one discrete delay.

Method of steps with classical RK4.  The step is forced to divide the delay,
so delayed arguments at knot times land exactly on stored knots and the
integration never straddles a breakpoint t = n*tau.  Dense output is cubic
Hermite from stored values and derivatives; because the right-hand side
jumps when the delay gate opens, left- and right-sided derivatives are kept
separately at the gate-opening knot.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

#: relative slack when deciding that a query time sits exactly on a knot
_KNOT_SNAP = 1e-9


class SolverDivergence(RuntimeError):
    """State became non-finite during integration."""


@dataclass(frozen=True)
class Trajectory:
    """Dense-output history of a complex state vector on a uniform grid.

    ``derivatives[i]`` is the derivative at ``times[i]`` seen from the
    interval to its right, ``derivatives_in[i]`` the one seen from the left;
    they differ only at the knot where the delay gate opens.
    """

    times: np.ndarray
    values: np.ndarray
    derivatives: np.ndarray
    derivatives_in: np.ndarray
    step: float

    @property
    def t_end(self) -> float:
        return float(self.times[-1])

    def __post_init__(self) -> None:
        if self.values.shape != self.derivatives.shape:
            raise ValueError("values and derivatives must have identical shape")


@dataclass(frozen=True)
class DdeProblem:
    """z'(t) = rhs(t, z(t), z(t - delay) or None).

    The delayed argument is passed as None while the gate Theta(t - delay)
    is closed; with ``delay = 0`` the gate is always open and the delayed
    argument equals the current state.  No prehistory exists: z(t < 0) is
    never read.
    """

    dimension: int
    rhs: Callable[[float, np.ndarray, np.ndarray | None], np.ndarray]
    delay: float
    initial: np.ndarray

    def __post_init__(self) -> None:
        if self.dimension < 1:
            raise ValueError("dimension must be >= 1")
        if not (self.delay >= 0.0):
            raise ValueError("delay must be >= 0")
        init = np.asarray(self.initial, dtype=complex)
        if init.shape != (self.dimension,):
            raise ValueError("initial state must have shape (dimension,)")
        object.__setattr__(self, "initial", init)


def integrate_dde(prob: DdeProblem, t_end: float, h: float) -> Trajectory:
    """Integrate to at least ``t_end`` with step ``h``.

    For a finite positive delay the step is first shrunk so that delay/h is
    an exact integer (h <- delay/ceil(delay/h)); h > delay is rejected.
    """
    if not (h > 0.0):
        raise ValueError("step h must be > 0")
    if not (t_end > 0.0):
        raise ValueError("t_end must be > 0")

    tau = prob.delay
    m: int | None = None  # knots per delay interval; None = gate never opens
    if tau > 0.0 and math.isfinite(tau):
        if h > tau:
            raise ValueError(f"step h={h} exceeds delay tau={tau}")
        m = math.ceil(tau / h - 1e-12)
        h = tau / m
    zero_delay = tau == 0.0

    n = math.ceil(t_end / h - 1e-9)
    dim = prob.dimension
    values = np.empty((n + 1, dim), dtype=complex)
    derivs = np.empty_like(values)   # right-sided
    derivs_in = np.empty_like(values)  # left-sided

    rhs = prob.rhs
    y = prob.initial.copy()
    values[0] = y

    def half_knot(j: int) -> np.ndarray:
        # cubic Hermite at the midpoint of [times[j], times[j+1]]
        return 0.5 * (values[j] + values[j + 1]) + (h / 8.0) * (
            derivs[j] - derivs_in[j + 1]
        )

    if zero_delay:
        derivs[0] = rhs(0.0, y, y)
    else:
        derivs[0] = rhs(0.0, y, None)
    derivs_in[0] = derivs[0]

    for i in range(n):
        t = i * h
        gate_open = zero_delay or (m is not None and i >= m)
        if gate_open and not zero_delay:
            zd_start = values[i - m]
            zd_mid = half_knot(i - m)
            zd_end = values[i - m + 1]

        k1 = derivs[i]
        y2 = y + (0.5 * h) * k1
        if zero_delay:
            k2 = rhs(t + 0.5 * h, y2, y2)
        else:
            k2 = rhs(t + 0.5 * h, y2, zd_mid if gate_open else None)
        y3 = y + (0.5 * h) * k2
        if zero_delay:
            k3 = rhs(t + 0.5 * h, y3, y3)
        else:
            k3 = rhs(t + 0.5 * h, y3, zd_mid if gate_open else None)
        y4 = y + h * k3
        if zero_delay:
            k4 = rhs(t + h, y4, y4)
        else:
            k4 = rhs(t + h, y4, zd_end if gate_open else None)

        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(y.view(float))):
            raise SolverDivergence(f"diverged at t={t + h}")
        values[i + 1] = y

        t_next = t + h
        if zero_delay:
            derivs_in[i + 1] = rhs(t_next, y, y)
            derivs[i + 1] = derivs_in[i + 1]
        else:
            derivs_in[i + 1] = rhs(t_next, y, zd_end if gate_open else None)
            gate_next = m is not None and (i + 1) >= m
            if gate_next == gate_open:
                derivs[i + 1] = derivs_in[i + 1]
            else:
                # gate opens exactly here: right-sided derivative includes
                # the delayed term, fed by the stored state at t_next - tau
                derivs[i + 1] = rhs(t_next, y, values[i + 1 - m])

    times = np.arange(n + 1) * h
    return Trajectory(times, values, derivs, derivs_in, h)


def evaluate_history(traj: Trajectory, t):
    """Cubic Hermite evaluation of the trajectory at time(s) ``t``.

    Exact at stored sample times.  Raises ValueError for t outside
    [0, traj.t_end].
    """
    t_arr = np.asarray(t, dtype=float)
    scalar = t_arr.ndim == 0
    t_arr = np.atleast_1d(t_arr)

    h = traj.step
    last = traj.t_end
    slack = _KNOT_SNAP * max(1.0, last)
    if np.any(t_arr < -slack) or np.any(t_arr > last + slack):
        raise ValueError("history out of range")

    u = t_arr / h
    n_int = len(traj.times) - 1
    k = np.clip(np.floor(u).astype(int), 0, n_int - 1)
    s = u - k

    y0 = traj.values[k]
    y1 = traj.values[k + 1]
    d0 = traj.derivatives[k]
    d1 = traj.derivatives_in[k + 1]
    ss = s[:, None]
    s2 = ss * ss
    s3 = s2 * ss
    out = (
        (2.0 * s3 - 3.0 * s2 + 1.0) * y0
        + (s3 - 2.0 * s2 + ss) * h * d0
        + (-2.0 * s3 + 3.0 * s2) * y1
        + (s3 - s2) * h * d1
    )

    # snap knot queries so stored samples are reproduced exactly
    r = np.rint(u)
    on_knot = np.abs(u - r) < _KNOT_SNAP
    if np.any(on_knot):
        idx = np.clip(r[on_knot].astype(int), 0, n_int)
        out[on_knot] = traj.values[idx]

    return out[0] if scalar else out
