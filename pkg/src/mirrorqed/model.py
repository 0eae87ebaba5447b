"""Physical parameters and amplitude-frame bookkeeping.

The system is a Lambda-type three-level emitter (ground |g>, metastable |s>,
excited |e>) sitting a distance ``d`` in front of the mirrored end of a
semi-infinite 1D waveguide.  The |e>-|s> transition is driven classically
with Rabi frequency ``omega_rabi``; |e>-|g> couples to the guided continuum
with decay rate ``gamma``.  Everything downstream works in units where
``gamma = 1`` and ``velocity = 1`` unless told otherwise.

Three amplitude frames are used for the single-excitation pair
(upper, lower):

* ``bare``     -- (C_e, C_s), carrying the optical phases,
* ``rotated``  -- (c_e, c_s) = (C_e, C_s) * exp(+i*omega_e*t),
* ``dressed``  -- (c_+, c_-), amplitudes on the drive-dressed states with
  their free phases exp(-i*omega_pm*t) removed.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

FRAMES = ("bare", "rotated", "dressed")

#: tolerance on |c_upper|^2 + |c_lower|^2 <= 1 (the photon carries the rest)
EPS_NORM = 1e-9


@dataclass(frozen=True)
class SystemParams:
    """All physical constants of the emitter-waveguide system.

    ``delta`` is the single source of truth for the |s> energy:
    ``omega_s = omega_e - delta`` is always derived, never stored.
    """

    gamma: float = 1.0
    omega_rabi: float = 0.0
    omega_e: float = 100.0
    delta: float = 0.0
    distance: float = 0.0
    velocity: float = 1.0

    def __post_init__(self) -> None:
        if not (self.gamma > 0.0):
            raise ValueError("gamma must be > 0")
        if not (self.velocity > 0.0):
            raise ValueError("velocity must be > 0")
        if not (self.distance >= 0.0):
            raise ValueError("distance must be >= 0")
        if not (self.omega_rabi >= 0.0):
            raise ValueError("omega_rabi must be >= 0")
        if math.isnan(self.omega_e) or math.isnan(self.delta):
            raise ValueError("omega_e and delta must be finite numbers")

    @property
    def omega_s(self) -> float:
        return self.omega_e - self.delta

    @property
    def tau(self) -> float:
        """Round-trip delay emitter -> mirror -> emitter."""
        return 2.0 * self.distance / self.velocity

    @property
    def coherence_length(self) -> float:
        """Spatial extent of the emitted wavepacket, v/gamma."""
        return self.velocity / self.gamma


@dataclass(frozen=True)
class DressedBasis:
    """Energies and mixing of the drive-dressed states |+>, |->.

    |+> = cos(theta)|e> + sin(theta)|s> and |-> = sin(theta)|e> - cos(theta)|s>,
    with energies omega_bar +/- delta_big.
    """

    omega_plus: float
    omega_minus: float
    omega_bar: float
    delta_big: float
    sin_theta: float
    cos_theta: float


@dataclass(frozen=True)
class CharacteristicScales:
    """Length/time scales of the problem; a scale is None when its defining
    frequency vanishes (or is not positive)."""

    lambda_e: float | None
    lambda_plus: float | None
    lambda_minus: float | None
    lambda_osc: float | None
    coherence_length: float
    tau: float


@dataclass(frozen=True)
class AmplitudePair:
    """Emitter amplitude pair in one of the three frames."""

    c_upper: complex
    c_lower: complex
    frame: str = "bare"

    def __post_init__(self) -> None:
        if self.frame not in FRAMES:
            raise ValueError(f"unknown frame {self.frame!r}, expected one of {FRAMES}")
        if self.norm_sq > 1.0 + EPS_NORM:
            raise ValueError(
                f"emitter norm {self.norm_sq} exceeds 1 + {EPS_NORM}"
            )

    @property
    def norm_sq(self) -> float:
        return abs(self.c_upper) ** 2 + abs(self.c_lower) ** 2


def dressed_basis(p: SystemParams) -> DressedBasis:
    """Diagonalize the driven emitter: energies omega_bar +/- delta_big with
    delta_big = sqrt(delta^2/4 + omega_rabi^2).

    Raises ValueError when delta = omega_rabi = 0 (degenerate, no splitting).
    """
    big = math.hypot(0.5 * p.delta, p.omega_rabi)
    if big == 0.0:
        raise ValueError("dressed basis undefined: delta and omega_rabi both zero")
    bar = 0.5 * (p.omega_e + p.omega_s)
    # Mixing stored as the (sin, cos) pair; both are nonnegative by construction.
    sin_theta = math.sqrt((2.0 * big - p.delta) / (4.0 * big))
    cos_theta = math.sqrt((2.0 * big + p.delta) / (4.0 * big))
    return DressedBasis(
        omega_plus=bar + big,
        omega_minus=bar - big,
        omega_bar=bar,
        delta_big=big,
        sin_theta=sin_theta,
        cos_theta=cos_theta,
    )


def characteristic_scales(p: SystemParams) -> CharacteristicScales:
    """Wavelengths, coherence length and round-trip delay for the parameters."""

    def wavelength(omega: float) -> float | None:
        return 2.0 * math.pi * p.velocity / omega if omega > 0.0 else None

    lam_p = lam_m = None
    if p.delta != 0.0 or p.omega_rabi != 0.0:
        basis = dressed_basis(p)
        lam_p = wavelength(basis.omega_plus)
        lam_m = wavelength(basis.omega_minus)
    return CharacteristicScales(
        lambda_e=wavelength(p.omega_e),
        lambda_plus=lam_p,
        lambda_minus=lam_m,
        lambda_osc=wavelength(p.omega_rabi),
        coherence_length=p.coherence_length,
        tau=p.tau,
    )


def _to_bare(a: AmplitudePair, t: float, p: SystemParams) -> tuple[complex, complex]:
    if a.frame == "bare":
        return a.c_upper, a.c_lower
    if a.frame == "rotated":
        ph = cmath.exp(-1j * p.omega_e * t)
        return a.c_upper * ph, a.c_lower * ph
    b = dressed_basis(p)
    up = a.c_upper * cmath.exp(-1j * b.omega_plus * t)
    lo = a.c_lower * cmath.exp(-1j * b.omega_minus * t)
    return (
        b.cos_theta * up + b.sin_theta * lo,
        b.sin_theta * up - b.cos_theta * lo,
    )


def _from_bare(
    ce: complex, cs: complex, t: float, p: SystemParams, frame: str
) -> tuple[complex, complex]:
    if frame == "bare":
        return ce, cs
    if frame == "rotated":
        ph = cmath.exp(1j * p.omega_e * t)
        return ce * ph, cs * ph
    b = dressed_basis(p)
    return (
        (b.cos_theta * ce + b.sin_theta * cs) * cmath.exp(1j * b.omega_plus * t),
        (b.sin_theta * ce - b.cos_theta * cs) * cmath.exp(1j * b.omega_minus * t),
    )


def frame_transform(
    a: AmplitudePair, t: float, p: SystemParams, target_frame: str
) -> AmplitudePair:
    """Re-express the same physical state at time ``t`` in ``target_frame``.

    All transformations are unitary, so the emitter norm is preserved and a
    round trip is the identity up to rounding.
    """
    if target_frame not in FRAMES:
        raise ValueError(f"unknown frame {target_frame!r}, expected one of {FRAMES}")
    if t < 0.0:
        raise ValueError("t must be >= 0")
    ce, cs = _to_bare(a, t, p)
    upper, lower = _from_bare(ce, cs, t, p, target_frame)
    return AmplitudePair(upper, lower, target_frame)
