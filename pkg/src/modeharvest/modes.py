"""Eigenmodes of a scalar field confined by a harmonic trap or a Dirichlet box.

A confining potential turns the field into a discrete tower of spatially
localized modes.  Two analytic families are supported:

* ``harmonic``: V(x) = |x|^2 / (2 scale^4).  Per-axis profiles are harmonic
  oscillator wavefunctions of width ``scale``; frequencies are
  ``sqrt(m^2 + (2/scale^2)(n_x + n_y + n_z + 3/2))``.
* ``box``: a cube of side ``scale`` with Dirichlet walls.  Per-axis profiles
  are sine modes, identically zero outside the cube; frequencies are
  ``sqrt(m^2 + (pi/scale)^2 (n_x^2 + n_y^2 + n_z^2))``.

The full spatial mode is ``Phi_n(x) = (2 w_n)^(-1/2) prod_i f_{n_i}(x_i - c_i)``
with each per-axis factor ``f_m`` normalized to unit L2 norm.

All functions are pure and safe to call concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .errors import (
    InvalidModeError,
    KindMismatchError,
    ToleranceError,
    UnsupportedOrderError,
)

__all__ = [
    "HARMONIC",
    "BOX",
    "PotentialSpec",
    "hermite_eval",
    "harmonic_frequency",
    "box_frequency",
    "mode_frequency",
    "axis_profile",
    "mode_spatial_profile",
    "mode_overlap",
]

HARMONIC = "harmonic"
BOX = "box"

# Raw three-term recurrence for H_m is numerically safe well past m = 60 for
# the arguments that survive the Gaussian weight; the guard keeps callers off
# the untested regime.
_HERMITE_ORDER_GUARD = 60

_OVERLAP_ABS_TOL = 1e-12


@dataclass(frozen=True)
class PotentialSpec:
    """Confining potential of one probe field.

    Parameters
    ----------
    kind : str
        ``"harmonic"`` or ``"box"``.
    scale : float
        Trap length scale: oscillator width for ``harmonic``, cube side for
        ``box``.  Must be positive.
    probe_mass : float, optional
        Mass of the confined field (inverse length units).  Default 0.
    center : tuple of float, optional
        Spatial offset of the trap.  For ``harmonic`` this is the potential
        minimum; for ``box`` it is the cube corner, i.e. the cube occupies
        ``center + [0, scale]^3``.
    """

    kind: str
    scale: float
    probe_mass: float = 0.0
    center: tuple[float, float, float] = field(default=(0.0, 0.0, 0.0))

    def __post_init__(self):
        if self.kind not in (HARMONIC, BOX):
            raise KindMismatchError(f"unknown potential kind {self.kind!r}")
        if not self.scale > 0:
            raise ValueError("potential scale must be positive")
        if self.probe_mass < 0:
            raise ValueError("probe mass must be non-negative")
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))
        if len(self.center) != 3:
            raise ValueError("center must be a 3-vector")


ModeIndex = tuple[int, int, int]


def validate_mode(n: ModeIndex, pot: PotentialSpec) -> ModeIndex:
    """Check a mode index against the potential kind and return it as a tuple.

    Harmonic indices must be non-negative, box indices strictly positive.
    """
    n = tuple(int(c) for c in n)
    if len(n) != 3:
        raise InvalidModeError(f"mode index must have 3 components, got {n}")
    low = 0 if pot.kind == HARMONIC else 1
    if any(c < low for c in n):
        raise InvalidModeError(f"mode index {n} invalid for {pot.kind} potential")
    return n


def hermite_eval(m: int, u: float) -> float:
    """Physicists' Hermite polynomial H_m(u) by the three-term recurrence.

    Orders above 60 are rejected rather than returned inaccurately.
    """
    if m < 0:
        raise UnsupportedOrderError("Hermite order must be non-negative")
    if m > _HERMITE_ORDER_GUARD:
        raise UnsupportedOrderError(
            f"Hermite order {m} above recurrence guard {_HERMITE_ORDER_GUARD}"
        )
    h_prev, h = 1.0, 2.0 * u
    if m == 0:
        return h_prev
    for k in range(1, m):
        h_prev, h = h, 2.0 * u * h - 2.0 * k * h_prev
    return h


def harmonic_frequency(n: ModeIndex, pot: PotentialSpec) -> float:
    """Eigenfrequency of harmonic-trap mode ``n``."""
    if pot.kind != HARMONIC:
        raise KindMismatchError("harmonic_frequency requires a harmonic potential")
    n = validate_mode(n, pot)
    return math.sqrt(
        pot.probe_mass**2 + (2.0 / pot.scale**2) * (sum(n) + 1.5)
    )


def box_frequency(n: ModeIndex, pot: PotentialSpec) -> float:
    """Eigenfrequency of Dirichlet-box mode ``n``."""
    if pot.kind != BOX:
        raise KindMismatchError("box_frequency requires a box potential")
    n = validate_mode(n, pot)
    return math.sqrt(
        pot.probe_mass**2 + (math.pi / pot.scale) ** 2 * sum(c * c for c in n)
    )


def mode_frequency(n: ModeIndex, pot: PotentialSpec) -> float:
    """Eigenfrequency of mode ``n`` for either potential kind."""
    if pot.kind == HARMONIC:
        return harmonic_frequency(n, pot)
    return box_frequency(n, pot)


def _harmonic_axis(m: int, scale: float, u):
    """Unit-norm oscillator function f_m(u) of width ``scale``, centered at 0.

    Uses the scaled recurrence on normalized functions, which stays bounded
    where the raw polynomial recurrence would overflow.
    """
    if m > _HERMITE_ORDER_GUARD:
        raise UnsupportedOrderError(
            f"Hermite order {m} above recurrence guard {_HERMITE_ORDER_GUARD}"
        )
    x = np.asarray(u, dtype=float) / scale
    h_prev = np.pi ** (-0.25) * np.exp(-0.5 * x * x)
    if m == 0:
        return h_prev / math.sqrt(scale)
    h = math.sqrt(2.0) * x * h_prev
    for k in range(1, m):
        h_prev, h = h, x * math.sqrt(2.0 / (k + 1)) * h - math.sqrt(k / (k + 1.0)) * h_prev
    return h / math.sqrt(scale)


def _box_axis(m: int, scale: float, u):
    """Unit-norm Dirichlet sine mode on [0, scale], exactly 0 outside."""
    x = np.asarray(u, dtype=float)
    inside = (x >= 0.0) & (x <= scale)
    out = np.zeros_like(x)
    out[inside] = math.sqrt(2.0 / scale) * np.sin(math.pi * m * x[inside] / scale)
    return out


def axis_profile(m: int, pot: PotentialSpec, u):
    """Per-axis envelope factor f_m(u) relative to the trap center.

    The envelope is L2-normalized; it carries no frequency factor.
    """
    if pot.kind == HARMONIC:
        if m < 0:
            raise InvalidModeError("harmonic axis index must be non-negative")
        return _harmonic_axis(m, pot.scale, u)
    if m < 1:
        raise InvalidModeError("box axis index must be positive")
    return _box_axis(m, pot.scale, u)


def mode_spatial_profile(n: ModeIndex, pot: PotentialSpec, x) -> float:
    """Spatial mode Phi_n(x) = (2 w_n)^(-1/2) prod_i f_{n_i}(x_i - center_i)."""
    n = validate_mode(n, pot)
    omega = mode_frequency(n, pot)
    x = np.asarray(x, dtype=float)
    val = 1.0 / math.sqrt(2.0 * omega)
    for i in range(3):
        val *= float(axis_profile(n[i], pot, x[i] - pot.center[i]))
    return val


def _gaussian_axis_overlap(sa: float, sb: float, sep: float) -> float:
    """Closed-form overlap of two unit-norm ground Gaussians."""
    s2 = sa * sa + sb * sb
    return math.sqrt(2.0 * sa * sb / s2) * math.exp(-sep * sep / (2.0 * s2))


def _axis_support(m: int, pot: PotentialSpec, axis: int):
    c = pot.center[axis]
    if pot.kind == BOX:
        return (c, c + pot.scale)
    # Gaussian tail: 40 widths is far below the overlap tolerance
    half = 40.0 * pot.scale
    return (c - half, c + half)


def mode_overlap(
    nA: ModeIndex,
    potA: PotentialSpec,
    nB: ModeIndex,
    potB: PotentialSpec,
) -> float:
    """Overlap integral of two unit-normalized spatial envelopes.

    Computes ``int d^3x fbar_A(x) fbar_B(x)`` where ``fbar`` omits the
    ``(2 w)^(-1/2)`` frequency factor.  Gaussian ground-mode pairs use the
    closed form; every other combination is integrated per axis by adaptive
    quadrature (0 is returned for boxes with disjoint supports).
    """
    nA = validate_mode(nA, potA)
    nB = validate_mode(nB, potB)
    if potA.kind == HARMONIC and potB.kind == HARMONIC and nA == nB == (0, 0, 0):
        return math.prod(
            _gaussian_axis_overlap(
                potA.scale, potB.scale, potB.center[i] - potA.center[i]
            )
            for i in range(3)
        )
    total = 1.0
    for i in range(3):
        loA, hiA = _axis_support(nA[i], potA, i)
        loB, hiB = _axis_support(nB[i], potB, i)
        lo, hi = max(loA, loB), min(hiA, hiB)
        if hi <= lo:
            return 0.0
        fa = lambda u, m=nA[i]: float(axis_profile(m, potA, u - potA.center[i]))
        fb = lambda u, m=nB[i]: float(axis_profile(m, potB, u - potB.center[i]))
        val, err = integrate.quad(
            lambda u: fa(u) * fb(u),
            lo,
            hi,
            epsabs=_OVERLAP_ABS_TOL,
            epsrel=1e-11,
            limit=400,
        )
        # quad reports conservative estimates on oscillatory products; only a
        # genuinely unconverged axis is worth an error
        if err > 1e-8 * max(1.0, abs(val)):
            raise ToleranceError("mode_overlap axis quadrature did not converge", err)
        total *= val
    return total
