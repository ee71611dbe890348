"""Mixedness of a Gaussian-profile field mode in a harmonic trap.

A field mode defined by quadratures smeared against a normalized Gaussian of
width ``sigma`` overlaps the trap's normal modes (ground width ``ell``) with
squared coefficients

    c^2_{2n} = sech(r)^d (tanh(r)^2 / 4)^(sum n_i) prod (2 n_i)! / (n_i!)^2,

where ``r = log(sigma/ell)`` and only all-even multi-indices contribute.  The
symplectic eigenvalue of its reduced covariance is

    nu^2 = sech(r)^(2d) * S_+ * S_-,
    S_+- = sum_n (tanh^2 r / 4)^n F_d(n) (m^2 l^2 + 4n + d)^(+-1/2),

with the combinatorial weight ``F_d(n) = sum_{|n|=n} prod binom(2 n_i, n_i)``
whose generating function is ``(1 - 4x)^(-d/2)``.  ``nu = 1`` iff
``sigma = ell``; Cauchy-Schwarz gives ``nu >= 1`` always.

``F_d`` is evaluated in exact integer arithmetic (iterated convolution of the
central-binomial sequence) before any float conversion, so high-order terms
suffer no cancellation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import TruncationFailureError

__all__ = [
    "PuritySpec",
    "PurityResult",
    "squeezing_parameter",
    "f_weight",
    "overlap_coeff_sq",
    "symplectic_eigenvalue",
    "purity_interval",
]

_F_WEIGHT_GUARD = 10_000
# convergence rule: stop once this many consecutive terms are relatively tiny
_CONSECUTIVE_SMALL = 5


@dataclass(frozen=True)
class PuritySpec:
    """Inputs of the mixedness analysis.

    ``sigma``: Gaussian profile width; ``ell``: trap scale; ``mass_ell``: the
    dimensionless product of field mass and trap scale; ``dim``: spatial
    dimension in {1, 2, 3}; ``series_rel_tol``: relative tail target for the
    series truncation.
    """

    sigma: float
    ell: float
    mass_ell: float = 0.0
    dim: int = 3
    series_rel_tol: float = 1e-12

    def __post_init__(self):
        if not (self.sigma > 0 and self.ell > 0):
            raise ValueError("sigma and ell must be positive")
        if self.mass_ell < 0:
            raise ValueError("mass_ell must be non-negative")
        if self.dim not in (1, 2, 3):
            raise ValueError("dim must be 1, 2, or 3")
        if not self.series_rel_tol > 0:
            raise ValueError("series_rel_tol must be positive")


@dataclass(frozen=True)
class PurityResult:
    """Symplectic eigenvalue and the variances it is built from.

    ``nu >= 1`` with equality only for a pure mode; ``nu^2`` equals
    ``4 qq_var pp_var`` identically.  ``terms_used`` counts series terms,
    ``truncation_bound`` is an upper estimate of the dropped tail relative to
    the sums.
    """

    nu: float
    qq_var: float
    pp_var: float
    terms_used: int
    truncation_bound: float


def squeezing_parameter(sigma: float, ell: float) -> float:
    """``r = log(sigma / ell)``; antisymmetric under swapping the scales."""
    if not (sigma > 0 and ell > 0):
        raise ValueError("sigma and ell must be positive")
    return math.log(sigma / ell)


@lru_cache(maxsize=None)
def _f_row(dim: int, nmax: int) -> tuple:
    """F_dim(0..nmax) by convolving the central-binomial sequence, exact."""
    central = [math.comb(2 * n, n) for n in range(nmax + 1)]
    row = central
    for _ in range(dim - 1):
        row = [
            sum(row[j] * central[n - j] for j in range(n + 1))
            for n in range(nmax + 1)
        ]
    return tuple(row)


def f_weight(n: int, dim: int) -> int:
    """Combinatorial weight ``F_d(n)``, exact integer."""
    if dim not in (1, 2, 3):
        raise ValueError("dim must be 1, 2, or 3")
    if n < 0:
        raise ValueError("n must be non-negative")
    if n > _F_WEIGHT_GUARD:
        raise ValueError(f"n above guard {_F_WEIGHT_GUARD}")
    # rows are cached at power-of-two lengths so repeated lookups share work
    size = max(64, 1 << int(n).bit_length())
    return _f_row(dim, min(size, _F_WEIGHT_GUARD))[n]


def overlap_coeff_sq(n, r: float, dim: int) -> float:
    """Squared overlap ``c^2`` with the doubled trap mode ``2n``.

    ``n`` is the half-index tuple (length ``dim``, non-negative entries);
    odd trap modes have zero overlap and are not represented.
    """
    if dim not in (1, 2, 3):
        raise ValueError("dim must be 1, 2, or 3")
    n = tuple(int(c) for c in n)
    if len(n) != dim or any(c < 0 for c in n):
        raise ValueError(f"half-index {n} invalid for dim {dim}")
    t2 = math.tanh(r) ** 2
    val = math.cosh(r) ** (-dim) * (t2 / 4.0) ** sum(n)
    for c in n:
        val *= math.comb(2 * c, c)
    return val


def _series_terms(spec: PuritySpec):
    """Yield ``(n, weight_n, sqrt(m^2 l^2 + 4n + d))`` until converged.

    ``weight_n = (tanh^2 r / 4)^n F_d(n)``, advanced through the exact ratio
    ``F_d(n)/F_d(n-1) = 2 (2n - 2 + d) / n`` of the generating-function
    coefficients (the convolution definition overflows floats long before the
    weight itself stops being representable).  Convergence is declared after
    ``_CONSECUTIVE_SMALL`` consecutive terms fall below ``series_rel_tol``
    relative to the running plus-branch sum.
    """
    r = squeezing_parameter(spec.sigma, spec.ell)
    t2 = math.tanh(r) ** 2
    m2l2 = spec.mass_ell**2
    s_plus = 0.0
    small_run = 0
    n = 0
    w = 1.0
    while n <= _F_WEIGHT_GUARD:
        root = math.sqrt(m2l2 + 4.0 * n + spec.dim)
        yield n, w, root
        s_plus += w * root
        if w * root <= spec.series_rel_tol * s_plus:
            small_run += 1
            if small_run >= _CONSECUTIVE_SMALL:
                return
        else:
            small_run = 0
        n += 1
        w *= t2 * (2.0 * (2.0 * n - 2.0 + spec.dim)) / (4.0 * n)
    raise TruncationFailureError(
        f"series not converged within {_F_WEIGHT_GUARD} terms", partial=s_plus
    )


def _tail_bound(spec: PuritySpec, n_last: int, s_plus: float) -> float:
    """Geometric majorant of the dropped tail, relative to the sums.

    Uses ``binom(2n, n) <= 4^n``, so term ``n`` is majorized by
    ``tanh^(2n) r binom(n+d-1, d-1) sqrt(m^2 l^2 + 4n + d)``; the tail is
    summed explicitly until it is negligible against its own head.
    """
    t2 = math.tanh(squeezing_parameter(spec.sigma, spec.ell)) ** 2
    if t2 == 0.0:
        return 0.0
    m2l2 = spec.mass_ell**2
    tail = 0.0
    tn = t2 ** (n_last + 1)
    for n in range(n_last + 1, n_last + 2000):
        term = tn * math.comb(n + spec.dim - 1, spec.dim - 1) * math.sqrt(
            m2l2 + 4.0 * n + spec.dim
        )
        tail += term
        if term < 1e-3 * spec.series_rel_tol * max(tail, s_plus):
            break
        tn *= t2
    return tail / s_plus if s_plus > 0 else tail


def symplectic_eigenvalue(spec: PuritySpec) -> PurityResult:
    """Symplectic eigenvalue of the Gaussian-profile mode's reduced state."""
    r = squeezing_parameter(spec.sigma, spec.ell)
    sech_d = math.cosh(r) ** (-spec.dim)
    s_plus = 0.0
    s_minus = 0.0
    n_last = 0
    for n, w, root in _series_terms(spec):
        s_plus += w * root
        s_minus += w / root
        n_last = n
    # variances in physical units: w_n = sqrt(m^2 l^2 + 4n + d) / ell
    qq_var = 0.5 * sech_d * spec.ell * s_minus
    pp_var = 0.5 * sech_d * s_plus / spec.ell
    nu = 2.0 * math.sqrt(qq_var * pp_var)
    return PurityResult(
        nu=nu,
        qq_var=qq_var,
        pp_var=pp_var,
        terms_used=n_last + 1,
        truncation_bound=_tail_bound(spec, n_last, s_plus),
    )


def purity_interval(
    mass_ell: float,
    dim: int,
    nu_max: float = 1.05,
    ratio_cap: float = 100.0,
    series_rel_tol: float = 1e-12,
) -> tuple[float, float]:
    """Largest ratio interval around 1 where ``nu <= nu_max``.

    Returns ``(lo, hi)`` in the ratio ``sigma/ell``; by the ``r -> -r``
    symmetry ``lo = 1/hi``.  The edge is located by bisection.
    """

    def nu_of(ratio: float) -> float:
        try:
            return symplectic_eigenvalue(
                PuritySpec(ratio, 1.0, mass_ell, dim, series_rel_tol)
            ).nu
        except TruncationFailureError:
            # only reachable at extreme ratios, which are extremely mixed
            return math.inf

    lo, hi = 1.0, ratio_cap
    if nu_of(hi) <= nu_max:
        return (1.0 / hi, hi)
    for _ in range(60):
        mid = math.sqrt(lo * hi)
        if nu_of(mid) <= nu_max:
            lo = mid
        else:
            hi = mid
    return (1.0 / lo, lo)
