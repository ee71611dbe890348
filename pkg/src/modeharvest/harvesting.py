"""Leading-order two-detector state, negativity, and communication diagnostic.

For detectors I, J with effective smearings ``Lambda_I = zeta(t) Phi_I(x)``
coupled to the vacuum, the second-order state is built from three families of
pair integrals, reduced here to momentum space:

* ``L_IJ``: local/ crossed excitation terms weighted by the local time kernel;
* ``K_I`` and ``M``: time-ordered terms weighted by the Feynman time kernel,
  with ``M`` carrying the relative sign that makes ``M = -K`` at coincidence.

Two spatial integration strategies are used.  When both detectors have
radially symmetric transforms the angular integral collapses to
``sinc(k |sep|)`` and a single adaptive 1D quadrature remains.  Otherwise a
3D tensor Gauss-Legendre rule in spherical momentum coordinates handles the
product structure of the transforms: the measure absorbs the ``1/(2 w_k)``
cone of the massless dispersion (a Cartesian grid would lose it to algebraic
convergence), and node counts follow the fastest phase in each coordinate.

The commutator (communication) part of ``M`` is exponentially small at
spacelike separation while the integrand it comes from is not: its value
survives ten or more digits of oscillatory cancellation.  Adaptive rules
estimate such integrals badly, so the sine moment of the time-ordered kernel
is evaluated on fixed composite Gauss-Legendre grids dense enough to resolve
every phase, where the cancellation is exact to rounding.

The truncated two-mode state lives in the 9-dimensional basis
``|n_A n_B> = (00, 01, 02, 10, 11, 12, 20, 21, 22)`` (B varies fastest).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import integrate

from .errors import (
    GapMismatchError,
    InconsistentInputError,
    SwitchingMismatchError,
    ToleranceError,
)
from .kernels import (
    ADAPTIVE_GK,
    TENSOR_GL,
    MONTE_CARLO,
    QuadratureSettings,
    TargetFieldSpec,
    v_cos,
    v_sin_fast,
)
from .smearing import (
    DetectorSpec,
    axis_transform,
    is_radial,
)

__all__ = [
    "HarvestingResult",
    "CommunicationEstimate",
    "compute_L",
    "compute_K",
    "compute_M",
    "communication_estimate",
    "harvest_pair",
    "gap_sweep",
    "assemble_rho",
    "validate_pair_state",
    "negativity_closed",
    "negativity_from_rho",
]

BASIS_ORDER = ("00", "01", "02", "10", "11", "12", "20", "21", "22")

_GL_PER_PANEL = 10
# k-ranges in units of 1/T: the local and symmetrized kernels die as
# exp(-w^2 T^2/pi); the sine moment decays only algebraically in the kernel
# and is cut by the spatial transforms (Gaussian) or at _KMAX_SINE_T (box).
_KMAX_LOCAL_T = 18.0
_KMAX_SINE_T = 96.0
# exp(-k^2 (sI^2+sJ^2)/2) reaches 1e-20 at this many squared inverse lengths
_PROFILE_DECADES = 92.0


@dataclass(frozen=True)
class CommunicationEstimate:
    """Commutator-mediated part of M: absolute size and ratio to |M|."""

    magnitude: float
    ratio: float


@dataclass(frozen=True)
class HarvestingResult:
    """Scalars of the leading-order detector-pair state.

    ``l_aa``/``l_bb`` are the local excitation terms, ``l_ab`` the crossed
    one, ``k_a``/``k_b`` the local time-ordered coherences, ``m`` the
    nonlocal pairing term.  ``negativity`` is the closed-form value computed
    from the stored scalars, ``comm_estimate``/``comm_ratio`` the
    communication diagnostic, and the ``err_*`` fields carry quadrature error
    bounds for each term.
    """

    l_aa: float
    l_bb: float
    l_ab: complex
    k_a: complex
    k_b: complex
    m: complex
    negativity: float
    comm_estimate: float
    comm_ratio: float
    err_l_aa: float
    err_l_bb: float
    err_l_ab: float
    err_k_a: float
    err_k_b: float
    err_m: float


# ---------------------------------------------------------------------------
# pair compatibility


def _separation(dI: DetectorSpec, dJ: DetectorSpec) -> np.ndarray:
    return np.asarray(dJ.potential.center, float) - np.asarray(
        dI.potential.center, float
    )


def _require_pair(dI: DetectorSpec, dJ: DetectorSpec):
    """Equal gaps and identical switchings are required for cross terms."""
    ga, gb = dI.effective_gap, dJ.effective_gap
    if abs(ga - gb) > 1e-12 * max(ga, gb):
        raise GapMismatchError(
            f"cross-detector term needs equal gaps, got {ga} and {gb}"
        )
    if dI.switching != dJ.switching:
        raise SwitchingMismatchError(
            "cross-detector term needs identical switching specs"
        )
    return ga, dI.switching


def _u_prefactor(gap: float, s) -> complex:
    T = s.timescale
    mag = 2.0 * T * math.exp(-gap * gap * T * T / math.pi)
    return mag * complex(np.exp(2j * gap * s.center_time))


# ---------------------------------------------------------------------------
# radial (1D) engine


def _profile_kmax(dI, dJ):
    """k beyond which the Gaussian envelope pair is below 1e-20 (inf for box)."""
    s2 = 0.0
    for det in (dI, dJ):
        if det.potential.kind == "box":
            return math.inf
        s2 += det.potential.scale ** 2
    return math.sqrt(2.0 * _PROFILE_DECADES / s2)


def _envelope_radial(det, k):
    """Radial envelope transform without the gap normalization."""
    scale = det.potential.scale
    return (4.0 * math.pi * scale * scale) ** 0.75 * np.exp(
        -0.5 * np.asarray(k) ** 2 * scale * scale
    )


def _radial_moment(dI, dJ, field, settings, kern, kmax):
    """``(2 pi)^-3 int d^3k kern(w) Fbar_I Fbar_J e^(-i k.sep)`` both radial.

    Reduces to ``(2 pi^2)^-1 int_0^kmax k^2 kern(w) Fbar_I Fbar_J sinc(k sep)``.
    ``kern`` takes the dispersion ``w`` and must include the ``1/(2w)``
    measure factor; ``Fbar`` omits the ``(2 gap)^(-1/2)`` normalization.
    """
    sep = float(np.linalg.norm(_separation(dI, dJ)))
    kmax = min(kmax, _profile_kmax(dI, dJ))

    def f(k):
        w = math.hypot(k, field.mass)
        val = k * k * kern(w) * _envelope_radial(dI, k) * _envelope_radial(dJ, k)
        if sep > 0.0:
            x = k * sep
            val *= math.sin(x) / x
        return val

    val, err = integrate.quad(
        f,
        0.0,
        kmax,
        epsabs=settings.abs_tol,
        epsrel=settings.rel_tol,
        limit=settings.quad_limit,
    )
    return val / (2.0 * math.pi**2), err / (2.0 * math.pi**2)


# ---------------------------------------------------------------------------
# tensor (3D Gauss-Legendre in spherical momentum coordinates) engine


def _panel_nodes(kmax: float, rate: float, density: float):
    """Composite GL nodes on [0, kmax] with ~``density`` panels per period."""
    n_panels = max(4, int(math.ceil(kmax * rate * density / (2.0 * math.pi))))
    edges = np.linspace(0.0, kmax, n_panels + 1)
    x, w = leggauss(_GL_PER_PANEL)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def _pair_rate(dI, dJ):
    """Fastest spatial phase rate of the pair (separation plus windows)."""
    rate = float(np.linalg.norm(_separation(dI, dJ)))
    for det in (dI, dJ):
        scale = det.potential.scale
        rate += scale if det.potential.kind == "box" else 0.5 * scale
    return rate


def _axis_pair_factor(dI, dJ, ax, k):
    """``conj(f_I) f_J`` on one axis; real |f|^2 shortcut for equal specs."""
    pI, pJ = dI.potential, dJ.potential
    if pI.kind == pJ.kind and pI.scale == pJ.scale and dI.mode[ax] == dJ.mode[ax]:
        if pI.kind == "harmonic":
            f = axis_transform(dI, ax, k)
            return f * f
        n, d = dI.mode[ax], pI.scale
        beta = math.pi * n / d
        sign = (-1.0) ** n
        near = np.abs(np.abs(k) - beta) < 2e-4 * beta
        far = ~near
        out = np.empty(k.shape)
        kf = k[far]
        out[far] = (
            (2.0 / d)
            * beta
            * beta
            * (2.0 - 2.0 * sign * np.cos(kf * d))
            / (beta * beta - kf * kf) ** 2
        )
        if near.any():
            out[near] = np.abs(axis_transform(dI, ax, k[near])) ** 2
        return out
    return np.conj(axis_transform(dI, ax, k)) * axis_transform(dJ, ax, k)


class _TensorGeometry:
    """Gap-independent spatial data of one pair on an (r, cos theta, phi) grid.

    Tensor product rule: composite GL panels radially, GL in the polar
    cosine, uniform (trapezoidal) azimuth.  The radial measure ``r^2`` makes
    the massless ``1/(2 w)`` integrand smooth at the origin.  The grid covers
    the half sphere ``cos theta > 0``; the other half is its image under
    ``k -> -k``, which conjugates the spatial factor, so real kernels only
    ever see ``2 Re`` of the stored factor.

    Every kernel is a function of the dispersion alone, i.e. constant on each
    shell, so the angular sums are contracted at construction; what remains
    is a radial profile against which any kernel is a dot product.
    """

    def __init__(self, dI, dJ, field, kmax, density):
        T = dI.switching.timescale
        sep = _separation(dI, dJ)
        rate = _pair_rate(dI, dJ) + 2.0 / T
        r, wr = _panel_nodes(kmax, rate, density)
        scale_factor = math.sqrt(density / 2.0)
        box_scale = max(dI.potential.scale, dJ.potential.scale)
        profile = np.empty(r.size)
        cache = {}
        for idx in range(r.size):
            # per-shell angular rules sized by the phase range at that radius
            n_th = 24 + int(0.75 * r[idx] * _pair_rate(dI, dJ) * scale_factor)
            n_ph = 16 + 2 * int((0.75 * r[idx] * box_scale + 4) * scale_factor)
            ang = cache.get((n_th, n_ph))
            if ang is None:
                cth, wth = leggauss(n_th)
                cth = 0.5 * (cth + 1.0)  # half sphere cos(theta) in (0, 1)
                sth = np.sqrt(1.0 - cth * cth)
                ph = (np.arange(n_ph) + 0.5) * (2.0 * math.pi / n_ph)
                ang = (
                    np.outer(sth, np.cos(ph)).ravel(),
                    np.outer(sth, np.sin(ph)).ravel(),
                    np.outer(cth, np.ones(n_ph)).ravel(),
                    (np.outer(0.5 * wth, np.ones(n_ph)) * (2.0 * math.pi / n_ph)).ravel(),
                )
                cache[(n_th, n_ph)] = ang
            ux, uy, uz, w_ang = ang
            kx, ky, kz = r[idx] * ux, r[idx] * uy, r[idx] * uz
            spat = (
                _axis_pair_factor(dI, dJ, 0, kx)
                * _axis_pair_factor(dI, dJ, 1, ky)
                * _axis_pair_factor(dI, dJ, 2, kz)
            )
            phase = kx * sep[0] + ky * sep[1] + kz * sep[2]
            if np.iscomplexobj(spat):
                spat = (spat * np.exp(-1j * phase)).real
            else:
                spat = spat * np.cos(phase)
            # 2 Re folds in the mirror half sphere; kernels are real
            profile[idx] = 2.0 * float(w_ang @ spat)
        self.profile = profile * wr * r * r / (2.0 * math.pi) ** 3
        self.r = r
        self.omega = np.hypot(r, field.mass)

    def moment(self, kern, rcut=None):
        """``(2 pi)^-3 int d^3k conj(F_I) F_J e^(-i k.sep) kern(w)``.

        ``kern`` must be real, vectorized, a function of the dispersion only,
        and include the ``1/(2w)`` measure factor.  ``rcut`` restricts the
        radial range (for truncation-error estimates).
        """
        if rcut is None:
            return float(self.profile @ kern(self.omega))
        mask = self.r <= rcut
        return float(self.profile[mask] @ kern(self.omega[mask]))


_GEOMETRY_CACHE: dict = {}


def _geometry(dI, dJ, field, kmax, density):
    """Cached tensor geometry; the key drops the (gap-independent) couplings."""
    key = (
        dI.potential, dI.mode, dJ.potential, dJ.mode,
        dI.switching.timescale, field.mass, round(kmax, 12), density,
    )
    geo = _GEOMETRY_CACHE.get(key)
    if geo is None:
        if len(_GEOMETRY_CACHE) > 12:
            _GEOMETRY_CACHE.clear()
        geo = _TensorGeometry(dI, dJ, field, kmax, density)
        _GEOMETRY_CACHE[key] = geo
    return geo


def _tensor_moment(dI, dJ, field, settings, kern, kmax, density=2.0):
    """Tensor-path moment plus a half-density error estimate."""
    kmax = min(kmax, _profile_kmax(dI, dJ))
    fine = _geometry(dI, dJ, field, kmax, density).moment(kern)
    coarse = _geometry(dI, dJ, field, kmax, density / 2.0).moment(kern)
    return fine, abs(fine - coarse)


# ---------------------------------------------------------------------------
# sine moment of the time-ordered kernel (the commutator part)


def _sine_moment(dI, dJ, field, settings):
    """Moment of the pair against ``V_s(w)/(2w)`` on fixed grids.

    Radial pairs reduce to a 1D composite Gauss-Legendre sum cut by the
    Gaussian envelopes.  Box transforms decay only algebraically, so their
    k-range is finite by fiat; for a separated pair the moment is a
    cancellation-small quantity with a genuine slow tail, and the error
    estimate compares two cut radii rather than two densities.
    """
    s = dI.switching
    T = s.timescale
    if _use_radial(dI, dJ, settings):
        sep = float(np.linalg.norm(_separation(dI, dJ)))
        kmax = min(_profile_kmax(dI, dJ), 400.0 / T)
        rate = sep + 2.0 / T + 3.0 * (dI.potential.scale + dJ.potential.scale)
        fine = _radial_sine_sum(dI, dJ, field, sep, kmax, rate, 3.0)
        coarse = _radial_sine_sum(dI, dJ, field, sep, kmax, rate, 1.5)
        return fine, abs(fine - coarse)

    def kern(w):
        return v_sin_fast(w, s) / (2.0 * w)

    coincident = float(np.linalg.norm(_separation(dI, dJ))) == 0.0 and (
        dI.potential == dJ.potential and dI.mode == dJ.mode
    )
    kmax_T = 48.0 if coincident else _KMAX_SINE_T
    kmax = min(kmax_T / T, _profile_kmax(dI, dJ))
    geo = _geometry(dI, dJ, field, kmax, 2.0)
    fine = geo.moment(kern)
    inner = geo.moment(kern, rcut=0.7 * kmax)
    return float(fine), abs(fine - inner)


def _radial_sine_sum(dI, dJ, field, sep, kmax, rate, density):
    k, w = _panel_nodes(kmax, rate, density)
    disp = np.hypot(k, field.mass)
    base = (
        k * k / (2.0 * disp)
        * v_sin_fast(disp, dI.switching)
        * _envelope_radial(dI, k)
        * _envelope_radial(dJ, k)
    )
    if sep > 0.0:
        base = base * (np.sin(k * sep) / (k * sep))
    return float(np.sum(base * w)) / (2.0 * math.pi**2)


# ---------------------------------------------------------------------------
# kernel factories (all real, vectorized over the dispersion, measure folded)


def _kern_local(gap, s):
    T = s.timescale

    def kern(w):
        return 2.0 * T * T * np.exp(-((gap + w) ** 2) * T * T / math.pi) / (2.0 * w)

    return kern


def _kern_vcos(s):
    def kern(w):
        return v_cos(w, s) / (2.0 * w)

    return kern


# ---------------------------------------------------------------------------
# public pair integrals


def _check_method(settings):
    if settings.method == MONTE_CARLO:
        raise NotImplementedError(
            "monte_carlo quadrature is not implemented: outputs are "
            "contractually deterministic and nothing here needs it"
        )


def _use_radial(dI, dJ, settings):
    return settings.method == ADAPTIVE_GK and is_radial(dI) and is_radial(dJ)


def _local_moment(dI, dJ, field, settings, gap):
    s = dI.switching
    kern = _kern_local(gap, s)
    kmax = _KMAX_LOCAL_T / s.timescale
    if _use_radial(dI, dJ, settings):
        return _radial_moment(dI, dJ, field, settings, kern, kmax)
    return _tensor_moment(dI, dJ, field, settings, kern, kmax)


def compute_L(
    dI: DetectorSpec,
    dJ: DetectorSpec,
    field: TargetFieldSpec,
    settings: QuadratureSettings,
) -> complex:
    """Excitation term ``L_IJ``; real and non-negative when I equals J."""
    _check_method(settings)
    same = dI == dJ
    if same:
        gap, s = dI.effective_gap, dI.switching
    else:
        gap, s = _require_pair(dI, dJ)
    val, err = _local_moment(dI, dJ, field, settings, gap)
    norm = dI.coupling * dJ.coupling / (2.0 * math.sqrt(dI.effective_gap * dJ.effective_gap))
    out = complex(val) * norm
    if same:
        out = complex(max(out.real, 0.0), 0.0)
    return out


def _feynman_parts(dA, dB, field, settings, gap):
    """Cosine and sine moments of the time-ordered kernel for a pair."""
    s = dA.switching
    kern_c = _kern_vcos(s)
    kmax = _KMAX_LOCAL_T / s.timescale
    if _use_radial(dA, dB, settings):
        sc, err_c = _radial_moment(dA, dB, field, settings, kern_c, kmax)
    else:
        sc, err_c = _tensor_moment(dA, dB, field, settings, kern_c, kmax)
        sc = float(np.real(sc))
    ss, err_s = _sine_moment(dA, dB, field, settings)
    return sc, ss, err_c, err_s


def compute_M(
    dA: DetectorSpec,
    dB: DetectorSpec,
    field: TargetFieldSpec,
    settings: QuadratureSettings,
    symmetrized: bool = False,
) -> complex:
    """Nonlocal pairing term ``M``.

    With ``symmetrized=True`` the time-ordered kernel is replaced by its
    half-sum (theta-free) counterpart, removing the commutator part.
    """
    _check_method(settings)
    gap, s = _require_pair(dA, dB)
    sc, ss, _, _ = _feynman_parts(dA, dB, field, settings, gap)
    if symmetrized:
        ss = 0.0
    pref = _u_prefactor(gap, s)
    norm = dA.coupling * dB.coupling / (2.0 * gap)
    return -norm * pref * complex(sc, -ss)


def compute_K(
    d: DetectorSpec,
    field: TargetFieldSpec,
    settings: QuadratureSettings,
) -> complex:
    """Local time-ordered coherence ``K``; equals ``-M`` at coincidence."""
    _check_method(settings)
    gap, s = d.effective_gap, d.switching
    sc, ss, _, _ = _feynman_parts(d, d, field, settings, gap)
    pref = _u_prefactor(gap, s)
    return d.coupling**2 / (2.0 * gap) * pref * complex(sc, -ss)


def communication_estimate(
    dA: DetectorSpec,
    dB: DetectorSpec,
    field: TargetFieldSpec,
    settings: QuadratureSettings,
) -> CommunicationEstimate:
    """Commutator-mediated part of M: ``|M - M_symmetrized|`` and its ratio."""
    _check_method(settings)
    gap, s = _require_pair(dA, dB)
    sc, ss, _, _ = _feynman_parts(dA, dB, field, settings, gap)
    norm = dA.coupling * dB.coupling / (2.0 * gap) * abs(_u_prefactor(gap, s))
    mag = norm * abs(ss)
    m_abs = norm * math.hypot(sc, ss)
    return CommunicationEstimate(mag, mag / m_abs if m_abs > 0.0 else 0.0)


def harvest_pair(
    dA: DetectorSpec,
    dB: DetectorSpec,
    field: TargetFieldSpec,
    settings: QuadratureSettings,
) -> HarvestingResult:
    """All pair scalars, closed-form negativity, and the communication ratio."""
    _check_method(settings)
    gap, s = _require_pair(dA, dB)
    pref = _u_prefactor(gap, s)

    laa_m, laa_e = _local_moment(dA, dA, field, settings, dA.effective_gap)
    lbb_m, lbb_e = _local_moment(dB, dB, field, settings, dB.effective_gap)
    lab_m, lab_e = _local_moment(dA, dB, field, settings, gap)

    sc_ab, ss_ab, ec_ab, es_ab = _feynman_parts(dA, dB, field, settings, gap)
    sc_a, ss_a, ec_a, es_a = _feynman_parts(dA, dA, field, settings, gap)
    sc_b, ss_b, ec_b, es_b = _feynman_parts(dB, dB, field, settings, gap)

    na = dA.coupling**2 / (2.0 * dA.effective_gap)
    nb = dB.coupling**2 / (2.0 * dB.effective_gap)
    nab = dA.coupling * dB.coupling / (2.0 * gap)

    l_aa = max(float(np.real(laa_m)) * na, 0.0)
    l_bb = max(float(np.real(lbb_m)) * nb, 0.0)
    l_ab = complex(lab_m) * nab
    k_a = na * pref * complex(sc_a, -ss_a)
    k_b = nb * pref * complex(sc_b, -ss_b)
    m = -nab * pref * complex(sc_ab, -ss_ab)

    comm = nab * abs(pref) * abs(ss_ab)
    ratio = comm / abs(m) if abs(m) > 0 else 0.0
    neg = negativity_closed(l_aa, l_bb, m)

    result = HarvestingResult(
        l_aa=l_aa,
        l_bb=l_bb,
        l_ab=l_ab,
        k_a=k_a,
        k_b=k_b,
        m=m,
        negativity=neg,
        comm_estimate=comm,
        comm_ratio=ratio,
        err_l_aa=laa_e * na,
        err_l_bb=lbb_e * nb,
        err_l_ab=lab_e * nab,
        err_k_a=na * abs(pref) * (ec_a + es_a),
        err_k_b=nb * abs(pref) * (ec_b + es_b),
        err_m=nab * abs(pref) * (ec_ab + es_ab),
    )
    _check_errors(result, settings)
    return result


def _check_errors(result: HarvestingResult, settings: QuadratureSettings):
    scale = max(result.l_aa, result.l_bb, abs(result.m), settings.abs_tol)
    worst = max(
        result.err_l_aa,
        result.err_l_bb,
        result.err_l_ab,
        result.err_k_a,
        result.err_k_b,
        result.err_m,
    )
    allowed = settings.abs_tol + settings.rel_tol * scale
    if worst > 50.0 * allowed:
        raise ToleranceError("pair integrals exceeded requested tolerances", worst)


def gap_sweep(
    dA: DetectorSpec,
    dB: DetectorSpec,
    field: TargetFieldSpec,
    settings: QuadratureSettings,
    gaps,
) -> list[HarvestingResult]:
    """Harvest results over a grid of detector gaps at fixed geometry.

    The time-ordered kernel factorizes as ``prefactor(gap) x V(w)``, so the
    expensive spatial moments of M and K are computed once and reused; only
    the local terms need one quadrature per gap.
    """
    _check_method(settings)
    _require_pair(dA, dB)
    s = dA.switching
    probe = 1.0 / s.timescale

    def with_gap(det, g):
        return DetectorSpec(det.potential, det.mode, det.switching, det.coupling, gap=g)

    a1, b1 = with_gap(dA, probe), with_gap(dB, probe)
    sc_ab, ss_ab, ec_ab, es_ab = _feynman_parts(a1, b1, field, settings, probe)
    sc_a, ss_a, ec_a, es_a = _feynman_parts(a1, a1, field, settings, probe)
    sc_b, ss_b, ec_b, es_b = _feynman_parts(b1, b1, field, settings, probe)

    out = []
    for g in gaps:
        da, db = with_gap(dA, g), with_gap(dB, g)
        pref = _u_prefactor(g, s)
        na = da.coupling**2 / (2.0 * g)
        nb = db.coupling**2 / (2.0 * g)
        nab = da.coupling * db.coupling / (2.0 * g)
        laa_m, laa_e = _local_moment(da, da, field, settings, g)
        lbb_m, lbb_e = _local_moment(db, db, field, settings, g)
        lab_m, lab_e = _local_moment(da, db, field, settings, g)
        m = -nab * pref * complex(sc_ab, -ss_ab)
        comm = nab * abs(pref) * abs(ss_ab)
        l_aa = max(float(np.real(laa_m)) * na, 0.0)
        l_bb = max(float(np.real(lbb_m)) * nb, 0.0)
        out.append(
            HarvestingResult(
                l_aa=l_aa,
                l_bb=l_bb,
                l_ab=complex(lab_m) * nab,
                k_a=na * pref * complex(sc_a, -ss_a),
                k_b=nb * pref * complex(sc_b, -ss_b),
                m=m,
                negativity=negativity_closed(l_aa, l_bb, m),
                comm_estimate=comm,
                comm_ratio=comm / abs(m) if abs(m) > 0 else 0.0,
                err_l_aa=laa_e * na,
                err_l_bb=lbb_e * nb,
                err_l_ab=lab_e * nab,
                err_k_a=na * abs(pref) * (ec_a + es_a),
                err_k_b=nb * abs(pref) * (ec_b + es_b),
                err_m=nab * abs(pref) * (ec_ab + es_ab),
            )
        )
    return out


# ---------------------------------------------------------------------------
# state assembly and negativity


def assemble_rho(r: HarvestingResult) -> np.ndarray:
    """Truncated 9x9 detector-pair state in the fixed basis order.

    Populated entries (0-indexed, basis ``3 n_A + n_B``): the ground
    population, the one-excitation block, and the coherences to ``|02>``,
    ``|20>`` and ``|11>``; everything else is zero at this order.
    """
    scalars = (r.l_aa, r.l_bb, r.l_ab, r.k_a, r.k_b, r.m)
    if not all(np.isfinite(np.real(v)) and np.isfinite(np.imag(v)) for v in scalars):
        raise InconsistentInputError("pair scalars must be finite")
    rho = np.zeros((9, 9), dtype=complex)
    rho[0, 0] = 1.0 - r.l_aa - r.l_bb
    rho[1, 1] = r.l_bb
    rho[3, 3] = r.l_aa
    rho[1, 3] = np.conj(r.l_ab)
    rho[3, 1] = r.l_ab
    rho[0, 2] = np.conj(r.k_b)
    rho[2, 0] = r.k_b
    rho[0, 6] = np.conj(r.k_a)
    rho[6, 0] = r.k_a
    rho[0, 4] = np.conj(r.m)
    rho[4, 0] = r.m
    trace = complex(np.trace(rho))
    if abs(trace - 1.0) > 1e-9:
        raise InconsistentInputError(f"assembled state trace {trace} deviates from 1")
    return rho


def validate_pair_state(rho: np.ndarray):
    """Check the structural invariants of a truncated pair state."""
    rho = np.asarray(rho)
    if rho.shape != (9, 9):
        raise InconsistentInputError("pair state must be 9x9")
    if np.max(np.abs(rho - rho.conj().T)) > 1e-14:
        raise InconsistentInputError("pair state must be Hermitian to 1e-14")
    if abs(np.trace(rho).real - 1.0) > 1e-12 or abs(np.trace(rho).imag) > 1e-12:
        raise InconsistentInputError("pair state trace must be 1 to 1e-12")
    for idx in (5, 7, 8):
        if np.any(rho[idx, :] != 0.0) or np.any(rho[:, idx] != 0.0):
            raise InconsistentInputError(
                f"row/column {idx} must vanish at leading order"
            )


def negativity_closed(l_aa: float, l_bb: float, m: complex) -> float:
    """Closed-form leading-order negativity of the pair state.

    ``max(0, sqrt(|M|^2 - ((L_AA - L_BB)/2)^2) - (L_AA + L_BB)/2)``, with 0
    returned when the discriminant is negative.
    """
    if l_aa < 0 or l_bb < 0:
        raise ValueError("local terms must be non-negative")
    disc = abs(m) ** 2 - ((l_aa - l_bb) / 2.0) ** 2
    if disc <= 0.0:
        return 0.0
    return max(0.0, math.sqrt(disc) - (l_aa + l_bb) / 2.0)


def negativity_from_rho(rho: np.ndarray) -> float:
    """Negativity from the spectrum of the partial transpose over B."""
    rho = np.asarray(rho, dtype=complex).reshape(3, 3, 3, 3)
    pt = np.transpose(rho, (0, 3, 2, 1)).reshape(9, 9)
    eigs = np.linalg.eigvalsh(pt)
    return float(-np.sum(eigs[eigs < 0.0]))
