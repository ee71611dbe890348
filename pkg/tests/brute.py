"""Independent brute-force evaluations of the pair integrals.

Everything here deliberately avoids the production reductions: time kernels
come from a direct (t, lag) double quadrature with no closed forms, momentum
integrals use composite Simpson on uniform grids (never adaptive
Gauss-Kronrod or Gauss-Legendre panels), and the box geometry is assembled
in spherical coordinates with an explicit angular product rule.
"""

import math

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import simpson


def time_kernel_table(gap, omegas, timescale, n_t=900, n_s=1400, span=7.0):
    """``J(gap, w) = 2 int dt int_0^inf ds z(t) z(t-s) e^(i gap (2t-s) - i w s)``.

    Direct double quadrature over (t, lag); the lag factor ``g(s)`` is
    tabulated once, then transformed for every requested ``w``.
    """
    T = timescale
    t = np.linspace(-span * T, span * T, n_t)
    s = np.linspace(0.0, 8.0 * T, n_s)
    zt = np.exp(-math.pi * t**2 / (2 * T * T))
    g = np.empty(n_s, dtype=complex)
    for j, sj in enumerate(s):
        zts = np.exp(-math.pi * (t - sj) ** 2 / (2 * T * T))
        g[j] = simpson(zt * zts * np.exp(1j * gap * (2 * t - sj)), x=t)
    omegas = np.asarray(omegas, dtype=float)
    phases = np.exp(-1j * np.outer(omegas, s))
    return 2.0 * simpson(phases * g[None, :], x=s, axis=1)


def local_kernel_table(gap, omegas, timescale, n_t=900, span=7.0):
    """``|int dt z(t) e^(-i (gap+w) t)|^2`` by direct quadrature."""
    T = timescale
    t = np.linspace(-span * T, span * T, n_t)
    zt = np.exp(-math.pi * t**2 / (2 * T * T))
    omegas = np.asarray(omegas, dtype=float)
    amp = simpson(zt[None, :] * np.exp(-1j * np.outer(gap + omegas, t)), x=t, axis=1)
    return np.abs(amp) ** 2


def _gauss_envelope(scale, k):
    return (4.0 * math.pi * scale * scale) ** 0.75 * np.exp(-0.5 * k * k * scale * scale)


def gaussian_pair_brute(kind, gap, scale, sep, mass, timescale, coupling=1.0, n_k=4001):
    """Brute L (kind="local") or M (kind="feynman") for a Gaussian pair.

    Radial momentum integral by composite Simpson; time kernels from the
    direct tables above.
    """
    kmax = min(18.0 / timescale, math.sqrt(46.0) / scale) if kind == "local" else (
        math.sqrt(52.0) / scale
    )
    k = np.linspace(1e-9, kmax, n_k)
    w = np.hypot(k, mass)
    spat = _gauss_envelope(scale, k) ** 2
    if sep > 0:
        spat = spat * np.sin(k * sep) / (k * sep)
    if kind == "local":
        kern = local_kernel_table(gap, w, timescale)
        val = simpson(k * k / (2.0 * w) * kern * spat, x=k) / (2.0 * math.pi**2)
        return coupling**2 / (2.0 * gap) * val
    kern = time_kernel_table(gap, w, timescale)
    val = simpson(k * k / (2.0 * w) * kern * spat, x=k) / (2.0 * math.pi**2)
    return -(coupling**2) / (2.0 * gap) * val


def _box_window_sq(n, d, k):
    """|axis transform|^2 of the box sine window, elementary form."""
    beta = math.pi * n / d
    sign = (-1.0) ** n
    num = 2.0 - 2.0 * sign * np.cos(k * d)
    den = (beta * beta - k * k) ** 2
    tiny = np.abs(np.abs(k) - beta) < 1e-7 * beta
    out = np.where(tiny, d * d / 4.0, beta * beta * num / np.where(tiny, 1.0, den))
    return (2.0 / d) * out


def box_shell_average(n_mode, d, sep, k_nodes):
    """Angular average of the box pair factor on each momentum shell.

    Gauss-Legendre in the polar cosine, uniform azimuth, node counts scaled
    with the shell phase range.
    """
    out = np.empty(k_nodes.size)
    for idx, k in enumerate(k_nodes):
        n_th = 20 + int(0.8 * k * (sep + 2 * d))
        n_ph = 12 + 2 * int(0.8 * k * d + 4)
        cth, wth = leggauss(n_th)
        ph = (np.arange(n_ph) + 0.5) * (2.0 * math.pi / n_ph)
        sth = np.sqrt(1.0 - cth * cth)
        kx = k * np.outer(sth, np.cos(ph))
        ky = k * np.outer(sth, np.sin(ph))
        kz = k * np.outer(cth, np.ones(n_ph))
        val = (
            _box_window_sq(n_mode, d, kx)
            * _box_window_sq(n_mode, d, ky)
            * _box_window_sq(n_mode, d, kz)
            * np.cos(kz * sep)
        )
        out[idx] = float(np.sum(val * wth[:, None])) * (2.0 * math.pi / n_ph)
    return out / (4.0 * math.pi)


def box_pair_brute(kind, gap, d, sep, mass, timescale, mode=(1, 1, 1), coupling=1.0, n_k=2401):
    """Brute L or M for an identical box pair separated along one axis."""
    n = mode[0]
    kmax = 18.0 / timescale if kind == "local" else 80.0 / timescale
    k = np.linspace(1e-9, kmax, n_k)
    w = np.hypot(k, mass)
    avg = box_shell_average(n, d, sep, k)
    meas = 4.0 * math.pi * k * k / (2.0 * w) / (2.0 * math.pi) ** 3
    if kind == "local":
        kern = local_kernel_table(gap, w, timescale)
        val = simpson(meas * kern * avg, x=k)
        return coupling**2 / (2.0 * gap) * val
    kern = time_kernel_table(gap, w, timescale)
    val = simpson(meas * kern * avg, x=k)
    return -(coupling**2) / (2.0 * gap) * val
