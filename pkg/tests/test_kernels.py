import math

import numpy as np
import pytest
from scipy import integrate

from modeharvest import (
    QuadratureSettings,
    SwitchingSpec,
    TargetFieldSpec,
    feynman_time_kernel,
    feynman_time_kernel_fast,
    local_time_kernel,
    omega_k,
    switching_fourier_sq,
    symmetric_time_kernel,
)

SW = SwitchingSpec(1.0)
SETTINGS = QuadratureSettings(rel_tol=1e-11, abs_tol=1e-16)


def _j_2d_grid(gap, omega, T, span=6.5):
    """Time-ordered kernel by direct 2D quadrature over the t > t' triangle."""

    def f(part):
        def g(tp, t):
            z = math.exp(-math.pi * (t * t + tp * tp) / (2 * T * T))
            phase = gap * (t + tp) - omega * (t - tp)
            return 2.0 * z * (math.cos(phase) if part == "re" else math.sin(phase))

        return integrate.dblquad(
            g, -span * T, span * T, lambda t: -span * T, lambda t: t,
            epsabs=1e-12, epsrel=1e-10,
        )[0]

    return complex(f("re"), f("im"))


def test_local_kernel_shares_switching_transform():
    for gap, w in [(0.0, 0.0), (1.0, 2.5), (3.3, 0.7)]:
        assert local_time_kernel(gap, w, SW) == switching_fourier_sq(SW, gap + w)


def test_local_kernel_zero_frequency():
    assert local_time_kernel(0.0, 0.0, SW) == pytest.approx(2.0)


def test_local_kernel_monotone_in_total_frequency():
    vals = [local_time_kernel(1.0, w, SW) for w in np.linspace(0, 20, 100)]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_local_kernel_value_against_2d_quadrature():
    # (gap=1, w=1): 2 e^(-4/pi), cross-checked by the defining double integral
    val = local_time_kernel(1.0, 1.0, SW)
    assert val == pytest.approx(2.0 * math.exp(-4.0 / math.pi), rel=1e-14)
    brute = integrate.dblquad(
        lambda tp, t: math.exp(-math.pi * (t * t + tp * tp) / 2.0)
        * math.cos(2.0 * (t - tp)),
        -7, 7, lambda t: -7, lambda t: 7, epsabs=1e-13,
    )[0]
    assert val == pytest.approx(brute, rel=1e-10)


def test_feynman_kernel_matches_2d_quadrature():
    j = feynman_time_kernel(1.0, 2.0, SW, SETTINGS)
    brute = _j_2d_grid(1.0, 2.0, 1.0)
    assert abs(j - brute) <= 1e-8


def test_feynman_kernel_bounded():
    for gap, w in [(0.0, 0.0), (1.0, 2.0), (4.0, 0.3), (2.0, 30.0)]:
        j = feynman_time_kernel(gap, w, SW, SETTINGS)
        assert np.isfinite(j.real) and np.isfinite(j.imag)
        assert abs(j) <= 2.0 * SW.timescale**2 + 1e-12


def test_feynman_kernel_vanishing_switching():
    s = SwitchingSpec(1e-3)
    assert abs(feynman_time_kernel(1.0, 2.0, s, SETTINGS)) < 1e-5


def test_fast_kernel_pinned_to_quadrature():
    # gate for using the closed form inside the pair integrals
    for gap in (0.2, 1.0, 2.5, 6.0):
        for w in (0.0, 0.4, 1.7, 8.0, 40.0):
            fast = feynman_time_kernel_fast(gap, w, SW)
            quad = feynman_time_kernel(gap, w, SW, SETTINGS)
            assert abs(fast - quad) <= 1e-10


def test_fast_kernel_center_time_phase():
    s = SwitchingSpec(1.0, center_time=0.8)
    j0 = feynman_time_kernel_fast(1.3, 2.0, SwitchingSpec(1.0))
    j1 = feynman_time_kernel_fast(1.3, 2.0, s)
    assert abs(j1) == pytest.approx(abs(j0), rel=1e-12)
    assert j1 == pytest.approx(j0 * np.exp(2j * 1.3 * 0.8), rel=1e-12)


def test_symmetric_kernel_is_real_part_of_v():
    for gap, w in [(1.0, 2.0), (0.3, 5.0)]:
        j = feynman_time_kernel_fast(gap, w, SW)
        j_sym = symmetric_time_kernel(gap, w, SW)
        assert j_sym == pytest.approx(j.real, rel=1e-12)
        # closed form: 2 T^2 e^(-(gap^2+w^2) T^2 / pi)
        assert j_sym == pytest.approx(
            2.0 * math.exp(-(gap * gap + w * w) / math.pi), rel=1e-12
        )


def test_re_j_two_ways_on_grid():
    # u,v reduction vs direct 2D (t, t') grid across a 5x5 frequency grid
    for gap in np.linspace(0.2, 3.0, 5):
        for w in np.linspace(0.0, 4.0, 5):
            quick = feynman_time_kernel(gap, w, SW, SETTINGS)
            brute = _j_2d_grid(gap, w, 1.0)
            assert quick.real == pytest.approx(brute.real, rel=1e-6, abs=1e-10)


def test_omega_k_values():
    f = TargetFieldSpec(2.0)
    assert omega_k(0.0, f) == 2.0
    assert omega_k(3.0, TargetFieldSpec(4.0)) == 5.0
    assert omega_k(1.7, TargetFieldSpec(0.0)) == 1.7


def test_omega_k_massless_origin_rejected():
    with pytest.raises(ValueError):
        omega_k(0.0, TargetFieldSpec(0.0))
    with pytest.raises(ValueError):
        omega_k(np.array([1.0, 0.0]), TargetFieldSpec(0.0))


def test_target_field_validation():
    with pytest.raises(ValueError):
        TargetFieldSpec(-1.0)
    with pytest.raises(ValueError):
        TargetFieldSpec(1.0, state="thermal")


def test_quadrature_settings_validation():
    with pytest.raises(ValueError):
        QuadratureSettings(rel_tol=0.0)
    with pytest.raises(ValueError):
        QuadratureSettings(method="sparse_grid")
    assert QuadratureSettings(method="monte_carlo").method == "monte_carlo"
