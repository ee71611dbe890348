import math

import numpy as np
import pytest
from hypothesis import given, settings as hyp_settings, strategies as st

from modeharvest import (
    DetectorSpec,
    GapMismatchError,
    HarvestingResult,
    InconsistentInputError,
    PotentialSpec,
    QuadratureSettings,
    SwitchingMismatchError,
    SwitchingSpec,
    TargetFieldSpec,
    assemble_rho,
    communication_estimate,
    compute_K,
    compute_L,
    compute_M,
    gap_sweep,
    harvest_pair,
    negativity_closed,
    negativity_from_rho,
    validate_pair_state,
)

SW = SwitchingSpec(1.0)
FIELD = TargetFieldSpec(0.0)
SETTINGS = QuadratureSettings(rel_tol=1e-9, abs_tol=1e-18)
TENSOR = QuadratureSettings(rel_tol=1e-7, abs_tol=1e-18, method="tensor_gl")


def gauss_pair(ell=0.1, sep=5.0, gap=3.0, mass=0.0):
    pa = PotentialSpec("harmonic", ell)
    pb = PotentialSpec("harmonic", ell, center=(0.0, 0.0, sep))
    da = DetectorSpec(pa, (0, 0, 0), SW, 1.0, gap=gap)
    db = DetectorSpec(pb, (0, 0, 0), SW, 1.0, gap=gap)
    return da, db


def box_pair(d=0.5, sep=4.5, gap=3.0):
    pa = PotentialSpec("box", d)
    pb = PotentialSpec("box", d, center=(0.0, 0.0, sep))
    da = DetectorSpec(pa, (1, 1, 1), SW, 1.0, gap=gap)
    db = DetectorSpec(pb, (1, 1, 1), SW, 1.0, gap=gap)
    return da, db


def _result(l_aa=0.0, l_bb=0.0, l_ab=0j, k_a=0j, k_b=0j, m=0j):
    neg = negativity_closed(l_aa, l_bb, m)
    return HarvestingResult(
        l_aa=l_aa, l_bb=l_bb, l_ab=l_ab, k_a=k_a, k_b=k_b, m=m,
        negativity=neg, comm_estimate=0.0, comm_ratio=0.0,
        err_l_aa=0.0, err_l_bb=0.0, err_l_ab=0.0,
        err_k_a=0.0, err_k_b=0.0, err_m=0.0,
    )


# ---------------------------------------------------------------------------
# pair integrals


def test_local_term_real_nonnegative():
    da, _ = gauss_pair()
    val = compute_L(da, da, FIELD, SETTINGS)
    assert val.imag == 0.0
    assert val.real > 0.0


def test_local_term_massive_smaller():
    da, _ = gauss_pair()
    heavy = compute_L(da, da, TargetFieldSpec(5.0), SETTINGS)
    light = compute_L(da, da, FIELD, SETTINGS)
    assert 0 <= heavy.real < light.real


def test_pair_terms_vanish_with_switching():
    # both terms scale as T^2 once the switching is shorter than every other
    # scale in the problem
    pa = PotentialSpec("harmonic", 0.1)
    values = []
    for T in (1e-2, 1e-3):
        da = DetectorSpec(pa, (0, 0, 0), SwitchingSpec(T), 1.0, gap=3.0)
        values.append(
            (abs(compute_L(da, da, FIELD, SETTINGS)), abs(compute_K(da, FIELD, SETTINGS)))
        )
    assert values[1][0] < 1e-7 and values[1][1] < 1e-7
    assert values[1][0] == pytest.approx(values[0][0] * 1e-2, rel=0.05)
    assert values[1][1] == pytest.approx(values[0][1] * 1e-2, rel=0.05)


def test_m_at_coincidence_is_minus_k():
    da, _ = gauss_pair()
    db0 = DetectorSpec(da.potential, (0, 0, 0), SW, 1.0, gap=3.0)
    m0 = compute_M(da, db0, FIELD, SETTINGS)
    k = compute_K(da, FIELD, SETTINGS)
    assert m0 == pytest.approx(-k, rel=1e-12)
    ba, _ = box_pair()
    bb0 = DetectorSpec(ba.potential, (1, 1, 1), SW, 1.0, gap=3.0)
    assert compute_M(ba, bb0, FIELD, SETTINGS) == pytest.approx(
        -compute_K(ba, FIELD, SETTINGS), rel=1e-12
    )


def test_m_decays_with_separation():
    vals = []
    for sep in (3.0, 4.0, 5.0, 6.0):
        da, db = gauss_pair(sep=sep)
        vals.append(abs(compute_M(da, db, FIELD, SETTINGS)))
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_gap_mismatch_rejected():
    da, db = gauss_pair()
    db_bad = DetectorSpec(db.potential, (0, 0, 0), SW, 1.0, gap=2.0)
    with pytest.raises(GapMismatchError):
        compute_M(da, db_bad, FIELD, SETTINGS)
    with pytest.raises(GapMismatchError):
        compute_L(da, db_bad, FIELD, SETTINGS)


def test_switching_mismatch_rejected():
    da, db = gauss_pair()
    db_bad = DetectorSpec(db.potential, (0, 0, 0), SwitchingSpec(2.0), 1.0, gap=3.0)
    with pytest.raises(SwitchingMismatchError):
        compute_M(da, db_bad, FIELD, SETTINGS)


def test_monte_carlo_method_not_implemented():
    da, db = gauss_pair()
    mc = QuadratureSettings(method="monte_carlo")
    with pytest.raises(NotImplementedError):
        compute_L(da, da, FIELD, mc)


def test_translation_invariance():
    da, db = gauss_pair(sep=4.0)
    ref = harvest_pair(da, db, FIELD, SETTINGS)
    shift = (1.3, -0.7, 2.1)
    pa = PotentialSpec("harmonic", 0.1, center=shift)
    pb = PotentialSpec("harmonic", 0.1, center=(shift[0], shift[1], shift[2] + 4.0))
    da2 = DetectorSpec(pa, (0, 0, 0), SW, 1.0, gap=3.0)
    db2 = DetectorSpec(pb, (0, 0, 0), SW, 1.0, gap=3.0)
    moved = harvest_pair(da2, db2, FIELD, SETTINGS)
    assert moved.l_aa == pytest.approx(ref.l_aa, rel=1e-9)
    assert abs(moved.m - ref.m) <= 1e-9 * abs(ref.m)
    assert moved.negativity == pytest.approx(ref.negativity, rel=1e-8, abs=1e-18)


def test_spherical_vs_tensor_spot_checks():
    # dimension-reduced path against the full tensor rule at 3 points
    for ell, sep, gap, mass in ((0.1, 5.0, 3.0, 0.0), (0.5, 2.0, 1.0, 0.0), (0.25, 3.0, 4.0, 1.0)):
        da, db = gauss_pair(ell=ell, sep=sep, gap=gap)
        field = TargetFieldSpec(mass)
        l_r = compute_L(da, da, field, SETTINGS)
        l_t = compute_L(da, da, field, TENSOR)
        assert abs(l_t - l_r) <= 1e-4 * abs(l_r)
        m_r = compute_M(da, db, field, SETTINGS)
        m_t = compute_M(da, db, field, TENSOR)
        assert abs(m_t - m_r) <= 1e-4 * abs(m_r)


def test_one_excitation_block_psd():
    da, db = gauss_pair(sep=2.0, gap=2.0)
    r = harvest_pair(da, db, FIELD, SETTINGS)
    block = np.array([[r.l_aa, r.l_ab], [np.conj(r.l_ab), r.l_bb]])
    eigs = np.linalg.eigvalsh(block)
    assert eigs.min() >= -1e-12


def test_gap_sweep_matches_pointwise():
    da, db = gauss_pair(gap=1.0)
    gaps = [1.5, 3.0]
    swept = gap_sweep(da, db, FIELD, SETTINGS, gaps)
    for g, row in zip(gaps, swept):
        da_g = DetectorSpec(da.potential, (0, 0, 0), SW, 1.0, gap=g)
        db_g = DetectorSpec(db.potential, (0, 0, 0), SW, 1.0, gap=g)
        ref = harvest_pair(da_g, db_g, FIELD, SETTINGS)
        assert row.l_aa == pytest.approx(ref.l_aa, rel=1e-10)
        assert row.m == pytest.approx(ref.m, rel=1e-10)
        assert row.negativity == pytest.approx(ref.negativity, rel=1e-8, abs=1e-20)


# ---------------------------------------------------------------------------
# communication diagnostic


def test_symmetrized_m_drops_commutator():
    da, db = gauss_pair()
    m = compute_M(da, db, FIELD, SETTINGS)
    m_sym = compute_M(da, db, FIELD, SETTINGS, symmetrized=True)
    est = communication_estimate(da, db, FIELD, SETTINGS)
    assert abs(m - m_sym) == pytest.approx(est.magnitude, rel=1e-10)
    # feeding the symmetrized kernel on both sides leaves nothing
    assert abs(m_sym - m_sym) == 0.0


def test_comm_ratio_small_at_spacelike_separation():
    da, db = gauss_pair()  # fig-1 point
    est = communication_estimate(da, db, FIELD, SETTINGS)
    assert est.ratio < 1e-5


def test_comm_grows_as_separation_shrinks():
    vals = []
    for sep in (5.0, 3.0, 1.5, 0.75):
        da, db = gauss_pair(sep=sep)
        vals.append(communication_estimate(da, db, FIELD, SETTINGS).magnitude)
    assert all(b > a for a, b in zip(vals, vals[1:]))


# ---------------------------------------------------------------------------
# state assembly and negativity


def test_assemble_rho_trivial_state():
    rho = assemble_rho(_result())
    expect = np.zeros((9, 9), dtype=complex)
    expect[0, 0] = 1.0
    assert np.array_equal(rho, expect)
    assert negativity_from_rho(rho) == 0.0


def test_assemble_rho_entries():
    r = _result(
        l_aa=0.01, l_bb=0.02, l_ab=0.003 + 0.001j,
        k_a=0.004 - 0.002j, k_b=0.001j, m=0.005 - 0.001j,
    )
    rho = assemble_rho(r)
    assert rho[0, 0] == pytest.approx(0.97)
    assert rho[1, 1] == 0.02 and rho[3, 3] == 0.01
    assert rho[3, 1] == r.l_ab and rho[1, 3] == np.conj(r.l_ab)
    assert rho[4, 0] == r.m  # the |11><00| slot carries M
    assert rho[2, 0] == r.k_b and rho[6, 0] == r.k_a
    validate_pair_state(rho)


def test_assemble_rho_hermitian_unit_trace():
    r = _result(l_aa=0.03, l_bb=0.01, m=0.02 + 0.01j, k_a=0.01j)
    rho = assemble_rho(r)
    assert np.max(np.abs(rho - rho.conj().T)) == 0.0
    assert np.trace(rho) == pytest.approx(1.0)


def test_assemble_rho_rejects_nonfinite():
    with pytest.raises(InconsistentInputError):
        assemble_rho(_result(l_aa=float("nan")))


def test_validate_pair_state_zero_rows():
    rho = assemble_rho(_result(l_aa=0.01, m=0.004))
    rho_bad = rho.copy()
    rho_bad[5, 5] = 0.0 + 1e-30
    validate_pair_state(rho)  # the pristine one passes
    rho_bad[5, 0] = 1e-3
    with pytest.raises(InconsistentInputError):
        validate_pair_state(rho_bad)


def test_negativity_closed_symmetric_case():
    # equal local terms: max(0, |M| - L)
    assert negativity_closed(0.01, 0.01, 0.03) == pytest.approx(0.02)
    assert negativity_closed(0.04, 0.04, 0.03j) == 0.0


def test_negativity_closed_no_nonlocal_term():
    assert negativity_closed(0.02, 0.07, 0.0) == 0.0


def test_negativity_closed_asymmetric_value():
    expect = math.sqrt(0.002475) - 0.015
    assert negativity_closed(0.02, 0.01, 0.05) == pytest.approx(expect, rel=1e-14)


def test_negativity_closed_subthreshold_discriminant():
    assert negativity_closed(0.05, 0.001, 0.01) == 0.0


def test_negativity_closed_domain():
    with pytest.raises(ValueError):
        negativity_closed(-0.01, 0.0, 0.1)


def test_negativity_from_rho_product_state():
    assert negativity_from_rho(assemble_rho(_result(l_aa=0.01))) == pytest.approx(
        0.0, abs=1e-15
    )


def test_negativity_symmetric_under_relabeling():
    r = _result(l_aa=0.013, l_bb=0.027, l_ab=0.004 - 0.002j, m=0.031 + 0.005j)
    r_swap = _result(l_aa=0.027, l_bb=0.013, l_ab=np.conj(r.l_ab), m=r.m)
    n1 = negativity_from_rho(assemble_rho(r))
    n2 = negativity_from_rho(assemble_rho(r_swap))
    assert n1 == pytest.approx(n2, rel=1e-12)


def test_negativity_consistency_symmetric_no_coherences():
    # with equal locals and no K/L_AB coherences the two routes coincide
    rng = np.random.default_rng(7)
    for _ in range(100):
        l = rng.uniform(0.0, 0.05)
        m = rng.uniform(0.0, 0.05) * np.exp(2j * math.pi * rng.uniform())
        r = _result(l_aa=l, l_bb=l, m=m)
        closed = negativity_closed(l, l, m)
        spectral = negativity_from_rho(assemble_rho(r))
        assert spectral == pytest.approx(closed, abs=1e-14)


def test_negativity_routes_within_structural_budget():
    # the spectral route differs from the closed form by exactly two effects:
    # the truncation coherences (an arrow eigenvalue ~ |K_A|^2+|K_B|^2+|L_AB|^2)
    # and the sign of the (L_AA-L_BB)^2/4 term under the square root, bounded
    # by sqrt(2) |L_AA-L_BB|/2.  Both are quadratic away from the threshold.
    rng = np.random.default_rng(11)
    for _ in range(400):
        s = 10 ** rng.uniform(-4, math.log10(0.05))
        l_aa = s * rng.uniform(0, 1)
        l_bb = s * rng.uniform(0, 1)
        l_ab = math.sqrt(l_aa * l_bb) * rng.uniform(0, 1) * np.exp(
            2j * math.pi * rng.uniform()
        )
        k_a = s * rng.uniform(0, 1) * np.exp(2j * math.pi * rng.uniform())
        k_b = s * rng.uniform(0, 1) * np.exp(2j * math.pi * rng.uniform())
        m = s * rng.uniform(0, 1) * np.exp(2j * math.pi * rng.uniform())
        r = _result(l_aa, l_bb, l_ab, k_a, k_b, m)
        diff = abs(negativity_from_rho(assemble_rho(r)) - r.negativity)
        x = abs(l_aa - l_bb) / 2.0
        budget = 1.3 * (abs(k_a) ** 2 + abs(k_b) ** 2 + abs(l_ab) ** 2)
        budget += math.sqrt(2.0) * x * min(1.0, x / max(abs(m), 1e-300))
        assert diff <= budget + 1e-14


def test_harvest_pair_consistent_with_parts():
    da, db = gauss_pair(sep=3.0, gap=2.5)
    r = harvest_pair(da, db, FIELD, SETTINGS)
    assert r.l_aa == pytest.approx(compute_L(da, da, FIELD, SETTINGS).real, rel=1e-12)
    assert r.m == pytest.approx(compute_M(da, db, FIELD, SETTINGS), rel=1e-12)
    assert r.k_a == pytest.approx(compute_K(da, FIELD, SETTINGS), rel=1e-12)
    assert r.negativity == negativity_closed(r.l_aa, r.l_bb, r.m)
    assert r.err_m < 1e-6 * abs(r.m) + 1e-15


@given(
    l_aa=st.floats(0, 0.05),
    l_bb=st.floats(0, 0.05),
    m_re=st.floats(-0.05, 0.05),
    m_im=st.floats(-0.05, 0.05),
)
@hyp_settings(max_examples=60, deadline=None)
def test_assembled_state_structure(l_aa, l_bb, m_re, m_im):
    r = _result(l_aa=l_aa, l_bb=l_bb, m=complex(m_re, m_im))
    rho = assemble_rho(r)
    validate_pair_state(rho)
    assert negativity_from_rho(rho) >= 0.0
