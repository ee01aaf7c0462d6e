import math

import numpy as np
import pytest

from diamond import asymptotics as asy
from diamond.energy import expected_energy_symmetric
from diamond.ensemble import height_numerator, layout_from_profile, optimal_heights
from diamond.profile import builtin_elaborated, builtin_quasioptimal, builtin_simple, total_points

BUILTINS = [
    *(builtin_simple(4, M) for M in (1, 3, 10)),
    *(builtin_elaborated(m) for m in (1, 4, 10)),
    *(builtin_quasioptimal(m) for m in (1, 5, 10)),
]


def log_identity(coeffs, const, denom):
    """sum c_k log(b_k) + const, over denom; checks the stored decimal constants."""
    return (math.fsum(c * math.log(b) for b, c in coeffs) + const) / denom


def test_stored_constants_match_their_log_identities():
    diamond = log_identity(
        [(239, 19120), (227, -2270), (73, -1460), (53, -265), (43, -1935), (31, -930), (19, -1710), (17, -1938),
         (13, 19825), (7, 1750), (5, -4250), (3, -131307), (2, 56586)],
        -7170, 14340,
    )
    assert diamond == pytest.approx(asy.C_DIAMOND, abs=1e-14)
    elab = log_identity(
        [(113, -113), (82, -982), (70, -210), (51, -51), (41, 1638), (15, 900), (12, -36), (8, -1536), (6, 144),
         (4, -492), (2, 1968)],
        -246, 492,
    )
    assert elab == pytest.approx(asy.C_ELABORATED, abs=1e-14)


def test_reference_constants():
    c = asy.reference_constants()
    assert c["W_log"] == pytest.approx(-0.1931471805, abs=1e-10)
    assert c["c_random_polynomials"] == pytest.approx(0.1931471805, abs=1e-10)
    assert c["c_spherical_ensemble"] == pytest.approx(0.404539348109, abs=1e-12)
    assert c["C_log_upper"] == pytest.approx(-0.0556053, abs=1e-7)
    assert c["C_log_lower"] == -0.2232823526
    assert c["c_simple_K4"] == pytest.approx(2 * math.log(2) / 3 - 0.5, rel=1e-15)
    assert c["c_simple_K4"] == pytest.approx(-0.037901879626703, abs=1e-15)
    assert c["heuristic_c_opt"] == pytest.approx(-0.0493, abs=5e-5)


def test_heuristic_constant_minimum():
    k0 = 3 / math.pi
    assert asy.heuristic_constant(k0) == pytest.approx((1 - math.log(3)) / 2, rel=1e-14)
    h = 1e-6
    deriv = (asy.heuristic_constant(k0 + h) - asy.heuristic_constant(k0 - h)) / (2 * h)
    assert abs(deriv) < 1e-8
    for x in np.linspace(0.05, 5.0, 20):
        step = 1e-4 * x
        second = (asy.heuristic_constant(x + step) - 2 * asy.heuristic_constant(x) + asy.heuristic_constant(x - step)) / step**2
        assert second > 0
        assert asy.heuristic_constant(x) >= asy.heuristic_constant(k0)


def test_c_simple():
    for K in (1, 2, 4, 7):
        expected = math.log(2) / 6 * K - 0.5 + math.log(2) - math.log(K) / 2
        assert asy.c_simple(K) == pytest.approx(expected, rel=1e-15)


def test_extract_constant_inversion():
    for N in (3, 100, 10**6):
        E = asy.W_LOG * N * N - 0.5 * N * math.log(N) + 7 * N
        assert asy.extract_constant(E, N) == pytest.approx(7.0, rel=1e-9)
    with pytest.raises(ValueError):
        asy.extract_constant(1.0, 2)


def test_trapezoid_sum():
    assert asy.trapezoid_sum(lambda x: 1.0, 0, 3) == 3.0
    assert asy.trapezoid_sum(lambda x: x, 0, 2) == 2.0
    assert asy.trapezoid_sum(lambda x: x * x, 0, 2) == 3.0
    # exact for quadratics once the end correction is added
    assert 8 / 3 + (4 - 0) / 12 == pytest.approx(3.0, rel=1e-15)
    assert asy.em_remainder(lambda x: x * x, lambda x: 2 * x, 0, 2) == pytest.approx(0.0, abs=1e-13)


def test_piece_coefficients_match_literal_height_formula():
    for prof in BUILTINS:
        for ell in range(prof.n):
            pf = asy.fgh_pieces(prof, ell)
            for x in np.linspace(pf.t0, pf.t1, 7):
                assert pf.u(x) == pytest.approx(height_numerator(prof, ell, x), rel=1e-14)


def test_f_piece_endpoints():
    pf = asy.fgh_pieces(builtin_simple(4, 8), 0)
    assert pf.f(0.0) == 0.0
    assert pf.f(2.0) == pytest.approx(8 * math.log(8), rel=1e-15)
    assert pf.g(8.0) == pytest.approx(0.0, abs=1e-14)
    assert pf.h(8.0) == pytest.approx(0.0, abs=1e-14)


def test_f_piece_integral():
    val = asy.integrate_piece(lambda x: 4 * x * math.log(4 * x) if x > 0 else 0.0, 0, 1)
    assert val == pytest.approx(4 * math.log(2) - 1, abs=1e-12)


@pytest.mark.parametrize("prof", BUILTINS, ids=lambda p: p.name)
def test_derivatives_against_finite_differences(prof):
    for ell in range(prof.n):
        pf = asy.fgh_pieces(prof, ell)
        x = 0.5 * (pf.t0 + pf.t1)
        h = 1e-5 * max(1, pf.t1 - pf.t0)
        for which in ("g", "h"):
            fn, d1, d3 = pf.funcs(which)
            fd1 = (fn(x + h) - fn(x - h)) / (2 * h)
            assert float(d1(x)) == pytest.approx(float(fd1), rel=1e-7, abs=1e-9)
            hh = 1e-4 * max(1, pf.t1 - pf.t0)
            fd3 = (d1(x + hh) - 2 * d1(x) + d1(x - hh)) / hh**2
            assert float(d3(x)) == pytest.approx(float(fd3), rel=1e-5, abs=1e-14 * (1 + abs(float(d1(x)))) / hh**2)


@pytest.mark.parametrize("prof", BUILTINS, ids=lambda p: p.name)
def test_trapezoid_rewrite_is_exact(prof):
    E = expected_energy_symmetric(layout_from_profile(prof))
    assert asy.trapezoid_energy(prof) == pytest.approx(E, rel=1e-11)


def test_trapezoid_rewrite_for_count_vectors():
    rng = np.random.default_rng(3)
    for _ in range(50):
        half = [int(v) for v in rng.integers(1, 41, size=rng.integers(1, 12))]
        E = expected_energy_symmetric(optimal_heights(half + half[-2::-1]))
        assert asy.trapezoid_energy_counts(half) == pytest.approx(E, rel=1e-11)


def test_count_vector_rewrite_matches_profile_rewrite():
    prof = builtin_quasioptimal(2)
    half = prof.counts()[: prof.M]
    assert asy.trapezoid_energy_counts(half) == pytest.approx(asy.trapezoid_energy(prof), rel=1e-13)
    with pytest.raises(ValueError):
        asy.trapezoid_energy_counts([3, 0, 2])


def test_f_trapezoid_bookkeeping():
    # 2 sum_l T(f_l) = 2 sum_{j<=M} r_j log r_j - r_M log r_M
    prof = builtin_quasioptimal(3)
    counts = prof.counts()[: prof.M]
    lhs = 2 * math.fsum(asy.trapezoid_sum(lambda x, pf=asy.fgh_pieces(prof, ell): float(pf.f(x)), *prof.knots[ell : ell + 2])
                        for ell in range(prof.n))
    rhs = 2 * math.fsum(r * math.log(r) for r in counts) - counts[-1] * math.log(counts[-1])
    assert lhs == pytest.approx(rhs, rel=1e-13)


def test_continuum_estimate_simple_gap_shrinks():
    gaps = []
    for M in (50, 100, 200):
        prof = builtin_simple(4, M)
        E = expected_energy_symmetric(layout_from_profile(prof))
        gaps.append(abs(asy.continuum_estimate(prof) - E) / total_points(prof))
    assert gaps[0] > gaps[1] > gaps[2]


def test_continuum_estimate_quasioptimal_constant():
    prof = builtin_quasioptimal(20)
    c = asy.extract_constant(asy.continuum_estimate(prof), total_points(prof))
    assert abs(c - asy.C_DIAMOND) <= 5e-3


def test_em_check_simple_scaling():
    obs = [asy.em_error_check(builtin_simple(4, M), 0, "g")[0] for M in (40, 80)]
    ratio = obs[0] / obs[1]
    # observed error behaves like log(M)/M or better: within a factor 4 of halving per doubling
    assert 0.5 <= ratio <= 8.0


def test_em_check_quasioptimal_h_pieces():
    prof = builtin_quasioptimal(10)
    for ell in range(prof.n):
        obs, bound = asy.em_error_check(prof, ell, "h")
        assert obs <= bound


def test_em_check_rejects_unknown_function():
    with pytest.raises(ValueError):
        asy.em_error_check(builtin_simple(4, 5), 0, "f")


def test_quadrature_failure():
    with pytest.raises(asy.QuadratureFailure):
        asy.integrate_piece(lambda x: 1.0 / x if x > 0 else 0.0, 0.0, 1.0)


def test_report():
    rep = asy.asymptotic_report(builtin_quasioptimal(4))
    assert rep.N == 239 * 16 + 2
    assert rep.target == asy.C_DIAMOND
    assert rep.c_N == pytest.approx(asy.extract_constant(rep.E_exact, rep.N), rel=1e-12)
    assert rep.abs_error == pytest.approx(abs(rep.c_N - rep.target))
    assert set(rep.to_dict()) >= {"N", "E_exact", "c_N", "target", "abs_error"}


@pytest.mark.parametrize(
    "factory",
    [builtin_quasioptimal, builtin_elaborated, lambda m: builtin_simple(4, m)],
    ids=["quasioptimal", "elaborated", "simple"],
)
def test_constant_error_decreases(factory):
    errs = [asy.asymptotic_report(factory(m)).abs_error for m in (8, 16, 32, 64, 128, 256)]
    assert all(b < a for a, b in zip(errs, errs[1:]))
