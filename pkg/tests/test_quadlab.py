import numpy as np
import pytest

from iltlab import quadlab


def test_angular_identity_tiny_error():
    for z in (0.1, 1.0, 10.0):
        assert quadlab.bessel_angular_identity_error(z) < 1e-10
    with pytest.raises(ValueError):
        quadlab.bessel_angular_identity_error(-1.0)


def test_i1_gaussian_integral_oracle_value():
    # at s = x = 1, y = 0 the closed form with denominator 2 s x gives
    # (e^{1/2} - 1)/2; frozen reference value
    val = quadlab.i1_gaussian_integral(1.0, 1.0, 0.0)
    assert val == pytest.approx(0.3243606353500641, rel=1e-10)


def test_i_half_variants_disagree():
    # the quadrature reproduces the denominator-2sx form to high accuracy;
    # the sqrt(2)-denominator form differs by a factor sqrt(2)
    err_half = quadlab.bessel_i_half_identity_error(1.0, 1.0, 0.0,
                                                    variant="half")
    err_sqrt2 = quadlab.bessel_i_half_identity_error(1.0, 1.0, 0.0,
                                                     variant="sqrt2")
    assert err_half < 1e-10
    assert err_sqrt2 > 0.09
    with pytest.raises(ValueError):
        quadlab.bessel_i_half_identity_error(1.0, 1.0, 0.0, variant="x")


def test_case_integrals_match_closed_form_derivatives():
    # d/dM of each integral has a closed form; central finite differences
    # of the quadrature must agree
    for fn, dfn in ((quadlab.case1_inner_integral,
                     quadlab.case1_inner_derivative),
                    (quadlab.case2_integral, quadlab.case2_derivative)):
        for M in (50.0, 500.0):
            h = M * 1e-4
            fd = (fn(M + h) - fn(M - h)) / (2 * h)
            assert fd == pytest.approx(dfn(M), rel=1e-6)


def test_case2_leading_coefficient():
    fit = quadlab.fit_log_asymptotics(
        (1e3, 1e4, 1e5, 1e6),
        [quadlab.case2_integral(m) for m in (1e3, 1e4, 1e5, 1e6)])
    assert fit.a == pytest.approx(0.5, abs=1e-3)


def test_correction_integrals_negative_and_log_order():
    for M in (1e3, 1e5):
        l1, l2 = quadlab.case2_correction_integrals(M)
        assert l1 < 0 and l2 < 0
        assert abs(l1) / np.log(M) ** 2 < 0.1
        assert abs(l2) / np.log(M) ** 2 < 0.1


def test_pair_gaussian_moment_against_direct_quadrature():
    # direct 2-D radial/angular quadrature of the p, q integral
    A, B, C = 0.7, 0.4, 1.1
    n = 120
    r = np.linspace(1e-3, 9.0, n)
    th = np.linspace(0.0, 2 * np.pi, n, endpoint=False)
    dr, dth = r[1] - r[0], th[1] - th[0]
    p1 = r[:, None] * np.cos(th[None, :])
    p2 = r[:, None] * np.sin(th[None, :])
    acc = 0.0
    for i in range(n):
        for j in range(n):
            q1, q2 = p1[i, j], p2[i, j]
            s1 = p1 + q1
            s2 = p2 + q2
            w = np.exp(-A * r[:, None] ** 2 - B * (s1 ** 2 + s2 ** 2)
                       - C * (q1 ** 2 + q2 ** 2))
            acc += float(np.sum(w * p1 * q1 * r[:, None])) * r[i] \
                * dr ** 2 * dth ** 2
    ref = quadlab.pair_gaussian_moment(A, B, C)
    assert acc == pytest.approx(ref, rel=2e-2)


def test_cube_and_simplex_reductions_consistent():
    # simplex integral sits between the inscribed and circumscribed cubes
    eps = 0.01
    small, mid, big = quadlab.nested_region_integrals(eps, 1.0)
    assert small < mid < big


def test_exact_second_moment_frozen_values():
    assert quadlab.exact_second_moment(0.02) == pytest.approx(
        0.03227788844831093, rel=1e-9)
    assert quadlab.exact_second_moment(0.0025) == pytest.approx(
        0.13627017426951796, rel=1e-9)


def test_fourier_second_moment_input_validation():
    with pytest.raises(ValueError):
        quadlab.fourier_second_moment(0.5, "case1")
    with pytest.raises(ValueError):
        quadlab.fourier_second_moment(0.01, "case9")


def test_fit_log_asymptotics_recovers_coefficients():
    m = np.array([1e3, 1e4, 1e5, 1e6])
    v = 0.7 * np.log(m) ** 2 - 1.2 * np.log(m) + 0.3
    fit = quadlab.fit_log_asymptotics(m, v)
    assert fit.a == pytest.approx(0.7, rel=1e-10)
    assert fit.b == pytest.approx(-1.2, rel=1e-9)
    assert fit.c == pytest.approx(0.3, rel=1e-7)
    assert fit.residual_norm < 1e-9


def test_fit_log_asymptotics_grid_validation():
    with pytest.raises(ValueError):
        quadlab.fit_log_asymptotics([1e3, 1e4], [1.0, 2.0])
    with pytest.raises(ValueError):
        quadlab.fit_log_asymptotics([10.0, 20.0, 40.0, 80.0],
                                    [1.0, 2.0, 3.0, 4.0])


def test_bnd3_exact_zero_case():
    assert quadlab._bnd3_value(0.0, 2.0, 0.5, 1e-3) == 0.0


def test_lemma_probe_reports():
    rep = quadlab.lemma_bound_probe("bnd3")
    assert rep.passed
    assert all("scaled" in e for e in rep.entries)
    with pytest.raises(ValueError):
        quadlab.lemma_bound_probe("bnd99")
