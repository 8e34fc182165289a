import numpy as np
import pytest

from iltlab.density import (MollifierParams, build_radial_profile, density,
                            density_dx1, derivative_kernel,
                            get_radial_profile)
from iltlab.processes import BROWNIAN, ProcessSpec

STABLE = ProcessSpec(kind="stable", beta=1.5)


def test_mollifier_params_validation():
    with pytest.raises(ValueError):
        MollifierParams(epsilon=0.0)
    with pytest.raises(ValueError):
        density(BROWNIAN, -1.0, (0.0, 0.0))


def test_brownian_density_closed_form():
    eps, x = 0.3, (0.4, -0.2)
    r2 = x[0] ** 2 + x[1] ** 2
    assert density(BROWNIAN, eps, x) == pytest.approx(
        np.exp(-r2 / (4 * eps)) / (4 * np.pi * eps), rel=1e-14)


def test_brownian_derivative_closed_form():
    eps, x = 0.2, (0.3, 0.1)
    f = density(BROWNIAN, eps, x)
    assert density_dx1(BROWNIAN, eps, x) == pytest.approx(
        -x[0] / (2 * eps) * f, rel=1e-13)


def test_stable_density_normalizes():
    # integral over the plane is 1: 2 pi int_0^inf r f(r) dr
    # the grid must reach far out: the stable tail decays like r^(-3-beta)
    eps = 0.5
    r = np.geomspace(1e-4, 200.0, 2000)
    f = np.array([density(STABLE, eps, (ri, 0.0)) for ri in r])
    total = 2 * np.pi * np.trapezoid(f * r, r)
    assert total == pytest.approx(1.0, abs=2e-3)


def test_profile_self_check_accuracy():
    table = get_radial_profile(1.5)
    assert table.achieved_accuracy < 1e-6


def test_profile_matches_gaussian_limit():
    # at beta near 2 the profile must approach the Gaussian radial part
    # rho/(8 pi) exp(-rho^2/4); deviation is O(2 - beta)
    table = build_radial_profile(1.9, rho_max=12.0)
    rho = np.array([0.5, 1.0, 2.0, 4.0])
    gauss = rho / (8 * np.pi) * np.exp(-rho * rho / 4)
    rel = np.abs(table.g(rho) - gauss) / gauss
    assert np.all(rel < 0.2)


def test_derivative_antisymmetry_and_zero_at_origin():
    table = get_radial_profile(1.5)
    for x in ((0.3, 0.2), (1.5, -0.7)):
        plus = density_dx1(STABLE, 0.1, x, table)
        minus = density_dx1(STABLE, 0.1, (-x[0], x[1]), table)
        assert plus == pytest.approx(-minus, rel=1e-12)
    assert density_dx1(STABLE, 0.1, (0.0, 0.0), table) == 0.0
    assert density_dx1(BROWNIAN, 0.1, (0.0, 0.0)) == 0.0


def test_derivative_self_similarity():
    # d/dx1 f_eps(x) = eps^(-3/beta) d/dx1 f_1(x eps^(-1/beta))
    table = get_radial_profile(1.5)
    beta = 1.5
    eps = 0.04
    x = (0.05, 0.02)
    lhs = density_dx1(STABLE, eps, x, table)
    scale = eps ** (-1.0 / beta)
    rhs = eps ** (-3.0 / beta) * density_dx1(
        STABLE, 1.0, (x[0] * scale, x[1] * scale), table)
    assert lhs == pytest.approx(rhs, rel=2e-6)


def test_derivative_matches_finite_difference_of_density():
    table = get_radial_profile(1.5)
    eps, x = 0.3, (0.6, 0.4)
    h = 1e-5
    fd = (density(STABLE, eps, (x[0] + h, x[1]))
          - density(STABLE, eps, (x[0] - h, x[1]))) / (2 * h)
    assert density_dx1(STABLE, eps, x, table) == pytest.approx(fd, rel=1e-4)


def test_derivative_kernel_vectorized_agrees_pointwise():
    table = get_radial_profile(1.5)
    x1 = np.array([0.1, -0.4, 2.0])
    x2 = np.array([0.3, 0.0, -1.0])
    vec = derivative_kernel(STABLE, 0.2, x1, x2, table)
    for i in range(3):
        assert vec[i] == pytest.approx(
            density_dx1(STABLE, 0.2, (x1[i], x2[i]), table), rel=1e-12)


def test_profile_npz_cache_round_trip(tmp_path):
    fresh = build_radial_profile(1.5)
    cached_dir = str(tmp_path)
    import iltlab.density as dmod
    dmod._tables.clear()
    first = get_radial_profile(1.5, cache_dir=cached_dir)
    dmod._tables.clear()
    second = get_radial_profile(1.5, cache_dir=cached_dir)
    assert np.array_equal(first.values, second.values)
    assert np.array_equal(first.values, fresh.values)
    assert second.tail_coeff == fresh.tail_coeff
