import numpy as np
import pytest

from iltlab import constants


def test_k_brownian_forms_agree():
    rep = constants.k_brownian()
    assert rep.value == pytest.approx(
        np.sqrt(5.0) / (8.0 * 2.0 ** 0.25 * np.pi), rel=1e-15)
    assert rep.uncertainty < 1e-14
    assert rep.value ** 2 == pytest.approx(
        10.0 / (128.0 * np.sqrt(2.0) * np.pi ** 2), rel=1e-12)
    assert rep.cross_check == pytest.approx(rep.value, rel=1e-12)


def test_constant_report_serialization():
    rep = constants.k_brownian()
    import json
    d = json.loads(rep.to_json())
    assert set(d) == {"name", "value", "uncertainty", "method",
                      "cross_check", "pass"}
    with pytest.raises(ValueError):
        constants.ConstantReport(name="x", value=1.0, method="m",
                                 uncertainty=-1.0)


def test_prefactor_check():
    # c(beta) = (J1 + J2)/(2 sqrt(2) pi^2); probe with a synthetic sum
    val = constants.c_beta_prefactor_check(2.0 * np.sqrt(2.0) * np.pi ** 2)
    assert val == pytest.approx(1.0, rel=1e-12)


def test_j1_quadrature_stable_under_refinement():
    base = constants.j1_value(1.5)
    fine = constants.j1_value(1.5, constants.QuadratureConfig(
        n_radial_panels=40, n_offset_panels=48, n_angular_panels=32))
    assert fine == pytest.approx(base, rel=1e-4)


def test_j1_montecarlo_agrees_with_quadrature():
    # reduced sample count for speed; the full-scale dual check runs in
    # the gated suite
    quad = constants.j1_value(1.5)
    mc, se = constants.j1_montecarlo(1.5, n_samples=400_000)
    assert abs(mc - quad) < 4.0 * se
    assert abs(mc - quad) / abs(quad) < 0.02


def test_j2_regularized_converges_to_direct_at_low_beta():
    direct = constants.j2_direct(1.3)
    j2, kappa, a_vals = constants.extrapolate_j2(1.3)
    assert j2 == pytest.approx(direct, rel=5e-3)
    assert 0.05 < kappa < 4.0
    assert len(a_vals) == len(constants.DEFAULT_A_LADDER)


def test_extrapolation_ladder_is_cauchy():
    _, _, a_vals = constants.extrapolate_j2(1.5)
    gaps = np.abs(np.diff(a_vals))
    assert np.all(gaps[1:] <= 2.0 * gaps[:-1])


def test_c_beta_report():
    rep = constants.c_beta(1.5)
    assert rep.value < 0
    assert rep.uncertainty / abs(rep.value) < 0.02
    # no direct evaluation exists at beta >= 1.5, so no pass verdict
    assert rep.cross_check is None and rep.passed is None


def test_beta2_divergence_probe_monotone():
    vals = constants.beta2_continuity_probe(betas=(1.5, 1.7, 1.9))
    assert vals[0] < vals[1] < vals[2]


def test_j2_uniform_bound_positive():
    assert constants.j2_uniform_bound(1.5, 3.0) > 0
