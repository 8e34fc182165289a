import numpy as np
import pytest

from iltlab.moments import (EpsilonLadder, MomentRow, MomentTable,
                            _batch_moments, default_ladder, estimate_moments,
                            fit_log_scaling, fit_power_scaling, scaled_m2,
                            steps_for)
from iltlab.processes import BROWNIAN, ProcessSpec, RngPolicy

STABLE = ProcessSpec(kind="stable", beta=1.5)


def test_ladder_validation():
    with pytest.raises(ValueError):
        EpsilonLadder(epsilons=[0.01, 0.02], n_steps=[256, 128],
                      n_paths=10, T=1.0)
    with pytest.raises(ValueError):
        EpsilonLadder(epsilons=[0.02, 0.01], n_steps=[128], n_paths=10, T=1.0)


def test_steps_for_power_of_two_and_resolution():
    for T in (1.0, 2.0):
        for eps in (0.02, 0.01, 0.005, 0.0025):
            n = steps_for(T, eps)
            assert n & (n - 1) == 0
            assert T / n <= eps / 2.0
            assert T / (n // 2) > eps / 2.0


def test_default_ladder_steps():
    lad = default_ladder(T=1.0, n_paths=10)
    assert lad.n_steps == [128, 256, 512, 1024]


def test_batch_moments_match_plain_moments():
    rng = np.random.Generator(np.random.PCG64(0))
    v = rng.normal(size=1000)
    out = _batch_moments(v)
    for k, (m, se) in enumerate(out, start=1):
        assert m == pytest.approx(float(np.mean(v ** k)), rel=1e-12)
        assert se > 0


def test_scaled_m2_formulas():
    assert scaled_m2(BROWNIAN, 4.0, 0.01, 2.0) == pytest.approx(
        4.0 / (2.0 * np.log(100.0) ** 2), rel=1e-14)
    assert scaled_m2(STABLE, 4.0, 0.01, 2.0) == pytest.approx(
        4.0 * 0.01 ** (6.0 / 1.5 - 3.0) / 2.0, rel=1e-14)
    assert isinstance(scaled_m2(BROWNIAN, np.float64(4.0), 0.01, 1.0), float)


def test_csv_header_is_stable():
    table = MomentTable(spec=BROWNIAN, T=1.0)
    assert table.to_csv().splitlines()[0] == (
        "epsilon,n_paths,n_steps,m1,m1_se,m2,m2_se,m3,m3_se,m4,m4_se,"
        "scaled_m2")


def test_fit_recovers_synthetic_coefficients():
    eps = np.array([0.05, 0.02, 0.01, 0.005])
    a, b = 0.07, 0.03
    rows = [MomentRow(epsilon=float(e), n_paths=1, n_steps=1,
                      m1=0.0, m1_se=0.0,
                      m2=float((a * np.log(1 / e) + b) ** 2),
                      m2_se=0.0, m3=0.0, m3_se=0.0, m4=0.0, m4_se=0.0,
                      scaled_m2=0.0)
            for e in eps]
    table = MomentTable(spec=BROWNIAN, T=1.0, rows=rows)
    fit = fit_log_scaling(table)
    assert fit.model == "log_linear"
    assert fit.a == pytest.approx(a, rel=1e-10)
    assert fit.b == pytest.approx(b, rel=1e-8)
    assert fit.r2 == pytest.approx(1.0, abs=1e-12)

    slope = 6.0 / 1.5 - 3.0
    rows2 = [MomentRow(epsilon=float(e), n_paths=1, n_steps=1,
                       m1=0.0, m1_se=0.0,
                       m2=float(2.0 * e ** (-slope)),
                       m2_se=0.0, m3=0.0, m3_se=0.0, m4=0.0, m4_se=0.0,
                       scaled_m2=0.0)
             for e in eps]
    table2 = MomentTable(spec=STABLE, T=1.0, rows=rows2)
    fit2 = fit_power_scaling(table2, 1.5)
    assert fit2.model == "power"
    assert fit2.a == pytest.approx(slope, rel=1e-10)
    assert np.exp(fit2.b) == pytest.approx(2.0, rel=1e-10)


def test_fit_requires_enough_points_and_valid_beta():
    table = MomentTable(spec=BROWNIAN, T=1.0, rows=[])
    with pytest.raises(ValueError):
        fit_log_scaling(table)
    with pytest.raises(ValueError):
        fit_power_scaling(table, 2.5)


def test_estimate_moments_deterministic_and_thread_invariant():
    lad = EpsilonLadder(epsilons=[0.1, 0.05], n_steps=[32, 64],
                        n_paths=40, T=1.0)
    t1 = estimate_moments(BROWNIAN, lad, RngPolicy(9), n_threads=1)
    t2 = estimate_moments(BROWNIAN, lad, RngPolicy(9), n_threads=4)
    assert t1.to_csv() == t2.to_csv()
    assert len(t1.rows) == 2
    assert all(r.m2 > 0 for r in t1.rows)
