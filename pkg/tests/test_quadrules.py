import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from iltlab.quadrules import (bessel_i1, bessel_i1e, bessel_zero_edges,
                              panel_nodes, quad_lin, quad_log)


def test_panel_nodes_integrate_polynomial_exactly():
    # Gauss-Legendre of order 12 is exact through degree 23
    x, w = panel_nodes(np.array([0.0, 0.3, 1.0]), order=12)
    for k in (0, 1, 5, 11):
        assert np.sum(w * x ** k) == pytest.approx(1.0 / (k + 1), rel=1e-13)


def test_quad_lin_matches_closed_form():
    val = quad_lin(np.sin, 0.0, np.pi, n_panels=20)
    assert val == pytest.approx(2.0, rel=1e-12)


def test_quad_log_handles_wide_ranges():
    # int_a^b dx/x = log(b/a), steep near the lower end
    val = quad_log(lambda x: 1.0 / x, 1e-10, 1e3, n_panels=200)
    assert val == pytest.approx(np.log(1e13), rel=1e-12)


def test_gaussian_integral_on_log_grid():
    val = quad_log(lambda r: np.exp(-r * r) * r, 1e-12, 10.0, n_panels=100)
    assert val == pytest.approx(0.5, rel=1e-12)


@given(st.floats(min_value=0.01, max_value=40.0))
@settings(max_examples=60, deadline=None)
def test_bessel_i1_matches_reference(z):
    assert bessel_i1(z) == pytest.approx(float(special.i1(z)),
                                         rel=1e-10, abs=1e-300)


def test_bessel_i1e_scaled_consistency():
    for z in (0.5, 5.0, 30.0, 200.0):
        assert bessel_i1e(z) == pytest.approx(float(special.i1e(z)),
                                              rel=1e-10)


def test_bessel_i1e_large_argument_finite():
    # the scaled form must stay finite where exp(z) overflows
    val = bessel_i1e(1e4)
    assert np.isfinite(val) and val > 0


def test_bessel_zero_edges_bracket_oscillations():
    edges = bessel_zero_edges(0, 2.0, 50.0)
    assert edges[0] == 0.0 and edges[-1] == 50.0
    # interior edges must be zeros of J0(2 r)
    interior = edges[1:-1]
    assert np.all(np.abs(special.j0(2.0 * interior)) < 1e-10)


def test_bessel_zero_edges_tiny_scale_still_covers_range():
    # when the first zero lies past r_max only the bounds remain
    edges = bessel_zero_edges(1, 1e-6, 10.0)
    assert edges[0] == 0.0 and edges[-1] == 10.0
