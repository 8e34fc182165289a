"""Deterministic quadrature building blocks shared by the lab modules.

Everything here is fixed-node Gauss-Legendre on explicit panel layouts, so
repeated runs are bit-identical.  scipy's adaptive routines are used only in
tests, as independent oracles.
"""

from __future__ import annotations

import functools

import numpy as np
from scipy import special


@functools.lru_cache(maxsize=32)
def _leggauss(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


def panel_nodes(edges: np.ndarray, order: int = 12):
    """Gauss-Legendre nodes/weights on the panels defined by ``edges``."""
    edges = np.asarray(edges, dtype=float)
    xg, wg = _leggauss(order)
    mids = 0.5 * (edges[:-1] + edges[1:])
    halfs = 0.5 * (edges[1:] - edges[:-1])
    nodes = (mids[:, None] + halfs[:, None] * xg[None, :]).ravel()
    weights = (halfs[:, None] * wg[None, :]).ravel()
    return nodes, weights


def log_edges(a: float, b: float, n_panels: int) -> np.ndarray:
    if not (0.0 < a < b):
        raise ValueError(f"log panels need 0 < a < b, got ({a}, {b})")
    return np.geomspace(a, b, n_panels + 1)


def quad_log(f, a: float, b: float, n_panels: int = 400, order: int = 12) -> float:
    """Integrate f over (a, b) on log-spaced Gauss panels (a > 0)."""
    x, w = panel_nodes(log_edges(a, b, n_panels), order)
    return float(np.sum(w * f(x)))


def quad_lin(f, a: float, b: float, n_panels: int = 64, order: int = 12) -> float:
    x, w = panel_nodes(np.linspace(a, b, n_panels + 1), order)
    return float(np.sum(w * f(x)))


def bessel_zero_edges(nu: int, scale: float, r_max: float, first_edge: float = 0.0):
    """Panel edges at the zeros of J_nu(scale * r), clipped to (first_edge, r_max).

    Between consecutive zeros the Bessel factor has one sign, which keeps a
    fixed-order Gauss rule accurate however fast the oscillation is.
    """
    if scale <= 0:
        return np.array([first_edge, r_max])
    n_zeros = int(np.ceil(scale * r_max / np.pi)) + 2
    zeros = special.jn_zeros(nu, n_zeros) / scale
    edges = zeros[zeros < r_max]
    return np.concatenate([[first_edge], edges, [r_max]])


# ----------------------------------------------------------------------------
# Modified Bessel function of the first kind, order one.  Power series for
# small arguments, the standard asymptotic expansion for large ones.  scipy's
# i1 serves as the oracle in the tests; this version is what the identity
# checks in quadrature_lab consume.

_ASYMPTOTIC_SWITCH = 18.0


def bessel_i1(z):
    """I_1(z) for z >= 0 (vectorized)."""
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    small = z < _ASYMPTOTIC_SWITCH
    out[small] = _i1_series(z[small])
    out[~small] = _i1_asymptotic(z[~small])
    return out if out.ndim else float(out)


def bessel_i1e(z):
    """exp(-z) * I_1(z) for z >= 0 (vectorized, overflow-safe)."""
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    small = z < _ASYMPTOTIC_SWITCH
    out[small] = _i1_series(z[small]) * np.exp(-z[small])
    out[~small] = _i1_asymptotic_scaled(z[~small])
    return out if out.ndim else float(out)


def _i1_series(z, n_terms: int = 40):
    # I_1(z) = (z/2) * sum_k (z^2/4)^k / (k! (k+1)!)
    z = np.asarray(z, dtype=float)
    q = z * z / 4.0
    term = np.ones_like(z)
    acc = np.ones_like(z)
    for k in range(1, n_terms):
        term = term * q / (k * (k + 1))
        acc += term
    return 0.5 * z * acc


def _i1_asymptotic_scaled(z, n_terms: int = 12):
    # e^{-z} I_1(z) ~ (2 pi z)^{-1/2} * sum_k a_k(1) / z^k, mu = 4
    z = np.asarray(z, dtype=float)
    mu = 4.0
    term = np.ones_like(z)
    acc = np.ones_like(z)
    for k in range(1, n_terms):
        term = term * -(mu - (2 * k - 1) ** 2) / (8.0 * k * z)
        acc += term
    return acc / np.sqrt(2.0 * np.pi * z)


def _i1_asymptotic(z, n_terms: int = 12):
    return np.exp(z) * _i1_asymptotic_scaled(z, n_terms)
