"""Reproducible sampling of planar Brownian and isotropic stable paths.

Normalization: every process here has characteristic function
E[exp(i p.X_t)] = exp(-t |p|^beta), with beta = 2 for Brownian motion
(per-coordinate increment variance 2t).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class ProcessSpec:
    """Which process to sample; beta = 2 means Brownian motion."""

    kind: str = "brownian"
    beta: float = 2.0

    def __post_init__(self):
        if self.kind not in ("brownian", "stable"):
            raise ValueError(f"unknown process kind {self.kind!r}")
        if not (1.0 < self.beta <= 2.0):
            raise ValueError(f"beta must lie in (1, 2], got {self.beta}")
        if self.kind == "brownian" and self.beta != 2.0:
            raise ValueError("brownian kind requires beta = 2")

    @property
    def is_brownian(self) -> bool:
        return self.kind == "brownian" or self.beta == 2.0


BROWNIAN = ProcessSpec("brownian", 2.0)


@dataclass(frozen=True)
class RngPolicy:
    """Deterministic per-path stream derivation from one master seed.

    Path index k gets SeedSequence(master_seed, spawn_key=(k,)), so the
    stream depends only on (master_seed, k) and never on execution order
    or thread count.
    """

    master_seed: int = 0

    def generator(self, path_index: int) -> np.random.Generator:
        ss = np.random.SeedSequence(entropy=self.master_seed,
                                    spawn_key=(path_index,))
        return np.random.Generator(np.random.PCG64(ss))


@dataclass
class Path2D:
    t_grid: np.ndarray
    points: np.ndarray  # shape (n_steps+1, 2), points[0] = origin
    seed_provenance: tuple = (0, 0)  # (master_seed, path_index)
    spec: ProcessSpec = field(default_factory=lambda: BROWNIAN)

    @property
    def n_steps(self) -> int:
        return len(self.t_grid) - 1

    @property
    def dt(self) -> float:
        return float(self.t_grid[1] - self.t_grid[0])

    @property
    def T(self) -> float:
        return float(self.t_grid[-1])


def _subordinator_unit(rng: np.random.Generator, alpha: float, size):
    """One-sided alpha-stable draws S with E[exp(-lam S)] = exp(-lam^alpha).

    Kanter's representation: with U uniform on (0, pi) and E standard
    exponential,
        S = sin(alpha U) * sin(U)^(-1/alpha)
            * (sin((1-alpha) U) / E)^((1-alpha)/alpha)
    """
    u = rng.uniform(0.0, np.pi, size=size)
    e = rng.standard_exponential(size=size)
    a = alpha
    return (np.sin(a * u) * np.sin(u) ** (-1.0 / a)
            * (np.sin((1.0 - a) * u) / e) ** ((1.0 - a) / a))


def sample_path(spec: ProcessSpec, T: float, n_steps: int,
                rng: RngPolicy, path_index: int) -> Path2D:
    """One discretized path on the uniform grid of [0, T].

    Increments over disjoint cells are independent with characteristic
    function exp(-dt |p|^beta).  Brownian: per-coordinate variance 2 dt.
    Stable: subordination X_t = B_{2 S_t} with S a (beta/2)-subordinator;
    each increment is sqrt(2 S_dt) times a standard planar Gaussian.
    """
    if T <= 0:
        raise ValueError(f"T must be positive, got {T}")
    if n_steps < 1:
        raise ValueError(f"n_steps must be >= 1, got {n_steps}")
    g = rng.generator(path_index)
    dt = T / n_steps
    z = g.standard_normal((n_steps, 2))
    if spec.is_brownian:
        incr = np.sqrt(2.0 * dt) * z
    else:
        s = dt ** (2.0 / spec.beta) * _subordinator_unit(g, spec.beta / 2.0,
                                                         n_steps)
        incr = np.sqrt(2.0 * s)[:, None] * z
    points = np.zeros((n_steps + 1, 2))
    np.cumsum(incr, axis=0, out=points[1:])
    t_grid = np.linspace(0.0, T, n_steps + 1)
    return Path2D(t_grid=t_grid, points=points,
                  seed_provenance=(rng.master_seed, path_index), spec=spec)


def empirical_char_function(paths, p, lag: int = 1):
    """Mean of exp(i p.(X_{t+lag*dt} - X_t)) over paths and starting cells.

    Returns (estimate, se): the complex sample mean over per-path means
    and a jackknife (leave-one-path-out) standard error of its modulus
    components combined, i.e. se of the complex mean in the Euclidean
    norm.
    """
    if not paths:
        raise ValueError("paths must be nonempty")
    if lag < 1:
        raise ValueError(f"lag must be >= 1, got {lag}")
    p = np.asarray(p, dtype=float)
    per_path = []
    for path in paths:
        n = path.n_steps
        if lag > n:
            raise ValueError(f"lag {lag} exceeds grid length {n}")
        diff = path.points[lag:] - path.points[:-lag]
        per_path.append(np.mean(np.exp(1j * diff @ p)))
    vals = np.array(per_path)
    m = len(vals)
    est = vals.mean()
    if m == 1:
        return est, float("inf")
    # jackknife over paths
    loo = (vals.sum() - vals) / (m - 1)
    se = np.sqrt((m - 1) / m * np.sum(np.abs(loo - loo.mean()) ** 2))
    return est, float(se)


def dump_path_csv(path: Path2D, file_path) -> None:
    """Debug dump with columns t, x1, x2."""
    data = np.column_stack([path.t_grid, path.points])
    np.savetxt(file_path, data, delimiter=",", header="t,x1,x2", comments="")
