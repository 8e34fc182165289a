"""Monte Carlo moment estimation across an epsilon ladder, with scaling
fits against the renormalization predictions.

Brownian: sqrt(E[alpha'^2]) grows like k * log(1/eps); stable index
beta: E[alpha'^2] grows like eps^(3 - 6/beta), equivalently the scaled
second moment m2 * eps^(6/beta - 3) / T approaches a constant.
"""

from __future__ import annotations

import io
import json
import warnings
from dataclasses import dataclass, field

import numpy as np

from .density import RadialProfileTable, get_radial_profile
from .functional import alpha_prime, rectangle, triangle
from .processes import ProcessSpec, RngPolicy, sample_path

BATCH_SIZE = 100  # paths per batch for batch-mean standard errors


@dataclass
class EpsilonLadder:
    epsilons: list
    n_steps: list
    n_paths: int
    T: float

    def __post_init__(self):
        eps = np.asarray(self.epsilons, dtype=float)
        if np.any(eps <= 0) or np.any(np.diff(eps) >= 0):
            raise ValueError("epsilons must be positive and strictly "
                             "decreasing")
        if len(self.n_steps) != len(self.epsilons):
            raise ValueError("n_steps must match epsilons in length")


def steps_for(T: float, eps: float, resolution_scale: float | None = None) -> int:
    """Smallest power of two n with T/n <= eps/2 (or scale/2)."""
    scale = eps if resolution_scale is None else resolution_scale
    n = 1
    while T / n > scale / 2.0:
        n *= 2
    return n


def default_ladder(T: float = 1.0, n_paths: int = 4000,
                   epsilons=(0.02, 0.01, 0.005, 0.0025),
                   spec: ProcessSpec | None = None) -> EpsilonLadder:
    # the eps/2 step rule applies to every process kind: time steps must
    # keep increments below the mollifier width eps^{1/beta}, and
    # increments scale like dt^{1/beta}
    eps = list(epsilons)
    return EpsilonLadder(epsilons=eps,
                         n_steps=[steps_for(T, e) for e in eps],
                         n_paths=n_paths, T=T)


@dataclass
class MomentRow:
    epsilon: float
    n_paths: int
    n_steps: int
    m1: float
    m1_se: float
    m2: float
    m2_se: float
    m3: float
    m3_se: float
    m4: float
    m4_se: float
    scaled_m2: float


@dataclass
class MomentTable:
    spec: ProcessSpec
    T: float
    rows: list = field(default_factory=list)

    def column(self, name):
        return np.array([getattr(r, name) for r in self.rows])

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("epsilon,n_paths,n_steps,m1,m1_se,m2,m2_se,"
                  "m3,m3_se,m4,m4_se,scaled_m2\n")
        for r in self.rows:
            buf.write(f"{r.epsilon!r},{r.n_paths},{r.n_steps},"
                      f"{r.m1!r},{r.m1_se!r},{r.m2!r},{r.m2_se!r},"
                      f"{r.m3!r},{r.m3_se!r},{r.m4!r},{r.m4_se!r},"
                      f"{r.scaled_m2!r}\n")
        return buf.getvalue()


@dataclass
class ScalingFit:
    model: str  # "log_linear" or "power"
    a: float
    b: float
    r2: float
    residuals: list

    def to_json(self) -> str:
        return json.dumps({"model": self.model, "a": self.a, "b": self.b,
                           "r2": self.r2, "residuals": self.residuals},
                          indent=2)


def _batch_moments(values: np.ndarray):
    """Sample moments 1-4 with batch-mean standard errors."""
    n = len(values)
    powers = [values ** k for k in (1, 2, 3, 4)]
    out = []
    n_batches = n // BATCH_SIZE
    for pw in powers:
        m = float(np.mean(pw))
        if n_batches >= 2:
            trimmed = pw[:n_batches * BATCH_SIZE]
            bm = trimmed.reshape(n_batches, BATCH_SIZE).mean(axis=1)
            se = float(np.std(bm, ddof=1) / np.sqrt(n_batches))
        else:
            se = float(np.std(pw, ddof=1) / np.sqrt(n))
        out.append((m, se))
    return out


def functional_samples(spec: ProcessSpec, T: float, eps: float,
                       n_steps: int, rng: RngPolicy, n_paths: int,
                       region=None,
                       table: RadialProfileTable | None = None,
                       n_threads: int = 1) -> np.ndarray:
    """alpha'_eps over n_paths independent paths, in path-index order.

    Per-path seeding makes the result independent of n_threads.
    """
    if region is None:
        region = triangle(T)
    if table is None and not spec.is_brownian:
        table = get_radial_profile(spec.beta)
    vals = np.empty(n_paths)

    def work(k):
        path = sample_path(spec, T, n_steps, rng, k)
        vals[k] = alpha_prime(path, eps, region, table).value

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        if n_threads <= 1:
            for k in range(n_paths):
                work(k)
        else:
            from concurrent.futures import ThreadPoolExecutor
            with ThreadPoolExecutor(max_workers=n_threads) as pool:
                list(pool.map(work, range(n_paths)))
    return vals


def scaled_m2(spec: ProcessSpec, m2: float, eps: float, T: float) -> float:
    if spec.is_brownian:
        return float(m2 / (T * np.log(1.0 / eps) ** 2))
    return float(m2 * eps ** (6.0 / spec.beta - 3.0) / T)


def estimate_moments(spec: ProcessSpec, ladder: EpsilonLadder,
                     rng: RngPolicy, n_threads: int = 1) -> MomentTable:
    table = MomentTable(spec=spec, T=ladder.T)
    profile = None if spec.is_brownian else get_radial_profile(spec.beta)
    for eps, n_steps in zip(ladder.epsilons, ladder.n_steps):
        vals = functional_samples(spec, ladder.T, eps, n_steps, rng,
                                  ladder.n_paths, table=profile,
                                  n_threads=n_threads)
        (m1, s1), (m2, s2), (m3, s3), (m4, s4) = _batch_moments(vals)
        table.rows.append(MomentRow(
            epsilon=eps, n_paths=ladder.n_paths, n_steps=n_steps,
            m1=m1, m1_se=s1, m2=m2, m2_se=s2, m3=m3, m3_se=s3,
            m4=m4, m4_se=s4,
            scaled_m2=scaled_m2(spec, m2, eps, ladder.T)))
    return table


def _least_squares_line(x: np.ndarray, y: np.ndarray) -> ScalingFit:
    coef, _, _, _ = np.linalg.lstsq(np.column_stack([x, np.ones_like(x)]),
                                    y, rcond=None)
    pred = coef[0] * x + coef[1]
    resid = y - pred
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid ** 2)) / ss_tot if ss_tot > 0 else 1.0
    return ScalingFit(model="", a=float(coef[0]), b=float(coef[1]),
                      r2=r2, residuals=[float(v) for v in resid])


def fit_log_scaling(table: MomentTable) -> ScalingFit:
    """sqrt(m2) = a * log(1/eps) + b over the ladder (Brownian tables)."""
    if len(table.rows) < 3:
        raise ValueError("need at least 3 ladder points")
    x = np.log(1.0 / table.column("epsilon"))
    y = np.sqrt(table.column("m2") / table.T)
    fit = _least_squares_line(x, y)
    fit.model = "log_linear"
    return fit


def fit_power_scaling(table: MomentTable, beta: float) -> ScalingFit:
    """log m2 = a * log(1/eps) + b; the expected slope is 6/beta - 3.

    The regression runs against log(1/eps) so that the fitted slope
    matches the positive exponent 6/beta - 3 of the divergence rate
    m2 ~ eps^(3 - 6/beta).
    """
    if len(table.rows) < 3:
        raise ValueError("need at least 3 ladder points")
    if not (1.0 < beta < 2.0):
        raise ValueError(f"beta must lie in (1, 2), got {beta}")
    x = np.log(1.0 / table.column("epsilon"))
    y = np.log(table.column("m2"))
    fit = _least_squares_line(x, y)
    fit.model = "power"
    return fit


@dataclass
class RatioReport:
    ratio: float
    predicted: float
    se: float
    z: float
    m2_big: float
    m2_unit: float


def scaling_law_check(spec: ProcessSpec, T: float, eps: float,
                      rng: RngPolicy, n_paths: int) -> RatioReport:
    """Exact-in-law scaling: E[a'_eps(T)^2] = T^(4-6/beta) E[a'_{eps/T}(1)^2].

    (The Brownian exponent 4 - 6/beta at beta = 2 is 1.)
    """
    if T == 1.0:
        raise ValueError("T must differ from 1")
    beta = 2.0 if spec.is_brownian else spec.beta
    n_big = steps_for(T, eps)
    n_unit = steps_for(1.0, eps / T)
    vals_big = functional_samples(spec, T, eps, n_big, rng, n_paths)
    vals_unit = functional_samples(spec, 1.0, eps / T, n_unit, rng, n_paths)
    (_, _), (m2b, s2b), (_, _), (_, _) = _batch_moments(vals_big)
    (_, _), (m2u, s2u), (_, _), (_, _) = _batch_moments(vals_unit)
    ratio = m2b / m2u
    se = abs(ratio) * np.sqrt((s2b / m2b) ** 2 + (s2u / m2u) ** 2)
    predicted = T ** (4.0 - 6.0 / beta)
    return RatioReport(ratio=float(ratio), predicted=float(predicted),
                       se=float(se), z=float((ratio - predicted) / se),
                       m2_big=float(m2b), m2_unit=float(m2u))


@dataclass
class IndependenceReport:
    correlation: float
    corr_se: float
    rect_m2: float
    rect_m2_scaled: float
    left_m2: float
    right_m2: float
    left_m2_se: float
    right_m2_se: float


def increment_independence_check(spec: ProcessSpec, T: float, S: float,
                                 eps: float, rng: RngPolicy,
                                 n_paths: int) -> IndependenceReport:
    """Correlation of alpha' over D_S and over the shifted triangle, plus
    the rectangle cross term scaled by log^2(1/eps)."""
    if not (0.0 < S < T):
        raise ValueError("need 0 < S < T")
    n_steps = steps_for(T, eps)
    if abs(round(S / (T / n_steps)) - S / (T / n_steps)) > 1e-9:
        raise ValueError("S must be grid-aligned")
    profile = None if spec.is_brownian else get_radial_profile(spec.beta)
    left = np.empty(n_paths)
    right = np.empty(n_paths)
    rect = np.empty(n_paths)
    reg_left = triangle(S)
    reg_rect = rectangle(0.0, S, S, T)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for k in range(n_paths):
            path = sample_path(spec, T, n_steps, rng, k)
            left[k] = alpha_prime(path, eps, reg_left, profile).value
            rect[k] = alpha_prime(path, eps, reg_rect, profile).value
            # shifted triangle D_{[S,T]} via the increment path
            shift = int(round(S / path.dt))
            pts = path.points[shift:] - path.points[shift]
            sub = type(path)(t_grid=path.t_grid[:len(pts)], points=pts,
                             seed_provenance=path.seed_provenance,
                             spec=path.spec)
            right[k] = alpha_prime(sub, eps, triangle(T - S), profile).value
    r = float(np.corrcoef(left, right)[0, 1])
    corr_se = (1.0 - r * r) / np.sqrt(n_paths)
    (_, _), (m2r, _), (_, _), (_, _) = _batch_moments(rect)
    (_, _), (m2l, sl), (_, _), (_, _) = _batch_moments(left)
    (_, _), (m2rt, srt), (_, _), (_, _) = _batch_moments(right)
    return IndependenceReport(
        correlation=r, corr_se=float(corr_se), rect_m2=float(m2r),
        rect_m2_scaled=float(m2r / np.log(1.0 / eps) ** 2),
        left_m2=float(m2l), right_m2=float(m2rt),
        left_m2_se=float(sl), right_m2_se=float(srt))
