"""Gated verification suite.

Each criterion function evaluates one gate of the package contract at
its pinned tolerances and returns a CriterionResult; the CLI `verify`
subcommand and the acceptance test suite both call these functions, so
there is exactly one definition of every gate.
"""

from __future__ import annotations

import glob
import os
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import combinatorics, constants, quadlab, reports
from .functional import alpha_prime, rectangle
from .moments import (default_ladder, estimate_moments, fit_log_scaling,
                      fit_power_scaling, increment_independence_check,
                      scaling_law_check, steps_for)
from .processes import (BROWNIAN, ProcessSpec, RngPolicy,
                        empirical_char_function, sample_path)

DEFAULT_SEED = 20240917

VARIANCE_RATE = 10.0 / (128.0 * np.sqrt(2.0) * np.pi ** 2)
K_REFERENCE = 0.0748151
CASE1_TARGET = -3.0 * np.pi ** 2 / (8.0 * np.sqrt(2.0))   # -2.617
CASE2_TARGET = -np.pi ** 2 / (4.0 * np.sqrt(2.0))         # -1.745


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"number": self.number, "name": self.name,
                "pass": self.passed, "details": self.details}


def criterion_1() -> CriterionResult:
    """Bessel identities below 1e-7 on the pinned grids."""
    angular = {z: quadlab.bessel_angular_identity_error(z)
               for z in (0.1, 1.0, 10.0)}
    grid = (0.5, 1.0, 2.0)
    ihalf = {}
    for s in grid:
        for x in grid:
            for y in grid:
                ihalf[(s, x, y)] = quadlab.bessel_i_half_identity_error(
                    s, x, y, variant="sqrt2")
    worst_a = max(angular.values())
    worst_i = max(ihalf.values())
    return CriterionResult(
        1, "bessel identities", worst_a < 1e-7 and worst_i < 1e-7,
        {"angular_max_error": worst_a, "i_half_max_error": worst_i,
         "i_half_worst_point": repr(max(ihalf, key=ihalf.get))})


M_GRID = (1e3, 1e4, 1e5, 1e6)


def criterion_2() -> CriterionResult:
    """Leading log^2 coefficients of the explicit M-space integrals."""
    fits = {
        "case1_inner": (quadlab.case1_inner_integral, 1.0),
        "case1_second": (quadlab.case1_second_integral, 0.25),
        "case2": (quadlab.case2_integral, 0.5),
    }
    details = {}
    ok = True
    for name, (fn, target) in fits.items():
        fit = quadlab.fit_log_asymptotics(M_GRID, [fn(m) for m in M_GRID])
        details[name] = {"a": fit.a, "target": target}
        ok &= abs(fit.a - target) < 0.05
    ratios = {"first": [], "second": []}
    for m in M_GRID:
        l1, l2 = quadlab.case2_correction_integrals(m)
        ratios["first"].append(abs(l1) / np.log(m))
        ratios["second"].append(abs(l2) / np.log(m))
    for name, vals in ratios.items():
        r = max(vals) / min(vals)
        details[f"correction_{name}_ratio"] = r
        ok &= r < 3.0
    return CriterionResult(2, "explicit integral asymptotics", ok, details)


def criterion_3() -> CriterionResult:
    """Assembled Fourier second-moment constants on the eps ladder."""
    eps_grid = (1e-2, 1e-3, 1e-4)
    m_grid = [1.0 / e for e in eps_grid]
    details = {}
    ok = True
    leading = {}
    for case, target in (("case1", CASE1_TARGET), ("case2", CASE2_TARGET)):
        vals = [quadlab.fourier_second_moment(e, case) for e in eps_grid]
        fit = quadlab.fit_log_asymptotics(m_grid, vals)
        leading[case] = fit.a
        details[case] = {"a": fit.a, "target": target}
        ok &= abs(fit.a / target - 1.0) < 0.08
    rate = 2.0 / (2.0 * np.pi) ** 4 * abs(leading["case1"]
                                          + leading["case2"])
    details["variance_rate"] = {"value": rate, "target": VARIANCE_RATE}
    ok &= abs(rate / VARIANCE_RATE - 1.0) < 0.10
    return CriterionResult(3, "fourier second-moment constants", ok, details)


def criterion_4() -> CriterionResult:
    """Closed-form constant identities to 12 digits."""
    rep = constants.k_brownian()
    rel_sq = abs(rep.value ** 2 - VARIANCE_RATE) / VARIANCE_RATE
    ok = rel_sq < 1e-12 and rep.uncertainty < 1e-14
    return CriterionResult(4, "constant identities", ok,
                           {"k": rep.value, "k_sq_rel_error": rel_sq,
                            "form_spread": rep.uncertainty})


def criterion_5() -> CriterionResult:
    """Bounding-lemma probes on their default grids."""
    details = {}
    ok = True
    for lemma in ("bnd1", "bnd2", "bnd3", "bnd4", "bnd11"):
        rep = quadlab.lemma_bound_probe(lemma)
        details[lemma] = {"pass": rep.passed, "slope": rep.slope,
                          "gate_ratio": rep.gate_ratio}
        ok &= rep.passed
    return CriterionResult(5, "lemma probes", ok, details)


def _rectangle_m2_ladder(spec: ProcessSpec, epsilons, T: float, S: float,
                         n_paths: int, rng: RngPolicy) -> list:
    out = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for eps in epsilons:
            n_steps = steps_for(T, eps)
            region = rectangle(0.0, S, S, T)
            vals = np.empty(n_paths)
            for k in range(n_paths):
                path = sample_path(spec, T, n_steps, rng, k)
                vals[k] = alpha_prime(path, eps, region).value
            out.append(float(np.mean(vals ** 2) / np.log(1.0 / eps) ** 2))
    return out


def criterion_6(n_paths: int = 4000, subsample_paths: int | None = None,
                master_seed: int = DEFAULT_SEED,
                n_threads: int = 1) -> CriterionResult:
    """Brownian Monte Carlo property suite on the default ladder.

    subsample_paths shrinks only the auxiliary checks (scaling law,
    independence, rectangle ladder) for quick smoke runs; the gated
    configuration uses the full path count everywhere.
    """
    if subsample_paths is None:
        subsample_paths = n_paths
    rng = RngPolicy(master_seed)
    ladder = default_ladder(T=1.0, n_paths=n_paths, spec=BROWNIAN)
    table = estimate_moments(BROWNIAN, ladder, rng, n_threads=n_threads)
    details = {}
    ok = True
    for row in table.rows:
        for name in ("m1", "m3"):
            z = abs(getattr(row, name)) / getattr(row, name + "_se")
            details[f"{name}_z_eps_{row.epsilon}"] = z
            ok &= z < 3.0
    fit = fit_log_scaling(table)
    details["fit"] = {"slope": fit.a, "r2": fit.r2}
    ok &= fit.r2 > 0.95 and fit.a > 0
    ok &= 0.5 < fit.a / K_REFERENCE < 2.0
    law = scaling_law_check(BROWNIAN, T=2.0, eps=0.01, rng=rng,
                            n_paths=subsample_paths)
    details["scaling_law"] = {"ratio": law.ratio, "predicted": law.predicted,
                              "z": law.z}
    ok &= abs(law.z) < 3.0
    ind = increment_independence_check(BROWNIAN, T=1.0, S=0.5, eps=0.01,
                                       rng=rng, n_paths=subsample_paths)
    details["independence"] = {"correlation": ind.correlation,
                               "corr_se": ind.corr_se}
    ok &= abs(ind.correlation) < 3.0 * ind.corr_se
    rect = _rectangle_m2_ladder(BROWNIAN, ladder.epsilons, 1.0, 0.5,
                                subsample_paths, rng)
    details["rect_scaled_m2"] = rect
    ok &= all(b <= a * (1 + 1e-9) for a, b in zip(rect, rect[1:]))
    return CriterionResult(6, "brownian monte carlo suite", ok, details)


def criterion_7(n_paths: int = 4000, master_seed: int = DEFAULT_SEED,
                n_threads: int = 1) -> CriterionResult:
    """Stable-path suite at beta = 1.5."""
    spec = ProcessSpec(kind="stable", beta=1.5)
    rng = RngPolicy(master_seed)
    details = {}
    ok = True
    paths = [sample_path(spec, 1.0, 64, rng, k) for k in range(200)]
    dt = 1.0 / 64
    freqs = [(1.0, 0.0), (0.0, 2.0), (2.0, 1.0), (3.0, 0.0), (1.0, 1.0)]
    ecf = []
    for p in freqs:
        est, se = empirical_char_function(paths, p, lag=1)
        target = np.exp(-dt * np.hypot(*p) ** spec.beta)
        z = abs(est - target) / se
        ecf.append({"p": list(p), "z": z})
        ok &= z < 3.0
    details["ecf"] = ecf
    ladder = default_ladder(T=1.0, n_paths=n_paths, spec=spec)
    table = estimate_moments(spec, ladder, rng, n_threads=n_threads)
    fit = fit_power_scaling(table, spec.beta)
    details["power_fit"] = {"slope": fit.a,
                            "target": 6.0 / spec.beta - 3.0}
    ok &= abs(fit.a - 1.0) < 0.3
    law = scaling_law_check(spec, T=2.0, eps=0.01, rng=rng,
                            n_paths=n_paths)
    details["scaling_law"] = {"ratio": law.ratio, "predicted": law.predicted,
                              "z": law.z}
    ok &= abs(law.z) < 3.0
    return CriterionResult(7, "stable suite", ok, details)


def criterion_8() -> CriterionResult:
    """c(beta) pipeline: dual-method j1, Cauchy ladder, direct check."""
    details = {}
    ok = True
    rep = constants.j1_stable(1.5)
    rel = abs(rep.value - rep.cross_check) / abs(rep.value)
    details["j1"] = {"value": rep.value, "mc": rep.cross_check, "rel": rel}
    ok &= rel < 0.01
    _, _, a_vals = constants.extrapolate_j2(1.5)
    gaps = np.abs(np.diff(a_vals))
    details["ladder_gaps"] = [float(g) for g in gaps]
    ok &= bool(np.all(gaps[1:] <= 2.0 * gaps[:-1]))
    j2_extrap, _, _ = constants.extrapolate_j2(1.3)
    j2_direct = constants.j2_direct(1.3)
    rel13 = abs(j2_extrap - j2_direct) / abs(j2_direct)
    details["j2_beta_1_3"] = {"extrapolated": j2_extrap,
                              "direct": j2_direct, "rel": rel13}
    ok &= rel13 < 0.005
    return CriterionResult(8, "c(beta) pipeline", ok, details)


def criterion_9() -> CriterionResult:
    """Exhaustive combinatorial lemma sweep."""
    summary = combinatorics.run_exhaustive_checks(
        n_max=4, sample_ns=(5, 6), n_samples=10_000)
    fails = (len(summary["span_failures"])
             + len(summary["clause_failures"])
             + len(summary["ab_failures"])
             + len(summary["conservation_failures"])
             + sum(s["failures"] for s in summary["sampled"].values()))
    return CriterionResult(9, "combinatorics sweep", fails == 0,
                           {"counts": summary["counts"],
                            "sampled": summary["sampled"],
                            "total_failures": fails})


def _emit_reference_artifacts(out_dir: str, master_seed: int) -> None:
    """Reduced-scale deterministic artifact set used by the byte-identity
    gate (moments CSV, fit JSON, constant JSON, probe JSON)."""
    rng = RngPolicy(master_seed)
    ladder = default_ladder(T=1.0, n_paths=100,
                            epsilons=(0.05, 0.02, 0.01), spec=BROWNIAN)
    table = estimate_moments(BROWNIAN, ladder, rng)
    reports.write_text(os.path.join(out_dir, "moments.csv"), table.to_csv())
    reports.write_text(os.path.join(out_dir, "fit.json"),
                       fit_log_scaling(table).to_json())
    reports.write_text(os.path.join(out_dir, "k.json"),
                       constants.k_brownian().to_json())
    reports.write_text(os.path.join(out_dir, "bnd3.json"),
                       quadlab.lemma_bound_probe("bnd3").to_json())


def criterion_10(work_dir: str, master_seed: int = DEFAULT_SEED) -> CriterionResult:
    """Byte-identical artifacts across repeated runs with one seed."""
    dirs = [os.path.join(work_dir, d) for d in ("run-a", "run-b")]
    for d in dirs:
        _emit_reference_artifacts(d, master_seed)
    details = {}
    ok = True
    for name in sorted(os.path.basename(p)
                       for p in glob.glob(os.path.join(dirs[0], "*"))):
        with open(os.path.join(dirs[0], name), "rb") as fh:
            a = fh.read()
        with open(os.path.join(dirs[1], name), "rb") as fh:
            b = fh.read()
        details[name] = a == b
        ok &= a == b
    return CriterionResult(10, "artifact determinism", ok, details)
