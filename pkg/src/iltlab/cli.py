"""Command-line front end.

    iltlab <mc|quad|const|comb|verify> --config <path>
           [--out <dir>] [--seed <u64>] [--threads <k>]

Configuration is TOML with one section per subcommand; command-line
flags override the file.  Every run emits effective-config.json with
the fully resolved parameter set.  Exit status is 0 iff all gated
checks of the invoked subcommand pass.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import acceptance, combinatorics, constants, quadlab, reports
from .cache import ResultCache, make_key
from .moments import (EpsilonLadder, MomentRow, MomentTable, default_ladder,
                      estimate_moments, fit_log_scaling, fit_power_scaling)
from .processes import BROWNIAN, ProcessSpec, RngPolicy

DEFAULTS = {
    "output": {"out_dir": "out", "cache_dir": ".iltlab-cache"},
    "mc": {"process": "brownian", "beta": 1.5, "T": 1.0,
           "epsilons": [0.02, 0.01, 0.005, 0.0025], "n_paths": 4000,
           "seed": acceptance.DEFAULT_SEED, "threads": 1},
    "quad": {"m_grid": [1e3, 1e4, 1e5, 1e6],
             "eps_grid": [1e-2, 1e-3, 1e-4],
             "lemmas": ["bnd1", "bnd2", "bnd3", "bnd4", "bnd11"]},
    "const": {"betas": [1.5], "mc_samples": 4_000_000},
    "comb": {"n_max": 4, "sample_ns": [5, 6], "n_samples": 10_000,
             "seed": 77},
    "verify": {"criteria": list(range(1, 11)), "mc_paths": 4000,
               "mc_subsample": 4000, "stable_paths": 4000,
               "seed": acceptance.DEFAULT_SEED, "threads": 1},
}


class ConfigError(ValueError):
    pass


def load_config(path: str | None, overrides: dict) -> dict:
    cfg = {sec: dict(vals) for sec, vals in DEFAULTS.items()}
    if path is not None:
        try:
            with open(path, "rb") as fh:
                user = tomllib.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"malformed config {path}: {exc}") from exc
        for sec, vals in user.items():
            if sec not in cfg:
                raise ConfigError(f"unknown config section [{sec}]")
            for key, val in vals.items():
                if key not in cfg[sec]:
                    raise ConfigError(f"unknown key {key!r} in [{sec}]")
                cfg[sec][key] = val
    if overrides.get("out") is not None:
        cfg["output"]["out_dir"] = overrides["out"]
    if overrides.get("seed") is not None:
        for sec in ("mc", "verify"):
            cfg[sec]["seed"] = overrides["seed"]
    if overrides.get("threads") is not None:
        for sec in ("mc", "verify"):
            cfg[sec]["threads"] = overrides["threads"]
    return cfg


def validate(cfg: dict) -> None:
    mc = cfg["mc"]
    if mc["process"] not in ("brownian", "stable"):
        raise ConfigError(f"mc.process must be brownian or stable, "
                          f"got {mc['process']!r}")
    if any(e <= 0 for e in mc["epsilons"]):
        raise ConfigError("mc.epsilons must be positive")
    if sorted(mc["epsilons"], reverse=True) != list(mc["epsilons"]):
        raise ConfigError("mc.epsilons must be strictly decreasing")
    if mc["T"] <= 0 or mc["n_paths"] < 1:
        raise ConfigError("mc.T must be positive and mc.n_paths >= 1")
    if mc["process"] == "stable" and not (1.0 < mc["beta"] < 2.0):
        raise ConfigError("mc.beta must lie in (1, 2)")
    for b in cfg["const"]["betas"]:
        if not (1.0 < b < 2.0):
            raise ConfigError("const.betas entries must lie in (1, 2)")
    if any(e <= 0 for e in cfg["quad"]["eps_grid"]):
        raise ConfigError("quad.eps_grid must be positive")
    if not (1 <= cfg["comb"]["n_max"] <= combinatorics.MAX_EXHAUSTIVE_N):
        raise ConfigError("comb.n_max out of range")
    bad = [c for c in cfg["verify"]["criteria"] if c not in range(1, 11)]
    if bad:
        raise ConfigError(f"verify.criteria must be within 1..10, got {bad}")


def _emit_effective_config(cfg: dict, out_dir: str) -> None:
    reports.write_json(os.path.join(out_dir, "effective-config.json"), cfg)


def run_mc(cfg: dict, out_dir: str) -> int:
    mc = cfg["mc"]
    spec = BROWNIAN if mc["process"] == "brownian" else \
        ProcessSpec(kind="stable", beta=mc["beta"])
    cache = ResultCache(cfg["output"]["cache_dir"])
    key = make_key("mc", mc)
    payload = cache.get_json(key)
    if payload is None:
        ladder = default_ladder(T=mc["T"], n_paths=mc["n_paths"],
                                epsilons=tuple(mc["epsilons"]), spec=spec)
        rng = RngPolicy(mc["seed"])
        table = estimate_moments(spec, ladder, rng,
                                 n_threads=mc["threads"])
        payload = {"rows": [vars(r) for r in table.rows]}
        cache.put_json(key, payload)
    table = MomentTable(spec=spec, T=mc["T"],
                        rows=[MomentRow(**r) for r in payload["rows"]])
    if spec.is_brownian:
        fit = fit_log_scaling(table)
    else:
        fit = fit_power_scaling(table, spec.beta)
    reports.write_text(os.path.join(out_dir, "moments.csv"), table.to_csv())
    reports.write_text(os.path.join(out_dir, "scaling-fit.json"),
                       fit.to_json())
    reports.figure_moment_scaling(
        table.column("epsilon"), table.column("m2"), table.column("m2_se"),
        fit.a, fit.b, fit.model,
        os.path.join(out_dir, "moment-scaling.png"))
    return 0 if fit.r2 > 0.95 else 1


def run_quad(cfg: dict, out_dir: str) -> int:
    quad = cfg["quad"]
    m_grid = [float(m) for m in quad["m_grid"]]
    ok = True
    fits = {}
    for name, fn, target in (
            ("case1_inner", quadlab.case1_inner_integral, 1.0),
            ("case1_second", quadlab.case1_second_integral, 0.25),
            ("case2", quadlab.case2_integral, 0.5)):
        vals = [fn(m) for m in m_grid]
        fit = quadlab.fit_log_asymptotics(m_grid, vals)
        fits[name] = {"fit": json.loads(fit.to_json()), "target": target,
                      "pass": abs(fit.a - target) < 0.05}
        ok &= fits[name]["pass"]
        reports.figure_asymptotic_fit(
            m_grid, vals, fit.a, fit.b, fit.c, name,
            os.path.join(out_dir, f"{name}.png"))
    eps_grid = [float(e) for e in quad["eps_grid"]]
    for case, target in (("case1", acceptance.CASE1_TARGET),
                         ("case2", acceptance.CASE2_TARGET)):
        vals = [quadlab.fourier_second_moment(e, case) for e in eps_grid]
        fit = quadlab.fit_log_asymptotics([1.0 / e for e in eps_grid], vals)
        fits[f"fourier_{case}"] = {
            "fit": json.loads(fit.to_json()), "target": target,
            "pass": abs(fit.a / target - 1.0) < 0.08}
        ok &= fits[f"fourier_{case}"]["pass"]
    reports.write_json(os.path.join(out_dir, "asymptotic-fits.json"), fits)
    probes = {}
    for lemma in quad["lemmas"]:
        rep = quadlab.lemma_bound_probe(lemma)
        probes[lemma] = json.loads(rep.to_json())
        ok &= rep.passed
        reports.figure_lemma_probe(rep.entries, lemma,
                                   os.path.join(out_dir, f"{lemma}.png"))
    reports.write_json(os.path.join(out_dir, "lemma-probes.json"), probes)
    return 0 if ok else 1


def run_const(cfg: dict, out_dir: str) -> int:
    ok = True
    out = {}
    k = constants.k_brownian()
    k.passed = (abs(k.value ** 2 - acceptance.VARIANCE_RATE)
                / acceptance.VARIANCE_RATE < 1e-12)
    ok &= k.passed
    out["k_brownian"] = json.loads(k.to_json())
    for beta in cfg["const"]["betas"]:
        j1 = constants.j1_stable(beta,
                                 mc_samples=cfg["const"]["mc_samples"])
        j1.passed = abs(j1.value - j1.cross_check) / abs(j1.value) < 0.01
        ok &= j1.passed
        out[f"j1_beta_{beta}"] = json.loads(j1.to_json())
        c = constants.c_beta(beta)
        c.passed = c.uncertainty < 0.02 * abs(c.value)
        ok &= c.passed
        out[f"c_beta_{beta}"] = json.loads(c.to_json())
        _, _, a_vals = constants.extrapolate_j2(beta)
        reports.figure_epsilon_ladder(
            list(constants.DEFAULT_A_LADDER), a_vals, "A(eps)",
            os.path.join(out_dir, f"a-ladder-beta-{beta}.png"))
    reports.write_json(os.path.join(out_dir, "constants.json"), out)
    return 0 if ok else 1


def run_comb(cfg: dict, out_dir: str) -> int:
    comb = cfg["comb"]
    summary = combinatorics.run_exhaustive_checks(
        n_max=comb["n_max"], sample_ns=tuple(comb["sample_ns"]),
        n_samples=comb["n_samples"], seed=comb["seed"])
    reports.write_json(os.path.join(out_dir, "combinatorics.json"), summary)
    fails = (len(summary["span_failures"]) + len(summary["clause_failures"])
             + len(summary["ab_failures"])
             + len(summary["conservation_failures"])
             + sum(s["failures"] for s in summary["sampled"].values()))
    return 0 if fails == 0 else 1


def run_verify(cfg: dict, out_dir: str) -> int:
    v = cfg["verify"]
    runners = {
        1: acceptance.criterion_1,
        2: acceptance.criterion_2,
        3: acceptance.criterion_3,
        4: acceptance.criterion_4,
        5: acceptance.criterion_5,
        6: lambda: acceptance.criterion_6(
            n_paths=v["mc_paths"], subsample_paths=v["mc_subsample"],
            master_seed=v["seed"], n_threads=v["threads"]),
        7: lambda: acceptance.criterion_7(
            n_paths=v["stable_paths"], master_seed=v["seed"],
            n_threads=v["threads"]),
        8: acceptance.criterion_8,
        9: acceptance.criterion_9,
        10: lambda: acceptance.criterion_10(
            os.path.join(out_dir, "determinism"), master_seed=v["seed"]),
    }
    results = []
    for num in v["criteria"]:
        res = runners[num]()
        results.append(res.to_dict())
    summary = {"criteria": results,
               "all_pass": all(r["pass"] for r in results)}
    reports.write_text(os.path.join(out_dir, "verify-summary.json"),
                       json.dumps(summary, indent=2, sort_keys=True,
                                  default=float) + "\n")
    return 0 if summary["all_pass"] else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="iltlab",
        description="numerical laboratory for the renormalized derivative "
                    "of planar intersection local time")
    parser.add_argument("subcommand",
                        choices=["mc", "quad", "const", "comb", "verify"])
    parser.add_argument("--config", default=None,
                        help="TOML configuration file")
    parser.add_argument("--out", default=None, help="output directory")
    parser.add_argument("--seed", type=int, default=None,
                        help="master seed override")
    parser.add_argument("--threads", type=int, default=None,
                        help="worker thread count")
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config, vars(args))
        validate(cfg)
    except ConfigError as exc:
        print(f"iltlab: config error: {exc}", file=sys.stderr)
        return 2
    out_dir = cfg["output"]["out_dir"]
    os.makedirs(out_dir, exist_ok=True)
    _emit_effective_config(cfg, out_dir)
    runner = {"mc": run_mc, "quad": run_quad, "const": run_const,
              "comb": run_comb, "verify": run_verify}[args.subcommand]
    return runner(cfg, out_dir)


if __name__ == "__main__":
    sys.exit(main())
