"""Report rendering: CSV/JSON artifacts and matplotlib figures.

All writers are atomic (temp file + rename) and timestamp-free so that
identical inputs produce byte-identical outputs.
"""

from __future__ import annotations

import json
import os

import matplotlib
import numpy as np

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def write_text(path: str, text: str) -> None:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def write_json(path: str, obj) -> None:
    write_text(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _save(fig, path: str) -> None:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    tmp = path + ".tmp.png"
    fig.savefig(tmp, dpi=120, metadata={"Software": None})
    plt.close(fig)
    os.replace(tmp, path)


def figure_moment_scaling(epsilons, m2, m2_se, fit_a, fit_b, model: str,
                          path: str) -> None:
    """Ladder m2 with the fitted growth law overlaid."""
    eps = np.asarray(epsilons, dtype=float)
    x = np.log(1.0 / eps)
    fig, ax = plt.subplots(figsize=(5.0, 3.6))
    if model == "log_linear":
        y = np.sqrt(np.asarray(m2))
        ax.errorbar(x, y, yerr=np.asarray(m2_se) / (2 * y), fmt="o",
                    label="measured sqrt(m2)")
        ax.plot(x, fit_a * x + fit_b, "-",
                label=f"fit slope {fit_a:.4f}")
        ax.set_ylabel("sqrt(m2 / T)")
    else:
        ax.errorbar(x, np.log(m2), yerr=np.asarray(m2_se) / np.asarray(m2),
                    fmt="o", label="measured log m2")
        ax.plot(x, fit_a * x + fit_b, "-",
                label=f"fit slope {fit_a:.4f}")
        ax.set_ylabel("log m2")
    ax.set_xlabel("log(1/eps)")
    ax.legend()
    fig.tight_layout()
    _save(fig, path)


def figure_epsilon_ladder(epsilons, values, label: str, path: str) -> None:
    fig, ax = plt.subplots(figsize=(5.0, 3.6))
    ax.semilogx(np.asarray(epsilons), np.asarray(values), "o-")
    ax.invert_xaxis()
    ax.set_xlabel("eps")
    ax.set_ylabel(label)
    fig.tight_layout()
    _save(fig, path)


def figure_asymptotic_fit(m_grid, values, a, b, c, label: str,
                          path: str) -> None:
    """Values against (log M)^2 with the fitted quadratic-in-logM law."""
    logm = np.log(np.asarray(m_grid, dtype=float))
    fig, ax = plt.subplots(figsize=(5.0, 3.6))
    ax.plot(logm, np.asarray(values), "o", label=label)
    xs = np.linspace(logm.min(), logm.max(), 200)
    ax.plot(xs, a * xs ** 2 + b * xs + c, "-",
            label=f"fit {a:.4f} (logM)^2 + ...")
    ax.set_xlabel("log M")
    ax.legend()
    fig.tight_layout()
    _save(fig, path)


def figure_lemma_probe(entries, lemma: str, path: str) -> None:
    """Scaled probe values across the epsilon grid, one line per case."""
    fig, ax = plt.subplots(figsize=(5.0, 3.6))
    by_case: dict = {}
    for e in entries:
        tag = tuple(sorted((k, v) for k, v in e.items()
                           if k not in ("eps", "value", "scaled")))
        by_case.setdefault(tag, []).append((e["eps"], e["scaled"]))
    for tag, pts in sorted(by_case.items()):
        pts.sort()
        xs = [np.log(1.0 / p[0]) for p in pts]
        ys = [p[1] for p in pts]
        ax.plot(xs, ys, "o-",
                label=",".join(f"{k}={v:g}" for k, v in tag) or lemma)
    ax.set_xlabel("log(1/eps)")
    ax.set_ylabel("scaled value")
    if len(by_case) <= 10:
        ax.legend(fontsize=6)
    fig.tight_layout()
    _save(fig, path)
