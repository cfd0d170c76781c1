"""Render suite reports: JSON, CSV of cases, and matplotlib figures."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np
import matplotlib as mpl

mpl.use("agg")

rc_report = {
    "font.family": "serif",
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.titlesize": 9,
    "legend.fontsize": 7,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "lines.markersize": 4,
    "savefig.dpi": 150,
    "savefig.bbox": "tight",
}
mpl.rcParams.update(rc_report)

import matplotlib.pyplot as plt  # noqa: E402


def size(scale: float = 1.0) -> list[float]:
    width = 6.0 * scale  # inches
    golden = (np.sqrt(5.0) - 1.0) / 2.0
    return [width, width * golden]


def save(fig, path: Path) -> Path:
    fig.savefig(path.with_suffix(".png"))
    plt.close(fig)
    return path.with_suffix(".png")


def write_csv(rows: list[dict], path: Path) -> Path:
    keys: list[str] = []
    for r in rows:
        keys += [k for k in r if k not in keys]
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=keys)
        w.writeheader()
        for r in rows:
            w.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in r.items()})
    return path


def plot_state_law(rows: list[dict], path: Path) -> Path:
    """Table size per node against bag size, with the bound curves."""
    fig, axes = plt.subplots(1, 2, figsize=size(1.0))
    for ax, dp, title in ((axes[0], "clique", "clique DP (dense)"), (axes[1], "hdp", "H-DP, H = K3")):
        sub = [r for r in rows if r["dp"] == dp]
        for c in sorted({r["c"] for r in sub}):
            pts = [(r["bag"], r["states"]) for r in sub if r["c"] == c]
            x, y = np.array(pts, dtype=float).T if pts else (np.array([]), np.array([]))
            ax.scatter(x, np.maximum(y, 1), s=8, alpha=0.5, label=f"c={c}")
            bags = sorted({int(b) for b in x})
            bound = {int(r["bag"]): r["bound"] for r in sub if r["c"] == c}
            ax.plot(bags, [bound[b] for b in bags], lw=0.8, ls="--")
        ax.set_yscale("log")
        ax.set_xlabel("bag size")
        ax.set_ylabel("states at node")
        ax.set_title(title)
        ax.legend()
    return save(fig, path)


def plot_timings(timings: list[float], path: Path, title: str) -> Path:
    fig, ax = plt.subplots(figsize=size(0.7))
    ax.plot(np.arange(len(timings)), np.asarray(timings) * 1e3, marker=".", lw=0.5)
    ax.set_yscale("log")
    ax.set_xlabel("case")
    ax.set_ylabel("time [ms]")
    ax.set_title(title)
    return save(fig, path)


def plot_agreement(rows: list[dict], path: Path, title: str) -> Path:
    """Solver value against oracle value; every point should sit on the diagonal."""
    fig, ax = plt.subplots(figsize=size(0.6))
    x = np.array([r["oracle"] for r in rows], dtype=float)
    y = np.array([r["dp"] for r in rows], dtype=float)
    ax.scatter(x, y, s=10, alpha=0.4)
    top = max(x.max(initial=0), y.max(initial=0)) + 1
    ax.plot([0, top], [0, top], lw=0.8, color="k")
    ax.set_xlabel("oracle value")
    ax.set_ylabel("DP value")
    ax.set_title(title)
    return save(fig, path)


def write_report(rep, out: Path) -> dict[str, str]:
    """Write <suite>.json, <suite>.csv, <suite>-timings.json and figures
    into out. Returns the written paths by role."""
    out.mkdir(parents=True, exist_ok=True)
    stem = out / rep.suite
    paths = {}
    stem.with_suffix(".json").write_text(rep.dumps() + "\n")
    paths["json"] = str(stem.with_suffix(".json"))
    paths["csv"] = str(write_csv(rep.cases, stem.with_suffix(".csv")))
    tpath = out / f"{rep.suite}-timings.json"
    tpath.write_text(json.dumps({"suite": rep.suite, "total_s": sum(rep.timings), "cases_s": rep.timings}) + "\n")
    paths["timings"] = str(tpath)
    paths["timing_plot"] = str(plot_timings(rep.timings, out / f"{rep.suite}-timings", rep.suite))
    if rep.suite == "state-law":
        paths["figure"] = str(plot_state_law(rep.cases, out / f"{rep.suite}-states"))
    elif rep.suite in ("oracle-vs-clique-dp", "oracle-vs-hdp"):
        paths["figure"] = str(plot_agreement(rep.cases, out / f"{rep.suite}-agreement", rep.suite))
    return paths


def render_text(rep) -> str:
    lines = [f"suite {rep.suite} seed={rep.seed}: {'PASS' if rep.passed else 'FAIL'}"]
    for c in rep.criteria:
        lines.append(f"  [{'pass' if c.passed else 'FAIL'}] {c.name}: {c.detail}")
    return "\n".join(lines)
