"""Figures written next to the CSV outputs.

Uses the object-oriented matplotlib API with the Agg canvas, so nothing
touches pyplot's global state and no display is needed.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.colors import ListedColormap
from matplotlib.figure import Figure

RC = {
    "font.size": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
}
AREA_COLORS = {"A": "#4c72b0", "B": "#55a868", "C": "#c44e52", "D": "#8172b2",
               "E": "#ccb974", "uncovered": "#dddddd"}


def _figure(width=5.0, height=None):
    import matplotlib as mpl

    if height is None:
        height = width * (math.sqrt(5) - 1) / 2
    with mpl.rc_context(RC):
        fig = Figure(figsize=(width, height))
    FigureCanvasAgg(fig)
    return fig


def _save(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    return path


def plot_estimates(rows: list[dict], path, p: int) -> Path:
    """gamma_hat against t (p = 1) or as a colour map over the first two coordinates."""
    fig = _figure()
    ax = fig.add_subplot()
    g = np.array([r["gamma_hat"] for r in rows], dtype=float)
    if p == 1:
        t = np.array([r["t1"] for r in rows], dtype=float)
        order = np.argsort(t)
        ax.plot(t[order], g[order], "-o", ms=3, color="k", label=r"$\hat\gamma(t)$")
        if rows and "ci_lower" in rows[0]:
            lo = np.array([r["ci_lower"] for r in rows], dtype=float)[order]
            hi = np.array([r["ci_upper"] for r in rows], dtype=float)[order]
            ax.fill_between(t[order], lo, hi, color="0.8", label="CI")
        ax.set_xlabel("t")
        ax.set_ylabel("tail index")
        ax.legend(frameon=False)
    else:
        t1 = np.array([r["t1"] for r in rows], dtype=float)
        t2 = np.array([r["t2"] for r in rows], dtype=float)
        sc = ax.scatter(t1, t2, c=g, s=18, marker="s", cmap="viridis")
        fig.colorbar(sc, ax=ax, label="tail index")
        ax.set_xlabel("t1")
        ax.set_ylabel("t2")
    return _save(fig, path)


def plot_chi2_histogram(statistics, df: int, path) -> Path:
    """Histogram of chi-square distances with the chi2(df) density overlaid."""
    from scipy.stats import chi2

    stats_ = np.asarray(statistics, dtype=float)
    fig = _figure()
    ax = fig.add_subplot()
    ax.hist(stats_, bins=max(5, int(np.sqrt(stats_.size))), density=True, color="0.75",
            edgecolor="0.4")
    hi = max(float(stats_.max(initial=0.0)), chi2.ppf(0.999, df))
    x = np.linspace(1e-6, hi, 400)
    ax.plot(x, chi2.pdf(x, df), "k-", label=rf"$\chi^2_{{{df}}}$ density")
    ax.set_xlabel("chi-square distance")
    ax.set_ylabel("density")
    ax.legend(frameon=False)
    return _save(fig, path)


def plot_regions(rows: list[dict], path) -> Path:
    """Area map over the (rho, rho*) plane with the N/S boundary and rho* = rho."""
    rho = np.array([r["rho"] for r in rows], dtype=float)
    star = np.array([r["rho_star"] for r in rows], dtype=float)
    labels = list(AREA_COLORS)
    code = np.array([labels.index(r["area"]) for r in rows])
    fig = _figure(6.5, 3.8)
    ax = fig.add_subplot()
    cmap = ListedColormap(list(AREA_COLORS.values()))
    ur, us = np.unique(rho), np.unique(star)
    if ur.size * us.size == len(rows) and ur.size > 1 and us.size > 1:
        # rows come from a full grid: draw cells edge to edge
        grid = np.full((ur.size, us.size), -1)
        grid[np.searchsorted(ur, rho), np.searchsorted(us, star)] = code
        ax.pcolormesh(_edges(ur), _edges(us), grid.T, cmap=cmap, vmin=-0.5,
                      vmax=len(labels) - 0.5, shading="flat")
    else:
        ax.scatter(rho, star, c=code, cmap=cmap, vmin=-0.5, vmax=len(labels) - 0.5,
                   s=12, marker="s", linewidths=0)
    lo = max(rho.min(), star.min())
    hi = min(rho.max(), star.max())
    if lo < hi:
        ax.plot([lo, hi], [lo, hi], "k--", lw=0.8, label=r"$\rho^*=\rho$")
    ns = -1 - math.sqrt(2)
    if star.min() <= ns <= star.max():
        ax.axhline(ns, color="k", lw=0.8, label="N / S")
    for name in labels:
        if name in {r["area"] for r in rows}:
            ax.plot([], [], "s", color=AREA_COLORS[name], label=name)
    ax.set_xlabel(r"$\rho$")
    ax.set_ylabel(r"$\rho^*$")
    ax.legend(frameon=False, fontsize=7, loc="upper left", bbox_to_anchor=(1.01, 1.0))
    return _save(fig, path)


def _edges(mid):
    half = np.diff(mid) / 2
    return np.concatenate([[mid[0] - half[0]], mid[:-1] + half, [mid[-1] + half[-1]]])


def plot_densities(grid, curves: dict, gamma: float, path) -> Path:
    """Limiting normal densities of several estimators around the true index."""
    fig = _figure()
    ax = fig.add_subplot()
    for label, dens in curves.items():
        ax.plot(grid, dens, label=label)
    ax.axvline(gamma, color="k", lw=0.8, ls=":")
    ax.set_xlabel("estimate")
    ax.set_ylabel("density")
    ax.legend(frameon=False)
    return _save(fig, path)


def plot_selection(table: list[dict], path) -> Path:
    """Hill-Zipf objective against k, one curve per h (feasible pairs only)."""
    fig = _figure()
    ax = fig.add_subplot()
    hs = sorted({r["h"] for r in table})
    for h in hs:
        pts = sorted((r["k"], r["objective"]) for r in table if r["h"] == h and r["feasible"])
        if pts:
            k, obj = zip(*pts)
            ax.plot(k, obj, "-o", ms=2, label=f"h={h:.3g}")
    ax.set_xscale("log")
    ax.set_xlabel("k")
    ax.set_ylabel(r"$\max_t |\mathrm{Hill}-\mathrm{Zipf}|$")
    if hs:
        ax.legend(frameon=False, fontsize=6, ncol=2)
    return _save(fig, path)
