"""Joint choice of the window radius h and the number of spacings k.

The pair minimizing ``max_t |Hill(t) - Zipf(t)|`` over a covariate grid is
selected; h and k are shared by all grid points.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, NoFeasiblePair
from .model import Dataset, MetricSpec
from .parallel import pmap
from .weights import zipf_mu
from .window import SUP


@dataclass(frozen=True)
class SelectionRow:
    h: float
    k: int
    objective: float
    feasible: bool
    worst_t: tuple = ()


@dataclass(frozen=True)
class SelectionResult:
    h: float
    k: int
    objective: float
    table: list = field(repr=False)


def hill_zipf_gaps(z_sorted: np.ndarray, ks) -> np.ndarray:
    """|Hill - Zipf| for each k in ``ks`` on one window (NaN where k >= m)."""
    m = z_sorted.size
    out = np.full(len(ks), np.nan)
    kmax = max((k for k in ks if k < m), default=0)
    if kmax < 1:
        return out
    logs = np.log(z_sorted[m - kmax - 1:])[::-1]
    c = np.arange(1, kmax + 1) * (logs[:-1] - logs[1:])
    for j, k in enumerate(ks):
        if not 2 <= k < m:
            continue
        ck = c[:k]
        mu = zipf_mu(k)
        hill = ck.mean()
        zipf = np.dot(ck, mu) / mu.sum()
        out[j] = abs(hill - zipf)
    return out


def _window_gaps(args):
    dataset, t, h, ks, metric = args
    d = metric.distances(dataset.covariates, t)
    z = np.sort(dataset.responses[d <= h], kind="stable")
    return hill_zipf_gaps(z, ks)


def select_h_k(dataset: Dataset, t_grid, h_candidates, k_candidates,
               metric: MetricSpec = SUP, workers: int | None = None,
               tie_tol: float = 1e-12) -> SelectionResult:
    """Exhaustive scan over (h, k) pairs.

    A pair is feasible only if every grid point has more than k responses in
    its window. Objectives within ``tie_tol`` of the minimum count as ties
    (the tail index is dimensionless, so an absolute tolerance absorbs
    rounding), and ties break toward the smaller h, then the smaller k.

    Raises
    ------
    NoFeasiblePair
        If every candidate pair is infeasible at some grid point.
    """
    t_grid = [np.atleast_1d(np.asarray(t, dtype=float)) for t in t_grid]
    hs = sorted(float(h) for h in h_candidates)
    ks = sorted(int(k) for k in k_candidates)
    if not t_grid or not hs or not ks:
        raise DomainError("t_grid, h_candidates and k_candidates must be non-empty")
    if any(not h > 0 for h in hs) or any(k < 2 for k in ks):
        # the Zipf weights vanish identically at k = 1
        raise DomainError("h candidates must be > 0 and k candidates >= 2")

    jobs = [(dataset, t, h, ks, metric) for h in hs for t in t_grid]
    gaps = np.array(pmap(_window_gaps, jobs, workers=workers)).reshape(len(hs), len(t_grid), len(ks))

    table = []
    for a, h in enumerate(hs):
        for j, k in enumerate(ks):
            col = gaps[a, :, j]
            if np.any(np.isnan(col)):
                table.append(SelectionRow(h, k, math.inf, False))
                continue
            w = int(np.argmax(col))
            table.append(SelectionRow(h, k, float(col[w]), True, tuple(t_grid[w].tolist())))

    feasible = [r for r in table if r.feasible]
    if not feasible:
        raise NoFeasiblePair("no (h, k) pair leaves more than k responses in every window")
    floor = min(r.objective for r in feasible)
    best = min((r for r in feasible if r.objective <= floor + tie_tol), key=lambda r: (r.h, r.k))
    return SelectionResult(h=best.h, k=best.k, objective=best.objective, table=table)


def default_h_candidates(dataset: Dataset, metric: MetricSpec = SUP, num: int = 10,
                         max_points: int = 1500) -> list[float]:
    """Quantiles (1%..25%) of pairwise covariate distances.

    Large designs are thinned to an evenly spaced subset so the result is
    deterministic.
    """
    x = dataset.covariates
    if x.shape[0] > max_points:
        x = x[np.linspace(0, x.shape[0] - 1, max_points).astype(int)]
    dists = np.concatenate([metric.distances(x[i + 1:], x[i]) for i in range(x.shape[0] - 1)])
    dists = dists[dists > 0]
    qs = np.quantile(dists, np.linspace(0.01, 0.25, num))
    return sorted(set(float(q) for q in qs))


def default_k_candidates(m_min: int, num: int = 12, k_min: int = 10) -> list[int]:
    """Geometric ladder from ``k_min`` up to ``m_min // 2``."""
    k_max = m_min // 2
    if k_max < k_min:
        return list(range(2, max(k_max, 2) + 1))
    return sorted(set(int(round(v)) for v in np.geomspace(k_min, k_max, num)))


def product_grid(*axes) -> list[np.ndarray]:
    """Cartesian product of per-coordinate value lists, first axis slowest."""
    return [np.array(p, dtype=float) for p in itertools.product(*axes)]


CHELMER_YEARS = list(range(1969, 2006))
CHELMER_DAYS = list(range(15, 346, 30))


def chelmer_grid() -> list[np.ndarray]:
    """Years 1969..2005 crossed with mid-month days 15, 45, ..., 345."""
    return product_grid(CHELMER_YEARS, CHELMER_DAYS)
