"""Moving-window selection and rescaled log-spacings."""

from __future__ import annotations

import numpy as np

from .errors import DomainError, EmptyWindow, InsufficientData, NonPositiveResponse
from .model import Dataset, LogSpacings, MetricSpec, Window

SUP = MetricSpec("sup")


def _members(dataset: Dataset, t, h: float, metric: MetricSpec) -> np.ndarray:
    if not h >= 0:
        raise DomainError(f"radius h must be >= 0, got {h}")
    d = metric.distances(dataset.covariates, t)
    # closed ball: boundary ties are members
    return np.flatnonzero(d <= h)


def select_window(dataset: Dataset, t, h: float, metric: MetricSpec = SUP) -> Window:
    """Collect the responses whose covariates lie in the closed ball B(t, h).

    Raises
    ------
    EmptyWindow
        If no design point is within distance ``h`` of ``t``.
    """
    if not h > 0:
        raise DomainError(f"radius h must be > 0, got {h}")
    idx = _members(dataset, t, h, metric)
    if idx.size == 0:
        raise EmptyWindow(f"no design point within h={h:g} of t={np.atleast_1d(t).tolist()}")
    z = np.sort(dataset.responses[idx], kind="stable")
    return Window(center=np.atleast_1d(np.asarray(t, dtype=float)), h=float(h),
                  member_indices=idx, sorted_responses=z, n=dataset.n)


def phi(dataset: Dataset, t, h: float, metric: MetricSpec = SUP) -> float:
    """Proportion of design points in B(t, h); 0 is a valid answer."""
    return _members(dataset, t, h, metric).size / dataset.n


def log_spacings(window: Window, k: int) -> LogSpacings:
    """Rescaled log-spacings of the k largest responses of ``window``.

    ``values[i-1] = i * log(Z[m-i+1] / Z[m-i])`` with Z sorted ascending and
    1-based order-statistic indices.
    """
    return spacings_from_sorted(window.sorted_responses, k, h=window.h)


def spacings_from_sorted(z, k: int, h=None) -> LogSpacings:
    z = np.asarray(z, dtype=float)
    m = z.shape[0]
    k = int(k)
    if k < 1 or k >= m:
        raise InsufficientData(f"need 1 <= k < m, got k={k}, m={m}")
    top = z[m - k - 1:]
    if top[0] <= 0:
        raise NonPositiveResponse(f"order statistic Z[{m - k}] = {top[0]} is not positive")
    logs = np.log(top)[::-1]  # log Z_{m,m}, log Z_{m-1,m}, ..., log Z_{m-k,m}
    i = np.arange(1, k + 1)
    return LogSpacings(values=i * (logs[:-1] - logs[1:]), m=m, h=h)
