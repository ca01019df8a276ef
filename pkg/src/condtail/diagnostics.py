"""Exponentiality diagnostics for rescaled log-spacings."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import chi2

from .errors import DomainError, TooFewSpacings
from .model import LogSpacings


@dataclass(frozen=True)
class Chi2Result:
    statistic: float
    df: int
    p_value: float
    counts: np.ndarray


def exp_cell_edges(n_bins: int) -> np.ndarray:
    """Edges of ``n_bins`` equiprobable cells of Exp(1), from 0 to inf."""
    j = np.arange(n_bins + 1)
    with np.errstate(divide="ignore"):
        return -np.log1p(-j / n_bins)


def chi2_exponential(spacings, gamma_hat: float, n_bins: int = 10) -> Chi2Result:
    """Pearson chi-square distance of ``C_i / gamma_hat`` to Exp(1).

    ``gamma_hat`` is treated as known, so df = n_bins - 1.
    """
    values = spacings.values if isinstance(spacings, LogSpacings) else np.asarray(spacings, float)
    if not gamma_hat > 0:
        raise DomainError(f"gamma_hat must be > 0, got {gamma_hat}")
    if n_bins < 2:
        raise DomainError("n_bins must be >= 2")
    k = values.size
    if k < 5 * n_bins:
        raise TooFewSpacings(f"k={k} spacings; need at least {5 * n_bins} for {n_bins} cells")
    x = values / gamma_hat
    edges = exp_cell_edges(n_bins)
    cells = np.searchsorted(edges, x, side="right") - 1
    counts = np.bincount(np.clip(cells, 0, n_bins - 1), minlength=n_bins)
    expected = k / n_bins
    stat = float(np.sum((counts - expected) ** 2) / expected)
    df = n_bins - 1
    return Chi2Result(statistic=stat, df=df, p_value=float(chi2.sf(stat, df)), counts=counts)


def theoretical_spacing_mean(i: int, k: int, gamma: float, b: float, rho: float) -> float:
    """Approximate mean ``gamma + b (i/(k+1))^{-rho}`` of the i-th spacing."""
    if not 1 <= i <= k:
        raise DomainError(f"need 1 <= i <= k, got i={i}, k={k}")
    if not gamma > 0 or not rho < 0:
        raise DomainError("need gamma > 0 and rho < 0")
    return gamma + b * (i / (k + 1)) ** (-rho)


def exponential_qq(spacings, gamma_hat: float) -> np.ndarray:
    """QQ pairs (Exp(1) quantile, sorted C_i/gamma_hat), shape (k, 2)."""
    values = spacings.values if isinstance(spacings, LogSpacings) else np.asarray(spacings, float)
    if not gamma_hat > 0:
        raise DomainError(f"gamma_hat must be > 0, got {gamma_hat}")
    k = values.size
    i = np.arange(1, k + 1)
    theo = -np.log1p(-i / (k + 1))
    return np.column_stack([theo, np.sort(values / gamma_hat)])


def qq_slope(qq: np.ndarray) -> float:
    """Least-squares slope through the origin of the QQ pairs."""
    return float(np.dot(qq[:, 0], qq[:, 1]) / np.dot(qq[:, 0], qq[:, 0]))
