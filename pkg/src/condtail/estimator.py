"""Weighted log-spacing estimators of the conditional tail index."""

from __future__ import annotations

import warnings
from dataclasses import replace
from typing import Optional

import numpy as np
from scipy.stats import norm

from .errors import DegenerateWeights, DomainError, InsufficientData, MissingRho
from .model import LogSpacings, TailFit, WeightScheme, Window
from .weights import HILL, ZIPF, discrete_weights, zipf_mu
from .window import log_spacings


class NegativeEstimateWarning(UserWarning):
    pass


def _av(scheme: WeightScheme) -> float:
    from .asymptotics import asymptotic_variance

    return asymptotic_variance(scheme)


def _ratio(values: np.ndarray, mu: np.ndarray) -> tuple[float, float]:
    total = float(np.sum(mu))
    if total == 0:
        raise DegenerateWeights("weights sum to zero")
    return float(np.dot(values, mu) / total), total


def _fit(spacings, gamma, total, scheme) -> TailFit:
    if gamma < 0:
        warnings.warn(
            f"negative tail-index estimate {gamma:.4g} from scheme {scheme.label}",
            NegativeEstimateWarning,
            stacklevel=3,
        )
    return TailFit(gamma_hat=gamma, k=spacings.k, m=spacings.m, h=spacings.h,
                   scheme=scheme, av=_av(scheme), weight_sum=total)


def estimate_family(spacings: LogSpacings, scheme: WeightScheme) -> TailFit:
    """Estimate with weights W(i/k): ``sum C_i W(i/k) / sum W(i/k)``."""
    if scheme.kind == "zipf":
        raise DomainError("the Zipf scheme is discrete; use estimate_zipf or estimate_extended")
    mu = discrete_weights(scheme, spacings.k)
    gamma, total = _ratio(spacings.values, mu)
    return _fit(spacings, gamma, total, scheme)


def estimate_extended(spacings: LogSpacings, mu, scheme: Optional[WeightScheme] = None) -> TailFit:
    """Estimate with arbitrary discrete weights ``mu`` (length k).

    ``scheme`` names the limiting weight function, used only for the
    asymptotic variance attached to the fit; it defaults to Hill.
    """
    mu = np.asarray(mu, dtype=float)
    if mu.shape != (spacings.k,):
        raise DomainError(f"need {spacings.k} weights, got {mu.shape}")
    gamma, total = _ratio(spacings.values, mu)
    return _fit(spacings, gamma, total, scheme or HILL)


def estimate(window: Window, k: int, scheme: WeightScheme) -> TailFit:
    """Estimate at one window with any scheme (Zipf via its discrete weights)."""
    if k < 1:
        raise InsufficientData(f"k must be >= 1, got {k}")
    sp = log_spacings(window, k)
    if scheme.kind == "zipf":
        return estimate_extended(sp, zipf_mu(k), ZIPF)
    return estimate_family(sp, scheme)


def estimate_hill(window: Window, k: int) -> TailFit:
    return estimate(window, k, HILL)


def estimate_zipf(window: Window, k: int) -> TailFit:
    return estimate(window, k, ZIPF)


def zipf_least_squares(sorted_responses, k: int) -> float:
    """Zipf estimator as the least-squares slope of log Z_{m-i+1} on tau_i.

    ``tau_i = sum_{j=i}^{m} 1/j``. Independent of the log-spacing form and
    kept as a cross-check for :func:`estimate_zipf`.
    """
    z = np.asarray(sorted_responses, dtype=float)
    m = z.size
    if not 1 <= k < m:
        raise InsufficientData(f"need 1 <= k < m, got k={k}, m={m}")
    inv = 1.0 / np.arange(1, m + 1)
    tau = np.cumsum(inv[::-1])[::-1][:k]
    y = np.log(z[::-1][:k])
    dev = tau - tau.mean()
    return float(np.dot(dev, y) / np.dot(dev, tau))


def confidence_interval(fit: TailFit, level: float = 0.95, rho: Optional[float] = None,
                        b: Optional[float] = None) -> tuple[float, float]:
    """Normal interval ``g -/+ z * g * sqrt(AV / k)``.

    When ``b`` is given, ``g = gamma_hat - b * AB(rho)`` (bias-corrected);
    otherwise ``g = gamma_hat``.
    """
    if not 0 < level < 1:
        raise DomainError(f"level must lie in (0, 1), got {level}")
    center = fit.gamma_hat
    if b is not None:
        if rho is None:
            raise MissingRho("bias correction needs the second-order parameter rho")
        from .asymptotics import ab_av

        ab, _ = ab_av(fit.scheme, rho)
        center = center - b * ab
    z = float(norm.ppf(0.5 + level / 2.0))
    half = z * abs(center) * np.sqrt(fit.av / fit.k)
    return center - half, center + half


def with_ci(fit: TailFit, level: float = 0.95, rho=None, b=None) -> TailFit:
    lo, hi = confidence_interval(fit, level, rho=rho, b=b)
    ab = None
    if rho is not None:
        from .asymptotics import ab_av

        ab = ab_av(fit.scheme, rho)[0]
    return replace(fit, ci=(lo, hi, level), ab=ab)
