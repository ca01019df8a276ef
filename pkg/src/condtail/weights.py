"""Weight functions W(s) and discrete weights for the estimator family.

Closed forms
------------
Hill          W(s) = 1
Zipf          W(s) = -log s           (discrete: mu_i = sum_{l=i+1}^{k} 1/l)
HZ(r*)        W(s) = 1/r* - (1 - 1/r*) log s
Opt(r*)       W(s) = (r*-1)/r*^2 * (r* - 1 + (1 - 2 r*) s^{-r*})
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import DomainError, EqualBiases, IdenticalSchemes
from .model import WeightScheme

HILL = WeightScheme("hill")
ZIPF = WeightScheme("zipf")


def hill() -> WeightScheme:
    return HILL


def zipf() -> WeightScheme:
    return ZIPF


def hz(rho_star: float) -> WeightScheme:
    return WeightScheme("hz", rho_star=float(rho_star))


def opt(rho_star: float) -> WeightScheme:
    return WeightScheme("opt", rho_star=float(rho_star))


def from_name(name: str, rho_star: float | None = None) -> WeightScheme:
    """Build a scheme from its CLI name (``hill``, ``zipf``, ``hz``, ``opt``)."""
    name = name.lower()
    if name == "hill":
        return HILL
    if name == "zipf":
        return ZIPF
    if name in ("hz", "opt"):
        if rho_star is None:
            raise DomainError(f"scheme {name!r} needs rho_star")
        return WeightScheme(name, rho_star=float(rho_star))
    raise DomainError(f"unknown scheme {name!r}")


def _check_s(s):
    s = np.asarray(s, dtype=float)
    if np.any(~((s > 0) & (s < 1))):
        raise DomainError("weight functions are defined on the open interval (0, 1)")
    return s


def _check_rho(rho_star):
    if not rho_star < 0:
        raise DomainError(f"rho_star must be negative, got {rho_star}")


def weight_hill(s):
    s = _check_s(s)
    return np.ones_like(s) if s.ndim else 1.0


def weight_zipf(s):
    """Continuous Zipf weight ``-log s`` (used for bias/variance calculus)."""
    s = _check_s(s)
    return -np.log(s)


def weight_hz(s, rho_star: float):
    s = _check_s(s)
    _check_rho(rho_star)
    return 1.0 / rho_star - (1.0 - 1.0 / rho_star) * np.log(s)


def weight_opt(s, rho_star: float):
    s = _check_s(s)
    _check_rho(rho_star)
    r = rho_star
    return (r - 1.0) / r**2 * (r - 1.0 + (1.0 - 2.0 * r) * s ** (-r))


def weight_zipf_mu(i: int, k: int) -> float:
    """Exact discrete Zipf weight: the partial harmonic sum over l = i+1..k."""
    if not (1 <= i <= k):
        raise DomainError(f"need 1 <= i <= k, got i={i}, k={k}")
    return float(sum(1.0 / l for l in range(i + 1, k + 1)))


def zipf_mu(k: int) -> np.ndarray:
    """Vector of discrete Zipf weights mu_1..mu_k."""
    if k < 1:
        raise DomainError("k must be >= 1")
    inv = 1.0 / np.arange(1, k + 1)
    # reverse cumulative sum of 1/l over l > i
    tail = np.cumsum(inv[::-1])[::-1]
    return np.append(tail[1:], 0.0)


def _unchecked(scheme: WeightScheme, s: np.ndarray):
    kind = scheme.kind
    if kind == "hill":
        return np.ones_like(s)
    if kind == "zipf":
        return -np.log(s)
    if kind == "hz":
        r = scheme.rho_star
        return 1.0 / r - (1.0 - 1.0 / r) * np.log(s)
    if kind == "opt":
        r = scheme.rho_star
        return (r - 1.0) / r**2 * (r - 1.0 + (1.0 - 2.0 * r) * s ** (-r))
    a, b = scheme.components
    return scheme.alpha * _unchecked(a, s) + (1.0 - scheme.alpha) * _unchecked(b, s)


def evaluate(scheme: WeightScheme, s):
    """Evaluate the continuous weight function of ``scheme`` at ``s`` in (0, 1)."""
    s = _check_s(s)
    out = _unchecked(scheme, np.atleast_1d(s))
    return out if s.ndim else float(out[0])


def discrete_weights(scheme: WeightScheme, k: int) -> np.ndarray:
    """Weights applied to C_1..C_k.

    Zipf uses its exact harmonic weights; every other scheme samples W at
    i/k. W is finite at s = 1 for all shipped schemes, so the last point is
    evaluated as a limit rather than rejected.
    """
    if k < 1:
        raise DomainError("k must be >= 1")
    if scheme.kind == "zipf":
        return zipf_mu(k)
    s = np.arange(1, k + 1) / k
    return _unchecked(scheme, s)


def combine(scheme1: WeightScheme, scheme2: WeightScheme, alpha: float) -> WeightScheme:
    """Pointwise combination ``alpha W1 + (1 - alpha) W2``."""
    if alpha == 1:
        return scheme1
    if alpha == 0:
        return scheme2
    return WeightScheme("combination", alpha=float(alpha), components=(scheme1, scheme2))


def alpha_unbias(ab1: float, ab2: float) -> float:
    """Mixing weight alpha with ``alpha*ab1 + (1-alpha)*ab2 == 0``."""
    if ab1 == ab2:
        raise EqualBiases(f"equal bias coefficients {ab1}; cannot cancel the bias")
    return ab2 / (ab2 - ab1)


def unbiased_combination(scheme1: WeightScheme, scheme2: WeightScheme, rho: float) -> WeightScheme:
    """Combine two schemes so that the asymptotic bias vanishes at ``rho``."""
    from .asymptotics import ab_av

    if scheme1 == scheme2:
        raise IdenticalSchemes("cannot unbias a combination of a scheme with itself")
    ab1, _ = ab_av(scheme1, rho)
    ab2, _ = ab_av(scheme2, rho)
    try:
        alpha = alpha_unbias(ab1, ab2)
    except EqualBiases as exc:
        raise IdenticalSchemes(str(exc)) from exc
    return combine(scheme1, scheme2, alpha)


def integrate01(f) -> float:
    """Adaptive quadrature over (0, 1); endpoints are never evaluated.

    The interval is split at 1/2 so an endpoint singularity gets a
    subinterval of its own.
    """
    g = lambda s: float(f(s))
    total = 0.0
    for a, b in ((0.0, 0.5), (0.5, 1.0)):
        total += integrate.quad(g, a, b, epsabs=1e-11, epsrel=1e-11, limit=400)[0]
    return total


@dataclass(frozen=True)
class WeightReport:
    integral: float
    integral_abs3: float
    normalized: bool
    integrable: bool

    @property
    def ok(self) -> bool:
        return self.normalized and self.integrable


def validate_weight(scheme: WeightScheme, tol: float = 1e-8) -> WeightReport:
    """Numerically check normalization and |W|^3 integrability of ``scheme``.

    Failures are reported, never raised.
    """
    f = lambda s: _unchecked(scheme, np.array([s]))[0]
    total = integrate01(f)
    try:
        cube = integrate01(lambda s: abs(f(s)) ** 3)
    except (ValueError, OverflowError, ZeroDivisionError):
        cube = math.inf
    return WeightReport(
        integral=total,
        integral_abs3=cube,
        normalized=abs(total - 1.0) <= tol,
        integrable=math.isfinite(cube),
    )
