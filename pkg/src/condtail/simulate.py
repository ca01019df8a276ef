"""Ground-truth generators and Monte Carlo harnesses.

Canonical Burr: survival ``(1 + z^{-rho/gamma})^{1/rho}``, i.e. quantile
``(u^rho - 1)^{-gamma/rho}`` at survival level u. Its tail quantile function
is ``U(y) = y^gamma (1 - y^rho)^{-gamma/rho}`` with bias function
``b(y) = gamma * y^rho``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import stats

from .asymptotics import ab_av
from .errors import DomainError, SpecError
from .estimator import estimate
from .model import Dataset, DesignSpec, MetricSpec, SimSpec, WeightScheme
from .parallel import pmap
from .window import SUP, select_window

_TWO53 = float(2**53)


def uniform_open(rng: np.random.Generator, size) -> np.ndarray:
    """Uniform draws on the open interval (0, 1)."""
    return (rng.integers(0, 2**53, size=size) + 0.5) / _TWO53


def _check_u(u):
    u = np.asarray(u, dtype=float)
    if np.any(~((u > 0) & (u < 1))):
        raise DomainError("survival level u must lie in (0, 1)")
    return u


def burr_quantile(u, gamma, rho):
    """Burr response at survival level ``u``."""
    u = _check_u(u)
    gamma = np.asarray(gamma, dtype=float)
    rho = np.asarray(rho, dtype=float)
    if np.any(~(gamma > 0)) or np.any(~(rho < 0)):
        raise DomainError("need gamma > 0 and rho < 0")
    return np.expm1(rho * np.log(u)) ** (-gamma / rho)


def burr_survival(z, gamma, rho):
    z = np.asarray(z, dtype=float)
    return (1.0 + z ** (-rho / gamma)) ** (1.0 / rho)


def burr_bias(y, gamma, rho):
    """Bias function b(y) = gamma * y^rho of the canonical Burr."""
    return gamma * np.asarray(y, dtype=float) ** rho


def pareto_quantile(u, gamma):
    """Pure Pareto response ``u^{-gamma}`` at survival level ``u``."""
    u = _check_u(u)
    gamma = np.asarray(gamma, dtype=float)
    if np.any(~(gamma > 0)):
        raise DomainError("need gamma > 0")
    return u ** (-gamma)


def pareto_survival(z, gamma):
    z = np.asarray(z, dtype=float)
    return np.where(z >= 1, z ** (-1.0 / gamma), 1.0)


def lattice_design(n: int, p: int, margins: Sequence) -> DesignSpec:
    """Regular lattice with coordinates ``G_j^{-1}((beta_j - 1)/(n^{1/p} - 1))``."""
    return DesignSpec("lattice", n=int(n), p=int(p), margins=tuple(margins))


def uniform_margin(lo: float = 0.0, hi: float = 1.0):
    return lambda u: lo + (hi - lo) * np.asarray(u, dtype=float)


def _params(spec: SimSpec, x: np.ndarray):
    gam = np.array([spec.gamma_fn(row) for row in x], dtype=float)
    bad = np.flatnonzero(~(gam > 0))
    if bad.size:
        raise SpecError("gamma", f"must be > 0 on the design; got {gam[bad[0]]} at x={x[bad[0]].tolist()}")
    if spec.family == "pareto":
        return gam, None
    rho = np.array([spec.rho_fn(row) for row in x], dtype=float)
    bad = np.flatnonzero(~(rho < 0))
    if bad.size:
        raise SpecError("rho", f"must be < 0 on the design; got {rho[bad[0]]} at x={x[bad[0]].tolist()}")
    return gam, rho


def draw_responses(family: str, gamma, rho, rng: np.random.Generator) -> np.ndarray:
    gamma = np.asarray(gamma, dtype=float)
    u = uniform_open(rng, gamma.shape)
    if family == "pareto":
        return pareto_quantile(u, gamma)
    return burr_quantile(u, gamma, rho)


def generate_conditional(spec: SimSpec) -> Dataset:
    """One independent response per design point, reproducible from ``spec.seed``."""
    x = spec.design.covariates()
    gam, rho = _params(spec, x)
    rng = np.random.default_rng(spec.seed)
    return Dataset(x, draw_responses(spec.family, gam, rho, rng))


@dataclass(frozen=True)
class SchemeSummary:
    scheme: str
    ab: float
    av: float
    mean: float
    std: float
    bias: float
    bias_se: float
    z_mean: float
    z_std: float
    normality_p: float
    skewtest_p: float


@dataclass(frozen=True)
class MonteCarloReport:
    gamma: float
    rho: float
    b: float
    m: int
    k: int
    reps: int
    summaries: list
    estimates: np.ndarray = field(repr=False)

    def summary(self, label: str) -> SchemeSummary:
        for s in self.summaries:
            if s.scheme == label:
                return s
        raise KeyError(label)

    def rows(self) -> list[dict]:
        return [dict(vars(s), gamma=self.gamma, rho=self.rho, b=self.b, m=self.m, k=self.k,
                     reps=self.reps) for s in self.summaries]


def monte_carlo_normality(spec: SimSpec, schemes, t, h: float, k: int, reps: int = 1000,
                          metric: MetricSpec = SUP, b: float | None = None,
                          workers: int | None = None) -> MonteCarloReport:
    """Replicate the window estimate at ``t`` and compare with its normal limit.

    Every scheme sees the same draws. Replication r uses the r-th child of
    ``SeedSequence(spec.seed)`` and draws responses only for window members,
    which are fixed by the design. The standardized statistic is
    ``sqrt(k) (g - gamma - b AB) / (gamma sqrt(AV))``; for the Burr family
    ``b`` defaults to ``gamma (m/k)^rho``. ``normality_p`` is a
    Kolmogorov-Smirnov test of that statistic against N(0, 1);
    ``skewtest_p`` is D'Agostino's omnibus test of its shape only.
    """
    if reps < 100:
        raise DomainError("reps must be >= 100")
    if isinstance(schemes, WeightScheme):
        schemes = [schemes]
    x = spec.design.covariates()
    probe = Dataset(x, np.ones(x.shape[0]))
    win = select_window(probe, t, h, metric)
    members = x[win.member_indices]
    gam, rho = _params(spec, members)
    gamma_t, rho_t = spec.gamma_at(t), spec.rho_at(t)
    if b is None:
        b = 0.0 if spec.family == "pareto" else float(burr_bias(win.m / k, gamma_t, rho_t))

    children = np.random.SeedSequence(spec.seed).spawn(reps)

    def one(seed_seq):
        z = draw_responses(spec.family, gam, rho, np.random.default_rng(seed_seq))
        w = select_window(Dataset(members, z), t, h, metric)
        return [estimate(w, k, sch).gamma_hat for sch in schemes]

    est = np.array(pmap(one, children, workers=workers))
    summaries = []
    for j, sch in enumerate(schemes):
        if math.isfinite(rho_t):
            ab, av = ab_av(sch, rho_t)
            shift = b * ab
        else:
            # pure Pareto: no second-order term
            ab, av = math.nan, ab_av(sch, -1.0)[1]
            shift = 0.0
        g = est[:, j]
        zstat = math.sqrt(k) * (g - gamma_t - shift) / (gamma_t * math.sqrt(av))
        summaries.append(SchemeSummary(
            scheme=sch.label, ab=ab, av=av,
            mean=float(g.mean()), std=float(g.std(ddof=1)),
            bias=float(g.mean() - gamma_t), bias_se=float(g.std(ddof=1) / math.sqrt(reps)),
            z_mean=float(zstat.mean()), z_std=float(zstat.std(ddof=1)),
            normality_p=float(stats.kstest(zstat, "norm").pvalue),
            skewtest_p=float(stats.normaltest(zstat).pvalue),
        ))
    return MonteCarloReport(gamma=gamma_t, rho=rho_t, b=float(b), m=win.m, k=int(k), reps=reps,
                            summaries=summaries, estimates=est)


def single_window_spec(m: int, gamma: float, rho: float | None = None, seed: int = 0) -> SimSpec:
    """Spec with m design points at the origin, so one window holds them all."""
    design = DesignSpec("explicit", points=np.zeros((m, 1)))
    family = "pareto" if rho is None else "burr"
    return SimSpec(gamma_fn=lambda x: gamma, rho_fn=None if rho is None else (lambda x: rho),
                   family=family, design=design, seed=seed)
