"""Core data types shared across the package.

All containers are frozen dataclasses holding read-only numpy arrays, so they
can be shared between threads without copying.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import DataError, DomainError, NotAPerfectPower


def _frozen(a, dtype=float):
    arr = np.array(a, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Dataset:
    """Covariate-indexed positive responses ``(x_i, Y_i)``, i = 1..n.

    Parameters
    ----------
    covariates : array_like, shape (n, p) or (n,)
        Design points. A 1-D array is read as p = 1.
    responses : array_like, shape (n,)
        Strictly positive responses.
    """

    covariates: np.ndarray
    responses: np.ndarray

    def __post_init__(self):
        x = np.array(self.covariates, dtype=float)
        if x.ndim == 1:
            x = x[:, None]
        if x.ndim != 2:
            raise DataError("covariates must be a 1-D or 2-D array")
        y = np.array(self.responses, dtype=float).ravel()
        if x.shape[0] != y.shape[0]:
            raise DataError(
                f"{x.shape[0]} covariate rows but {y.shape[0]} responses"
            )
        if x.shape[1] < 1:
            raise DataError("covariate dimension p must be >= 1")
        bad = np.flatnonzero(~(y > 0))
        if bad.size:
            raise DataError(
                "responses must be > 0; offending rows (0-based): "
                + ", ".join(str(i) for i in bad[:10])
            )
        if not np.all(np.isfinite(x)):
            raise DataError("covariates must be finite")
        object.__setattr__(self, "covariates", _frozen(x))
        object.__setattr__(self, "responses", _frozen(y))

    @property
    def n(self) -> int:
        return int(self.responses.shape[0])

    @property
    def p(self) -> int:
        return int(self.covariates.shape[1])

    def points(self):
        """Iterate over ``(covariate, response)`` pairs in storage order."""
        for x, y in zip(self.covariates, self.responses):
            yield x, float(y)

    def rescaled(self, factor: float) -> "Dataset":
        """Return a copy with every response multiplied by ``factor`` > 0."""
        if not factor > 0:
            raise DomainError("scale factor must be > 0")
        return Dataset(self.covariates, self.responses * factor)


METRIC_KINDS = ("sup", "euclid")


@dataclass(frozen=True)
class MetricSpec:
    """Distance on covariate space.

    ``kind`` is ``"sup"`` (the l-infinity norm) or ``"euclid"``. Optional
    per-coordinate ``scales`` divide each coordinate difference before the
    norm is taken, which gives anisotropic balls with a single radius.
    """

    kind: str = "sup"
    scales: Optional[tuple] = None

    def __post_init__(self):
        kind = {"sup-norm": "sup", "euclidean": "euclid"}.get(self.kind, self.kind)
        if kind not in METRIC_KINDS:
            raise DomainError(f"unknown metric {self.kind!r}; use one of {METRIC_KINDS}")
        object.__setattr__(self, "kind", kind)
        if self.scales is not None:
            scales = tuple(float(s) for s in self.scales)
            if any(not s > 0 for s in scales):
                raise DomainError("metric scales must be > 0")
            object.__setattr__(self, "scales", scales)

    def distances(self, x: np.ndarray, t) -> np.ndarray:
        """Distances from every row of ``x`` (shape (n, p)) to the point ``t``."""
        x = np.asarray(x, dtype=float)
        if x.ndim == 1:
            x = x[:, None]
        t = np.atleast_1d(np.asarray(t, dtype=float))
        if t.shape != (x.shape[1],):
            raise DomainError(f"t has dimension {t.size}, covariates have {x.shape[1]}")
        diff = np.abs(x - t)
        if self.scales is not None:
            if len(self.scales) != x.shape[1]:
                raise DomainError("number of metric scales must equal p")
            diff = diff / np.asarray(self.scales)
        if self.kind == "sup":
            return diff.max(axis=1)
        return np.sqrt((diff * diff).sum(axis=1))

    def __call__(self, a, b) -> float:
        return float(self.distances(np.atleast_2d(np.asarray(a, dtype=float)), b)[0])


@dataclass(frozen=True)
class Window:
    """Responses whose covariates lie in the closed ball B(t, h)."""

    center: np.ndarray
    h: float
    member_indices: np.ndarray
    sorted_responses: np.ndarray
    n: int

    def __post_init__(self):
        object.__setattr__(self, "center", _frozen(np.atleast_1d(self.center)))
        object.__setattr__(self, "member_indices", _frozen(self.member_indices, dtype=np.intp))
        object.__setattr__(self, "sorted_responses", _frozen(self.sorted_responses))

    @property
    def m(self) -> int:
        return int(self.sorted_responses.shape[0])

    @property
    def phi(self) -> float:
        return self.m / self.n


@dataclass(frozen=True)
class LogSpacings:
    """Rescaled log-spacings ``C_i = i log(Z_{m-i+1,m} / Z_{m-i,m})``, i = 1..k."""

    values: np.ndarray
    m: int
    h: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(self.values))

    @property
    def k(self) -> int:
        return int(self.values.shape[0])

    @property
    def gamma_floor_index(self) -> int:
        """1-based index ``m - k`` of the threshold order statistic."""
        return self.m - self.k


WEIGHT_KINDS = ("hill", "zipf", "hz", "opt", "combination")


@dataclass(frozen=True)
class WeightScheme:
    """A weight function W(s) on (0, 1), optionally with discrete weights.

    Build instances with the constructors in :mod:`condtail.weights`
    (``hill()``, ``zipf()``, ``hz(rho_star)``, ``opt(rho_star)``, ``combine``).
    """

    kind: str
    rho_star: Optional[float] = None
    alpha: Optional[float] = None
    components: tuple = ()

    def __post_init__(self):
        if self.kind not in WEIGHT_KINDS:
            raise DomainError(f"unknown weight scheme {self.kind!r}")
        if self.kind in ("hz", "opt"):
            if self.rho_star is None or not self.rho_star < 0:
                raise DomainError(f"{self.kind} weights need rho_star < 0, got {self.rho_star}")
        if self.kind == "combination" and (self.alpha is None or len(self.components) != 2):
            raise DomainError("a combination needs alpha and two component schemes")

    @property
    def label(self) -> str:
        if self.kind in ("hz", "opt"):
            return f"{self.kind}({self.rho_star:g})"
        if self.kind == "combination":
            a, b = self.components
            return f"{self.alpha:g}*{a.label}+{1 - self.alpha:g}*{b.label}"
        return self.kind

    def __call__(self, s):
        from .weights import evaluate

        return evaluate(self, s)

    def discrete(self, k: int) -> np.ndarray:
        from .weights import discrete_weights

        return discrete_weights(self, k)


@dataclass(frozen=True)
class TailFit:
    """Result of one tail-index estimate.

    ``ab`` is only filled in when a second-order parameter was supplied;
    ``negative`` flags a negative estimate, which can only arise from
    sign-changing weights and is reported as is.
    """

    gamma_hat: float
    k: int
    m: Optional[int]
    h: Optional[float]
    scheme: WeightScheme
    av: float
    weight_sum: float
    ab: Optional[float] = None
    ci: Optional[tuple] = None

    @property
    def negative(self) -> bool:
        return self.gamma_hat < 0


@dataclass(frozen=True)
class AsymptoticSpec:
    rho: float
    rho_star: float
    b: Optional[float] = None
    region: Optional[tuple] = None

    def __post_init__(self):
        if not (self.rho < 0 and self.rho_star < 0):
            raise DomainError("rho and rho_star must both be negative")


@dataclass(frozen=True)
class DesignSpec:
    """Fixed covariate design: an explicit list or a quantile lattice.

    For a lattice, ``margins`` holds p quantile functions G_j^{-1} on [0, 1].
    """

    kind: str
    points: Optional[np.ndarray] = None
    n: Optional[int] = None
    p: Optional[int] = None
    margins: Optional[Sequence[Callable]] = None

    def __post_init__(self):
        if self.kind == "explicit":
            pts = np.array(self.points, dtype=float)
            if pts.ndim == 1:
                pts = pts[:, None]
            object.__setattr__(self, "points", _frozen(pts))
            object.__setattr__(self, "n", pts.shape[0])
            object.__setattr__(self, "p", pts.shape[1])
        elif self.kind == "lattice":
            if self.n is None or self.p is None or self.p < 1:
                raise DomainError("lattice design needs n and p >= 1")
            side = lattice_side(self.n, self.p)
            if side < 2:
                raise DomainError("lattice needs at least two points per axis")
            if self.margins is None or len(self.margins) != self.p:
                raise DomainError("lattice needs one margin quantile function per axis")
        else:
            raise DomainError(f"unknown design kind {self.kind!r}")

    def covariates(self) -> np.ndarray:
        """Materialize the design as an (n, p) array."""
        if self.kind == "explicit":
            return self.points
        side = lattice_side(self.n, self.p)
        u = np.arange(side) / (side - 1)
        axes = [np.asarray(g(u), dtype=float) for g in self.margins]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.column_stack([m.ravel() for m in mesh])


def lattice_side(n: int, p: int) -> int:
    """Return the integer n^(1/p), raising NotAPerfectPower otherwise."""
    side = int(round(n ** (1.0 / p)))
    for cand in (side - 1, side, side + 1):
        if cand >= 1 and cand**p == n:
            return cand
    raise NotAPerfectPower(f"n={n} is not a perfect {p}-th power")


@dataclass(frozen=True)
class SimSpec:
    """Conditional Pareto-type generator.

    ``gamma_fn`` and ``rho_fn`` map a covariate vector to the local tail
    index and second-order parameter. ``rho_fn`` is ignored (and may be
    None) for the pure Pareto family.
    """

    gamma_fn: Callable
    design: DesignSpec
    family: str = "pareto"
    rho_fn: Optional[Callable] = None
    seed: int = 0
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.family not in ("pareto", "burr"):
            raise DomainError(f"unknown family {self.family!r}; use 'pareto' or 'burr'")
        if self.family == "burr" and self.rho_fn is None:
            raise DomainError("the burr family needs rho_fn")

    def gamma_at(self, x) -> float:
        return float(self.gamma_fn(np.atleast_1d(np.asarray(x, dtype=float))))

    def rho_at(self, x) -> float:
        if self.rho_fn is None:
            return -math.inf
        return float(self.rho_fn(np.atleast_1d(np.asarray(x, dtype=float))))
