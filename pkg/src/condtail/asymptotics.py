"""Asymptotic bias/variance coefficients and the (rho, rho*) comparison map.

``ab_av(scheme, rho)`` returns

    AB = int_0^1 W(s) s^{-rho} ds,    AV = int_0^1 W(s)^2 ds,

in closed form for the four named schemes and by quadrature for
combinations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError, SingularParameter
from .model import WeightScheme
from .weights import HILL, ZIPF, _unchecked, hz, integrate01, opt

SQRT2 = math.sqrt(2.0)
NS_BOUNDARY = -1.0 - SQRT2
ESTIMATORS = ("hill", "zipf", "hz", "opt")


def _neg(name, value):
    if not value < 0:
        raise DomainError(f"{name} must be negative, got {value}")


def asymptotic_bias(scheme: WeightScheme, rho: float) -> float:
    _neg("rho", rho)
    kind = scheme.kind
    if kind == "hill":
        return 1.0 / (1.0 - rho)
    if kind == "zipf":
        return 1.0 / (1.0 - rho) ** 2
    if kind == "hz":
        rs = scheme.rho_star
        return (rs - rho) / (rs * (1.0 - rho) ** 2)
    if kind == "opt":
        rs = scheme.rho_star
        pole = 1.0 - rs - rho
        if pole == 0:
            raise SingularParameter("1 - rho_star - rho = 0")
        return (1.0 - rs) * (rs - rho) / (rs * (1.0 - rho) * pole)
    return quad_bias(scheme, rho)


def asymptotic_variance(scheme: WeightScheme) -> float:
    kind = scheme.kind
    if kind == "hill":
        return 1.0
    if kind == "zipf":
        return 2.0
    if kind == "hz":
        return 1.0 + (1.0 - 1.0 / scheme.rho_star) ** 2
    if kind == "opt":
        return (1.0 - 1.0 / scheme.rho_star) ** 2
    return quad_variance(scheme)


def ab_av(scheme: WeightScheme, rho: float) -> tuple[float, float]:
    """Asymptotic bias and variance multipliers of ``scheme`` at ``rho``."""
    return asymptotic_bias(scheme, rho), asymptotic_variance(scheme)


def quad_bias(scheme: WeightScheme, rho: float) -> float:
    _neg("rho", rho)
    return integrate01(lambda s: _unchecked(scheme, np.array([s]))[0] * s ** (-rho))


def quad_variance(scheme: WeightScheme) -> float:
    return integrate01(lambda s: _unchecked(scheme, np.array([s]))[0] ** 2)


def frontier_rho1(rho: float) -> float:
    _neg("rho", rho)
    return (rho - 1.0 - math.sqrt((1.0 - rho) ** 2 + 4.0 * (1.0 - rho))) / 2.0


def frontier_rho2(rho: float) -> float:
    _neg("rho", rho)
    disc = (2.0 + rho) ** 2 * (1.0 - rho) ** 2 - 4.0 * rho * (rho - 1.0) * (rho - 2.0)
    return ((2.0 + rho) * (rho - 1.0) + math.sqrt(disc)) / (2.0 * (rho - 2.0))


# |AB| ordering promised in each area, smallest first
AREA_BIAS_ORDER = {
    "A": ("zipf", "hill", "hz", "opt"),
    "B": ("zipf", "hz", "hill", "opt"),
    "C": ("zipf", "hz", "opt", "hill"),
    "D": ("hz", "zipf", "opt", "hill"),
    "E": ("hz", "opt", "zipf", "hill"),
}
HALF_PLANE_VAR_ORDER = {
    "N": ("hill", "zipf", "opt", "hz"),
    "S": ("hill", "opt", "zipf", "hz"),
}


def area_label(rho: float, rho_star: float, literal: bool = False) -> str:
    """Closed-form area of (rho, rho_star); ties go to the lower letter.

    By default the D/E frontier conditions are those under which the listed
    orderings hold: E is ``rho1 <= rho* <= rho2`` and D is
    ``rho2 <= rho* <= rho/2``. ``literal=True`` applies the conditions as
    originally printed (D: ``rho1 <= rho* <= rho/2`` and ``rho* <= rho2``;
    E: ``rho2 <= rho* <= rho1``), which mislabels part of the plane.
    """
    _neg("rho", rho)
    _neg("rho_star", rho_star)
    r, s = rho, rho_star
    ab_line = r / (2.0 - r)
    bc_line = (1.0 - math.sqrt(1.0 - 2.0 * r)) / 2.0
    r1, r2 = frontier_rho1(r), frontier_rho2(r)
    if s >= ab_line:
        return "A"
    if bc_line <= s <= ab_line:
        return "B"
    if r / 2.0 <= s <= bc_line:
        return "C"
    if literal:
        if r1 <= s <= r / 2.0 and s <= r2:
            return "D"
        if r2 <= s <= r1:
            return "E"
        return "uncovered"
    if r2 <= s <= r / 2.0:
        return "D"
    if r1 <= s <= r2:
        return "E"
    return "uncovered"


def half_plane(rho_star: float) -> str:
    return "N" if rho_star >= NS_BOUNDARY else "S"


def four_estimators(rho: float, rho_star: float) -> dict:
    """``{name: (AB, AV)}`` for Hill, Zipf, HZ(rho*) and Opt(rho*)."""
    schemes = {"hill": HILL, "zipf": ZIPF, "hz": hz(rho_star), "opt": opt(rho_star)}
    return {name: ab_av(sch, rho) for name, sch in schemes.items()}


@dataclass(frozen=True)
class RegionResult:
    rho: float
    rho_star: float
    area: str
    half_plane: str
    bias_order: tuple
    var_order: tuple
    abs_bias: dict
    variance: dict

    def area_consistent(self, rtol: float = 1e-9) -> Optional[bool]:
        """Whether the area's promised |AB| ordering holds (None if uncovered)."""
        if self.area not in AREA_BIAS_ORDER:
            return None
        return _ordered(self.abs_bias, AREA_BIAS_ORDER[self.area], rtol)

    def half_plane_consistent(self, rtol: float = 1e-9) -> bool:
        return _ordered(self.variance, HALF_PLANE_VAR_ORDER[self.half_plane], rtol)


def _ordered(values, order, rtol):
    seq = [values[name] for name in order]
    return all(a <= b * (1 + rtol) + 1e-300 for a, b in zip(seq, seq[1:]))


def region_classify(rho: float, rho_star: float, literal: bool = False) -> RegionResult:
    """Classify (rho, rho_star) and rank the four estimators directly.

    The direct |AB| and AV rankings are authoritative; the closed-form area
    label is reported alongside. Ties keep the order Hill, Zipf, HZ, Opt.
    """
    coeffs = four_estimators(rho, rho_star)
    abs_bias = {name: abs(c[0]) for name, c in coeffs.items()}
    variance = {name: c[1] for name, c in coeffs.items()}
    bias_order = tuple(sorted(ESTIMATORS, key=lambda n: abs_bias[n]))
    var_order = tuple(sorted(ESTIMATORS, key=lambda n: variance[n]))
    return RegionResult(
        rho=rho, rho_star=rho_star,
        area=area_label(rho, rho_star, literal=literal),
        half_plane=half_plane(rho_star),
        bias_order=bias_order, var_order=var_order,
        abs_bias=abs_bias, variance=variance,
    )


def region_grid(rho_range=(-10.0, 0.0), rho_star_range=(-4.0, 0.0), resolution=(200, 200),
                literal: bool = False) -> list[RegionResult]:
    """Classify every cell midpoint of a regular grid over the two ranges."""
    rhos = cell_midpoints(*rho_range, resolution[0])
    stars = cell_midpoints(*rho_star_range, resolution[1])
    return [region_classify(r, s, literal=literal) for r in rhos for s in stars]


def cell_midpoints(lo: float, hi: float, num: int) -> np.ndarray:
    if num < 1:
        raise DomainError("resolution must be >= 1")
    if lo > hi:
        lo, hi = hi, lo
    if lo == hi:
        return np.full(num, lo) if num == 1 else np.array([lo])
    step = (hi - lo) / num
    return lo + step * (np.arange(num) + 0.5)


def asymptotic_law(gamma: float, rho: float, scheme: WeightScheme, k: int, b: float) -> tuple[float, float]:
    """Mean and standard deviation of the limiting normal law of the estimate."""
    if k < 1:
        raise DomainError("k must be >= 1")
    if not gamma > 0:
        raise DomainError("gamma must be > 0")
    ab, av = ab_av(scheme, rho)
    return gamma + b * ab, gamma * math.sqrt(av / k)


def density_curves(gamma: float, rho: float, schemes, k: int, b: float, grid=None):
    """Normal densities of the limiting laws of several schemes.

    Returns ``(grid, {label: density})``.
    """
    from scipy.stats import norm

    params = {sch.label: asymptotic_law(gamma, rho, sch, k, b) for sch in schemes}
    if grid is None:
        lo = min(m - 4 * s for m, s in params.values())
        hi = max(m + 4 * s for m, s in params.values())
        grid = np.linspace(lo, hi, 401)
    grid = np.asarray(grid, dtype=float)
    return grid, {lab: norm.pdf(grid, m, s) for lab, (m, s) in params.items()}
