import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from condtail import weights as W
from condtail.errors import DegenerateWeights, DomainError, InsufficientData, MissingRho
from condtail.estimator import (NegativeEstimateWarning, confidence_interval, estimate,
                                estimate_extended, estimate_family, estimate_hill,
                                estimate_zipf, with_ci, zipf_least_squares)
from condtail.model import Dataset, LogSpacings
from condtail.window import select_window, spacings_from_sorted

LOG2 = math.log(2)


def one_window(z):
    z = np.asarray(z, dtype=float)
    return select_window(Dataset(np.zeros((z.size, 1)), z), [0.0], 1.0)


def brute_zipf(z, k):
    """Textbook least-squares slope of the top-k log order statistics on tau."""
    z = sorted(z)
    m = len(z)
    taus = [sum(1 / j for j in range(i, m + 1)) for i in range(1, k + 1)]
    ys = [math.log(z[m - i]) for i in range(1, k + 1)]
    tb, yb = sum(taus) / k, sum(ys) / k
    return sum((t - tb) * y for t, y in zip(taus, ys)) / sum((t - tb) ** 2 for t in taus)


spacings_3 = LogSpacings(np.array([LOG2, 2 * LOG2, 3 * LOG2]), m=4)


def test_hill_hand_value():
    assert estimate_family(spacings_3, W.hill()).gamma_hat == pytest.approx(2 * LOG2, rel=1e-15)
    assert estimate_hill(one_window([1, 2, 4, 8]), 3).gamma_hat == pytest.approx(1.38629436, rel=1e-8)


def test_zipf_hand_value():
    fit = estimate_extended(spacings_3, [5 / 6, 1 / 3, 0], W.zipf())
    assert fit.gamma_hat == pytest.approx(9 / 7 * LOG2, rel=1e-15)
    assert estimate_zipf(one_window([8, 1, 4, 2]), 3).gamma_hat == pytest.approx(0.8911892, abs=1e-7)
    assert zipf_least_squares([1, 2, 4, 8], 3) == pytest.approx(9 / 7 * LOG2, rel=1e-13)
    assert brute_zipf([1, 2, 4, 8], 3) == pytest.approx(9 / 7 * LOG2, rel=1e-13)


def test_fit_metadata():
    # HZ(-1) weights at s = 1/3, 2/3, 1 almost cancel, hence a large negative value
    with pytest.warns(NegativeEstimateWarning):
        fit = estimate(one_window([1, 2, 4, 8]), 3, W.hz(-1.0))
    assert (fit.k, fit.m) == (3, 4)
    assert fit.av == pytest.approx(5.0)
    assert estimate_zipf(one_window([1, 2, 4, 8]), 3).av == 2.0


def test_zipf_rejected_by_family():
    with pytest.raises(DomainError):
        estimate_family(spacings_3, W.zipf())


def test_bad_inputs():
    with pytest.raises(InsufficientData):
        estimate_hill(one_window([1, 2, 4]), 3)
    with pytest.raises(InsufficientData):
        estimate_hill(one_window([1, 2, 4]), 0)
    with pytest.raises(DegenerateWeights):
        estimate_zipf(one_window([1, 2, 4]), 1)
    with pytest.raises(DomainError):
        estimate_extended(spacings_3, [1, 2])


def test_negative_estimate_warns_not_clamped():
    sp = LogSpacings(np.array([0.1, 0.1, 5.0]), m=4)
    with pytest.warns(NegativeEstimateWarning):
        fit = estimate_extended(sp, [1.0, 1.0, -1.0])
    assert fit.gamma_hat == pytest.approx(-4.8)


positive = arrays(np.float64, st.integers(6, 60), elements=st.floats(1e-3, 1e3))


@settings(max_examples=100, deadline=None)
@given(positive, st.floats(1e-6, 1e6), st.sampled_from(["hill", "zipf", "hz", "opt"]))
def test_scale_equivariance(z, c, name):
    if np.unique(z).size < z.size:
        return
    k = z.size // 2
    sch = W.from_name(name, -1.3 if name in ("hz", "opt") else None)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NegativeEstimateWarning)
        g1 = estimate(one_window(z), k, sch).gamma_hat
        g2 = estimate(one_window(z * c), k, sch).gamma_hat
    assert g2 == pytest.approx(g1, rel=1e-9, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(positive, st.floats(-1e3, 1e3).filter(lambda c: abs(c) > 1e-3))
def test_weight_normalization_invariance(z, c):
    sp = spacings_from_sorted(np.sort(z), z.size - 1)
    mu = W.zipf_mu(sp.k) + 0.5
    g1 = estimate_extended(sp, mu).gamma_hat
    g2 = estimate_extended(sp, c * mu).gamma_hat
    assert g2 == pytest.approx(g1, rel=1e-14, abs=1e-14)


@settings(max_examples=100, deadline=None)
@given(positive)
def test_zipf_equals_least_squares(z):
    if np.unique(z).size < z.size:
        return
    k = max(2, z.size - 3)
    got = estimate_zipf(one_window(z), k).gamma_hat
    assert got == pytest.approx(brute_zipf(z, k), rel=1e-12, abs=1e-12)
    assert got == pytest.approx(zipf_least_squares(np.sort(z), k), rel=1e-12, abs=1e-12)


@settings(max_examples=50, deadline=None)
@given(positive, st.floats(-8, -0.1))
def test_family_equals_extended(z, rs):
    sp = spacings_from_sorted(np.sort(z), z.size - 1)
    sch = W.opt(rs)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NegativeEstimateWarning)
        a = estimate_family(sp, sch).gamma_hat
        b = estimate_extended(sp, W.discrete_weights(sch, sp.k), sch).gamma_hat
        u = np.arange(1, sp.k + 1) / sp.k
        closed = (rs - 1) / rs**2 * (rs - 1 + (1 - 2 * rs) * u ** (-rs))
        c = estimate_extended(sp, closed, sch).gamma_hat
    assert a == b
    assert c == pytest.approx(a, rel=1e-10, abs=1e-10)


def fake_fit(gamma, k, scheme=W.hill()):
    sp = LogSpacings(np.full(k, gamma), m=k + 1)
    return estimate_family(sp, scheme)


def test_ci_half_width():
    lo, hi = confidence_interval(fake_fit(0.5, 500), 0.95)
    assert (hi - lo) / 2 == pytest.approx(1.959964 * 0.5 / math.sqrt(500), rel=1e-6)
    assert (hi - lo) / 2 == pytest.approx(0.04383, abs=1e-5)
    assert (lo + hi) / 2 == pytest.approx(0.5)


def test_ci_degenerate_level():
    lo, hi = confidence_interval(fake_fit(0.5, 500), 1e-12)
    assert hi - lo == pytest.approx(0, abs=1e-12)
    with pytest.raises(DomainError):
        confidence_interval(fake_fit(0.5, 500), 1.0)


def test_ci_bias_correction():
    fit = fake_fit(0.5, 500)
    lo, hi = confidence_interval(fit, 0.95, rho=-1.0, b=0.1)
    center = 0.5 - 0.1 * 0.5
    assert (lo + hi) / 2 == pytest.approx(center)
    assert (hi - lo) / 2 == pytest.approx(1.959964 * center / math.sqrt(500), rel=1e-6)
    with pytest.raises(MissingRho):
        confidence_interval(fit, 0.95, b=0.1)
    fit2 = with_ci(fit, 0.9, rho=-1.0)
    assert fit2.ab == 0.5 and fit2.ci[2] == 0.9


def test_ci_coverage_pareto(rng):
    gamma, m, k, reps = 0.5, 2000, 200, 1000
    u = (rng.integers(0, 2**53, size=(reps, m)) + 0.5) / 2**53
    z = np.sort(u ** (-gamma), axis=1)
    hits = 0
    for row in z:
        fit = estimate_family(spacings_from_sorted(row, k), W.hill())
        lo, hi = confidence_interval(fit, 0.90)
        hits += lo <= gamma <= hi
    assert abs(hits / reps - 0.90) <= 0.03
