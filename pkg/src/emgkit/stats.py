"""Normality and goodness-of-fit tests plus distribution summaries."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.special import ndtr, ndtri

from ._dagostino_table import ALPHAS as _DA_ALPHAS
from ._dagostino_table import QUANTILES as _DA_QUANTILES
from .core import TestResult, ValidationError

log = logging.getLogger(__name__)

DEFAULT_ALPHA = 0.05
SW_MIN_N, SW_MAX_N = 3, 5000
SW_SMALL_N = 20
DA_MIN_N = 10
ROUTE_SW_MAX_N = 50

# D of a normal population tends to 1 / (2 sqrt(pi)); the scale normalises
# sqrt(n) * (D - centre) as in D'Agostino's Y statistic
DA_CENTER = 1.0 / (2.0 * math.sqrt(math.pi))
DA_SCALE = 0.02998598


def _sample(x, name: str = "sample") -> np.ndarray:
    arr = np.asarray(x, dtype=np.float64).ravel()
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contains non-finite values")
    return arr


# --- Shapiro-Wilk ---------------------------------------------------------

_SW_C1 = (0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056)
_SW_C2 = (0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633)
_SW_SMALL = dict(gamma=(-2.273, 0.459), mu=(0.5440, -0.39978, 0.025054, -6.714e-4),
                 sigma=(1.3822, -0.77857, 0.062767, -0.0020322))
_SW_LARGE = dict(mu=(-1.5861, -0.31082, -0.083751, 0.0038915), sigma=(-0.4803, -0.082676, 0.0030302))


def _poly(coefs, x: float) -> float:
    # coefficients in ascending powers
    return sum(c * x**k for k, c in enumerate(coefs))


def shapiro_wilk_coefficients(n: int) -> np.ndarray:
    """Royston's approximation to the optimal weights for sorted samples.

    Returned in ascending order (antisymmetric, last element positive).
    """
    if n < SW_MIN_N:
        raise ValidationError(f"Shapiro-Wilk needs n >= {SW_MIN_N}, got {n}")
    if n == 3:
        return np.array([-math.sqrt(0.5), 0.0, math.sqrt(0.5)])
    m = ndtri((np.arange(1, n + 1) - 0.375) / (n + 0.25))
    summ2 = float(m @ m)
    u = 1.0 / math.sqrt(n)
    a = np.empty(n)
    an = m[-1] / math.sqrt(summ2) + _poly(_SW_C1, u)
    if n > 5:
        an1 = m[-2] / math.sqrt(summ2) + _poly(_SW_C2, u)
        phi = (summ2 - 2 * m[-1] ** 2 - 2 * m[-2] ** 2) / (1 - 2 * an**2 - 2 * an1**2)
        a[2:-2] = m[2:-2] / math.sqrt(phi)
        a[-2], a[1] = an1, -an1
    else:
        phi = (summ2 - 2 * m[-1] ** 2) / (1 - 2 * an**2)
        a[1:-1] = m[1:-1] / math.sqrt(phi)
    a[-1], a[0] = an, -an
    return a


def _shapiro_p(w: float, n: int) -> float:
    if n == 3:
        p = 6.0 / math.pi * (math.asin(math.sqrt(w)) - math.asin(math.sqrt(0.75)))
        return min(max(p, 0.0), 1.0)
    if w >= 1.0:
        return 1.0
    if n <= 11:
        gamma = _poly(_SW_SMALL["gamma"], n)
        y = math.log1p(-w)
        if y >= gamma:
            # W far below anything a normal sample produces
            return 0.0
        z = (-math.log(gamma - y) - _poly(_SW_SMALL["mu"], n)) / math.exp(_poly(_SW_SMALL["sigma"], n))
    else:
        ln = math.log(n)
        z = (math.log1p(-w) - _poly(_SW_LARGE["mu"], ln)) / math.exp(_poly(_SW_LARGE["sigma"], ln))
    return float(ndtr(-z))


def shapiro_wilk_statistic(sample) -> float:
    x = np.sort(_sample(sample))
    n = x.size
    if not SW_MIN_N <= n <= SW_MAX_N:
        raise ValidationError(f"Shapiro-Wilk needs {SW_MIN_N} <= n <= {SW_MAX_N}, got {n}")
    xc = x - x.mean()
    ss = float(xc @ xc)
    if ss == 0.0 or np.ptp(x) == 0.0:
        raise ValidationError("zero variance: Shapiro-Wilk undefined for a constant sample")
    a = shapiro_wilk_coefficients(n)
    # a sums to zero, so the centred sample gives the same numerator with less cancellation
    w = float(a @ xc) ** 2 / ss
    return min(w, 1.0)


def shapiro_wilk(sample, alpha: float = DEFAULT_ALPHA) -> TestResult:
    """Shapiro-Wilk W with Royston's normalising transform for the p-value.

    ``reject_null`` is ``p < alpha``. Samples under 20 carry a warning.
    """
    x = _sample(sample)
    w = shapiro_wilk_statistic(x)
    p = _shapiro_p(w, x.size)
    warnings = ()
    if x.size < SW_SMALL_N:
        warnings = (f"n={x.size} < {SW_SMALL_N}: Shapiro-Wilk has low power",)
    return TestResult("shapiro-wilk", w, x.size, alpha, p_value=p, reject_null=p < alpha, warnings=warnings)


# --- D'Agostino D ---------------------------------------------------------

def dagostino_statistic(sample) -> float:
    """``sum((i - (n+1)/2) * x_(i)) / (n**2 * sigma_n)`` with population sigma."""
    x = np.sort(_sample(sample))
    n = x.size
    if n < DA_MIN_N:
        raise ValidationError(f"D'Agostino D needs n >= {DA_MIN_N}, got {n}")
    sigma = float(np.std(x))
    if sigma == 0.0 or np.ptp(x) == 0.0:
        raise ValidationError("zero variance: D'Agostino D undefined for a constant sample")
    weights = np.arange(1, n + 1) - (n + 1) / 2.0
    # weights sum to zero; centring first limits cancellation
    return float(weights @ (x - x.mean())) / (n * n * sigma)


def dagostino_critical(n: int, alpha: float) -> tuple[float, float]:
    """Two-sided acceptance interval ``(lower, upper)`` for D at level ``alpha``.

    Interpolated linearly in ``log n`` from the embedded table of Y
    percentiles; beyond the largest tabulated n its row is reused.
    """
    if alpha not in _DA_ALPHAS:
        raise ValidationError(f"D'Agostino table covers alpha in {_DA_ALPHAS}, got {alpha}")
    lo_p, hi_p = alpha / 2.0, 1.0 - alpha / 2.0
    ns = np.array(sorted(_DA_QUANTILES))
    logn = math.log(min(max(n, ns[0]), ns[-1]))

    def y_at(p):
        col = np.array([_DA_QUANTILES[k][p] for k in ns])
        return float(np.interp(logn, np.log(ns), col))

    scale = DA_SCALE / math.sqrt(n)
    return DA_CENTER + y_at(lo_p) * scale, DA_CENTER + y_at(hi_p) * scale


def dagostino_d(sample, alpha: float = DEFAULT_ALPHA) -> TestResult:
    """D'Agostino's D with a table-based two-sided decision (no p-value).

    Normality is rejected when D falls outside the tabulated interval.
    """
    x = _sample(sample)
    d = dagostino_statistic(x)
    lo, hi = dagostino_critical(x.size, alpha)
    warnings = ()
    if x.size > max(_DA_QUANTILES):
        warnings = (f"n={x.size} beyond table; using n={max(_DA_QUANTILES)} percentiles",)
    return TestResult("dagostino-d", d, x.size, alpha, critical=(lo, hi),
                      reject_null=bool(d < lo or d > hi), warnings=warnings)


# --- Kolmogorov-Smirnov ---------------------------------------------------

def ks_constant(alpha: float) -> float:
    """Asymptotic KS critical constant, ``sqrt(-ln(alpha / 2) / 2)``."""
    if not 0.0 < alpha < 1.0:
        raise ValidationError(f"alpha must be in (0, 1), got {alpha}")
    return math.sqrt(-0.5 * math.log(alpha / 2.0))


def ks_statistic(sample1, sample2) -> float:
    """Supremum distance between two empirical CDFs.

    Both ECDFs are right-continuous steps that only move at pooled sample
    points, so evaluating there (plus the implicit zero on the left) is exact.
    """
    a = np.sort(_sample(sample1, "sample1"))
    b = np.sort(_sample(sample2, "sample2"))
    if a.size == 0 or b.size == 0:
        raise ValidationError("empty sample")
    pts = np.concatenate([a, b])
    fa = np.searchsorted(a, pts, side="right") / a.size
    fb = np.searchsorted(b, pts, side="right") / b.size
    return float(np.max(np.abs(fa - fb)))


def ks_statistic_cdf(sample, cdf: Callable[[np.ndarray], np.ndarray]) -> float:
    """Supremum distance between an ECDF and a continuous reference CDF."""
    x = np.sort(_sample(sample))
    if x.size == 0:
        raise ValidationError("empty sample")
    n = x.size
    f = np.asarray(cdf(x), dtype=np.float64)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - f), np.max(f - (i - 1) / n), 0.0))


def ks_test(sample1, sample2=None, *, cdf=None, alpha: float = DEFAULT_ALPHA) -> TestResult:
    """Two-sample KS test, or one-sample against ``cdf`` when given.

    The null is rejected when the statistic exceeds ``c(alpha) * sqrt((n1 +
    n2) / (n1 * n2))`` (two-sample) or ``c(alpha) / sqrt(n)`` (one-sample).
    """
    if (sample2 is None) == (cdf is None):
        raise ValidationError("pass exactly one of sample2 or cdf")
    c = ks_constant(alpha)
    if cdf is None:
        n1, n2 = len(_sample(sample1)), len(_sample(sample2))
        stat = ks_statistic(sample1, sample2)
        vc = c * math.sqrt((n1 + n2) / (n1 * n2))
        name, n = "ks-2samp", n1 + n2
    else:
        stat = ks_statistic_cdf(sample1, cdf)
        n = len(_sample(sample1))
        vc = c / math.sqrt(n)
        name = "ks-1samp"
    return TestResult(name, stat, n, alpha, critical=(vc,), reject_null=stat > vc)


def normal_cdf(mean: float, sd: float) -> Callable[[np.ndarray], np.ndarray]:
    return lambda x: ndtr((np.asarray(x) - mean) / sd)


def ks_normality(sample, alpha: float = DEFAULT_ALPHA) -> TestResult:
    """One-sample KS against a normal with the sample's mean and sd.

    The critical value ignores that the parameters were estimated, so the
    test is conservative.
    """
    x = _sample(sample)
    if x.size < 2:
        raise ValidationError("KS normality check needs at least 2 values")
    sd = float(np.std(x, ddof=1))
    if sd == 0.0:
        raise ValidationError("zero variance: cannot fit a normal reference")
    res = ks_test(x, cdf=normal_cdf(float(x.mean()), sd), alpha=alpha)
    return TestResult("ks-normal", res.statistic, res.n, alpha, critical=res.critical,
                      reject_null=res.reject_null, warnings=("normal parameters estimated from the sample",))


# --- summaries -------------------------------------------------------------

@dataclass(frozen=True)
class FiveNumberSummary:
    """Box-plot geometry.

    ``q0``/``q4`` are the most extreme values inside the fences, clamped so
    that they never fall within ``[q1, q3]``.
    """

    q0: float
    q1: float
    q2: float
    q3: float
    q4: float
    iqr: float
    lower_fence: float
    upper_fence: float
    outliers: tuple[float, ...]


def quartile_summary(sample) -> FiveNumberSummary:
    """Quartiles interpolated at order-statistic position ``1 + (n - 1) p``."""
    x = np.sort(_sample(sample))
    if x.size < 1:
        raise ValidationError("empty sample")
    q1, q2, q3 = np.percentile(x, [25, 50, 75], method="linear")
    iqr = q3 - q1
    lo, hi = q1 - 1.5 * iqr, q3 + 1.5 * iqr
    inside = x[(x >= lo) & (x <= hi)]
    outliers = tuple(float(v) for v in x[(x < lo) | (x > hi)])
    # whiskers never end inside the box, even when a quartile is
    # interpolated towards an outlier
    q0, q4 = min(float(inside.min()), float(q1)), max(float(inside.max()), float(q3))
    return FiveNumberSummary(q0, float(q1), float(q2), float(q3), q4,
                             float(iqr), float(lo), float(hi), outliers)


@dataclass(frozen=True)
class HistogramSummary:
    edges: np.ndarray
    counts: np.ndarray
    total: int


def histogram(sample, bins: int = 10) -> HistogramSummary:
    """Uniform bins over ``[min, max]``; the last bin includes its right edge."""
    x = _sample(sample)
    if x.size < 1:
        raise ValidationError("empty sample")
    if int(bins) != bins or bins < 1:
        raise ValidationError(f"bins must be a positive integer, got {bins}")
    counts, edges = np.histogram(x, bins=int(bins), range=(float(x.min()), float(x.max())))
    return HistogramSummary(edges, counts, int(counts.sum()))


# --- routing ---------------------------------------------------------------

ROUTES = ("auto", "shapiro-wilk", "dagostino-d", "ks-normal")


@dataclass(frozen=True)
class RoutingReport:
    """Which normality test decided, why, and every result computed."""

    n: int
    selected: str | None
    reason: str
    results: tuple[TestResult, ...]

    @property
    def decision(self) -> TestResult | None:
        for r in self.results:
            if r.test == self.selected:
                return r
        return None

    @property
    def normal(self) -> bool | None:
        d = self.decision
        if d is None or d.reject_null is None:
            return None
        return not d.reject_null


_RUNNERS = {"shapiro-wilk": shapiro_wilk, "dagostino-d": dagostino_d, "ks-normal": ks_normality}


def choose_test(sample: Sequence[float], alpha: float = DEFAULT_ALPHA, route: str = "auto") -> RoutingReport:
    """Pick a normality test by sample size and run it.

    Shapiro-Wilk for 3 <= n <= 50, D'Agostino for n > 50. Below 20 the
    KS normality check is run alongside as a small-sample cross-check;
    below 3 it is the only option. ``route`` forces a specific test.
    Failures (constant samples, n too small) are reported, not raised.
    """
    if route not in ROUTES:
        raise ValidationError(f"route must be one of {ROUTES}, got {route!r}")
    x = _sample(sample)
    n = x.size
    if route != "auto":
        plan, reason = [route], f"forced by configuration ({route})"
    elif n < SW_MIN_N:
        plan, reason = ["ks-normal"], f"n={n} < {SW_MIN_N}: only the KS goodness-of-fit check applies"
    elif n <= ROUTE_SW_MAX_N:
        plan, reason = ["shapiro-wilk"], f"{SW_MIN_N} <= n={n} <= {ROUTE_SW_MAX_N}: Shapiro-Wilk"
        if n < SW_SMALL_N:
            plan.append("ks-normal")
            reason += f"; n < {SW_SMALL_N} so KS reported as small-sample fallback"
    else:
        plan, reason = ["dagostino-d"], f"n={n} > {ROUTE_SW_MAX_N}: D'Agostino D"

    results = []
    for name in plan:
        try:
            results.append(_RUNNERS[name](x, alpha))
        except ValidationError as exc:
            reason += f"; {name} not computed: {exc}"
    selected = plan[0] if results and results[0].test == plan[0] else None
    return RoutingReport(n, selected, reason, tuple(results))
