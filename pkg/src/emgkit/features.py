"""Per-epoch fatigue indicators in the time and frequency domains."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ChannelSignal, ComputationError, Epoch, EpochSeries, FeatureTable, PowerSpectrum, ValidationError
from .spectral import SpectralConfig, periodogram

DEFAULT_ZC_THRESHOLD_MV = 0.01


def _x(epoch) -> np.ndarray:
    return epoch.samples if isinstance(epoch, (Epoch, ChannelSignal)) else np.asarray(epoch, dtype=np.float64)


def rms(epoch) -> float:
    """Root mean square amplitude (mV)."""
    x = _x(epoch)
    if x.size < 1:
        raise ValidationError("rms of an empty epoch")
    peak = float(np.max(np.abs(x)))
    if peak == 0.0:
        return 0.0
    # scaling by the peak avoids under/overflow in the squares
    y = x / peak
    return peak * float(np.sqrt(np.mean(y * y)))


def arv(epoch) -> float:
    """Average rectified value, the mean of ``|x|`` (mV)."""
    x = _x(epoch)
    if x.size < 1:
        raise ValidationError("arv of an empty epoch")
    return float(np.mean(np.abs(x)))


def zero_crossings(epoch, threshold: float = DEFAULT_ZC_THRESHOLD_MV) -> int:
    """Count sign changes between consecutive samples.

    A pair ``(x[n], x[n+1])`` counts when the signs differ and the step
    ``|x[n] - x[n+1]|`` is at least ``threshold``. Exact zeros count as
    positive.
    """
    if threshold < 0:
        raise ValidationError(f"threshold must be >= 0, got {threshold}")
    x = _x(epoch)
    positive = x >= 0
    changed = positive[1:] != positive[:-1]
    big_enough = np.abs(np.diff(x)) >= threshold
    return int(np.count_nonzero(changed & big_enough))


def _check_power(spec: PowerSpectrum) -> float:
    total = float(np.sum(spec.density))
    if not total > 0:
        raise ComputationError("spectrum has zero total power")
    return total


def mean_frequency(spec: PowerSpectrum) -> float:
    """Spectral centroid ``sum(f * P) / sum(P)`` in Hz."""
    total = _check_power(spec)
    return float(np.sum(spec.freqs * spec.density) / total)


def median_frequency(spec: PowerSpectrum) -> float:
    """Half-power frequency in Hz.

    Each bin's power is spread uniformly over ``[f - df/2, f + df/2]``; the
    result is where the cumulative power first reaches half the total,
    linearly interpolated within that bin and clipped to the grid range.
    """
    total = _check_power(spec)
    p = spec.density
    cum = np.cumsum(p)
    half = 0.5 * total
    k = int(np.searchsorted(cum, half, side="left"))
    k = min(k, p.size - 1)
    below = cum[k - 1] if k > 0 else 0.0
    frac = (half - below) / p[k] if p[k] > 0 else 0.0
    f = spec.freqs[k] - 0.5 * spec.df + frac * spec.df
    return float(np.clip(f, spec.freqs[0], spec.freqs[-1]))


def feature_table(
    series: EpochSeries,
    config: SpectralConfig | None = None,
    zc_threshold: float = DEFAULT_ZC_THRESHOLD_MV,
) -> FeatureTable:
    """RMS, ARV, ZC, MNF and MDF for every epoch of ``series``."""
    if len(series) == 0:
        raise ValidationError("empty epoch series")
    config = config or SpectralConfig()
    rows = []
    for i, e in enumerate(series):
        spec = periodogram(e, window=config.window, pad_pow2=config.pad_pow2)
        try:
            mnf, mdf = mean_frequency(spec), median_frequency(spec)
        except ComputationError as exc:
            raise ComputationError(f"{series.label}: epoch {i} at t={e.start_time:g} s: {exc}") from None
        rows.append((rms(e), arv(e), zero_crossings(e, zc_threshold), mnf, mdf))
    cols = list(zip(*rows))
    return FeatureTable(series.label, series.start_times, *cols)


@dataclass(frozen=True)
class TrendResult:
    """Least-squares line through a feature column.

    ``degenerate`` is set when the values are constant and Pearson r is
    undefined; ``r`` is then reported as 0.
    """

    slope: float
    intercept: float
    r: float
    degenerate: bool = False


def fatigue_trend(times, values) -> TrendResult:
    t = np.asarray(times, dtype=np.float64)
    y = np.asarray(values, dtype=np.float64)
    if t.shape != y.shape or t.ndim != 1:
        raise ValidationError("times and values must be 1-D arrays of equal length")
    if t.size < 2 or np.ptp(t) == 0:
        raise ValidationError("trend needs at least two distinct time points")
    tc = t - t.mean()
    yc = y - y.mean()
    sxx = float(tc @ tc)
    syy = float(yc @ yc)
    sxy = float(tc @ yc)
    slope = sxy / sxx
    intercept = float(y.mean() - slope * t.mean())
    if syy == 0.0:
        return TrendResult(0.0, float(y.mean()), 0.0, degenerate=True)
    r = float(np.clip(sxy / np.sqrt(sxx * syy), -1.0, 1.0))
    return TrendResult(slope, intercept, r)
