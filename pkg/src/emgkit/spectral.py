"""Periodogram and Welch power spectral density estimates.

Densities are one-sided with interior bins doubled and normalised by the
window power, so that ``sum(density) * df`` equals the window-weighted mean
square of the input::

    sum(density) * df == sum(w**2 * x**2) / sum(w**2)

For a rectangular window this is exactly the mean square of the segment.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ChannelSignal, Epoch, PowerSpectrum, ValidationError
from .epoching import window_starts

WINDOWS = ("rectangular", "hann")


@dataclass(frozen=True)
class SpectralConfig:
    """Settings shared by per-epoch periodograms and Welch averaging.

    ``pad_pow2`` zero-pads each segment to the next power of two; this only
    densifies the frequency grid and leaves integrated power unchanged.
    """

    window: str = "hann"
    pad_pow2: bool = False

    def __post_init__(self):
        if self.window not in WINDOWS:
            raise ValidationError(f"window must be one of {WINDOWS}, got {self.window!r}")


def make_window(kind: str, n: int) -> np.ndarray:
    if kind == "rectangular":
        return np.ones(n)
    if kind == "hann":
        # periodic Hann: the DFT-even form used for spectral analysis
        return 0.5 - 0.5 * np.cos(2.0 * np.pi * np.arange(n) / n)
    raise ValidationError(f"window must be one of {WINDOWS}, got {kind!r}")


def _nfft(n: int, pad_pow2: bool) -> int:
    if pad_pow2:
        return 1 << (n - 1).bit_length()
    # odd lengths get one zero so that the grid ends exactly at fs/2
    return n + (n % 2)


def _one_sided_density(segments: np.ndarray, fs: float, window: np.ndarray, nfft: int) -> np.ndarray:
    """Modified periodograms of the rows of ``segments``."""
    spec = np.fft.rfft(segments * window, n=nfft, axis=-1)
    p = (spec.real**2 + spec.imag**2) / (fs * np.sum(window**2))
    p[..., 1:-1] *= 2.0  # nfft is even: last bin is Nyquist, not doubled
    return p


def periodogram(
    epoch: Epoch | ChannelSignal | np.ndarray,
    window: str = "hann",
    fs: float | None = None,
    pad_pow2: bool = False,
) -> PowerSpectrum:
    """One-sided periodogram of a single segment.

    Accepts an :class:`Epoch`, a :class:`ChannelSignal`, or a bare array
    together with ``fs``.
    """
    x, fs = _samples_and_fs(epoch, fs)
    if x.size < 2:
        raise ValidationError("periodogram needs at least 2 samples")
    nfft = _nfft(x.size, pad_pow2)
    w = make_window(window, x.size)
    density = _one_sided_density(x, fs, w, nfft)
    return _spectrum(density, fs, nfft)


def welch_psd(
    signal: ChannelSignal,
    seg_len: int | None = None,
    overlap: float = 0.5,
    window: str = "hann",
    pad_pow2: bool = False,
) -> PowerSpectrum:
    """Average of modified periodograms over overlapping segments.

    Segments follow the epoching layout: ``floor((L - seg_len) / step) + 1``
    segments with ``step = round(seg_len * (1 - overlap))``; the leftover
    tail is ignored. ``seg_len`` defaults to 500 ms worth of samples.
    """
    x = signal.samples
    if seg_len is None:
        seg_len = int(round(0.5 * signal.fs))
    seg_len = int(seg_len)
    if seg_len < 2:
        raise ValidationError(f"segment length must be >= 2, got {seg_len}")
    if seg_len > x.size:
        raise ValidationError(f"segment length {seg_len} exceeds signal length {x.size}")
    if not 0.0 <= overlap < 1.0:
        raise ValidationError(f"overlap must be in [0, 1), got {overlap}")
    step = max(1, int(round(seg_len * (1.0 - overlap))))
    starts = window_starts(x.size, seg_len, step)
    segments = x[starts[:, None] + np.arange(seg_len)]
    nfft = _nfft(seg_len, pad_pow2)
    w = make_window(window, seg_len)
    density = _one_sided_density(segments, signal.fs, w, nfft).mean(axis=0)
    return _spectrum(density, signal.fs, nfft)


def segment_count(n: int, seg_len: int, overlap: float) -> int:
    step = max(1, int(round(seg_len * (1.0 - overlap))))
    return len(window_starts(n, seg_len, step))


def _spectrum(density: np.ndarray, fs: float, nfft: int) -> PowerSpectrum:
    freqs = np.arange(nfft // 2 + 1) * (fs / nfft)
    freqs[-1] = fs / 2.0
    return PowerSpectrum(freqs, density, fs / nfft)


def _samples_and_fs(obj, fs):
    if isinstance(obj, (Epoch, ChannelSignal)):
        return obj.samples, obj.fs
    if fs is None:
        raise ValidationError("fs is required when passing a bare array")
    return np.asarray(obj, dtype=np.float64), float(fs)
