"""Offset removal, band-pass/notch filtering, rectification and envelopes."""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy import signal as sps

from .core import ChannelSignal, Envelope, ValidationError

log = logging.getLogger(__name__)

DEFAULT_BAND = (15.0, 400.0)
DEFAULT_ORDER = 4
DEFAULT_LINE_HZ = 60.0
DEFAULT_HARMONICS = 3
DEFAULT_Q = 30.0


@dataclass(frozen=True)
class FilterSpec:
    """A cascade of second-order sections.

    ``order`` is the total number of poles (8 for a 4th-order band-pass,
    2 per notch). ``band`` is ``(low, high)`` for band-pass and
    ``(center, Q)`` for a single notch. ``sections`` has shape ``(n, 6)``
    laid out as ``b0 b1 b2 1 a1 a2``.
    """

    kind: str
    order: int
    band: tuple[float, float]
    fs: float
    sections: np.ndarray

    def __post_init__(self):
        sos = np.array(self.sections, dtype=np.float64, copy=True)
        if sos.ndim != 2 or sos.shape[1] != 6:
            raise ValidationError(f"sections must have shape (n, 6), got {sos.shape}")
        if not np.allclose(sos[:, 3], 1.0):
            raise ValidationError("leading denominator coefficient of every section must be 1")
        if self.order <= 0 or self.order % 2:
            raise ValidationError(f"order must be a positive even integer, got {self.order}")
        sos.setflags(write=False)
        object.__setattr__(self, "sections", sos)

    def pole_magnitudes(self) -> np.ndarray:
        return np.concatenate([np.abs(np.roots(sec[3:])) for sec in self.sections])

    def is_stable(self) -> bool:
        return bool(np.all(self.pole_magnitudes() < 1.0))

    def response(self, freqs) -> np.ndarray:
        """Complex frequency response of the cascade at ``freqs`` (Hz)."""
        freqs = np.atleast_1d(np.asarray(freqs, dtype=np.float64))
        _, h = sps.sosfreqz(np.array(self.sections), worN=freqs, fs=self.fs)
        return h

    def magnitude_db(self, freqs) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return 20.0 * np.log10(np.abs(self.response(freqs)))


def cascade(*specs: FilterSpec) -> FilterSpec:
    """Concatenate several designs sharing one fs into a single cascade."""
    if not specs:
        raise ValidationError("nothing to cascade")
    fs = specs[0].fs
    if any(s.fs != fs for s in specs):
        raise ValidationError("cannot cascade filters designed for different fs")
    kinds = {s.kind for s in specs}
    kind = kinds.pop() if len(kinds) == 1 else "cascade"
    band = specs[0].band if len(specs) == 1 else (float("nan"), float("nan"))
    return FilterSpec(
        kind, sum(s.order for s in specs), band, fs, np.vstack([s.sections for s in specs])
    )


def remove_offset(signal: ChannelSignal) -> ChannelSignal:
    """Subtract the channel mean.

    A second correction pass removes the rounding residue of the first mean,
    so a constant input maps to exact zeros.
    """
    x = signal.samples
    centered = x - x.mean()
    centered = centered - centered.mean()
    return signal.with_samples(centered)


def design_butterworth_bandpass(
    order: int = DEFAULT_ORDER,
    low: float = DEFAULT_BAND[0],
    high: float = DEFAULT_BAND[1],
    fs: float = 2000.0,
) -> FilterSpec:
    """Butterworth band-pass as second-order sections.

    Bilinear transform with both edges prewarped, so the digital response
    is exactly -3 dB at ``low`` and ``high``. A prototype of ``order``
    yields ``2 * order`` poles.
    """
    if order < 1:
        raise ValidationError(f"filter order must be >= 1, got {order}")
    if fs <= 0:
        raise ValidationError(f"sampling rate must be positive, got {fs}")
    if not 0.0 < low < high:
        raise ValidationError(f"band edges must satisfy 0 < low < high, got ({low}, {high})")
    if high >= fs / 2.0:
        raise ValidationError(f"fs={fs:g} Hz too low for upper edge {high:g} Hz (need fs > {2 * high:g})")
    sos = sps.butter(order, [low, high], btype="bandpass", output="sos", fs=fs)
    return FilterSpec("bandpass", 2 * order, (float(low), float(high)), float(fs), sos)


def design_notch(center: float, q: float, fs: float) -> FilterSpec:
    """Second-order IIR notch with an exact zero at ``center``."""
    if not 0.0 < center < fs / 2.0:
        raise ValidationError(f"notch center {center:g} Hz outside (0, fs/2={fs / 2:g})")
    if q <= 0:
        raise ValidationError(f"quality factor must be positive, got {q}")
    b, a = sps.iirnotch(center, q, fs=fs)
    return FilterSpec("notch", 2, (float(center), float(q)), float(fs), np.concatenate([b, a])[None, :])


def design_powerline_notches(
    fs: float, f0: float = DEFAULT_LINE_HZ, harmonics: int = DEFAULT_HARMONICS, q: float = DEFAULT_Q
) -> tuple[FilterSpec, list[str]]:
    """Notches at ``k * f0`` for k = 1..harmonics.

    Harmonics at or above Nyquist are skipped; the returned list holds one
    warning per skipped harmonic.
    """
    if f0 >= fs / 2.0:
        raise ValidationError(f"line frequency {f0:g} Hz is not below Nyquist ({fs / 2:g} Hz)")
    if f0 <= 0:
        raise ValidationError(f"line frequency must be positive, got {f0}")
    if harmonics < 1:
        raise ValidationError(f"need at least one harmonic, got {harmonics}")
    specs, warnings = [], []
    for k in range(1, harmonics + 1):
        center = k * f0
        if center >= fs / 2.0:
            msg = f"notch harmonic {k} at {center:g} Hz skipped (Nyquist {fs / 2:g} Hz)"
            log.warning(msg)
            warnings.append(msg)
            continue
        specs.append(design_notch(center, q, fs))
    return cascade(*specs), warnings


def min_zero_phase_length(spec: FilterSpec) -> int:
    """Shortest signal accepted by zero-phase filtering (pad length + 1)."""
    return 3 * spec.order + 1


def apply_filter(spec: FilterSpec, signal: ChannelSignal, zero_phase: bool = True) -> ChannelSignal:
    """Run ``signal`` through the cascade.

    With ``zero_phase`` the cascade runs forward then backward over an
    odd-reflected extension of ``3 * spec.order`` samples at each end,
    giving squared magnitude and no group delay.
    """
    if spec.fs != signal.fs:
        raise ValidationError(f"filter designed for fs={spec.fs:g}, signal has fs={signal.fs:g}")
    x = signal.samples
    sos = np.array(spec.sections)  # scipy's kernels need a writable buffer
    if zero_phase:
        padlen = 3 * spec.order
        if x.size <= padlen:
            raise ValidationError(
                f"signal of {x.size} samples too short for zero-phase filtering (need > {padlen})"
            )
        y = sps.sosfiltfilt(sos, x, padtype="odd", padlen=padlen)
    else:
        y = sps.sosfilt(sos, x)
    return signal.with_samples(y)


def bandpass(
    signal: ChannelSignal,
    low: float = DEFAULT_BAND[0],
    high: float = DEFAULT_BAND[1],
    order: int = DEFAULT_ORDER,
    zero_phase: bool = True,
) -> ChannelSignal:
    spec = design_butterworth_bandpass(order, low, high, signal.fs)
    return apply_filter(spec, signal, zero_phase)


def notch_powerline(
    signal: ChannelSignal,
    f0: float = DEFAULT_LINE_HZ,
    harmonics: int = DEFAULT_HARMONICS,
    q: float = DEFAULT_Q,
    zero_phase: bool = True,
) -> ChannelSignal:
    """Remove mains interference at ``f0`` and its harmonics below Nyquist."""
    spec, _ = design_powerline_notches(signal.fs, f0, harmonics, q)
    return apply_filter(spec, signal, zero_phase)


def rectify(signal: ChannelSignal) -> ChannelSignal:
    return signal.with_samples(np.abs(signal.samples))


def _check_window(window: int, n: int) -> int:
    if int(window) != window or not 1 <= window <= n:
        raise ValidationError(f"window must be an integer in [1, {n}], got {window}")
    return int(window)


def _causal_mean(x: np.ndarray, window: int) -> np.ndarray:
    # direct summation (np.convolve) rather than cumsum differences keeps
    # constant inputs exact and long records free of drift
    sums = np.convolve(x, np.ones(window))[: x.size]
    counts = np.minimum(np.arange(1, x.size + 1), window)
    return sums / counts


def moving_average_envelope(signal: ChannelSignal, window: int) -> Envelope:
    """Causal moving average of a rectified signal.

    ``out[n]`` is the mean of ``x[n - window + 1 .. n]``. The first
    ``window - 1`` outputs average the available prefix only, so the
    envelope keeps the input length.

    Raises:
        ValidationError: if the input has negative samples (not rectified)
            or the window is outside ``[1, len(signal)]``.
    """
    x = signal.samples
    window = _check_window(window, x.size)
    if np.any(x < 0):
        raise ValidationError("moving-average envelope expects a rectified (nonnegative) signal")
    if window == 1:
        return Envelope(x, signal.fs, "moving-average", label=signal.label)
    return Envelope(_causal_mean(x, window), signal.fs, "moving-average", label=signal.label)


def rms_envelope(signal: ChannelSignal, window: int) -> Envelope:
    """Causal sliding-window RMS; rectification is not required."""
    x = signal.samples
    window = _check_window(window, x.size)
    ms = np.maximum(_causal_mean(x * x, window), 0.0)
    return Envelope(np.sqrt(ms), signal.fs, "rms", label=signal.label)


def envelope(signal: ChannelSignal, kind: str, window: int) -> Envelope:
    """Rectify then smooth with the chosen method."""
    if kind == "moving-average":
        return moving_average_envelope(rectify(signal), window)
    if kind == "rms":
        return rms_envelope(signal, window)
    raise ValidationError(f"unknown envelope kind {kind!r}")
