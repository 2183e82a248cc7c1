"""Fixed-length overlapping analysis windows."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ChannelSignal, Epoch, EpochSeries, ValidationError

DEFAULT_WINDOW_MS = 500.0
DEFAULT_OVERLAP = 0.5


@dataclass(frozen=True)
class EpochPlan:
    window_ms: float = DEFAULT_WINDOW_MS
    overlap_fraction: float = DEFAULT_OVERLAP

    def __post_init__(self):
        if not self.window_ms > 0:
            raise ValidationError(f"window_ms must be positive, got {self.window_ms}")
        if not 0.0 <= self.overlap_fraction < 1.0:
            raise ValidationError(f"overlap must be in [0, 1), got {self.overlap_fraction}")

    def window_samples(self, fs: float) -> int:
        w = int(round(self.window_ms * fs / 1000.0))
        if w < 2:
            raise ValidationError(f"{self.window_ms} ms at {fs:g} Hz gives {w} samples; need >= 2")
        return w

    def step_samples(self, fs: float) -> int:
        step = int(round(self.window_samples(fs) * (1.0 - self.overlap_fraction)))
        if step < 1:
            raise ValidationError(f"overlap {self.overlap_fraction} leaves a step of {step} samples")
        return step

    def validate(self, fs: float) -> None:
        self.step_samples(fs)


def window_starts(n: int, window: int, step: int) -> np.ndarray:
    """Start indices of every full window; the unfilled tail is dropped."""
    if n < window:
        raise ValidationError(f"signal of {n} samples is shorter than one window ({window})")
    count = (n - window) // step + 1
    return np.arange(count) * step


def segment(signal: ChannelSignal, plan: EpochPlan | None = None) -> EpochSeries:
    """Cut ``signal`` into ``floor((L - W) / step) + 1`` full epochs."""
    plan = plan or EpochPlan()
    w = plan.window_samples(signal.fs)
    step = plan.step_samples(signal.fs)
    x = signal.samples
    epochs = tuple(Epoch(int(s), x[s : s + w], signal.fs) for s in window_starts(x.size, w, step))
    return EpochSeries(signal.label, epochs, signal.fs, w, step)


def select_active_segment(signal: ChannelSignal, t0: float, t1: float) -> ChannelSignal:
    """Samples in ``[round(t0 * fs), round(t1 * fs))``."""
    if not 0.0 <= t0 < t1:
        raise ValidationError(f"segment bounds must satisfy 0 <= t0 < t1, got ({t0}, {t1})")
    if t1 > signal.duration + 0.5 / signal.fs:
        raise ValidationError(f"segment end {t1} s beyond signal duration {signal.duration} s")
    i0 = int(round(t0 * signal.fs))
    i1 = min(int(round(t1 * signal.fs)), len(signal))
    if i1 <= i0:
        raise ValidationError(f"segment ({t0}, {t1}) s contains no samples at {signal.fs:g} Hz")
    return signal.with_samples(signal.samples[i0:i1])
