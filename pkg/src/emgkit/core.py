"""Domain data model shared by every processing stage.

All containers are frozen dataclasses holding read-only float64 arrays, so a
constructed object can be passed between threads without copying.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

log = logging.getLogger(__name__)

#: Sampling rate below which a recording cannot represent the full sEMG band.
MIN_RECOMMENDED_FS = 1000.0

UNIT_TO_MV = {"V": 1000.0, "mV": 1.0, "uV": 1e-3, "µV": 1e-3}


class EmgError(ValueError):
    """Base class for every precondition or computation failure in emgkit."""


class ValidationError(EmgError):
    """Invalid input: violated invariant, bad configuration, unusable file."""


class ComputationError(EmgError):
    """Input was well formed but the requested quantity is undefined."""


def _frozen_array(values, name: str = "samples") -> np.ndarray:
    arr = np.array(values, dtype=np.float64, copy=True)
    if arr.ndim != 1:
        raise ValidationError(f"{name} must be one-dimensional, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


def to_mv(values, units: str = "mV") -> np.ndarray:
    """Convert raw samples in ``units`` (V, mV or uV) to millivolts."""
    try:
        factor = UNIT_TO_MV[units]
    except KeyError:
        raise ValidationError(f"unknown units {units!r}; expected one of V, mV, uV") from None
    return np.asarray(values, dtype=np.float64) * factor


@dataclass(frozen=True)
class ChannelSignal:
    """One sampled channel in mV."""

    label: str
    samples: np.ndarray
    fs: float

    def __post_init__(self):
        samples = _frozen_array(self.samples)
        if samples.size < 1:
            raise ValidationError(f"channel {self.label!r}: no samples")
        if not np.all(np.isfinite(samples)):
            bad = int(np.flatnonzero(~np.isfinite(samples))[0])
            raise ValidationError(f"channel {self.label!r}: non-finite sample at index {bad}")
        fs = float(self.fs)
        if not np.isfinite(fs) or fs <= 0:
            raise ValidationError(f"sampling rate must be positive, got {self.fs}")
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "fs", fs)

    def __len__(self) -> int:
        return self.samples.size

    @property
    def duration(self) -> float:
        return self.samples.size / self.fs

    def with_samples(self, samples) -> ChannelSignal:
        return ChannelSignal(self.label, samples, self.fs)


@dataclass(frozen=True)
class Recording:
    """A multi-channel session; all channels share length and fs."""

    channels: tuple[ChannelSignal, ...]
    fs: float
    meta: Mapping[str, str] = field(default_factory=dict)
    warnings: tuple[str, ...] = ()

    def __post_init__(self):
        channels = tuple(self.channels)
        if not channels:
            raise ValidationError("recording needs at least one channel")
        n = len(channels[0])
        for ch in channels:
            if len(ch) != n:
                raise ValidationError(
                    f"length mismatch: {channels[0].label!r} has {n} samples, "
                    f"{ch.label!r} has {len(ch)}"
                )
            if ch.fs != float(self.fs):
                raise ValidationError(f"channel {ch.label!r} fs {ch.fs} != recording fs {self.fs}")
        labels = [ch.label for ch in channels]
        if len(set(labels)) != len(labels):
            raise ValidationError(f"duplicate channel labels: {labels}")
        object.__setattr__(self, "channels", channels)
        object.__setattr__(self, "fs", float(self.fs))
        object.__setattr__(self, "meta", dict(self.meta))
        object.__setattr__(self, "warnings", tuple(self.warnings))

    @property
    def labels(self) -> list[str]:
        return [ch.label for ch in self.channels]

    @property
    def n_samples(self) -> int:
        return len(self.channels[0])

    def channel(self, label: str) -> ChannelSignal:
        for ch in self.channels:
            if ch.label == label:
                return ch
        raise KeyError(label)


def make_recording(
    channels: Sequence[tuple[str, Sequence[float]]] | Mapping[str, Sequence[float]],
    fs: float,
    meta: Mapping[str, str] | None = None,
    units: str = "mV",
) -> Recording:
    """Build a validated :class:`Recording` from ``(label, samples)`` pairs.

    Samples are converted from ``units`` to mV. A sampling rate below 1 kHz is
    accepted but recorded in ``Recording.warnings`` because sEMG content
    extends to about 500 Hz.

    Raises:
        ValidationError: empty channel list, mismatched lengths, non-finite
            samples or non-positive ``fs``.
    """
    if isinstance(channels, Mapping):
        channels = list(channels.items())
    if not channels:
        raise ValidationError("recording needs at least one channel")
    fs = float(fs)
    if not np.isfinite(fs) or fs <= 0:
        raise ValidationError(f"sampling rate must be positive, got {fs}")
    built = tuple(ChannelSignal(str(label), to_mv(samples, units), fs) for label, samples in channels)
    warnings = []
    if fs < MIN_RECOMMENDED_FS:
        msg = f"fs={fs:g} Hz is below {MIN_RECOMMENDED_FS:g} Hz; content up to 500 Hz will alias"
        log.warning(msg)
        warnings.append(msg)
    return Recording(built, fs, dict(meta or {}), tuple(warnings))


@dataclass(frozen=True)
class Epoch:
    start_index: int
    samples: np.ndarray
    fs: float

    def __post_init__(self):
        samples = _frozen_array(self.samples)
        if samples.size < 1:
            raise ValidationError("empty epoch")
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "fs", float(self.fs))

    def __len__(self) -> int:
        return self.samples.size

    @property
    def start_time(self) -> float:
        return self.start_index / self.fs


@dataclass(frozen=True)
class EpochSeries:
    """Equal-length windows cut from one channel."""

    label: str
    epochs: tuple[Epoch, ...]
    fs: float
    window_samples: int
    step_samples: int

    def __post_init__(self):
        epochs = tuple(self.epochs)
        for e in epochs:
            if len(e) != self.window_samples:
                raise ValidationError(
                    f"epoch at {e.start_index} has {len(e)} samples, expected {self.window_samples}"
                )
        object.__setattr__(self, "epochs", epochs)

    def __len__(self) -> int:
        return len(self.epochs)

    def __iter__(self):
        return iter(self.epochs)

    def __getitem__(self, i) -> Epoch:
        return self.epochs[i]

    @property
    def start_times(self) -> np.ndarray:
        return np.array([e.start_time for e in self.epochs])


@dataclass(frozen=True)
class PowerSpectrum:
    """One-sided PSD in mV^2/Hz on a uniform grid from 0 to fs/2."""

    freqs: np.ndarray
    density: np.ndarray
    df: float

    def __post_init__(self):
        freqs = _frozen_array(self.freqs, "freqs")
        density = _frozen_array(self.density, "density")
        if freqs.shape != density.shape:
            raise ValidationError("freqs and density differ in length")
        if freqs.size < 2:
            raise ValidationError("spectrum needs at least two bins")
        if freqs[0] != 0.0:
            raise ValidationError("frequency grid must start at 0 Hz")
        if np.any(np.diff(freqs) <= 0):
            raise ValidationError("frequency grid must be ascending")
        if np.any(density < 0) or not np.all(np.isfinite(density)):
            raise ValidationError("density must be finite and nonnegative")
        object.__setattr__(self, "freqs", freqs)
        object.__setattr__(self, "density", density)
        object.__setattr__(self, "df", float(self.df))

    @property
    def total_power(self) -> float:
        """Riemann sum of density times bin width (mV^2)."""
        return float(np.sum(self.density) * self.df)


ENVELOPE_KINDS = ("moving-average", "rms")


@dataclass(frozen=True)
class Envelope:
    samples: np.ndarray
    fs: float
    kind: str
    units: str = "mV"
    label: str = ""

    def __post_init__(self):
        samples = _frozen_array(self.samples)
        if self.kind not in ENVELOPE_KINDS:
            raise ValidationError(f"envelope kind must be one of {ENVELOPE_KINDS}, got {self.kind!r}")
        if np.any(samples < 0) or not np.all(np.isfinite(samples)):
            raise ValidationError("envelope samples must be finite and nonnegative")
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "fs", float(self.fs))

    def __len__(self) -> int:
        return self.samples.size


FEATURE_COLUMNS = ("rms", "arv", "zc", "mnf", "mdf")


@dataclass(frozen=True)
class FeatureTable:
    """Per-epoch features for one channel.

    Columns: ``rms`` and ``arv`` in mV, ``zc`` as a count, ``mnf`` and
    ``mdf`` in Hz.
    """

    label: str
    start_times: np.ndarray
    rms: np.ndarray
    arv: np.ndarray
    zc: np.ndarray
    mnf: np.ndarray
    mdf: np.ndarray

    def __post_init__(self):
        n = len(self.start_times)
        for name in ("start_times",) + FEATURE_COLUMNS:
            col = np.array(getattr(self, name), dtype=np.int64 if name == "zc" else np.float64)
            if col.shape != (n,):
                raise ValidationError(f"column {name} has {col.shape[0]} rows, expected {n}")
            col.setflags(write=False)
            object.__setattr__(self, name, col)
        if np.any(self.zc < 0):
            raise ValidationError("zero-crossing counts must be nonnegative")

    def __len__(self) -> int:
        return len(self.start_times)

    def column(self, name: str) -> np.ndarray:
        if name not in FEATURE_COLUMNS:
            raise KeyError(name)
        return getattr(self, name)


@dataclass(frozen=True)
class TestResult:
    """Outcome of a statistical test.

    ``reject_null`` is None when the test produced neither a p-value nor a
    critical value to compare against.
    """

    __test__ = False  # keep pytest from collecting this as a test class

    test: str
    statistic: float
    n: int
    alpha: float
    p_value: float | None = None
    critical: tuple[float, ...] | None = None
    reject_null: bool | None = None
    warnings: tuple[str, ...] = ()

    def __post_init__(self):
        if self.p_value is not None and not 0.0 <= self.p_value <= 1.0:
            raise ValidationError(f"p-value {self.p_value} outside [0, 1]")
        decided = self.p_value is not None or self.critical is not None
        if decided != (self.reject_null is not None):
            raise ValidationError("reject_null must be set exactly when a p-value or critical value applies")
