"""MVC reference extraction and %MVC rescaling."""
from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .core import ChannelSignal, ComputationError, Envelope, ValidationError
from .preprocess import envelope

log = logging.getLogger(__name__)

DEFAULT_MVC_WINDOW_MS = 250.0
EXPECTED_TRIALS = 3
TRIAL_SECONDS = (4.0, 6.0)


@dataclass(frozen=True)
class MvcReference:
    label: str
    mvc_value: float
    trial_peaks: tuple[float, ...]
    smoothing_kind: str = "moving-average"
    smoothing_window: int = 0
    warnings: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        peaks = tuple(float(p) for p in self.trial_peaks)
        if not peaks:
            raise ValidationError("MVC reference needs at least one trial peak")
        if not self.mvc_value > 0:
            raise ValidationError(f"non-positive MVC for {self.label!r}: {self.mvc_value}")
        object.__setattr__(self, "trial_peaks", peaks)
        object.__setattr__(self, "mvc_value", float(self.mvc_value))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["trial_peaks"] = list(self.trial_peaks)
        d["warnings"] = list(self.warnings)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> MvcReference:
        return cls(
            label=d["label"],
            mvc_value=d["mvc_value"],
            trial_peaks=tuple(d["trial_peaks"]),
            smoothing_kind=d.get("smoothing_kind", "moving-average"),
            smoothing_window=int(d.get("smoothing_window", 0)),
            warnings=tuple(d.get("warnings", ())),
        )


def mvc_from_trials(
    trials: Sequence[ChannelSignal],
    window: int | None = None,
    kind: str = "moving-average",
    label: str | None = None,
) -> MvcReference:
    """Average of per-trial envelope peaks.

    Each trial is rectified and smoothed (``window`` samples, default
    250 ms) and its envelope maximum taken; the reference is the mean of
    those maxima. Trial counts other than three and trials outside 4-6 s
    are accepted with a warning.
    """
    trials = list(trials)
    if not trials:
        raise ValidationError("no MVC trials given")
    fs = trials[0].fs
    if any(t.fs != fs for t in trials):
        raise ValidationError("MVC trials have different sampling rates")
    if window is None:
        window = max(1, int(round(DEFAULT_MVC_WINDOW_MS * fs / 1000.0)))
    label = label if label is not None else trials[0].label

    warnings = []
    if len(trials) != EXPECTED_TRIALS:
        warnings.append(f"{label}: {len(trials)} MVC trials (protocol calls for {EXPECTED_TRIALS})")
    peaks = []
    for i, trial in enumerate(trials):
        lo, hi = TRIAL_SECONDS
        if not lo <= trial.duration <= hi:
            warnings.append(f"{label}: trial {i} lasts {trial.duration:g} s (expected {lo:g}-{hi:g} s)")
        w = min(window, len(trial))
        peak = float(np.max(envelope(trial, kind, w).samples))
        if not peak > 0:
            raise ComputationError(f"non-positive MVC: trial {i} of {label!r} has zero envelope")
        peaks.append(peak)
    for msg in warnings:
        log.warning(msg)
    return MvcReference(label, float(np.mean(peaks)), tuple(peaks), kind, int(window), tuple(warnings))


@dataclass(frozen=True)
class NormalizedEnvelope:
    """An envelope in %MVC plus a flag for samples above 100 %."""

    envelope: Envelope
    over_mvc: bool
    warnings: tuple[str, ...] = ()

    @property
    def samples(self) -> np.ndarray:
        return self.envelope.samples


def normalize_to_mvc(env: Envelope, ref: MvcReference) -> NormalizedEnvelope:
    """Rescale to ``100 * env / mvc``. Values above 100 % are kept and flagged."""
    if not ref.mvc_value > 0:
        raise ValidationError(f"non-positive MVC: {ref.mvc_value}")
    warnings = []
    if env.kind != ref.smoothing_kind:
        msg = f"envelope kind {env.kind!r} differs from MVC smoothing {ref.smoothing_kind!r}"
        log.warning(msg)
        warnings.append(msg)
    # ratio first: an envelope equal to the reference maps to exactly 100
    pct = (env.samples / ref.mvc_value) * 100.0
    out = Envelope(pct, env.fs, env.kind, units="%MVC", label=env.label)
    return NormalizedEnvelope(out, bool(np.any(pct > 100.0)), tuple(warnings))
