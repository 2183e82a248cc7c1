"""Integrated EMG and coactivation index over a time-normalised cycle."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .core import ComputationError, Envelope, ValidationError

DEFAULT_POINTS = 101


@dataclass(frozen=True)
class CycleEnvelope:
    """Envelope resampled onto a uniform 0-100 % cycle grid."""

    label: str
    percent: np.ndarray
    values: np.ndarray
    units: str = "mV"

    def __post_init__(self):
        percent = np.array(self.percent, dtype=np.float64)
        values = np.array(self.values, dtype=np.float64)
        if percent.shape != values.shape or percent.ndim != 1:
            raise ValidationError("grid and values must be 1-D and of equal length")
        percent.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "percent", percent)
        object.__setattr__(self, "values", values)


def _trapezoid(y: np.ndarray, x: np.ndarray) -> float:
    return float(np.sum(0.5 * (y[1:] + y[:-1]) * np.diff(x)))


def time_normalize(env: Envelope | np.ndarray, points: int = DEFAULT_POINTS, label: str | None = None) -> CycleEnvelope:
    """Linearly resample an envelope onto ``points`` samples spanning 0-100 %.

    The first and last input samples land exactly on 0 % and 100 %.
    """
    if isinstance(env, Envelope):
        values, units, label = env.samples, env.units, label if label is not None else env.label
    else:
        values, units, label = np.asarray(env, dtype=np.float64), "mV", label or ""
    if values.size < 2:
        raise ValidationError("time normalisation needs an envelope of at least 2 samples")
    if points < 2:
        raise ValidationError(f"need at least 2 grid points, got {points}")
    src = np.linspace(0.0, 100.0, values.size)
    grid = np.linspace(0.0, 100.0, points)
    return CycleEnvelope(label, grid, np.interp(grid, src, values), units)


def integrate_emg(env: CycleEnvelope) -> float:
    """Trapezoidal integral over the percent-of-cycle grid (units x %)."""
    if np.any(env.values < 0):
        raise ValidationError(f"{env.label!r}: iEMG needs a nonnegative envelope")
    return _trapezoid(env.values, env.percent)


@dataclass(frozen=True)
class CoactivationReport:
    labels: tuple[str, ...]
    iemg: tuple[float, ...]
    ci: tuple[float, ...]
    points: int
    units: str

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.labels, self.ci))

    def rows(self):
        for label, i, c in zip(self.labels, self.iemg, self.ci):
            yield {"muscle": label, "iemg": i, "ci": c, "units": self.units, "points": self.points}


def _integrals(envelopes: Mapping[str, CycleEnvelope]) -> dict[str, float]:
    if len(envelopes) < 2:
        raise ValidationError("coactivation needs at least two muscles")
    envs = list(envelopes.values())
    grid = envs[0].percent
    for e in envs[1:]:
        if e.percent.shape != grid.shape or not np.array_equal(e.percent, grid):
            raise ValidationError(f"envelope {e.label!r} is on a different cycle grid")
    return {label: integrate_emg(e) for label, e in envelopes.items()}


def coactivation_index(target: str, envelopes: Mapping[str, CycleEnvelope]) -> float:
    """Share of ``target`` in the summed iEMG of all muscles."""
    iemg = _integrals(envelopes)
    if target not in iemg:
        raise ValidationError(f"unknown muscle {target!r}")
    total = sum(iemg.values())
    if not total > 0:
        raise ComputationError("all envelopes integrate to zero")
    return iemg[target] / total


def coactivation_report(envelopes: Mapping[str, CycleEnvelope]) -> CoactivationReport:
    iemg = _integrals(envelopes)
    total = sum(iemg.values())
    if not total > 0:
        raise ComputationError("all envelopes integrate to zero")
    labels = tuple(iemg)
    units = {e.units for e in envelopes.values()}
    return CoactivationReport(
        labels,
        tuple(iemg[k] for k in labels),
        tuple(iemg[k] / total for k in labels),
        len(next(iter(envelopes.values())).percent),
        units.pop() if len(units) == 1 else "mixed",
    )
