"""Pipeline configuration: INI file in, validated dataclass out.

Every default reproduces the standard sEMG chain: 4th-order 15-400 Hz
Butterworth, 60 Hz notch with 3 harmonics, 500 ms epochs at 50 % overlap.
An empty file (or no file) therefore runs that chain unchanged.

Example::

    [filter]
    low = 20
    line_hz = 50

    [epoch]
    window_ms = 250

    [mvc]
    biceps = 1.35
    triceps = mvc/triceps_1.csv; mvc/triceps_2.csv; mvc/triceps_3.csv
"""
from __future__ import annotations

import configparser
import json
from dataclasses import dataclass, field
from pathlib import Path

from ..core import ChannelSignal, ValidationError
from ..epoching import EpochPlan
from ..normalization import MvcReference
from ..preprocess import design_butterworth_bandpass, design_powerline_notches
from ..spectral import SpectralConfig
from ..stats import ROUTES
from .io import ingest_csv


@dataclass
class FilterSettings:
    low: float = 15.0
    high: float = 400.0
    order: int = 4
    zero_phase: bool = True
    notch: bool = True
    line_hz: float = 60.0
    harmonics: int = 3
    q: float = 30.0


@dataclass
class SmoothingSettings:
    kind: str = "moving-average"
    window_ms: float = 250.0


@dataclass
class StatsSettings:
    alpha: float = 0.05
    route: str = "auto"
    bins: int = 10


@dataclass
class PipelineConfig:
    filter: FilterSettings = field(default_factory=FilterSettings)
    epoch: EpochPlan = field(default_factory=EpochPlan)
    spectral: SpectralConfig = field(default_factory=SpectralConfig)
    zc_threshold: float = 0.01
    smoothing: SmoothingSettings = field(default_factory=SmoothingSettings)
    segment: tuple[float, float] | None = None
    mvc_values: dict[str, float] = field(default_factory=dict)
    mvc_trials: dict[str, list[Path]] = field(default_factory=dict)
    mvc_session: Path | None = None
    cycle_points: int = 101
    stats: StatsSettings = field(default_factory=StatsSettings)
    out_dir: Path = Path("out")
    # filled by validate(): trial recordings and saved references, read once up front
    mvc_trial_signals: dict[str, list[ChannelSignal]] = field(default_factory=dict, repr=False)
    mvc_session_refs: dict[str, MvcReference] = field(default_factory=dict, repr=False)

    def validate(self, fs: float, n_samples: int) -> None:
        """Check every stage's preconditions against a recording's shape."""
        f = self.filter
        if f.order < 1:
            raise ValidationError(f"filter order must be >= 1, got {f.order}")
        specs = [design_butterworth_bandpass(f.order, f.low, f.high, fs)]
        if f.notch:
            notch, _ = design_powerline_notches(fs, f.line_hz, f.harmonics, f.q)
            specs.append(notch)
        if f.zero_phase:
            for spec in specs:
                if n_samples <= 3 * spec.order:
                    raise ValidationError(
                        f"recording of {n_samples} samples too short for zero-phase {spec.kind} filtering"
                    )
        w = self.epoch.window_samples(fs)
        self.epoch.step_samples(fs)
        active = n_samples
        if self.segment is not None:
            t0, t1 = self.segment
            duration = n_samples / fs
            if not 0.0 <= t0 < t1 <= duration + 0.5 / fs:
                raise ValidationError(f"segment ({t0}, {t1}) s outside recording of {duration:g} s")
            active = min(int(round(t1 * fs)), n_samples) - int(round(t0 * fs))
        if active < w:
            raise ValidationError(f"active segment of {active} samples shorter than one epoch ({w})")
        if self.smoothing.kind not in ("moving-average", "rms"):
            raise ValidationError(f"smoothing kind must be moving-average or rms, got {self.smoothing.kind!r}")
        if self.smoothing_window(fs) > active:
            raise ValidationError("smoothing window longer than the active segment")
        if self.zc_threshold < 0:
            raise ValidationError(f"zc threshold must be >= 0, got {self.zc_threshold}")
        if self.cycle_points < 2:
            raise ValidationError(f"cycle points must be >= 2, got {self.cycle_points}")
        if not 0.0 < self.stats.alpha < 1.0:
            raise ValidationError(f"alpha must be in (0, 1), got {self.stats.alpha}")
        if self.stats.route not in ROUTES:
            raise ValidationError(f"stats route must be one of {ROUTES}, got {self.stats.route!r}")
        if self.stats.bins < 1:
            raise ValidationError(f"histogram bins must be >= 1, got {self.stats.bins}")
        for label, value in self.mvc_values.items():
            if not value > 0:
                raise ValidationError(f"MVC for {label!r} must be positive, got {value}")
        self._load_mvc_inputs(fs)

    def _load_mvc_inputs(self, fs: float) -> None:
        if self.mvc_session is not None:
            self.mvc_session_refs = load_mvc_session(self.mvc_session)
        self.mvc_trial_signals = {}
        for label, paths in self.mvc_trials.items():
            if not paths:
                raise ValidationError(f"no MVC trial files listed for {label!r}")
            trials = []
            for p in paths:
                if not p.is_file():
                    raise ValidationError(f"MVC trial file for {label!r} not found: {p}")
                rec = ingest_csv(p, fs=fs)
                trials.append(rec.channel(label) if label in rec.labels else rec.channels[0])
            self.mvc_trial_signals[label] = trials

    def smoothing_window(self, fs: float) -> int:
        return max(1, int(round(self.smoothing.window_ms * fs / 1000.0)))

    def to_dict(self) -> dict:
        f = self.filter
        return {
            "filter": vars(f).copy(),
            "epoch": {"window_ms": self.epoch.window_ms, "overlap": self.epoch.overlap_fraction},
            "spectral": {"window": self.spectral.window, "pad_pow2": self.spectral.pad_pow2},
            "features": {"zc_threshold_mv": self.zc_threshold},
            "smoothing": vars(self.smoothing).copy(),
            "segment": list(self.segment) if self.segment else None,
            "coactivation": {"points": self.cycle_points},
            "stats": vars(self.stats).copy(),
        }


def _get(section, key, conv, default):
    if section is None or key not in section:
        return default
    raw = section[key].strip()
    try:
        if conv is bool:
            return section.getboolean(key)
        return conv(raw)
    except ValueError:
        raise ValidationError(f"[{section.name}] {key} = {raw!r}: expected {conv.__name__}") from None


def load_config(path: str | Path | None = None) -> PipelineConfig:
    """Parse an INI config; missing keys keep their defaults."""
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    cp.optionxform = str  # muscle labels are case-sensitive
    base = Path(".")
    if path is not None:
        path = Path(path)
        if not path.is_file():
            raise ValidationError(f"config file not found: {path}")
        try:
            cp.read(path, encoding="utf-8")
        except configparser.Error as exc:
            raise ValidationError(f"config {path}: {exc}".replace("\n", " ")) from None
        base = path.parent
    known = {"filter", "epoch", "spectral", "features", "smoothing", "segment", "mvc",
             "coactivation", "stats", "output"}
    unknown = set(cp.sections()) - known
    if unknown:
        raise ValidationError(f"unknown config sections: {sorted(unknown)}")
    s = {name: cp[name] if cp.has_section(name) else None for name in known}

    d = FilterSettings()
    filt = FilterSettings(
        low=_get(s["filter"], "low", float, d.low),
        high=_get(s["filter"], "high", float, d.high),
        order=_get(s["filter"], "order", int, d.order),
        zero_phase=_get(s["filter"], "zero_phase", bool, d.zero_phase),
        notch=_get(s["filter"], "notch", bool, d.notch),
        line_hz=_get(s["filter"], "line_hz", float, d.line_hz),
        harmonics=_get(s["filter"], "harmonics", int, d.harmonics),
        q=_get(s["filter"], "q", float, d.q),
    )
    epoch = EpochPlan(
        _get(s["epoch"], "window_ms", float, 500.0),
        _get(s["epoch"], "overlap", float, 0.5),
    )
    spectral = SpectralConfig(
        _get(s["spectral"], "window", str, "hann"),
        _get(s["spectral"], "pad_pow2", bool, False),
    )
    smoothing = SmoothingSettings(
        _get(s["smoothing"], "kind", str, "moving-average"),
        _get(s["smoothing"], "window_ms", float, 250.0),
    )
    segment = None
    if s["segment"] is not None and ("t0" in s["segment"] or "t1" in s["segment"]):
        if not ("t0" in s["segment"] and "t1" in s["segment"]):
            raise ValidationError("[segment] needs both t0 and t1")
        segment = (_get(s["segment"], "t0", float, 0.0), _get(s["segment"], "t1", float, 0.0))
        if not 0.0 <= segment[0] < segment[1]:
            raise ValidationError(f"segment bounds must satisfy 0 <= t0 < t1, got {segment}")

    mvc_values, mvc_trials, session = {}, {}, None
    if s["mvc"] is not None:
        for key, raw in s["mvc"].items():
            raw = raw.strip()
            if key == "session":
                session = base / raw
                continue
            try:
                mvc_values[key] = float(raw)
            except ValueError:
                mvc_trials[key] = [base / p.strip() for p in raw.split(";") if p.strip()]

    stats = StatsSettings(
        _get(s["stats"], "alpha", float, 0.05),
        _get(s["stats"], "route", str, "auto"),
        _get(s["stats"], "bins", int, 10),
    )
    out_dir = Path(_get(s["output"], "dir", str, "out"))
    return PipelineConfig(
        filter=filt, epoch=epoch, spectral=spectral,
        zc_threshold=_get(s["features"], "zc_threshold_mv", float, 0.01),
        smoothing=smoothing, segment=segment,
        mvc_values=mvc_values, mvc_trials=mvc_trials, mvc_session=session,
        cycle_points=_get(s["coactivation"], "points", int, 101),
        stats=stats, out_dir=out_dir,
    )


def load_mvc_session(path: Path) -> dict[str, MvcReference]:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        return {d["label"]: MvcReference.from_dict(d) for d in data["mvc"]}
    except (OSError, KeyError, TypeError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read MVC session {path}: {exc}") from None


def save_mvc_session(path: Path, refs: dict[str, MvcReference]) -> None:
    payload = {"mvc": [refs[k].to_dict() for k in sorted(refs)]}
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
