"""Stage-by-stage batch processing of one recording."""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..coactivation import CoactivationReport, coactivation_report, time_normalize
from ..core import FEATURE_COLUMNS, ChannelSignal, Envelope, FeatureTable, Recording
from ..epoching import segment, select_active_segment
from ..features import TrendResult, fatigue_trend, feature_table
from ..normalization import MvcReference, mvc_from_trials, normalize_to_mvc
from ..preprocess import (
    apply_filter,
    design_butterworth_bandpass,
    design_powerline_notches,
    envelope,
    remove_offset,
)
from ..spectral import periodogram
from ..stats import RoutingReport, choose_test, histogram, quartile_summary
from . import svg
from .config import PipelineConfig, save_mvc_session
from .io import write_csv, write_recording_csv

log = logging.getLogger(__name__)

FEATURE_HEADER = ["channel", "epoch", "t_start_s", "rms_mv", "arv_mv", "zc", "mnf_hz", "mdf_hz"]
TREND_HEADER = ["channel", "feature", "slope_per_s", "intercept", "r", "degenerate"]
COACT_HEADER = ["muscle", "iemg", "ci", "units", "points"]
STATS_HEADER = ["channel", "feature", "test", "n", "statistic", "p_value", "critical_low",
                "critical_high", "alpha", "reject_null", "selected", "reason"]


@dataclass
class RunResult:
    signals: dict[str, ChannelSignal] = field(default_factory=dict)
    tables: dict[str, FeatureTable] = field(default_factory=dict)
    trends: dict[str, dict[str, TrendResult]] = field(default_factory=dict)
    envelopes: dict[str, Envelope] = field(default_factory=dict)
    mvc: dict[str, MvcReference] = field(default_factory=dict)
    coactivation: CoactivationReport | None = None
    stats: dict[tuple[str, str], RoutingReport] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)


def preprocess_recording(cfg: PipelineConfig, rec: Recording, result: RunResult) -> None:
    """Offset removal, band-pass, notch, then active-segment selection."""
    f = cfg.filter
    bp = design_butterworth_bandpass(f.order, f.low, f.high, rec.fs)
    notch = None
    if f.notch:
        notch, skipped = design_powerline_notches(rec.fs, f.line_hz, f.harmonics, f.q)
        result.warnings.extend(skipped)
    for ch in rec.channels:
        x = apply_filter(bp, remove_offset(ch), f.zero_phase)
        if notch is not None:
            x = apply_filter(notch, x, f.zero_phase)
        if cfg.segment is not None:
            x = select_active_segment(x, *cfg.segment)
        result.signals[ch.label] = x


def extract_features(cfg: PipelineConfig, result: RunResult) -> None:
    for label, x in result.signals.items():
        table = feature_table(segment(x, cfg.epoch), cfg.spectral, cfg.zc_threshold)
        result.tables[label] = table
        centres = table.start_times + cfg.epoch.window_samples(x.fs) / (2.0 * x.fs)
        result.trends[label] = {
            name: fatigue_trend(centres, table.column(name)) for name in FEATURE_COLUMNS
        } if len(table) >= 2 else {}
        if len(table) < 2:
            result.warnings.append(f"{label}: one epoch only, no trend fitted")


def _mvc_references(cfg: PipelineConfig, fs: float, result: RunResult) -> dict[str, MvcReference]:
    refs: dict[str, MvcReference] = {}
    refs.update(cfg.mvc_session_refs)
    window = cfg.smoothing_window(fs)
    for label, value in cfg.mvc_values.items():
        refs[label] = MvcReference(label, value, (value,), cfg.smoothing.kind, window)
    for label, trials in cfg.mvc_trial_signals.items():
        refs[label] = mvc_from_trials(trials, window, cfg.smoothing.kind, label)
        result.warnings.extend(refs[label].warnings)
    return refs


def build_envelopes(cfg: PipelineConfig, result: RunResult, fs: float) -> None:
    """Rectified, smoothed envelopes, in %MVC where a reference exists."""
    result.mvc = _mvc_references(cfg, fs, result)
    window = cfg.smoothing_window(fs)
    for label, x in result.signals.items():
        env = envelope(x, cfg.smoothing.kind, window)
        ref = result.mvc.get(label)
        if ref is not None:
            norm = normalize_to_mvc(env, ref)
            result.warnings.extend(norm.warnings)
            if norm.over_mvc:
                result.warnings.append(f"{label}: envelope exceeds 100 %MVC")
            env = norm.envelope
        result.envelopes[label] = env


def compute_coactivation(cfg: PipelineConfig, result: RunResult) -> None:
    if len(result.envelopes) < 2:
        result.warnings.append("coactivation needs at least two channels; skipped")
        return
    cycles = {label: time_normalize(env, cfg.cycle_points) for label, env in result.envelopes.items()}
    result.coactivation = coactivation_report(cycles)


def compute_stats(cfg: PipelineConfig, result: RunResult) -> None:
    for label, table in result.tables.items():
        for name in FEATURE_COLUMNS:
            result.stats[(label, name)] = choose_test(table.column(name), cfg.stats.alpha, cfg.stats.route)


# --- writers -------------------------------------------------------------

def write_features(path: Path, result: RunResult) -> None:
    rows = []
    for label, t in result.tables.items():
        for i in range(len(t)):
            rows.append([label, i, t.start_times[i], t.rms[i], t.arv[i], int(t.zc[i]), t.mnf[i], t.mdf[i]])
    write_csv(path, FEATURE_HEADER, rows)


def write_trends(path: Path, result: RunResult) -> None:
    rows = [[label, name, tr.slope, tr.intercept, tr.r, tr.degenerate]
            for label, trends in result.trends.items() for name, tr in trends.items()]
    write_csv(path, TREND_HEADER, rows)


def write_coactivation(path: Path, result: RunResult) -> None:
    rows = [] if result.coactivation is None else [
        [r["muscle"], r["iemg"], r["ci"], r["units"], r["points"]] for r in result.coactivation.rows()
    ]
    write_csv(path, COACT_HEADER, rows)


def stats_rows(reports: dict[tuple[str, str], RoutingReport]):
    for (label, name), rep in reports.items():
        if not rep.results:
            yield [label, name, "", rep.n, None, None, None, None, None, None, False, rep.reason]
        for res in rep.results:
            crit = res.critical or ()
            # a single critical value is an upper bound (KS)
            lo, hi = (crit[0], crit[1]) if len(crit) == 2 else (None, crit[0] if crit else None)
            yield [label, name, res.test, res.n, res.statistic, res.p_value, lo, hi, res.alpha,
                   res.reject_null, res.test == rep.selected, rep.reason]


def write_stats(path: Path, reports: dict[tuple[str, str], RoutingReport]) -> None:
    write_csv(path, STATS_HEADER, stats_rows(reports))


def write_plots(plot_dir: Path, cfg: PipelineConfig, result: RunResult) -> list[str]:
    plot_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for label, x in result.signals.items():
        series = segment(x, cfg.epoch)
        table = result.tables[label]
        n = len(series)
        picks = sorted({int(round(q * (n - 1))) for q in np.linspace(0.0, 1.0, 11)})
        curves = []
        for i in picks:
            spec = periodogram(series[i], window=cfg.spectral.window, pad_pow2=cfg.spectral.pad_pow2)
            db = 10.0 * np.log10(np.maximum(spec.density, 1e-30))
            curves.append((f"epoch {i} ({series[i].start_time:.2f} s)", spec.freqs, db))
        name = f"{_safe(label)}_psd_deciles.svg"
        svg.line_chart(plot_dir / name, f"{label}: PSD by epoch decile", "frequency (Hz)",
                       "PSD (dB mV^2/Hz)", curves)
        written.append(name)

        centres = table.start_times + series.window_samples / (2.0 * x.fs)
        lines = [("MNF", centres, table.mnf), ("MDF", centres, table.mdf)]
        dashed = [False, False]
        trends = result.trends.get(label, {})
        for key, tag in (("mnf", "MNF fit"), ("mdf", "MDF fit")):
            if key in trends:
                tr = trends[key]
                lines.append((f"{tag} {tr.slope:+.3f} Hz/s", centres, tr.intercept + tr.slope * centres))
                dashed.append(True)
        name = f"{_safe(label)}_frequency_trend.svg"
        svg.line_chart(plot_dir / name, f"{label}: MNF / MDF over time", "time (s)", "frequency (Hz)",
                       lines, dashed)
        written.append(name)

        name = f"{_safe(label)}_mnf_hist.svg"
        svg.histogram_chart(plot_dir / name, f"{label}: MNF distribution", "MNF (Hz)",
                            histogram(table.mnf, cfg.stats.bins))
        written.append(name)

    summaries = [(label, quartile_summary(t.mnf)) for label, t in result.tables.items()]
    svg.box_plot(plot_dir / "mnf_box.svg", "MNF per channel", "MNF (Hz)", summaries)
    written.append("mnf_box.svg")
    if result.coactivation is not None:
        rep = result.coactivation
        summaries = [(label, quartile_summary(result.envelopes[label].samples)) for label in rep.labels]
        svg.box_plot(plot_dir / "envelope_box.svg", "Envelope per channel", rep.units, summaries)
        written.append("envelope_box.svg")
    return written


def _safe(label: str) -> str:
    return "".join(c if c.isalnum() or c in "-_" else "_" for c in label)


def summary_dict(cfg: PipelineConfig, rec: Recording, result: RunResult, files: list[str]) -> dict:
    channels = {}
    for label, table in result.tables.items():
        box = quartile_summary(table.mnf)
        channels[label] = {
            "epochs": len(table),
            "active_samples": len(result.signals[label]),
            "trends": {k: {"slope": v.slope, "intercept": v.intercept, "r": v.r, "degenerate": v.degenerate}
                       for k, v in result.trends.get(label, {}).items()},
            "normality": {name: {"test": rep.selected, "normal": rep.normal, "reason": rep.reason}
                          for (lab, name), rep in result.stats.items() if lab == label},
            "mnf_box": {**vars(box), "outliers": list(box.outliers)},
        }
    return {
        "recording": {"fs": rec.fs, "samples": rec.n_samples, "channels": rec.labels, "meta": dict(rec.meta)},
        "config": cfg.to_dict(),
        "channels": channels,
        "coactivation": None if result.coactivation is None else result.coactivation.as_dict(),
        "mvc": {k: v.to_dict() for k, v in sorted(result.mvc.items())},
        "warnings": list(rec.warnings) + result.warnings,
        "files": sorted(files),
    }


def run_pipeline(cfg: PipelineConfig, rec: Recording, out_dir: Path) -> RunResult:
    """Run every stage and write all artifacts into ``out_dir``."""
    result = RunResult()
    preprocess_recording(cfg, rec, result)
    extract_features(cfg, result)
    build_envelopes(cfg, result, rec.fs)
    compute_coactivation(cfg, result)
    compute_stats(cfg, result)

    out_dir.mkdir(parents=True, exist_ok=True)
    write_features(out_dir / "features.csv", result)
    write_trends(out_dir / "trends.csv", result)
    write_coactivation(out_dir / "coactivation.csv", result)
    write_stats(out_dir / "stats.csv", result.stats)
    files = ["features.csv", "trends.csv", "coactivation.csv", "stats.csv"]
    if result.mvc:
        save_mvc_session(out_dir / "mvc.json", result.mvc)
        files.append("mvc.json")
    files += [f"plots/{n}" for n in write_plots(out_dir / "plots", cfg, result)]
    files.append("summary.json")
    summary = summary_dict(cfg, rec, result, files)
    (out_dir / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True, default=_jsonable) + "\n",
                                          encoding="utf-8")
    return result


def _jsonable(obj):
    if isinstance(obj, Path):
        return str(obj)
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not serialisable: {type(obj).__name__}")


def write_preprocessed(path: Path, result: RunResult) -> None:
    sigs = list(result.signals.values())
    rec = Recording(tuple(sigs), sigs[0].fs)
    write_recording_csv(path, rec)
