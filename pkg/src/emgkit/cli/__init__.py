"""Command-line front end.

Exit status: 0 on success, 2 for validation or ingest errors (detected
before any processing), 3 for failures during computation. Errors are
reported as one JSON object on a single stderr line.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from ..core import EmgError, Recording, ValidationError, make_recording
from ..stats import choose_test, histogram, quartile_summary
from ..synth import SynthSpec, synth_band_noise, synth_fatigue_sequence, synth_sine
from . import svg
from .config import PipelineConfig, load_config
from .io import ingest_csv, write_csv, write_recording_csv
from .pipeline import (
    RunResult,
    build_envelopes,
    compute_coactivation,
    extract_features,
    preprocess_recording,
    run_pipeline,
    write_coactivation,
    write_features,
    write_preprocessed,
    write_stats,
    write_trends,
)

EXIT_OK, EXIT_INVALID, EXIT_RUNTIME = 0, 2, 3

log = logging.getLogger("emgkit")


class CliError(Exception):
    def __init__(self, code: int, kind: str, message: str):
        super().__init__(message)
        self.code, self.kind = code, kind


def _fail(exc: Exception, code: int, kind: str) -> int:
    msg = " ".join(str(exc).split())
    print(json.dumps({"error": kind, "type": type(exc).__name__, "message": msg, "exit": code}),
          file=sys.stderr)
    return code


def _add_input(p: argparse.ArgumentParser) -> None:
    p.add_argument("input", type=Path, help="recording CSV (header row, optional leading time column)")
    p.add_argument("--config", type=Path, help="INI pipeline configuration")
    p.add_argument("--fs", type=float, help="sampling rate in Hz when the CSV has no time column")
    p.add_argument("--units", choices=["V", "mV", "uV"], default="mV", help="units of the CSV samples")
    p.add_argument("--out", type=Path, help="output directory (overrides [output] dir)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="emgkit", description="Surface-EMG batch processing")
    ap.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest-check", help="validate a recording CSV and print its shape")
    _add_input(p)

    p = sub.add_parser("preprocess", help="write the offset-removed, filtered active segment")
    _add_input(p)

    p = sub.add_parser("features", help="per-epoch RMS, ARV, ZC, MNF, MDF")
    _add_input(p)

    p = sub.add_parser("fatigue", help="features plus least-squares trends and trend plots")
    _add_input(p)

    p = sub.add_parser("coactivation", help="envelope iEMG and coactivation index per muscle")
    _add_input(p)

    p = sub.add_parser("stats", help="normality tests and summaries for numeric CSV columns")
    _add_input(p)
    p.add_argument("--alpha", type=float, help="significance level (default 0.05)")

    p = sub.add_parser("pipeline", help="run every stage and write all artifacts")
    _add_input(p)
    p.add_argument("--alpha", type=float, help="significance level (default 0.05)")

    p = sub.add_parser("synth", help="write a synthetic recording and its ground truth")
    p.add_argument("--kind", choices=["fatigue", "band", "sine"], default="fatigue")
    p.add_argument("--out", type=Path, default=Path("synth"), help="output directory")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--fs", type=float, default=1000.0)
    p.add_argument("--duration", type=float, default=10.0, help="seconds")
    p.add_argument("--amplitude", type=float, default=1.0, help="RMS (noise) or peak (sine) in mV")
    p.add_argument("--channels", default="ch1", help="comma-separated channel labels")
    p.add_argument("--start-hz", type=float, default=120.0, help="fatigue: initial centroid")
    p.add_argument("--end-hz", type=float, default=80.0, help="fatigue: final centroid")
    p.add_argument("--bandwidth", type=float, default=40.0, help="fatigue: band width in Hz")
    p.add_argument("--low", type=float, default=50.0, help="band: lower edge in Hz")
    p.add_argument("--high", type=float, default=150.0, help="band: upper edge in Hz")
    p.add_argument("--freq", type=float, default=100.0, help="sine: frequency in Hz")
    return ap


def _load(args) -> tuple[PipelineConfig, Recording]:
    """Parse config and input and validate both before any processing."""
    cfg = load_config(args.config)
    if getattr(args, "alpha", None) is not None:
        cfg.stats.alpha = args.alpha
    if args.out is not None:
        cfg.out_dir = args.out
    rec = ingest_csv(args.input, fs=args.fs, units=args.units)
    cfg.validate(rec.fs, rec.n_samples)
    return cfg, rec


def cmd_ingest_check(args) -> None:
    rec = ingest_csv(args.input, fs=args.fs, units=args.units)
    if args.config is not None:
        load_config(args.config).validate(rec.fs, rec.n_samples)
    info = {
        "channels": rec.labels,
        "samples": rec.n_samples,
        "fs": rec.fs,
        "duration_s": rec.n_samples / rec.fs,
        "warnings": list(rec.warnings),
    }
    print(json.dumps(info, sort_keys=True))


def _run_stages(cfg, rec, *stages) -> RunResult:
    result = RunResult()
    preprocess_recording(cfg, rec, result)
    for stage in stages:
        stage(result)
    return result


def cmd_preprocess(cfg, rec) -> None:
    result = _run_stages(cfg, rec)
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    write_preprocessed(cfg.out_dir / "preprocessed.csv", result)


def cmd_features(cfg, rec) -> None:
    result = _run_stages(cfg, rec, lambda r: extract_features(cfg, r))
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    write_features(cfg.out_dir / "features.csv", result)


def cmd_fatigue(cfg, rec) -> None:
    result = _run_stages(cfg, rec, lambda r: extract_features(cfg, r))
    out = cfg.out_dir
    (out / "plots").mkdir(parents=True, exist_ok=True)
    write_features(out / "features.csv", result)
    write_trends(out / "trends.csv", result)
    for label, table in result.tables.items():
        centres = table.start_times + cfg.epoch.window_samples(rec.fs) / (2.0 * rec.fs)
        series = [("MNF", centres, table.mnf), ("MDF", centres, table.mdf)]
        svg.line_chart(out / "plots" / f"{label}_frequency_trend.svg", f"{label}: MNF / MDF over time",
                       "time (s)", "frequency (Hz)", series)


def cmd_coactivation(cfg, rec) -> None:
    result = _run_stages(cfg, rec, lambda r: build_envelopes(cfg, r, rec.fs),
                         lambda r: compute_coactivation(cfg, r))
    if result.coactivation is None:
        raise ValidationError("coactivation needs at least two channels")
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    write_coactivation(cfg.out_dir / "coactivation.csv", result)


def _numeric_columns(path: Path) -> dict[str, np.ndarray]:
    """Numeric columns of a free-form CSV, grouped by a ``channel`` column if present."""
    import csv

    with open(path, encoding="utf-8-sig", newline="") as fh:
        rows = [r for r in csv.reader(fh) if any(c.strip() for c in r)]
    if len(rows) < 2:
        raise ValidationError(f"{path}: no samples")
    header = [h.strip() for h in rows[0]]
    body = rows[1:]
    group_col = header.index("channel") if "channel" in header else None
    out: dict[str, list[float]] = {}
    for j, name in enumerate(header):
        if j == group_col:
            continue
        try:
            vals = [float(r[j]) for r in body]
        except (ValueError, IndexError):
            continue
        if name in ("epoch", "t", "time", "t_start_s"):
            continue
        for r, v in zip(body, vals):
            key = f"{r[group_col]}:{name}" if group_col is not None else name
            out.setdefault(key, []).append(v)
    if not out:
        raise ValidationError(f"{path}: no numeric columns")
    return {k: np.array(v) for k, v in out.items()}


def cmd_stats(args) -> None:
    cfg = load_config(args.config)
    alpha = args.alpha if args.alpha is not None else cfg.stats.alpha
    if not 0.0 < alpha < 1.0:
        raise ValidationError(f"alpha must be in (0, 1), got {alpha}")
    out = args.out if args.out is not None else cfg.out_dir
    columns = _numeric_columns(args.input)
    try:
        reports = {}
        for key, values in columns.items():
            label, _, name = key.rpartition(":")
            reports[(label, name)] = choose_test(values, alpha, cfg.stats.route)
        (out / "plots").mkdir(parents=True, exist_ok=True)
        write_stats(out / "stats.csv", reports)
        rows = []
        for key, values in columns.items():
            q = quartile_summary(values)
            rows.append([key, values.size, q.q0, q.q1, q.q2, q.q3, q.q4, q.iqr, len(q.outliers)])
            safe = "".join(c if c.isalnum() or c in "-_" else "_" for c in key)
            svg.histogram_chart(out / "plots" / f"{safe}_hist.svg", key, key, histogram(values, cfg.stats.bins))
            svg.box_plot(out / "plots" / f"{safe}_box.svg", key, key, [(key, q)])
        write_csv(out / "summary.csv", ["column", "n", "q0", "q1", "q2", "q3", "q4", "iqr", "outliers"], rows)
    except EmgError as exc:
        raise CliError(EXIT_RUNTIME, "runtime", str(exc)) from exc


def cmd_synth(args) -> None:
    labels = [s.strip() for s in args.channels.split(",") if s.strip()]
    if not labels:
        raise ValidationError("no channel labels given")
    out = args.out
    out.mkdir(parents=True, exist_ok=True)
    channels, truth = [], None
    for k, label in enumerate(labels):
        seed = args.seed + k
        if args.kind == "fatigue":
            spec = SynthSpec(args.fs, args.duration, args.amplitude, centroid=(args.start_hz, args.end_hz),
                             bandwidth=args.bandwidth, seed=seed)
            fat = synth_fatigue_sequence(spec, label)
            channels.append(fat.signal)
            truth = (fat.times, fat.centroid)
        elif args.kind == "band":
            spec = SynthSpec(args.fs, args.duration, args.amplitude, band=(args.low, args.high), seed=seed)
            sig = synth_band_noise(spec, label)
            channels.append(sig)
            t = np.arange(len(sig)) / args.fs
            truth = (t, np.full(t.size, 0.5 * (args.low + args.high)))
        else:
            sig = synth_sine(args.freq, args.amplitude, args.fs, args.duration, label)
            channels.append(sig)
            t = np.arange(len(sig)) / args.fs
            truth = (t, np.full(t.size, args.freq))
    rec = make_recording([(c.label, c.samples) for c in channels], args.fs,
                         {"generator": f"synth:{args.kind}", "seed": str(args.seed)})
    write_recording_csv(out / "recording.csv", rec)
    t, centroid = truth
    write_csv(out / "truth.csv", ["t", "centroid_hz"], ([repr(float(a)), b] for a, b in zip(t, centroid)))


COMMANDS = {
    "preprocess": cmd_preprocess,
    "features": cmd_features,
    "fatigue": cmd_fatigue,
    "coactivation": cmd_coactivation,
    "pipeline": lambda cfg, rec: run_pipeline(cfg, rec, cfg.out_dir),
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "ingest-check":
            cmd_ingest_check(args)
        elif args.command == "stats":
            cmd_stats(args)
        elif args.command == "synth":
            cmd_synth(args)
        else:
            cfg, rec = _load(args)
            try:
                COMMANDS[args.command](cfg, rec)
            except EmgError as exc:
                raise CliError(EXIT_RUNTIME, "runtime", str(exc)) from exc
    except CliError as exc:
        return _fail(exc, exc.code, exc.kind)
    except EmgError as exc:
        return _fail(exc, EXIT_INVALID, "validation")
    except OSError as exc:
        return _fail(exc, EXIT_INVALID, "io")
    except Exception as exc:  # noqa: BLE001 - last resort keeps the one-line error contract
        return _fail(exc, EXIT_RUNTIME, "runtime")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
