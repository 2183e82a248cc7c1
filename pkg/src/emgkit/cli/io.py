"""CSV ingestion and deterministic CSV output."""
from __future__ import annotations

import csv
import math
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from ..core import Recording, ValidationError, make_recording

TIME_COLUMNS = {"t", "time", "time_s", "seconds", "timestamp"}
TIME_TOLERANCE = 1e-6  # relative jitter allowed on sample intervals


def fmt(value) -> str:
    """Locale-independent text for one CSV cell (9 significant digits)."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if math.isnan(v):
            return "nan"
        out = format(v, ".9g")
        return "0" if out == "-0" else out
    return str(value)


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])


def write_recording_csv(path: Path, rec: Recording) -> None:
    """Write a recording with a leading time column in seconds.

    Times use the shortest round-trip representation so that a re-read
    passes the uniform-sampling check; samples use 9 significant digits.
    """
    t = np.arange(rec.n_samples) / rec.fs
    data = np.column_stack([ch.samples for ch in rec.channels])
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t"] + rec.labels)
        for ti, row in zip(t, data):
            w.writerow([repr(float(ti))] + [fmt(v) for v in row])


def _round_sig(x: float, digits: int = 9) -> float:
    return float(format(x, f".{digits}g"))


def ingest_csv(path: str | Path, fs: float | None = None, units: str = "mV") -> Recording:
    """Read a header-named CSV into a :class:`Recording`.

    A first column named ``t``/``time``/``time_s``/``seconds``/``timestamp``
    is taken as time in seconds; its spacing must be uniform within 1 ppm
    and, when ``fs`` is not given, defines the sampling rate (rounded to 9
    significant digits). Every other column becomes a channel. Row numbers in
    error messages count data rows from 1, excluding the header.

    Raises:
        ValidationError: unreadable or empty file, malformed cell, unknown or
            inconsistent sampling rate.
    """
    path = Path(path)
    try:
        with open(path, encoding="utf-8-sig", newline="") as fh:
            lines = [row for row in csv.reader(fh) if any(cell.strip() for cell in row)]
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None
    except UnicodeDecodeError:
        raise ValidationError(f"{path} is not UTF-8 text") from None
    if not lines:
        raise ValidationError(f"{path}: no samples (empty file)")
    header = [h.strip() for h in lines[0]]
    if any(not h for h in header):
        raise ValidationError(f"{path}: empty column name in header")
    body = lines[1:]
    if not body:
        raise ValidationError(f"{path}: no samples (header only)")

    values = np.empty((len(body), len(header)))
    for i, row in enumerate(body, start=1):
        if len(row) != len(header):
            raise ValidationError(f"row {i}: expected {len(header)} fields, found {len(row)}")
        for j, cell in enumerate(row):
            try:
                values[i - 1, j] = float(cell)
            except ValueError:
                raise ValidationError(f"row {i}, column {header[j]}: cannot parse {cell.strip()!r}") from None
            if not math.isfinite(values[i - 1, j]):
                raise ValidationError(f"row {i}, column {header[j]}: non-finite value {cell.strip()!r}")

    has_time = header[0].lower() in TIME_COLUMNS
    channel_names = header[1:] if has_time else header
    if not channel_names:
        raise ValidationError(f"{path}: no signal columns")
    if has_time:
        fs = _fs_from_time(values[:, 0], fs)
        data = values[:, 1:]
    else:
        if fs is None:
            raise ValidationError("sampling rate unknown: pass --fs or add a leading time column")
        data = values
    meta = {"source": path.name}
    return make_recording([(name, data[:, k]) for k, name in enumerate(channel_names)], fs, meta, units)


def _fs_from_time(t: np.ndarray, fs: float | None) -> float:
    if t.size < 2:
        if fs is None:
            raise ValidationError("a single time stamp cannot define fs; pass --fs")
        return float(fs)
    step = (t[-1] - t[0]) / (t.size - 1)
    if not step > 0:
        raise ValidationError("time column is not increasing")
    bad = np.flatnonzero(np.abs(np.diff(t) - step) > TIME_TOLERANCE * step)
    if bad.size:
        row = int(bad[0]) + 2
        raise ValidationError(f"non-uniform time column: interval ending at row {row} deviates by more than 1 ppm")
    derived = _round_sig(1.0 / step)
    if fs is None:
        return derived
    if abs(derived - fs) > TIME_TOLERANCE * fs:
        raise ValidationError(f"--fs {fs:g} disagrees with time column ({derived:g} Hz)")
    return float(fs)
