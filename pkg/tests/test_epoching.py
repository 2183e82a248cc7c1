import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from emgkit.core import ValidationError
from emgkit.epoching import EpochPlan, segment, select_active_segment

from conftest import sig


def test_default_plan_on_ten_seconds():
    series = segment(sig(np.arange(10000.0)), EpochPlan())
    # floor((10000 - 500) / 250) + 1
    assert len(series) == 39
    assert series.window_samples == 500 and series.step_samples == 250
    assert all(len(e) == 500 for e in series)
    assert series[-1].start_index == 38 * 250


def test_exactly_one_window():
    assert len(segment(sig(np.zeros(500)))) == 1


def test_shorter_than_window_rejected():
    with pytest.raises(ValidationError):
        segment(sig(np.zeros(499)))


@pytest.mark.parametrize("overlap", [1.0, -0.1, 1.5])
def test_bad_overlap_rejected(overlap):
    with pytest.raises(ValidationError):
        EpochPlan(500, overlap)


def test_window_rounding():
    plan = EpochPlan(window_ms=333.3)
    assert plan.window_samples(1000) == 333
    assert plan.step_samples(1000) == 166  # round(166.5) -> banker's rounding to even
    with pytest.raises(ValidationError):
        EpochPlan(window_ms=1.0).window_samples(1000)


@settings(max_examples=60, deadline=None)
@given(
    n=st.integers(20, 3000),
    window_ms=st.floats(2.0, 400.0),
    overlap=st.floats(0.0, 0.95),
)
def test_overlap_reconstruction(n, window_ms, overlap):
    plan = EpochPlan(window_ms, overlap)
    fs = 1000.0
    w = plan.window_samples(fs)
    if n < w:
        return
    x = np.arange(n, dtype=float)
    if round(w * (1 - overlap)) < 1:
        with pytest.raises(ValidationError):
            segment(sig(x, fs), plan)
        return
    series = segment(sig(x, fs), plan)
    step = series.step_samples
    assert len(series) == (n - w) // step + 1
    for a, b in zip(series.epochs, series.epochs[1:]):
        # consecutive epochs share exactly W - step samples
        shared = np.intersect1d(a.samples, b.samples)
        assert shared.size == max(w - step, 0)
    # stitching epochs at stride `step` rebuilds the analysed prefix
    if step <= w:
        parts = [e.samples[:step] for e in series.epochs[:-1]] + [series.epochs[-1].samples]
        rebuilt = np.concatenate(parts)
        np.testing.assert_array_equal(rebuilt, x[: rebuilt.size])
        assert rebuilt.size == series.epochs[-1].start_index + w


def test_select_active_segment():
    s = sig(np.arange(10000.0))
    part = select_active_segment(s, 2.0, 4.0)
    assert len(part) == 2000
    assert part.samples[0] == 2000.0
    np.testing.assert_array_equal(select_active_segment(s, 0.0, 10.0).samples, s.samples)
    with pytest.raises(ValidationError):
        select_active_segment(s, 4.0, 2.0)
    with pytest.raises(ValidationError):
        select_active_segment(s, 0.0, 11.0)
