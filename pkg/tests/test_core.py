import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from emgkit.core import (
    ChannelSignal,
    Envelope,
    PowerSpectrum,
    TestResult,
    ValidationError,
    make_recording,
    to_mv,
)


def test_valid_recording_has_no_warning():
    rec = make_recording([("biceps", np.zeros(10000)), ("triceps", np.ones(10000))], fs=1000)
    assert rec.labels == ["biceps", "triceps"]
    assert rec.n_samples == 10000
    assert rec.warnings == ()


def test_length_mismatch_rejected():
    with pytest.raises(ValidationError, match="length mismatch"):
        make_recording([("a", np.zeros(100)), ("b", np.zeros(99))], fs=1000)


def test_low_fs_accepted_with_warning():
    rec = make_recording([("a", np.zeros(100))], fs=500)
    assert len(rec.warnings) == 1
    assert "500" in rec.warnings[0]


@pytest.mark.parametrize(
    "channels, fs",
    [
        ([], 1000),
        ([("a", [1.0, math.nan])], 1000),
        ([("a", [1.0, math.inf])], 1000),
        ([("a", [1.0])], 0),
        ([("a", [1.0])], -5),
        ([("a", [])], 1000),
        ([("a", [1.0]), ("a", [2.0])], 1000),
    ],
)
def test_invalid_recordings(channels, fs):
    with pytest.raises(ValidationError):
        make_recording(channels, fs)


@pytest.mark.parametrize("units, factor", [("V", 1000.0), ("mV", 1.0), ("uV", 1e-3)])
def test_unit_conversion(units, factor):
    rec = make_recording({"a": [1.0, -2.0]}, fs=2000, units=units)
    np.testing.assert_array_equal(rec.channels[0].samples, np.array([1.0, -2.0]) * factor)
    with pytest.raises(ValidationError):
        to_mv([1.0], "kV")


def test_samples_are_immutable():
    ch = ChannelSignal("a", [1.0, 2.0], 1000)
    with pytest.raises(ValueError):
        ch.samples[0] = 5.0


_mutations = st.sampled_from(["nan", "inf", "length", "fs_zero", "fs_negative", "empty", "no_channels"])


@settings(max_examples=60, deadline=None)
@given(mutation=_mutations, n=st.integers(2, 50), n_ch=st.integers(1, 4), fs=st.floats(100, 1e4))
def test_random_invalid_mutations_rejected(mutation, n, n_ch, fs):
    chans = [(f"c{i}", np.linspace(-1, 1, n)) for i in range(n_ch)]
    if mutation == "nan":
        chans[-1][1][n // 2] = math.nan
    elif mutation == "inf":
        chans[0][1][0] = -math.inf
    elif mutation == "length":
        chans.append(("extra", np.zeros(n + 1)))
    elif mutation == "fs_zero":
        fs = 0.0
    elif mutation == "fs_negative":
        fs = -fs
    elif mutation == "empty":
        chans[0] = ("c0", np.array([]))
    elif mutation == "no_channels":
        chans = []
    with pytest.raises(ValidationError):
        make_recording(chans, fs)


@settings(max_examples=30, deadline=None)
@given(n=st.integers(1, 100), n_ch=st.integers(1, 4), fs=st.floats(1.0, 1e5))
def test_valid_construction_is_total(n, n_ch, fs):
    rec = make_recording([(f"c{i}", np.arange(n, dtype=float)) for i in range(n_ch)], fs)
    assert rec.n_samples == n
    assert bool(rec.warnings) == (fs < 1000)


def test_power_spectrum_invariants():
    PowerSpectrum([0.0, 1.0, 2.0], [0.0, 1.0, 0.5], 1.0)
    with pytest.raises(ValidationError):
        PowerSpectrum([0.0, 1.0], [0.0, -1.0], 1.0)
    with pytest.raises(ValidationError):
        PowerSpectrum([1.0, 2.0], [0.0, 1.0], 1.0)
    with pytest.raises(ValidationError):
        PowerSpectrum([0.0, 1.0, 2.0], [0.0, 1.0], 1.0)


def test_envelope_must_be_nonnegative():
    with pytest.raises(ValidationError):
        Envelope([0.1, -0.1], 1000, "rms")
    with pytest.raises(ValidationError):
        Envelope([0.1], 1000, "median")


def test_test_result_decision_consistency():
    TestResult("x", 0.5, 10, 0.05)
    TestResult("x", 0.5, 10, 0.05, p_value=0.2, reject_null=False)
    TestResult("x", 0.5, 10, 0.05, critical=(0.4,), reject_null=True)
    with pytest.raises(ValidationError):
        TestResult("x", 0.5, 10, 0.05, reject_null=True)
    with pytest.raises(ValidationError):
        TestResult("x", 0.5, 10, 0.05, p_value=0.2)
    with pytest.raises(ValidationError):
        TestResult("x", 0.5, 10, 0.05, p_value=1.5, reject_null=False)
