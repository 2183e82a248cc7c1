import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from emgkit.core import ValidationError
from emgkit.preprocess import (
    apply_filter,
    bandpass,
    design_butterworth_bandpass,
    design_notch,
    design_powerline_notches,
    envelope,
    moving_average_envelope,
    notch_powerline,
    rectify,
    remove_offset,
    rms_envelope,
)

from conftest import fit_sinusoid, sig


def analog_bandpass_gain(f, low, high, fs, order):
    """Squared magnitude of a prewarped bilinear Butterworth band-pass.

    Independent closed form: map each digital frequency to the analog axis,
    apply the low-pass to band-pass substitution and evaluate the prototype.
    """
    warp = lambda v: 2.0 * fs * np.tan(np.pi * np.asarray(v, float) / fs)
    w, w1, w2 = warp(f), warp(low), warp(high)
    w0sq, bw = w1 * w2, w2 - w1
    lp = (w * w - w0sq) / (w * bw)
    return 1.0 / (1.0 + lp ** (2 * order))


@pytest.mark.parametrize("fs", [1000.0, 2000.0, 4000.0])
def test_bandpass_matches_closed_form(fs):
    spec = design_butterworth_bandpass(4, 15.0, 400.0, fs)
    f = np.linspace(1.0, fs / 2 - 1.0, 400)
    got = np.abs(spec.response(f)) ** 2
    np.testing.assert_allclose(got, analog_bandpass_gain(f, 15.0, 400.0, fs, 4), rtol=1e-7, atol=1e-12)


def test_bandpass_edges_are_minus_three_db():
    spec = design_butterworth_bandpass(4, 15.0, 400.0, 2000.0)
    np.testing.assert_allclose(spec.magnitude_db([15.0, 400.0]), -10 * np.log10(2), atol=1e-6)
    assert spec.order == 8
    assert spec.sections.shape == (4, 6)
    assert spec.is_stable()


def test_bandpass_rejects_low_fs():
    with pytest.raises(ValidationError, match="too low"):
        design_butterworth_bandpass(4, 15.0, 400.0, 800.0)
    with pytest.raises(ValidationError):
        design_butterworth_bandpass(4, 400.0, 15.0, 2000.0)


def test_zero_phase_passband_tone():
    fs = 2000.0
    t = np.arange(int(2 * fs)) / fs
    x = np.sin(2 * np.pi * 100 * t)
    y = bandpass(sig(x, fs)).samples
    core = slice(500, -500)
    amp, phase = fit_sinusoid(y[core], 100.0, fs)
    ref_amp, ref_phase = fit_sinusoid(x[core], 100.0, fs)
    expected = analog_bandpass_gain(100.0, 15, 400, fs, 4)
    assert abs(amp - ref_amp * expected) < 1e-3
    assert abs(phase - ref_phase) < 1e-3


def test_zero_phase_stopband_tone():
    fs = 2000.0
    t = np.arange(int(4 * fs)) / fs
    x = np.sin(2 * np.pi * 1.0 * t)
    y = bandpass(sig(x, fs)).samples
    amp, _ = fit_sinusoid(y[1000:-1000], 1.0, fs)
    assert amp < 0.05


def test_zero_phase_needs_minimum_length():
    spec = design_butterworth_bandpass(4, 15, 400, 2000)
    with pytest.raises(ValidationError, match="too short"):
        apply_filter(spec, sig(np.zeros(24), 2000))
    apply_filter(spec, sig(np.zeros(25), 2000))


@settings(max_examples=25, deadline=None)
@given(a=st.floats(-10, 10), b=st.floats(-10, 10), seed=st.integers(0, 2**32 - 1))
def test_filter_is_linear(a, b, seed):
    r = np.random.default_rng(seed)
    x, y = r.standard_normal(600), r.standard_normal(600)
    f = lambda v: bandpass(sig(v, 2000.0)).samples
    np.testing.assert_allclose(f(a * x + b * y), a * f(x) + b * f(y), atol=1e-9 * (1 + abs(a) + abs(b)))


def test_causal_filter_is_causal():
    spec = design_butterworth_bandpass(4, 15, 400, 2000)
    x = np.zeros(200)
    x[100] = 1.0
    y = apply_filter(spec, sig(x, 2000), zero_phase=False).samples
    assert np.all(y[:100] == 0.0)
    assert y[100] != 0.0


def test_notch_attenuates_line_and_passes_neighbour():
    fs = 2000.0
    t = np.arange(int(4 * fs)) / fs
    x = np.sin(2 * np.pi * 60 * t) + np.sin(2 * np.pi * 100 * t)
    y = notch_powerline(sig(x, fs)).samples
    core = slice(2000, -2000)
    a60, _ = fit_sinusoid(y[core], 60.0, fs)
    a100, _ = fit_sinusoid(y[core], 100.0, fs)
    assert a60 < 0.03
    assert abs(a100 - 1.0) < 0.02


def test_notch_has_exact_zero():
    spec = design_notch(60.0, 30.0, 2000.0)
    b = spec.sections[0, :3]
    z = np.exp(2j * np.pi * 60.0 / 2000.0)
    # direct polynomial evaluation, independent of the frequency-response helper
    assert abs(b[0] + b[1] / z + b[2] / z**2) < 1e-12
    assert spec.is_stable()


def test_harmonics_above_nyquist_are_skipped():
    spec, warnings = design_powerline_notches(250.0, 60.0, 3)
    assert spec.order == 4
    assert len(warnings) == 1 and "180" in warnings[0]
    with pytest.raises(ValidationError):
        design_powerline_notches(100.0, 60.0)


def test_remove_offset_constant_is_exact_zero():
    out = remove_offset(sig(np.full(1001, 3.7)))
    assert np.all(out.samples == 0.0)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-1e3, 1e3), min_size=1, max_size=200))
def test_remove_offset_mean_and_idempotence(values):
    x = np.array(values)
    once = remove_offset(sig(x)).samples
    twice = remove_offset(sig(once)).samples
    scale = 1.0 + np.abs(x).max()
    assert abs(once.mean()) <= 1e-12 * scale
    np.testing.assert_allclose(twice, once, atol=1e-12 * scale)


def brute_moving_average(x, w):
    out = np.empty(x.size)
    for n in range(x.size):
        lo = max(0, n - w + 1)
        out[n] = sum(x[lo : n + 1]) / (n + 1 - lo)
    return out


@pytest.mark.parametrize("w, at", [(4, 10), (25, 30)])
def test_moving_average_impulse_response(w, at):
    # impulse placed after the startup prefix so the full box is visible
    x = np.zeros(100)
    x[at] = 1.0
    env = moving_average_envelope(sig(x), w).samples
    expected = np.zeros(100)
    expected[at : at + w] = 1.0 / w
    np.testing.assert_allclose(env, expected, atol=1e-15)


@settings(max_examples=40, deadline=None)
@given(
    values=st.lists(st.floats(0, 100), min_size=1, max_size=120),
    w=st.integers(1, 130),
)
def test_moving_average_matches_loop(values, w):
    x = np.array(values)
    w = min(w, x.size)
    np.testing.assert_allclose(moving_average_envelope(sig(x), w).samples, brute_moving_average(x, w), atol=1e-10)


def test_moving_average_window_one_is_identity():
    x = np.abs(np.random.default_rng(1).standard_normal(50))
    np.testing.assert_array_equal(moving_average_envelope(sig(x), 1).samples, x)


def test_moving_average_rejects_unrectified():
    with pytest.raises(ValidationError, match="rectified"):
        moving_average_envelope(sig([0.1, -0.2, 0.3]), 2)


def test_constant_envelopes_are_exact():
    x = np.full(5000, 0.25)
    assert np.all(moving_average_envelope(sig(x), 250).samples == 0.25)
    assert np.all(rms_envelope(sig(-x), 250).samples == 0.25)


@pytest.mark.parametrize("periods", [1, 5, 25])
def test_rms_envelope_of_sine(periods):
    fs, f, amp = 1000.0, 40.0, 2.0
    w = int(periods * fs / f)
    t = np.arange(4000) / fs
    env = rms_envelope(sig(amp * np.sin(2 * np.pi * f * t), fs), w).samples
    np.testing.assert_allclose(env[w - 1 :], amp / np.sqrt(2), rtol=5e-3)


def test_envelope_dispatch():
    x = np.array([1.0, -1.0, 1.0, -1.0])
    np.testing.assert_array_equal(envelope(sig(x), "moving-average", 2).samples, np.ones(4))
    np.testing.assert_array_equal(rectify(sig(x)).samples, np.ones(4))
    with pytest.raises(ValidationError):
        envelope(sig(x), "hilbert", 2)
    with pytest.raises(ValidationError):
        envelope(sig(x), "rms", 5)
