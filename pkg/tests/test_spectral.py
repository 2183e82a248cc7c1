import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import signal as sps

from emgkit.core import ValidationError
from emgkit.preprocess import remove_offset
from emgkit.spectral import make_window, periodogram, segment_count, welch_psd

from conftest import sig


def integrated(spec):
    return float(np.sum(spec.density) * spec.df)


def test_tone_periodogram_parseval():
    fs, n, amp = 1000.0, 1000, 1.7
    x = amp * np.sin(2 * np.pi * 100 * np.arange(n) / fs)
    spec = periodogram(x, window="rectangular", fs=fs)
    assert spec.freqs[np.argmax(spec.density)] == 100.0
    assert abs(integrated(spec) - amp**2 / 2) < 0.01 * amp**2 / 2


def test_zero_epoch_has_zero_density():
    spec = periodogram(np.zeros(64), fs=1000.0)
    assert np.all(spec.density == 0.0)


def test_white_noise_power(rng):
    x = rng.standard_normal(4096)
    assert abs(integrated(periodogram(x, fs=1000.0)) - 1.0) < 0.1


@pytest.mark.parametrize("window", ["hann", "rectangular"])
@pytest.mark.parametrize("n", [256, 501, 1000])
def test_periodogram_matches_scipy(rng, window, n):
    x = rng.standard_normal(n)
    # odd lengths are zero-padded by one sample
    nfft = n + n % 2
    f_ref, p_ref = sps.periodogram(x, fs=500.0, window="boxcar" if window == "rectangular" else "hann",
                                   nfft=nfft, detrend=False, scaling="density")
    spec = periodogram(x, window=window, fs=500.0)
    np.testing.assert_allclose(spec.freqs, f_ref, rtol=1e-12)
    np.testing.assert_allclose(spec.density, p_ref, rtol=1e-9, atol=1e-15)


@pytest.mark.parametrize("seg_len, overlap", [(512, 0.5), (256, 0.0), (200, 0.75)])
def test_welch_matches_scipy(rng, seg_len, overlap):
    x = rng.standard_normal(5000)
    step = int(round(seg_len * (1 - overlap)))
    f_ref, p_ref = sps.welch(x, fs=1000.0, window="hann", nperseg=seg_len, noverlap=seg_len - step,
                             detrend=False, scaling="density")
    spec = welch_psd(sig(x), seg_len, overlap)
    np.testing.assert_allclose(spec.freqs, f_ref, rtol=1e-12)
    np.testing.assert_allclose(spec.density, p_ref, rtol=1e-9, atol=1e-15)


def test_periodic_hann_matches_scipy():
    np.testing.assert_allclose(make_window("hann", 100), sps.get_window("hann", 100), atol=1e-15)
    with pytest.raises(ValidationError):
        make_window("kaiser", 10)


@settings(max_examples=40, deadline=None)
@given(n=st.integers(1024, 4096), seed=st.integers(0, 2**32 - 1), pad=st.booleans())
def test_parseval_exact_against_window_energy(n, seed, pad):
    x = np.random.default_rng(seed).standard_normal(n)
    w = make_window("hann", n)
    spec = periodogram(x, fs=1000.0, pad_pow2=pad)
    expected = np.sum((x * w) ** 2) / np.sum(w**2)
    assert abs(integrated(spec) - expected) <= 1e-9 * expected
    assert np.all(spec.density >= 0)


@pytest.mark.parametrize("seed", range(20))
def test_welch_power_within_five_percent_of_mean_square(seed):
    # a single hann segment of N=1024 noise scatters ~6% around the mean
    # square, so the 5% bound is checked with segment averaging
    x = np.random.default_rng(seed).standard_normal(1024 * 33)
    ms = np.mean(x * x)
    assert abs(integrated(welch_psd(sig(x), 1024, 0.5)) - ms) <= 0.05 * ms


def test_welch_parseval_on_noise(rng):
    x = rng.standard_normal(20000)
    assert abs(integrated(welch_psd(sig(x), 512, 0.5)) - x.var()) < 0.05 * x.var()


def test_single_segment_equals_periodogram(rng):
    x = rng.standard_normal(1000)
    np.testing.assert_array_equal(welch_psd(sig(x), 1000).density, periodogram(sig(x)).density)


def test_offset_removed_constant_has_zero_density():
    s = remove_offset(sig(np.full(2000, 4.2)))
    assert np.all(welch_psd(s, 500).density == 0.0)


def test_zero_padding_keeps_power(rng):
    x = rng.standard_normal(700)
    a, b = periodogram(x, fs=1000.0), periodogram(x, fs=1000.0, pad_pow2=True)
    assert b.freqs.size == 513
    assert abs(integrated(a) - integrated(b)) < 1e-9 * integrated(a)


def test_welch_variance_reduction():
    # variance of one bin over repeated realisations as segment count grows
    r = np.random.default_rng(5)
    seg = 128
    variances = []
    for count in (1, 8, 64):
        n = seg + (count - 1) * seg // 2
        est = [welch_psd(sig(r.standard_normal(n)), seg, 0.5).density[20] for _ in range(300)]
        variances.append(np.var(est))
    assert variances[0] > variances[1] > variances[2]
    assert segment_count(128 + 63 * 64, 128, 0.5) == 64


def test_welch_errors():
    with pytest.raises(ValidationError):
        welch_psd(sig(np.zeros(100)), 200)
    with pytest.raises(ValidationError):
        welch_psd(sig(np.zeros(100)), 50, overlap=1.0)
    with pytest.raises(ValidationError):
        periodogram(np.zeros(10))
