"""Deterministic synthetic sEMG-like signals used as ground truth.

Randomness comes from SplitMix64, a 64-bit counter-based generator whose
reference outputs are published (seed 0 yields 0xE220A8397B1DCDAF,
0x6E789E6AA1B965F4, 0x06C45D188009454F). Gaussian deviates use the
Box-Muller transform, so a seed produces the same samples on any platform
with IEEE-754 doubles and a conforming libm.

Band noise is shaped in the frequency domain with a brick-wall mask, which
makes its spectrum symmetric about the band centre: the spectral centroid
and half-power frequency of the ideal spectrum are both the band midpoint.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ChannelSignal, ValidationError

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_2POW53 = float(1 << 53)

BLOCK_S = 0.25
CROSSFADE_S = 0.05


class SplitMix64:
    """Counter-based SplitMix64 stream; ``next_u64(k)`` draws k values."""

    def __init__(self, seed: int):
        self.state = np.uint64(int(seed) & 0xFFFFFFFFFFFFFFFF)

    def next_u64(self, k: int) -> np.ndarray:
        with np.errstate(over="ignore"):
            z = self.state + _GAMMA * np.arange(1, k + 1, dtype=np.uint64)
            self.state = self.state + _GAMMA * np.uint64(k)
            z = (z ^ (z >> np.uint64(30))) * _MIX1
            z = (z ^ (z >> np.uint64(27))) * _MIX2
            return z ^ (z >> np.uint64(31))

    def uniform(self, k: int) -> np.ndarray:
        """Doubles in (0, 1] built from the top 53 bits."""
        return ((self.next_u64(k) >> np.uint64(11)).astype(np.float64) + 1.0) / _2POW53

    def normal(self, k: int) -> np.ndarray:
        pairs = (k + 1) // 2
        u = self.uniform(2 * pairs)
        r = np.sqrt(-2.0 * np.log(u[0::2]))
        theta = 2.0 * np.pi * u[1::2]
        return np.column_stack([r * np.cos(theta), r * np.sin(theta)]).ravel()[:k]


@dataclass(frozen=True)
class SynthSpec:
    """Band noise (``band``) or fatigue ramp (``centroid`` + ``bandwidth``).

    ``amplitude`` is the expected RMS in mV.
    """

    fs: float = 1000.0
    duration: float = 10.0
    amplitude: float = 1.0
    band: tuple[float, float] | None = None
    centroid: tuple[float, float] | None = None
    bandwidth: float = 40.0
    seed: int = 0

    def __post_init__(self):
        if self.fs <= 0:
            raise ValidationError(f"fs must be positive, got {self.fs}")
        if self.duration <= 0:
            raise ValidationError(f"duration must be positive, got {self.duration}")
        if self.amplitude < 0:
            raise ValidationError(f"amplitude must be nonnegative, got {self.amplitude}")
        nyq = self.fs / 2.0
        if self.band is not None:
            lo, hi = self.band
            if not 0.0 < lo < hi < nyq:
                raise ValidationError(f"band {self.band} must lie within (0, {nyq:g}) Hz")
        if self.centroid is not None:
            if self.bandwidth <= 0:
                raise ValidationError(f"bandwidth must be positive, got {self.bandwidth}")
            for c in self.centroid:
                if not (0.0 < c - self.bandwidth / 2 and c + self.bandwidth / 2 < nyq):
                    raise ValidationError(
                        f"centroid {c:g} Hz with bandwidth {self.bandwidth:g} Hz leaves (0, {nyq:g}) Hz"
                    )

    @property
    def n_samples(self) -> int:
        return int(round(self.duration * self.fs))


def synth_sine(f: float, amplitude: float = 1.0, fs: float = 1000.0, duration: float = 1.0,
               label: str = "sine") -> ChannelSignal:
    """``amplitude * sin(2 pi f t)`` sampled at ``t = n / fs``."""
    if not 0.0 <= f < fs / 2.0:
        raise ValidationError(f"frequency {f:g} Hz must lie in [0, fs/2={fs / 2:g})")
    n = int(round(duration * fs))
    if n < 1:
        raise ValidationError("duration shorter than one sample")
    t = np.arange(n) / fs
    return ChannelSignal(label, amplitude * np.sin(2.0 * np.pi * f * t), fs)


def _shaped_noise(rng: SplitMix64, n: int, fs: float, lo: float, hi: float) -> np.ndarray:
    """Unit-variance (in expectation) Gaussian noise restricted to [lo, hi] Hz."""
    white = rng.normal(n)
    spec = np.fft.rfft(white)
    freqs = np.fft.rfftfreq(n, 1.0 / fs)
    keep = (freqs >= lo) & (freqs <= hi)
    if not keep.any():
        raise ValidationError(f"band ({lo:g}, {hi:g}) Hz contains no DFT bin at n={n}")
    spec[~keep] = 0.0
    # expected variance kept: DC and Nyquist bins hold 1/n of it, the rest 2/n
    weights = np.full(freqs.size, 2.0)
    weights[0] = 1.0
    if n % 2 == 0:
        weights[-1] = 1.0
    frac = float(np.sum(weights[keep])) / n
    return np.fft.irfft(spec, n) / np.sqrt(frac)


def synth_band_noise(spec: SynthSpec, label: str = "band") -> ChannelSignal:
    """Gaussian noise band-limited to ``spec.band``."""
    if spec.band is None:
        raise ValidationError("SynthSpec.band is required for band noise")
    rng = SplitMix64(spec.seed)
    x = _shaped_noise(rng, spec.n_samples, spec.fs, *spec.band)
    return ChannelSignal(label, spec.amplitude * x, spec.fs)


@dataclass(frozen=True)
class FatigueSignal:
    signal: ChannelSignal
    times: np.ndarray
    centroid: np.ndarray

    def centroid_at(self, t) -> np.ndarray:
        return np.interp(t, self.times, self.centroid)

    @property
    def slope(self) -> float:
        """Ground-truth centroid slope in Hz/s."""
        return float((self.centroid[-1] - self.centroid[0]) / (self.times[-1] - self.times[0]))


def synth_fatigue_sequence(spec: SynthSpec, label: str = "fatigue") -> FatigueSignal:
    """Band noise whose centre moves linearly from ``centroid[0]`` to ``centroid[1]``.

    Built from 250 ms stationary blocks joined by 50 ms equal-power
    crossfades; each block is centred on the trajectory value at its
    midpoint. Returns the analytic trajectory sampled at every sample time.
    """
    if spec.centroid is None:
        raise ValidationError("SynthSpec.centroid is required for a fatigue sequence")
    fs, n = spec.fs, spec.n_samples
    c0, c1 = spec.centroid
    half_bw = spec.bandwidth / 2.0
    block = int(round(BLOCK_S * fs))
    fade = int(round(CROSSFADE_S * fs))
    if block < 2 or fade >= block:
        raise ValidationError(f"fs={fs:g} Hz too low for {BLOCK_S}s blocks with {CROSSFADE_S}s fades")
    rng = SplitMix64(spec.seed)
    t = np.arange(n) / fs
    truth = c0 + (c1 - c0) * t / spec.duration

    out = np.zeros(n)
    ramp = np.sin(0.5 * np.pi * (np.arange(fade) + 0.5) / fade)  # rises 0 -> 1
    for start in range(0, n, block):
        seg_len = min(block + fade, n - start)
        mid_t = (start + min(block, n - start) / 2.0) / fs
        centre = c0 + (c1 - c0) * min(mid_t, spec.duration) / spec.duration
        noise = _shaped_noise(rng, block + fade, fs, centre - half_bw, centre + half_bw)[:seg_len]
        gain = np.ones(seg_len)
        if start > 0:
            k = min(fade, seg_len)
            gain[:k] = ramp[:k]
        tail = seg_len - block
        if tail > 0:
            gain[block:] = ramp[::-1][:tail]
        out[start:start + seg_len] += gain * noise
    return FatigueSignal(ChannelSignal(label, spec.amplitude * out, fs), t, truth)
