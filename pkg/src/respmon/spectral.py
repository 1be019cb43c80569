"""Spectral estimation: radix-2 FFT, Hann periodogram, breathing rate.

The breathing rate of a window or trial is read off the periodogram of one
channel: the highest-power bin inside a physiological frequency band, refined
with a three-point parabolic fit on log power, times sixty.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import TrialRecord
from .errors import EmptyBand, NonFiniteInput, NonPowerOfTwoLength, TooShort

DEFAULT_BR_BAND = (0.05, 3.0)
_MIN_SAMPLES = 16

# Channels whose spectra vote on the trial-level breathing rate.
CONSENSUS_CHANNELS = ("pressure", "flow", "tidal_volume")


def fft_radix2(signal, inverse: bool = False) -> np.ndarray:
    """Iterative radix-2 transform; length must be a power of two.

    Forward uses e^{-2pi i k/N} twiddles; inverse conjugates them and divides
    by N, so fft_radix2(fft_radix2(x), inverse=True) returns x.
    """
    x = np.asarray(signal, dtype=np.complex128)
    if x.ndim != 1:
        raise NonPowerOfTwoLength(x.shape)
    n = x.size
    if n == 0 or n & (n - 1):
        raise NonPowerOfTwoLength(n)
    if n == 1:
        return x.copy()

    levels = n.bit_length() - 1
    idx = np.arange(n)
    rev = np.zeros(n, dtype=np.intp)
    for _ in range(levels):
        rev = (rev << 1) | (idx & 1)
        idx >>= 1
    out = x[rev]

    sign = 1.0 if inverse else -1.0
    size = 2
    while size <= n:
        half = size // 2
        tw = np.exp(sign * 2j * np.pi * np.arange(half) / size)
        blocks = out.reshape(-1, size)
        odd = blocks[:, half:] * tw
        blocks[:, half:] = blocks[:, :half] - odd
        blocks[:, :half] += odd
        size *= 2
    if inverse:
        out /= n
    return out


def next_pow2(n: int) -> int:
    p = 1
    while p < n:
        p <<= 1
    return p


@dataclass(frozen=True)
class Spectrum:
    """One-sided power spectral density on a regular frequency grid."""

    freqs_hz: np.ndarray
    power: np.ndarray
    nfft: int
    fs_hz: float

    @property
    def bin_width_hz(self) -> float:
        return self.fs_hz / self.nfft


def periodogram(signal, fs_hz: float) -> Spectrum:
    """Hann-windowed, zero-padded, one-sided periodogram.

    The signal is mean-detrended, multiplied by a Hann window, zero-padded to
    the smallest power of two at least four times its length, and transformed.
    Power is |X_k|^2 / (fs * sum(w^2)), doubled away from DC and Nyquist, so
    that summing power times bin width recovers the windowed signal energy
    ratio sum((w*x)^2) / sum(w^2).
    """
    x = np.asarray(signal, dtype=np.float64)
    if x.ndim != 1 or x.size < _MIN_SAMPLES:
        raise TooShort(f"periodogram needs at least {_MIN_SAMPLES} samples, got {x.size}")
    if not np.all(np.isfinite(x)):
        raise NonFiniteInput("periodogram input contains NaN or infinite values")
    if not fs_hz > 0:
        raise NonFiniteInput(f"fs_hz must be positive, got {fs_hz}")

    n = x.size
    x = x - x.mean()
    w = 0.5 * (1.0 - np.cos(2.0 * np.pi * np.arange(n) / (n - 1)))
    xw = x * w
    energy = float(np.sum(w * w))

    nfft = next_pow2(4 * n)
    padded = np.zeros(nfft, dtype=np.float64)
    padded[:n] = xw
    spec = fft_radix2(padded)

    half = nfft // 2
    power = np.abs(spec[: half + 1]) ** 2 / (fs_hz * energy)
    power[1:half] *= 2.0
    freqs = np.arange(half + 1, dtype=np.float64) * (fs_hz / nfft)
    return Spectrum(freqs_hz=freqs, power=power, nfft=nfft, fs_hz=float(fs_hz))


@dataclass(frozen=True)
class BrEstimate:
    """A breathing-rate reading from one channel."""

    bpm: float
    peak_freq_hz: float
    peak_power: float
    band_hz: tuple[float, float]


def estimate_breathing_rate(
    signal, fs_hz: float, band_hz: tuple[float, float] = DEFAULT_BR_BAND
) -> BrEstimate:
    """Breathing rate as sixty times the refined spectral peak inside band_hz."""
    lo, hi = float(band_hz[0]), float(band_hz[1])
    if not 0 < lo < hi:
        raise EmptyBand(f"band must satisfy 0 < lo < hi, got ({lo}, {hi})")
    spectrum = periodogram(signal, fs_hz)
    if lo >= fs_hz / 2:
        raise EmptyBand(f"band ({lo}, {hi}) lies above Nyquist {fs_hz / 2}")

    freqs, power = spectrum.freqs_hz, spectrum.power
    mask = (freqs >= lo) & (freqs <= hi)
    if not np.any(mask):
        raise EmptyBand(f"no spectral bins inside ({lo}, {hi}) at df {spectrum.bin_width_hz}")

    in_band = np.nonzero(mask)[0]
    k = int(in_band[np.argmax(power[in_band])])

    # Parabolic refinement on log power, using the immediate neighbors even
    # when they sit just outside the band; skipped at the spectrum edges.
    delta = 0.0
    if 0 < k < freqs.size - 1:
        tiny = 1e-300
        left = np.log10(max(power[k - 1], tiny))
        mid = np.log10(max(power[k], tiny))
        right = np.log10(max(power[k + 1], tiny))
        denom = left - 2.0 * mid + right
        if denom < 0:
            delta = 0.5 * (left - right) / denom
            delta = float(np.clip(delta, -0.5, 0.5))

    peak = (k + delta) * spectrum.bin_width_hz
    peak = float(np.clip(peak, lo, hi))
    return BrEstimate(
        bpm=60.0 * peak,
        peak_freq_hz=peak,
        peak_power=float(power[k]),
        band_hz=(lo, hi),
    )


@dataclass(frozen=True)
class BrConsensus:
    """Trial-level breathing rate agreed across channels."""

    per_channel: dict[str, BrEstimate]
    consensus_bpm: float
    max_pairwise_diff_bpm: float


def br_consensus(
    record: TrialRecord, band_hz: tuple[float, float] = DEFAULT_BR_BAND
) -> BrConsensus:
    """Median breathing rate over the pressure, flow, and tidal-volume channels."""
    channels = record.channels()
    fs = float(record.meta.fs_hz)
    estimates = {
        name: estimate_breathing_rate(channels[name], fs, band_hz)
        for name in CONSENSUS_CHANNELS
    }
    bpms = np.array([estimates[name].bpm for name in CONSENSUS_CHANNELS])
    return BrConsensus(
        per_channel=estimates,
        consensus_bpm=float(np.median(bpms)),
        max_pairwise_diff_bpm=float(bpms.max() - bpms.min()),
    )


def spectrum_to_csv(spectrum: Spectrum) -> str:
    """Render a spectrum as freq_hz,power CSV text."""
    lines = ["freq_hz,power"]
    for f, p in zip(spectrum.freqs_hz, spectrum.power):
        lines.append(f"{f:.17g},{p:.17g}")
    return "\n".join(lines) + "\n"
