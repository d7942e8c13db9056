"""Scenario description and per-trial signal, channel and noise generation.

The receiver's noise power is uncertain: the noise *precision* (inverse
power) follows a Gamma(k+1, theta) prior, so the prior mean noise power
is theta/k.  Each trial draws a noise power from that prior, a channel
gain, and then either a time-domain sample block or frequency-domain
bins directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ConfigError
from .numerics import as_generator, complex_gaussian, gamma_sample
from .observation import band_geometry

H0 = "h0"
H1 = "h1"

AWGN = "awgn"
RAYLEIGH = "rayleigh"
NAKAGAMI = "nakagami"

MODEL = "model"
WAVEFORM = "waveform"


@dataclass(frozen=True)
class NoisePrior:
    """Gamma prior on the noise precision: 1/alpha ~ Gamma(k+1, theta).

    k >= 1 guarantees the prior mean noise power theta/k exists.
    """

    k: int
    theta: float

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise ValueError(f"prior shape offset k must be an integer >= 1, got {self.k}")
        if not (self.theta > 0 and math.isfinite(self.theta)):
            raise ValueError(f"prior rate theta must be positive, got {self.theta}")

    @property
    def precision_shape(self) -> float:
        return self.k + 1.0

    @property
    def precision_rate(self) -> float:
        return self.theta

    @property
    def mean_noise_power(self) -> float:
        return self.theta / self.k


@dataclass(frozen=True)
class SignalSpec:
    """Occupied-band description: bandwidth, roll-off and sampling."""

    bandwidth_hz: float
    rolloff: float
    sample_rate_hz: float
    snr_linear: float

    def __post_init__(self):
        if self.bandwidth_hz <= 0:
            raise ValueError("bandwidth must be positive")
        if not (0.0 < self.rolloff <= 1.0):
            raise ValueError(f"rolloff must lie in (0, 1], got {self.rolloff}")
        if self.sample_rate_hz < (1.0 + self.rolloff) * self.bandwidth_hz * (1 - 1e-12):
            raise ValueError("sample rate must cover the occupied band "
                             "(at least (1 + rolloff) * bandwidth)")
        if self.snr_linear < 0:
            raise ValueError("snr must be nonnegative")

    @classmethod
    def critically_sampled(cls, bandwidth_hz: float, rolloff: float,
                           snr_linear: float) -> "SignalSpec":
        return cls(bandwidth_hz, rolloff, (1.0 + rolloff) * bandwidth_hz, snr_linear)


@dataclass(frozen=True)
class ChannelSpec:
    """Channel gain law; fading kinds are normalized to E[|h|^2] = 1."""

    kind: str = AWGN
    nakagami_m: float | None = None

    def __post_init__(self):
        if self.kind not in (AWGN, RAYLEIGH, NAKAGAMI):
            raise ValueError(f"unknown channel kind {self.kind!r}")
        if self.kind == NAKAGAMI:
            if self.nakagami_m is None or self.nakagami_m < 0.5:
                raise ValueError("nakagami shape m must be >= 0.5")


@dataclass(frozen=True)
class ScenarioConfig:
    """Full description of one Monte Carlo experiment leg.

    `noise_power` pins the noise power instead of drawing it from the
    prior; `pinned_channel` / `pinned_signal` fix the channel gain and
    the per-bin signal amplitude (used when validating the conditional
    closed forms).  `source` selects direct model sampling ("model") or
    the shaped-waveform path ("waveform").
    """

    n_samples: int
    prior: NoisePrior
    signal: SignalSpec
    channel: ChannelSpec
    hypothesis: str
    trials: int
    master_seed: int
    noise_power: float | None = None
    pinned_channel: complex | None = None
    pinned_signal: complex | None = None
    source: str = MODEL
    glr_two_sided: bool = False

    def __post_init__(self):
        if self.n_samples < 2:
            raise ConfigError("need at least two samples per block")
        if self.hypothesis not in (H0, H1):
            raise ConfigError(f"hypothesis must be {H0!r} or {H1!r}")
        if self.trials < 1:
            raise ConfigError("trials must be positive")
        if self.source not in (MODEL, WAVEFORM):
            raise ConfigError(f"unknown observation source {self.source!r}")
        if self.noise_power is not None and self.noise_power <= 0:
            raise ConfigError("pinned noise power must be positive")

    @cached_property
    def geometry(self):
        return band_geometry(self.n_samples, self.signal)


def draw_noise_power(prior: NoisePrior, rng, size=None):
    """Noise power alpha = 1/lambda with lambda ~ Gamma(k+1, theta)."""
    lam = gamma_sample(prior.precision_shape, prior.precision_rate, rng, size=size)
    return 1.0 / lam


def channel_gain(channel: ChannelSpec, rng, size=None):
    """Complex channel gain h.

    AWGN is the unfaded reference (h = 1 exactly).  Rayleigh draws a
    circular complex Gaussian with E[|h|^2] = 1.  Nakagami-m draws the
    amplitude as sqrt(Gamma(m, rate m)), which has E[amp^2] = 1, with an
    independent uniform phase; m = 1 coincides with Rayleigh.
    """
    if channel.kind == AWGN:
        return 1.0 + 0.0j if size is None else np.ones(size, dtype=complex)
    gen = as_generator(rng)
    if channel.kind == RAYLEIGH:
        return complex_gaussian(1.0, gen, size=size)
    amp = np.sqrt(gamma_sample(channel.nakagami_m, channel.nakagami_m, gen, size=size))
    phase = gen.uniform(-math.pi, math.pi, size=size)
    return amp * np.exp(1j * phase)


def raised_cosine_profile(f, bandwidth_hz: float, rolloff: float):
    """Normalized raised-cosine power profile at frequency f (peak 1).

    Flat out to (1-rolloff)B/2, cosine transition down to zero at
    (1+rolloff)B/2, value 1/2 at the nominal band edge B/2.
    """
    f = np.abs(np.asarray(f, dtype=float))
    inner = (1.0 - rolloff) * bandwidth_hz / 2.0
    outer = (1.0 + rolloff) * bandwidth_hz / 2.0
    profile = np.zeros_like(f)
    profile[f <= inner] = 1.0
    transition = (f > inner) & (f <= outer)
    profile[transition] = 0.5 * (1.0 + np.cos(
        math.pi * (f[transition] - inner) / (rolloff * bandwidth_hz)))
    return profile if profile.ndim else float(profile)


def generate_time_block(cfg: ScenarioConfig, alpha: float, h: complex, rng) -> np.ndarray:
    """One block of N received samples.

    Under H0 the block is white circular Gaussian noise of per-sample
    variance alpha.  Under H1 a spectrally shaped Gaussian signal is
    added: white symbols are weighted in the frequency domain by the
    square root of the raised-cosine profile, normalized so the total
    signal power per sample is alpha * snr, then scaled by the channel
    gain h.
    """
    gen = as_generator(rng)
    n = cfg.n_samples
    noise = complex_gaussian(alpha, gen, size=n)
    if cfg.hypothesis == H0:
        return noise
    spec = cfg.signal
    freqs = np.fft.fftfreq(n, d=1.0 / spec.sample_rate_hz)
    mask = np.sqrt(raised_cosine_profile(freqs, spec.bandwidth_hz, spec.rolloff))
    bins = mask * complex_gaussian(1.0, gen, size=n)
    s = np.fft.ifft(bins)
    # E[|s|^2] per sample is sum(mask^2)/n^2; rescale to alpha*snr
    power = float(np.sum(mask**2)) / n**2
    s *= math.sqrt(alpha * spec.snr_linear / power)
    return h * s + noise


def generate_bins(cfg: ScenarioConfig, alpha: float, h: complex, rng,
                  s_amp: complex | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Direct frequency-domain observation (x in-band, y excess-band).

    Excess-band bins are exponential with mean N*alpha under both
    hypotheses (unnormalized DFT convention).  Under H1 each in-band bin
    is |e + v|^2 with v a noise bin and e the signal contribution: a
    fresh circular Gaussian of power N*alpha*snr per bin, or the fixed
    amplitude h*s_amp when `s_amp` pins the signal.
    """
    gen = as_generator(rng)
    geom = cfg.geometry
    scale = cfg.n_samples * alpha
    y = gen.exponential(scale, size=geom.p_excess)
    if cfg.hypothesis == H0:
        x = gen.exponential(scale, size=geom.l_inband)
        return x, y
    v = complex_gaussian(scale, gen, size=geom.l_inband)
    if s_amp is not None:
        e = h * s_amp
    else:
        e = h * complex_gaussian(scale * cfg.signal.snr_linear, gen,
                                 size=geom.l_inband)
    x = np.abs(e + v) ** 2
    return x, y
