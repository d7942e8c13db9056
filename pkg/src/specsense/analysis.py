"""Closed-form performance: posterior update, MAP noise estimates,
false-alarm and detection probabilities, prior averaging, moments.

Conventions.  All detection/false-alarm expressions are conditional on
the true noise power alpha unless averaged explicitly.  Thresholds are
on the statistic scales defined in `detectors`: the optimal detector's
threshold applies to the energy sum, the ALRD1/GLRD1 threshold to
sum(r)/theta (so its tail argument is eta*theta/alpha), and the
ALRD2/GLRD2 threshold to sum(x)/(theta + sum(y)).

The Gaussian (CLT) expressions for the excess-band detectors use the
linearized statistic sum(x) - eta*sum(y) compared against eta*theta,
with bin model: excess bins exponential of mean N*alpha; in-band bins
|e + v|^2 with noise bin v of power N*alpha and signal contribution e
(fixed amplitude h*s per bin when conditioning, Gaussian of power
N*alpha*snr otherwise).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .numerics import as_generator, complex_gaussian, q_function, reg_upper_gamma
from .observation import Observation
from .signals import ChannelSpec, NoisePrior, channel_gain, draw_noise_power


# ---------------------------------------------------------------------------
# Posterior and MAP estimation from the excess band
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PosteriorPrecision:
    """Gamma posterior on the noise precision after seeing excess bins."""

    shape: float
    rate: float

    def pdf(self, lam):
        lam = np.asarray(lam, dtype=float)
        out = np.zeros_like(lam)
        pos = lam > 0
        out[pos] = np.exp(self.shape * math.log(self.rate)
                          + (self.shape - 1.0) * np.log(lam[pos])
                          - self.rate * lam[pos] - math.lgamma(self.shape))
        return out if out.ndim else float(out)


def posterior_update(prior: NoisePrior, y_mean: float, p_excess: int) -> PosteriorPrecision:
    """Conjugate update from P excess-band bins with sample mean y_mean:
    precision posterior Gamma(P + k + 1, theta + P*y_mean)."""
    if p_excess < 1:
        raise ValueError("need at least one excess-band bin")
    if y_mean < 0:
        raise ValueError("bin mean must be nonnegative")
    return PosteriorPrecision(shape=p_excess + prior.k + 1.0,
                              rate=prior.theta + p_excess * float(y_mean))


def map_noise_power(obs: Observation, prior: NoisePrior, snr: float,
                    hypothesis: str) -> float:
    """MAP estimate of the noise power under the given hypothesis.

    Time-domain observations give (theta + sum(r)/(1+snr under H1)) /
    (N + k); frequency-domain observations give
    (theta + sum(y) + sum(x)/(1+snr under H1)) / (L + k + P).
    """
    gain = 1.0 + snr if hypothesis == "h1" else 1.0
    if obs.r is not None:
        n = obs.r.size
        return (prior.theta + n * obs.r_mean / gain) / (n + prior.k)
    if obs.x is None or obs.y is None:
        raise ValueError("observation carries neither time samples nor bins")
    l, p = obs.x.size, obs.y.size
    return (prior.theta + p * obs.y_mean + l * obs.x_mean / gain) / (l + prior.k + p)


# ---------------------------------------------------------------------------
# Incomplete-gamma performance of the known-noise and time-domain detectors
# ---------------------------------------------------------------------------

def pfa_opt(n_samples: int, alpha: float, eta: float) -> float:
    """False-alarm probability of the energy sum at threshold eta."""
    return reg_upper_gamma(n_samples, eta / alpha)


def pd_opt(n_samples: int, alpha: float, snr: float, eta: float) -> float:
    """Detection probability of the energy sum at threshold eta."""
    return reg_upper_gamma(n_samples, eta / (alpha * (1.0 + snr)))


def pfa_alrd1(n_samples: int, alpha: float, prior: NoisePrior, eta: float) -> float:
    """False-alarm probability of sum(r)/theta at threshold eta.

    The statistic is the energy sum scaled by 1/theta, so the tail
    argument is eta*theta/alpha.
    """
    return reg_upper_gamma(n_samples, eta * prior.theta / alpha)


def pd_alrd1(n_samples: int, alpha: float, prior: NoisePrior, snr: float,
             eta: float) -> float:
    return reg_upper_gamma(n_samples, eta * prior.theta / (alpha * (1.0 + snr)))


def pfa_glrd1(n_samples: int, alpha: float, prior: NoisePrior, eta1: float) -> float:
    """One-sided GLRD1 false-alarm probability (upper threshold treated
    as infinite; the mass beyond the likelihood maximum is negligible)."""
    return pfa_alrd1(n_samples, alpha, prior, eta1)


def pd_glrd1(n_samples: int, alpha: float, prior: NoisePrior, snr: float,
             eta1: float) -> float:
    return pd_alrd1(n_samples, alpha, prior, snr, eta1)


# ---------------------------------------------------------------------------
# Gaussian-approximation performance of the excess-band detectors
# ---------------------------------------------------------------------------

def pfa_alrd2_clt(l_inband: int, p_excess: int, n_samples: int, alpha: float,
                  theta: float, eta: float) -> float:
    """Gaussian approximation of P(sum(x) - eta*sum(y) > eta*theta | H0).

    Under H0 the linearized statistic has mean N*alpha*(L - P*eta) and
    variance N^2*alpha^2*(L + P*eta^2).
    """
    num = theta * eta - alpha * n_samples * (l_inband - p_excess * eta)
    den = alpha * n_samples * math.sqrt(l_inband + p_excess * eta**2)
    return q_function(num / den)


def pd_alrd2_clt(l_inband: int, p_excess: int, n_samples: int, alpha: float,
                 theta: float, eta: float, h: complex, s: complex) -> float:
    """Gaussian approximation of the conditional detection probability
    with pinned channel gain h and per-bin signal amplitude s.

    Each in-band bin is |h*s + v|^2 with noise power N*alpha, so it has
    mean |h*s|^2 + N*alpha and variance N^2*alpha^2 + 2*N*alpha*|h*s|^2;
    only |h*s|^2 enters.  With h = s = 0 this reduces exactly to
    `pfa_alrd2_clt`.
    """
    ps = abs(h * s) ** 2
    na = n_samples * alpha
    mean = l_inband * (ps + na) - eta * p_excess * na
    var = l_inband * (na**2 + 2.0 * na * ps) + p_excess * eta**2 * na**2
    return q_function((theta * eta - mean) / math.sqrt(var))


# ---------------------------------------------------------------------------
# Averaging conditional probabilities over the prior
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AveragedProbability:
    value: float
    stderr: float
    draws: int


def average_over_prior(point_fn: Callable[[float, complex, complex], float],
                       prior: NoisePrior, mc_draws: int, rng,
                       channel: ChannelSpec | None = None,
                       draw_signal: bool = False) -> AveragedProbability:
    """Monte Carlo average of a conditional probability over the prior.

    `point_fn(alpha, h, s_unit)` is called once per draw with a noise
    power from the prior, a channel gain (h = 1 when no channel is
    given), and a unit-power circular Gaussian signal amplitude (s = 0
    unless `draw_signal`); the callee applies its own signal scaling.
    Returns the sample mean with its standard error.
    """
    if mc_draws < 1:
        raise ValueError("mc_draws must be >= 1")
    gen = as_generator(rng)
    alphas = draw_noise_power(prior, gen, size=mc_draws)
    if channel is not None:
        gains = channel_gain(channel, gen, size=mc_draws)
    else:
        gains = np.ones(mc_draws, dtype=complex)
    if draw_signal:
        amps = complex_gaussian(1.0, gen, size=mc_draws)
    else:
        amps = np.zeros(mc_draws, dtype=complex)
    vals = np.array([point_fn(float(a), complex(g), complex(s))
                     for a, g, s in zip(alphas, gains, amps)])
    value = float(np.mean(vals))
    stderr = float(np.std(vals, ddof=1) / math.sqrt(mc_draws)) if mc_draws > 1 else 0.0
    return AveragedProbability(value=value, stderr=stderr, draws=mc_draws)


# ---------------------------------------------------------------------------
# Statistic moments under H1
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MomentPair:
    mean: float
    variance: float


@dataclass(frozen=True)
class ProposedMoments:
    """Moments of the linearized excess-band statistic under H1.

    `derived` follows from the bin model (independent in-band bins,
    exponential of mean N*alpha*(1+snr), excess bins of mean N*alpha) and
    is what simulation reproduces.  `printed` is an alternative published
    form kept for side-by-side reporting only; it does not follow from
    the bin model and is not asserted anywhere.
    """

    derived: MomentPair
    printed: MomentPair


def traditional_statistic_moments(n_samples: int, alpha: float,
                                  snr: float) -> MomentPair:
    """Mean and variance of the energy sum under H1 (i.i.d. exponential
    envelopes of mean alpha*(1+snr))."""
    m = n_samples * alpha * (1.0 + snr)
    return MomentPair(mean=m, variance=n_samples * (alpha * (1.0 + snr)) ** 2)


def proposed_statistic_moments(l_inband: int, p_excess: int, n_samples: int,
                               alpha: float, snr: float, eta: float) -> ProposedMoments:
    na = n_samples * alpha
    derived = MomentPair(
        mean=na * (l_inband * (1.0 + snr) - p_excess * eta),
        variance=na**2 * (l_inband * (1.0 + snr) ** 2 + p_excess * eta**2),
    )
    printed = MomentPair(
        mean=2.0 * n_samples * l_inband * alpha * (2.0 * snr + 1.0 - p_excess * eta),
        variance=8.0 * l_inband * n_samples**2 * alpha**2
        * (2.0 * snr + 0.5 + p_excess * eta**2 / 2.0),
    )
    return ProposedMoments(derived=derived, printed=printed)


def statistic_moments(method: str, **params):
    """Dispatch on detector family: "traditional" or "proposed"."""
    if method == "traditional":
        return traditional_statistic_moments(**params)
    if method == "proposed":
        return proposed_statistic_moments(**params)
    raise ValueError(f"unknown method {method!r}")


@dataclass(frozen=True)
class PerfPoint:
    """One point on a closed-form performance curve."""

    pfa: float
    pd: float
    threshold: float
    conditioning: str = "conditional"

    def __post_init__(self):
        if not (0.0 <= self.pfa <= 1.0 and 0.0 <= self.pd <= 1.0):
            raise ValueError("probabilities must lie in [0, 1]")
