"""Monte Carlo trial engine: statistic sampling, threshold calibration,
empirical CDFs and ROC sweeps.

Every trial owns its own counter-based random stream, indexed by
(phase, trial): calibration, H0 evaluation and H1 evaluation never share
randomness, results do not depend on execution order, and rerunning with
the same configuration and master seed is bit-identical.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import detectors as det
from . import signals as sig
from .errors import ConfigError, NumericFailure
from .numerics import RngStream, complex_gaussian
from .observation import spectrum_bins, split_bands, squared_envelope

PHASE_CALIBRATION = 1
PHASE_EVAL_H0 = 2
PHASE_EVAL_H1 = 3

_TRIAL_BITS = 48


def trial_stream(master_seed: int, phase: int, trial: int) -> RngStream:
    """Disjoint per-trial stream; phase tags keep calibration and
    evaluation randomness separate."""
    if trial >= 1 << _TRIAL_BITS:
        raise ConfigError("trial index out of range")
    return RngStream(master_seed, (phase << _TRIAL_BITS) | trial)


def wilson_interval(successes: int, trials: int, z: float = 1.959963984540054
                    ) -> tuple[float, float]:
    """95% Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise ValueError("trials must be positive")
    phat = successes / trials
    denom = 1.0 + z**2 / trials
    center = (phat + z**2 / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z**2 / (4 * trials**2)) / denom
    return max(0.0, center - half), min(1.0, center + half)


# ---------------------------------------------------------------------------
# Per-trial simulation
# ---------------------------------------------------------------------------

def _simulate_trial(cfg: sig.ScenarioConfig, need_time: bool, need_freq: bool,
                    rng: RngStream):
    """One trial's observations plus the drawn noise power.

    Model source: time samples are white (signal and noise i.i.d. per
    sample), frequency bins come straight from the bin model.  Waveform
    source: a single shaped block feeds both observation forms.
    """
    gen = rng.generator()
    if cfg.noise_power is not None:
        alpha = cfg.noise_power
    else:
        alpha = float(sig.draw_noise_power(cfg.prior, gen))
    h = 1.0 + 0.0j
    if cfg.hypothesis == sig.H1:
        if cfg.pinned_channel is not None:
            h = complex(cfg.pinned_channel)
        else:
            h = complex(sig.channel_gain(cfg.channel, gen))

    r = x = y = None
    if cfg.source == sig.WAVEFORM:
        z = sig.generate_time_block(cfg, alpha, h, gen)
        if need_time:
            r = squared_envelope(z)
        if need_freq:
            x, y, _ = split_bands(spectrum_bins(z), cfg.signal)
        return r, x, y, alpha

    n = cfg.n_samples
    snr = cfg.signal.snr_linear
    if need_time:
        noise = complex_gaussian(alpha, gen, size=n)
        if cfg.hypothesis == sig.H1:
            z = h * complex_gaussian(alpha * snr, gen, size=n) + noise
        else:
            z = noise
        r = squared_envelope(z)
    if need_freq:
        x, y = sig.generate_bins(cfg, alpha, h, gen, s_amp=cfg.pinned_signal)
    return r, x, y, alpha


def trial_statistics(cfg: sig.ScenarioConfig, detector_names: Sequence[str],
                     phase: int) -> dict[str, np.ndarray]:
    """Statistic samples for several detectors over the same trials.

    Returns one array of length cfg.trials per detector name.
    """
    defs = [det.detector_def(name) for name in detector_names]
    need_time = any(d.domain == det.TIME for d in defs)
    need_freq = any(d.domain == det.FREQ for d in defs)
    out = {d.name: np.empty(cfg.trials) for d in defs}
    for i in range(cfg.trials):
        rng = trial_stream(cfg.master_seed, phase, i)
        r, x, y, alpha = _simulate_trial(cfg, need_time, need_freq, rng)
        for d in defs:
            out[d.name][i] = det.detector_statistic(
                d.name, prior=cfg.prior, r=r, x=x, y=y, true_noise_power=alpha)
    for name, vals in out.items():
        if not np.all(np.isfinite(vals)):
            raise NumericFailure(f"non-finite statistic produced by {name!r}")
    return out


def statistic_samples(cfg: sig.ScenarioConfig, detector: str,
                      phase: int | None = None) -> np.ndarray:
    """Statistic samples for one detector (phase defaults by hypothesis)."""
    if phase is None:
        phase = PHASE_EVAL_H1 if cfg.hypothesis == sig.H1 else PHASE_EVAL_H0
    return trial_statistics(cfg, [detector], phase)[detector]


# ---------------------------------------------------------------------------
# Empirical CDF and calibration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EmpiricalCdf:
    """Empirical distribution of a decision statistic."""

    values: np.ndarray  # sorted ascending

    @classmethod
    def from_samples(cls, samples: np.ndarray) -> "EmpiricalCdf":
        return cls(values=np.sort(np.asarray(samples, dtype=float)))

    def evaluate(self, t: float) -> float:
        """Fraction of samples <= t."""
        return float(np.searchsorted(self.values, t, side="right")) / self.values.size

    def quantile(self, q: float) -> float:
        """Smallest sample value v with evaluate(v) >= q."""
        if not (0.0 < q <= 1.0):
            raise ValueError("quantile level must lie in (0, 1]")
        n = self.values.size
        idx = max(0, math.ceil(q * n) - 1)
        return float(self.values[idx])


@dataclass(frozen=True)
class EstimatedRate:
    """A decision rate (Pfa or Pd) with its 95% Wilson interval."""

    rate: float
    ci_low: float
    ci_high: float
    trials: int


def run_trials(cfg: sig.ScenarioConfig, detector: str,
               thresholds: det.ThresholdSpec) -> EstimatedRate:
    """Fraction of H1 verdicts over cfg.trials independent trials."""
    stats = statistic_samples(cfg, detector)
    decided = (stats > thresholds.eta1) & (stats < thresholds.eta2)
    k = int(np.sum(decided))
    lo, hi = wilson_interval(k, cfg.trials)
    return EstimatedRate(rate=k / cfg.trials, ci_low=lo, ci_high=hi,
                         trials=cfg.trials)


def empirical_cdf(cfg: sig.ScenarioConfig, detector: str) -> EmpiricalCdf:
    """H0 distribution of the decision statistic."""
    if cfg.hypothesis != sig.H0:
        raise ConfigError("empirical_cdf expects an H0 scenario")
    return EmpiricalCdf.from_samples(
        trial_statistics(cfg, [detector], PHASE_CALIBRATION)[detector])


def calibrate_threshold(cfg: sig.ScenarioConfig, detector: str,
                        target_pfa: float) -> float:
    """Empirical (1 - target_pfa) quantile of the H0 statistic."""
    if not (0.0 < target_pfa < 1.0):
        raise ConfigError("target false-alarm probability must lie in (0, 1)")
    if target_pfa * cfg.trials < 100:
        raise ConfigError(
            f"need target_pfa * trials >= 100 for a stable quantile "
            f"(got {target_pfa * cfg.trials:.0f})")
    h0 = replace(cfg, hypothesis=sig.H0)
    cdf = EmpiricalCdf.from_samples(
        trial_statistics(h0, [detector], PHASE_CALIBRATION)[detector])
    return cdf.quantile(1.0 - target_pfa)


def calibrate_two_sided(cfg: sig.ScenarioConfig, detector: str,
                        target_pfa: float, upper_share: float = 0.1
                        ) -> det.ThresholdSpec:
    """Two-sided thresholds with total H0 band mass target_pfa.

    The upper tail gets `upper_share` of the budget:
    P(stat > eta2 | H0) = upper_share * target_pfa and
    P(stat > eta1 | H0) = (1 + upper_share) * target_pfa.
    """
    if not (0.0 < upper_share < 1.0):
        raise ConfigError("upper_share must lie in (0, 1)")
    p_hi = upper_share * target_pfa
    p_lo = (1.0 + upper_share) * target_pfa
    if p_lo >= 1.0:
        raise ConfigError("target false-alarm probability too large for a band rule")
    if p_hi * cfg.trials < 100:
        raise ConfigError("not enough trials to place the upper threshold")
    h0 = replace(cfg, hypothesis=sig.H0)
    cdf = EmpiricalCdf.from_samples(
        trial_statistics(h0, [detector], PHASE_CALIBRATION)[detector])
    thresholds = det.ThresholdSpec(eta1=cdf.quantile(1.0 - p_lo),
                                   eta2=cdf.quantile(1.0 - p_hi))
    extremum = _glr_extremum(cfg, detector)
    if extremum is not None and not (thresholds.eta1 < extremum < thresholds.eta2):
        warnings.warn(
            f"two-sided thresholds ({thresholds.eta1:.4g}, {thresholds.eta2:.4g}) "
            f"do not bracket the likelihood peak at {extremum:.4g}; the band "
            f"rule is not operating in its intended regime", stacklevel=2)
    return thresholds


def _glr_extremum(cfg: sig.ScenarioConfig, detector: str) -> float | None:
    snr = cfg.signal.snr_linear
    if snr == 0.0:
        return None
    if detector == "glrd1":
        return det.mu_glrd1(cfg.n_samples, cfg.prior.k, snr)
    if detector == "glrd2":
        geom = cfg.geometry
        return det.rho_glrd2(geom.l_inband, geom.p_excess, cfg.prior.k, snr)
    return None


# ---------------------------------------------------------------------------
# ROC sweeps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RocPoint:
    pfa_target: float
    pfa_empirical: float
    pd_empirical: float
    pd_ci_low: float
    pd_ci_high: float
    threshold: float


def roc_sweep_multi(cfg: sig.ScenarioConfig, detector_names: Sequence[str],
                    pfa_grid: Iterable[float]) -> Mapping[str, list[RocPoint]]:
    """ROC points for several detectors over shared trials.

    Per target false-alarm probability: calibrate the threshold on H0
    calibration trials, measure the realized Pfa on fresh H0 trials, and
    the detection probability (with Wilson interval) on H1 trials.  The
    three phases use disjoint random streams.

    GLR detectors use the one-sided rule unless cfg.glr_two_sided is
    set, in which case the band rule is calibrated with a 10% upper tail
    share and the reported threshold is the lower edge.
    """
    grid = [float(p) for p in pfa_grid]
    if any(not (0.0 < p < 1.0) for p in grid):
        raise ConfigError("pfa targets must lie in (0, 1)")
    if grid != sorted(grid):
        raise ConfigError("pfa targets must be ascending")
    if grid and min(grid) * cfg.trials < 100:
        raise ConfigError("not enough trials for the smallest pfa target")

    h0 = replace(cfg, hypothesis=sig.H0)
    h1 = replace(cfg, hypothesis=sig.H1)
    cal = trial_statistics(h0, detector_names, PHASE_CALIBRATION)
    s0 = trial_statistics(h0, detector_names, PHASE_EVAL_H0)
    s1 = trial_statistics(h1, detector_names, PHASE_EVAL_H1)

    out: dict[str, list[RocPoint]] = {}
    for name in detector_names:
        banded = cfg.glr_two_sided and det.detector_def(name).two_sided_capable
        cdf = EmpiricalCdf.from_samples(cal[name])
        points = []
        for p in grid:
            if banded:
                thr = cdf.quantile(1.0 - 1.1 * p)
                upper = cdf.quantile(1.0 - 0.1 * p)
            else:
                thr = cdf.quantile(1.0 - p)
                upper = math.inf
            pfa_emp = float(np.mean((s0[name] > thr) & (s0[name] < upper)))
            k = int(np.sum((s1[name] > thr) & (s1[name] < upper)))
            lo, hi = wilson_interval(k, cfg.trials)
            points.append(RocPoint(pfa_target=p, pfa_empirical=pfa_emp,
                                   pd_empirical=k / cfg.trials,
                                   pd_ci_low=lo, pd_ci_high=hi, threshold=thr))
        out[name] = points
    return out


def roc_sweep(cfg: sig.ScenarioConfig, detector: str,
              pfa_grid: Iterable[float]) -> list[RocPoint]:
    """Single-detector ROC sweep (see `roc_sweep_multi`)."""
    return list(roc_sweep_multi(cfg, [detector], pfa_grid)[detector])
