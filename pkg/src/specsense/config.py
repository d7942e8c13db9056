"""Flat key = value experiment configuration files.

One key per line, `#` starts a comment, lists are comma separated,
booleans are true/false.  SNR is given in dB and converted to the linear
ratio internally.  The prior parameters are mandatory: results depend on
them and no silent default is applied.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError
from .signals import (
    AWGN,
    MODEL,
    NAKAGAMI,
    RAYLEIGH,
    WAVEFORM,
    ChannelSpec,
    H0,
    NoisePrior,
    ScenarioConfig,
    SignalSpec,
)

_KNOWN_KEYS = {
    "detectors", "n_samples", "trials", "master_seed",
    "snr_db", "bandwidth_hz", "rolloff", "sample_rate_hz",
    "channels", "nakagami_m",
    "prior_k", "prior_theta",
    "pfa_targets",
    "noise_power",
    "pinned_channel_re", "pinned_channel_im",
    "pinned_signal_re", "pinned_signal_im",
    "source", "glr_two_sided",
    "threshold_min", "threshold_max", "threshold_points",
    "cdf_points",
}

_REQUIRED_KEYS = ("detectors", "n_samples", "trials", "master_seed",
                  "snr_db", "channels", "prior_k", "prior_theta")


def parse_config_text(text: str) -> dict[str, str]:
    """Raw key -> value mapping from config text."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _KNOWN_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        if not value:
            raise ConfigError(f"line {lineno}: empty value for {key!r}")
        out[key] = value
    return out


def _parse_bool(value: str, key: str) -> bool:
    if value.lower() in ("true", "false"):
        return value.lower() == "true"
    raise ConfigError(f"{key}: expected true or false, got {value!r}")


def _parse_float(value: str, key: str) -> float:
    try:
        v = float(value)
    except ValueError:
        raise ConfigError(f"{key}: not a number: {value!r}") from None
    if not math.isfinite(v):
        raise ConfigError(f"{key}: must be finite")
    return v


def _parse_int(value: str, key: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise ConfigError(f"{key}: not an integer: {value!r}") from None


def _parse_list(value: str) -> list[str]:
    return [item.strip() for item in value.split(",") if item.strip()]


@dataclass(frozen=True)
class ExperimentConfig:
    """Parsed experiment description covering one or more scenario legs."""

    detectors: tuple[str, ...]
    n_samples: tuple[int, ...]
    trials: int
    master_seed: int
    snr_db: float
    prior: NoisePrior
    channels: tuple[ChannelSpec, ...]
    bandwidth_hz: float = 54_000.0
    rolloff: float = 0.25
    sample_rate_hz: float | None = None
    pfa_targets: tuple[float, ...] = ()
    noise_power: float | None = None
    pinned_channel: complex | None = None
    pinned_signal: complex | None = None
    source: str = MODEL
    glr_two_sided: bool = False
    threshold_grid: tuple[float, float, int] | None = None
    cdf_points: int = 200
    echo: dict[str, str] = field(default_factory=dict)

    @property
    def snr_linear(self) -> float:
        return 10.0 ** (self.snr_db / 10.0)

    def signal_spec(self) -> SignalSpec:
        rate = self.sample_rate_hz
        if rate is None:
            rate = (1.0 + self.rolloff) * self.bandwidth_hz
        return SignalSpec(self.bandwidth_hz, self.rolloff, rate, self.snr_linear)

    def scenario(self, n_samples: int, channel: ChannelSpec,
                 hypothesis: str = H0, trials: int | None = None,
                 master_seed: int | None = None) -> ScenarioConfig:
        return ScenarioConfig(
            n_samples=n_samples,
            prior=self.prior,
            signal=self.signal_spec(),
            channel=channel,
            hypothesis=hypothesis,
            trials=self.trials if trials is None else trials,
            master_seed=self.master_seed if master_seed is None else master_seed,
            noise_power=self.noise_power,
            pinned_channel=self.pinned_channel,
            pinned_signal=self.pinned_signal,
            source=self.source,
            glr_two_sided=self.glr_two_sided,
        )

    def legs(self):
        """(n_samples, channel) combinations in declaration order."""
        for n in self.n_samples:
            for ch in self.channels:
                yield n, ch


def _build_channel(name: str, nakagami_m: float | None) -> ChannelSpec:
    name = name.lower()
    if name == AWGN:
        return ChannelSpec(AWGN)
    if name == RAYLEIGH:
        return ChannelSpec(RAYLEIGH)
    if name == NAKAGAMI:
        if nakagami_m is None:
            raise ConfigError("nakagami channel requires nakagami_m")
        return ChannelSpec(NAKAGAMI, nakagami_m=nakagami_m)
    raise ConfigError(f"unknown channel {name!r}")


def experiment_from_mapping(raw: dict[str, str]) -> ExperimentConfig:
    missing = [key for key in _REQUIRED_KEYS if key not in raw]
    if missing:
        raise ConfigError(f"missing required keys: {', '.join(missing)}")

    detectors = tuple(_parse_list(raw["detectors"]))
    if not detectors:
        raise ConfigError("detector list is empty")
    n_samples = tuple(_parse_int(v, "n_samples") for v in _parse_list(raw["n_samples"]))
    if not n_samples:
        raise ConfigError("n_samples list is empty")

    prior = NoisePrior(k=_parse_int(raw["prior_k"], "prior_k"),
                       theta=_parse_float(raw["prior_theta"], "prior_theta"))

    nakagami_m = (_parse_float(raw["nakagami_m"], "nakagami_m")
                  if "nakagami_m" in raw else None)
    channels = tuple(_build_channel(name, nakagami_m)
                     for name in _parse_list(raw["channels"]))
    if not channels:
        raise ConfigError("channel list is empty")

    pfa_targets = tuple(_parse_float(v, "pfa_targets")
                        for v in _parse_list(raw.get("pfa_targets", "")))

    pinned_channel = None
    if "pinned_channel_re" in raw or "pinned_channel_im" in raw:
        pinned_channel = complex(
            _parse_float(raw.get("pinned_channel_re", "0"), "pinned_channel_re"),
            _parse_float(raw.get("pinned_channel_im", "0"), "pinned_channel_im"))
    pinned_signal = None
    if "pinned_signal_re" in raw or "pinned_signal_im" in raw:
        pinned_signal = complex(
            _parse_float(raw.get("pinned_signal_re", "0"), "pinned_signal_re"),
            _parse_float(raw.get("pinned_signal_im", "0"), "pinned_signal_im"))

    threshold_grid = None
    if any(k in raw for k in ("threshold_min", "threshold_max", "threshold_points")):
        try:
            threshold_grid = (
                _parse_float(raw["threshold_min"], "threshold_min"),
                _parse_float(raw["threshold_max"], "threshold_max"),
                _parse_int(raw["threshold_points"], "threshold_points"),
            )
        except KeyError as exc:
            raise ConfigError(
                "threshold_min, threshold_max and threshold_points go together"
            ) from None
        if threshold_grid[1] <= threshold_grid[0] or threshold_grid[2] < 2:
            raise ConfigError("invalid threshold grid")

    source = raw.get("source", MODEL).lower()
    if source not in (MODEL, WAVEFORM):
        raise ConfigError(f"source must be {MODEL!r} or {WAVEFORM!r}")

    return ExperimentConfig(
        detectors=detectors,
        n_samples=n_samples,
        trials=_parse_int(raw["trials"], "trials"),
        master_seed=_parse_int(raw["master_seed"], "master_seed"),
        snr_db=_parse_float(raw["snr_db"], "snr_db"),
        prior=prior,
        channels=channels,
        bandwidth_hz=_parse_float(raw.get("bandwidth_hz", "54000"), "bandwidth_hz"),
        rolloff=_parse_float(raw.get("rolloff", "0.25"), "rolloff"),
        sample_rate_hz=(_parse_float(raw["sample_rate_hz"], "sample_rate_hz")
                        if "sample_rate_hz" in raw else None),
        pfa_targets=pfa_targets,
        noise_power=(_parse_float(raw["noise_power"], "noise_power")
                     if "noise_power" in raw else None),
        pinned_channel=pinned_channel,
        pinned_signal=pinned_signal,
        source=source,
        glr_two_sided=_parse_bool(raw.get("glr_two_sided", "false"), "glr_two_sided"),
        threshold_grid=threshold_grid,
        cdf_points=_parse_int(raw.get("cdf_points", "200"), "cdf_points"),
        echo=dict(sorted(raw.items())),
    )


def load_experiment(path: str | Path) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return experiment_from_mapping(parse_config_text(text))
