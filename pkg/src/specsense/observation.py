"""Observation forms: squared envelopes and split frequency bins.

A sensing block of N complex samples is reduced to either the
time-domain squared envelopes r, or the magnitude-squared DFT bins
partitioned into an in-band vector x (|f| <= B/2) and an excess-band
vector y (B/2 < |f| <= (1+beta)B/2).  The excess band carries noise-only
bins under the idealized model and is what the proposed detectors
exploit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError


@dataclass(frozen=True)
class BandGeometry:
    """Counts of retained bins: n_total = l_inband + p_excess."""

    n_total: int
    l_inband: int
    p_excess: int

    def __post_init__(self):
        if self.n_total != self.l_inband + self.p_excess:
            raise ValueError("band geometry counts are inconsistent")
        if self.l_inband < 1:
            raise ConfigError("in-band bin count must be at least 1")
        if self.p_excess < 1:
            raise ConfigError(
                "excess band is empty; the excess-band detectors are undefined"
            )


@dataclass(frozen=True)
class Observation:
    """One trial's data, in time form (r) or frequency form (x, y).

    Means are computed once at construction and cached.
    """

    r: np.ndarray | None = None
    x: np.ndarray | None = None
    y: np.ndarray | None = None
    r_mean: float = field(default=float("nan"))
    x_mean: float = field(default=float("nan"))
    y_mean: float = field(default=float("nan"))

    @classmethod
    def from_time(cls, r: np.ndarray) -> "Observation":
        r = np.asarray(r, dtype=float)
        return cls(r=r, r_mean=float(np.mean(r)))

    @classmethod
    def from_bins(cls, x: np.ndarray, y: np.ndarray) -> "Observation":
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return cls(x=x, y=y, x_mean=float(np.mean(x)), y_mean=float(np.mean(y)))


def squared_envelope(z: np.ndarray) -> np.ndarray:
    """Elementwise |z(n)|^2 of a complex sample block."""
    z = np.asarray(z)
    return np.abs(z) ** 2


def spectrum_bins(z: np.ndarray) -> np.ndarray:
    """Magnitude-squared bins of the unnormalized forward DFT.

    With this convention sum(w) = N * sum(|z|^2) (Parseval), and white
    noise of per-sample variance a yields i.i.d. exponential bins of
    mean N*a.
    """
    z = np.asarray(z, dtype=complex)
    return np.abs(np.fft.fft(z)) ** 2


def band_split_indices(n_bins: int, spec) -> tuple[np.ndarray, np.ndarray]:
    """Indices of in-band and excess-band bins on the DFT frequency grid.

    Bins beyond (1+beta)B/2 are discarded (possible when the block is
    oversampled).  The in-band count is round(n_kept / (1+beta)), taking
    the bins nearest DC; at equal |f| the negative-frequency bin is taken
    first, which puts the bin at exactly -B/2 in band.  Under critical
    sampling (sample_rate = (1+beta)B) every bin is retained, so
    L + P = n_bins.
    """
    freqs = np.fft.fftfreq(n_bins, d=1.0 / spec.sample_rate_hz)
    outer_edge = (1.0 + spec.rolloff) * spec.bandwidth_hz / 2.0
    tol = 1e-9 * spec.bandwidth_hz
    kept = np.flatnonzero(np.abs(freqs) <= outer_edge + tol)
    if kept.size < 2:
        raise ConfigError("too few bins inside the sensed band")
    # sort kept bins by distance from DC, negative frequency first on ties
    order = np.lexsort((freqs[kept], np.abs(freqs[kept])))
    kept = kept[order]
    l_inband = int(round(kept.size / (1.0 + spec.rolloff)))
    l_inband = min(max(l_inband, 1), kept.size - 1)
    inband = np.sort(kept[:l_inband])
    excess = np.sort(kept[l_inband:])
    return inband, excess


def band_geometry(n_bins: int, spec) -> BandGeometry:
    """Band split counts for an n_bins block under the given signal spec."""
    inband, excess = band_split_indices(n_bins, spec)
    return BandGeometry(n_total=inband.size + excess.size,
                        l_inband=inband.size, p_excess=excess.size)


def split_bands(w: np.ndarray, spec) -> tuple[np.ndarray, np.ndarray, BandGeometry]:
    """Partition DFT bins into (in-band x, excess-band y, geometry)."""
    w = np.asarray(w, dtype=float)
    inband, excess = band_split_indices(w.size, spec)
    geometry = BandGeometry(n_total=inband.size + excess.size,
                            l_inband=inband.size, p_excess=excess.size)
    return w[inband], w[excess], geometry
