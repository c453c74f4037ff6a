"""Detuning spectra, sampling plans and ensemble-averaged port intensities."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Union

import numpy as np

from .model import PairSample, PhaseConfig, output_intensities

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


@dataclass(frozen=True)
class GaussianSpectrum:
    """Normal distribution of detunings (std ``sigma`` Hz), cut at ``+-truncation*sigma``."""

    sigma: float = 1e9
    truncation: float = 3.0

    def __post_init__(self):
        if not self.sigma > 0 or not math.isfinite(self.sigma):
            raise ValueError(f"sigma must be positive and finite, got {self.sigma}")
        if not self.truncation > 0 or not math.isfinite(self.truncation):
            raise ValueError(f"truncation must be positive and finite, got {self.truncation}")

    def describe(self) -> dict:
        return {"sigma": float(self.sigma), "truncation": float(self.truncation)}


@dataclass(frozen=True)
class BandPass:
    """Two symmetric filter bands, ``| |df| - center | <= width/2``."""

    center: float
    width: float

    def __post_init__(self):
        if not self.center >= 0 or not math.isfinite(self.center):
            raise ValueError(f"filter center must be >= 0, got {self.center}")
        if not self.width > 0 or not math.isfinite(self.width):
            raise ValueError(f"filter width must be positive, got {self.width}")

    @property
    def magnitude_range(self) -> tuple[float, float]:
        return max(0.0, self.center - 0.5 * self.width), self.center + 0.5 * self.width

    def describe(self) -> dict:
        return {"filter_center": float(self.center), "filter_width": float(self.width)}


Spectrum = Union[GaussianSpectrum, BandPass]


@dataclass(frozen=True)
class MonteCarlo:
    n: int = 100_000
    seed: int = 0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"Monte Carlo sample count must be >= 1, got {self.n}")
        if not 0 <= self.seed <= _MASK64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed}")

    def describe(self) -> dict:
        return {"method": "mc", "samples": int(self.n), "seed": int(self.seed)}


@dataclass(frozen=True)
class Quadrature:
    nodes: int = 2001

    def __post_init__(self):
        if int(self.nodes) != self.nodes or self.nodes < 3 or self.nodes % 2 == 0:
            raise ValueError(f"quadrature node count must be odd and >= 3, got {self.nodes}")

    def describe(self) -> dict:
        return {"method": "quad", "nodes": int(self.nodes)}


SamplingPlan = Union[MonteCarlo, Quadrature]


@dataclass(frozen=True)
class PairSamples:
    """Struct-of-arrays view of a list of :class:`PairSample`."""

    delta_f: np.ndarray
    weight: np.ndarray

    def __len__(self):
        return len(self.delta_f)

    def __iter__(self) -> Iterator[PairSample]:
        for df, w in zip(self.delta_f, self.weight):
            yield PairSample(float(df), float(w))

    def __getitem__(self, i) -> PairSample:
        return PairSample(float(self.delta_f[i]), float(self.weight[i]))


# --- counter-based uniforms -------------------------------------------------
# SplitMix64 finalizer applied to (seed, index, stream); each sample index owns
# its own stream, so values never depend on batch layout or evaluation order.

def _mix64(z: np.ndarray) -> np.ndarray:
    z = z ^ (z >> np.uint64(30))
    z = z * np.uint64(0xBF58476D1CE4E5B9)
    z = z ^ (z >> np.uint64(27))
    z = z * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def counter_uniform(seed: int, index: np.ndarray, stream: int) -> np.ndarray:
    """Uniform doubles in [0, 1) addressed by ``(seed, index, stream)``."""
    key = _mix64(np.array([seed & _MASK64], dtype=np.uint64))
    idx = np.asarray(index, dtype=np.uint64)
    z = _mix64(key + idx * np.uint64(_GOLDEN))
    z = _mix64(z + np.uint64((stream * _GOLDEN + 1) & _MASK64))
    return (z >> np.uint64(11)).astype(np.float64) * (1.0 / 9007199254740992.0)


def _truncated_normal(seed: int, n: int, truncation: float, max_rounds: int = 100_000) -> np.ndarray:
    # rejection: attempt k of index i uses streams 2k, 2k+1 (Box-Muller, cosine branch)
    out = np.empty(n)
    pending = np.arange(n, dtype=np.uint64)
    for k in range(max_rounds):
        if pending.size == 0:
            return out
        u1 = 1.0 - counter_uniform(seed, pending, 2 * k)
        u2 = counter_uniform(seed, pending, 2 * k + 1)
        z = np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * math.pi * u2)
        ok = np.abs(z) <= truncation
        out[pending[ok].astype(np.intp)] = z[ok]
        pending = pending[~ok]
    raise RuntimeError(f"rejection sampling did not finish after {max_rounds} rounds")


def _symmetric_grid(half_width: float, nodes: int) -> np.ndarray:
    m = nodes // 2
    half = half_width * (np.arange(m + 1) / m)
    return np.concatenate([-half[:0:-1], half])


def sample_detunings(spectrum: Spectrum, plan: SamplingPlan) -> PairSamples:
    """Draw or lay out the pair detunings over which ensemble averages run.

    Monte Carlo samples carry weight ``1/n``.  Gaussian quadrature uses
    ``nodes`` equally spaced points spanning the truncated support, weighted
    by the density; band-pass quadrature uses ``nodes`` cell midpoints in each
    band, equally weighted.  Weights always sum to one.
    """
    if isinstance(plan, MonteCarlo):
        n = int(plan.n)
        if isinstance(spectrum, GaussianSpectrum):
            df = spectrum.sigma * _truncated_normal(plan.seed, n, spectrum.truncation)
        elif isinstance(spectrum, BandPass):
            idx = np.arange(n, dtype=np.uint64)
            lo, hi = spectrum.magnitude_range
            mag = lo + (hi - lo) * counter_uniform(plan.seed, idx, 0)
            sign = np.where(counter_uniform(plan.seed, idx, 1) < 0.5, -1.0, 1.0)
            df = sign * mag
        else:
            raise TypeError(f"unsupported spectrum {spectrum!r}")
        return PairSamples(df, np.full(n, 1.0 / n))

    if isinstance(plan, Quadrature):
        nodes = int(plan.nodes)
        if isinstance(spectrum, GaussianSpectrum):
            df = _symmetric_grid(spectrum.truncation * spectrum.sigma, nodes)
            w = np.exp(-0.5 * (df / spectrum.sigma) ** 2)
            return PairSamples(df, w / w.sum())
        if isinstance(spectrum, BandPass):
            lo, hi = spectrum.magnitude_range
            mag = lo + (hi - lo) * (np.arange(nodes) + 0.5) / nodes
            df = np.concatenate([-mag[::-1], mag])
            return PairSamples(df, np.full(df.size, 1.0 / df.size))
        raise TypeError(f"unsupported spectrum {spectrum!r}")

    raise TypeError(f"unsupported sampling plan {plan!r}")


def mean_port_intensities(cfg: PhaseConfig, spectrum: Spectrum, plan: SamplingPlan,
                          tau: float) -> tuple[float, float]:
    """Ensemble-mean intensity at ports c and d with both correlation terms present."""
    samples = sample_detunings(spectrum, plan)
    q = output_intensities(cfg, samples.delta_f, tau)
    mean_c = float(np.sum(samples.weight * (0.5 * (q.i_c + q.i_c2))))
    mean_d = float(np.sum(samples.weight * (0.5 * (q.i_d + q.i_d2))))
    return mean_c, mean_d


def single_term_intensity(term: str, cfg: PhaseConfig, spectrum: Spectrum,
                          plan: SamplingPlan, tau: float) -> tuple[float, float]:
    """Same as :func:`mean_port_intensities` but keeping only one correlation term.

    Without the partner term the sine fringes no longer cancel, so the port
    intensities carry the full ``1 -+ sin(zeta - xi)`` fringe at zero delay.
    """
    samples = sample_detunings(spectrum, plan)
    q = output_intensities(cfg, samples.delta_f, tau)
    if term == "AB":
        c, d = q.i_c, q.i_d
    elif term == "BA":
        c, d = q.i_c2, q.i_d2
    else:
        raise ValueError(f"term must be 'AB' or 'BA', got {term!r}")
    return float(np.sum(samples.weight * c)), float(np.sum(samples.weight * d))
