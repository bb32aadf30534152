"""
Monte Carlo ensemble of noisy single-particle readouts.

Each run draws one environment field ``b ~ N(0, s_d^2)``, shifts the pointer
packet by ``cos(gamma) + b cos(eta) sin(gamma)`` and records a single momentum
sample from the shifted packet. The histogram of many runs approximates the
continuum pointer density.

Runs are generated in fixed-size chunks, each with its own stream spawned
from the master seed, so results do not depend on the number of workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .continuum import PointerMoments, pointer_moments
from .core import MeasurementGeometry

CHUNK = 1 << 16


def sample_field(rng: np.random.Generator, s_d: float, size=None):
    """Environment field drawn from ``N(0, s_d^2)``; exactly zero for ``s_d = 0``."""
    if s_d < 0.0:
        raise ValueError("s_d must be non-negative")
    if s_d == 0.0:
        return 0.0 if size is None else np.zeros(size)
    return rng.normal(0.0, s_d, size)


def run_single(b_tilde, geometry: MeasurementGeometry, sigma_p: float, rng: np.random.Generator):
    """One pointer readout given the environment field of this run."""
    if sigma_p < 0.0:
        raise ValueError("sigma_p must be non-negative")
    center = math.cos(geometry.gamma) + np.asarray(b_tilde) * geometry.transverse
    if sigma_p == 0.0:
        return center if np.ndim(center) else float(center)
    return rng.normal(center, sigma_p)


@dataclass(frozen=True)
class EnsembleConfig:
    runs: int
    seed: int
    s_d: float
    geometry: MeasurementGeometry
    sigma_p: float = 0.03
    bins: int = 80
    range: tuple[float, float] | None = None

    def __post_init__(self):
        if self.runs < 1:
            raise ValueError("runs must be at least 1")
        if self.bins < 2:
            raise ValueError("bins must be at least 2")
        if self.s_d < 0.0 or self.sigma_p < 0.0:
            raise ValueError("s_d and sigma_p must be non-negative")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.range is not None:
            lo, hi = self.range
            need_lo, need_hi = self._required_span()
            if not (lo <= need_lo and hi >= need_hi):
                raise ValueError(
                    f"histogram range [{lo}, {hi}] does not cover [{need_lo:.6g}, {need_hi:.6g}]"
                )

    def _required_span(self):
        mean = math.cos(self.geometry.gamma)
        half = 5.0 * max(self.sigma_p, self.s_d)
        return mean - half, mean + half

    @property
    def hist_range(self) -> tuple[float, float]:
        if self.range is not None:
            return tuple(map(float, self.range))
        mean = math.cos(self.geometry.gamma)
        half = 6.0 * max(self.sigma_p, self.s_d) or 1e-6
        return mean - half, mean + half

    @property
    def edges(self) -> np.ndarray:
        lo, hi = self.hist_range
        return np.linspace(lo, hi, self.bins + 1)


@dataclass(frozen=True, eq=False)
class EnsembleReport:
    config: EnsembleConfig
    sample_mean: float
    sample_variance: float
    edges: np.ndarray
    counts: np.ndarray
    underflow: int
    overflow: int
    analytic: PointerMoments
    z_mean: float | None
    z_variance: float | None
    samples: np.ndarray | None = None

    @property
    def runs(self) -> int:
        return self.config.runs

    @property
    def checks_skipped(self) -> bool:
        return self.z_mean is None

    def agrees(self, z_max: float = 3.0) -> bool | None:
        """Both moments within ``z_max`` standard errors; ``None`` if too few runs."""
        if self.checks_skipped:
            return None
        return abs(self.z_mean) <= z_max and abs(self.z_variance) <= z_max

    def histogram_rows(self):
        """``(bin_lo, bin_hi, count)`` rows including under/overflow bins."""
        rows = [(-math.inf, float(self.edges[0]), self.underflow)]
        rows += [
            (float(lo), float(hi), int(c))
            for lo, hi, c in zip(self.edges[:-1], self.edges[1:], self.counts)
        ]
        rows.append((float(self.edges[-1]), math.inf, self.overflow))
        return rows

    def summary(self) -> dict:
        return {
            "runs": self.runs,
            "seed": self.config.seed,
            "s_d": self.config.s_d,
            "gamma": self.config.geometry.gamma,
            "eta": self.config.geometry.eta,
            "sigma_p": self.config.sigma_p,
            "sample_mean": self.sample_mean,
            "sample_variance": self.sample_variance,
            "analytic_mean": self.analytic.mean,
            "analytic_variance": self.analytic.variance,
            "z_mean": self.z_mean,
            "z_variance": self.z_variance,
            "underflow": self.underflow,
            "overflow": self.overflow,
        }


def _chunk(config: EnsembleConfig, seq: np.random.SeedSequence, size: int) -> np.ndarray:
    rng = np.random.Generator(np.random.PCG64(seq))
    b = sample_field(rng, config.s_d, size)
    return np.asarray(run_single(b, config.geometry, config.sigma_p, rng), dtype=float)


def generate_samples(config: EnsembleConfig, workers: int = 1) -> np.ndarray:
    """All pointer readouts of the ensemble, in run order."""
    n_chunks = -(-config.runs // CHUNK)
    seqs = np.random.SeedSequence(config.seed).spawn(n_chunks)
    sizes = [min(CHUNK, config.runs - i * CHUNK) for i in range(n_chunks)]
    if workers > 1 and n_chunks > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda a: _chunk(config, *a), zip(seqs, sizes)))
    else:
        parts = [_chunk(config, s, n) for s, n in zip(seqs, sizes)]
    return np.concatenate(parts)


def _z_scores(mean, var, n, analytic: PointerMoments):
    if n < 2:
        return None, None
    a_var = analytic.variance
    if a_var == 0.0:
        z = 0.0 if (mean == analytic.mean and var == 0.0) else math.inf
        return z, z
    z_mean = (mean - analytic.mean) / math.sqrt(a_var / n)
    # Standard error of a normal sample variance.
    z_var = (var - a_var) / (a_var * math.sqrt(2.0 / (n - 1)))
    return z_mean, z_var


def run_ensemble(config: EnsembleConfig, workers: int = 1, keep_samples: bool = False) -> EnsembleReport:
    x = generate_samples(config, workers)
    n = x.size
    mean = math.fsum(x) / n
    var = math.fsum((x - mean) ** 2) / (n - 1) if n > 1 else 0.0
    edges = config.edges
    counts, _ = np.histogram(x, bins=edges)
    under = int(np.count_nonzero(x < edges[0]))
    over = int(np.count_nonzero(x > edges[-1]))
    analytic = pointer_moments(config.s_d, config.geometry, config.sigma_p)
    z_mean, z_var = _z_scores(mean, var, n, analytic)
    return EnsembleReport(
        config=config,
        sample_mean=mean,
        sample_variance=var,
        edges=edges,
        counts=counts.astype(np.int64),
        underflow=under,
        overflow=over,
        analytic=analytic,
        z_mean=z_mean,
        z_variance=z_var,
        samples=x if keep_samples else None,
    )
