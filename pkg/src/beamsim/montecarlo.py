"""Monte Carlo engine for the optimally beamformed link.

Each trial draws a sparse multipath channel, sweeps all beam pairs for the
power-maximizing one, and records log(1 + P_opt / sigma^2).  Trials are
generated in fixed-size chunks, each chunk on its own derived substream,
and per-chunk moment statistics are merged in chunk order -- so results
are bit-identical for any worker count and fully determined by the seed.

Sampling uses Poisson superposition: the total path count of a trial is
Poisson(lambda0), each path lands in a uniformly random beam pair, and
per-pair power sums are formed by segment reduction.  This is
distributionally identical to drawing B independent Poisson(lambda0/B)
pairs (as :func:`beamsim.channel.realize_channel` does) but costs
O(paths) instead of O(B) per trial.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .analytic import snr_scale
from .beam import BeamGrid
from .channel import FadingModel, LinkBudget, sample_path_powers
from .errors import ConfigError, DegenerateSampleError
from .rng import substream

CHUNK_TRIALS = 16_384

_UNITS = ("nats", "bits")

THREADS_ENV_VAR = "BEAMSIM_THREADS"


@dataclass(frozen=True)
class SimConfig:
    """Everything one simulation needs: link, grid, fading, trials, seed."""

    link: LinkBudget
    grid: BeamGrid
    fading: FadingModel
    trials: int
    seed: int
    units: str = "nats"

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials!r}")
        if self.units not in _UNITS:
            raise ValueError(f"units must be one of {_UNITS}, got {self.units!r}")


@dataclass(frozen=True)
class SEEstimate:
    """Sample mean of the per-trial rate with its Monte Carlo uncertainty."""

    mean: float
    std_error: float
    trials: int
    ci95: float
    units: str = "nats"


@dataclass(frozen=True)
class EmpiricalCdf:
    """Empirical conditional CDF of the normalized optimal power.

    Conditioning keeps only trials with at least one multipath component;
    ``discard_fraction`` is the removed share (an estimate of exp(-lambda0)).
    """

    grid: np.ndarray
    cdf: np.ndarray
    trials_kept: int
    trials_total: int

    @property
    def discard_fraction(self) -> float:
        return 1.0 - self.trials_kept / self.trials_total

    def pairs(self) -> list[tuple[float, float]]:
        return list(zip(self.grid.tolist(), self.cdf.tolist()))


def resolve_workers(requested: int | None = None) -> int:
    """Worker count: the BEAMSIM_THREADS env var wins, 0 means auto."""
    env = os.environ.get(THREADS_ENV_VAR)
    if env is not None:
        try:
            requested = int(env)
        except ValueError as exc:
            raise ConfigError(f"{THREADS_ENV_VAR} must be an integer, got {env!r}") from exc
    if requested is None:
        return 1
    if requested < 0:
        raise ConfigError(f"worker count must be >= 0, got {requested!r}")
    if requested == 0:
        return os.cpu_count() or 1
    return requested


def _chunk_sizes(trials: int) -> list[int]:
    full, rem = divmod(trials, CHUNK_TRIALS)
    return [CHUNK_TRIALS] * full + ([rem] if rem else [])


def _trial_maxima(
    seed: int, chunk_index: int, n_trials: int, lambda0: float, b: int, fading: FadingModel
) -> tuple[np.ndarray, np.ndarray]:
    """Per-trial (max pair power sum, total path count) for one chunk."""
    rng = substream(seed, chunk_index)
    counts = rng.poisson(lambda0, size=n_trials)
    total = int(counts.sum())
    maxima = np.zeros(n_trials)
    if total == 0:
        return maxima, counts
    trial_of_path = np.repeat(np.arange(n_trials, dtype=np.int64), counts)
    pair_of_path = rng.integers(0, b, size=total, dtype=np.int64)
    powers = sample_path_powers(fading, total, rng)
    key = trial_of_path * b + pair_of_path
    order = np.argsort(key, kind="stable")
    key = key[order]
    powers = powers[order]
    starts = np.flatnonzero(np.r_[True, np.diff(key) > 0])
    pair_sums = np.add.reduceat(powers, starts)
    np.maximum.at(maxima, key[starts] // b, pair_sums)
    return maxima, counts


def _map_chunks(fn, n_chunks: int, workers: int) -> list:
    if workers <= 1 or n_chunks <= 1:
        return [fn(i) for i in range(n_chunks)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(n_chunks)))


def _merge_moments(parts: list[tuple[int, float, float]]) -> tuple[int, float, float]:
    """Fold per-chunk (count, mean, M2) in order; Chan's parallel update."""
    n, mean, m2 = 0, 0.0, 0.0
    for cn, cmean, cm2 in parts:
        if cn == 0:
            continue
        delta = cmean - mean
        tot = n + cn
        mean += delta * cn / tot
        m2 += cm2 + delta * delta * n * cn / tot
        n = tot
    return n, mean, m2


def estimate_se(config: SimConfig, workers: int | None = None) -> SEEstimate:
    """Mean spectral efficiency over ``config.trials`` independent trials.

    Per trial the rate is ln(1 + rho * z) with z the maximum per-pair sum
    of normalized fading powers; all-empty trials contribute zero rate.
    Deterministic for a fixed seed regardless of worker count.
    """
    rho = snr_scale(config.link, config.grid).rho
    sizes = _chunk_sizes(config.trials)
    nworkers = resolve_workers(workers)

    def run_chunk(i: int) -> tuple[int, float, float]:
        z, _ = _trial_maxima(
            config.seed, i, sizes[i], config.link.lambda0, config.grid.b, config.fading
        )
        rates = np.log1p(rho * z)
        mean = float(rates.mean())
        m2 = float(((rates - mean) ** 2).sum())
        return len(rates), mean, m2

    n, mean, m2 = _merge_moments(_map_chunks(run_chunk, len(sizes), nworkers))
    var = m2 / (n - 1) if n > 1 else 0.0
    std_error = math.sqrt(var / n)
    if config.units == "bits":
        mean /= math.log(2.0)
        std_error /= math.log(2.0)
    return SEEstimate(
        mean=mean,
        std_error=std_error,
        trials=n,
        ci95=1.96 * std_error,
        units=config.units,
    )


def empirical_opt_power_cdf(
    config: SimConfig, grid_points: np.ndarray, workers: int | None = None
) -> EmpiricalCdf:
    """Empirical CDF of the normalized optimal power, given >= 1 path.

    ``grid_points`` must be sorted and nonnegative.  Raises
    :class:`DegenerateSampleError` when every trial came up empty.
    """
    grid = np.asarray(grid_points, dtype=float)
    if grid.ndim != 1 or len(grid) == 0:
        raise ValueError("grid_points must be a nonempty 1-D sequence")
    if (np.diff(grid) < 0).any() or grid[0] < 0:
        raise ValueError("grid_points must be sorted and nonnegative")
    sizes = _chunk_sizes(config.trials)
    nworkers = resolve_workers(workers)

    def run_chunk(i: int) -> tuple[np.ndarray, int]:
        z, counts = _trial_maxima(
            config.seed, i, sizes[i], config.link.lambda0, config.grid.b, config.fading
        )
        kept = np.sort(z[counts > 0])
        return np.searchsorted(kept, grid, side="right"), len(kept)

    below = np.zeros(len(grid), dtype=np.int64)
    kept_total = 0
    for counts_leq, kept in _map_chunks(run_chunk, len(sizes), nworkers):
        below += counts_leq
        kept_total += kept
    if kept_total == 0:
        raise DegenerateSampleError(
            "every trial was empty; the conditional CDF is undefined"
        )
    return EmpiricalCdf(
        grid=grid,
        cdf=below / kept_total,
        trials_kept=kept_total,
        trials_total=config.trials,
    )
