"""Sparse multipath channel generation.

The propagation model is a per-beam-pair view of an extended
Saleh-Valenzuela channel: with ``B`` transmit/receive beam pairs and a
mean total path count ``lambda0``, each pair independently holds a
Poisson(lambda0 / B) number of multipath components, and every component
carries an i.i.d. small-scale fading power normalized to unit mean.  The
large-scale link budget (path loss, noise) enters only through the SNR
scale computed in :mod:`beamsim.analytic`, so fading powers here are
dimensionless.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np


class FadingFamily(enum.Enum):
    NAKAGAMI_M = "nakagami_m"
    RAYLEIGH = "rayleigh"
    RICIAN_K = "rician_k"


@dataclass(frozen=True)
class FadingModel:
    """Small-scale fading family plus its parameter.

    ``parameter`` is the Nakagami shape m (>= 0.5) for NAKAGAMI_M, the
    linear Rician factor K (>= 0) for RICIAN_K, and unused for RAYLEIGH.
    """

    family: FadingFamily
    parameter: float | None = None

    def __post_init__(self) -> None:
        if self.family is FadingFamily.NAKAGAMI_M:
            if self.parameter is None or self.parameter < 0.5:
                raise ValueError(
                    f"Nakagami shape must be >= 0.5, got {self.parameter!r}"
                )
        elif self.family is FadingFamily.RICIAN_K:
            if self.parameter is None or self.parameter < 0.0:
                raise ValueError(
                    f"Rician K factor must be >= 0, got {self.parameter!r}"
                )

    @classmethod
    def nakagami(cls, m: float) -> "FadingModel":
        return cls(FadingFamily.NAKAGAMI_M, float(m))

    @classmethod
    def rayleigh(cls) -> "FadingModel":
        return cls(FadingFamily.RAYLEIGH)

    @classmethod
    def rician(cls, k_linear: float) -> "FadingModel":
        return cls(FadingFamily.RICIAN_K, float(k_linear))

    def effective_nakagami_m(self) -> float:
        """Nakagami shape to use when a Gamma-power analytic model is needed."""
        if self.family is FadingFamily.NAKAGAMI_M:
            return float(self.parameter)  # type: ignore[arg-type]
        if self.family is FadingFamily.RAYLEIGH:
            return 1.0
        return rician_k_to_nakagami_m(float(self.parameter))  # type: ignore[arg-type]


@dataclass(frozen=True)
class LinkBudget:
    """Large-scale link parameters; transmit power is normalized to 1.

    ``intercept_c`` and ``alpha`` are the path-loss intercept and exponent,
    ``distance_d`` is in meters, ``noise_power`` is linear watts, and
    ``lambda0`` is the mean total multipath count of the link.
    """

    intercept_c: float
    distance_d: float
    alpha: float
    noise_power: float
    lambda0: float

    def __post_init__(self) -> None:
        for name in ("intercept_c", "distance_d", "alpha", "noise_power", "lambda0"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"LinkBudget.{name} must be > 0, got {getattr(self, name)!r}")

    @property
    def path_gain(self) -> float:
        """c * d^(-alpha), the distance-dependent power attenuation."""
        return self.intercept_c * self.distance_d ** (-self.alpha)

    @classmethod
    def from_snr_coeff(cls, snr_coeff: float, lambda0: float) -> "LinkBudget":
        """Budget with c*d^(-alpha)/sigma^2 fixed to ``snr_coeff`` directly."""
        return cls(
            intercept_c=float(snr_coeff),
            distance_d=1.0,
            alpha=2.0,
            noise_power=1.0,
            lambda0=float(lambda0),
        )


@dataclass(frozen=True)
class ChannelRealization:
    """One Monte Carlo draw of the per-pair multipath structure.

    ``per_pair_powers[i]`` holds the normalized (unit-mean) fading powers
    of the paths falling inside beam pair ``i``; ``counts[i]`` is its
    length.
    """

    per_pair_powers: tuple[np.ndarray, ...]
    counts: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if len(self.per_pair_powers) != len(self.counts):
            raise ValueError("counts and per_pair_powers disagree in length")
        for i, arr in enumerate(self.per_pair_powers):
            if len(arr) != self.counts[i]:
                raise ValueError(f"counts[{i}] does not match stored paths")

    @property
    def num_pairs(self) -> int:
        return len(self.per_pair_powers)

    def pair_sums(self) -> np.ndarray:
        """Summed normalized fading power per beam pair."""
        return np.array([arr.sum() for arr in self.per_pair_powers])


def per_beam_intensity(lambda0: float, b: int) -> float:
    """Mean path count per beam pair when lambda0 paths split over b pairs."""
    if not lambda0 > 0.0:
        raise ValueError(f"lambda0 must be > 0, got {lambda0!r}")
    if b < 1:
        raise ValueError(f"beam pair count must be >= 1, got {b!r}")
    return lambda0 / b


def draw_path_count(lambda_d: float, rng: np.random.Generator) -> int:
    """Poisson path count for one beam pair."""
    if not lambda_d > 0.0:
        raise ValueError(f"lambda_d must be > 0, got {lambda_d!r}")
    return int(rng.poisson(lambda_d))


def rician_k_to_nakagami_m(k_linear: float) -> float:
    """Moment-matched Nakagami shape for a Rician factor K: (K+1)^2/(2K+1)."""
    if k_linear < 0.0:
        raise ValueError(f"K must be >= 0, got {k_linear!r}")
    return (k_linear + 1.0) ** 2 / (2.0 * k_linear + 1.0)


def sample_path_powers(model: FadingModel, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``n`` i.i.d. normalized path powers |g|^2 with E[|g|^2] = 1.

    Nakagami-m amplitudes give Gamma(m, 1/m) powers; Rayleigh is the m=1
    special case; a Rician amplitude with factor K gives a scaled
    noncentral chi-square power (2 degrees of freedom, noncentrality 2K,
    scaled by 1/(2(1+K))).
    """
    if model.family is FadingFamily.NAKAGAMI_M:
        m = float(model.parameter)  # type: ignore[arg-type]
        return rng.gamma(shape=m, scale=1.0 / m, size=n)
    if model.family is FadingFamily.RAYLEIGH:
        return rng.standard_exponential(size=n)
    k = float(model.parameter)  # type: ignore[arg-type]
    return rng.noncentral_chisquare(2.0, 2.0 * k, size=n) / (2.0 * (1.0 + k))


def sample_pair_power_sums(
    model: FadingModel, counts: np.ndarray, rng: np.random.Generator
) -> np.ndarray:
    """Summed normalized power for pairs holding ``counts`` paths each.

    Uses the additivity of the per-family power laws: a sum of n
    Gamma(m, 1/m) powers is Gamma(n*m, 1/m), and a sum of n Rician powers
    is noncentral chi-square with 2n degrees of freedom and noncentrality
    2nK (same 1/(2(1+K)) scale).  Entries with count 0 come back as 0.
    """
    counts = np.asarray(counts)
    out = np.zeros(counts.shape, dtype=float)
    nz = counts > 0
    if not nz.any():
        return out
    n = counts[nz].astype(float)
    if model.family is FadingFamily.NAKAGAMI_M:
        m = float(model.parameter)  # type: ignore[arg-type]
        out[nz] = rng.gamma(shape=m * n, scale=1.0 / m)
    elif model.family is FadingFamily.RAYLEIGH:
        out[nz] = rng.gamma(shape=n, scale=1.0)
    else:
        k = float(model.parameter)  # type: ignore[arg-type]
        out[nz] = rng.noncentral_chisquare(2.0 * n, 2.0 * k * n) / (2.0 * (1.0 + k))
    return out


def draw_fading_power(model: FadingModel, rng: np.random.Generator) -> float:
    """One normalized path power |g|^2 (mean 1) under the given family."""
    return float(sample_path_powers(model, 1, rng)[0])


def realize_channel(
    lambda0: float, b: int, model: FadingModel, rng: np.random.Generator
) -> ChannelRealization:
    """Draw one channel realization: B independent Poisson beam pairs.

    The per-pair intensity is lambda0 / b, so the total path count over
    all pairs is Poisson(lambda0) by superposition.
    """
    lam_d = per_beam_intensity(lambda0, b)
    counts = rng.poisson(lam_d, size=b)
    powers = tuple(
        sample_path_powers(model, int(c), rng) if c else np.empty(0) for c in counts
    )
    return ChannelRealization(per_pair_powers=powers, counts=counts)
