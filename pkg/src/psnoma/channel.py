"""Rayleigh flat-fading draws and AWGN propagation.

Fading is fast: one independent channel realization per transmitted symbol,
which is what the ergodic error-rate and rate averages assume. All
randomness flows through seedable numpy generators; sweeps derive one child
generator per work unit so results never depend on how work is scheduled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError


@dataclass(frozen=True)
class LinkParams:
    """Channel variances of the two users and the noise spectral density."""

    beta_a: float
    beta_b: float
    n0: float

    def __post_init__(self):
        if not (self.beta_a >= self.beta_b > 0.0):
            raise ParameterError(
                f"need beta_a >= beta_b > 0, got beta_a={self.beta_a}, beta_b={self.beta_b}"
            )
        if self.n0 <= 0.0:
            raise ParameterError(f"noise density must be positive, got {self.n0}")

    @property
    def snr(self) -> float:
        return 1.0 / self.n0

    @classmethod
    def from_snr_db(cls, snr_db: float, beta_a: float, beta_b: float) -> "LinkParams":
        return cls(beta_a=beta_a, beta_b=beta_b, n0=10.0 ** (-snr_db / 10.0))


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def derived_rng(seed: int, *key: int) -> np.random.Generator:
    """Child generator for one work unit, keyed by e.g. (point, chunk) indices.

    Identical (seed, key) always reproduces the identical stream, so a sweep
    partitioned over any number of workers reduces to the same totals.
    """
    return np.random.default_rng(np.random.SeedSequence([int(seed), *map(int, key)]))


def _complex_gaussian(variance: float, rng: np.random.Generator, shape) -> np.ndarray:
    z = rng.standard_normal((*shape, 2))
    return (z[..., 0] + 1j * z[..., 1]) * math.sqrt(variance / 2.0)


def draw_channel(beta: float, rng: np.random.Generator, size: int | None = None):
    """Draw circularly symmetric complex Gaussian gains with variance ``beta``.

    Returns a scalar when ``size`` is None, else a 1-D array of length ``size``.
    """
    if beta <= 0.0:
        raise ParameterError(f"channel variance must be positive, got {beta}")
    if size is None:
        return complex(_complex_gaussian(beta, rng, ()))
    return _complex_gaussian(beta, rng, (size,))


def draw_noise(n0: float, rng: np.random.Generator, size: int | None = None):
    """Draw complex AWGN samples with total variance ``n0`` (``n0/2`` per part)."""
    if n0 < 0.0:
        raise ParameterError(f"noise density must be nonnegative, got {n0}")
    if size is None:
        return complex(_complex_gaussian(n0, rng, ()))
    return _complex_gaussian(n0, rng, (size,))


def propagate(s_c, h, n0: float, rng: np.random.Generator):
    """Pass symbols through the faded channel and add complex AWGN.

    ``n0 == 0`` is allowed for noiseless tests and returns ``h * s_c`` exactly.
    Accepts scalars or broadcastable arrays.
    """
    if n0 < 0.0:
        raise ParameterError(f"noise density must be nonnegative, got {n0}")
    faded = np.multiply(h, s_c)
    if n0 == 0.0:
        return faded
    return faded + _complex_gaussian(n0, rng, np.shape(faded))
