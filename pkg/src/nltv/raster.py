"""Image grids, boundary handling, synthetic noise and error metrics.

Images are plain 2-D float64 arrays indexed (row, col). Out-of-range
indices are resolved by half-sample symmetric reflection, so every pixel
access used by the solvers is total.
"""

import dataclasses
import math

import numpy as np

#: Generators that gaussian_field knows how to drive. The id is recorded in
#: run manifests so a dump can be regenerated bit for bit.
KNOWN_PRNGS = ("pcg64-boxmuller",)


def as_raster(a, name="image"):
    """Validate and return ``a`` as a 2-D float64 array."""
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"{name} must be a non-empty 2-D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def reflect_index(k, n):
    """Map an arbitrary integer index onto [0, n) by symmetric reflection.

    The extension mirrors between samples: -1 -> 0, n -> n-1, and is
    periodic with period 2n, so the map is total for any k.
    """
    if n < 1:
        raise ValueError("axis length must be positive")
    k %= 2 * n
    if k >= n:
        k = 2 * n - 1 - k
    return k


def reflect_indices(idx, n):
    """Vectorized reflect_index over an integer array."""
    idx = np.asarray(idx, dtype=np.int64) % (2 * n)
    return np.where(idx >= n, 2 * n - 1 - idx, idx)


@dataclasses.dataclass(frozen=True)
class NoiseSpec:
    """Additive white Gaussian noise, reproducible from (sigma, seed)."""

    sigma: float
    seed: int
    prng_id: str = "pcg64-boxmuller"

    def __post_init__(self):
        if self.sigma < 0:
            raise ValueError(f"sigma must be >= 0, got {self.sigma}")
        if self.prng_id not in KNOWN_PRNGS:
            raise ValueError(f"unknown prng_id {self.prng_id!r}, known: {KNOWN_PRNGS}")


def gaussian_field(shape, spec):
    """Pseudorandom N(0, sigma^2) field of the given shape.

    Uniform draws come from numpy's PCG64 stream seeded with spec.seed and
    are mapped through the Box-Muller transform, which fixes the output
    bit-exactly for a given (sigma, seed, shape).
    """
    if not isinstance(spec, NoiseSpec):
        raise TypeError("spec must be a NoiseSpec")
    m, n = int(shape[0]), int(shape[1])
    count = m * n
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    half = (count + 1) // 2
    u1 = rng.random(half)
    u2 = rng.random(half)
    # log1p(-u1) = log(1 - u1); u1 < 1 so the argument stays in (0, 1].
    radius = np.sqrt(-2.0 * np.log1p(-u1))
    angle = (2.0 * np.pi) * u2
    z = np.concatenate([radius * np.cos(angle), radius * np.sin(angle)])[:count]
    return (spec.sigma * z).reshape(m, n)


def add_gaussian_noise(clean, spec):
    """clean + N(0, sigma^2), deterministic per (sigma, seed, shape)."""
    clean = as_raster(clean, "clean")
    return clean + gaussian_field(clean.shape, spec)


def mse(a, b):
    a = as_raster(a, "a")
    b = as_raster(b, "b")
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    d = a - b
    return float(np.mean(d * d))


def psnr(reference, estimate, peak=255.0):
    """10*log10(peak^2 / MSE) in dB; +inf for identical inputs."""
    err = mse(reference, estimate)
    if err == 0.0:
        return math.inf
    return 10.0 * math.log10(peak * peak / err)
