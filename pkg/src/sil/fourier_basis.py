"""Fourier eigenbasis on the periodic unit interval and uniform designs.

Index-to-frequency mapping interleaves cosine and sine so that the kernel
eigenvalues i^(-lambda) stay strictly ordered: psi_1 = 1,
psi_{2m} = sqrt(2) cos(2 pi m x), psi_{2m+1} = sqrt(2) sin(2 pi m x).
"""

from dataclasses import dataclass

import numpy as np

from . import _accel
from .errors import InvalidSampleSize

_MASK64 = (1 << 64) - 1


def splitmix64(state):
    """One SplitMix64 output step; state is any 64-bit integer."""
    z = (int(state) + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def child_seed(master_seed, stream_id):
    """Mix (master_seed, stream_id) into an independent 64-bit child seed."""
    return splitmix64(splitmix64(master_seed) ^ (int(stream_id) & _MASK64))


def _generator(seed):
    # Philox is counter-based: replicates can draw in parallel without
    # coordination, and regeneration from the seed is bit-identical.
    return np.random.Generator(np.random.Philox(key=int(seed) & _MASK64))


@dataclass(frozen=True)
class DesignSample:
    """n sampled points on [0, 1) plus the seed that produced them."""

    points: np.ndarray
    n: int
    seed: int

    def __post_init__(self):
        if self.points.shape != (self.n,):
            raise ValueError("points array must have shape (n,)")


def sample_design(n, seed):
    """n i.i.d. uniform points on [0, 1); deterministic in (n, seed)."""
    if n < 1:
        raise InvalidSampleSize(f"need n >= 1, got {n}")
    points = _generator(seed).random(int(n))
    return DesignSample(points=points, n=int(n), seed=int(seed))


def gaussian_noise(n, sigma2, seed):
    """n-vector of N(0, sigma^2) draws; deterministic in (n, sigma2, seed)."""
    if sigma2 < 0:
        raise ValueError("noise variance must be >= 0")
    if sigma2 == 0.0:
        return np.zeros(int(n))
    return _generator(seed).normal(0.0, np.sqrt(sigma2), int(n))


def eigenfunction_value(i, x):
    """psi_i(x) for a single index and point."""
    if i < 1:
        raise ValueError("eigenfunction index must be >= 1")
    if i == 1:
        return 1.0
    m = i // 2
    ang = 2.0 * np.pi * m * x
    if i % 2 == 0:
        return float(np.sqrt(2.0) * np.cos(ang))
    return float(np.sqrt(2.0) * np.sin(ang))


def feature_block(design, i_lo, i_hi):
    """Matrix of psi_i(x_j), shape (n, i_hi - i_lo + 1), for 1 <= i_lo <= i_hi."""
    if not 1 <= i_lo <= i_hi:
        raise ValueError("need 1 <= i_lo <= i_hi")
    return _accel.fourier_block(design.points, int(i_lo), int(i_hi))


def blocks(n_modes, block_width=4096):
    """Yield (i_lo, i_hi) covering [1, n_modes] in blocks of block_width."""
    lo = 1
    while lo <= n_modes:
        hi = min(lo + block_width - 1, n_modes)
        yield lo, hi
        lo = hi + 1
