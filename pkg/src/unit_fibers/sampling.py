"""Deterministic point sets on unit spheres and seeded random draws."""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy.special import ndtri
from scipy.stats import qmc


def rng(seed: int) -> np.random.Generator:
    """PCG64 generator; the bit stream is stable across platforms."""
    return np.random.Generator(np.random.PCG64(seed))


@lru_cache(maxsize=64)
def _sphere_points(k: int, m: int, seed: int) -> np.ndarray:
    pts = _make_sphere_points(k, m, seed)
    pts.flags.writeable = False
    return pts


def sphere_points(k: int, m: int, seed: int = 0) -> np.ndarray:
    """``m`` unit vectors in R^k.

    For ``k == 2`` these are equally spaced angles.  Otherwise a scrambled
    Halton sequence is pushed through the normal quantile function and
    normalized, which keeps the low-discrepancy structure and is
    reproducible for a fixed seed.  The returned array is read-only.
    """
    return _sphere_points(int(k), int(m), int(seed))


def _make_sphere_points(k: int, m: int, seed: int) -> np.ndarray:
    if k == 2:
        t = 2.0 * np.pi * np.arange(m) / m
        return np.column_stack([np.cos(t), np.sin(t)])
    if k == 1:
        return np.array([[1.0], [-1.0]])[np.arange(m) % 2]
    u = qmc.Halton(d=k, scramble=True, seed=seed).random(m)
    g = ndtri(np.clip(u, 1e-12, 1 - 1e-12))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def ball_points(gen: np.random.Generator, count: int, k: int, radius: float) -> np.ndarray:
    """``count`` points uniformly distributed in the open k-ball of ``radius``."""
    g = gen.standard_normal((count, k))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    rad = radius * gen.random(count) ** (1.0 / k)
    return g * rad[:, None]
