"""Skew affine planes induced by unit sphere fibers, and the Hurwitz-Radon
criteria for skew fibrations."""

from __future__ import annotations

import numpy as np

from . import linalg
from .errors import InvalidArgumentError
from .fibration import Fiber


def fiber_to_skew_plane(fiber: Fiber) -> linalg.AffineSubspace:
    """The plane through the fiber's center spanned by its normal directions."""
    return fiber.normal_plane()


def skew(a: linalg.AffineSubspace, b: linalg.AffineSubspace) -> bool:
    """True when two n-planes of R^{2n+1} neither meet nor share a direction."""
    d = a.ambient_dim
    if b.ambient_dim != d or a.dim != b.dim or 2 * a.dim + 1 != d:
        raise InvalidArgumentError("skewness needs two n-planes in R^{2n+1}")
    return linalg.span_dim([a.frame, b.frame], extra=b.base - a.base) == d


def hurwitz_radon(q: int) -> int:
    """rho(q) = 2^b + 8a where q = odd * 2^(4a + b), 0 <= b <= 3."""
    if isinstance(q, bool) or not isinstance(q, (int, np.integer)) or q < 1:
        raise InvalidArgumentError(f"q must be a positive integer, got {q!r}")
    q = int(q)
    a, b = divmod((q & -q).bit_length() - 1, 4)
    return (1 << b) + 8 * a


def skew_fibration_exists(n: int, d: int) -> bool:
    """Whether R^d admits a skew fibration by affine n-planes."""
    if n < 0 or d <= n:
        raise InvalidArgumentError(f"need d > n >= 0, got n={n}, d={d}")
    return n <= hurwitz_radon(d - n) - 1


def unit_fibration_dimension_admissible(n: int) -> bool:
    """Whether n + 1 == rho(n + 1), i.e. R^{2n+1} has a skew fibration by n-planes."""
    if n < 0:
        raise InvalidArgumentError(f"n must be nonnegative, got {n}")
    return n + 1 == hurwitz_radon(n + 1)
