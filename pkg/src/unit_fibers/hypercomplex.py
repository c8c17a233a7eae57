"""Complex numbers, quaternions and octonions as real coordinate vectors.

The multiplication table is produced by iterated Cayley-Dickson doubling
starting from the reals, with the doubling rule

    (a, b)(c, d) = (ac - conj(d) b, d a + b conj(c)).

Coordinates are ordered so that the first half of an element is ``a`` and
the second half is ``b``.  For quaternions this gives the basis
``1, i, j, k`` with ``ij = k``; for octonions the basis ``e0 .. e7`` where
``e4 = (0, 1)`` and ``e4+m = (0, e_m)``.  ``multiplication_table(8)`` is the
reference for signs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InvalidArgumentError

DIMS = (2, 4, 8)


def _conj(x: np.ndarray) -> np.ndarray:
    out = -x
    out[0] = x[0]
    return out


def cayley_dickson_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Product of two coordinate vectors of equal power-of-two length.

    This is the recursive definition; ``multiply`` uses the cached structure
    constants derived from it.
    """
    size = len(a)
    if size == 1:
        return a * b
    h = size // 2
    p, q = a[:h], a[h:]
    r, s = b[:h], b[h:]
    first = cayley_dickson_product(p, r) - cayley_dickson_product(_conj(s), q)
    second = cayley_dickson_product(s, p) + cayley_dickson_product(q, _conj(r))
    return np.concatenate([first, second])


def _check_dim(dim: int) -> None:
    if dim not in DIMS:
        raise InvalidArgumentError(f"algebra dimension must be one of {DIMS}, got {dim}")


@lru_cache(maxsize=None)
def _left_matrices(dim: int) -> np.ndarray:
    # mats[m] @ y == e_m * y
    eye = np.eye(dim)
    mats = np.empty((dim, dim, dim))
    for m in range(dim):
        for j in range(dim):
            mats[m, :, j] = cayley_dickson_product(eye[m], eye[j])
    mats.setflags(write=False)
    return mats


def left_matrix(dim: int, m: int) -> np.ndarray:
    """Matrix of ``y -> e_m y`` in the algebra of dimension ``dim``."""
    _check_dim(dim)
    if not 0 <= m < dim:
        raise InvalidArgumentError(f"basis index {m} out of range for dim {dim}")
    return _left_matrices(dim)[m]


@lru_cache(maxsize=None)
def imaginary_left_matrices(dim: int) -> np.ndarray:
    """Stack of the ``dim - 1`` matrices for the imaginary units, read-only."""
    _check_dim(dim)
    return _left_matrices(dim)[1:]


def multiplication_table(dim: int) -> list[list[tuple[int, int]]]:
    """``table[i][j] == (sign, k)`` meaning ``e_i e_j = sign * e_k``."""
    _check_dim(dim)
    mats = _left_matrices(dim)
    table = []
    for i in range(dim):
        row = []
        for j in range(dim):
            col = mats[i, :, j]
            k = int(np.flatnonzero(col)[0])
            row.append((int(col[k]), k))
        table.append(row)
    return table


def multiply_arrays(a, b) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise InvalidArgumentError(f"dimension mismatch: {a.shape} vs {b.shape}")
    _check_dim(a.shape[0])
    return np.einsum("m,mij,j->i", a, _left_matrices(a.shape[0]), b)


def imaginary_left_multiply(m: int, y) -> np.ndarray:
    """Return ``e_m y`` for the imaginary unit ``e_m``, ``1 <= m < dim``."""
    y = np.asarray(y, dtype=float)
    if y.ndim != 1:
        raise InvalidArgumentError("y must be a vector")
    _check_dim(y.shape[0])
    if not 1 <= m < y.shape[0]:
        raise InvalidArgumentError(f"imaginary index must be in 1..{y.shape[0] - 1}, got {m}")
    if not np.all(np.isfinite(y)):
        raise InvalidArgumentError("y must be finite")
    return _left_matrices(y.shape[0])[m] @ y


@dataclass(frozen=True)
class HypercomplexElement:
    dim: int
    coords: tuple[float, ...]

    def __post_init__(self):
        _check_dim(self.dim)
        coords = tuple(float(c) for c in self.coords)
        if len(coords) != self.dim:
            raise InvalidArgumentError(f"expected {self.dim} coordinates, got {len(coords)}")
        if not all(math.isfinite(c) for c in coords):
            raise InvalidArgumentError("coordinates must be finite")
        object.__setattr__(self, "coords", coords)

    @classmethod
    def from_array(cls, values) -> HypercomplexElement:
        values = np.asarray(values, dtype=float).ravel()
        return cls(values.shape[0], tuple(values.tolist()))

    @classmethod
    def unit(cls, dim: int, m: int = 0) -> HypercomplexElement:
        """The basis element ``e_m`` (``m = 0`` is the identity)."""
        _check_dim(dim)
        coords = [0.0] * dim
        coords[m] = 1.0
        return cls(dim, tuple(coords))

    def as_array(self) -> np.ndarray:
        return np.array(self.coords)

    @property
    def real(self) -> float:
        return self.coords[0]

    def conjugate(self) -> HypercomplexElement:
        return HypercomplexElement.from_array(_conj(self.as_array()))

    def norm(self) -> float:
        return math.sqrt(sum(c * c for c in self.coords))

    def __add__(self, other: HypercomplexElement) -> HypercomplexElement:
        self._same_dim(other)
        return HypercomplexElement.from_array(self.as_array() + other.as_array())

    def __sub__(self, other: HypercomplexElement) -> HypercomplexElement:
        self._same_dim(other)
        return HypercomplexElement.from_array(self.as_array() - other.as_array())

    def __neg__(self) -> HypercomplexElement:
        return HypercomplexElement.from_array(-self.as_array())

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return HypercomplexElement.from_array(self.as_array() * other)
        if not isinstance(other, HypercomplexElement):
            return NotImplemented
        return multiply(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return HypercomplexElement.from_array(self.as_array() * other)
        return NotImplemented

    def _same_dim(self, other: HypercomplexElement) -> None:
        if self.dim != other.dim:
            raise InvalidArgumentError(f"dimension mismatch: {self.dim} vs {other.dim}")


def multiply(a: HypercomplexElement, b: HypercomplexElement) -> HypercomplexElement:
    if a.dim != b.dim:
        raise InvalidArgumentError(f"dimension mismatch: {a.dim} vs {b.dim}")
    return HypercomplexElement.from_array(multiply_arrays(a.coords, b.coords))
