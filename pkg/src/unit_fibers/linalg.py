"""Small dense affine linear algebra: frames, affine subspaces, rank."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError

# Relative to the largest singular value of the matrix under test.
RANK_TOL = 1e-10
# Singular values in [ILL_CONDITIONED_TOL, RANK_TOL) (relative) flag a result.
ILL_CONDITIONED_TOL = 1e-12
# Residual accepted when deciding whether a linear system is consistent.
CONSISTENCY_TOL = 1e-9


def orthonormalize(vectors, tol: float | None = None) -> np.ndarray:
    """Gram-Schmidt with one re-orthogonalization pass.

    Returns a ``(k, d)`` array whose rows are orthonormal and span the same
    space as the inputs.  A vector whose residual after projection is below
    ``tol`` times the largest input norm is dropped as dependent.
    """
    tol = RANK_TOL if tol is None else tol
    vecs = np.atleast_2d(np.asarray(vectors, dtype=float))
    if vecs.size == 0:
        return np.zeros((0, vecs.shape[-1] if vecs.ndim == 2 else 0))
    scale = float(np.max(np.linalg.norm(vecs, axis=1)))
    out: list[np.ndarray] = []
    if scale == 0.0:
        return np.zeros((0, vecs.shape[1]))
    for v in vecs:
        w = v.copy()
        for _ in range(2):
            for q in out:
                w -= (q @ w) * q
        nrm = np.linalg.norm(w)
        if nrm < tol * scale:
            continue
        out.append(w / nrm)
    if not out:
        return np.zeros((0, vecs.shape[1]))
    return np.array(out)


def complement(frame: np.ndarray, ambient_dim: int) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of ``frame``'s span."""
    frame = np.asarray(frame, dtype=float).reshape(-1, ambient_dim)
    if frame.shape[0] == 0:
        return np.eye(ambient_dim)
    _, s, vt = np.linalg.svd(frame)
    rank = int(np.sum(s > RANK_TOL * s[0]))
    return vt[rank:].copy()


@dataclass(frozen=True, eq=False)
class AffineSubspace:
    """``base + span(frame)`` with the frame rows kept orthonormal."""

    base: np.ndarray
    frame: np.ndarray
    ill_conditioned: bool = field(default=False, compare=False)

    def __post_init__(self):
        base = np.array(self.base, dtype=float).ravel()
        frame = np.asarray(self.frame, dtype=float)
        if frame.size == 0:
            frame = np.zeros((0, base.shape[0]))
        frame = frame.reshape(-1, base.shape[0])
        if not (np.all(np.isfinite(base)) and np.all(np.isfinite(frame))):
            raise InvalidArgumentError("base and frame must be finite")
        gram = frame @ frame.T
        if frame.shape[0] and np.max(np.abs(gram - np.eye(frame.shape[0]))) > 1e-10:
            frame = orthonormalize(frame)
        base.setflags(write=False)
        frame = np.array(frame)
        frame.setflags(write=False)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "frame", frame)

    @classmethod
    def _trusted(cls, base: np.ndarray, frame: np.ndarray, ill_conditioned: bool = False) -> AffineSubspace:
        # caller guarantees finite values and orthonormal frame rows
        obj = object.__new__(cls)
        object.__setattr__(obj, "base", base)
        object.__setattr__(obj, "frame", frame)
        object.__setattr__(obj, "ill_conditioned", ill_conditioned)
        return obj

    @property
    def ambient_dim(self) -> int:
        return self.base.shape[0]

    @property
    def dim(self) -> int:
        return self.frame.shape[0]

    def project(self, point) -> np.ndarray:
        """Orthogonal projection of ``point`` onto the subspace."""
        rel = np.asarray(point, dtype=float) - self.base
        return self.base + (self.frame @ rel) @ self.frame

    def residual(self, point) -> float:
        """Distance from ``point`` to the subspace."""
        p = np.asarray(point, dtype=float)
        return float(np.linalg.norm(p - self.project(p)))

    def point(self, coeffs) -> np.ndarray:
        return self.base + np.asarray(coeffs, dtype=float) @ self.frame

    def __repr__(self):
        return f"AffineSubspace(dim={self.dim}, ambient_dim={self.ambient_dim}, base={self.base.tolist()})"


def affine_intersect(a: AffineSubspace, b: AffineSubspace, tol: float | None = None) -> AffineSubspace | None:
    """Intersection of two affine subspaces, or ``None`` when it is empty.

    Solves ``a.base + s @ a.frame == b.base + t @ b.frame`` by SVD.  Singular
    values below ``tol`` (relative) are treated as zero; values within two
    decades under that threshold set ``ill_conditioned`` on the result.
    """
    tol = RANK_TOL if tol is None else tol
    if a.ambient_dim != b.ambient_dim:
        raise InvalidArgumentError("ambient dimensions differ")
    d = a.ambient_dim
    rhs = b.base - a.base
    ka, kb = a.dim, b.dim
    if ka + kb == 0:
        if np.linalg.norm(rhs) <= CONSISTENCY_TOL * max(1.0, np.linalg.norm(a.base)):
            return AffineSubspace._trusted(a.base, np.zeros((0, d)))
        return None
    mat = np.concatenate([a.frame, -b.frame]).T  # d x (ka + kb)
    u, s, vt = np.linalg.svd(mat)
    smax = s[0] if s.size else 0.0
    keep = s > tol * smax
    rank = int(np.sum(keep))
    ill = bool(np.any((s <= tol * smax) & (s >= ILL_CONDITIONED_TOL * smax))) if smax > 0 else False
    coeff = u[:, :rank].T @ rhs
    sol = vt[:rank].T @ (coeff / s[:rank])
    miss = mat @ sol - rhs
    if float(miss @ miss) > CONSISTENCY_TOL**2 * max(1.0, float(rhs @ rhs)):
        return None
    base = a.base + sol[:ka] @ a.frame
    null = vt[rank:]
    if null.size:
        # null vectors are orthonormal and a.frame is an isometry, so the
        # directions need no further orthonormalization
        directions = null[:, :ka] @ a.frame
        directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    else:
        directions = np.zeros((0, d))
    return AffineSubspace._trusted(base, directions, ill)


def span_dim(frames, extra=None, tol: float | None = None) -> int:
    """Rank of all frame vectors plus ``extra`` stacked together."""
    tol = RANK_TOL if tol is None else tol
    rows = [np.atleast_2d(np.asarray(f, dtype=float)) for f in frames if np.size(f)]
    if extra is not None and np.size(extra):
        rows.append(np.atleast_2d(np.asarray(extra, dtype=float)))
    if not rows:
        return 0
    mat = np.concatenate(rows)
    s = np.linalg.svd(mat, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > tol * s[0]))
