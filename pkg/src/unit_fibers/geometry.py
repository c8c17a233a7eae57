"""Pair geometry of the hypercomplex construction, sphere/plane sections,
the plane-crossing linkedness predicate and a sampled distance oracle."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy.spatial import cKDTree

from . import linalg
from .errors import (
    DegenerateConfigurationError,
    DegeneratePairError,
    InvalidArgumentError,
    UndefinedLinkednessError,
)
from .fibration import Fiber, _check_n
from .hypercomplex import imaginary_left_matrices

CERTIFICATE_TOL = 1e-12
SECTION_TOL = 1e-10
# crossing distances within this band of 1 are refused by `linked`
CROSSING_TOL = 1e-10
# sections closer than this to the other sphere count as touching
DISJOINT_TOL = 1e-8


@dataclass(frozen=True)
class IntersectionGeometry:
    """Where ``S_y`` and ``S_z`` meet the common line of their containing planes.

    ``c_y``/``c_z`` are the points of the line nearest the two centers,
    ``r_y``/``r_z`` the half-chords the spheres cut on it, and ``d`` the
    distance between the two chord midpoints.  ``ineq_*`` are the margins
    ``r_y + r_z - d``, ``r_y + d - r_z`` and ``r_z + d - r_y``.
    """

    n: int
    y: tuple[float, ...]
    z: tuple[float, ...]
    v: tuple[float, ...]
    v_norm_sq: float
    v_norm_sq_closed_form: float
    c_y: tuple[float, ...]
    c_z: tuple[float, ...]
    d_y_sq: float
    d_z_sq: float
    r_y: float
    r_z: float
    d: float
    ineq_a: float
    ineq_b: float
    ineq_c: float

    def line(self) -> linalg.AffineSubspace:
        """The line through the origin shared by both containing planes."""
        return linalg.AffineSubspace(np.zeros(len(self.v)), [self.v])

    def crossings(self) -> tuple[np.ndarray, np.ndarray]:
        """The two points each sphere cuts on the line, as (2, d) arrays."""
        unit = np.array(self.v) / math.sqrt(self.v_norm_sq)
        cy, cz = np.array(self.c_y), np.array(self.c_z)
        return (np.array([cy - self.r_y * unit, cy + self.r_y * unit]),
                np.array([cz - self.r_z * unit, cz + self.r_z * unit]))

    def to_dict(self) -> dict:
        return {k: list(v) if isinstance(v, tuple) else v for k, v in asdict(self).items()}


def pair_geometry(n: int, y, z) -> IntersectionGeometry:
    _check_n(n)
    y = np.asarray(y, dtype=float).ravel()
    z = np.asarray(z, dtype=float).ravel()
    if y.shape != (n + 1,) or z.shape != (n + 1,):
        raise InvalidArgumentError(f"y and z must have {n + 1} coordinates")
    diff = y - z
    ey = imaginary_left_matrices(n + 1) @ y
    # last block is +<e_m y, z>: that is the sign making v orthogonal to
    # every (e_m y, delta_m) and (e_m z, delta_m)
    v = np.concatenate([diff, ey @ z])
    vv = float(v @ v)
    if vv < 1e-20:
        raise DegeneratePairError("y and z coincide")
    yy, zz, yz = float(y @ y), float(z @ z), float(y @ z)
    dd = float(diff @ diff)
    closed = dd + yy * zz - yz * yz
    ty = float(y @ diff) / vv
    tz = float(z @ diff) / vv
    c_y = ty * v
    c_z = tz * v
    d_y_sq = yy - ty * ty * vv
    d_z_sq = zz - tz * tz * vv
    r_y = math.sqrt(1.0 - d_y_sq) if d_y_sq <= 1.0 else math.nan
    r_z = math.sqrt(1.0 - d_z_sq) if d_z_sq <= 1.0 else math.nan
    gap = c_y - c_z
    d = math.sqrt(float(gap @ gap))
    return IntersectionGeometry(
        n=n,
        y=tuple(y.tolist()),
        z=tuple(z.tolist()),
        v=tuple(v.tolist()),
        v_norm_sq=vv,
        v_norm_sq_closed_form=closed,
        c_y=tuple(c_y.tolist()),
        c_z=tuple(c_z.tolist()),
        d_y_sq=d_y_sq,
        d_z_sq=d_z_sq,
        r_y=r_y,
        r_z=r_z,
        d=d,
        ineq_a=r_y + r_z - d,
        ineq_b=r_y + d - r_z,
        ineq_c=r_z + d - r_y,
    )


@dataclass(frozen=True)
class Certificate:
    verdict: str  # "certified_disjoint" or "inconclusive"
    margins: tuple[float, float, float]

    @property
    def certified(self) -> bool:
        return self.verdict == "certified_disjoint"


def disjointness_certificate(g: IntersectionGeometry) -> Certificate:
    """Certified when the two chords on the common line interleave strictly."""
    margins = (g.ineq_a, g.ineq_b, g.ineq_c)
    ok = all(m > CERTIFICATE_TOL for m in margins)  # NaN compares False
    return Certificate("certified_disjoint" if ok else "inconclusive", margins)


@dataclass(frozen=True, eq=False)
class Section:
    """Result of cutting a unit sphere with an affine subspace.

    ``kind`` is ``"empty"``, ``"point"`` or ``"sphere"``; a sphere with a
    one-vector frame is a pair of points.
    """

    kind: str
    center: np.ndarray | None = None
    radius: float = 0.0
    frame: np.ndarray | None = None

    @property
    def dim(self) -> int:
        """Dimension of the section as a sphere (-1 when empty)."""
        if self.kind == "empty":
            return -1
        if self.kind == "point":
            return 0
        return self.frame.shape[0] - 1

    def points(self) -> np.ndarray:
        """The section's points when it is finite."""
        if self.kind == "empty":
            return np.zeros((0, 0))
        if self.kind == "point":
            return self.center[None, :]
        if self.frame.shape[0] != 1:
            raise InvalidArgumentError("section is not a finite point set")
        u = self.frame[0]
        return np.array([self.center - self.radius * u, self.center + self.radius * u])


def sphere_section(fiber: Fiber, sub: linalg.AffineSubspace) -> Section:
    if sub.ambient_dim != fiber.ambient_dim:
        raise InvalidArgumentError("ambient dimensions differ")
    meet = linalg.affine_intersect(sub, fiber.containing_plane())
    if meet is None:
        return Section("empty")
    foot = meet.project(fiber.center)
    rel = fiber.center - foot
    gap = 1.0 - float(rel @ rel)
    if abs(gap) <= SECTION_TOL:
        return Section("point", foot)
    if gap < 0.0 or meet.dim == 0:
        return Section("empty")
    return Section("sphere", foot, math.sqrt(gap), np.array(meet.frame))


def _section_touches_sphere(section: Section, center: np.ndarray, band: float) -> bool:
    """Whether ``section`` comes within ``band`` of the unit sphere about ``center``."""
    if section.kind == "empty":
        return False
    if section.kind == "point" or section.frame.shape[0] == 1:
        for q in section.points():
            rel = q - center
            if abs(math.sqrt(float(rel @ rel)) - 1.0) <= band:
                return True
        return False
    rel = center - section.center
    w = section.frame @ rel
    h_sq = max(float(rel @ rel - w @ w), 0.0)
    delta = math.sqrt(float(w @ w))
    near = math.sqrt(h_sq + (section.radius - delta) ** 2)
    far = math.sqrt(h_sq + (section.radius + delta) ** 2)
    return near - band <= 1.0 <= far + band


def _check_linkable(f1: Fiber, f2: Fiber) -> None:
    if f1.ambient_dim != f2.ambient_dim or f1.n != f2.n:
        raise InvalidArgumentError("fibers live in different spaces")
    if f1.ambient_dim != 2 * f1.n + 1:
        raise InvalidArgumentError(
            f"linkedness of unit {f1.n}-spheres is only defined here in R^{2 * f1.n + 1}")


def linked(f1: Fiber, f2: Fiber, samples: int | None = None) -> bool:
    """Whether ``f2`` crosses the containing plane of ``f1`` exactly once inside
    and once outside ``f1``.

    Fibers must be disjoint: the section of ``f2`` by ``f1``'s plane is
    required to stay ``DISJOINT_TOL`` away from ``f1``.  Passing ``samples``
    adds a sampled minimum distance check with the same threshold.
    """
    _check_linkable(f1, f2)
    section = sphere_section(f2, f1.containing_plane())
    if _section_touches_sphere(section, f1.center, DISJOINT_TOL):
        raise UndefinedLinkednessError("fibers intersect or touch")
    if samples is not None and min_distance_sampled(f1, f2, samples) <= DISJOINT_TOL:
        raise UndefinedLinkednessError("fibers intersect or touch (sampled)")
    if section.kind != "sphere" or section.frame.shape[0] != 1:
        return False
    dist = []
    for q in section.points():
        rel = q - f1.center
        dist.append(math.sqrt(float(rel @ rel)))
    if any(abs(x - 1.0) <= CROSSING_TOL for x in dist):
        raise DegenerateConfigurationError("plane crossing lies on the sphere")
    return (dist[0] < 1.0) != (dist[1] < 1.0)


def min_distance_sampled(f1: Fiber, f2: Fiber, m: int, seed: int = 0) -> float:
    """Smallest distance between ``m`` sample points on each fiber.

    Each sample of ``f2`` is at least its exact distance to the sphere ``f1``
    from every sample of ``f1``, so only samples whose bound beats the best
    distance found so far are searched.
    """
    if m < 2:
        raise InvalidArgumentError("need at least 2 samples per fiber")
    if f1.ambient_dim != f2.ambient_dim:
        raise InvalidArgumentError("ambient dimensions differ")
    a = f1.sample(m, seed)
    b = f2.sample(m, seed)
    lower = point_sphere_distance(b, f1)
    order = np.argsort(lower, kind="stable")
    tree = cKDTree(a)
    best = math.inf
    for start in range(0, m, 32):
        idx = order[start:start + 32]
        if lower[idx[0]] >= best:
            break
        dist, _ = tree.query(b[idx], k=1)
        best = min(best, float(np.min(dist)))
    return best


def point_sphere_distance(points, fiber: Fiber) -> np.ndarray:
    """Exact distance from each point to the fiber's unit sphere."""
    rel = np.atleast_2d(points) - fiber.center
    w = rel @ fiber.containing_frame.T
    h_sq = np.maximum(np.einsum("ij,ij->i", rel, rel) - np.einsum("ij,ij->i", w, w), 0.0)
    return np.sqrt(h_sq + (np.linalg.norm(w, axis=1) - 1.0) ** 2)
