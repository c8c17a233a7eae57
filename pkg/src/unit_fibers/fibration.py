"""Unit sphere fibrations: the hypercomplex family, Villarceau circles on the
solid torus of major and minor radius 1, stacking, and the inverse maps.

Naming: ``containing_frame`` spans the (n+1)-plane holding a fiber and
``normal_frame`` spans its orthogonal complement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import linalg
from .errors import InvalidArgumentError, NotInRegionError, OutOfRegionError
from .hypercomplex import imaginary_left_matrices
from .sampling import rng, sphere_points

SCHEMA_VERSION = 1
FIBER_DIMS = (1, 3, 7)

NEWTON_MAX_ITER = 50
NEWTON_CONVERGED = 1e-12
NEWTON_ACCEPT = 1e-10
NEWTON_RETRIES = 16


def _readonly(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Fiber:
    """A round unit n-sphere in R^d, d = ``ambient_dim``."""

    n: int
    center: np.ndarray
    containing_frame: np.ndarray
    normal_frame: np.ndarray

    def __post_init__(self):
        center = _readonly(np.ravel(self.center))
        d = center.shape[0]
        cf = _readonly(np.reshape(self.containing_frame, (-1, d)))
        nf = _readonly(np.reshape(self.normal_frame, (-1, d)))
        if cf.shape[0] != self.n + 1 or cf.shape[0] + nf.shape[0] != d:
            raise InvalidArgumentError(
                f"frame sizes {cf.shape[0]}+{nf.shape[0]} do not fit n={self.n} in R^{d}")
        full = np.concatenate([cf, nf])
        if np.max(np.abs(full @ full.T - np.eye(d))) >= 1e-10:
            raise InvalidArgumentError("containing and normal frames are not an orthonormal basis")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "containing_frame", cf)
        object.__setattr__(self, "normal_frame", nf)

    @classmethod
    def _trusted(cls, n: int, center, containing, normal) -> Fiber:
        # frames built in closed form by this module; skips the basis check
        obj = object.__new__(cls)
        object.__setattr__(obj, "n", n)
        object.__setattr__(obj, "center", _readonly(center))
        object.__setattr__(obj, "containing_frame", _readonly(containing))
        object.__setattr__(obj, "normal_frame", _readonly(normal))
        return obj

    @classmethod
    def from_containing_frame(cls, center, frame) -> Fiber:
        frame = linalg.orthonormalize(frame)
        center = np.asarray(center, dtype=float)
        return cls(frame.shape[0] - 1, center, frame, linalg.complement(frame, center.shape[0]))

    radius = 1.0

    @property
    def ambient_dim(self) -> int:
        return self.center.shape[0]

    def containing_plane(self) -> linalg.AffineSubspace:
        return linalg.AffineSubspace._trusted(self.center, self.containing_frame)

    def normal_plane(self) -> linalg.AffineSubspace:
        return linalg.AffineSubspace._trusted(self.center, self.normal_frame)

    def point(self, direction) -> np.ndarray:
        """Point of the fiber in the unit ``direction`` of R^{n+1}."""
        return self.center + np.asarray(direction, dtype=float) @ self.containing_frame

    def sample(self, m: int, seed: int = 0) -> np.ndarray:
        """``m`` points on the fiber (equally spaced when n = 1)."""
        return self.center + sphere_points(self.n + 1, m, seed) @ self.containing_frame

    def normal_projector(self) -> np.ndarray:
        return self.normal_frame.T @ self.normal_frame

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "n": self.n,
            "center": self.center.tolist(),
            "containing_frame": self.containing_frame.tolist(),
            "normal_frame": self.normal_frame.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> Fiber:
        if data.get("schema", SCHEMA_VERSION) != SCHEMA_VERSION:
            raise InvalidArgumentError(f"unsupported fiber schema {data.get('schema')}")
        return cls(int(data["n"]), data["center"], data["containing_frame"], data["normal_frame"])

    def __repr__(self):
        return f"Fiber(n={self.n}, center={self.center.tolist()})"


@lru_cache(maxsize=None)
def _eye(k: int) -> np.ndarray:
    out = np.eye(k)
    out.setflags(write=False)
    return out


def _check_n(n: int) -> None:
    if n not in FIBER_DIMS:
        raise InvalidArgumentError(f"fiber dimension must be one of {FIBER_DIMS}, got {n}")


def normal_generators(n: int, y: np.ndarray) -> np.ndarray:
    """Rows ``(e_m y, delta_m)`` for m = 1..n, spanning the normal directions."""
    ey = imaginary_left_matrices(n + 1) @ y
    return np.hstack([ey, np.eye(n)])


def standard_fiber(n: int, y, force: bool = False) -> Fiber:
    """The fiber centered at ``(y, 0)`` in R^{n+1} x R^n.

    Its normal directions are spanned by ``(e_m y, delta_m)``.  Pairwise
    disjointness is only guaranteed for ``|y| < 1``; ``force`` lifts the
    check.
    """
    _check_n(n)
    y = np.asarray(y, dtype=float).ravel()
    if y.shape != (n + 1,):
        raise InvalidArgumentError(f"y must have {n + 1} coordinates")
    if not np.all(np.isfinite(y)):
        raise InvalidArgumentError("y must be finite")
    s = float(y @ y)
    if s >= 1.0 and not force:
        raise OutOfRegionError(f"|y| = {math.sqrt(s)} is not below 1")
    ey = imaginary_left_matrices(n + 1) @ y
    root = math.sqrt(1.0 + s)
    eye_n, eye_k = _eye(n), _eye(n + 1)
    # generators are mutually orthogonal with common norm sqrt(1 + |y|^2)
    normal = np.concatenate([ey, eye_n], axis=1) / root
    # rows (w, -<e_m y, w>) for the standard basis w; their Gram matrix is
    # (1 + |y|^2) I - y y^T, orthonormalized by its inverse square root
    spanning = np.concatenate([eye_k, -ey.T], axis=1)
    inv_sqrt = eye_k / root + np.outer(y, y) / (root * (root + 1.0))
    containing = inv_sqrt @ spanning
    center = np.concatenate([y, np.zeros(n)])
    return Fiber._trusted(n, center, containing, normal)


def _rotation_z(phi: float) -> np.ndarray:
    c, s = math.cos(phi), math.sin(phi)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def _handed_sign(handedness: str) -> float:
    if handedness == "right":
        return 1.0
    if handedness == "left":
        return -1.0
    raise InvalidArgumentError(f"handedness must be 'left' or 'right', got {handedness!r}")


def villarceau_fiber(r: float, phi: float, handedness: str = "right") -> Fiber:
    """Villarceau circle on the torus of major radius 1 and minor radius ``r``.

    Before rotation by ``phi`` about the z-axis the circle is
    ``(r + cos t, +-sqrt(1 - r^2) sin t, r sin t)``, the sign picking the
    family.
    """
    if not (0.0 <= r < 1.0) or not math.isfinite(phi):
        raise OutOfRegionError(f"minor radius must lie in [0, 1), got {r}")
    h = _handed_sign(handedness) * math.sqrt(1.0 - r * r)
    rot = _rotation_z(phi)
    center = rot @ np.array([r, 0.0, 0.0])
    containing = np.array([[1.0, 0.0, 0.0], [0.0, h, r]]) @ rot.T
    normal = np.array([[0.0, -r, h]]) @ rot.T
    return Fiber._trusted(1, center, containing, normal)


def torus_residual(points, r: float) -> np.ndarray:
    """``(sqrt(x^2 + y^2) - 1)^2 + z^2 - r^2`` for each point."""
    p = np.atleast_2d(points)
    s = np.hypot(p[:, 0], p[:, 1])
    return (s - 1.0) ** 2 + p[:, 2] ** 2 - r * r


def bialy_locate(p, handedness: str = "right") -> tuple[float, float, Fiber]:
    """Find ``(r, phi)`` and the Villarceau fiber through ``p``.

    ``p`` must lie strictly inside the solid torus ``(s - 1)^2 + z^2 < 1``.
    The meridian angle of ``p`` fixes the circle parameter, so ``phi`` is the
    azimuth of ``p`` minus the azimuth of the unrotated circle at that
    parameter.
    """
    p = np.asarray(p, dtype=float).ravel()
    if p.shape != (3,):
        raise InvalidArgumentError("p must be a point of R^3")
    sign = _handed_sign(handedness)
    s = math.hypot(p[0], p[1])
    r = math.hypot(s - 1.0, p[2])
    if not r < 1.0:
        raise OutOfRegionError(f"point {p.tolist()} is not inside the bialy")
    if r == 0.0:
        return 0.0, 0.0, villarceau_fiber(0.0, 0.0, handedness)
    t = math.atan2(p[2], s - 1.0)
    h = sign * math.sqrt(1.0 - r * r)
    base_azimuth = math.atan2(h * math.sin(t), r + math.cos(t))
    phi = (math.atan2(p[1], p[0]) - base_azimuth) % (2.0 * math.pi)
    return r, phi, villarceau_fiber(r, phi, handedness)


def fiber_residuals(n: int, p: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Residuals whose common zeros are the ``y`` with ``p`` on ``S_y``."""
    p1, p2 = p[: n + 1], p[n + 1:]
    ey = imaginary_left_matrices(n + 1) @ y
    plane = ey @ p1 + p2
    diff = p1 - y
    return np.append(plane, diff @ diff + p2 @ p2 - 1.0)


def _fiber_jacobian(n: int, p: np.ndarray, y: np.ndarray) -> np.ndarray:
    p1 = p[: n + 1]
    mats = imaginary_left_matrices(n + 1)
    rows = np.einsum("mij,i->mj", mats, p1)
    return np.vstack([rows, -2.0 * (p1 - y)])


def _newton(n: int, p: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, float]:
    res = fiber_residuals(n, p, y)
    norm = np.linalg.norm(res)
    for _ in range(NEWTON_MAX_ITER):
        if norm < NEWTON_CONVERGED:
            break
        jac = _fiber_jacobian(n, p, y)
        step = np.linalg.lstsq(jac, -res, rcond=None)[0]
        lam = 1.0
        while lam > 1e-6:
            trial = y + lam * step
            trial_res = fiber_residuals(n, p, trial)
            trial_norm = np.linalg.norm(trial_res)
            if trial_norm < norm:
                break
            lam *= 0.5
        else:
            break
        y, res, norm = trial, trial_res, trial_norm
    return y, float(norm)


def locate_fiber(n: int, p) -> np.ndarray:
    """Return ``y`` with ``|y| < 1`` such that ``p`` lies on ``standard_fiber(n, y)``.

    Damped Newton from the first n+1 coordinates of ``p``, then from up to
    16 deterministic perturbations of that guess.
    """
    _check_n(n)
    p = np.asarray(p, dtype=float).ravel()
    if p.shape != (2 * n + 1,):
        raise InvalidArgumentError(f"p must have {2 * n + 1} coordinates")
    if not np.all(np.isfinite(p)):
        raise InvalidArgumentError("p must be finite")
    guess = p[: n + 1].copy()
    perturb = rng(0).uniform(-1.0, 1.0, size=(NEWTON_RETRIES, n + 1))
    outside = None
    for attempt in range(NEWTON_RETRIES + 1):
        y0 = guess if attempt == 0 else guess + perturb[attempt - 1]
        y, norm = _newton(n, p, y0)
        if norm >= NEWTON_ACCEPT:
            continue
        if y @ y < 1.0:
            return y
        outside = y
    if outside is not None:
        raise OutOfRegionError(f"the only fiber through {p.tolist()} has |y| = {np.linalg.norm(outside)}")
    raise NotInRegionError(f"no fiber of the construction passes through {p.tolist()}")


@dataclass(frozen=True)
class FibrationSpec:
    """Which fibration: ``standard`` (n in 1, 3, 7), ``bialy`` or ``stacked``.

    Fibers are indexed by a parameter: ``y`` for standard, ``(r, phi)`` for
    bialy and ``(base_param, t)`` for stacked.
    """

    kind: str
    n: int = 1
    stack_height: tuple[float, float] | None = None
    base: FibrationSpec | None = None

    def __post_init__(self):
        if self.kind == "standard":
            _check_n(self.n)
        elif self.kind == "bialy":
            if self.n != 1:
                raise InvalidArgumentError("the bialy fibration has n = 1")
        elif self.kind == "stacked":
            if self.base is None or self.stack_height is None:
                raise InvalidArgumentError("stacked spec needs base and stack_height")
            a, b = (float(v) for v in self.stack_height)
            if not a < b:
                raise InvalidArgumentError(f"empty stacking interval ({a}, {b})")
            object.__setattr__(self, "stack_height", (a, b))
            object.__setattr__(self, "n", self.base.n)
        else:
            raise InvalidArgumentError(f"unknown fibration kind {self.kind!r}")

    @property
    def ambient_dim(self) -> int:
        if self.kind == "stacked":
            return self.base.ambient_dim + 1
        return 2 * self.n + 1

    def fiber(self, param, force: bool = False) -> Fiber:
        if self.kind == "standard":
            return standard_fiber(self.n, param, force=force)
        if self.kind == "bialy":
            r, phi = param
            return villarceau_fiber(r, phi)
        base_param, t = param
        a, b = self.stack_height
        if not a < t < b:
            raise OutOfRegionError(f"height {t} outside ({a}, {b})")
        return lift_fiber(self.base.fiber(base_param, force=force), t)

    def locate(self, p):
        """Parameter of the fiber through ``p``."""
        p = np.asarray(p, dtype=float).ravel()
        if p.shape != (self.ambient_dim,):
            raise InvalidArgumentError(f"p must have {self.ambient_dim} coordinates")
        if self.kind == "standard":
            return locate_fiber(self.n, p)
        if self.kind == "bialy":
            r, phi, _ = bialy_locate(p)
            return r, phi
        a, b = self.stack_height
        t = float(p[-1])
        if not a < t < b:
            raise OutOfRegionError(f"height {t} outside ({a}, {b})")
        return self.base.locate(p[:-1]), t

    def fiber_through(self, p) -> Fiber:
        return self.fiber(self.locate(p))

    def to_dict(self) -> dict:
        out = {"schema": SCHEMA_VERSION, "kind": self.kind, "n": self.n}
        if self.kind == "stacked":
            out["stack_height"] = list(self.stack_height)
            out["base"] = self.base.to_dict()
        return out

    @classmethod
    def from_dict(cls, data: dict) -> FibrationSpec:
        if data.get("schema", SCHEMA_VERSION) != SCHEMA_VERSION:
            raise InvalidArgumentError(f"unsupported spec schema {data.get('schema')}")
        if data["kind"] == "stacked":
            return cls("stacked", stack_height=tuple(data["stack_height"]),
                       base=cls.from_dict(data["base"]))
        return cls(data["kind"], int(data["n"]))


def lift_fiber(fiber: Fiber, t: float) -> Fiber:
    """Embed ``fiber`` in the hyperplane at height ``t`` one dimension up."""
    d = fiber.ambient_dim
    up = np.zeros((1, d + 1))
    up[0, d] = 1.0
    containing = np.hstack([fiber.containing_frame, np.zeros((fiber.n + 1, 1))])
    normal = np.vstack([np.hstack([fiber.normal_frame, np.zeros((fiber.normal_frame.shape[0], 1))]), up])
    return Fiber._trusted(fiber.n, np.append(fiber.center, t), containing, normal)


def stack(base: FibrationSpec, interval: tuple[float, float]) -> FibrationSpec:
    """Fibration of ``E x (a, b)`` whose fibers are base fibers at fixed height."""
    return FibrationSpec("stacked", stack_height=tuple(interval), base=base)
