"""Randomized verification campaigns, linking matrices and fiber export.

This is the only module that reads or writes files.
"""

from __future__ import annotations

import csv
import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    DegenerateConfigurationError,
    InvalidArgumentError,
    UndefinedLinkednessError,
    UnitFibersError,
    UnsupportedFormatError,
)
from .fibration import SCHEMA_VERSION, Fiber, FibrationSpec, standard_fiber
from .geometry import disjointness_certificate, linked, pair_geometry
from .sampling import ball_points, rng, sphere_points
from .skew import fiber_to_skew_plane, skew

THREADS_ENV = "UNIT_FIBERS_THREADS"
CHUNK = 2048

SELF = "self"
LINKED = "linked"
UNLINKED = "unlinked"
ERR_NOT_DISJOINT = "error:not-disjoint"
ERR_DEGENERATE = "error:degenerate"
ERR_DIMENSION = "error:dimension"
ERR_ASYMMETRIC = "error:asymmetric"


def thread_count() -> int:
    raw = os.environ.get(THREADS_ENV, "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


@dataclass
class Failure:
    y: list[float]
    z: list[float]
    reason: str


@dataclass
class VerificationReport:
    spec: FibrationSpec
    n_pairs: int
    seed: int
    radius_bound: float
    certified_fraction: float
    linked_fraction: float
    skew_fraction: float
    worst_margins: tuple[float, float, float]
    failures: list[Failure] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self, include_timing: bool = False) -> dict:
        out = {
            "schema": SCHEMA_VERSION,
            "spec": self.spec.to_dict(),
            "n_pairs": self.n_pairs,
            "seed": self.seed,
            "radius_bound": self.radius_bound,
            "certified_fraction": self.certified_fraction,
            "linked_fraction": self.linked_fraction,
            "skew_fraction": self.skew_fraction,
            "worst_margins": list(self.worst_margins),
            "failures": [{"y": f.y, "z": f.z, "reason": f.reason} for f in self.failures],
        }
        if include_timing:
            out["wall_time"] = self.wall_time
        return out

    def to_json(self, include_timing: bool = False) -> str:
        """Canonical JSON; without timing it is byte-identical for a fixed seed."""
        return json.dumps(self.to_dict(include_timing), sort_keys=True, indent=2) + "\n"

    def table(self) -> str:
        rows = [
            ("spec", json.dumps(self.spec.to_dict(), sort_keys=True)),
            ("pairs", str(self.n_pairs)),
            ("seed", str(self.seed)),
            ("radius bound", repr(self.radius_bound)),
            ("certified", f"{self.certified_fraction:.6f}"),
            ("linked", f"{self.linked_fraction:.6f}"),
            ("skew", f"{self.skew_fraction:.6f}"),
            ("worst margins", ", ".join(f"{m:.3e}" for m in self.worst_margins)),
            ("failures", str(len(self.failures))),
            ("wall time", f"{self.wall_time:.2f} s"),
        ]
        width = max(len(k) for k, _ in rows)
        return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows)


def _check_pair(n: int, y: np.ndarray, z: np.ndarray):
    reasons = []
    margins = (math.nan, math.nan, math.nan)
    certified = is_linked = is_skew = False
    try:
        cert = disjointness_certificate(pair_geometry(n, y, z))
        margins = cert.margins
        certified = cert.certified
        if not certified:
            reasons.append("certificate inconclusive")
        f1, f2 = standard_fiber(n, y), standard_fiber(n, z)
        try:
            is_linked = linked(f1, f2)
            if not is_linked:
                reasons.append("not linked")
        except UnitFibersError as exc:
            reasons.append(f"linked: {type(exc).__name__}: {exc}")
        is_skew = skew(fiber_to_skew_plane(f1), fiber_to_skew_plane(f2))
        if not is_skew:
            reasons.append("skew planes not skew")
    except UnitFibersError as exc:
        reasons.append(f"{type(exc).__name__}: {exc}")
    return certified, is_linked, is_skew, margins, reasons


def _check_chunk(args):
    n, ys, zs = args
    return [_check_pair(n, y, z) for y, z in zip(ys, zs)]


def campaign_pairs(n: int, n_pairs: int, seed: int, radius_bound: float) -> tuple[np.ndarray, np.ndarray]:
    """The center pairs a campaign evaluates, drawn up front from ``seed``."""
    gen = rng(seed)
    ys = ball_points(gen, n_pairs, n + 1, radius_bound)
    zs = ball_points(gen, n_pairs, n + 1, radius_bound)
    return ys, zs


def verify_construction(n: int, n_pairs: int, seed: int, radius_bound: float = 0.95,
                        threads: int | None = None) -> VerificationReport:
    """Check disjointness, linkedness and skewness on random pairs of fibers."""
    if isinstance(n_pairs, bool) or not isinstance(n_pairs, (int, np.integer)) or n_pairs < 1:
        raise InvalidArgumentError(f"n_pairs must be a positive integer, got {n_pairs!r}")
    if not 0.0 < radius_bound < 1.0:
        raise InvalidArgumentError(f"radius_bound must lie in (0, 1), got {radius_bound}")
    spec = FibrationSpec("standard", n)
    threads = thread_count() if threads is None else max(1, int(threads))
    start = time.perf_counter()
    ys, zs = campaign_pairs(n, n_pairs, seed, radius_bound)
    chunks = [(n, ys[i:i + CHUNK], zs[i:i + CHUNK]) for i in range(0, n_pairs, CHUNK)]
    if threads == 1:
        results = [r for c in chunks for r in _check_chunk(c)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = [r for rs in pool.map(_check_chunk, chunks) for r in rs]

    certified = sum(r[0] for r in results)
    n_linked = sum(r[1] for r in results)
    n_skew = sum(r[2] for r in results)
    margins = np.array([r[3] for r in results])
    with np.errstate(all="ignore"):
        worst = tuple(float(m) for m in np.fmin.reduce(margins, axis=0))
    failures = [
        Failure(ys[i].tolist(), zs[i].tolist(), "; ".join(r[4]))
        for i, r in enumerate(results) if r[4]
    ]
    return VerificationReport(
        spec=spec,
        n_pairs=int(n_pairs),
        seed=int(seed),
        radius_bound=float(radius_bound),
        certified_fraction=certified / n_pairs,
        linked_fraction=n_linked / n_pairs,
        skew_fraction=n_skew / n_pairs,
        worst_margins=worst,
        failures=failures,
        wall_time=time.perf_counter() - start,
    )


def _verdict(f1: Fiber, f2: Fiber) -> str:
    try:
        return LINKED if linked(f1, f2) else UNLINKED
    except UndefinedLinkednessError:
        return ERR_NOT_DISJOINT
    except DegenerateConfigurationError:
        return ERR_DEGENERATE
    except InvalidArgumentError:
        return ERR_DIMENSION


def linking_matrix(fibers: list[Fiber], check_symmetry: bool = True) -> list[list[str]]:
    """Pairwise linkedness verdicts; errors are recorded as ``error:*`` codes.

    With ``check_symmetry`` both argument orders are evaluated and a
    disagreement is reported as ``error:asymmetric``.
    """
    if not fibers:
        raise InvalidArgumentError("need at least one fiber")
    k = len(fibers)
    out = [[SELF if i == j else "" for j in range(k)] for i in range(k)]
    for i in range(k):
        for j in range(i + 1, k):
            v = _verdict(fibers[i], fibers[j])
            if check_symmetry and v in (LINKED, UNLINKED) and _verdict(fibers[j], fibers[i]) != v:
                v = ERR_ASYMMETRIC
            out[i][j] = out[j][i] = v
    return out


def bialy_grid(tori: int = 9, circles: int = 24) -> list[tuple[float, float]]:
    """``(r, phi)`` with r = i / (tori + 1), i = 1..tori, and equally spaced phi."""
    return [(i / (tori + 1), 2.0 * math.pi * j / circles)
            for i in range(1, tori + 1) for j in range(circles)]


def standard_grid(n: int, rings: int, per_ring: int, bound: float = 0.9, seed: int = 0) -> list[np.ndarray]:
    """Centers on ``rings`` spheres of radius ``bound * i / rings`` in R^{n+1}."""
    dirs = sphere_points(n + 1, per_ring, seed)
    return [bound * i / rings * u for i in range(1, rings + 1) for u in dirs]


def spec_grid(spec: FibrationSpec, rings: int, per_ring: int, bound: float = 0.9,
              heights: int = 3) -> list:
    """A default parameter grid for ``spec``, used by the CLI export."""
    if spec.kind == "bialy":
        return bialy_grid(rings, per_ring)
    if spec.kind == "standard":
        return standard_grid(spec.n, rings, per_ring, bound)
    a, b = spec.stack_height
    ts = [a + (b - a) * (k + 1) / (heights + 1) for k in range(heights)]
    return [(p, t) for t in ts for p in spec_grid(spec.base, rings, per_ring, bound, heights)]


def _param_to_json(param):
    if isinstance(param, np.ndarray):
        return param.tolist()
    if isinstance(param, tuple):
        return [_param_to_json(p) for p in param]
    return param


def _fmt(x: float) -> str:
    return repr(float(x))


def export_fibers(spec: FibrationSpec, params, density: int, fmt: str, path,
                  seed: int = 0) -> Path:
    """Write ``density`` samples of each fiber ``spec.fiber(p)`` to ``path``.

    Formats: ``obj`` (closed polylines, circles in R^3 only), ``csv`` (one
    row per point) and ``json`` (fiber records with their samples).  Floats
    are written in shortest round-trip form.
    """
    if density < 8:
        raise InvalidArgumentError(f"density must be at least 8, got {density}")
    if fmt not in ("obj", "csv", "json"):
        raise UnsupportedFormatError(f"unknown format {fmt!r}")
    if fmt == "obj" and (spec.n != 1 or spec.ambient_dim != 3):
        raise UnsupportedFormatError("obj export holds circles in R^3 only")
    params = list(params)
    fibers = [spec.fiber(p) for p in params]
    samples = [f.sample(density, seed) for f in fibers]
    path = Path(path)
    if fmt == "obj":
        with path.open("w") as fh:
            fh.write(f"# {len(fibers)} unit circles, {density} points each\n")
            for pts in samples:
                for p in pts:
                    fh.write("v " + " ".join(_fmt(x) for x in p) + "\n")
            for i in range(len(fibers)):
                idx = [str(i * density + k + 1) for k in range(density)]
                fh.write("l " + " ".join(idx + idx[:1]) + "\n")
    elif fmt == "csv":
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["fiber_id"] + [f"x{k}" for k in range(spec.ambient_dim)])
            for i, pts in enumerate(samples):
                for p in pts:
                    writer.writerow([i] + [_fmt(x) for x in p])
    else:
        doc = {
            "schema": SCHEMA_VERSION,
            "spec": spec.to_dict(),
            "density": density,
            "fibers": [
                {**f.to_dict(), "param": _param_to_json(p), "samples": pts.tolist()}
                for f, p, pts in zip(fibers, params, samples)
            ],
        }
        path.write_text(json.dumps(doc) + "\n")
    return path


def load_fibers_json(path) -> tuple[FibrationSpec, list[Fiber], list[np.ndarray]]:
    doc = json.loads(Path(path).read_text())
    if doc.get("schema") != SCHEMA_VERSION:
        raise InvalidArgumentError(f"unsupported export schema {doc.get('schema')}")
    spec = FibrationSpec.from_dict(doc["spec"])
    fibers = [Fiber.from_dict(rec) for rec in doc["fibers"]]
    samples = [np.array(rec["samples"]) for rec in doc["fibers"]]
    return spec, fibers, samples


def read_obj_polylines(path) -> list[np.ndarray]:
    """Vertices of each ``l`` record of an OBJ file, closing index dropped."""
    verts, lines = [], []
    for raw in Path(path).read_text().splitlines():
        parts = raw.split()
        if not parts:
            continue
        if parts[0] == "v":
            verts.append([float(x) for x in parts[1:]])
        elif parts[0] == "l":
            idx = [int(x) - 1 for x in parts[1:]]
            if len(idx) > 1 and idx[0] == idx[-1]:
                idx = idx[:-1]
            lines.append(idx)
    verts = np.array(verts)
    return [verts[idx] for idx in lines]
