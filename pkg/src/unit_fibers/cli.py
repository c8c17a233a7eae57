"""Command line interface.

Exit codes: 0 when every check passed, 1 when verification failures (or a
domain error such as a point outside the region) occurred, 2 on usage errors.
Vectors are comma separated; write ``--y=-0.3,0`` when the first entry is
negative.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import fibration, geometry, harness, hypercomplex
from .errors import InvalidArgumentError, UnitFibersError
from .skew import fiber_to_skew_plane, hurwitz_radon, skew, unit_fibration_dimension_admissible


def _vector(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma separated vector: {text!r}")


def _interval(text: str) -> tuple[float, float]:
    vals = _vector(text)
    if len(vals) != 2:
        raise argparse.ArgumentTypeError("interval needs two numbers a,b")
    return vals[0], vals[1]


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _spec_from_args(args) -> fibration.FibrationSpec:
    spec = fibration.FibrationSpec(args.kind, 1 if args.kind == "bialy" else args.n)
    if getattr(args, "stack", None):
        spec = fibration.stack(spec, args.stack)
    return spec


def cmd_fiber(args) -> int:
    if args.kind == "bialy":
        fib = fibration.villarceau_fiber(args.r, args.phi, args.handedness)
    else:
        if args.y is None:
            raise InvalidArgumentError("--y is required for the standard construction")
        fib = fibration.standard_fiber(args.n, args.y, force=args.force)
    _emit(_dump(fib.to_dict()), args.out)
    return 0


def cmd_pair(args) -> int:
    g = geometry.pair_geometry(args.n, args.y, args.z)
    cert = geometry.disjointness_certificate(g)
    doc = {"geometry": g.to_dict(),
           "certificate": {"verdict": cert.verdict, "margins": list(cert.margins)}}
    _emit(_dump(doc), args.out)
    return 0 if cert.certified else 1


def _link_verdict(f1, f2) -> str:
    if f1.ambient_dim != 2 * f1.n + 1:
        return "unlinked-by-dimension"
    return harness._verdict(f1, f2)


def cmd_link(args) -> int:
    if args.input:
        _, fibers, _ = harness.load_fibers_json(args.input)
        if fibers and fibers[0].ambient_dim != 2 * fibers[0].n + 1:
            k = len(fibers)
            mat = [["self" if i == j else "unlinked-by-dimension" for j in range(k)] for i in range(k)]
        else:
            mat = harness.linking_matrix(fibers)
        buf = io.StringIO()
        csv.writer(buf).writerows(mat)
        _emit(buf.getvalue(), args.out)
        ok = all(v in ("self", harness.LINKED) for row in mat for v in row)
        return 0 if ok else 1
    if args.y is None or args.z is None:
        raise InvalidArgumentError("link needs --in FILE or both --y and --z")
    f1 = fibration.standard_fiber(args.n, args.y, force=args.force)
    f2 = fibration.standard_fiber(args.n, args.z, force=args.force)
    v12, v21 = _link_verdict(f1, f2), _link_verdict(f2, f1)
    planes_skew = skew(fiber_to_skew_plane(f1), fiber_to_skew_plane(f2))
    _emit(_dump({"verdict": v12, "reverse_verdict": v21, "skew": planes_skew}), args.out)
    return 0 if v12 == v21 == harness.LINKED and planes_skew else 1


def cmd_locate(args) -> int:
    if args.kind == "bialy":
        r, phi, fib = fibration.bialy_locate(args.point, args.handedness)
        doc = {"r": r, "phi": phi, "fiber": fib.to_dict()}
    else:
        y = fibration.locate_fiber(args.n, args.point)
        doc = {"y": y.tolist(), "fiber": fibration.standard_fiber(args.n, y).to_dict()}
    _emit(_dump(doc), args.out)
    return 0


def cmd_verify(args) -> int:
    report = harness.verify_construction(args.n, args.pairs, args.seed, args.bound)
    table = report.table() + "\n"
    sys.stdout.write(table)
    if args.out:
        out = Path(args.out)
        out.write_text(report.to_json())
        out.with_suffix(".txt").write_text(table)
    return 0 if report.passed else 1


def cmd_rho(args) -> int:
    if args.start < 1 or args.stop < args.start:
        raise InvalidArgumentError("need 1 <= start <= stop")
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["q", "rho", "n", "admissible"])
    for q in range(args.start, args.stop + 1):
        w.writerow([q, hurwitz_radon(q), q - 1, int(unit_fibration_dimension_admissible(q - 1))])
    _emit(buf.getvalue(), args.out)
    return 0


def cmd_export(args) -> int:
    spec = _spec_from_args(args)
    params = harness.spec_grid(spec, args.rings, args.per_ring, args.bound)
    harness.export_fibers(spec, params, args.density, args.format, args.out, seed=args.seed)
    sys.stdout.write(f"wrote {len(params)} fibers to {args.out}\n")
    return 0


def cmd_algebra_table(args) -> int:
    table = hypercomplex.multiplication_table(args.dim)
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow([""] + [f"e{j}" for j in range(args.dim)])
    for i, row in enumerate(table):
        w.writerow([f"e{i}"] + [("+" if s > 0 else "-") + f"e{k}" for s, k in row])
    _emit(buf.getvalue(), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="unit-fibers", description="Unit sphere fibrations in R^{2n+1}.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, n=True):
        if n:
            sp.add_argument("--n", type=int, default=1, choices=fibration.FIBER_DIMS)
        sp.add_argument("--out", help="output file (default: stdout)")

    sp = sub.add_parser("fiber", help="construct one fiber")
    common(sp)
    sp.add_argument("--kind", choices=["standard", "bialy"], default="standard")
    sp.add_argument("--y", type=_vector)
    sp.add_argument("--r", type=float, default=0.0)
    sp.add_argument("--phi", type=float, default=0.0)
    sp.add_argument("--handedness", choices=["right", "left"], default="right")
    sp.add_argument("--force", action="store_true", help="allow |y| >= 1")
    sp.set_defaults(func=cmd_fiber)

    sp = sub.add_parser("pair", help="intersection geometry of two fibers")
    common(sp)
    sp.add_argument("--y", type=_vector, required=True)
    sp.add_argument("--z", type=_vector, required=True)
    sp.set_defaults(func=cmd_pair)

    sp = sub.add_parser("link", help="linkedness of two fibers or of an exported set")
    common(sp)
    sp.add_argument("--y", type=_vector)
    sp.add_argument("--z", type=_vector)
    sp.add_argument("--in", dest="input", help="JSON export to build a linking matrix from")
    sp.add_argument("--force", action="store_true")
    sp.set_defaults(func=cmd_link)

    sp = sub.add_parser("locate", help="find the fiber through a point")
    common(sp)
    sp.add_argument("--kind", choices=["standard", "bialy"], default="standard")
    sp.add_argument("--point", type=_vector, required=True)
    sp.add_argument("--handedness", choices=["right", "left"], default="right")
    sp.set_defaults(func=cmd_locate)

    sp = sub.add_parser("verify", help="randomized verification campaign")
    common(sp)
    sp.add_argument("--pairs", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=42)
    sp.add_argument("--bound", type=float, default=0.95)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("rho", help="Hurwitz-Radon table as CSV")
    common(sp, n=False)
    sp.add_argument("--start", type=int, default=1)
    sp.add_argument("--stop", type=int, default=64)
    sp.set_defaults(func=cmd_rho)

    sp = sub.add_parser("export", help="sample fibers to OBJ, CSV or JSON")
    common(sp)
    sp.add_argument("--kind", choices=["standard", "bialy"], default="bialy")
    sp.add_argument("--stack", type=_interval, help="stack over the interval a,b")
    sp.add_argument("--rings", type=int, default=9, help="tori (bialy) or center radii (standard)")
    sp.add_argument("--per-ring", type=int, default=24)
    sp.add_argument("--bound", type=float, default=0.9)
    sp.add_argument("--density", type=int, default=128)
    sp.add_argument("--format", choices=["obj", "csv", "json"], default="obj")
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_export)
    sp.set_defaults(_out_required=True)

    sp = sub.add_parser("algebra-table", help="multiplication table as CSV")
    common(sp, n=False)
    sp.add_argument("--dim", type=int, choices=hypercomplex.DIMS, default=8)
    sp.set_defaults(func=cmd_algebra_table)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "_out_required", False) and not args.out:
        parser.error("--out is required for export")
    try:
        return args.func(args)
    except InvalidArgumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (UnitFibersError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
