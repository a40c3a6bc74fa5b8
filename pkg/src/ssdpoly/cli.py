"""Command-line front end: ``ssdpoly <command> ...``.

Polytopes are written as plain-text documents (see :mod:`ssdpoly.io`) on
stdout or to ``--out``. Angles on the command line are in degrees.

Exit codes: 0 success, 1 verification failed, 2 usage error, 3 numerical
failure. Errors print one line ``error: <ClassName>: <message>`` on stderr.
"""

from __future__ import annotations

import argparse
import math
import sys

from . import io
from .combinat import enumerate_face_vectors
from .errors import SsdError
from .ltype import construct_ltype
from .reconstruct import DEFAULT_MAX_NODES, reconstruct_from_face
from .search import (KAPPA_23, LAMBDA_23, R_23, SearchParams, assemble_ssd23, format_trace,
                     grid_refine, kmw8)
from .verify import verify_ssd


def _emit(text: str, out) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_construct(args) -> int:
    poly = construct_ltype(args.k, args.l, tol=args.tol)
    if args.off:
        with open(args.off, "w") as fh:
            fh.write(io.to_off(poly))
    _emit(io.dumps(poly), args.out)
    return 0


def _cmd_verify(args) -> int:
    poly = io.read_document(args.file)
    report = verify_ssd(poly, args.tol)
    print(report.to_text())
    return 0 if report.passed else 1


def _cmd_reconstruct(args) -> int:
    pts = io.read_points(args.face)
    poly = reconstruct_from_face(pts, tol=args.tol, max_vertices=args.max_vertices,
                                 assume_closure=args.assume_closure, max_nodes=args.max_nodes)
    _emit(io.dumps(poly), args.out)
    return 0


def _cmd_search(args) -> int:
    params = SearchParams(kappa=math.radians(args.kappa), lam=math.radians(args.lam), r=args.r,
                          delta0=args.delta0, n=args.n, shrink=args.shrink, tol=args.tol,
                          max_steps=args.max_steps)
    res = grid_refine(params)
    print(format_trace(res.trace))
    print(f"kappa_deg: {io.fmt(res.kappa_deg)}")
    print(f"lambda_deg: {io.fmt(res.lam_deg)}")
    print(f"r: {io.fmt(res.r)}")
    print(f"error: {res.error:.3e}")
    print(f"steps: {res.steps}")
    poly = assemble_ssd23(res.kappa, res.lam, res.r, tol=args.verify_tol)
    _emit(io.dumps(poly), args.out)
    return 0


def _cmd_preset(args) -> int:
    if args.name == "ssd23":
        poly = assemble_ssd23(math.radians(KAPPA_23), math.radians(LAMBDA_23), R_23)
    else:
        poly = kmw8()
    _emit(io.dumps(poly), args.out)
    return 0


def _cmd_enumerate(args) -> int:
    print(enumerate_face_vectors(args.n).to_text())
    return 0


def _cmd_export(args) -> int:
    poly = io.read_document(args.file)
    text = io.to_off(poly) if args.format == "off" else io.to_obj(poly)
    _emit(text, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ssdpoly", description="Strongly self-dual polyhedra inscribed in the unit sphere.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build an L-type polytope")
    c.add_argument("family", choices=["ltype"])
    c.add_argument("--k", type=int, required=True, help="number of layers")
    c.add_argument("--l", type=int, required=True, help="odd size of the base polygon")
    c.add_argument("--tol", type=float, default=1e-9)
    c.add_argument("--off", help="also write an OFF mesh to this path")
    c.add_argument("--out")
    c.set_defaults(func=_cmd_construct)

    v = sub.add_parser("verify", help="check the ssd property of a polytope document")
    v.add_argument("file")
    v.add_argument("--tol", type=float, default=1e-9)
    v.set_defaults(func=_cmd_verify)

    r = sub.add_parser("reconstruct", help="grow a polytope from one face")
    r.add_argument("--face", required=True, help="file with one x y z triple per line")
    r.add_argument("--assume-closure", type=float, default=None, metavar="EPS",
                   help="merge new points closer than EPS")
    r.add_argument("--tol", type=float, default=1e-9)
    r.add_argument("--max-vertices", type=int, default=200)
    r.add_argument("--max-nodes", type=int, default=DEFAULT_MAX_NODES)
    r.add_argument("--out")
    r.set_defaults(func=_cmd_reconstruct)

    s = sub.add_parser("search", help="grid refinement of the pentagon closure residuals")
    s.add_argument("seed", choices=["pentagon"])
    s.add_argument("--kappa", type=float, default=45.0, help="degrees")
    s.add_argument("--lambda", dest="lam", type=float, default=135.0, help="degrees")
    s.add_argument("--r", type=float, default=0.8)
    s.add_argument("--delta0", type=float, default=0.1)
    s.add_argument("--n", type=int, default=200)
    s.add_argument("--shrink", type=float, default=1.0 / 3.0)
    s.add_argument("--tol", type=float, default=1e-15)
    s.add_argument("--max-steps", type=int, default=40)
    s.add_argument("--verify-tol", type=float, default=1e-9)
    s.add_argument("--out")
    s.set_defaults(func=_cmd_search)

    pr = sub.add_parser("preset", help="a known polytope")
    pr.add_argument("name", choices=["ssd23", "kmw8"])
    pr.add_argument("--out")
    pr.set_defaults(func=_cmd_preset)

    e = sub.add_parser("enumerate", help="admissible face vectors for n vertices")
    e.add_argument("--n", type=int, required=True)
    e.set_defaults(func=_cmd_enumerate)

    x = sub.add_parser("export", help="convert a polytope document to a mesh")
    x.add_argument("file")
    x.add_argument("--format", choices=["off", "obj"], default="off")
    x.add_argument("--out")
    x.set_defaults(func=_cmd_export)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SsdError as exc:
        msg = str(exc).splitlines()[0] if str(exc) else ""
        print(f"error: {type(exc).__name__}: {msg}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
