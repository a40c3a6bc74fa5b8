"""Plain-text polytope documents and OFF/OBJ mesh export.

A document is a header of ``key: value`` lines followed by indexed blocks::

    ssd-polytope-document
    format_version: 1
    provenance: construct ltype k=1 l=3
    r: 0.33333333333333331
    alpha: 1.6329931618554521
    labels: -
    vertices: 4
    0 0 0 1
    ...
    faces: 4
    0 3 0 1 2
    ...
    sigma: 4
    0 3
    ...
    end

Face lines are ``index size v1 .. vsize``. Reals are written with 17
significant digits, which round-trips IEEE doubles exactly.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .errors import InvalidParams
from .polytope import Polytope

MAGIC = "ssd-polytope-document"
FORMAT_VERSION = 1


class DocumentError(InvalidParams):
    """Malformed polytope document or face file."""


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def dumps(poly: Polytope) -> str:
    n = poly.n_vertices
    lines = [MAGIC, f"format_version: {FORMAT_VERSION}",
             f"provenance: {poly.provenance.replace(chr(10), ' ') or '-'}",
             f"r: {fmt(poly.r) if poly.r is not None else '-'}",
             f"alpha: {fmt(poly.alpha) if poly.alpha is not None else '-'}",
             f"labels: {' '.join(poly.labels) if poly.labels else '-'}",
             f"vertices: {n}"]
    for i, v in enumerate(poly.vertices):
        lines.append(f"{i} {fmt(v[0])} {fmt(v[1])} {fmt(v[2])}")
    lines.append(f"faces: {len(poly.faces)}")
    for i, f in enumerate(poly.faces):
        lines.append(f"{i} {len(f)} " + " ".join(str(j) for j in f))
    if poly.sigma is not None:
        lines.append(f"sigma: {len(poly.sigma)}")
        for i, s in enumerate(poly.sigma):
            lines.append(f"{i} {s}")
    lines.append("end")
    return "\n".join(lines) + "\n"


def _header(line: str, key: str) -> str:
    k, sep, v = line.partition(":")
    if not sep or k.strip() != key:
        raise DocumentError(f"expected '{key}:' but found {line!r}")
    return v.strip()


def _real(text: str):
    return None if text == "-" else float(text)


def loads(text: str) -> Polytope:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines or lines[0] != MAGIC:
        raise DocumentError("not a polytope document")
    it = iter(lines[1:])

    def nxt():
        try:
            return next(it)
        except StopIteration:
            raise DocumentError("document ends early") from None

    try:
        version = int(_header(nxt(), "format_version"))
        if version != FORMAT_VERSION:
            raise DocumentError(f"unsupported format_version {version}")
        prov = _header(nxt(), "provenance")
        r = _real(_header(nxt(), "r"))
        alpha = _real(_header(nxt(), "alpha"))
        lab = _header(nxt(), "labels")
        labels = None if lab == "-" else tuple(lab.split())
        n = int(_header(nxt(), "vertices"))
        verts = np.empty((n, 3))
        for i in range(n):
            parts = nxt().split()
            if len(parts) != 4 or int(parts[0]) != i:
                raise DocumentError(f"bad vertex line {i}")
            verts[i] = [float(p) for p in parts[1:]]
        m = int(_header(nxt(), "faces"))
        faces = []
        for i in range(m):
            parts = [int(p) for p in nxt().split()]
            if len(parts) < 2 or parts[0] != i or parts[1] != len(parts) - 2 or parts[1] < 3:
                raise DocumentError(f"bad face line {i}")
            if any(not 0 <= j < n for j in parts[2:]):
                raise DocumentError(f"face {i} has a vertex index out of range")
            faces.append(tuple(parts[2:]))
        line = nxt()
        sigma = None
        if line.startswith("sigma"):
            k = int(_header(line, "sigma"))
            sigma = []
            for i in range(k):
                a, b = (int(p) for p in nxt().split())
                if a != i or not 0 <= b < m:
                    raise DocumentError(f"bad sigma line {i}")
                sigma.append(b)
            if k != n:
                raise DocumentError("sigma must map every vertex")
            line = nxt()
        if line != "end":
            raise DocumentError(f"expected 'end' but found {line!r}")
    except ValueError as exc:
        if isinstance(exc, DocumentError):
            raise
        raise DocumentError(f"malformed document: {exc}") from None
    if labels is not None and len(labels) != n:
        raise DocumentError("label count differs from vertex count")
    return Polytope(verts, tuple(faces), sigma=sigma, r=r, alpha=alpha, labels=labels,
                    provenance="" if prov == "-" else prov)


def write_document(poly: Polytope, path) -> None:
    Path(path).write_text(dumps(poly))


def read_document(path) -> Polytope:
    return loads(Path(path).read_text())


def read_points(path) -> np.ndarray:
    """Face file: one ``x y z`` triple per line; ``#`` starts a comment."""
    rows = []
    for ln in Path(path).read_text().splitlines():
        ln = ln.split("#", 1)[0].strip()
        if not ln:
            continue
        parts = ln.replace(",", " ").split()
        if len(parts) != 3:
            raise DocumentError(f"expected three numbers per line, got {ln!r}")
        try:
            rows.append([float(p) for p in parts])
        except ValueError:
            raise DocumentError(f"not a number in {ln!r}") from None
    return np.array(rows, dtype=float).reshape(-1, 3)


def to_off(poly: Polytope) -> str:
    lines = ["OFF", f"{poly.n_vertices} {len(poly.faces)} {len(poly.edges)}"]
    lines += [" ".join(fmt(c) for c in v) for v in poly.vertices]
    lines += [f"{len(f)} " + " ".join(str(j) for j in f) for f in poly.faces]
    return "\n".join(lines) + "\n"


def to_obj(poly: Polytope) -> str:
    lines = [f"# {poly.provenance}"] if poly.provenance else []
    lines += ["v " + " ".join(fmt(c) for c in v) for v in poly.vertices]
    lines += ["f " + " ".join(str(j + 1) for j in f) for f in poly.faces]
    return "\n".join(lines) + "\n"
