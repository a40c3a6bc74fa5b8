"""Counting constraints on the face vectors of small ssd polyhedra.

An ssd polyhedron with ``n`` vertices also has ``n`` faces, so Euler's
relation gives ``2(n - 1)`` edges and ``sum (4 - l) alpha_l = 4``. Writing
every face as a triangle plus an excess ``l - 3`` turns the enumeration into
integer partitions of the total excess ``n - 4``.

Vectors with the right face count but a smaller degree sum are reported
separately when that sum is odd: no polyhedron has an odd number of
edge-face incidences.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvalidN
from .polytope import FaceVector

MIN_N = 4
MAX_N = 64


def _partitions(total: int, largest: int):
    """Partitions of ``total`` into parts of size at most ``largest``, parts non-increasing."""
    if total == 0:
        yield ()
        return
    for part in range(min(total, largest), 0, -1):
        for rest in _partitions(total - part, part):
            yield (part,) + rest


def _vector(n: int, excess_parts) -> FaceVector:
    fv = FaceVector()
    for p in excess_parts:
        fv[p + 3] += 1
    fv[3] = n - len(excess_parts)
    return FaceVector({l: c for l, c in fv.items() if c})


def _sort_key(fv: FaceVector):
    # largest faces first, then more of them
    return tuple(-x for pair in sorted(fv.items(), reverse=True) for x in pair)


@dataclass
class CandidateList:
    n: int
    feasible: list = field(default_factory=list)
    excluded_parity: list = field(default_factory=list)

    def to_text(self) -> str:
        lines = [f"n = {self.n}", "feasible:"]
        lines += [f"  {_fmt(fv)}" for fv in self.feasible] or ["  (none)"]
        lines.append("excluded (odd degree sum):")
        lines += [f"  {_fmt(fv)}" for fv in self.excluded_parity] or ["  (none)"]
        return "\n".join(lines)

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "feasible": [dict(sorted(fv.items())) for fv in self.feasible],
            "excluded_parity": [dict(sorted(fv.items())) for fv in self.excluded_parity],
        }


def _fmt(fv: FaceVector) -> str:
    return ", ".join(f"alpha_{l}={c}" for l, c in sorted(fv.items(), reverse=True))


def enumerate_face_vectors(n: int) -> CandidateList:
    """All face vectors compatible with ``n`` vertices, ``n`` faces and ``2(n-1)`` edges."""
    if isinstance(n, bool) or not isinstance(n, int) or not (MIN_N <= n <= MAX_N):
        raise InvalidN(f"n must be an integer in [{MIN_N}, {MAX_N}], got {n!r}")
    largest = n - 4  # faces have at most n - 1 vertices
    out = CandidateList(n)
    for excess in range(n - 4 + 1):
        if excess < n - 4 and (3 * n + excess) % 2 == 0:
            continue
        for parts in _partitions(excess, largest):
            fv = _vector(n, parts)
            if excess == n - 4:
                out.feasible.append(fv)
            else:
                out.excluded_parity.append(fv)
    out.feasible.sort(key=_sort_key)
    out.excluded_parity.sort(key=_sort_key)
    return out
