"""Maximal mediated sets and the H-simplex test.

A lattice set ``L`` with ``P <= L <= conv(P)`` is P-mediated when each point
of ``L`` outside the vertex set ``P`` is the midpoint of two distinct even
points of ``L``. The maximal one is found by repeatedly discarding points that
are not such midpoints, starting from all lattice points of the simplex.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np

from .errors import OddVertex, PointOutsideSimplex
from .geometry import Exponent, barycentric, is_even, lattice_points

__all__ = [
    "MediatedSet",
    "averages",
    "maximal_mediated_set",
    "beta_in_pstar",
    "is_mediated",
    "cached_mediated_set",
]


@dataclass(frozen=True)
class MediatedSet:
    hat_p: tuple[Exponent, ...]
    pstar: frozenset
    is_h_simplex: bool
    n_lattice_points: int

    def __contains__(self, point):
        return tuple(point) in self.pstar

    def sorted_points(self) -> list[Exponent]:
        return sorted(self.pstar)


def averages(L: Iterable, distinct_only: bool = True) -> set:
    """Integer midpoints of pairs of even points of ``L``.

    ``distinct_only`` excludes the pairs ``s == t``; with it off, every even
    point of ``L`` is its own average.
    """
    even = sorted({tuple(p) for p in L if is_even(p)})
    out = set()
    for i, s in enumerate(even):
        start = i + 1 if distinct_only else i
        for t in even[start:]:
            out.add(tuple((a + b) // 2 for a, b in zip(s, t)))
    return out


def _is_distinct_midpoint(beta, members, even_members) -> bool:
    twice = tuple(2 * b for b in beta)
    for s in even_members:
        if s == beta:
            continue
        t = tuple(a - b for a, b in zip(twice, s))
        if t in members:
            return True
    return False


def _mediated_step(hat, L, chunk=2_000_000):
    """Vertices of ``hat`` plus the points of L that are distinct-even midpoints in L."""
    pts = np.array(sorted(L), dtype=np.int64)
    even = pts[np.all(pts % 2 == 0, axis=1)]
    lo = pts.min(axis=0)
    shape = pts.max(axis=0) - lo + 1
    grid = np.zeros(tuple(shape), dtype=bool)
    grid[tuple((pts - lo).T)] = True

    keep = np.zeros(len(pts), dtype=bool)
    rows = max(1, chunk // max(1, len(even)))
    for start in range(0, len(pts), rows):
        B = pts[start:start + rows]
        T = 2 * B[:, None, :] - even[None, :, :] - lo
        ok = np.all((T >= 0) & (T < shape), axis=2)
        T = np.where(ok[..., None], T, 0)
        hit = ok & grid[tuple(np.moveaxis(T, 2, 0))]
        hit &= np.any(even[None, :, :] != B[:, None, :], axis=2)  # s != t
        keep[start:start + rows] = hit.any(axis=1)
    return {p for p, k in zip(map(tuple, pts.tolist()), keep) if k or p in hat}


def maximal_mediated_set(hat_p, sequential: bool = False) -> MediatedSet:
    """Largest ``hat_p``-mediated subset of the simplex ``conv(hat_p)``.

    Each round keeps the vertices plus every point that is a midpoint of two
    distinct even points of the current set; the rounds stop at a fixpoint.
    ``sequential=True`` instead drops one offending point at a time (lowest
    first), which must give the same set.
    """
    hat = tuple(tuple(int(c) for c in v) for v in hat_p)
    odd = [v for v in hat if not is_even(v)]
    if odd:
        raise OddVertex(f"vertex {odd[0]} is not an even lattice point")
    everything = lattice_points(hat)
    hat_set = set(hat)
    L = set(everything)
    if sequential:
        while True:
            even = [p for p in L if is_even(p)]
            bad = next((p for p in sorted(L) if p not in hat_set and not _is_distinct_midpoint(p, L, even)), None)
            if bad is None:
                break
            L.discard(bad)
    else:
        while True:
            nxt = _mediated_step(hat_set, L)
            if nxt == L:
                break
            L = nxt
    return MediatedSet(hat, frozenset(L), len(L) == len(everything), len(everything))


@lru_cache(maxsize=128)
def cached_mediated_set(hat_p: tuple) -> MediatedSet:
    return maximal_mediated_set(hat_p)


def is_mediated(hat_p, L) -> bool:
    """Directly check the defining property of a mediated set."""
    hat = {tuple(v) for v in hat_p}
    L = {tuple(p) for p in L}
    if not hat <= L:
        return False
    return _mediated_step(hat, L) == L


def beta_in_pstar(ms: MediatedSet, beta) -> bool:
    beta = tuple(int(c) for c in beta)
    lam = barycentric(ms.hat_p, beta)
    if lam is None or any(v < 0 for v in lam):
        raise PointOutsideSimplex(f"{beta} is outside conv{ms.hat_p}")
    return beta in ms.pstar
