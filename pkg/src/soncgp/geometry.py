"""Newton simplices, exact barycentric coordinates and lattice points.

All geometry is done in exact rational arithmetic: barycentric coordinates
end up as exponents of the geometric program, so they must not drift.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import (
    ComplexityLimit,
    NonpositiveVertexCoefficient,
    NotASimplex,
    NotSupported,
    OddVertex,
    PointOutsideSimplex,
)
from .poly import Exponent, Polynomial

__all__ = [
    "SupportProfile",
    "affine_rank",
    "barycentric",
    "in_convex_hull",
    "newton_vertices",
    "build_profile",
    "lattice_points",
    "is_even",
]

MAX_LATTICE_POINTS = 200_000


def is_even(point) -> bool:
    return all(c % 2 == 0 for c in point)


def _rank(rows) -> int:
    """Rank of a list of rational row vectors (Gaussian elimination)."""
    m = [[Fraction(v) for v in r] for r in rows]
    if not m:
        return 0
    rank, ncols = 0, len(m[0])
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(m)) if m[i][col] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        for i in range(rank + 1, len(m)):
            if m[i][col] != 0:
                factor = m[i][col] / m[rank][col]
                m[i] = [a - factor * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


def affine_rank(points: Sequence[Sequence[int]]) -> int:
    """Dimension of the affine span of ``points`` (-1 for the empty set)."""
    pts = list(points)
    if not pts:
        return -1
    base = pts[0]
    return _rank([[a - b for a, b in zip(p, base)] for p in pts[1:]])


def barycentric(points: Sequence[Sequence[int]], target: Sequence[int]):
    """Exact affine coordinates of ``target`` w.r.t. affinely independent ``points``.

    Solves ``sum mu_i points[i] = target``, ``sum mu_i = 1``. Returns a tuple
    of Fractions, or ``None`` when ``target`` is outside the affine span.
    Raises ``ValueError`` if the points are affinely dependent.
    """
    k = len(points)
    dim = len(target)
    # augmented system: one row per coordinate plus the affine row
    rows = [[Fraction(points[i][c]) for i in range(k)] + [Fraction(target[c])] for c in range(dim)]
    rows.append([Fraction(1)] * k + [Fraction(1)])
    r = 0
    pivots = []
    for col in range(k):
        pivot = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if pivot is None:
            raise ValueError("points are affinely dependent")
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = 1 / rows[r][col]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                factor = rows[i][col]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[r])]
        pivots.append(r)
        r += 1
    if any(rows[i][k] != 0 for i in range(r, len(rows))):
        return None
    return tuple(rows[i][k] for i in pivots)


def in_convex_hull(point, others) -> bool:
    """Exact membership of ``point`` in ``conv(others)``.

    Uses Caratheodory: ``point`` lies in the hull iff it lies in the hull of
    some affinely independent subset of at most ``dim + 1`` of the points.
    """
    others = [tuple(o) for o in others]
    if not others:
        return False
    point = tuple(point)
    if point in others:
        return True
    dim = affine_rank(others + [point])
    if affine_rank(others) < dim:
        return False
    for size in range(2, dim + 2):
        for subset in itertools.combinations(others, size):
            if affine_rank(subset) != size - 1:
                continue
            mu = barycentric(subset, point)
            if mu is not None and all(m >= 0 for m in mu):
                return True
    return False


def newton_vertices(f: Polynomial) -> list[Exponent]:
    """Vertices of the Newton polytope: support points not in the hull of the rest."""
    support = f.support
    if not support:
        raise ValueError("the zero polynomial has no Newton polytope")
    return [p for i, p in enumerate(support) if not in_convex_hull(p, support[:i] + support[i + 1:])]


@dataclass(frozen=True)
class SupportProfile:
    """Simplex data of a polynomial's support.

    ``vertices[0]`` is the zero vector; the remaining vertices are sorted in
    decreasing lexicographic order. ``lambdas[a]`` is the exact barycentric
    vector of ``a`` with respect to ``vertices``.
    """

    nvars: int
    vertices: tuple[Exponent, ...]
    omega: tuple[Exponent, ...]
    delta: tuple[Exponent, ...]
    delta_lt2d: tuple[Exponent, ...]
    lambdas: dict
    degree2d: int

    @property
    def n(self) -> int:
        """Number of non-constant vertices (the affine dimension of the simplex)."""
        return len(self.vertices) - 1

    def active(self, alpha) -> list[int]:
        """Vertex indices ``j >= 1`` with a positive barycentric weight for ``alpha``."""
        lam = self.lambdas[tuple(alpha)]
        return [j for j in range(1, len(lam)) if lam[j] > 0]


def _order_vertices(vertices):
    zero = tuple(0 for _ in vertices[0])
    rest = sorted((v for v in vertices if v != zero), reverse=True)
    return [zero] + rest


def build_profile(f: Polynomial) -> SupportProfile:
    """Check the simplex assumptions on ``f`` and compute its support profile.

    A missing constant term is allowed as long as adjoining the origin still
    gives a simplex; the constant vertex then carries coefficient zero.

    Raises
    ------
    NotASimplex, NotSupported, OddVertex, NonpositiveVertexCoefficient
        When the assumptions fail.
    """
    support = f.support
    if not support:
        raise NotASimplex("the zero polynomial has no Newton polytope")
    zero = (0,) * f.nvars
    verts = newton_vertices(f)
    if affine_rank(verts) != len(verts) - 1:
        raise NotASimplex(f"Newton polytope has {len(verts)} vertices in dimension {affine_rank(verts)}")
    if zero not in verts:
        if zero in support:
            raise NotASimplex("the origin is not a vertex")  # unreachable for exponent vectors
        extended = newton_vertices(Polynomial(f.nvars, {**f.terms, zero: 1}))
        if affine_rank(extended) != len(extended) - 1:
            raise NotSupported("no constant term and adjoining the origin breaks the simplex")
        verts = extended
    verts = _order_vertices(verts)

    odd = [v for v in verts if not is_even(v)]
    if odd:
        raise OddVertex(f"vertex {odd[0]} has an odd coordinate")
    bad = [v for v in verts[1:] if f.coeff(v) <= 0]
    if bad:
        raise NonpositiveVertexCoefficient(f"vertex {bad[0]} has coefficient {f.coeff(bad[0])}")

    vset = set(verts)
    omega = tuple(a for a in support if a not in vset)
    lambdas = {}
    for a in omega:
        lam = barycentric(verts, a)
        if lam is None or any(v < 0 for v in lam):
            raise PointOutsideSimplex(f"support point {a} is outside the Newton simplex")
        lambdas[a] = lam
    delta = tuple(a for a in omega if f.coeff(a) < 0 or not is_even(a))
    delta_lt2d = tuple(a for a in delta if lambdas[a][0] > 0)
    return SupportProfile(
        nvars=f.nvars,
        vertices=tuple(verts),
        omega=omega,
        delta=delta,
        delta_lt2d=delta_lt2d,
        lambdas=lambdas,
        degree2d=max(sum(v) for v in verts),
    )


def _coordinate_chart(vertices):
    """Pick coordinates on which the simplex is full dimensional."""
    base = vertices[0]
    diffs = [[v[c] - base[c] for c in range(len(base))] for v in vertices[1:]]
    k = len(diffs)
    if k == 0:
        return []
    for coords in itertools.combinations(range(len(base)), k):
        if _rank([[d[c] for c in coords] for d in diffs]) == k:
            return list(coords)
    raise ValueError("vertices are affinely dependent")


def lattice_points(vertices, limit: int = MAX_LATTICE_POINTS) -> list[Exponent]:
    """All integer points of the simplex ``conv(vertices)``, sorted lexicographically.

    Scans the bounding box and keeps points with nonnegative exact barycentric
    coordinates. Raises :class:`ComplexityLimit` above ``limit`` box points.
    """
    verts = [tuple(int(c) for c in v) for v in vertices]
    if not verts:
        return []
    if affine_rank(verts) != len(verts) - 1:
        raise NotASimplex("lattice_points expects the vertices of a simplex")
    dim = len(verts[0])
    lo = [min(v[c] for v in verts) for c in range(dim)]
    hi = [max(v[c] for v in verts) for c in range(dim)]
    box = 1
    for a, b in zip(lo, hi):
        box *= b - a + 1
    if box > limit:
        raise ComplexityLimit(f"bounding box has {box} points, limit is {limit}")

    coords = _coordinate_chart(verts)
    k = len(coords)
    # integer adjugate of the barycentric system restricted to the chart
    B = [[Fraction(verts[i][c]) for i in range(k + 1)] for c in coords] + [[Fraction(1)] * (k + 1)]
    det = _det(B)
    inv = _inverse(B)
    adj = np.array([[int(x * det) for x in row] for row in inv], dtype=object)
    V = np.array(verts, dtype=object)

    grid = np.array(list(itertools.product(*[range(a, b + 1) for a, b in zip(lo, hi)])), dtype=object)
    rhs = np.concatenate([grid[:, coords], np.ones((len(grid), 1), dtype=object)], axis=1)
    w = rhs @ adj.T  # det * barycentric coordinates
    sign = 1 if det > 0 else -1
    inside = np.all(w * sign >= 0, axis=1)
    recon = w @ V
    on_span = np.all(recon == grid * det, axis=1)
    keep = grid[inside & on_span]
    return sorted(tuple(int(c) for c in p) for p in keep)


def _det(m):
    m = [row[:] for row in m]
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        pivot = next((i for i in range(col, n) if m[i][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        for i in range(col + 1, n):
            factor = m[i][col] / m[col][col]
            m[i] = [a - factor * b for a, b in zip(m[i], m[col])]
    return det


def _inverse(m):
    n = len(m)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        pivot = next(i for i in range(col, n) if aug[i][col] != 0)
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for i in range(n):
            if i != col and aug[i][col] != 0:
                factor = aug[i][col]
                aug[i] = [a - factor * b for a, b in zip(aug[i], aug[col])]
    return [row[n:] for row in aug]
