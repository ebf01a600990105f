"""Exact planar geometry over the rationals.

Every predicate here is decided with :class:`fractions.Fraction` arithmetic,
so no sign is ever guessed.  Points are :class:`Point2` named tuples.
"""

from __future__ import annotations

import enum
import itertools
import re
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional, Sequence

from .errors import GeometryError

Rational = Fraction

_RATIONAL_RE = re.compile(r"^(-?\d+)/(\d+)$")


class Point2(NamedTuple):
    x: Fraction
    y: Fraction

    @classmethod
    def of(cls, x, y) -> "Point2":
        return cls(Fraction(x), Fraction(y))

    def __add__(self, other):  # type: ignore[override]
        return Point2(self.x + other.x, self.y + other.y)

    def __sub__(self, other):
        return Point2(self.x - other.x, self.y - other.y)

    def scale(self, k) -> "Point2":
        return Point2(self.x * k, self.y * k)


class Orientation(enum.Enum):
    COUNTERCLOCKWISE = 1
    CLOCKWISE = -1
    COLLINEAR = 0

    @property
    def sign(self) -> int:
        return self.value


def format_rational(q: Fraction) -> str:
    """Serialize as ``"p/q"`` with ``q > 0`` in lowest terms."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    """Inverse of :func:`format_rational`; rejects non-normalized input."""
    m = _RATIONAL_RE.match(text.strip()) if isinstance(text, str) else None
    if m is None:
        raise ValueError(f"not a rational of the form 'p/q': {text!r}")
    p, q = int(m.group(1)), int(m.group(2))
    if q == 0:
        raise ValueError(f"zero denominator: {text!r}")
    value = Fraction(p, q)
    if value.numerator != p or value.denominator != q:
        raise ValueError(f"rational not in lowest terms: {text!r}")
    return value


def det2(ax, ay, bx, by):
    return ax * by - ay * bx


def orient_sign(p: Point2, q: Point2, r: Point2) -> int:
    d = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    return (d > 0) - (d < 0)


def orient(p: Point2, q: Point2, r: Point2) -> Orientation:
    """Sign of ``det(q - p, r - p)`` as an :class:`Orientation`."""
    return Orientation(orient_sign(p, q, r))


def point_in_triangle_strict(p: Point2, a: Point2, b: Point2, c: Point2) -> bool:
    s = orient_sign(a, b, c)
    if s == 0:
        raise GeometryError("degenerate triangle: vertices are collinear")
    return (
        orient_sign(a, b, p) == s
        and orient_sign(b, c, p) == s
        and orient_sign(c, a, p) == s
    )


def general_position(points: Sequence[Point2]) -> bool:
    """True iff the points are pairwise distinct and no three are collinear."""
    pts = list(points)
    if len(set(pts)) != len(pts):
        return False
    return all(orient_sign(a, b, c) != 0 for a, b, c in itertools.combinations(pts, 3))


def convex_position_cyclic(points: Sequence[Point2]) -> Optional[tuple[int, ...]]:
    """Clockwise hull order of ``points`` if all of them are hull vertices.

    The returned cycle starts at index 0.  Returns ``None`` when some point
    is not a vertex of the convex hull.
    """
    pts = list(points)
    n = len(pts)
    if n < 3:
        raise GeometryError("convex position needs at least 3 points")
    order = [0]
    remaining = set(range(1, n))
    # successor of i on the clockwise hull: every other point lies right of i -> j
    while remaining:
        cur = order[-1]
        nxt = None
        for j in sorted(remaining):
            if all(
                orient_sign(pts[cur], pts[j], pts[k]) < 0
                for k in range(n)
                if k != cur and k != j
            ):
                nxt = j
                break
        if nxt is None:
            return None
        order.append(nxt)
        remaining.discard(nxt)
    first, last = order[0], order[-1]
    if not all(orient_sign(pts[last], pts[first], pts[k]) < 0 for k in range(n) if k not in (first, last)):
        return None
    return tuple(order)


# ---------------------------------------------------------------------------
# relative interiors of convex hulls


def _solve_exact(columns: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]):
    """Unique solution of ``[columns] x = rhs`` or ``None``.

    ``None`` when the columns are dependent or the system is inconsistent.
    """
    m, k = len(rhs), len(columns)
    rows = [[Fraction(columns[j][i]) for j in range(k)] + [Fraction(rhs[i])] for i in range(m)]
    r = 0
    for c in range(k):
        piv = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if piv is None:
            return None
        rows[r], rows[piv] = rows[piv], rows[r]
        pv = rows[r][c]
        rows[r] = [v / pv for v in rows[r]]
        for i in range(m):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
    if any(rows[i][k] != 0 for i in range(r, m)):
        return None
    return [rows[i][k] for i in range(k)]


def basic_feasible_solutions(columns: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> set[tuple[Fraction, ...]]:
    """Vertices of ``{x >= 0 : A x = rhs}`` with ``A`` given column-wise."""
    n, m = len(columns), len(rhs)
    found: set[tuple[Fraction, ...]] = set()
    for size in range(1, min(m, n) + 1):
        for support in itertools.combinations(range(n), size):
            sol = _solve_exact([columns[j] for j in support], rhs)
            if sol is None or any(v < 0 for v in sol):
                continue
            x = [Fraction(0)] * n
            for j, v in zip(support, sol):
                x[j] = v
            found.add(tuple(x))
    return found


def relint_intersect(s1: Iterable[Point2], s2: Iterable[Point2]) -> bool:
    """Do the relative interiors of ``Conv(s1)`` and ``Conv(s2)`` meet?

    Decided as strict feasibility of ``sum a_i p_i = sum b_j q_j`` with
    ``sum a = sum b = 1`` and all weights positive: the average of all
    vertices of the (bounded) weight polytope lies in its relative interior,
    so it is strictly positive iff some feasible point is.
    """
    p = list(dict.fromkeys(s1))
    q = list(dict.fromkeys(s2))
    if not p or not q:
        return False
    columns = [(pt.x, pt.y, Fraction(1), Fraction(0)) for pt in p]
    columns += [(-pt.x, -pt.y, Fraction(0), Fraction(1)) for pt in q]
    vertices = basic_feasible_solutions(columns, (0, 0, 1, 1))
    if not vertices:
        return False
    return all(sum(v[j] for v in vertices) > 0 for j in range(len(columns)))


def _separates(line_p: Point2, line_q: Point2, s1, s2) -> bool:
    """Is the line through ``line_p, line_q`` a proper separator of s1, s2?"""
    signs1 = {orient_sign(line_p, line_q, a) for a in s1}
    signs2 = {orient_sign(line_p, line_q, b) for b in s2}
    if signs1 | signs2 == {0}:
        return False
    return (signs1 <= {0, 1} and signs2 <= {0, -1}) or (signs1 <= {0, -1} and signs2 <= {0, 1})


def relint_intersect_by_separation(s1: Iterable[Point2], s2: Iterable[Point2]) -> bool:
    """Same predicate as :func:`relint_intersect`, via proper separation.

    Relative interiors are disjoint iff some line properly separates the two
    hulls.  If one exists, one also exists through two input points, or (when
    everything is collinear) through one input point and perpendicular to
    the direction to another.
    """
    p = list(dict.fromkeys(s1))
    q = list(dict.fromkeys(s2))
    if not p or not q:
        return False
    pts = list(dict.fromkeys(p + q))
    for a, b in itertools.combinations(pts, 2):
        if _separates(a, b, p, q):
            return False
        normal = Point2(-(b.y - a.y), b.x - a.x)
        if _separates(a, a + normal, p, q) or _separates(b, b + normal, p, q):
            return False
    return True


# ---------------------------------------------------------------------------
# small helpers used by the constructions


def line_intersection(a: Point2, b: Point2, c: Point2, d: Point2) -> Optional[Point2]:
    """Intersection of lines ``ab`` and ``cd``; ``None`` if parallel."""
    r = b - a
    s = d - c
    denom = det2(r.x, r.y, s.x, s.y)
    if denom == 0:
        return None
    t = det2(c.x - a.x, c.y - a.y, s.x, s.y) / denom
    return Point2(a.x + t * r.x, a.y + t * r.y)


def clip_convex(polygon: Sequence[Point2], clipper: Sequence[Point2]) -> list[Point2]:
    """Intersection of two convex polygons given in the same orientation."""
    out = list(polygon)
    s = orient_sign(clipper[0], clipper[1], clipper[2])
    for i in range(len(clipper)):
        a, b = clipper[i], clipper[(i + 1) % len(clipper)]
        src, out = out, []
        if not src:
            break
        for j in range(len(src)):
            cur, prv = src[j], src[j - 1]
            cin = orient_sign(a, b, cur) * s >= 0
            pin = orient_sign(a, b, prv) * s >= 0
            if cin:
                if not pin:
                    out.append(line_intersection(prv, cur, a, b))
                out.append(cur)
            elif pin:
                out.append(line_intersection(prv, cur, a, b))
    dedup: list[Point2] = []
    for pt in out:
        if not dedup or dedup[-1] != pt:
            dedup.append(pt)
    if len(dedup) > 1 and dedup[0] == dedup[-1]:
        dedup.pop()
    return dedup


def vertex_average(points: Sequence[Point2]) -> Point2:
    n = len(points)
    return Point2(sum((p.x for p in points), Fraction(0)) / n, sum((p.y for p in points), Fraction(0)) / n)
