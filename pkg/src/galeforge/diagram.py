"""Plane affine Gale diagrams and the black/white face criterion.

A :class:`Diagram` holds ``2d + 4`` labeled black and white points.  Faces of
the dual polytope are decided by the black/white property of the complement:
``M`` spans a face iff the relative interiors of the hulls of the black and
of the white points of ``X \\ M`` intersect.
"""

from __future__ import annotations

import enum
import itertools
import json
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional, Sequence

from . import exactgeom as eg
from .errors import DegenerateDiagramError, DiagramError, NotATDiagramError
from .exactgeom import Point2

VertexSubset = frozenset

_BLACK_RE = re.compile(r"^A[1-9]\d*$")
_WHITE_RE = re.compile(r"^B[1-9]\d*$")


class Color(enum.Enum):
    BLACK = "black"
    WHITE = "white"


@dataclass(frozen=True)
class DiagramPoint:
    label: str
    color: Color
    position: Point2


@dataclass(frozen=True)
class Diagram:
    """Labeled black/white point set in the plane.

    ``black_cycle`` lists black labels clockwise; it may be empty when the
    black points are not in convex position.
    """

    d: int
    points: tuple[DiagramPoint, ...]
    black_cycle: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(self, "black_cycle", tuple(self.black_cycle))
        if self.d < 0:
            raise DiagramError(f"d must be nonnegative, got {self.d}")
        if len(self.points) != 2 * self.d + 4:
            raise DiagramError(f"expected {2 * self.d + 4} points for d={self.d}, got {len(self.points)}")
        labels = [p.label for p in self.points]
        if len(set(labels)) != len(labels):
            raise DiagramError("duplicate labels")
        if self.black_cycle:
            blacks = {p.label for p in self.points if p.color is Color.BLACK}
            if len(self.black_cycle) != len(blacks) or set(self.black_cycle) != blacks:
                raise DiagramError("black_cycle must list every black label exactly once")
        pos = [p.position for p in self.points]
        if all(eg.orient_sign(pos[0], a, b) == 0 for a, b in itertools.combinations(pos[1:], 2)):
            raise DegenerateDiagramError("points do not affinely span the plane")

    # -- lookup ---------------------------------------------------------------

    @cached_property
    def _index(self) -> dict[str, int]:
        return {p.label: i for i, p in enumerate(self.points)}

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(p.label for p in self.points)

    @property
    def blacks(self) -> tuple[str, ...]:
        return tuple(p.label for p in self.points if p.color is Color.BLACK)

    @property
    def whites(self) -> tuple[str, ...]:
        return tuple(p.label for p in self.points if p.color is Color.WHITE)

    def point(self, label: str) -> DiagramPoint:
        try:
            return self.points[self._index[label]]
        except KeyError:
            raise DiagramError(f"unknown label {label!r}") from None

    def pos(self, label: str) -> Point2:
        return self.point(label).position

    def color(self, label: str) -> Color:
        return self.point(label).color

    def check_labels(self, labels: Iterable[str]) -> frozenset:
        m = frozenset(labels)
        unknown = m - set(self._index)
        if unknown:
            raise DiagramError(f"unknown labels: {sorted(unknown)}")
        return m

    # -- cyclic structure of the black polygon ------------------------------

    def cycle_index(self, label: str) -> int:
        return self._cycle_pos[label]

    @cached_property
    def _cycle_pos(self) -> dict[str, int]:
        return {a: i for i, a in enumerate(self.black_cycle)}

    def black_at(self, i: int) -> str:
        """Black label at cyclic position ``i`` (indices wrap around)."""
        return self.black_cycle[i % len(self.black_cycle)]

    # -- exact orientation table -------------------------------------------

    @cached_property
    def _integer_coords(self) -> list[tuple[int, int]]:
        # a uniform positive scaling preserves every orientation
        den = 1
        for p in self.points:
            den = math.lcm(den, p.position.x.denominator, p.position.y.denominator)
        return [(int(p.position.x * den), int(p.position.y * den)) for p in self.points]

    @cached_property
    def _signs(self) -> list[list[list[int]]]:
        c = self._integer_coords
        n = len(c)
        table = [[[0] * n for _ in range(n)] for _ in range(n)]
        for i in range(n):
            xi, yi = c[i]
            for j in range(n):
                dxj, dyj = c[j][0] - xi, c[j][1] - yi
                row = table[i][j]
                for k in range(n):
                    v = dxj * (c[k][1] - yi) - dyj * (c[k][0] - xi)
                    row[k] = (v > 0) - (v < 0)
        return table

    def sign(self, a: str, b: str, c: str) -> int:
        """Orientation sign of three labeled points."""
        ix = self._index
        return self._signs[ix[a]][ix[b]][ix[c]]

    def in_triangle(self, p: str, a: str, b: str, c: str) -> bool:
        s = self.sign(a, b, c)
        if s == 0:
            raise eg.GeometryError("degenerate triangle: vertices are collinear")
        return self.sign(a, b, p) == s and self.sign(b, c, p) == s and self.sign(c, a, p) == s

    @cached_property
    def in_general_position(self) -> bool:
        return eg.general_position([p.position for p in self.points])

    # -- serialization --------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "points": [
                {
                    "label": p.label,
                    "color": p.color.value,
                    "x": eg.format_rational(p.position.x),
                    "y": eg.format_rational(p.position.y),
                }
                for p in self.points
            ],
            "black_cycle": list(self.black_cycle),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, data: dict) -> "Diagram":
        try:
            d = data["d"]
            raw_points = data["points"]
            cycle = data.get("black_cycle", [])
        except (KeyError, TypeError) as exc:
            raise DiagramError(f"malformed diagram document: {exc}") from None
        if not isinstance(d, int) or isinstance(d, bool):
            raise DiagramError("'d' must be an integer")
        points = []
        for raw in raw_points:
            try:
                label, color = raw["label"], Color(raw["color"])
                x, y = eg.parse_rational(raw["x"]), eg.parse_rational(raw["y"])
            except (KeyError, TypeError, ValueError) as exc:
                raise DiagramError(f"malformed point {raw!r}: {exc}") from None
            pattern = _BLACK_RE if color is Color.BLACK else _WHITE_RE
            if not pattern.match(str(label)):
                raise DiagramError(f"label {label!r} does not fit color {color.value}")
            points.append(DiagramPoint(label, color, Point2(x, y)))
        for name, c in (("black", Color.BLACK), ("white", Color.WHITE)):
            idx = sorted(int(p.label[1:]) for p in points if p.color is c)
            if idx != list(range(1, len(idx) + 1)):
                raise DiagramError(f"{name} labels must be numbered consecutively from 1")
        return cls(d, tuple(points), tuple(cycle))

    @classmethod
    def from_json(cls, text: str) -> "Diagram":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DiagramError(f"invalid JSON: {exc}") from None
        return cls.from_dict(data)


def make_diagram(d: int, blacks: Sequence, whites: Sequence, *, clockwise: bool = True) -> Diagram:
    """Build a diagram from coordinate pairs.

    Blacks are labeled ``A1..`` in the given order, whites ``B1..``.  The
    black cycle is recorded when the blacks are in convex position.
    """
    pts = [DiagramPoint(f"A{i + 1}", Color.BLACK, Point2.of(*xy)) for i, xy in enumerate(blacks)]
    pts += [DiagramPoint(f"B{i + 1}", Color.WHITE, Point2.of(*xy)) for i, xy in enumerate(whites)]
    cycle: tuple[str, ...] = ()
    bpos = [p.position for p in pts[: len(blacks)]]
    if len(bpos) >= 3 and eg.general_position(bpos):
        order = eg.convex_position_cyclic(bpos)
        if order is not None:
            cycle = tuple(f"A{i + 1}" for i in order)
    return Diagram(d, tuple(pts), cycle)


# ---------------------------------------------------------------------------
# face criterion


def _bw_general_position(X: Diagram, blacks: list[str], whites: list[str]) -> bool:
    pts = blacks + whites
    if len(pts) <= 2:
        # one black, one white, distinct
        return False
    ix = X._index
    signs = X._signs
    bi = [ix[b] for b in blacks]
    wi = [ix[w] for w in whites]
    for p, q in itertools.combinations(bi + wi, 2):
        row = signs[p][q]
        sb = {row[k] for k in bi if k != p and k != q}
        sw = {row[k] for k in wi if k != p and k != q}
        # a line through two input points properly separates the sets
        if (sb <= {1} and sw <= {-1}) or (sb <= {-1} and sw <= {1}):
            return False
    return True


def bw_property(X: Diagram, M: Iterable[str]) -> bool:
    """Black/white property of the subset ``M`` of ``X``."""
    m = X.check_labels(M)
    blacks = [a for a in X.labels if a in m and X.color(a) is Color.BLACK]
    whites = [a for a in X.labels if a in m and X.color(a) is Color.WHITE]
    if not blacks or not whites:
        return False
    if X.in_general_position:
        return _bw_general_position(X, blacks, whites)
    return eg.relint_intersect([X.pos(b) for b in blacks], [X.pos(w) for w in whites])


def is_face(X: Diagram, M: Iterable[str]) -> bool:
    """Does ``M`` span a proper face of the dual polytope?"""
    m = X.check_labels(M)
    if not 1 <= len(m) <= 2 * X.d:
        raise DiagramError(f"face queries need 1 <= |M| <= {2 * X.d}, got {len(m)}")
    return bw_property(X, set(X.labels) - m)


def is_polytope_diagram(X: Diagram) -> bool:
    everything = set(X.labels)
    return all(bw_property(X, everything - {a}) for a in X.labels)


def is_neighborly_diagram(X: Diagram) -> bool:
    if X.d < 1:
        raise DiagramError("neighborliness is defined here for d >= 1")
    return all(is_face(X, m) for m in itertools.combinations(X.labels, X.d))


def _blacks_clockwise(X: Diagram) -> bool:
    cyc = X.black_cycle
    n = len(cyc)
    if n < 3 or n != len(X.blacks):
        return False
    order = eg.convex_position_cyclic([X.pos(a) for a in cyc])
    return order == tuple(range(n))


def is_t_diagram(X: Diagram) -> bool:
    if not X.in_general_position:
        return False
    if len(X.blacks) != X.d + 3 or not _blacks_clockwise(X):
        return False
    whites = X.whites
    for a, b, c in itertools.combinations(X.black_cycle, 3):
        if sum(X.in_triangle(w, a, b, c) for w in whites) != 1:
            return False
    # inside some fan triangle <=> inside the polygon
    a0 = X.black_cycle[0]
    fan = list(zip(X.black_cycle[1:-1], X.black_cycle[2:]))
    return all(any(X.in_triangle(w, a0, b, c) for b, c in fan) for w in whites)


def is_T_diagram(X: Diagram) -> bool:
    return X.d >= 2 and is_t_diagram(X) and is_polytope_diagram(X) and is_neighborly_diagram(X)


# ---------------------------------------------------------------------------
# boundary triangles, correspondence and adjacency of whites


def _require_t(X: Diagram) -> None:
    if not is_t_diagram(X):
        raise NotATDiagramError("operation requires a t-diagram")


def corresponding_white(X: Diagram, a: str) -> str:
    """The white inside the boundary triangle of black ``a``."""
    i = X.cycle_index(a)
    prv, nxt = X.black_at(i - 1), X.black_at(i + 1)
    inside = [w for w in X.whites if X.in_triangle(w, prv, a, nxt)]
    if len(inside) != 1:
        raise NotATDiagramError(f"boundary triangle of {a} holds {len(inside)} whites")
    return inside[0]


def corresponding_blacks(X: Diagram, w: str) -> tuple[str, ...]:
    """Blacks (in cycle order) whose boundary triangle holds white ``w``."""
    return tuple(a for a in X.black_cycle if corresponding_white(X, a) == w)


def adjacent_side(X: Diagram, w: str) -> Optional[tuple[str, str]]:
    """Side ``(A_i, A_{i+1})`` that white ``w`` is adjacent to, if any."""
    for i, a in enumerate(X.black_cycle):
        b = X.black_at(i + 1)
        if corresponding_white(X, a) == w and corresponding_white(X, b) == w:
            return a, b
    return None


def adjacent_whites(X: Diagram) -> list[tuple[str, str, str]]:
    """All ``(A_i, A_{i+1}, B)`` with ``B`` adjacent to side ``A_iA_{i+1}``."""
    out = []
    for i, a in enumerate(X.black_cycle):
        b = X.black_at(i + 1)
        w = corresponding_white(X, a)
        if corresponding_white(X, b) == w:
            out.append((a, b, w))
    return out


def remove_pair(X: Diagram, a: str, w: str) -> Diagram:
    """Delete black ``a`` and its corresponding white ``w``."""
    if len(X.points) < 5:
        raise NotATDiagramError("a diagram with 4 points admits no further removal")
    if X.color(a) is not Color.BLACK or X.color(w) is not Color.WHITE:
        raise DiagramError("remove_pair takes a black and a white label")
    if corresponding_white(X, a) != w:
        raise DiagramError(f"{w} does not correspond to {a}")
    points = tuple(p for p in X.points if p.label not in (a, w))
    cycle = tuple(b for b in X.black_cycle if b != a)
    return Diagram(X.d - 1, points, cycle)


def black_triples(X: Diagram) -> Iterable[tuple[str, str, str]]:
    return itertools.combinations(X.black_cycle, 3)


def membership_signature(X: Diagram, w: str) -> frozenset:
    """Black triples (as label sets) whose triangle strictly contains ``w``."""
    return frozenset(frozenset(t) for t in black_triples(X) if X.in_triangle(w, *t))
