"""Faces and non-faces of T-polytopes.

Two routes to the same sets live here side by side: brute force through the
black/white face criterion, and the lune description of non-faces together
with the closed-form counts it yields.  The lattice-only routines at the end
(:func:`recover_colors`, :func:`identify_tree`) never look at coordinates.
"""

from __future__ import annotations

import enum
import itertools
import json
import random
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Iterable, Mapping, Optional, Union

from .construct import build_diagram
from .diagram import (
    Color,
    Diagram,
    corresponding_blacks,
    corresponding_white,
    is_face,
    make_diagram,
)
from .errors import ConsistencyError, DiagramError, LatticeError, NotATDiagramError
from .trees import ThreeTree, enumerate_trees

# ---------------------------------------------------------------------------
# lunes


@dataclass(frozen=True)
class Lune:
    """Consecutive blacks from cycle position ``start`` clockwise to ``end``."""

    start: int
    end: int
    whole_polygon: bool = False

    def vertices(self, X: Diagram) -> tuple[str, ...]:
        n = len(X.black_cycle)
        if self.whole_polygon:
            return X.black_cycle
        k = (self.end - self.start) % n + 1
        return tuple(X.black_at(self.start + s) for s in range(k))


def all_lunes(X: Diagram) -> list[Lune]:
    n = len(X.black_cycle)
    lunes = [Lune(0, n - 1, True)]
    for k in range(2, n):
        for i in range(n):
            lunes.append(Lune(i, (i + k - 1) % n))
    return lunes


def white_in_polygon(X: Diagram, w: str, polygon: tuple[str, ...]) -> bool:
    """Is white ``w`` strictly inside the convex polygon (cycle order)?"""
    if len(polygon) < 3:
        return False
    a0 = polygon[0]
    return any(X.in_triangle(w, a0, b, c) for b, c in zip(polygon[1:-1], polygon[2:]))


def whites_inside(X: Diagram, L: Lune) -> frozenset:
    verts = L.vertices(X)
    return frozenset(w for w in X.whites if white_in_polygon(X, w, verts))


def minimal_nonface_of_lune(X: Diagram, L: Lune) -> frozenset:
    """Blacks off the lune together with the whites inside it."""
    verts = set(L.vertices(X))
    return frozenset(a for a in X.black_cycle if a not in verts) | whites_inside(X, L)


def _as_lune(X: Diagram, arc: frozenset) -> Optional[Lune]:
    n = len(X.black_cycle)
    if len(arc) == n:
        return Lune(0, n - 1, True)
    if len(arc) < 2:
        return None
    for i in range(n):
        if X.black_at(i) in arc and X.black_at(i - 1) not in arc:
            L = Lune(i, (i + len(arc) - 1) % n)
            return L if set(L.vertices(X)) == arc else None
    return None


def is_minimal_nonface(X: Diagram, M: Iterable[str]) -> bool:
    """Lune criterion for ``(d+1)``-element non-faces; no face test involved."""
    m = X.check_labels(M)
    if len(m) != X.d + 1:
        return False
    rest = set(X.labels) - m
    L = _as_lune(X, frozenset(a for a in rest if X.color(a) is Color.BLACK))
    if L is None:
        return False
    rest_whites = {a for a in rest if X.color(a) is Color.WHITE}
    return rest_whites == set(X.whites) - whites_inside(X, L)


@lru_cache(maxsize=256)
def enumerate_minimal_nonfaces(X: Diagram) -> frozenset:
    """All ``(d+1)``-subsets failing the face test (brute force)."""
    return frozenset(
        frozenset(m) for m in itertools.combinations(X.labels, X.d + 1) if not is_face(X, m)
    )


def lune_nonfaces(X: Diagram) -> dict[Lune, frozenset]:
    return {L: minimal_nonface_of_lune(X, L) for L in all_lunes(X)}


def count_nonfaces_containing(X: Diagram, R: Iterable[str]) -> int:
    r = X.check_labels(R)
    if not r:
        raise DiagramError("R must be nonempty")
    return sum(1 for m in enumerate_minimal_nonfaces(X) if r <= m)


# ---------------------------------------------------------------------------
# non-face classification


class NonfaceKind(enum.Enum):
    NOT_A_NONFACE = "not-a-nonface"
    MINIMAL = "minimal"
    NON_SPECIAL = "non-special"
    SPECIAL = "special"


def _whites_in_one_lune(X: Diagram, kept_blacks: list[str], kept_whites: list[str]) -> bool:
    """Do the kept whites all fall into one piece cut off by Conv(kept blacks)?"""
    cyc = [a for a in X.black_cycle if a in set(kept_blacks)]
    if len(cyc) >= 3 and any(white_in_polygon(X, w, tuple(cyc)) for w in kept_whites):
        return False
    pieces = set()
    for w in kept_whites:
        for k, a in enumerate(cyc):
            b = cyc[(k + 1) % len(cyc)]
            i, j = X.cycle_index(a), X.cycle_index(b)
            arc = tuple(X.black_at(i + s) for s in range((j - i) % len(X.black_cycle) + 1))
            if white_in_polygon(X, w, arc):
                pieces.add((a, b))
                break
        else:
            raise ConsistencyError(f"white {w} lies in no piece of the polygon")
    return len(pieces) == 1


def classify_nonface(X: Diagram, M: Iterable[str]) -> NonfaceKind:
    """Classify a vertex set of size ``d+1 .. 2d`` by the lune criteria.

    The answer is computed from the lune description and then checked
    against the direct face test; disagreement raises ConsistencyError.
    """
    m = X.check_labels(M)
    d = X.d
    if len(m) < d + 1:
        raise DiagramError("sets with at most d vertices are faces of a neighborly polytope")
    if len(m) > 2 * d:
        raise DiagramError(f"classification covers |M| <= {2 * d}")
    rest = [a for a in X.labels if a not in m]
    kept_b = [a for a in rest if X.color(a) is Color.BLACK]
    kept_w = [a for a in rest if X.color(a) is Color.WHITE]
    if len(m) == d + 1:
        kind = NonfaceKind.MINIMAL if is_minimal_nonface(X, m) else NonfaceKind.NOT_A_NONFACE
    elif len(kept_b) <= 1 or not kept_w:
        kind = NonfaceKind.SPECIAL
    elif _whites_in_one_lune(X, kept_b, kept_w):
        kind = NonfaceKind.NON_SPECIAL
    else:
        kind = NonfaceKind.NOT_A_NONFACE
    if (kind is NonfaceKind.NOT_A_NONFACE) != is_face(X, m):
        raise ConsistencyError(f"lune criterion disagrees with the face test on {sorted(m)}")
    return kind


# ---------------------------------------------------------------------------
# closed forms


@dataclass(frozen=True)
class PathStats:
    l: int
    r: int


def path_stats(X: Diagram, ai: str, aj: str) -> PathStats:
    """Blacks strictly between ``ai`` and ``aj`` going counterclockwise / clockwise."""
    if ai == aj:
        raise DiagramError("path_stats needs two distinct blacks")
    n = len(X.black_cycle)
    r = (X.cycle_index(aj) - X.cycle_index(ai)) % n - 1
    return PathStats(n - 2 - r, r)


def _c2(n: int) -> int:
    return comb(n, 2) if n >= 2 else 0


def closed_form_black_black(X: Diagram, ai: str, aj: str) -> int:
    s = path_stats(X, ai, aj)
    return _c2(s.l) + _c2(s.r)


def home_triangle(X: Diagram, w: str, aj: Optional[str] = None) -> tuple[str, str, str]:
    """``(A_j, A_k, A_{k+1})`` with ``w`` strictly inside, ``w`` corresponding to ``A_j``."""
    owners = corresponding_blacks(X, w)
    if aj is None:
        if not owners:
            raise DiagramError(f"white {w} corresponds to no black")
        aj = owners[0]
    elif aj not in owners:
        raise DiagramError(f"white {w} does not correspond to {aj}")
    j = X.cycle_index(aj)
    n = len(X.black_cycle)
    hits = [
        (X.black_at(j + s), X.black_at(j + s + 1))
        for s in range(1, n - 1)
        if X.in_triangle(w, aj, X.black_at(j + s), X.black_at(j + s + 1))
    ]
    if len(hits) != 1:
        raise NotATDiagramError(f"white {w} lies in {len(hits)} fan triangles of {aj}")
    return (aj,) + hits[0]


def a_statistic(X: Diagram, ai: str, aj: str, w: str) -> int:
    if ai == aj:
        raise DiagramError("a-statistic needs two distinct blacks")
    _, ak, ak1 = home_triangle(X, w, aj)
    if ai in (ak, ak1):
        return 0
    n = len(X.black_cycle)
    i = X.cycle_index(ai)
    for step in (1, -1):  # clockwise path, then counterclockwise
        count = 0
        s = i
        while True:
            s += step
            lab = X.black_at(s)
            if lab == aj:
                break
            count += 1
            if lab in (ak, ak1):
                return count
    raise ConsistencyError("home pair lies on neither path")


def _owner_other_than(X: Diagram, w: str, ai: str) -> str:
    owners = [a for a in corresponding_blacks(X, w) if a != ai]
    if not owners:
        raise DiagramError(f"white {w} corresponds to no black other than {ai}")
    return owners[0]


def closed_form_black_white(X: Diagram, ai: str, w: str, aj: Optional[str] = None) -> int:
    aj = aj or _owner_other_than(X, w, ai)
    s = path_stats(X, ai, aj)
    return s.l * s.r + a_statistic(X, ai, aj, w)


def count_lunes_with_white_omitting(X: Diagram, w: str, ai: str) -> int:
    """Lunes strictly containing ``w`` whose vertices avoid ``ai``."""
    return sum(
        1
        for L in all_lunes(X)
        if ai not in L.vertices(X) and white_in_polygon(X, w, L.vertices(X))
    )


def remarkable_edges(X: Diagram) -> frozenset:
    """Edges no ``(d+1)``-non-face contains."""
    nonfaces = enumerate_minimal_nonfaces(X)
    out = set()
    for pair in itertools.combinations(X.labels, 2):
        p = frozenset(pair)
        if is_face(X, p) and not any(p <= m for m in nonfaces):
            out.add(p)
    return frozenset(out)


def corresponding_pairs(X: Diagram) -> frozenset:
    """``{A_i, B}`` for every black and its corresponding white."""
    return frozenset(frozenset((a, corresponding_white(X, a))) for a in X.black_cycle)


def parity_violations(X: Diagram) -> list[str]:
    """Check the two parity lemmas used for color recovery, by brute force.

    For each white ``w`` adjacent to a side ``(x, y)``, each other black ``c``
    and the white ``b`` corresponding to ``c``:
    ``N(x, c) - N(y, c)`` has parity different from ``d+1`` and
    ``N(x, b) - N(y, b)`` has the parity of ``d+1``.
    """
    bad = []
    target = (X.d + 1) % 2
    for w in X.whites:
        owners = corresponding_blacks(X, w)
        if len(owners) != 2:
            continue
        x, y = owners
        for c in X.black_cycle:
            if c in owners:
                continue
            b = corresponding_white(X, c)
            dc = count_nonfaces_containing(X, {x, c}) - count_nonfaces_containing(X, {y, c})
            db = count_nonfaces_containing(X, {x, b}) - count_nonfaces_containing(X, {y, b})
            if dc % 2 == target:
                bad.append(f"black parity fails for side ({x},{y}) and {c}")
            if db % 2 != target:
                bad.append(f"white parity fails for side ({x},{y}) and {b} (of {c})")
    return bad


# ---------------------------------------------------------------------------
# face lattices


@dataclass(frozen=True)
class FaceLattice:
    """Nonempty proper faces of a simplicial ``2d``-polytope, keyed by size."""

    d: int
    faces_by_size: Mapping[int, frozenset]

    @classmethod
    def from_facets(cls, d: int, facets: Iterable[Iterable[str]]) -> "FaceLattice":
        facets = [frozenset(f) for f in facets]
        D = 2 * d
        if any(len(f) != D for f in facets):
            raise LatticeError(f"every facet must have {D} vertices")
        by_size: dict[int, set] = {t: set() for t in range(1, D + 1)}
        for f in facets:
            members = sorted(f)
            for t in range(1, D + 1):
                by_size[t].update(frozenset(c) for c in itertools.combinations(members, t))
        return cls(d, {t: frozenset(s) for t, s in by_size.items()})

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(sorted(next(iter(f)) for f in self.faces_by_size[1]))

    @property
    def facets(self) -> frozenset:
        return self.faces_by_size[2 * self.d]

    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(self.faces_by_size[t]) for t in range(1, 2 * self.d + 1))

    def is_face(self, M: Iterable[str]) -> bool:
        m = frozenset(M)
        return m in self.faces_by_size.get(len(m), frozenset())

    def relabel(self, mapping: Mapping[str, str]) -> "FaceLattice":
        return FaceLattice.from_facets(self.d, ({mapping[v] for v in f} for f in self.facets))

    def to_dict(self) -> dict:
        return {"d": self.d, "facets": sorted(sorted(f) for f in self.facets)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)

    @classmethod
    def from_dict(cls, data: dict) -> "FaceLattice":
        try:
            return cls.from_facets(int(data["d"]), data["facets"])
        except (KeyError, TypeError, ValueError) as exc:
            raise LatticeError(f"malformed face lattice document: {exc}") from None

    @classmethod
    def from_json(cls, text: str) -> "FaceLattice":
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise LatticeError(f"invalid JSON: {exc}") from None


def face_lattice(X: Diagram, *, check: Optional[int] = None, seed: int = 0) -> FaceLattice:
    """Facets by the face test, then downward closure.

    Smaller faces of the closure are compared with the face test directly:
    every subset when ``d <= 3``, otherwise ``check`` random subsets
    (default 500).
    """
    D = 2 * X.d
    facets = [f for f in itertools.combinations(X.labels, D) if is_face(X, f)]
    L = FaceLattice.from_facets(X.d, facets)
    if X.d <= 3 and check is None:
        subsets: Iterable = (s for t in range(1, D) for s in itertools.combinations(X.labels, t))
    else:
        rng = random.Random(seed)
        subsets = [
            rng.sample(X.labels, rng.randint(1, D - 1)) for _ in range(500 if check is None else check)
        ]
    for s in subsets:
        if L.is_face(s) != is_face(X, s):
            raise ConsistencyError(f"closure disagrees with the face test on {sorted(s)}")
    return L


def local_face_counts(source: Union[Diagram, FaceLattice], v: str) -> dict[int, int]:
    L = face_lattice(source) if isinstance(source, Diagram) else source
    return {t: sum(1 for f in faces if v in f) for t, faces in sorted(L.faces_by_size.items())}


def cyclic_diagram(d: int) -> Diagram:
    """Alternating colors on the parabola ``(i, i^2)``, ``i = 0 .. 2d+3``."""
    if d < 1:
        raise DiagramError("cyclic diagrams are built for d >= 1")
    pts = [(i, i * i) for i in range(2 * d + 4)]
    return make_diagram(d, pts[0::2], pts[1::2])


# ---------------------------------------------------------------------------
# combinatorial reconstruction from a lattice


class _LatticeCounts:
    def __init__(self, L: FaceLattice):
        self.L = L
        size = L.d + 1
        faces = L.faces_by_size[size]
        self.nonfaces = [frozenset(c) for c in itertools.combinations(L.labels, size) if frozenset(c) not in faces]
        self._cache: dict[frozenset, int] = {}

    def N(self, *labels: str) -> int:
        r = frozenset(labels)
        if r not in self._cache:
            self._cache[r] = sum(1 for m in self.nonfaces if r <= m)
        return self._cache[r]

    def remarkable(self) -> list[frozenset]:
        return sorted(
            (p for p in self.L.faces_by_size[2] if self.N(*p) == 0),
            key=sorted,
        )


def recover_colors(L: FaceLattice, d: Optional[int] = None) -> dict[str, Color]:
    """Black/white coloring of the T-diagram behind a face lattice."""
    d = L.d if d is None else d
    if d != L.d or d < 2:
        raise LatticeError("color recovery needs the lattice's own d >= 2")
    counts = _LatticeCounts(L)
    remarkable = counts.remarkable()
    degree = Counter(v for p in remarkable for v in p)
    hubs = sorted(v for v, k in degree.items() if k == 2)
    if not hubs:
        raise LatticeError("no vertex has two remarkable edges: not a T-polytope lattice")
    w = hubs[0]
    x, y = sorted(v for p in remarkable if w in p for v in p if v != w)
    colors = {w: Color.WHITE, x: Color.BLACK, y: Color.BLACK}
    for pair in remarkable:
        if w in pair:
            continue
        if x in pair or y in pair:
            raise LatticeError("remarkable edges do not match a T-polytope")
        verdict = {}
        for v in pair:
            diff = counts.N(x, v) - counts.N(y, v)
            verdict[v] = Color.WHITE if (diff - (d + 1)) % 2 == 0 else Color.BLACK
        if sorted(c.value for c in verdict.values()) != ["black", "white"]:
            raise LatticeError(f"remarkable edge {sorted(pair)} has no black/white split")
        for v, c in verdict.items():
            if colors.setdefault(v, c) is not c:
                raise LatticeError(f"conflicting colors for {v}")
    for v in L.labels:
        colors.setdefault(v, Color.WHITE)
    if sum(c is Color.BLACK for c in colors.values()) != d + 3:
        raise LatticeError("recovered coloring does not have d+3 blacks")
    return dict(sorted(colors.items()))


def _black_cycle_from_lattice(counts: _LatticeCounts, blacks: list[str], d: int) -> tuple[str, ...]:
    top = comb(d + 1, 2)
    adj = {a: sorted(b for b in blacks if b != a and counts.N(a, b) == top) for a in blacks}
    if any(len(v) != 2 for v in adj.values()):
        raise LatticeError("black adjacency is not a cycle")
    cycle = [blacks[0], adj[blacks[0]][0]]
    while len(cycle) < len(blacks):
        a, b = adj[cycle[-1]]
        cycle.append(b if a == cycle[-2] else a)
    if cycle[0] not in adj[cycle[-1]]:
        raise LatticeError("black adjacency is not a single cycle")
    return tuple(cycle)


@lru_cache(maxsize=8)
def _catalog(d: int):
    out = []
    for t in enumerate_trees(d + 3):
        Y, _ = build_diagram(t)
        out.append((t, Y, face_lattice(Y, check=0)))
    return out


def _lattice_isomorphism(L: FaceLattice, cL, cycle_l, Y: Diagram, LY: FaceLattice):
    cY = _LatticeCounts(LY)
    whites_l = [v for v in L.labels if v not in set(cycle_l)]
    target = LY.facets
    n = len(cycle_l)
    for flip in (False, True):
        seq = tuple(reversed(Y.black_cycle)) if flip else Y.black_cycle
        for r in range(n):
            phi = {cycle_l[k]: seq[(k + r) % n] for k in range(n)}
            sig_l = {w: tuple(cL.N(a, w) for a in cycle_l) for w in whites_l}
            groups_y: dict[tuple, list[str]] = {}
            for w in Y.whites:
                groups_y.setdefault(tuple(cY.N(phi[a], w) for a in cycle_l), []).append(w)
            groups_l: dict[tuple, list[str]] = {}
            for w, s in sig_l.items():
                groups_l.setdefault(s, []).append(w)
            if {k: len(v) for k, v in groups_l.items()} != {k: len(v) for k, v in groups_y.items()}:
                continue
            keys = sorted(groups_l)
            for choice in itertools.product(*(itertools.permutations(groups_y[k]) for k in keys)):
                full = dict(phi)
                for k, perm in zip(keys, choice):
                    full.update(zip(groups_l[k], perm))
                if {frozenset(full[v] for v in f) for f in L.facets} == target:
                    return full
    return None


def identify_tree(L: FaceLattice, d: Optional[int] = None) -> ThreeTree:
    """Catalog tree whose T-polytope has a lattice isomorphic to ``L``."""
    d = L.d if d is None else d
    colors = recover_colors(L, d)
    cL = _LatticeCounts(L)
    blacks = [v for v, c in colors.items() if c is Color.BLACK]
    cycle = _black_cycle_from_lattice(cL, blacks, d)
    for t, Y, LY in _catalog(d):
        if LY.f_vector() != L.f_vector():
            continue
        if _lattice_isomorphism(L, cL, cycle, Y, LY) is not None:
            return t
    raise LatticeError("no catalog tree matches this lattice")
