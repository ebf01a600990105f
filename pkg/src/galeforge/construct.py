"""Between 3-trees and t-diagrams, in both directions.

:func:`build_diagram` realizes a tree as an exact-coordinate t-diagram by
repeatedly splitting a black vertex; :func:`extract_tree` reads the
characteristic tree back off a diagram by repeatedly deleting a black point
together with a white adjacent to one of its sides.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Mapping, Optional

from . import exactgeom as eg
from .diagram import (
    Color,
    Diagram,
    DiagramPoint,
    adjacent_whites,
    is_t_diagram,
    membership_signature,
    remove_pair,
)
from .errors import ConsistencyError, DiagramError, NotATDiagramError, TreeError
from .exactgeom import Point2
from .trees import (
    CyclicOrder,
    ThreeTree,
    canonical_code,
    contract_pre_leaf,
    leaf_cyclic_order,
)

Correspondence = dict  # tree vertex -> diagram label

BASE_TRIANGLE = (Point2.of(0, 0), Point2.of(0, 8), Point2.of(8, 0))  # clockwise
BASE_WHITE = Point2.of(1, 1)


def disjoint_paths(t: ThreeTree, b: str, leaves) -> bool:
    """Do the paths from ``b`` to the three leaves share only ``b``?"""
    leaves = list(leaves)
    if t.is_leaf(b):
        raise TreeError(f"{b!r} is not an internal vertex")
    if len(set(leaves)) != 3:
        raise TreeError("need three distinct leaves")
    comp = t.branches(b)
    return len({comp[x] for x in leaves}) == 3


# ---------------------------------------------------------------------------
# tree -> diagram


def _normalize(blacks, whites):
    """Scale all coordinates to coprime integers (an affine map)."""
    coords = [p for p, _ in blacks] + [p for p, _ in whites]
    den = 1
    for p in coords:
        den = math.lcm(den, p.x.denominator, p.y.denominator)
    g = 0
    for p in coords:
        g = math.gcd(g, int(p.x * den), int(p.y * den))
    k = Fraction(den, g or 1)
    return [(p.scale(k), v) for p, v in blacks], [(p.scale(k), v) for p, v in whites]


def _clockwise_convex(pts) -> bool:
    return len(pts) >= 3 and eg.convex_position_cyclic(pts) == tuple(range(len(pts)))


def _split_black(blacks, whites, i, x, y, v, shrink):
    """Insert a black right after ``blacks[i]`` and a white adjacent to the new side."""
    m = len(blacks)
    a = blacks[i][0]
    prv = blacks[(i - 1) % m][0]
    nxt = blacks[(i + 1) % m][0]
    direction = nxt - prv  # the parallel through a to chord prv-nxt supports the polygon
    others_b = [p for j, (p, _) in enumerate(blacks) if j != i]
    white_pts = [p for p, _ in whites]
    eps = Fraction(1)
    for _ in range(200):
        q = a + direction.scale(eps)
        new_blacks = [p for p, _ in blacks[: i + 1]] + [q] + [p for p, _ in blacks[i + 1 :]]
        ok = (
            eg.general_position(new_blacks + white_pts)
            and _clockwise_convex(new_blacks)
            and all(
                eg.orient_sign(p, q, w) == eg.orient_sign(p, a, w)
                for p in others_b
                for w in white_pts
            )
        )
        if ok:
            break
        eps /= shrink
    else:
        raise ConsistencyError("no admissible position for the split black point")

    region = eg.clip_convex([prv, a, q], [a, q, nxt])
    if len(region) < 3:
        raise ConsistencyError("split triangles do not overlap")
    b = eg.vertex_average(region)
    mid = eg.vertex_average([a, q])
    all_pts = new_blacks + white_pts
    for _ in range(200):
        if (
            eg.point_in_triangle_strict(b, prv, a, q)
            and eg.point_in_triangle_strict(b, a, q, nxt)
            and eg.general_position(all_pts + [b])
        ):
            break
        b = eg.vertex_average([b, mid])
    else:
        raise ConsistencyError("no admissible position for the new white point")

    new = list(blacks)
    new[i] = (a, x)
    new.insert(i + 1, (q, y))
    return new, list(whites) + [(b, v)]


def _choose_pre_leaf(t: ThreeTree) -> str:
    def key(v: str):
        smaller = contract_pre_leaf(t, v)[0]
        return canonical_code(smaller), v

    return min(t.pre_leaves(), key=key)


def _build(t: ThreeTree, shrink: int):
    if len(t.leaves) == 3:
        (center,) = t.internal
        order = leaf_cyclic_order(t).items
        return list(zip(BASE_TRIANGLE, order)), [(BASE_WHITE, center)]
    v = _choose_pre_leaf(t)
    smaller, _, x, y = contract_pre_leaf(t, v)
    blacks, whites = _build(smaller, shrink)
    i = next(k for k, (_, u) in enumerate(blacks) if u == v)
    blacks, whites = _split_black(blacks, whites, i, x, y, v, shrink)
    return _normalize(blacks, whites)


def build_diagram(t: ThreeTree, *, shrink: int = 2) -> tuple[Diagram, Correspondence]:
    """Exact t-diagram whose characteristic tree is ``t``.

    ``shrink`` is the factor by which the split offset is reduced while
    searching for an admissible new black point; different values give
    different (combinatorially equivalent) realizations.
    """
    if len(t.leaves) < 3:
        raise TreeError("need at least 3 leaves")
    if shrink < 2:
        raise ValueError("shrink factor must be at least 2")
    blacks, whites = _build(t, shrink)
    d = len(blacks) - 3
    points = []
    corr: Correspondence = {}
    for k, (p, u) in enumerate(blacks, start=1):
        points.append(DiagramPoint(f"A{k}", Color.BLACK, p))
        corr[u] = f"A{k}"
    for k, (p, u) in enumerate(whites, start=1):
        points.append(DiagramPoint(f"B{k}", Color.WHITE, p))
        corr[u] = f"B{k}"
    X = Diagram(d, tuple(points), tuple(f"A{k}" for k in range(1, len(blacks) + 1)))
    if not is_t_diagram(X) or not is_characteristic(t, X, corr, oriented=True):
        raise ConsistencyError("constructed diagram failed verification")
    return X, corr


# ---------------------------------------------------------------------------
# diagram -> tree


def extract_tree(X: Diagram, *, choose: str = "first") -> tuple[ThreeTree, Correspondence]:
    """Characteristic tree of a t-diagram.

    Tree vertices carry the diagram labels, so the correspondence is the
    identity.  ``choose`` picks the first or last white adjacent to a side
    as the one eliminated at each step.
    """
    if not is_t_diagram(X):
        raise NotATDiagramError("extract_tree requires a t-diagram")
    t = _extract(X, choose)
    return t, {v: v for v in t.vertices}


def _extract(X: Diagram, choose: str) -> ThreeTree:
    if X.d == 0:
        (w,) = X.whites
        return ThreeTree({w: X.black_cycle})
    candidates = adjacent_whites(X)
    if not candidates:
        raise ConsistencyError("t-diagram without a white adjacent to a side")
    if choose == "first":
        a, a_next, w = candidates[0]
    elif choose == "last":
        a, a_next, w = candidates[-1]
    else:
        raise ValueError(f"choose must be 'first' or 'last', got {choose!r}")
    smaller = _extract(remove_pair(X, a, w), choose)
    parent = smaller.neighbors(a_next)[0]
    rot = {u: tuple(w if z == a_next else z for z in nbrs) for u, nbrs in smaller.rotation.items()}
    rot[w] = (parent, a, a_next)
    return ThreeTree(rot)


# ---------------------------------------------------------------------------
# predicates


def is_characteristic(t: ThreeTree, X: Diagram, c: Mapping[str, str], *, oriented: bool = False) -> bool:
    """Is ``t`` (with vertex map ``c``) a characteristic tree of ``X``?"""
    if set(c) != set(t.vertices) or sorted(c.values()) != sorted(X.labels):
        return False
    if any(X.color(c[v]) is not Color.BLACK for v in t.leaves):
        return False
    if any(X.color(c[v]) is not Color.WHITE for v in t.internal):
        return False
    leaf_order = leaf_cyclic_order(t).relabel(c)
    cycle = CyclicOrder(X.black_cycle)
    if oriented:
        if leaf_order != cycle:
            return False
    elif not leaf_order.same_unoriented(cycle):
        return False
    inv = {lab: v for v, lab in c.items()}
    for v in t.internal:
        comp = t.branches(v)
        w = c[v]
        for tri in itertools.combinations(X.black_cycle, 3):
            separated = len({comp[inv[a]] for a in tri}) == 3
            if X.in_triangle(w, *tri) != separated:
                return False
    return True


def _cycle_alignments(src: tuple[str, ...], dst: tuple[str, ...]):
    n = len(src)
    for flip in (False, True):
        seq = tuple(reversed(dst)) if flip else dst
        for r in range(n):
            yield {src[k]: seq[(k + r) % n] for k in range(n)}


def _white_matching(X: Diagram, Y: Diagram, phi: dict) -> Optional[dict]:
    sig_y = {}
    for w in Y.whites:
        sig_y.setdefault(membership_signature(Y, w), []).append(w)
    out = dict(phi)
    for w in X.whites:
        mapped = frozenset(frozenset(phi[a] for a in tri) for tri in membership_signature(X, w))
        hits = sig_y.get(mapped, [])
        if len(hits) != 1:
            return None
        out[w] = hits[0]
    if len(set(out.values())) != len(out):
        return None
    return out


def diagonal_equivalent(X: Diagram, Y: Diagram) -> Optional[dict]:
    """Label bijection witnessing diagonal equivalence, or ``None``."""
    if X.d != Y.d or not is_t_diagram(X) or not is_t_diagram(Y):
        raise NotATDiagramError("diagonal equivalence compares t-diagrams of equal d")
    for phi in _cycle_alignments(X.black_cycle, Y.black_cycle):
        out = _white_matching(X, Y, phi)
        if out is not None:
            return out
    return None


def comb_equivalent(X: Diagram, Y: Diagram) -> bool:
    """Color- and orientation-preserving bijection exists, up to mirror."""
    if not X.in_general_position or not Y.in_general_position:
        raise DiagramError("combinatorial equivalence is decided for general position only")
    if len(X.blacks) != len(Y.blacks) or len(X.whites) != len(Y.whites):
        return False
    if not X.black_cycle or not Y.black_cycle:
        raise DiagramError("black points must be in convex position")
    triples = list(itertools.combinations(X.labels, 3))
    for phi in _cycle_alignments(X.black_cycle, Y.black_cycle):
        full = _white_matching(X, Y, phi)
        if full is None:
            continue
        flips = {X.sign(*tri) * Y.sign(*(full[u] for u in tri)) for tri in triples}
        if flips in ({1}, {-1}):
            return True
    return False


def correspondence_to_json(c: Mapping[str, str]) -> dict:
    return dict(sorted(c.items()))
