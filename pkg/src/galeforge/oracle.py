"""Independent check of the face criterion through actual coordinates.

The plane diagram is lifted to a vector configuration in R^3, scaled by a
strictly positive dependence so the all-ones vector joins its kernel, and
the kernel is read as a point configuration in R^{2d}.  Facets are then
found by determinant signs alone.  Nothing here consults the black/white
face test; the linear algebra is local to this module.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .diagram import Color, Diagram, is_face
from .errors import ConsistencyError, GeometryError, NotAPolytopeError


@dataclass(frozen=True)
class VectorConfig3:
    labels: tuple[str, ...]
    columns: tuple[tuple[Fraction, Fraction, Fraction], ...]


@dataclass(frozen=True)
class PointConfig:
    labels: tuple[str, ...]
    coords: tuple[tuple[Fraction, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.coords[0])


# -- exact linear algebra ------------------------------------------------------


def rref(rows: Sequence[Sequence[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    a = [[Fraction(v) for v in row] for row in rows]
    m = len(a)
    n = len(a[0]) if a else 0
    pivots: list[int] = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        pv = a[r][c]
        a[r] = [v / pv for v in a[r]]
        for i in range(m):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return a, pivots


def rank(rows) -> int:
    return len(rref(rows)[1])


def kernel_basis(rows: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    """Basis of ``{w : A w = 0}``; one vector per free column, 1 at that column."""
    a, pivots = rref(rows)
    n = len(rows[0])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        w = [Fraction(0)] * n
        w[f] = Fraction(1)
        for r, p in enumerate(pivots):
            w[p] = -a[r][f]
        basis.append(w)
    return basis


def det_int(matrix: Sequence[Sequence[int]]) -> int:
    """Fraction-free (Bareiss) determinant of an integer matrix."""
    a = [list(row) for row in matrix]
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _unique_solution(columns, rhs) -> Optional[list[Fraction]]:
    k = len(columns)
    rows = [[columns[j][i] for j in range(k)] + [rhs[i]] for i in range(len(rhs))]
    a, pivots = rref(rows)
    if k in pivots or pivots != list(range(k)):
        return None
    return [a[i][k] for i in range(k)]


# -- the inverse transform -------------------------------------------------------


def lift(X: Diagram) -> VectorConfig3:
    cols = []
    for p in X.points:
        x, y = p.position
        if p.color is Color.BLACK:
            cols.append((x, y, Fraction(1)))
        else:
            cols.append((-x, -y, Fraction(-1)))
    return VectorConfig3(X.labels, tuple(cols))


def positive_dependence(V: VectorConfig3) -> list[Fraction]:
    """Strictly positive ``lam`` with ``sum lam_i v_i = 0`` and ``sum lam = 1``."""
    if rank([list(r) for r in zip(*V.columns)]) != 3:
        raise GeometryError("vector configuration does not have rank 3")
    columns = [(v[0], v[1], v[2], Fraction(1)) for v in V.columns]
    rhs = [Fraction(0)] * 3 + [Fraction(1)]
    n = len(columns)
    vertices = set()
    for size in range(1, 5):
        for support in itertools.combinations(range(n), size):
            sol = _unique_solution([columns[j] for j in support], rhs)
            if sol is None or any(s < 0 for s in sol):
                continue
            full = [Fraction(0)] * n
            for j, s in zip(support, sol):
                full[j] = s
            vertices.add(tuple(full))
    if not vertices:
        raise NotAPolytopeError("no nonnegative dependence: not a polytope diagram")
    avg = [sum(v[j] for v in vertices) / len(vertices) for j in range(n)]
    if any(s == 0 for s in avg):
        raise NotAPolytopeError("no strictly positive dependence: not a polytope diagram")
    return avg


def _scaled_columns(X: Diagram) -> list[tuple[Fraction, ...]]:
    V = lift(X)
    lam = positive_dependence(V)
    return [tuple(l * c for c in col) for l, col in zip(lam, V.columns)]


def gale_inverse(X: Diagram) -> PointConfig:
    """Point configuration in R^{2d} whose Gale diagram is ``X``."""
    cols = _scaled_columns(X)
    C = [list(r) for r in zip(*cols)]
    basis = kernel_basis(C)
    if len(basis) != len(X.labels) - 3:
        raise GeometryError("scaled lift does not have rank 3")
    # ones = sum of the free-column basis vectors, so it can replace the first one
    rows = basis[1:]
    coords = tuple(tuple(r[i] for r in rows) for i in range(len(X.labels)))
    P = PointConfig(X.labels, coords)
    if not in_general_position(P):
        raise GeometryError("recovered configuration is not in general position")
    return P


def _integer_points(P: PointConfig) -> list[list[int]]:
    """Homogeneous integer rows ``c_i * (1, a_i)`` with ``c_i > 0``.

    Scaling one row by a positive number keeps every determinant sign.
    """
    rows = []
    for pt in P.coords:
        den = 1
        for v in pt:
            den = math.lcm(den, v.denominator)
        row = [den] + [int(v * den) for v in pt]
        g = math.gcd(*row)
        rows.append([v // g for v in row])
    return rows


def in_general_position(P: PointConfig) -> bool:
    pts = _integer_points(P)
    D = P.dim
    return all(det_int([pts[i] for i in s]) != 0 for s in itertools.combinations(range(len(pts)), D + 1))


def facets_bruteforce(P: PointConfig) -> frozenset:
    """``D``-subsets with all other points strictly on one side of their hyperplane."""
    pts = _integer_points(P)
    n, D = len(pts), P.dim
    out = set()
    for s in itertools.combinations(range(n), D):
        base = [pts[i] for i in s]
        signs = set()
        for j in range(n):
            if j in s:
                continue
            det = det_int(base + [pts[j]])
            if det == 0:
                raise GeometryError(f"points {[P.labels[i] for i in s]} and {P.labels[j]} are affinely dependent")
            signs.add(det > 0)
            if len(signs) > 1:
                break
        if len(signs) == 1:
            out.add(frozenset(P.labels[i] for i in s))
    return frozenset(out)


def gale_duality_holds(X: Diagram) -> bool:
    """Rows of ``[1; points]`` span exactly the kernel of the scaled lift."""
    cols = _scaled_columns(X)
    P = gale_inverse(X)
    M = [[Fraction(1)] * len(P.labels)] + [list(r) for r in zip(*P.coords)]
    C = [list(r) for r in zip(*cols)]
    orthogonal = all(sum(a * b for a, b in zip(crow, mrow)) == 0 for crow in C for mrow in M)
    return orthogonal and rank(M) == len(M) == len(P.labels) - 3


def verify_against_oracle(X: Diagram, *, samples: int = 10_000, seed: int = 0, exhaustive: Optional[bool] = None) -> dict:
    """Compare the face test with oracle facets on subsets of size 1..2d.

    Exhaustive for ``d <= 3`` (or when asked); otherwise every ``2d``-subset
    plus ``samples`` seeded random smaller subsets.
    """
    D = 2 * X.d
    facets = facets_bruteforce(gale_inverse(X))
    if exhaustive is None:
        exhaustive = X.d <= 3
    if exhaustive:
        subsets = [frozenset(s) for t in range(1, D + 1) for s in itertools.combinations(X.labels, t)]
    else:
        rng = random.Random(seed)
        subsets = [frozenset(s) for s in itertools.combinations(X.labels, D)]
        subsets += [frozenset(rng.sample(X.labels, rng.randint(1, D - 1))) for _ in range(samples)]
    mismatches = []
    seen = set()
    for s in subsets:
        if s in seen:
            continue
        seen.add(s)
        oracle = any(s <= f for f in facets)
        if oracle != is_face(X, s):
            mismatches.append({"subset": sorted(s), "face_test": not oracle, "oracle": oracle})
    unused = set(X.labels) - set().union(*facets) if facets else set(X.labels)
    if unused:
        raise ConsistencyError(f"labels in no facet: {sorted(unused)}")
    mismatches.sort(key=lambda m: (len(m["subset"]), m["subset"]))
    return {
        "diagram": X.to_dict(),
        "facet_count": len(facets),
        "subsets_checked": len(seen),
        "mismatches": mismatches,
        "ok": not mismatches,
    }
