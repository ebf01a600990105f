from __future__ import annotations

from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from galeforge import diagram as dg
from galeforge import faces as F
from galeforge import oracle
from galeforge.diagram import Diagram, DiagramPoint
from galeforge.errors import GeometryError, NotAPolytopeError
from galeforge.exactgeom import Point2


def _moved(X: Diagram, label: str, p: Point2) -> Diagram:
    pts = tuple(DiagramPoint(q.label, q.color, p if q.label == label else q.position) for q in X.points)
    return Diagram(X.d, pts, X.black_cycle)


def test_lift_examples(d0, x2):
    V = oracle.lift(d0)
    cols = dict(zip(V.labels, V.columns))
    assert cols["A1"] == (0, 0, 1)
    assert cols["B1"] == (-1, -1, -1)
    for X in (d0, x2, F.cyclic_diagram(3)):
        assert oracle.rank([list(r) for r in zip(*oracle.lift(X).columns)]) == 3


def test_positive_dependence_small(d0):
    lam = oracle.positive_dependence(oracle.lift(d0))
    # one-dimensional dependence space, solved by hand
    assert lam == [Fraction(1, 4), Fraction(1, 8), Fraction(1, 8), Fraction(1, 2)]


def test_positive_dependence_properties(built):
    for d in (1, 2, 3):
        for _, X, _ in built(d):
            V = oracle.lift(X)
            lam = oracle.positive_dependence(V)
            assert all(v > 0 for v in lam) and sum(lam) == 1
            for i in range(3):
                assert sum(l * c[i] for l, c in zip(lam, V.columns)) == 0


def test_positive_dependence_rejects_non_polytope(x2):
    corrupt = _moved(x2, "B1", Point2.of(-1000, -999))
    # a white far outside leaves some point with no positive dependence
    assert not dg.is_neighborly_diagram(corrupt)
    far = x2
    for w, xy in zip(x2.whites, [(10**5, 10**5), (10**5 + 1, 10**5 + 3), (10**5 + 3, 10**5 + 1)]):
        far = _moved(far, w, Point2.of(*xy))
    assert not dg.is_polytope_diagram(far)
    with pytest.raises(NotAPolytopeError):
        oracle.positive_dependence(oracle.lift(far))


def test_gale_inverse_d2(x2):
    P = oracle.gale_inverse(x2)
    assert P.dim == 4 and len(P.coords) == 8
    facets = oracle.facets_bruteforce(P)
    assert len(facets) == 20
    assert set().union(*facets) == set(x2.labels)
    assert oracle.gale_duality_holds(x2)


def test_scaled_lift_annihilates_ones(built):
    for d in (2, 3):
        for _, X, _ in built(d):
            cols = oracle._scaled_columns(X)
            assert all(sum(c[i] for c in cols) == 0 for i in range(3))


@pytest.mark.parametrize("d,count", [(2, 20), (3, 50)])
def test_cyclic_facets(d, count):
    C = F.cyclic_diagram(d)
    facets = oracle.facets_bruteforce(oracle.gale_inverse(C))
    n = 2 * d + 4
    assert len(facets) == count
    if d == 2:
        assert count == n * (n - 3) // 2
    assert facets == F.face_lattice(C).facets


def test_collinear_triple_gives_degenerate_configuration(x2):
    a, c = x2.pos("A1"), x2.pos("A3")
    mid = Point2((a.x + c.x) / 2, (a.y + c.y) / 2)
    Y = _moved(x2, "B1", mid)
    assert dg.is_polytope_diagram(Y) and not Y.in_general_position
    with pytest.raises(GeometryError):
        oracle.gale_inverse(Y)


def test_oracle_never_uses_face_test(x2, monkeypatch):
    def forbidden(*args, **kwargs):
        raise AssertionError("oracle consulted the black/white test")

    monkeypatch.setattr(dg, "bw_property", forbidden)
    monkeypatch.setattr(dg, "_bw_general_position", forbidden)
    monkeypatch.setattr(dg, "is_face", forbidden)
    monkeypatch.setattr(oracle, "is_face", forbidden)
    facets = oracle.facets_bruteforce(oracle.gale_inverse(x2))
    assert len(facets) == 20
    assert oracle.gale_duality_holds(x2)


@pytest.mark.parametrize("d", [2, 3])
def test_oracle_agrees_exhaustively(built, d):
    for _, X, _ in built(d):
        rep = oracle.verify_against_oracle(X)
        assert rep["ok"] and rep["mismatches"] == []
        assert rep["facet_count"] == len(F.face_lattice(X).facets)
        assert rep["subsets_checked"] == sum(
            comb(2 * d + 4, t) for t in range(1, 2 * d + 1)
        )
    rep = oracle.verify_against_oracle(F.cyclic_diagram(d))
    assert rep["ok"]


def test_oracle_detects_wrong_face_test(x2, monkeypatch):
    real = oracle.is_face
    monkeypatch.setattr(oracle, "is_face", lambda X, s: real(X, s) if len(s) != 2 else False)
    rep = oracle.verify_against_oracle(x2)
    assert not rep["ok"]
    assert len(rep["mismatches"]) == 28


def _fraction_det(m):
    a = [[Fraction(v) for v in row] for row in m]
    n = len(a)
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            return 0
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det *= a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return det


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_bareiss_matches_elimination(m):
    assert oracle.det_int(m) == _fraction_det(m)


def test_kernel_basis_is_kernel():
    rows = [[Fraction(v) for v in r] for r in ([1, 2, 3, 4], [0, 1, 1, 1])]
    basis = oracle.kernel_basis(rows)
    assert len(basis) == 2
    for w in basis:
        assert all(sum(a * b for a, b in zip(r, w)) == 0 for r in rows)
