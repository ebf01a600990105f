from __future__ import annotations

import itertools
import random
from collections import Counter
from math import comb

import pytest

from galeforge import diagram as dg
from galeforge import faces as F
from galeforge.diagram import Color, Diagram, DiagramPoint
from galeforge.errors import DiagramError, LatticeError
from galeforge.faces import FaceLattice, NonfaceKind
from galeforge.trees import canonical_code, is_isomorphic


def _shift_labels(X: Diagram, k: int) -> Diagram:
    """Rename black ``A_i`` to ``A_{i+k}`` (cyclically); keeps the clockwise order."""
    n = len(X.black_cycle)
    new = {a: f"A{(X.cycle_index(a) + k) % n + 1}" for a in X.black_cycle}
    pts = tuple(DiagramPoint(new.get(p.label, p.label), p.color, p.position) for p in X.points)
    cycle = tuple(sorted(new.values(), key=lambda a: int(a[1:])))
    return Diagram(X.d, pts, cycle)


@pytest.fixture(scope="module")
def pentagon(x2):
    # in this labeling B3 corresponds to A3 with home pair (A4, A5)
    return _shift_labels(x2, 1)


# -- lunes and minimal non-faces --------------------------------------------------


def test_lune_examples(x2):
    d = x2.d
    whole = F.Lune(0, len(x2.black_cycle) - 1, True)
    assert F.minimal_nonface_of_lune(x2, whole) == frozenset(x2.whites)
    for i in range(len(x2.black_cycle)):
        side = F.Lune(i, (i + 1) % len(x2.black_cycle))
        assert F.minimal_nonface_of_lune(x2, side) == frozenset(x2.black_cycle) - set(side.vertices(x2))
    for L in F.all_lunes(x2):
        assert len(F.minimal_nonface_of_lune(x2, L)) == d + 1


@pytest.mark.parametrize("d,expected", [(2, 16), (3, 25), (4, 36)])
def test_minimal_nonface_census(built, d, expected):
    for _, X, _ in built(d):
        brute = F.enumerate_minimal_nonfaces(X)
        assert len(brute) == expected == (d + 1) * (d + 3) + 1
        images = list(F.lune_nonfaces(X).values())
        assert len(set(images)) == len(images) == len(brute)
        assert set(images) == brute
        for m in itertools.combinations(X.labels, d + 1):
            assert (frozenset(m) in brute) == (not dg.is_face(X, m))


# -- classification -------------------------------------------------------------


def test_classify_examples(x2):
    d = x2.d
    special = set(x2.whites) | {x2.black_cycle[0]}
    assert F.classify_nonface(x2, special) is NonfaceKind.SPECIAL
    for m in F.enumerate_minimal_nonfaces(x2):
        assert F.classify_nonface(x2, m) is NonfaceKind.MINIMAL
    with pytest.raises(DiagramError):
        F.classify_nonface(x2, ["A1"])
    face = next(m for m in itertools.combinations(x2.labels, d + 1) if dg.is_face(x2, m))
    assert F.classify_nonface(x2, face) is NonfaceKind.NOT_A_NONFACE


def test_non_special_instance(built):
    X = built(3)[0][1]
    found = False
    for m in F.enumerate_minimal_nonfaces(X):
        for a in X.black_cycle:
            if a in m:
                continue
            bigger = m | {a}
            rest = set(X.labels) - bigger
            if sum(X.color(v) is Color.BLACK for v in rest) >= 2 and any(X.color(v) is Color.WHITE for v in rest):
                if F.classify_nonface(X, bigger) is NonfaceKind.NON_SPECIAL:
                    found = True
    assert found


@pytest.mark.parametrize("d", [2, 3])
def test_classification_full_sweep(built, d):
    kinds = Counter()
    for _, X, _ in built(d):
        for size in range(d + 1, 2 * d + 1):
            for m in itertools.combinations(X.labels, size):
                kind = F.classify_nonface(X, m)  # raises on disagreement with the face test
                assert (kind is NonfaceKind.NOT_A_NONFACE) == dg.is_face(X, m)
                kinds[kind] += 1
    assert kinds[NonfaceKind.SPECIAL] and kinds[NonfaceKind.NON_SPECIAL] and kinds[NonfaceKind.MINIMAL]


def test_classification_sampled_d4(built):
    rng = random.Random(4)
    for k in range(10_000):
        _, X, _ = built(4)[k % len(built(4))]
        m = rng.sample(X.labels, rng.randint(5, 8))
        kind = F.classify_nonface(X, m)
        assert (kind is NonfaceKind.NOT_A_NONFACE) == dg.is_face(X, m)


# -- counts and closed forms --------------------------------------------------------


def test_count_containing_single_white(built):
    for d in (2, 3):
        for _, X, _ in built(d):
            for w in X.whites:
                inside = sum(1 for L in F.all_lunes(X) if w in F.whites_inside(X, L))
                assert F.count_nonfaces_containing(X, {w}) == inside
    with pytest.raises(DiagramError):
        F.count_nonfaces_containing(built(2)[0][1], set())


def test_path_stats_examples(pentagon):
    assert F.path_stats(pentagon, "A1", "A2") == F.PathStats(3, 0)
    assert F.path_stats(pentagon, "A1", "A3") == F.PathStats(2, 1)
    for a, b in itertools.permutations(pentagon.black_cycle, 2):
        s = F.path_stats(pentagon, a, b)
        assert s.l + s.r == pentagon.d + 1
    with pytest.raises(DiagramError):
        F.path_stats(pentagon, "A1", "A1")


def test_black_black_examples(pentagon):
    assert F.closed_form_black_black(pentagon, "A1", "A3") == 1
    assert F.count_nonfaces_containing(pentagon, {"A1", "A3"}) == 1
    assert F.closed_form_black_black(pentagon, "A1", "A2") == comb(pentagon.d + 1, 2)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_black_black_double_counting(built, d):
    for _, X, _ in built(d):
        total = sum(F.closed_form_black_black(X, a, b) for a, b in itertools.combinations(X.black_cycle, 2))
        incidences = sum(comb(sum(X.color(v) is Color.BLACK for v in m), 2) for m in F.enumerate_minimal_nonfaces(X))
        assert total == incidences


def test_home_triangle_and_a_statistic(pentagon, d0):
    assert F.home_triangle(pentagon, "B3", "A3") == ("A3", "A4", "A5")
    assert F.a_statistic(pentagon, "A1", "A3", "B3") == 1
    assert F.path_stats(pentagon, "A1", "A3") == F.PathStats(2, 1)
    assert F.closed_form_black_white(pentagon, "A1", "B3", "A3") == 3
    assert F.count_nonfaces_containing(pentagon, {"A1", "B3"}) == 3
    assert F.a_statistic(pentagon, "A4", "A3", "B3") == 0
    # d = 0: the opposite side
    for j, a in enumerate(d0.black_cycle):
        _, b, c = F.home_triangle(d0, "B1", a)
        assert {a, b, c} == set(d0.black_cycle)
    with pytest.raises(DiagramError):
        F.home_triangle(pentagon, "B3", "A1")


@pytest.mark.parametrize("d", [2, 3, 4])
def test_home_triangle_unique_and_a_bounded(built, d):
    for _, X, _ in built(d):
        for w in X.whites:
            for aj in dg.corresponding_blacks(X, w):
                j = X.cycle_index(aj)
                n = len(X.black_cycle)
                hits = [s for s in range(1, n - 1) if X.in_triangle(w, aj, X.black_at(j + s), X.black_at(j + s + 1))]
                assert len(hits) == 1
                side = dg.adjacent_side(X, w)
                if side is not None:
                    _, ak, ak1 = F.home_triangle(X, w, aj)
                    other = side[1] if side[0] == aj else side[0]
                    assert other in (ak, ak1)
                for ai in X.black_cycle:
                    if ai != aj:
                        s = F.path_stats(X, ai, aj)
                        assert 0 <= F.a_statistic(X, ai, aj, w) <= max(s.l, s.r)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_closed_forms_match_brute_force(built, d):
    for _, X, _ in built(d):
        for a, b in itertools.combinations(X.black_cycle, 2):
            assert F.closed_form_black_black(X, a, b) == F.count_nonfaces_containing(X, {a, b})
        for w in X.whites:
            for aj in dg.corresponding_blacks(X, w):
                for ai in X.black_cycle:
                    if ai == aj:
                        continue
                    brute = F.count_nonfaces_containing(X, {ai, w})
                    assert F.closed_form_black_white(X, ai, w, aj) == brute
                    assert F.count_lunes_with_white_omitting(X, w, ai) == brute


def test_adjacent_side_partner_has_zero_count(built):
    for d in (2, 3, 4):
        for _, X, _ in built(d):
            for a, b, w in dg.adjacent_whites(X):
                assert F.count_nonfaces_containing(X, {b, w}) == 0
                assert F.closed_form_black_white(X, b, w, a) == 0


# -- remarkable edges and parity --------------------------------------------------


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_remarkable_edges_three_ways(built, d):
    for t, X, corr in built(d):
        brute = F.remarkable_edges(X)
        assert brute == F.corresponding_pairs(X)
        leaf_edges = {frozenset(corr[v] for v in e) for e in t.edges if any(t.is_leaf(v) for v in e)}
        assert brute == leaf_edges
        assert len(brute) == d + 3
        assert not any(all(X.color(v) is Color.WHITE for v in e) for e in brute)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_parity_lemmas(built, d):
    for _, X, _ in built(d):
        assert F.parity_violations(X) == []


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_remarkable_degree_profile(built, d):
    for _, X, _ in built(d):
        degree = Counter(v for e in F.remarkable_edges(X) for v in e)
        assert all(degree[a] == 1 for a in X.black_cycle)
        assert 1 in degree.values() and 2 in degree.values()


# -- lattices -------------------------------------------------------------------


def test_face_lattice_d2(x2):
    L = F.face_lattice(x2)
    assert L.f_vector() == (8, 28, 40, 20)
    assert len(L.faces_by_size[2]) == comb(8, 2)
    assert all(len(f) == 4 for f in L.facets)


@pytest.mark.parametrize(
    "d,fvec",
    [
        (3, (10, 45, 120, 185, 150, 50)),
        (4, (12, 66, 220, 495, 756, 742, 420, 105)),
    ],
)
def test_face_lattice_larger(built, d, fvec):
    for _, X, _ in built(d):
        L = F.face_lattice(X)
        assert L.f_vector() == fvec
        assert len(L.faces_by_size[d]) == comb(2 * d + 4, d)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_local_counts_match_cyclic(built, d):
    cyc = F.face_lattice(F.cyclic_diagram(d))
    ref = F.local_face_counts(cyc, cyc.labels[0])
    for _, X, _ in built(d):
        L = F.face_lattice(X)
        per_vertex = [F.local_face_counts(L, v) for v in L.labels]
        assert all(c == ref for c in per_vertex)
        D = 2 * d
        assert sum(c[D] for c in per_vertex) == D * L.f_vector()[D - 1]
        assert L.f_vector() == cyc.f_vector()


def test_local_counts_accept_diagram(x2):
    assert F.local_face_counts(x2, "A1") == F.local_face_counts(F.face_lattice(x2), "A1")


def test_cyclic_diagram_examples():
    for d in (1, 2, 3):
        C = F.cyclic_diagram(d)
        assert dg.is_polytope_diagram(C)
        assert dg.is_neighborly_diagram(C)
        assert not dg.is_t_diagram(C)
    with pytest.raises(DiagramError):
        F.cyclic_diagram(0)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_recover_colors_and_identify(built, d):
    items = built(d)
    for t, X, _ in items:
        L = F.face_lattice(X)
        assert F.recover_colors(L) == {a: X.color(a) for a in X.labels}
        found = F.identify_tree(L)
        assert is_isomorphic(found, t, up_to_mirror=True)
        for u, _, _ in items:
            if not is_isomorphic(u, t, up_to_mirror=True):
                assert not is_isomorphic(found, u, up_to_mirror=True)


def test_identify_invariant_under_relabeling(built):
    rng = random.Random(7)
    for d in (2, 3):
        for t, X, _ in built(d):
            L = F.face_lattice(X)
            labels = list(L.labels)
            shuffled = labels[:]
            rng.shuffle(shuffled)
            L2 = L.relabel(dict(zip(labels, shuffled)))
            assert canonical_code(F.identify_tree(L2), True) == canonical_code(t, True)


def test_cyclic_lattice_is_not_recognized():
    with pytest.raises(LatticeError):
        F.recover_colors(F.face_lattice(F.cyclic_diagram(2)))


def test_lattice_json(x2):
    L = F.face_lattice(x2)
    again = FaceLattice.from_json(L.to_json())
    assert again == L
    with pytest.raises(LatticeError):
        FaceLattice.from_json("[1, 2")
    with pytest.raises(LatticeError):
        FaceLattice.from_dict({"d": 2, "facets": [["A1", "A2"]]})
    with pytest.raises(LatticeError):
        FaceLattice.from_dict({"facets": []})


def test_lattice_downward_closed(x2):
    L = F.face_lattice(x2)
    for t, members in L.faces_by_size.items():
        if t == 1:
            continue
        for f in members:
            for g in itertools.combinations(sorted(f), t - 1):
                assert L.is_face(g)
