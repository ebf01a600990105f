"""Acceptance criteria 1-11, one test each.

Every test prints a single ``criterion N: PASS|FAIL ...`` line (visible in
``pytest -v`` output because it bypasses capture) and then asserts.
Timed criteria clear the in-process caches first so that the measured time
covers the full computation.
"""

from __future__ import annotations

import itertools
import time
from math import comb

import pytest

from galeforge import construct, diagram, faces, oracle, trees, verify


@pytest.fixture()
def report(capsys):
    def emit(number: int, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\ncriterion {number}: {'PASS' if ok else 'FAIL'} {detail}")

    return emit


def _clear_caches() -> None:
    trees._enumerate_codes.cache_clear()
    verify.built.cache_clear()
    verify.lattice.cache_clear()


def _collect(results):
    fails = [line for r in results for line in ([r.line()] if not r.ok else [])]
    checked = sum(r.checked for r in results)
    return fails, checked


def test_criterion_01_tree_counts(report):
    _clear_caches()
    start = time.perf_counter()
    expected = {1: 1, 2: 1, 3: 3, 4: 4, 5: 12, 6: 27}
    formula = {d: trees.count_T_diagrams(d) for d in expected}
    enumerated = {d: len(trees.enumerate_trees(d + 3)) for d in expected}
    elapsed = time.perf_counter() - start
    ok = formula == enumerated == expected and elapsed < 10
    report(1, ok, f"formula={list(formula.values())} enumeration={list(enumerated.values())} {elapsed:.2f}s")
    assert formula == expected
    assert enumerated == expected
    assert elapsed < 10


def test_criterion_02_round_trip(report):
    _clear_caches()
    start = time.perf_counter()
    total = matched = 0
    for n in range(3, 10):
        for t in trees.enumerate_trees(n):
            X, _ = construct.build_diagram(t)
            for choose in ("first", "last"):
                back, _ = construct.extract_tree(X, choose=choose)
                total += 1
                matched += trees.is_isomorphic(back, t, up_to_mirror=True)
    elapsed = time.perf_counter() - start
    ok = matched == total and elapsed < 60
    report(2, ok, f"{matched}/{total} round trips exact, {elapsed:.2f}s")
    assert matched == total
    assert elapsed < 60


def test_criterion_03_built_diagrams_are_T_diagrams(report):
    failures = []
    checked = 0
    for d in range(2, 6):
        D_subsets = comb(2 * d + 4, d)
        for t, X, _ in verify.built(d):
            checked += 1
            if not (diagram.is_T_diagram(X) and diagram.is_neighborly_diagram(X)):
                failures.append((d, trees.to_text(t)))
            elif d <= 3:
                # spell out neighborliness: every d-subset is a face
                faces_found = sum(diagram.is_face(X, s) for s in itertools.combinations(X.labels, d))
                if faces_found != D_subsets:
                    failures.append((d, trees.to_text(t)))
    report(3, not failures, f"{checked} diagrams, {len(failures)} failures")
    assert not failures


def test_criterion_04_minimal_nonface_census(report):
    counts = {}
    results = []
    for d in (2, 3, 4):
        results.append(verify.check_minimal_nonfaces(d))
        counts[d] = {len(faces.enumerate_minimal_nonfaces(X)) for _, X, _ in verify.built(d)}
    fails, checked = _collect(results)
    ok = not fails and counts == {2: {16}, 3: {25}, 4: {36}}
    report(4, ok, f"counts={counts} over {checked} diagrams")
    assert counts == {2: {16}, 3: {25}, 4: {36}}
    assert not fails, fails


def test_criterion_05_closed_forms(report):
    results = [verify.check_closed_forms(d) for d in range(1, 5)]
    fails, checked = _collect(results)
    report(5, not fails, f"{checked} pairs compared, {len(fails)} failing d-values")
    assert not fails, fails


def test_criterion_06_remarkable_edges(report):
    results = [verify.check_remarkable(d) for d in range(2, 6)]
    fails, checked = _collect(results)
    report(6, not fails, f"{checked} diagrams, three characterizations compared")
    assert not fails, fails


def test_criterion_07_parity_and_reconstruction(report):
    results = [verify.check_reconstruction(d) for d in range(2, 5)]
    fails, checked = _collect(results)
    report(7, not fails, f"{checked} diagrams: parity, recover_colors, identify_tree")
    assert not fails, fails


def test_criterion_08_oracle_equality(report):
    start = time.perf_counter()
    mismatches = 0
    lines = []
    for d in (2, 3):
        for _, X, _ in verify.built(d):
            rep = oracle.verify_against_oracle(X, exhaustive=True)
            mismatches += len(rep["mismatches"])
            assert rep["subsets_checked"] == sum(comb(2 * d + 4, k) for k in range(1, 2 * d + 1))
        lines.append(f"d={d} exhaustive")
    samples = 10_000
    for _, X, _ in verify.built(4):
        rep = oracle.verify_against_oracle(X, exhaustive=False, samples=samples, seed=0)
        mismatches += len(rep["mismatches"])
        assert rep["subsets_checked"] >= comb(12, 8)
    lines.append(f"d=4 all 8-subsets + {samples} seeded draws")
    facets_d2 = oracle.facets_bruteforce(oracle.gale_inverse(verify.built(2)[0][1]))
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and len(facets_d2) == 20 and elapsed < 120
    report(8, ok, f"{'; '.join(lines)}; d=2 facets={len(facets_d2)}; {mismatches} mismatches; {elapsed:.1f}s")
    assert mismatches == 0
    assert len(facets_d2) == 20
    assert elapsed < 120


def test_criterion_09_local_counts_match_cyclic(report):
    results = [verify.check_local_counts(d) for d in (2, 3, 4)]
    fails, checked = _collect(results)
    f2 = verify.lattice(2, 0).f_vector()
    ok = not fails and f2 == (8, 28, 40, 20)
    report(9, ok, f"{checked} diagrams; d=2 f-vector {f2}")
    assert f2 == (8, 28, 40, 20)
    assert not fails, fails


def test_criterion_10_non_transitivity(report):
    results = [verify.check_non_transitive(d) for d in range(2, 6)]
    fails, checked = _collect(results)
    report(10, not fails, f"{checked} diagrams with remarkable degrees 1 and 2")
    assert not fails, fails


def test_criterion_11_equivalences(report):
    results = [verify.check_equivalences(d) for d in range(1, 5)]
    fails, checked = _collect(results)
    report(11, not fails, f"{checked} pairs and realizations compared")
    assert not fails, fails
