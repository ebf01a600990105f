"""Batch verification of every combinatorial claim on built diagrams.

Each check runs for one ``d`` and returns a :class:`CheckResult`; failures
are collected rather than raised so one run lists everything that broke.
"""

from __future__ import annotations

import itertools
import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Optional

from . import construct, diagram, faces, oracle, trees
from .errors import GaleForgeError


@dataclass
class CheckResult:
    name: str
    d: int
    ok: bool
    checked: int = 0
    failures: list[str] = field(default_factory=list)

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        detail = "; ".join(self.failures[:5]) if self.failures else f"{self.checked} cases"
        return f"{self.name}\t{self.d}\t{status}\t{detail}"


@lru_cache(maxsize=None)
def built(d: int) -> tuple:
    """``(tree, diagram, correspondence)`` for every tree with ``d+3`` leaves."""
    return tuple((t,) + construct.build_diagram(t) for t in trees.enumerate_trees(d + 3))


@lru_cache(maxsize=None)
def lattice(d: int, k: int) -> faces.FaceLattice:
    return faces.face_lattice(built(d)[k][1])


def _result(name: str, d: int, checked: int, failures: list[str]) -> CheckResult:
    return CheckResult(name, d, not failures, checked, failures)


def check_tree_counts(d: int) -> CheckResult:
    formula = trees.count_T_diagrams(d)
    found = len(trees.enumerate_trees(d + 3))
    fails = [] if formula == found else [f"formula {formula} != enumeration {found}"]
    return _result("tree-counts", d, 1, fails)


def check_round_trip(d: int) -> CheckResult:
    fails = []
    items = built(d)
    for t, X, _ in items:
        for choose in ("first", "last"):
            back, _ = construct.extract_tree(X, choose=choose)
            if not trees.is_isomorphic(back, t, up_to_mirror=True):
                fails.append(f"{trees.to_text(t)} ({choose})")
    return _result("round-trip", d, len(items), fails)


def check_t_diagrams(d: int) -> CheckResult:
    fails = [trees.to_text(t) for t, X, _ in built(d) if not diagram.is_T_diagram(X)]
    return _result("T-diagram", d, len(built(d)), fails)


def check_minimal_nonfaces(d: int) -> CheckResult:
    fails = []
    expected = (d + 1) * (d + 3) + 1
    for t, X, _ in built(d):
        brute = faces.enumerate_minimal_nonfaces(X)
        by_lune = faces.lune_nonfaces(X)
        if len(brute) != expected:
            fails.append(f"{trees.to_text(t)}: {len(brute)} non-faces, expected {expected}")
        if set(by_lune.values()) != brute or len(set(by_lune.values())) != len(by_lune):
            fails.append(f"{trees.to_text(t)}: lune map is not a bijection onto non-faces")
    return _result("minimal-nonfaces", d, len(built(d)), fails)


def check_closed_forms(d: int) -> CheckResult:
    fails = []
    n = 0
    for t, X, _ in built(d):
        for a, b in itertools.combinations(X.black_cycle, 2):
            n += 1
            brute = faces.count_nonfaces_containing(X, {a, b})
            if faces.closed_form_black_black(X, a, b) != brute:
                fails.append(f"{trees.to_text(t)}: N({a},{b})")
        for a in X.black_cycle:
            for w in X.whites:
                for aj in diagram.corresponding_blacks(X, w):
                    if aj == a:
                        continue
                    n += 1
                    brute = faces.count_nonfaces_containing(X, {a, w})
                    if faces.closed_form_black_white(X, a, w, aj) != brute:
                        fails.append(f"{trees.to_text(t)}: N({a},{w}) via {aj}")
                    if faces.count_lunes_with_white_omitting(X, w, a) != brute:
                        fails.append(f"{trees.to_text(t)}: lune count for ({a},{w})")
    return _result("closed-forms", d, n, fails)


def check_remarkable(d: int) -> CheckResult:
    fails = []
    for t, X, corr in built(d):
        brute = faces.remarkable_edges(X)
        pairs = faces.corresponding_pairs(X)
        leaf_edges = frozenset(
            frozenset(corr[v] for v in e) for e in t.edges if any(t.is_leaf(v) for v in e)
        )
        if not brute == pairs == leaf_edges:
            fails.append(trees.to_text(t))
    return _result("remarkable-edges", d, len(built(d)), fails)


def check_reconstruction(d: int) -> CheckResult:
    fails = []
    for k, (t, X, _) in enumerate(built(d)):
        fails += [f"{trees.to_text(t)}: {msg}" for msg in faces.parity_violations(X)]
        L = lattice(d, k)
        try:
            colors = faces.recover_colors(L)
            if colors != {a: X.color(a) for a in X.labels}:
                fails.append(f"{trees.to_text(t)}: wrong colors")
            if not trees.is_isomorphic(faces.identify_tree(L), t, up_to_mirror=True):
                fails.append(f"{trees.to_text(t)}: identified a different tree")
        except GaleForgeError as exc:
            fails.append(f"{trees.to_text(t)}: {exc}")
    return _result("reconstruction", d, len(built(d)), fails)


def check_local_counts(d: int) -> CheckResult:
    fails = []
    cyc = faces.face_lattice(faces.cyclic_diagram(d))
    ref = faces.local_face_counts(cyc, cyc.labels[0])
    if any(faces.local_face_counts(cyc, v) != ref for v in cyc.labels):
        fails.append("cyclic polytope counts vary by vertex")
    for k, (t, X, _) in enumerate(built(d)):
        L = lattice(d, k)
        if any(faces.local_face_counts(L, v) != ref for v in L.labels):
            fails.append(f"{trees.to_text(t)}: local counts differ from the cyclic polytope")
        if L.f_vector() != cyc.f_vector():
            fails.append(f"{trees.to_text(t)}: f-vector {L.f_vector()}")
    return _result("local-face-counts", d, len(built(d)), fails)


def check_non_transitive(d: int) -> CheckResult:
    fails = []
    for t, X, _ in built(d):
        degree = Counter(v for e in faces.remarkable_edges(X) for v in e)
        values = {degree.get(v, 0) for v in X.labels}
        if not {1, 2} <= values:
            fails.append(f"{trees.to_text(t)}: remarkable degrees {sorted(values)}")
    return _result("non-transitive", d, len(built(d)), fails)


def check_equivalences(d: int) -> CheckResult:
    fails = []
    items = built(d)
    n = 0
    for (t1, X, _), (t2, Y, _) in itertools.combinations_with_replacement(items, 2):
        n += 1
        diag = construct.diagonal_equivalent(X, Y) is not None
        comb_eq = construct.comb_equivalent(X, Y)
        same = trees.is_isomorphic(t1, t2, up_to_mirror=True)
        if not diag == comb_eq == same:
            fails.append(f"{trees.to_text(t1)} vs {trees.to_text(t2)}")
    for t, X, _ in items:
        n += 1
        other, _ = construct.build_diagram(t, shrink=3)
        if not construct.comb_equivalent(X, other):
            fails.append(f"{trees.to_text(t)}: two realizations differ")
    return _result("diagonal-vs-combinatorial", d, n, fails)


def check_oracle(d: int, seed: int = 0, samples: int = 10_000) -> CheckResult:
    fails = []
    for t, X, _ in built(d):
        rep = oracle.verify_against_oracle(X, seed=seed, samples=samples)
        if not rep["ok"]:
            fails.append(f"{trees.to_text(t)}: {len(rep['mismatches'])} mismatches")
        L = lattice(d, [x[0] for x in built(d)].index(t))
        if rep["facet_count"] != len(L.facets):
            fails.append(f"{trees.to_text(t)}: oracle facets {rep['facet_count']} vs lattice {len(L.facets)}")
    cyc = oracle.verify_against_oracle(faces.cyclic_diagram(d), seed=seed, samples=samples)
    if not cyc["ok"]:
        fails.append("cyclic diagram mismatches")
    return _result("oracle", d, len(built(d)) + 1, fails)


CHECKS: dict[str, tuple[Callable[[int], CheckResult], int]] = {
    # name -> (check, smallest d it applies to)
    "tree-counts": (check_tree_counts, 1),
    "round-trip": (check_round_trip, 0),
    "T-diagram": (check_t_diagrams, 2),
    "minimal-nonfaces": (check_minimal_nonfaces, 2),
    "closed-forms": (check_closed_forms, 2),
    "remarkable-edges": (check_remarkable, 2),
    "reconstruction": (check_reconstruction, 2),
    "local-face-counts": (check_local_counts, 2),
    "non-transitive": (check_non_transitive, 2),
    "diagonal-vs-combinatorial": (check_equivalences, 1),
}


def _run_task(task) -> CheckResult:
    name, d, seed = task
    if name == "oracle":
        return check_oracle(d, seed=seed)
    return CHECKS[name][0](d)


def resolve_threads(threads: Optional[int] = None) -> int:
    if threads is None:
        env = os.environ.get("GALEFORGE_THREADS")
        if env is not None:
            threads = int(env)
            if threads < 1:
                raise ValueError("GALEFORGE_THREADS must be a positive integer")
    return threads or os.cpu_count() or 1


def run_all(d_values: Iterable[int], *, use_oracle: bool = False, seed: int = 0, threads: Optional[int] = None) -> list[CheckResult]:
    """Run every applicable check for every ``d``; output order is fixed."""
    tasks = []
    for d in d_values:
        for name, (_, d_min) in CHECKS.items():
            if d >= d_min:
                tasks.append((name, d, seed))
        if use_oracle and d >= 2:
            tasks.append(("oracle", d, seed))
    workers = resolve_threads(threads)
    if workers == 1 or len(tasks) == 1:
        return [_run_task(task) for task in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_task, tasks))
