"""3-trees: cubic plane trees given by a rotation system.

A :class:`ThreeTree` is stored as its rotation map: every internal (degree
3) vertex maps to the cyclic sequence of its three neighbours.  Leaves are
the neighbours that have no rotation of their own.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from math import comb
from typing import Iterable, Mapping, Optional, Sequence

from .errors import ConsistencyError, TreeError


def _rotate_to_min(seq: Sequence[str]) -> tuple[str, ...]:
    k = seq.index(min(seq))
    return tuple(seq[k:]) + tuple(seq[:k])


@dataclass(frozen=True)
class CyclicOrder:
    """A sequence considered up to rotation."""

    items: tuple[str, ...]

    def __post_init__(self):
        items = tuple(self.items)
        if len(set(items)) != len(items):
            raise ValueError("cyclic order with repeated elements")
        object.__setattr__(self, "items", _rotate_to_min(items) if items else items)

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def reversed(self) -> "CyclicOrder":
        return CyclicOrder(tuple(reversed(self.items)))

    def relabel(self, mapping: Mapping[str, str]) -> "CyclicOrder":
        return CyclicOrder(tuple(mapping[x] for x in self.items))

    def same_unoriented(self, other: "CyclicOrder") -> bool:
        return self == other or self == other.reversed()


class ThreeTree:
    """Tree with all degrees in {1, 3} and a cyclic order at each internal vertex."""

    def __init__(self, rotation: Mapping[str, Sequence[str]]):
        rot = {}
        for v, nbrs in rotation.items():
            nbrs = tuple(nbrs)
            if len(nbrs) != 3 or len(set(nbrs)) != 3 or v in nbrs:
                raise TreeError(f"internal vertex {v!r} needs 3 distinct neighbours, got {nbrs}")
            rot[v] = _rotate_to_min(nbrs)
        if not rot:
            raise TreeError("a 3-tree needs at least one internal vertex")
        self.rotation: dict[str, tuple[str, str, str]] = dict(sorted(rot.items()))
        self._validate()

    def _validate(self) -> None:
        leaf_refs: dict[str, int] = {}
        for v, nbrs in self.rotation.items():
            for u in nbrs:
                if u in self.rotation:
                    if v not in self.rotation[u]:
                        raise TreeError(f"edge {v}-{u} is not symmetric")
                else:
                    leaf_refs[u] = leaf_refs.get(u, 0) + 1
        if any(c != 1 for c in leaf_refs.values()):
            raise TreeError("a leaf is attached to more than one vertex")
        n_vertices = len(self.rotation) + len(leaf_refs)
        if len(self.edges) != n_vertices - 1:
            raise TreeError("not a tree: edge count differs from vertex count - 1")
        seen = {next(iter(self.rotation))}
        stack = list(seen)
        while stack:
            v = stack.pop()
            for u in self.neighbors(v):
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        if len(seen) != n_vertices:
            raise TreeError("not a tree: disconnected")

    # -- structure ----------------------------------------------------------

    @cached_property
    def leaves(self) -> tuple[str, ...]:
        return tuple(sorted({u for nbrs in self.rotation.values() for u in nbrs if u not in self.rotation}))

    @property
    def internal(self) -> tuple[str, ...]:
        return tuple(self.rotation)

    @property
    def vertices(self) -> tuple[str, ...]:
        return tuple(sorted(set(self.rotation) | set(self.leaves)))

    @cached_property
    def edges(self) -> frozenset:
        return frozenset(frozenset((v, u)) for v, nbrs in self.rotation.items() for u in nbrs)

    @cached_property
    def _leaf_parent(self) -> dict[str, str]:
        return {u: v for v, nbrs in self.rotation.items() for u in nbrs if u not in self.rotation}

    def is_leaf(self, v: str) -> bool:
        return v not in self.rotation

    def neighbors(self, v: str) -> tuple[str, ...]:
        if v in self.rotation:
            return self.rotation[v]
        try:
            return (self._leaf_parent[v],)
        except KeyError:
            raise TreeError(f"unknown vertex {v!r}") from None

    def successor(self, v: str, u: str) -> str:
        """Neighbour following ``u`` in the rotation at ``v``."""
        rot = self.rotation[v]
        return rot[(rot.index(u) + 1) % 3]

    def branches(self, v: str) -> dict[str, int]:
        """Map each vertex except ``v`` to the index of its component in ``t - v``."""
        out: dict[str, int] = {}
        for k, start in enumerate(self.neighbors(v)):
            out[start] = k
            stack = [(start, v)]
            while stack:
                x, parent = stack.pop()
                for y in self.neighbors(x):
                    if y != parent:
                        out[y] = k
                        stack.append((y, x))
        return out

    def pre_leaves(self) -> tuple[str, ...]:
        """Internal vertices adjacent to at least two leaves."""
        return tuple(v for v, nbrs in self.rotation.items() if sum(self.is_leaf(u) for u in nbrs) >= 2)

    def relabel(self, mapping: Mapping[str, str]) -> "ThreeTree":
        return ThreeTree({mapping[v]: tuple(mapping[u] for u in nbrs) for v, nbrs in self.rotation.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, ThreeTree) and self.rotation == other.rotation

    def __hash__(self) -> int:
        return hash(tuple(self.rotation.items()))

    def __repr__(self) -> str:
        return f"ThreeTree({to_text(self)!r})"


# ---------------------------------------------------------------------------
# operations


def leaf_cyclic_order(t: ThreeTree) -> CyclicOrder:
    """Leaves in the order met by the face walk of the plane tree."""
    start = t.leaves[0]
    order = [start]
    prev, cur = start, t.neighbors(start)[0]
    while True:
        if t.is_leaf(cur):
            if cur == start:
                break
            order.append(cur)
            prev, cur = cur, t.neighbors(cur)[0]
        else:
            prev, cur = cur, t.successor(cur, prev)
    return CyclicOrder(tuple(order))


def mirror(t: ThreeTree) -> ThreeTree:
    return ThreeTree({v: tuple(reversed(nbrs)) for v, nbrs in t.rotation.items()})


def _encode(t: ThreeTree, v: str, parent: str) -> str:
    if t.is_leaf(v):
        return "."
    a = t.successor(v, parent)
    b = t.successor(v, a)
    return "(" + _encode(t, a, v) + _encode(t, b, v) + ")"


def _rooted_codes(t: ThreeTree):
    for r, nbrs in t.rotation.items():
        for k in range(3):
            kids = nbrs[k:] + nbrs[:k]
            yield "[" + "".join(_encode(t, c, r) for c in kids) + "]"


def canonical_code(t: ThreeTree, up_to_mirror: bool = False) -> str:
    """Least rooted serialization over all roots and starting edges."""
    code = min(_rooted_codes(t))
    if up_to_mirror:
        code = min(code, min(_rooted_codes(mirror(t))))
    return code


def is_isomorphic(t1: ThreeTree, t2: ThreeTree, up_to_mirror: bool = False) -> bool:
    return canonical_code(t1, up_to_mirror) == canonical_code(t2, up_to_mirror)


def from_code(code: str) -> ThreeTree:
    """Tree with fresh labels from a rooted code (as made by :func:`canonical_code`).

    Internal vertices are ``u1, u2, ..`` and leaves ``x1, x2, ..`` in preorder.
    """
    rotation: dict[str, list[str]] = {}
    counters = {"u": 0, "x": 0}

    def fresh(prefix: str) -> str:
        counters[prefix] += 1
        return f"{prefix}{counters[prefix]}"

    pos = 0

    def node(parent: str) -> str:
        nonlocal pos
        ch = code[pos]
        if ch == ".":
            pos += 1
            return fresh("x")
        if ch != "(":
            raise TreeError(f"bad tree code at offset {pos}: {code!r}")
        pos += 1
        v = fresh("u")
        rotation[v] = [parent]
        rotation[v].append(node(v))
        rotation[v].append(node(v))
        if code[pos] != ")":
            raise TreeError(f"bad tree code at offset {pos}: {code!r}")
        pos += 1
        return v

    if not code.startswith("["):
        raise TreeError(f"bad tree code: {code!r}")
    pos = 1
    root = fresh("u")
    rotation[root] = []
    for _ in range(3):
        rotation[root].append(node(root))
    if code[pos:] != "]":
        raise TreeError(f"bad tree code: {code!r}")
    return ThreeTree(rotation)


def star(leaves: Sequence[str] = ("x1", "x2", "x3"), center: str = "u1") -> ThreeTree:
    return ThreeTree({center: tuple(leaves)})


def expand_leaf(t: ThreeTree, leaf: str, new_leaves: tuple[str, str], new_vertex: Optional[str] = None) -> ThreeTree:
    """Replace ``leaf`` by an internal vertex carrying two new leaves.

    The rotation at the new vertex is ``(parent, *new_leaves)``.
    """
    if not t.is_leaf(leaf):
        raise TreeError(f"{leaf!r} is not a leaf")
    v = new_vertex or leaf
    parent = t.neighbors(leaf)[0]
    rot = {u: tuple(v if x == leaf else x for x in nbrs) for u, nbrs in t.rotation.items()}
    rot[v] = (parent,) + tuple(new_leaves)
    return ThreeTree(rot)


def contract_pre_leaf(t: ThreeTree, v: str) -> tuple[ThreeTree, str, str, str]:
    """Delete the two leaves of pre-leaf ``v``; ``v`` becomes a leaf.

    Returns ``(smaller tree, parent, x, y)`` where the rotation at ``v`` was
    ``(parent, x, y)``.
    """
    nbrs = t.rotation[v]
    inner = [u for u in nbrs if not t.is_leaf(u)]
    if len(inner) != 1:
        raise TreeError(f"{v!r} is not a pre-leaf vertex of a tree with >= 4 leaves")
    parent = inner[0]
    x = t.successor(v, parent)
    y = t.successor(v, x)
    rot = {u: n for u, n in t.rotation.items() if u != v}
    return ThreeTree(rot), parent, x, y


@lru_cache(maxsize=None)
def _enumerate_codes(num_leaves: int) -> tuple[str, ...]:
    if num_leaves == 3:
        return (canonical_code(star(), True),)
    codes = set()
    for code in _enumerate_codes(num_leaves - 1):
        base = from_code(code)
        for leaf in base.leaves:
            for pair in (("y1", "y2"), ("y2", "y1")):
                grown = expand_leaf(base, leaf, pair, new_vertex="w")
                codes.add(canonical_code(grown, True))
    return tuple(sorted(codes))


def enumerate_trees(num_leaves: int) -> list[ThreeTree]:
    """One tree per isomorphism class up to mirror, ordered by canonical code."""
    if num_leaves < 3:
        raise TreeError("3-trees have at least 3 leaves")
    return [from_code(c) for c in _enumerate_codes(num_leaves)]


def catalan(x: int) -> int:
    if x < 0:
        raise ValueError("catalan index must be nonnegative")
    return comb(2 * x, x) // (x + 1)


def _catalan_or_zero(x: Fraction) -> Fraction:
    return Fraction(catalan(int(x))) if x.denominator == 1 and x >= 0 else Fraction(0)


def count_T_diagrams(d: int) -> int:
    """Closed-form number of combinatorially distinct T-diagrams for ``d``."""
    if d <= 0:
        raise ValueError("d must be positive")
    d_ = Fraction(d)
    total = (
        _catalan_or_zero(d_ + 1) / (2 * (d_ + 3))
        + 3 * _catalan_or_zero((d_ + 3) / 2 - 1) / 4
        + _catalan_or_zero((d_ + 3) / 3 - 1) / 3
        + _catalan_or_zero(d_ / 2) / 2
    )
    if total.denominator != 1:
        raise ConsistencyError(f"count for d={d} is not an integer: {total}")
    return int(total)


def random_tree(num_leaves: int, rng: random.Random) -> ThreeTree:
    """Random 3-tree with labels ``r1, r2, ..`` (not uniform over shapes)."""
    t = star(("r1", "r2", "r3"), center="r0")
    n = 3
    label = 3
    while n < num_leaves:
        leaf = rng.choice(t.leaves)
        pair = (f"r{label + 1}", f"r{label + 2}")
        label += 2
        if rng.random() < 0.5:
            pair = pair[::-1]
        t = expand_leaf(t, leaf, pair)
        n += 1
    return t


# ---------------------------------------------------------------------------
# text and DOT formats

_TOKEN_RE = re.compile(r"\s*([(),]|[^(),\s]+)")


def parse_tree(text: str) -> ThreeTree:
    """Parse the nested-parentheses format, e.g. ``"((x,y),z,w)"``.

    The outer group is the root with 3 children in rotation order; every
    other group has 2 children listed clockwise after its parent edge.
    Internal vertices receive the labels ``#1, #2, ..`` in preorder.
    """
    tokens = _TOKEN_RE.findall(text.strip())
    if "".join(tokens) != re.sub(r"\s+", "", text):
        raise TreeError(f"unparseable tree text: {text!r}")
    pos = 0
    rotation: dict[str, list[str]] = {}
    count = 0

    def expect(tok: str) -> None:
        nonlocal pos
        if pos >= len(tokens) or tokens[pos] != tok:
            got = tokens[pos] if pos < len(tokens) else "end of input"
            raise TreeError(f"expected {tok!r}, got {got!r}")
        pos += 1

    def group(parent: Optional[str]) -> str:
        nonlocal pos, count
        if pos >= len(tokens):
            raise TreeError("unexpected end of tree text")
        tok = tokens[pos]
        if tok not in "(),":
            pos += 1
            return tok
        expect("(")
        count += 1
        v = f"#{count}"
        kids = [group(v)]
        while pos < len(tokens) and tokens[pos] == ",":
            pos += 1
            kids.append(group(v))
        expect(")")
        want = 3 if parent is None else 2
        if len(kids) != want:
            raise TreeError(f"{'root' if parent is None else 'internal node'} needs {want} children, got {len(kids)}")
        rotation[v] = kids if parent is None else [parent] + kids
        return v

    if not tokens or tokens[0] != "(":
        raise TreeError("tree text must start with the root group")
    group(None)
    if pos != len(tokens):
        raise TreeError(f"trailing input after tree: {tokens[pos:]}")
    labels = [u for nbrs in rotation.values() for u in nbrs if u not in rotation]
    if len(set(labels)) != len(labels):
        raise TreeError("duplicate leaf labels")
    return ThreeTree(rotation)


def to_text(t: ThreeTree, root: Optional[str] = None) -> str:
    """Nested-parentheses text; internal labels are not preserved."""
    root = root or t.internal[0]

    def group(v: str, parent: str) -> str:
        if t.is_leaf(v):
            return v
        a = t.successor(v, parent)
        b = t.successor(v, a)
        return f"({group(a, v)},{group(b, v)})"

    return "(" + ",".join(group(c, root) for c in t.rotation[root]) + ")"


def to_dot(t: ThreeTree, name: str = "tree") -> str:
    lines = [f"graph {name} {{"]
    for v in t.internal:
        lines.append(f'  "{v}" [shape=circle];')
    for v in t.leaves:
        lines.append(f'  "{v}" [shape=box];')
    for v, nbrs in t.rotation.items():
        lines.append(f"  // rotation {v}: {' '.join(nbrs)}")
    for e in sorted(tuple(sorted(e)) for e in t.edges):
        lines.append(f'  "{e[0]}" -- "{e[1]}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
