"""Intersection posets, Moebius functions and the Euler characteristic of a complement.

Order convention: ``x <= y`` iff the variety y is contained in x, so the
Grassmannian itself is the bottom element.  Orders are stored reachability
closed as ``below[x] = {z : z < x}``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Iterable, Sequence

from . import exact

DATA_DIR = Path(__file__).parent / "data"


@dataclass(frozen=True)
class Element:
    id: str
    rank: int
    chi: int | None = None
    label: str = ""


@dataclass
class IntersectionPoset:
    elements: list[Element]
    below: dict[str, frozenset] = field(default_factory=dict)

    def __post_init__(self):
        ids = [e.id for e in self.elements]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate element ids")
        self._by_id = {e.id: e for e in self.elements}
        for e in self.elements:
            self.below.setdefault(e.id, frozenset())
        for x, zs in self.below.items():
            if x in zs:
                raise ValueError(f"relation is not irreflexive at {x}")
            for z in zs:
                if x in self.below[z]:
                    raise ValueError(f"relation is not antisymmetric between {x} and {z}")
                if not self.below[z] <= zs:
                    raise ValueError(f"relation is not transitively closed at {x} > {z}")
                if self._by_id[z].rank >= self._by_id[x].rank:
                    raise ValueError(f"rank not monotone: {z} < {x} but rank {self._by_id[z].rank} >= {self._by_id[x].rank}")

    @classmethod
    def from_relations(cls, elements: Iterable[Element], relations: Iterable[Sequence[str]]) -> "IntersectionPoset":
        """Build from cover (or any generating) pairs ``(a, b)`` meaning a < b."""
        elements = list(elements)
        ids = {e.id for e in elements}
        up: dict[str, set] = {e.id: set() for e in elements}
        for a, b in relations:
            if a not in ids or b not in ids:
                raise ValueError(f"relation ({a}, {b}) mentions an unknown element")
            up[b].add(a)
        order = sorted(elements, key=lambda e: e.rank)
        below: dict[str, frozenset] = {}
        for e in order:
            acc = set(up[e.id])
            for z in up[e.id]:
                if z not in below:
                    raise ValueError(f"relation ({z}, {e.id}) goes down in rank")
                acc |= below[z]
            below[e.id] = frozenset(acc)
        return cls(elements, below)

    def __len__(self):
        return len(self.elements)

    def __getitem__(self, eid: str) -> Element:
        return self._by_id[eid]

    def bottom(self) -> Element:
        minimal = [e for e in self.elements if not self.below[e.id]]
        if len(minimal) != 1:
            raise ValueError(f"poset has {len(minimal)} minimal elements; need a unique bottom")
        b = minimal[0]
        if any(b.id not in self.below[e.id] for e in self.elements if e.id != b.id):
            raise ValueError("minimal element is not below every other element")
        return b

    def leq(self, a: str, b: str) -> bool:
        return a == b or a in self.below[b]


def moebius(poset: IntersectionPoset) -> dict[str, int]:
    """mu(0, x) by the defining recursion mu(0,x) = -sum_{z<x} mu(0,z)."""
    bot = poset.bottom()
    mu = {bot.id: 1}
    for e in sorted(poset.elements, key=lambda e: e.rank):
        if e.id == bot.id:
            continue
        mu[e.id] = -sum(mu[z] for z in poset.below[e.id])
    return mu


def moebius_interval(poset: IntersectionPoset, x: str, y: str) -> int:
    """mu(x, y) on the interval [x, y] (0 when x is not below y)."""
    if not poset.leq(x, y):
        return 0
    interval = [z for z in poset.below[y] | {y} if poset.leq(x, z)]
    interval.sort(key=lambda z: poset[z].rank)
    mu = {}
    for z in interval:
        mu[z] = 1 if z == x else -sum(mu[w] for w in poset.below[z] if w in mu)
    return mu[y]


def euler_complement(poset: IntersectionPoset) -> int:
    """chi(Gr minus the arrangement) = sum_y chi(y) mu(y)."""
    for e in poset.elements:
        if e.chi is None:
            raise ValueError(f"element {e.id} ({e.label}) has no chi label")
    mu = moebius(poset)
    return sum(e.chi * mu[e.id] for e in poset.elements)


# -- builders -----------------------------------------------------------------

def _subset_id(s: Sequence[int]) -> str:
    return "{" + ",".join(str(i) for i in s) + "}"


def build_from_subsets(subsets: dict[tuple, int], labels: dict[tuple, str] | None = None) -> IntersectionPoset:
    """Poset whose elements are index subsets (intersections), ordered by inclusion."""
    labels = labels or {}
    keys = sorted(subsets, key=lambda s: (len(s), s))
    if () not in subsets:
        raise ValueError("the empty intersection (the Grassmannian) must be present")
    elements = [Element(_subset_id(s), len(s), subsets[s], labels.get(s, "")) for s in keys]
    keyset = set(keys)
    below = {}
    for s in keys:
        below[_subset_id(s)] = frozenset(
            _subset_id(t) for r in range(len(s)) for t in combinations(s, r) if t in keyset
        )
    return IntersectionPoset(elements, below)


def build_truncated_boolean(d: int, r: int, chi_by_rank: Sequence[int]) -> IntersectionPoset:
    """Subsets of [d] of size <= r, all of rank i labeled chi_by_rank[i]."""
    if r > d:
        raise ValueError(f"rank {r} exceeds the number of atoms {d}")
    if len(chi_by_rank) != r + 1:
        raise ValueError(f"need {r + 1} chi values, got {len(chi_by_rank)}")
    subsets = {s: chi_by_rank[len(s)] for i in range(r + 1) for s in combinations(range(1, d + 1), i)}
    return build_from_subsets(subsets)


CYCLE_D3_CHI = 0  # X_3 is computed directly, not from a poset


def build_cycle_arrangement(d: int) -> IntersectionPoset:
    """d Schubert divisors in Gr(2,4) from d lines in P^3 forming a cycle.

    Triples of pairwise disjoint lines (no two adjacent in the cycle) have
    chi = 2, the other d(d-3) triples chi = 3.
    """
    if d < 4:
        raise ValueError(f"cycle arrangement poset needs d >= 4 (d = 3 has chi = {CYCLE_D3_CHI} directly)")
    chi_rank = {0: 6, 1: 5, 2: 4, 4: 2}

    def adjacent(a, b):
        return (a - b) % d in (1, d - 1)

    subsets, labels = {}, {}
    for i in range(5):
        for s in combinations(range(1, d + 1), i):
            if i == 3:
                disjoint = not any(adjacent(a, b) for a, b in combinations(s, 2))
                subsets[s] = 2 if disjoint else 3
                labels[s] = "pairwise disjoint lines" if disjoint else "some adjacent lines"
            else:
                subsets[s] = chi_rank[i]
    return build_from_subsets(subsets, labels)


def cycle_closed_form(d: int) -> Fraction:
    return Fraction(72 - 62 * d + 35 * d**2 - 10 * d**3 + d**4, 12)


# -- general position ---------------------------------------------------------

def check_general_position(subspaces: Sequence[Sequence[Sequence]], max_size: int | None = None):
    """Check that every intersection of the row spaces has the expected dimension.

    Subspaces are given as full-row-rank matrices with exact (int/Fraction)
    entries, all of the same dimension c in K^n.  Returns ``(True, None)`` or
    ``(False, violating_subset)`` with 1-based indices.
    """
    mats = [[[Fraction(x) for x in row] for row in m] for m in subspaces]
    if not mats:
        return True, None
    n = len(mats[0][0])
    c = len(mats[0])
    for i, m in enumerate(mats):
        if len(m) != c or any(len(r) != n for r in m):
            raise ValueError(f"subspace {i + 1} has inconsistent shape")
        if exact.rank(m) != c:
            raise ValueError(f"subspace {i + 1} is given by a rank-deficient matrix")
    top = len(mats) if max_size is None else max_size
    for size in range(2, top + 1):
        expected = max(size * c - (size - 1) * n, 0)
        for idx in combinations(range(len(mats)), size):
            # dim of intersection = n - rank of stacked annihilators;
            # equivalently sum of dims - dim of sum for two, general via kernels
            dim = _intersection_dim([mats[i] for i in idx], n)
            if dim != expected:
                return False, tuple(i + 1 for i in idx)
    return True, None


def _intersection_dim(spaces: list[list[list[Fraction]]], n: int) -> int:
    # a vector lies in a row space iff it is orthogonal to that space's annihilator
    constraints = []
    for s in spaces:
        constraints.extend(exact.nullspace(s, n))
    if not constraints:
        return n
    return n - exact.rank(constraints)


# -- fixture I/O --------------------------------------------------------------

def load_poset(path: str | Path) -> IntersectionPoset:
    """Read the JSON fixture format {elements: [...], relations: [[a, b], ...]}."""
    with open(path) as fh:
        data = json.load(fh)
    return poset_from_dict(data)


def poset_from_dict(data: dict) -> IntersectionPoset:
    if "elements" not in data:
        raise ValueError("poset file needs an 'elements' list")
    elements = [Element(str(e["id"]), int(e["rank"]), e.get("chi"), e.get("label", "")) for e in data["elements"]]
    rels = [(str(a), str(b)) for a, b in data.get("relations", [])]
    return IntersectionPoset.from_relations(elements, rels)


def poset_to_dict(poset: IntersectionPoset, covers_only: bool = True) -> dict:
    rels = []
    for e in poset.elements:
        below = poset.below[e.id]
        for z in sorted(below):
            if covers_only and any(z in poset.below[w] for w in below):
                continue
            rels.append([z, e.id])
    return {
        "elements": [{"id": e.id, "rank": e.rank, "chi": e.chi, "label": e.label} for e in poset.elements],
        "relations": rels,
    }


def save_poset(poset: IntersectionPoset, path: str | Path, meta: dict | None = None):
    data = poset_to_dict(poset)
    if meta:
        data = {**meta, **data}
    with open(path, "w") as fh:
        json.dump(data, fh, indent=1)


def fixture_path(name: str) -> Path:
    return DATA_DIR / name


def six_pluecker_poset() -> IntersectionPoset:
    return load_poset(fixture_path("six_pluecker.json"))


def six_plus_one_poset() -> IntersectionPoset:
    return load_poset(fixture_path("six_plus_one.json"))
