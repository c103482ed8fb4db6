"""Finite groups as multiplication tables and brute-force bitwisted conjugacy.

A bitwisted (phi, psi)-conjugacy class of ``x`` is the orbit of ``x`` under
the action ``gamma . x = psi(gamma) x phi(gamma)^-1``.  Everything here is
exhaustive enumeration over a multiplication table, which makes this module
the reference oracle that the other modules are checked against.

Conventions: element ``0`` is always the identity.  For permutation groups
the product ``x * y`` is composition with ``y`` applied first, i.e.
``(x * y)(p) = x(y(p))``.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    ClosureExceeded,
    InvalidPermutation,
    InvalidTable,
    NotAutomorphism,
    NotHomomorphism,
)

DEFAULT_CAP = 20000
INFINITE = float("inf")


def _frozen(a):
    a = np.ascontiguousarray(a, dtype=np.int64)
    a.flags.writeable = False
    return a


class FiniteGroup:
    """A finite group given by its multiplication table.

    ``mul[x, y]`` is the index of ``x*y``; ``inv[x]`` the index of ``x^-1``.
    ``elements`` optionally holds a concrete object for each index (for
    instance a permutation tuple) and is used only for display.
    """

    def __init__(self, mul, inv=None, gen_labels=(), elements=None, name=None):
        mul = np.asarray(mul, dtype=np.int64)
        if mul.ndim != 2 or mul.shape[0] != mul.shape[1] or mul.shape[0] == 0:
            raise InvalidTable("multiplication table must be a non-empty square array")
        n = mul.shape[0]
        if not (np.array_equal(mul[0], np.arange(n)) and np.array_equal(mul[:, 0], np.arange(n))):
            raise InvalidTable("element 0 must be the identity")
        if inv is None:
            rows, cols = np.nonzero(mul == 0)
            inv = np.empty(n, dtype=np.int64)
            inv[rows] = cols
        self.mul = _frozen(mul)
        self.inv = _frozen(inv)
        self.gen_labels = tuple(gen_labels)
        self.elements = None if elements is None else tuple(elements)
        self.name = name

    @property
    def order(self):
        return self.mul.shape[0]

    @property
    def identity(self):
        return 0

    def __len__(self):
        return self.order

    def __repr__(self):
        label = self.name or "FiniteGroup"
        return f"<{label} of order {self.order}>"

    def generators(self):
        """Generator element indices; a greedy generating set if none recorded."""
        if self.gen_labels:
            return [g for _, g in self.gen_labels]
        return greedy_generators(self)

    def power(self, x, k):
        if k < 0:
            x, k = int(self.inv[x]), -k
        result = 0
        while k:
            if k & 1:
                result = int(self.mul[result, x])
            x = int(self.mul[x, x])
            k >>= 1
        return result

    def element_order(self, x):
        k, y = 1, x
        while y != 0:
            y = int(self.mul[y, x])
            k += 1
        return k

    def is_abelian(self):
        return bool(np.array_equal(self.mul, self.mul.T))

    def label(self, x):
        if self.elements is None:
            return str(x)
        e = self.elements[x]
        if isinstance(e, tuple) and all(isinstance(p, int) for p in e):
            return format_cycles(e)
        return str(e)

    def check(self):
        """Full table integrity check: Latin square, inverses, associativity."""
        n = self.order
        mul = self.mul
        if mul.min() < 0 or mul.max() >= n:
            raise InvalidTable("table entries out of range")
        ref = np.arange(n)
        if not (np.all(np.sort(mul, axis=1) == ref) and np.all(np.sort(mul, axis=0) == ref[:, None])):
            raise InvalidTable("table is not a Latin square")
        if not np.all(mul[ref, self.inv] == 0):
            raise InvalidTable("inverse table is wrong")
        # chunked so memory stays O(n^2)
        for a in range(n):
            left = mul[mul[a]]            # (a*b)*c for all b, c
            right = mul[a][mul]           # a*(b*c)
            if not np.array_equal(left, right):
                b, c = np.argwhere(left != right)[0]
                raise InvalidTable(f"associativity fails on ({a}, {b}, {c})")
        return self


# -- construction ------------------------------------------------------------

def _as_perm(p, degree=None):
    p = tuple(int(i) for i in p)
    if degree is not None and len(p) != degree:
        raise InvalidPermutation(f"permutation {p} does not act on {degree} points")
    if sorted(p) != list(range(len(p))):
        raise InvalidPermutation(f"{p} is not a bijection of 0..{len(p) - 1}")
    return p


def cycles_to_perm(cycles: Iterable[Sequence[int]], degree: int):
    """Array form of a product of cycles (rightmost cycle applied first)."""
    perm = list(range(degree))
    for cyc in reversed(list(cycles)):
        cyc = [int(c) for c in cyc]
        if len(set(cyc)) != len(cyc) or any(not 0 <= c < degree for c in cyc):
            raise InvalidPermutation(f"bad cycle {tuple(cyc)} on {degree} points")
        step = {cyc[i]: cyc[(i + 1) % len(cyc)] for i in range(len(cyc))}
        perm = [step.get(perm[i], perm[i]) for i in range(degree)]
    return tuple(perm)


def format_cycles(perm):
    seen = set()
    parts = []
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            continue
        cyc = [start]
        seen.add(start)
        j = perm[start]
        while j != start:
            cyc.append(j)
            seen.add(j)
            j = perm[j]
        parts.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(parts) or "()"


def group_from_permutations(generators, degree=None, cap=DEFAULT_CAP, name=None):
    """Close a list of permutations (array form) under composition.

    Element 0 of the result is the identity; generator ``i`` is labelled
    ``g{i+1}``.  Raises :class:`ClosureExceeded` past ``cap`` elements.
    """
    gens = [tuple(g) for g in generators]
    if degree is None:
        degree = len(gens[0]) if gens else 0
    gens = [_as_perm(g, degree) for g in gens]
    identity = tuple(range(degree))
    elements = [identity]
    index = {identity: 0}
    queue = deque([identity])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = tuple(g[i] for i in x)  # g * x
            if y not in index:
                if len(elements) >= cap:
                    raise ClosureExceeded(cap)
                index[y] = len(elements)
                elements.append(y)
                queue.append(y)
    n = len(elements)
    P = np.array(elements, dtype=np.int64).reshape(n, degree)
    mul = np.empty((n, n), dtype=np.int64)
    for a in range(n):
        comp = P[a][P] if degree else P  # row b holds a(b(p))
        mul[a] = [index[tuple(row)] for row in comp.tolist()]
    labels = [(f"g{i + 1}", index[g]) for i, g in enumerate(gens)]
    return FiniteGroup(mul, gen_labels=labels, elements=elements, name=name)


def group_from_table(table, name=None, check=True):
    """Build a group from an explicit multiplication table.

    The table may use any element as identity; elements are relabelled so
    that the identity becomes index 0 (original labels kept in ``elements``).
    """
    mul = np.asarray(table, dtype=np.int64)
    n = mul.shape[0] if mul.ndim == 2 else 0
    if mul.ndim != 2 or mul.shape != (n, n) or n == 0:
        raise InvalidTable("table must be a non-empty square matrix")
    if mul.min() < 0 or mul.max() >= n:
        raise InvalidTable("table entries out of range")
    ids = [e for e in range(n) if np.array_equal(mul[e], np.arange(n)) and np.array_equal(mul[:, e], np.arange(n))]
    if not ids:
        raise InvalidTable("table has no two-sided identity")
    e = ids[0]
    order = [e] + [x for x in range(n) if x != e]
    relabel = np.empty(n, dtype=np.int64)
    relabel[order] = np.arange(n)
    new = relabel[mul[np.ix_(order, order)]]
    if not np.all((new == 0).sum(axis=1) == 1):
        raise InvalidTable("some element has no inverse")
    G = FiniteGroup(new, elements=order, name=name)
    if check:
        G.check()
    return G


def subgroup_closure(G: FiniteGroup, gens):
    """Indices of the subgroup generated by ``gens`` (sorted)."""
    seen = {0}
    frontier = [0]
    gens = list(gens)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = int(G.mul[x, g])
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return sorted(seen)


def greedy_generators(G: FiniteGroup):
    """A small generating set: add the element of largest order not yet covered."""
    by_order = sorted(range(1, G.order), key=lambda x: (-G.element_order(x), x))
    gens = []
    covered = {0}
    for x in by_order:
        if len(covered) == G.order:
            break
        if x not in covered:
            gens.append(x)
            covered = set(subgroup_closure(G, gens))
    return gens


# -- homomorphisms -------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GroupMap:
    """A map between finite groups given by the image of every element."""
    domain_order: int
    codomain_order: int
    image: np.ndarray
    bijective: bool = False
    validated: bool = False

    def __post_init__(self):
        object.__setattr__(self, "image", _frozen(self.image))

    def __call__(self, x):
        return int(self.image[x])

    def __eq__(self, other):
        return (isinstance(other, GroupMap) and self.domain_order == other.domain_order
                and self.codomain_order == other.codomain_order
                and np.array_equal(self.image, other.image))

    def __hash__(self):
        return hash((self.domain_order, self.codomain_order, self.image.tobytes()))


def make_map(G: FiniteGroup, image, H: FiniteGroup | None = None) -> GroupMap:
    H = G if H is None else H
    return validate_homomorphism(G, H, GroupMap(G.order, H.order, np.asarray(image, dtype=np.int64)))


def identity_map(G: FiniteGroup) -> GroupMap:
    return GroupMap(G.order, G.order, np.arange(G.order), bijective=True, validated=True)


def trivial_map(G: FiniteGroup) -> GroupMap:
    return GroupMap(G.order, G.order, np.zeros(G.order, dtype=np.int64), bijective=G.order == 1, validated=True)


def inner_map(G: FiniteGroup, g) -> GroupMap:
    """Conjugation ``x -> g x g^-1``."""
    image = G.mul[G.mul[g], G.inv[g]]
    return GroupMap(G.order, G.order, image, bijective=True, validated=True)


def compose(f: GroupMap, g: GroupMap) -> GroupMap:
    """``f o g`` (g applied first)."""
    return GroupMap(g.domain_order, f.codomain_order, f.image[g.image],
                    bijective=f.bijective and g.bijective, validated=f.validated and g.validated)


def validate_homomorphism(G: FiniteGroup, H: FiniteGroup, m: GroupMap) -> GroupMap:
    """Full pairwise check of ``m(x*y) = m(x)*m(y)``.

    Returns a copy of ``m`` marked validated with its bijectivity recorded,
    or raises :class:`NotHomomorphism` naming the first violating pair in
    row-major order.
    """
    img = np.asarray(m.image, dtype=np.int64)
    if img.shape != (G.order,) or img.min(initial=0) < 0 or img.max(initial=0) >= H.order:
        raise ValueError("image table has the wrong length or out-of-range entries")
    lhs = img[G.mul]
    rhs = H.mul[img[:, None], img[None, :]]
    bad = np.argwhere(lhs != rhs)
    if len(bad):
        x, y = bad[0]
        raise NotHomomorphism(int(x), int(y))
    bijective = G.order == H.order and len(np.unique(img)) == G.order
    return GroupMap(G.order, H.order, img, bijective=bijective, validated=True)


def extend_generator_images(G: FiniteGroup, gens, images, H: FiniteGroup | None = None):
    """Extend an assignment on generators to a homomorphism, or return None.

    Walks the Cayley graph breadth first; any conflict or failure of the
    full homomorphism check means no homomorphism with these values exists.
    """
    H = G if H is None else H
    img = np.full(G.order, -1, dtype=np.int64)
    img[0] = 0
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for g, h in zip(gens, images):
                y = int(G.mul[x, g])
                val = int(H.mul[img[x], h])
                if img[y] < 0:
                    img[y] = val
                    nxt.append(y)
                elif img[y] != val:
                    return None
        frontier = nxt
    if (img < 0).any():
        return None
    try:
        return validate_homomorphism(G, H, GroupMap(G.order, H.order, img))
    except NotHomomorphism:
        return None


def endomorphisms(G: FiniteGroup, limit=None):
    """All endomorphisms of G (at most ``limit`` of them), deterministic order."""
    gens = greedy_generators(G)
    out = []
    for images in itertools.product(range(G.order), repeat=len(gens)):
        if any(G.element_order(g) % G.element_order(h) for g, h in zip(gens, images)):
            continue
        m = extend_generator_images(G, gens, images)
        if m is not None:
            out.append(m)
            if limit is not None and len(out) >= limit:
                break
    return out


def automorphisms(G: FiniteGroup):
    """All automorphisms of G, deterministic order, identity first."""
    gens = greedy_generators(G)
    orders = [G.element_order(g) for g in gens]
    pools = [[h for h in range(G.order) if G.element_order(h) == o] for o in orders]
    out = []
    for images in itertools.product(*pools):
        m = extend_generator_images(G, gens, images)
        if m is not None and m.bijective:
            out.append(m)
    out.sort(key=lambda m: (not np.array_equal(m.image, np.arange(G.order)), m.image.tolist()))
    return out


def require_automorphism(m: GroupMap):
    if not m.bijective:
        raise NotAutomorphism("map is not bijective")
    return m


# -- bitwisted classes ---------------------------------------------------------

@dataclass(frozen=True)
class TwistedPartition:
    classes: tuple
    reps: tuple
    class_of: np.ndarray = field(repr=False, compare=False)

    def __len__(self):
        return len(self.classes)


def twisted_orbit(G: FiniteGroup, phi: GroupMap, psi: GroupMap, x):
    """Array of ``psi(g) x phi(g)^-1`` indexed by ``g``."""
    return G.mul[G.mul[psi.image, x], G.inv[phi.image]]


def twisted_classes(G: FiniteGroup, phi: GroupMap, psi: GroupMap) -> TwistedPartition:
    """Partition G into (phi, psi)-twisted conjugacy classes.

    Classes are listed by increasing minimal element; each class is a
    sorted tuple and its representative is its minimal element.
    """
    class_of = np.full(G.order, -1, dtype=np.int64)
    classes = []
    for x in range(G.order):
        if class_of[x] >= 0:
            continue
        orbit = np.unique(twisted_orbit(G, phi, psi, x))
        class_of[orbit] = len(classes)
        classes.append(tuple(int(i) for i in orbit))
    class_of.flags.writeable = False
    return TwistedPartition(tuple(classes), tuple(c[0] for c in classes), class_of)


def reidemeister_number(G: FiniteGroup, phi: GroupMap, psi: GroupMap) -> int:
    return len(twisted_classes(G, phi, psi))


def is_twisted_conjugate(G: FiniteGroup, phi: GroupMap, psi: GroupMap, x, y):
    """Least-index ``g`` with ``y = psi(g) x phi(g)^-1``, or None."""
    hits = np.flatnonzero(twisted_orbit(G, phi, psi, x) == y)
    return int(hits[0]) if len(hits) else None


def conjugacy_classes(G: FiniteGroup) -> TwistedPartition:
    ident = identity_map(G)
    return twisted_classes(G, ident, ident)
