"""Finitely generated abelian groups and their endomorphisms as integer matrices.

A group ``Z_{d_1} + ... + Z_{d_k} + Z^r`` (with ``d_1 | d_2 | ... | d_k``)
has elements written as integer column vectors of length ``k + r``; an
endomorphism is a square integer matrix acting on them.

For abelian G the twisted class of ``0`` is the subgroup ``Im(psi - phi)``
and every other class is a coset of it, so ``R(phi, psi)`` is the index of
that image.  On the dual side a character ``y`` is
``x -> exp(2 pi i sum_i x_i y_i / d_i)`` and coincidences of the induced
maps are the kernel of ``phi^ - psi^``.  Both sides are lattice
computations done with Smith normal form.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import core
from .errors import InfiniteDual, NotWellDefined
from .snf import integer_kernel, lattice_index, smith_normal_form

INFINITE = core.INFINITE


@dataclass(frozen=True)
class FgAbelianGroup:
    invariants: tuple = ()
    rank: int = 0

    def __post_init__(self):
        inv = tuple(int(d) for d in self.invariants if int(d) != 1)
        if any(d < 2 for d in inv):
            raise NotWellDefined(f"torsion invariants must be positive, got {self.invariants}")
        if any(b % a for a, b in zip(inv, inv[1:])):
            raise NotWellDefined(f"invariants {inv} do not form a divisibility chain")
        if int(self.rank) < 0:
            raise NotWellDefined("free rank must be non-negative")
        object.__setattr__(self, "invariants", inv)
        object.__setattr__(self, "rank", int(self.rank))

    @classmethod
    def from_factors(cls, factors, rank=0):
        """Normalise an arbitrary list of cyclic orders, e.g. ``[2, 3] -> Z_6``."""
        factors = [int(f) for f in factors if int(f) != 1]
        if not factors:
            return cls((), rank)
        sf = smith_normal_form([[f if i == j else 0 for j in range(len(factors))] for i, f in enumerate(factors)])
        return cls(tuple(sf.invariants), rank)

    @property
    def k(self):
        return len(self.invariants)

    @property
    def dim(self):
        return self.k + self.rank

    @property
    def is_finite(self):
        return self.rank == 0

    @property
    def order(self):
        return math.prod(self.invariants) if self.is_finite else INFINITE

    def reduce(self, x):
        x = [int(v) for v in x]
        return tuple(v % d for v, d in zip(x, self.invariants)) + tuple(x[self.k:])

    def elements(self):
        """All elements of a finite group in index order (last coordinate fastest)."""
        if not self.is_finite:
            raise ValueError("infinite group")
        return [tuple(x) for x in itertools.product(*(range(d) for d in self.invariants))]

    def index_of(self, x):
        idx = 0
        for v, d in zip(x, self.invariants):
            idx = idx * d + (int(v) % d)
        return idx

    def __str__(self):
        parts = [f"Z_{d}" for d in self.invariants] + ["Z"] * self.rank
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class AbelianHom:
    group: FgAbelianGroup
    matrix: tuple

    def __post_init__(self):
        M = tuple(tuple(int(v) for v in row) for row in self.matrix)
        n = self.group.dim
        if len(M) != n or any(len(row) != n for row in M):
            raise NotWellDefined(f"matrix must be {n}x{n} for {self.group}")
        G = self.group
        for i in range(n):
            for j in range(n):
                if j < G.k:
                    dj = G.invariants[j]
                    if i < G.k and (dj * M[i][j]) % G.invariants[i]:
                        raise NotWellDefined(f"entry ({i},{j})={M[i][j]} does not respect Z_{dj} -> Z_{G.invariants[i]}")
                    if i >= G.k and M[i][j]:
                        raise NotWellDefined(f"entry ({i},{j}) maps torsion into the free part")
        # canonical representative: torsion rows reduced mod d_i
        M = tuple(tuple(v % G.invariants[i] if i < G.k else v for v in row) for i, row in enumerate(M))
        object.__setattr__(self, "matrix", M)

    def __call__(self, x):
        y = [sum(a * b for a, b in zip(row, x)) for row in self.matrix]
        return self.group.reduce(y)

    def __sub__(self, other):
        return AbelianHom(self.group, [[a - b for a, b in zip(r, s)] for r, s in zip(self.matrix, other.matrix)])

    @classmethod
    def scalar(cls, G, c):
        return cls(G, [[c if i == j else 0 for j in range(G.dim)] for i in range(G.dim)])


def random_endomorphism(G: FgAbelianGroup, rng: random.Random, bound=5):
    """Uniform on Hom for the torsion block; free entries drawn from [-bound, bound]."""
    M = [[0] * G.dim for _ in range(G.dim)]
    for i in range(G.dim):
        for j in range(G.dim):
            if i < G.k and j < G.k:
                di, dj = G.invariants[i], G.invariants[j]
                g = math.gcd(di, dj)
                M[i][j] = rng.randrange(g) * (di // g)
            elif i < G.k:
                M[i][j] = rng.randrange(G.invariants[i])
            elif j >= G.k:
                M[i][j] = rng.randint(-bound, bound)
    return AbelianHom(G, M)


def all_endomorphisms(G: FgAbelianGroup):
    """Every endomorphism of a finite abelian group."""
    choices = []
    for i in range(G.k):
        for j in range(G.k):
            di, dj = G.invariants[i], G.invariants[j]
            g = math.gcd(di, dj)
            choices.append([c * (di // g) for c in range(g)])
    for flat in itertools.product(*choices):
        yield AbelianHom(G, [flat[i * G.k:(i + 1) * G.k] for i in range(G.k)])


def endomorphism_count(G: FgAbelianGroup):
    return math.prod(math.gcd(a, b) for a in G.invariants for b in G.invariants)


def abelian_groups_of_order(n):
    """All invariant-factor chains with product n."""
    out = []

    def build(remaining, chain):
        if remaining == 1:
            out.append(FgAbelianGroup(tuple(reversed(chain))))
            return
        # chain is built from the largest factor down; each new factor divides the previous
        for d in range(2, remaining + 1):
            if remaining % d == 0 and (not chain or chain[-1] % d == 0):
                build(remaining // d, chain + [d])

    build(n, [])
    return sorted(set(out), key=lambda G: G.invariants)


# -- the R side -----------------------------------------------------------------

def twisted_class_subgroup(G: FgAbelianGroup, phi: AbelianHom, psi: AbelianHom):
    """Generators of the class of 0, the subgroup ``Im(psi - phi)``."""
    diff = psi - phi
    return [G.reduce([diff.matrix[i][j] for i in range(G.dim)]) for j in range(G.dim)]


def subgroup_elements(G: FgAbelianGroup, gens):
    """Enumerate a subgroup of a finite group from generators (as a set of tuples)."""
    zero = tuple([0] * G.dim)
    seen = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = G.reduce([a + b for a, b in zip(x, g)])
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def _relation_columns(G):
    return [[G.invariants[j] if i == j else 0 for i in range(G.dim)] for j in range(G.k)]


def reidemeister_abelian(G: FgAbelianGroup, phi: AbelianHom, psi: AbelianHom):
    """``[G : Im(psi - phi)]``, or INFINITE.

    The columns of ``psi - phi`` together with the relation columns
    ``d_i e_i`` span the preimage of the image in ``Z^(k+r)``; its index
    is the product of the Smith invariants when they have full rank.
    """
    gens = twisted_class_subgroup(G, phi, psi) + _relation_columns(G)
    idx = lattice_index(gens, G.dim)
    return INFINITE if idx is None else idx


# -- the dual side ----------------------------------------------------------------

@dataclass(frozen=True)
class DualCharacter:
    group: FgAbelianGroup
    y: tuple

    def __post_init__(self):
        object.__setattr__(self, "y", tuple(int(v) % d for v, d in zip(self.y, self.group.invariants)))

    def phase(self, x):
        """``chi_y(x) = exp(2 pi i * phase)``; exact rational in [0, 1)."""
        return sum(Fraction(int(a) * b, d) for a, b, d in zip(x, self.y, self.group.invariants)) % 1

    def value(self, x):
        return complex(np.exp(2j * np.pi * float(self.phase(x))))


def dual_group(G: FgAbelianGroup) -> FgAbelianGroup:
    if not G.is_finite:
        raise InfiniteDual(f"{G} has free rank {G.rank}; its dual is a torus")
    return FgAbelianGroup(G.invariants)


def characters(G: FgAbelianGroup):
    return [DualCharacter(G, y) for y in dual_group(G).elements()]


def induced_dual_map(phi: AbelianHom) -> AbelianHom:
    """``phi^(chi) = chi o phi`` on character vectors.

    ``chi_y(phi x) = sum_j x_j sum_i M[i][j] y_i / d_i``, so the new
    coordinate j is ``sum_i M[i][j] y_i d_j / d_i``; the factor
    ``M[i][j] d_j / d_i`` is integral exactly when phi is well defined.
    """
    G = dual_group(phi.group)
    d = G.invariants
    M = phi.matrix
    N = [[M[i][j] * d[j] // d[i] for i in range(G.k)] for j in range(G.k)]
    return AbelianHom(G, N)


def kernel_order(G: FgAbelianGroup, K: AbelianHom):
    """Size of the kernel of K acting on a finite abelian group.

    ``y`` is in the kernel iff ``K y = D z`` for some integer z.  The
    solution lattice of ``[K | -D]`` projects onto ``L = {y : K y in D Z^k}``
    and the kernel is ``L / D Z^k``, of order ``prod(d) / [Z^k : L]``.
    """
    k = G.k
    if k == 0:
        return 1
    d = G.invariants
    B = [list(K.matrix[i]) + [-d[i] if j == i else 0 for j in range(k)] for i in range(k)]
    basis = integer_kernel(B, 2 * k)
    L = [vec[:k] for vec in basis]
    index = lattice_index(L, k)
    return math.prod(d) // index


def dual_coincidence_count(G: FgAbelianGroup, phi: AbelianHom, psi: AbelianHom):
    """``#{chi : chi o phi = chi o psi}`` for finite G."""
    D = dual_group(G)
    return kernel_order(D, induced_dual_map(phi) - induced_dual_map(psi))


# -- realisation as a finite table group ---------------------------------------------

def realize(G: FgAbelianGroup):
    """The finite group G as a :class:`core.FiniteGroup` (index order of ``elements()``)."""
    if not G.is_finite:
        raise ValueError("cannot tabulate an infinite group")
    E = np.array(G.elements(), dtype=np.int64).reshape(G.order, G.k)
    return core.FiniteGroup(_index_array(G, E[:, None, :] + E[None, :, :]),
                            gen_labels=[(f"e{i + 1}", G.index_of([int(i == j) for j in range(G.k)])) for i in range(G.k)],
                            elements=[tuple(map(int, e)) for e in E], name=str(G))


def _index_array(G, X):
    idx = np.zeros(X.shape[:-1], dtype=np.int64)
    for i, d in enumerate(G.invariants):
        idx = idx * d + X[..., i] % d
    return idx


def realize_map(G: FgAbelianGroup, phi: AbelianHom, FG: core.FiniteGroup | None = None):
    E = np.array(G.elements(), dtype=np.int64).reshape(G.order, G.k)
    M = np.array(phi.matrix, dtype=np.int64).reshape(G.k, G.k)
    m = core.GroupMap(G.order, G.order, _index_array(G, E @ M.T))
    if FG is None:
        return m
    return core.validate_homomorphism(FG, FG, m)


@dataclass(frozen=True)
class BFReport:
    group: str
    phi: tuple
    psi: tuple
    brute_force: int
    snf_index: object
    dual_count: int

    @property
    def passed(self):
        return self.brute_force == self.snf_index == self.dual_count

    def to_dict(self):
        return {
            "mode": "abelian",
            "group": self.group,
            "phi": [list(r) for r in self.phi],
            "psi": [list(r) for r in self.psi],
            "brute_force": self.brute_force,
            "snf_index": self.snf_index,
            "dual_coincidences": self.dual_count,
            "status": "PASS" if self.passed else "FAIL",
        }


def verify_bitwisted_bf(G: FgAbelianGroup, phi: AbelianHom, psi: AbelianHom, FG=None) -> BFReport:
    """Count twisted classes three independent ways on a finite abelian group.

    (a) orbit enumeration on the tabulated group, (b) the index of
    ``Im(psi - phi)`` by Smith form, (c) the kernel of ``phi^ - psi^`` on
    the dual.  Disagreement is reported, not raised.
    """
    FG = realize(G) if FG is None else FG
    brute = core.reidemeister_number(FG, realize_map(G, phi, FG), realize_map(G, psi, FG))
    return BFReport(str(G), phi.matrix, psi.matrix, brute,
                    reidemeister_abelian(G, phi, psi), dual_coincidence_count(G, phi, psi))
