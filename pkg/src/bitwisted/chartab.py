"""Character tables by the Burnside class-sum method and the dual action.

Central characters ``w_k = |C_k| chi(g_k) / chi(1)`` are the common
eigenvectors of the class multiplication matrices ``N_i[j][k] = a[i][j][k]``.
A random real combination of the ``N_i`` has simple spectrum with
probability one, so its eigenvectors give every irreducible character at
once.  Degrees then follow from the first orthogonality relation.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import core
from .core import FiniteGroup, GroupMap, require_automorphism
from .errors import DegenerateCombination, InconsistentClassAlgebra, NoMatchingRow, ToleranceExceeded

MATCH_TOL = 1e-6
ORTHO_TOL = 1e-8
RETRIES = 16


@dataclass(frozen=True, eq=False)
class ClassData:
    classes: tuple
    sizes: tuple
    reps: tuple
    class_of: np.ndarray

    @property
    def count(self):
        return len(self.classes)


def class_data(G: FiniteGroup) -> ClassData:
    part = core.conjugacy_classes(G)
    return ClassData(part.classes, tuple(len(c) for c in part.classes), part.reps, part.class_of)


def class_mult_coefficients(G: FiniteGroup, cd: ClassData | None = None) -> np.ndarray:
    """``a[i][j][k] = #{(x, y) in C_i x C_j : x y = z}`` for any fixed ``z`` in C_k."""
    cd = class_data(G) if cd is None else cd
    r = cd.count
    a = np.zeros((r, r, r), dtype=np.int64)
    for i, Ci in enumerate(cd.classes):
        for j, Cj in enumerate(cd.classes):
            prods = G.mul[np.ix_(Ci, Cj)].ravel()
            counts = np.bincount(prods, minlength=G.order)
            for k, Ck in enumerate(cd.classes):
                vals = counts[list(Ck)]
                if not np.all(vals == vals[0]):
                    raise InconsistentClassAlgebra(f"a[{i}][{j}][{k}] depends on the chosen element")
                a[i, j, k] = vals[0]
    return a


@dataclass(frozen=True, eq=False)
class CharacterTable:
    """``values[i, j]`` is irreducible character i on class j (class 0 is the identity)."""
    values: np.ndarray
    classes: ClassData
    group_order: int

    @property
    def degrees(self):
        return [int(round(v)) for v in self.values[:, 0].real]

    def __len__(self):
        return self.values.shape[0]

    def orthogonality_residual(self):
        sizes = np.array(self.classes.sizes)
        n = self.group_order
        rows = (self.values * sizes) @ self.values.conj().T / n
        cols = self.values.conj().T @ self.values
        col_target = np.diag(n / sizes)
        return max(np.abs(rows - np.eye(len(self))).max(), np.abs(cols - col_target).max() / n)


def character_table(G: FiniteGroup, seed: int = 0) -> CharacterTable:
    cd = class_data(G)
    a = class_mult_coefficients(G, cd)
    r = cd.count
    n = G.order
    sizes = np.array(cd.sizes, dtype=float)
    rng = np.random.default_rng(seed)
    for _ in range(RETRIES):
        c = rng.standard_normal(r)
        N = np.tensordot(c, a.astype(float), axes=1)
        evals, evecs = np.linalg.eig(N)
        gaps = np.abs(evals[:, None] - evals[None, :])
        np.fill_diagonal(gaps, np.inf)
        if gaps.min() > 1e-6 * max(1.0, np.abs(evals).max()):
            break
    else:
        raise DegenerateCombination(f"no simple spectrum after {RETRIES} combinations")
    W = evecs.T / evecs.T[:, [0]]           # central characters, w_0 = 1
    W = _refine(N, evals, W)
    # chi(g_k) = chi(1) w_k / |C_k|; sum_k |C_k| |chi(g_k)|^2 = |G| fixes chi(1)
    deg = np.sqrt(n / (np.abs(W) ** 2 / sizes).sum(axis=1))
    X = (deg[:, None] * W / sizes).astype(complex)
    order = np.lexsort((np.round(X.imag, 6).sum(axis=1), -np.round(X.real, 6).sum(axis=1), np.round(deg)))
    table = CharacterTable(X[order], cd, n)
    resid = table.orthogonality_residual()
    if resid > ORTHO_TOL:
        raise ToleranceExceeded(f"orthogonality residual {resid:.3g}")
    return table


def _refine(N, evals, W):
    """One step of shifted inverse iteration per eigenvector."""
    r = N.shape[0]
    out = np.empty_like(W)
    scale = max(1.0, np.abs(evals).max())
    for row, lam in enumerate(evals):
        try:
            w = np.linalg.solve(N - (lam + 1e-9 * scale) * np.eye(r), W[row])
        except np.linalg.LinAlgError:
            w = W[row]
        out[row] = w / w[0]
    return out


# -- the dual action ------------------------------------------------------------------

def class_permutation(G: FiniteGroup, alpha: GroupMap, cd: ClassData):
    """``perm[j]`` = class containing alpha(rep_j)."""
    return [int(cd.class_of[alpha(rep)]) for rep in cd.reps]


def dual_action(table: CharacterTable, alpha: GroupMap):
    """Permutation p with ``chi_i o alpha = chi_{p[i]}``.

    Only automorphisms induce a map on the dual of a nonabelian group, so
    anything non-bijective is rejected.
    """
    require_automorphism(alpha)
    composed = _composed(table, alpha)
    out = []
    for i, row in enumerate(composed):
        dist = np.abs(table.values - row).max(axis=1)
        hits = np.flatnonzero(dist < MATCH_TOL)
        if len(hits) != 1:
            raise NoMatchingRow(f"character {i} composed with the automorphism matches {len(hits)} rows")
        out.append(int(hits[0]))
    if sorted(out) != list(range(len(out))):
        raise NoMatchingRow("induced map on characters is not a permutation")
    return out


def _composed(table: CharacterTable, m: GroupMap):
    """Class values of ``chi o m`` for every row (any endomorphism)."""
    cd = table.classes
    return table.values[:, [int(cd.class_of[m(rep)]) for rep in cd.reps]]


def coincidence_count_dual(table: CharacterTable, phi: GroupMap, psi: GroupMap) -> int:
    p, q = dual_action(table, phi), dual_action(table, psi)
    return sum(1 for a, b in zip(p, q) if a == b)


def fixed_class_count(G: FiniteGroup, alpha: GroupMap, cd: ClassData) -> int:
    perm = class_permutation(G, alpha, cd)
    return sum(1 for j, pj in enumerate(perm) if j == pj)


@dataclass(frozen=True)
class CompactBFReport:
    group: str
    reidemeister: int
    coincidences: int

    @property
    def passed(self):
        return self.reidemeister == self.coincidences

    def to_dict(self):
        return {"mode": "finite", "group": self.group, "reidemeister": self.reidemeister,
                "dual_coincidences": self.coincidences, "status": "PASS" if self.passed else "FAIL"}


def verify_compact_bf(G: FiniteGroup, phi: GroupMap, psi: GroupMap, table: CharacterTable | None = None):
    """Orbit count against the number of characters with ``chi o phi = chi o psi``."""
    table = character_table(G) if table is None else table
    return CompactBFReport(G.name or f"order {G.order}", core.reidemeister_number(G, phi, psi),
                           coincidence_count_dual(table, phi, psi))


@dataclass(frozen=True)
class CounterexampleReport:
    group: str
    order: int
    abelian: bool
    reidemeister: int
    coincidences: int
    irreducibles: int

    @property
    def inequality(self):
        return self.reidemeister != self.coincidences

    @property
    def passed(self):
        # the trivial pair separates R from #Coin exactly when G is nonabelian
        return (self.reidemeister == self.order and self.coincidences == self.irreducibles
                and self.inequality != self.abelian)

    def to_dict(self):
        return {"group": self.group, "order": self.order, "abelian": self.abelian,
                "reidemeister": self.reidemeister, "dual_coincidences": self.coincidences,
                "irreducibles": self.irreducibles,
                "relation": "INEQUALITY" if self.inequality else "EQUALITY",
                "status": "PASS" if self.passed else "FAIL"}


def counterexample_report(G: FiniteGroup, table: CharacterTable | None = None) -> CounterexampleReport:
    """R and #Coin for the pair of trivial endomorphisms.

    Every class is a singleton so ``R = |G|``, while ``chi o e`` is the
    constant ``chi(1)`` for every irreducible chi.  Both composites are the
    same class function, so every irreducible is a coincidence point and
    ``#Coin = #Irr``, which is smaller than ``|G|`` unless G is abelian.
    """
    table = character_table(G) if table is None else table
    triv = core.trivial_map(G)
    R = core.reidemeister_number(G, triv, triv)
    coin = int(np.sum(np.abs(_composed(table, triv) - _composed(table, triv)).max(axis=1) < MATCH_TOL))
    return CounterexampleReport(G.name or f"order {G.order}", G.order, G.is_abelian(), R, coin, len(table))
