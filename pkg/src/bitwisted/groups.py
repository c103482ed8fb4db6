"""Small named groups used throughout the test suites."""
from __future__ import annotations

import itertools

import numpy as np

from .core import FiniteGroup, cycles_to_perm, group_from_permutations


def cyclic(n: int) -> FiniteGroup:
    """Z_n with element ``i`` the residue ``i`` (so the table is addition mod n)."""
    r = np.arange(n)
    return FiniteGroup((r[:, None] + r[None, :]) % n, gen_labels=[("g1", 1 % n)] if n > 1 else [],
                       elements=list(range(n)), name=f"C{n}")


def symmetric(n: int) -> FiniteGroup:
    if n < 2:
        return group_from_permutations([], degree=max(n, 1), name=f"S{n}")
    gens = [cycles_to_perm([(0, 1)], n)]
    if n > 2:
        gens.append(cycles_to_perm([tuple(range(n))], n))
    return group_from_permutations(gens, n, name=f"S{n}")


def alternating(n: int) -> FiniteGroup:
    gens = [cycles_to_perm([(i, i + 1, i + 2)], n) for i in range(n - 2)]
    return group_from_permutations(gens, n, name=f"A{n}")


def dihedral(n: int) -> FiniteGroup:
    """Symmetry group of the regular n-gon, of order 2n (D_4 has order 8)."""
    rot = tuple((i + 1) % n for i in range(n))
    ref = tuple((-i) % n for i in range(n))
    return group_from_permutations([rot, ref], n, name=f"D{n}")


def quaternion() -> FiniteGroup:
    """Q_8 in its regular representation on {+-1, +-i, +-j, +-k}."""
    # unit index 0..3 for 1,i,j,k with sign; table of unit products
    unit = {(0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
            (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
            (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
            (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0)}
    points = [(s, u) for u in range(4) for s in (1, -1)]
    pos = {p: i for i, p in enumerate(points)}

    def left_mult(q):
        out = []
        for s, u in points:
            t, w = unit[(q, u)]
            out.append(pos[(s * t, w)])
        return tuple(out)

    return group_from_permutations([left_mult(1), left_mult(2)], 8, name="Q8")


def direct_product(G: FiniteGroup, H: FiniteGroup, name=None) -> FiniteGroup:
    """G x H with pair (g, h) at index ``g * |H| + h``."""
    n, m = G.order, H.order
    gi, hi = np.divmod(np.arange(n * m), m)
    mul = G.mul[gi[:, None], gi[None, :]] * m + H.mul[hi[:, None], hi[None, :]]
    labels = [(f"{lab}_1", g * m) for lab, g in G.gen_labels] + [(f"{lab}_2", h) for lab, h in H.gen_labels]
    return FiniteGroup(mul, gen_labels=labels, elements=list(itertools.product(range(n), range(m))),
                       name=name or f"{G.name}x{H.name}")


SUITE = {
    "S3": lambda: symmetric(3),
    "D4": lambda: dihedral(4),
    "Q8": quaternion,
    "A4": lambda: alternating(4),
    "D6": lambda: dihedral(6),
}


def named_group(name: str) -> FiniteGroup:
    """Parse names like ``C12``, ``S4``, ``A4``, ``D6``, ``Q8``."""
    key = name.strip().upper()
    if key == "Q8":
        return quaternion()
    kind, digits = key[0], key[1:]
    if not digits.isdigit():
        raise ValueError(f"unknown group name {name!r}")
    n = int(digits)
    makers = {"C": cyclic, "Z": cyclic, "S": symmetric, "A": alternating, "D": dihedral}
    if kind not in makers or n < 1:
        raise ValueError(f"unknown group name {name!r}")
    return makers[kind](n)
