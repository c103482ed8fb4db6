"""Exact integer linear algebra: Smith normal form and friends.

Matrices are lists of lists of Python ints, so every computation is exact
regardless of entry size.
"""
from __future__ import annotations

from dataclasses import dataclass


def identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A, B):
    if not A:
        return []
    inner = len(B)
    cols = len(B[0]) if B else 0
    return [[sum(A[i][k] * B[k][j] for k in range(inner)) for j in range(cols)] for i in range(len(A))]


def transpose(A, ncols=None):
    if not A:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*A)]


def as_matrix(A):
    return [[int(x) for x in row] for row in A]


def det(A):
    """Determinant by fraction-free Bareiss elimination."""
    M = as_matrix(A)
    n = len(M)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


@dataclass(frozen=True)
class SmithForm:
    """``U @ A @ V == D`` with U, V unimodular and D diagonal."""
    U: list
    D: list
    V: list

    @property
    def diagonal(self):
        return [self.D[i][i] for i in range(min(len(self.D), len(self.D[0]) if self.D else 0))]

    @property
    def rank(self):
        return sum(1 for d in self.diagonal if d != 0)

    @property
    def invariants(self):
        return [d for d in self.diagonal if d != 0]


def smith_normal_form(A) -> SmithForm:
    """Smith normal form of a rectangular integer matrix.

    Pivots on the smallest nonzero entry of the trailing block and repeats
    Euclidean reductions until the pivot divides everything below and to
    the right of it.  The diagonal is non-negative with each nonzero entry
    dividing the next and zeros last.
    """
    D = as_matrix(A)
    m = len(D)
    n = len(D[0]) if m else 0
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        D[dst] = [a + q * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for row in D:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    if D[i][j] and (best is None or abs(D[i][j]) < abs(D[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                return SmithForm(U, D, V)
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            p = D[t][t]
            dirty = False
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // p))
                    dirty = dirty or D[i][t] != 0
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // p))
                    dirty = dirty or D[t][j] != 0
            if dirty:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
    return SmithForm(U, D, V)


def is_smith_form(A, sf: SmithForm) -> bool:
    """Check U A V = D, unimodularity and the divisibility chain."""
    m = len(A)
    n = len(A[0]) if m else len(sf.V)
    if m and n and matmul(matmul(sf.U, as_matrix(A)), sf.V) != sf.D:
        return False
    if abs(det(sf.U)) != 1 or abs(det(sf.V)) != 1:
        return False
    for i in range(m):
        for j in range(n):
            if i != j and sf.D[i][j] != 0:
                return False
    diag = sf.diagonal
    if any(d < 0 for d in diag):
        return False
    nz = [d for d in diag if d]
    if nz != diag[:len(nz)]:
        return False
    return all(b % a == 0 for a, b in zip(nz, nz[1:]))


def integer_kernel(A, ncols):
    """Basis (as column list) of the integer null space of A."""
    if not A:
        return identity(ncols)
    sf = smith_normal_form(A)
    r = sf.rank
    return [[sf.V[i][j] for i in range(ncols)] for j in range(r, ncols)]


def lattice_index(gens, dim):
    """Index in Z^dim of the lattice spanned by the vectors ``gens``.

    Returns None when the lattice has lower rank (infinite index).
    """
    if dim == 0:
        return 1
    if not gens:
        return None
    M = transpose([list(g) for g in gens])
    sf = smith_normal_form(M)
    if sf.rank < dim:
        return None
    out = 1
    for d in sf.invariants:
        out *= d
    return out


def unimodular_inverse(A):
    """Exact inverse of an integer matrix with determinant +-1."""
    sf = smith_normal_form(A)
    n = len(A)
    if sf.diagonal != [1] * n:
        raise ValueError("matrix is not unimodular")
    # U A V = I  =>  A^-1 = V U
    return matmul(sf.V, sf.U)
