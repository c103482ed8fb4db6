"""Polycyclic groups ``Z^d x|_A Z`` and the finite-quotient decision procedure.

Elements are pairs ``(v, t)`` with product ``(v, t)(w, s) = (v + A^t w, t + s)``
for a unimodular integer matrix ``A``.  Automorphisms are taken in fibred
form ``(M, eps, u)``: ``(w, 0) -> (M w, 0)`` and ``(0, 1) -> (u, eps)``,
which respects the relation ``(0,1)(w,0)(0,-1) = (A w, 0)`` exactly when
``M A = A^eps M``.

Twisted conjugacy of ``U`` and ``V`` is decided by running two searches
side by side: an exhaustive search for a witness ``g`` with
``psi(g) U phi(g)^-1 = V`` over growing sup-norm shells, and a search for a
congruence quotient ``(Z/m)^d x| Z/L`` (L the order of A mod m) that
respects both automorphisms and separates the images.  Either hit is a
certificate; twisted conjugacy separability guarantees one of them
eventually appears.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import core
from .errors import DimensionMismatch, DoesNotRespect, NotCompatible, NotUnimodular
from .snf import det, identity, matmul, unimodular_inverse


def _mat(A):
    return tuple(tuple(int(x) for x in row) for row in A)


def _matvec(A, v):
    return tuple(sum(a * b for a, b in zip(row, v)) for row in A)


class PolyGroup:
    def __init__(self, A):
        A = _mat(A)
        d = len(A)
        if d < 1 or any(len(row) != d for row in A):
            raise DimensionMismatch("action matrix must be square and non-empty")
        if abs(det(A)) != 1:
            raise NotUnimodular(f"det A = {det(A)}")
        self.A = A
        self.d = d
        self.A_inv = _mat(unimodular_inverse(A))
        self._powers = {0: _mat(identity(d)), 1: A, -1: self.A_inv}

    def power(self, t):
        """``A^t`` for any integer t (cached)."""
        if t not in self._powers:
            step = 1 if t > 0 else -1
            prev = self.power(t - step)
            self._powers[t] = _mat(matmul(prev, self.A if step > 0 else self.A_inv))
        return self._powers[t]

    def __eq__(self, other):
        return isinstance(other, PolyGroup) and self.A == other.A

    def __hash__(self):
        return hash(self.A)

    def __repr__(self):
        return f"PolyGroup(A={[list(r) for r in self.A]})"


@dataclass(frozen=True)
class PolyElement:
    v: tuple
    t: int = 0

    def __post_init__(self):
        object.__setattr__(self, "v", tuple(int(x) for x in self.v))
        object.__setattr__(self, "t", int(self.t))

    def __str__(self):
        return f"(({', '.join(map(str, self.v))}), {self.t})"


def poly_identity(G: PolyGroup) -> PolyElement:
    return PolyElement((0,) * G.d, 0)


def _check_dim(G, *elems):
    for p in elems:
        if len(p.v) != G.d:
            raise DimensionMismatch(f"element {p} is not in Z^{G.d} x| Z")


def poly_multiply(G: PolyGroup, p: PolyElement, q: PolyElement) -> PolyElement:
    _check_dim(G, p, q)
    w = _matvec(G.power(p.t), q.v)
    return PolyElement(tuple(a + b for a, b in zip(p.v, w)), p.t + q.t)


def poly_inverse(G: PolyGroup, p: PolyElement) -> PolyElement:
    _check_dim(G, p)
    return PolyElement(tuple(-x for x in _matvec(G.power(-p.t), p.v)), -p.t)


def poly_power(G: PolyGroup, p: PolyElement, k: int) -> PolyElement:
    if k < 0:
        p, k = poly_inverse(G, p), -k
    out = poly_identity(G)
    while k:
        if k & 1:
            out = poly_multiply(G, out, p)
        p = poly_multiply(G, p, p)
        k >>= 1
    return out


def poly_product(G, elems):
    out = poly_identity(G)
    for p in elems:
        out = poly_multiply(G, out, p)
    return out


@dataclass(frozen=True)
class PolyAuto:
    group: PolyGroup = field(repr=False)
    M: tuple
    eps: int
    u: tuple

    def __call__(self, p: PolyElement) -> PolyElement:
        G = self.group
        return poly_multiply(G, PolyElement(_matvec(self.M, p.v), 0),
                             poly_power(G, PolyElement(self.u, self.eps), p.t))

    def describe(self):
        return {"M": [list(r) for r in self.M], "eps": self.eps, "u": list(self.u)}


def validate_poly_auto(G: PolyGroup, M, eps=1, u=None) -> PolyAuto:
    M = _mat(M)
    u = (0,) * G.d if u is None else tuple(int(x) for x in u)
    if len(M) != G.d or any(len(r) != G.d for r in M) or len(u) != G.d:
        raise DimensionMismatch(f"automorphism data must have dimension {G.d}")
    if eps not in (1, -1):
        raise NotCompatible("eps must be +1 or -1")
    if abs(det(M)) != 1:
        raise NotUnimodular(f"det M = {det(M)}")
    if _mat(matmul(M, G.A)) != _mat(matmul(G.power(eps), M)):
        raise NotCompatible(f"M A != A^{eps} M")
    return PolyAuto(G, M, int(eps), u)


def identity_auto(G: PolyGroup) -> PolyAuto:
    return PolyAuto(G, _mat(identity(G.d)), 1, (0,) * G.d)


def search_compatible(G: PolyGroup, eps, bound=3):
    """All fibred automorphisms with ``u = 0`` and entries of M in [-bound, bound]."""
    out = []
    rng = range(-bound, bound + 1)
    for flat in itertools.product(rng, repeat=G.d * G.d):
        M = [flat[i * G.d:(i + 1) * G.d] for i in range(G.d)]
        try:
            out.append(validate_poly_auto(G, M, eps))
        except (NotCompatible, NotUnimodular):
            pass
    return out


# -- congruence quotients -------------------------------------------------------------

def matrix_order_mod(A, m, limit=100000):
    A = np.array(A, dtype=np.int64) % m
    I = np.eye(len(A), dtype=np.int64) % m
    P = A.copy()
    for k in range(1, limit + 1):
        if np.array_equal(P, I):
            return k
        P = (P @ A) % m
    raise ValueError(f"A has no finite order mod {m} below {limit}")


@lru_cache(maxsize=64)
def _quotient_group(A, m):
    """Table for ``(Z/m)^d x| Z/L``; element ``(v, t)`` at index ``t m^d + vidx(v)``."""
    d = len(A)
    L = matrix_order_mod(A, m)
    size = m ** d
    V = np.array(list(itertools.product(range(m), repeat=d)), dtype=np.int64).reshape(size, d)
    weights = m ** np.arange(d - 1, -1, -1, dtype=np.int64)
    Apow = [np.eye(d, dtype=np.int64)]
    An = np.array(A, dtype=np.int64) % m
    for _ in range(L - 1):
        Apow.append((Apow[-1] @ An) % m)
    N = size * L
    T = np.repeat(np.arange(L), size)
    Vall = np.tile(V, (L, 1))
    mul = np.empty((N, N), dtype=np.int64)
    for t1 in range(L):
        W = (Vall @ Apow[t1].T) % m                       # A^t1 w for every right factor
        vsum = (V[:, None, :] + W[None, :, :]) % m
        tsum = (t1 + T) % L
        mul[t1 * size:(t1 + 1) * size] = tsum[None, :] * size + vsum @ weights
    return core.FiniteGroup(mul, name=f"(Z/{m})^{d} x| Z/{L}"), L, tuple(Apow)


@dataclass(frozen=True, eq=False)
class CongruenceQuotient:
    modulus: int
    period: int
    group: core.FiniteGroup
    phi: core.GroupMap
    psi: core.GroupMap
    dim: int

    @property
    def order(self):
        return self.group.order

    def project(self, p: PolyElement) -> int:
        m = self.modulus
        idx = 0
        for x in p.v:
            idx = idx * m + x % m
        return (p.t % self.period) * m ** self.dim + idx


def _twist_vectors(G: PolyGroup, auto: PolyAuto, m, L, Apow):
    """``c_t`` with ``(u, eps)^t = (c_t, eps t)`` mod m for t = 0..L."""
    u = np.array(auto.u, dtype=np.int64) % m
    C = [np.zeros(G.d, dtype=np.int64)]
    for t in range(L):
        C.append((C[-1] + Apow[(auto.eps * t) % L] @ u) % m)
    return np.array(C)


def _induced_map(G: PolyGroup, auto: PolyAuto, name, m, L, Apow, size):
    C = _twist_vectors(G, auto, m, L, Apow)
    if C[L].any():
        raise DoesNotRespect(name, f"(0, {L})")
    # (m e_i, 0) -> (m M e_i, 0) always lies in the kernel
    V = np.array(list(itertools.product(range(m), repeat=G.d)), dtype=np.int64).reshape(size, G.d)
    T = np.repeat(np.arange(L), size)
    Vall = np.tile(V, (L, 1))
    M = np.array(auto.M, dtype=np.int64)
    newv = (Vall @ M.T + C[T]) % m
    newt = (auto.eps * T) % L
    weights = m ** np.arange(G.d - 1, -1, -1, dtype=np.int64)
    image = newt * size + newv @ weights
    return core.GroupMap(size * L, size * L, image, bijective=True, validated=True)


def congruence_quotient(G: PolyGroup, m: int, phi: PolyAuto, psi: PolyAuto) -> CongruenceQuotient:
    """Finite quotient mod ``m`` with the maps induced by phi and psi.

    Raises :class:`DoesNotRespect` if either automorphism fails to preserve
    the kernel; callers treat that as "skip this modulus".
    """
    if m < 2:
        raise ValueError("modulus must be at least 2")
    FG, L, Apow = _quotient_group(G.A, m)
    size = m ** G.d
    return CongruenceQuotient(m, L, FG, _induced_map(G, phi, "phi", m, L, Apow, size),
                              _induced_map(G, psi, "psi", m, L, Apow, size), G.d)


# -- the decision procedure ---------------------------------------------------------------

def shell(d, r):
    """Elements with ``max(|v|_inf, |t|) == r`` in lexicographic order of (v, t)."""
    for flat in itertools.product(range(-r, r + 1), repeat=d + 1):
        if max((abs(x) for x in flat), default=0) == r:
            yield PolyElement(flat[:d], flat[d])


def twisted_image(G, phi, psi, g, U):
    """``psi(g) U phi(g)^-1``."""
    return poly_product(G, [psi(g), U, poly_inverse(G, phi(g))])


@dataclass(frozen=True)
class Decision:
    verdict: str                 # "YES", "NO" or "EXHAUSTED"
    witness: PolyElement | None
    modulus: int | None
    transcript: tuple

    def to_dict(self):
        return {"verdict": self.verdict,
                "witness": None if self.witness is None else {"v": list(self.witness.v), "t": self.witness.t},
                "modulus": self.modulus,
                "transcript": list(self.transcript)}


def decide_twisted_conjugacy(G: PolyGroup, phi: PolyAuto, psi: PolyAuto, U: PolyElement, V: PolyElement,
                             shells=5, max_modulus=16) -> Decision:
    """Decide whether ``V = psi(g) U phi(g)^-1`` for some g.

    The witness search over shells of radius ``0..shells-1`` and the
    quotient search over moduli ``2..max_modulus`` alternate one unit of
    work each, shell first.  YES and NO answers carry certificates; running
    out of both budgets gives EXHAUSTED.
    """
    _check_dim(G, U, V)
    log = []
    radius, m = 0, 2
    while radius < shells or m <= max_modulus:
        if radius < shells:
            tested = 0
            for g in shell(G.d, radius):
                tested += 1
                if twisted_image(G, phi, psi, g, U) == V:
                    log.append({"stream": "witness", "radius": radius, "tested": tested, "found": True})
                    return Decision("YES", g, None, tuple(log))
            log.append({"stream": "witness", "radius": radius, "tested": tested, "found": False})
            radius += 1
        if m <= max_modulus:
            try:
                Q = congruence_quotient(G, m, phi, psi)
            except DoesNotRespect as exc:
                log.append({"stream": "quotient", "modulus": m, "skipped": str(exc)})
            else:
                u, v = Q.project(U), Q.project(V)
                w = core.is_twisted_conjugate(Q.group, Q.phi, Q.psi, u, v)
                log.append({"stream": "quotient", "modulus": m, "period": Q.period, "order": Q.order,
                            "image_U": u, "image_V": v, "separated": w is None})
                if w is None:
                    return Decision("NO", None, m, tuple(log))
            m += 1
    return Decision("EXHAUSTED", None, None, tuple(log))


def verify_decision(G, phi, psi, U, V, decision: Decision) -> bool:
    """Re-check the certificate carried by a YES or NO answer."""
    if decision.verdict == "YES":
        return twisted_image(G, phi, psi, decision.witness, U) == V
    if decision.verdict == "NO":
        Q = congruence_quotient(G, decision.modulus, phi, psi)
        return core.is_twisted_conjugate(Q.group, Q.phi, Q.psi, Q.project(U), Q.project(V)) is None
    return True


# -- lower bounds from quotients -------------------------------------------------------------

@dataclass(frozen=True)
class QuotientBound:
    bound: int
    rows: tuple

    def to_dict(self):
        return {"bound": self.bound, "rows": list(self.rows)}


def quotient_class_lower_bound(G: PolyGroup, phi: PolyAuto, psi: PolyAuto, moduli) -> QuotientBound:
    """Twisted class counts of respecting quotients; their max bounds R from below."""
    rows = []
    best = 0
    for m in moduli:
        try:
            Q = congruence_quotient(G, m, phi, psi)
        except DoesNotRespect as exc:
            rows.append({"modulus": m, "skipped": str(exc)})
            continue
        count = core.reidemeister_number(Q.group, Q.phi, Q.psi)
        best = max(best, count)
        rows.append({"modulus": m, "period": Q.period, "order": Q.order, "classes": count, "running_max": best})
    return QuotientBound(best, tuple(rows))


@dataclass(frozen=True)
class ProbeResult:
    phi: PolyAuto
    bound: QuotientBound
    window: int

    @property
    def running_max(self):
        return [r["running_max"] for r in self.bound.rows if "running_max" in r]

    @property
    def stable_from(self):
        """First modulus from which the running max no longer changes."""
        rows = [r for r in self.bound.rows if "running_max" in r]
        first = None
        for r in rows:
            if r["running_max"] == self.bound.bound and first is None:
                first = r["modulus"]
        return first

    @property
    def stabilized(self):
        tail = self.running_max[-self.window:]
        return len(tail) == self.window and len(set(tail)) == 1

    def to_dict(self):
        return {"phi": self.phi.describe(), "psi": "identity", "bound": self.bound.bound,
                "stabilized": self.stabilized, "stable_from": self.stable_from,
                "attains_four": self.bound.bound == 4 and self.stabilized,
                "rows": list(self.bound.rows)}


def probe_finite_reidemeister(G: PolyGroup, moduli=range(2, 17), eps=-1, bound=3, window=8):
    """Search fibred automorphisms and track quotient lower bounds for R(phi).

    A bound that stops growing over the last ``window`` respecting moduli
    is reported as stabilised; it stays a lower bound, not a proof of
    finiteness.
    """
    ident = identity_auto(G)
    return [ProbeResult(phi, quotient_class_lower_bound(G, phi, ident, list(moduli)), window)
            for phi in search_compatible(G, eps, bound)]
