"""Exact arithmetic in B(1, n) = <a, b | a^-1 b a = b^n>.

Elements live in the semidirect model ``Z[1/n] x| Z`` with product
``(x, r) (y, s) = (x + y / n^r, r + s)``; the generators embed as
``a -> (0, 1)`` and ``b -> (1, 0)``.  An endomorphism is fixed by the
images of ``a`` and ``b``.  It must send ``b`` into the kernel of the
a-exponent sum and satisfy the defining relation; writing
``phi(a) = (u, k)`` and ``phi(b) = (d, 0)`` the relation reduces to
``n d = d n^k``, so any injective endomorphism has ``k = 1``.  With both
degrees equal to one the a-exponent sum is constant along twisted orbits,
which gives infinitely many twisted classes.
"""
from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import BaseMismatch, ImageOfBNotInKernel, NotInjectiveAdmissible, RelationViolated


@dataclass(frozen=True)
class ZOneOverN:
    """``num / n**exp`` with ``exp >= 0`` and ``n`` not dividing ``num`` when ``exp > 0``."""
    n: int
    num: int = 0
    exp: int = 0

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("base must be at least 2")
        num, exp = int(self.num), int(self.exp)
        if exp < 0:
            num, exp = num * self.n ** (-exp), 0
        if num == 0:
            exp = 0
        while exp > 0 and num % self.n == 0:
            num //= self.n
            exp -= 1
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "exp", exp)

    @classmethod
    def from_fraction(cls, n, value):
        q = Fraction(value)
        den, e = q.denominator, 0
        while n ** e % den:
            e += 1
            if e > den.bit_length():
                raise ValueError(f"{value} is not in Z[1/{n}]")
        return cls(n, q.numerator * (n ** e // den), e)

    def to_fraction(self):
        return Fraction(self.num, self.n ** self.exp)

    def _check(self, other):
        if self.n != other.n:
            raise BaseMismatch(f"Z[1/{self.n}] vs Z[1/{other.n}]")

    def __add__(self, other):
        self._check(other)
        e = max(self.exp, other.exp)
        return ZOneOverN(self.n, self.num * self.n ** (e - self.exp) + other.num * self.n ** (e - other.exp), e)

    def __neg__(self):
        return ZOneOverN(self.n, -self.num, self.exp)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return ZOneOverN(self.n, self.num * other, self.exp)
        self._check(other)
        return ZOneOverN(self.n, self.num * other.num, self.exp + other.exp)

    __rmul__ = __mul__

    def shift(self, k):
        """Multiply by ``n**k`` for any integer k."""
        return ZOneOverN(self.n, self.num, self.exp - k)

    def is_zero(self):
        return self.num == 0

    def __str__(self):
        return str(self.to_fraction())


@dataclass(frozen=True)
class BSElement:
    x: ZOneOverN
    t: int = 0

    @property
    def n(self):
        return self.x.n

    @classmethod
    def of(cls, n, x, t=0):
        return cls(ZOneOverN.from_fraction(n, x), int(t))

    def __mul__(self, other):
        return bs_multiply(self, other)

    def __str__(self):
        return f"({self.x}, {self.t})"


def bs_identity(n) -> BSElement:
    return BSElement(ZOneOverN(n), 0)


def bs_multiply(p: BSElement, q: BSElement) -> BSElement:
    if p.n != q.n:
        raise BaseMismatch(f"B(1,{p.n}) vs B(1,{q.n})")
    return BSElement(p.x + q.x.shift(-p.t), p.t + q.t)


def bs_inverse(p: BSElement) -> BSElement:
    return BSElement(-p.x.shift(p.t), -p.t)


def bs_power(p: BSElement, k: int) -> BSElement:
    if k < 0:
        p, k = bs_inverse(p), -k
    result = bs_identity(p.n)
    while k:
        if k & 1:
            result = bs_multiply(result, p)
        p = bs_multiply(p, p)
        k >>= 1
    return result


def bs_product(n, elements):
    out = bs_identity(n)
    for e in elements:
        out = bs_multiply(out, e)
    return out


# -- words ----------------------------------------------------------------------------

@dataclass(frozen=True)
class BSWord:
    """Normalised syllables ``((letter, exponent), ...)`` over {a, b}."""
    syllables: tuple = ()

    def __post_init__(self):
        out = []
        for letter, e in self.syllables:
            if letter not in ("a", "b"):
                raise ValueError(f"unknown generator {letter!r}")
            e = int(e)
            if out and out[-1][0] == letter:
                e += out.pop()[1]
            if e:
                out.append((letter, e))
        object.__setattr__(self, "syllables", tuple(out))

    def __mul__(self, other):
        return BSWord(self.syllables + other.syllables)

    def inverse(self):
        return BSWord(tuple((l, -e) for l, e in reversed(self.syllables)))

    def __str__(self):
        return " ".join(l if e == 1 else f"{l}^{e}" for l, e in self.syllables) or "1"


def relator(n) -> BSWord:
    return BSWord((("a", -1), ("b", 1), ("a", 1), ("b", -n)))


def embed_word(w: BSWord, n: int) -> BSElement:
    gens = {"a": BSElement(ZOneOverN(n), 1), "b": BSElement(ZOneOverN(n, 1), 0)}
    return bs_product(n, (bs_power(gens[l], e) for l, e in w.syllables))


def a_exponent(w: BSWord) -> int:
    return sum(e for l, e in w.syllables if l == "a")


def random_word(rng: random.Random, length=8, max_exp=4) -> BSWord:
    return BSWord(tuple((rng.choice("ab"), rng.choice([e for e in range(-max_exp, max_exp + 1) if e]))
                        for _ in range(length)))


# -- endomorphisms ------------------------------------------------------------------------

@dataclass(frozen=True)
class BSEndo:
    n: int
    image_a: BSElement
    image_b: BSElement

    def __call__(self, g: BSElement) -> BSElement:
        """Image of an arbitrary element.

        ``(s / n^e, t) = a^e b^s a^-e a^t``, so the image is the matching
        product of generator images.  Only meaningful for validated maps.
        """
        A = self.image_a
        inner = bs_product(self.n, [bs_power(A, g.x.exp), bs_power(self.image_b, g.x.num), bs_power(A, -g.x.exp)])
        return bs_multiply(inner, bs_power(A, g.t))

    def __str__(self):
        return f"a -> {self.image_a}, b -> {self.image_b}"


def validate_bs_endo(n, image_a: BSElement, image_b: BSElement) -> BSEndo:
    """Check that the assignment defines an endomorphism of B(1, n)."""
    if image_a.n != n or image_b.n != n:
        raise BaseMismatch(f"images must lie in B(1,{n})")
    if image_b.t != 0:
        raise ImageOfBNotInKernel(f"image of b {image_b} has a-exponent {image_b.t}, expected 0")
    lhs = bs_product(n, [bs_inverse(image_a), image_b, image_a])
    rhs = bs_power(image_b, n)
    if lhs != rhs:
        raise RelationViolated(f"phi(a)^-1 phi(b) phi(a) = {lhs} but phi(b)^{n} = {rhs}")
    return BSEndo(n, image_a, image_b)


def endo_from_words(n, word_a: BSWord, word_b: BSWord) -> BSEndo:
    return validate_bs_endo(n, embed_word(word_a, n), embed_word(word_b, n))


def identity_endo(n) -> BSEndo:
    return BSEndo(n, BSElement(ZOneOverN(n), 1), BSElement(ZOneOverN(n, 1), 0))


def induced_degree(e: BSEndo) -> int:
    """The map induced on the quotient Z is multiplication by this integer."""
    return e.image_a.t


class Degree(enum.Enum):
    CONSISTENT = "Consistent"
    VIOLATED = "Violated"


def degree_constraint_check(e: BSEndo) -> Degree:
    """Compare ``n d`` with ``d n^k`` for ``phi(b) = (d, 0)``, ``k`` the induced degree."""
    d = e.image_b.x
    k = induced_degree(e)
    return Degree.CONSISTENT if d * e.n == d.shift(k) else Degree.VIOLATED


def is_injective_admissible(e: BSEndo) -> bool:
    return not e.image_b.x.is_zero()


# -- infinitude certificate --------------------------------------------------------------------

def random_element(rng: random.Random, n, num_range=50, max_exp=4, t_range=5) -> BSElement:
    return BSElement(ZOneOverN(n, rng.randint(-num_range, num_range), rng.randint(0, max_exp)),
                     rng.randint(-t_range, t_range))


def twisted_move(phi: BSEndo, psi: BSEndo, gamma: BSElement, x: BSElement) -> BSElement:
    """``psi(gamma) x phi(gamma)^-1``."""
    return bs_product(x.n, [psi(gamma), x, bs_inverse(phi(gamma))])


@dataclass(frozen=True)
class InfinitudeCertificate:
    n: int
    phi: str
    psi: str
    degree_phi: int
    degree_psi: int
    invariant: str
    witnesses: tuple
    samples: int
    passed_checks: int
    seed: int

    @property
    def passed(self):
        return self.degree_phi == self.degree_psi == 1 and self.passed_checks == self.samples

    def to_dict(self):
        return {
            "n": self.n,
            "phi": self.phi,
            "psi": self.psi,
            "degrees": {"phi": self.degree_phi, "psi": self.degree_psi},
            "invariant": self.invariant,
            "witness_family": "{(0, m) : m in Z} = {a^m}",
            "witnesses": [str(w) for w in self.witnesses],
            "checks": {"samples": self.samples, "passed": self.passed_checks, "seed": self.seed},
            "conclusion": "R(phi, psi) is infinite" if self.passed else "not certified",
            "status": "PASS" if self.passed else "FAIL",
        }


def infinitude_certificate(n, phi: BSEndo, psi: BSEndo, samples=1000, seed=0) -> InfinitudeCertificate:
    """Certify that (phi, psi) has infinitely many twisted classes.

    Twisted moves change the a-exponent of ``x`` by
    ``(deg psi - deg phi) * |gamma|_a``, which is zero once both degrees
    are one.  Hence the elements ``a^m`` lie in pairwise distinct classes.
    The invariance is also checked on ``samples`` random ``(x, gamma)``.
    """
    for name, e in (("phi", phi), ("psi", psi)):
        if e.n != n:
            raise BaseMismatch(f"{name} is an endomorphism of B(1,{e.n}), not B(1,{n})")
        if not is_injective_admissible(e):
            raise NotInjectiveAdmissible(f"{name} sends b to the identity")
        validate_bs_endo(n, e.image_a, e.image_b)
    kphi, kpsi = induced_degree(phi), induced_degree(psi)
    rng = random.Random(seed)
    ok = 0
    for _ in range(samples):
        x, gamma = random_element(rng, n), random_element(rng, n)
        moved = twisted_move(phi, psi, gamma, x)
        if moved.t == x.t + (kpsi - kphi) * gamma.t and moved.t == x.t:
            ok += 1
    witnesses = tuple(BSElement(ZOneOverN(n), m) for m in range(-3, 4))
    invariant = (f"|psi(g) x phi(g)^-1|_a = |x|_a + ({kpsi} - {kphi}) |g|_a = |x|_a, "
                 "so the a-exponent sum is a class invariant")
    return InfinitudeCertificate(n, str(phi), str(psi), kphi, kpsi, invariant, witnesses, samples, ok, seed)
