"""Line-oriented group specifications and group words.

Group spec grammar (EBNF)::

    spec    = [ "group" ] kind { key "=" value } ;
    kind    = "finite-perm" | "finite-table" | "abelian" | "bs" | "poly" ;
    value   = int | fraction | ident | list | paren ;
    list    = "[" [ value { "," value } ] "]" ;
    paren   = "(" { int } ")" { "(" { int } ")" }      (* cycles *)
            | "(" value "," value { "," value } ")" ;  (* tuple  *)
    fraction = int "/" int ;

Word grammar::

    word = term { term } ;
    term = label [ "^" [ "-" ] digits ] ;
    label = letter { letter } ;
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from . import core
from .abelian import AbelianHom, FgAbelianGroup
from .baumslag import BSElement, BSWord, embed_word
from .errors import GroupError, MalformedExponent, ParseError, UnknownGenerator, ValidationError
from .polycyclic import PolyElement, PolyGroup, identity_auto, validate_poly_auto

KINDS = ("finite-perm", "finite-table", "abelian", "bs", "poly")

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<int>-?\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_\-]*)
  | (?P<punct>[=\[\](),/])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


class Cycles(tuple):
    """A product of cycles, kept distinct from plain tuples."""


def tokenize(text):
    pos, line, col = 0, 1, 1
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        chunk = m.group()
        if kind != "ws":
            out.append(Token(kind if kind != "punct" else chunk, chunk, line, col))
        for ch in chunk:
            if ch == "\n":
                line, col = line + 1, 1
            else:
                col += 1
        pos = m.end()
    out.append(Token("eof", "", line, col))
    return out


class _Parser:
    def __init__(self, text):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def advance(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, *kinds):
        t = self.tok
        if t.kind not in kinds:
            raise ParseError(f"unexpected {t.text or 'end of input'!r}", t.line, t.column, kinds)
        return self.advance()

    def value(self):
        t = self.tok
        if t.kind == "int":
            self.advance()
            if self.tok.kind == "/":
                self.advance()
                den = self.expect("int")
                if int(den.text) == 0:
                    raise ParseError("zero denominator", den.line, den.column)
                return Fraction(int(t.text), int(den.text))
            return int(t.text)
        if t.kind == "ident":
            return self.advance().text
        if t.kind == "[":
            return self.list_()
        if t.kind == "(":
            return self.paren()
        raise ParseError(f"unexpected {t.text or 'end of input'!r}", t.line, t.column, ("int", "ident", "[", "("))

    def list_(self):
        self.expect("[")
        items = []
        if self.tok.kind != "]":
            items.append(self.value())
            while self.tok.kind == ",":
                self.advance()
                items.append(self.value())
        self.expect("]")
        return items

    def paren(self):
        start = self.expect("(")
        if self.tok.kind in ("int", ")"):
            # peek: a comma right after the first value means a tuple
            first = self.value() if self.tok.kind == "int" else None
            if self.tok.kind == ",":
                return self._tuple_rest(first)
            cyc = [] if first is None else [first]
            while self.tok.kind == "int":
                cyc.append(int(self.advance().text))
            self.expect(")")
            cycles = [tuple(cyc)]
            while self.tok.kind == "(":
                self.advance()
                cyc = []
                while self.tok.kind == "int":
                    cyc.append(int(self.advance().text))
                self.expect(")")
                cycles.append(tuple(cyc))
            if any(isinstance(c, Fraction) for cy in cycles for c in cy):
                raise ParseError("fractions are not allowed in cycles", start.line, start.column)
            return Cycles(cycles)
        first = self.value()
        if self.tok.kind != ",":
            t = self.tok
            raise ParseError("expected ',' in tuple", t.line, t.column, (",",))
        return self._tuple_rest(first)

    def _tuple_rest(self, first):
        items = [first]
        while self.tok.kind == ",":
            self.advance()
            items.append(self.value())
        self.expect(")")
        return tuple(items)

    def pairs(self):
        out = {}
        while self.tok.kind == "ident":
            key = self.advance()
            self.expect("=")
            if key.text in out:
                raise ParseError(f"duplicate key {key.text!r}", key.line, key.column)
            out[key.text] = self.value()
        return out


def parse_value(text):
    p = _Parser(text)
    v = p.value()
    p.expect("eof")
    return v


def parse_pairs(text):
    p = _Parser(text)
    out = p.pairs()
    p.expect("eof")
    return out


# -- group specs ---------------------------------------------------------------------

@dataclass(frozen=True)
class GroupSpec:
    kind: str
    payload: tuple  # sorted (key, value) pairs with normalised values

    def get(self, key, default=None):
        return dict(self.payload).get(key, default)

    def __str__(self):
        return format_group_spec(self)


def _int_matrix(value, name):
    if not isinstance(value, list) or not value or not all(isinstance(r, list) for r in value):
        raise ValidationError(f"{name} must be a non-empty list of rows")
    if not all(isinstance(x, int) for r in value for x in r):
        raise ValidationError(f"{name} must contain integers")
    return tuple(tuple(r) for r in value)


def _perm_of(item, degree):
    if isinstance(item, Cycles):
        return core.cycles_to_perm(item, degree)
    if isinstance(item, list) and all(isinstance(x, int) for x in item):
        return core._as_perm(item, degree)
    raise ValidationError(f"cannot read {item!r} as a permutation")


def _degree_of(items):
    top = -1
    for it in items:
        if isinstance(it, Cycles):
            top = max([top] + [c for cyc in it for c in cyc])
        elif isinstance(it, list):
            top = max(top, len(it) - 1)
    return top + 1


def parse_group_spec(text) -> GroupSpec:
    p = _Parser(text)
    if p.tok.kind == "ident" and p.tok.text == "group":
        p.advance()
    kind_tok = p.tok
    if kind_tok.kind != "ident" or kind_tok.text not in KINDS:
        what = f"unknown group kind {kind_tok.text!r}" if kind_tok.text else "missing group kind"
        raise ParseError(what, kind_tok.line, kind_tok.column, KINDS)
    p.advance()
    pairs = p.pairs()
    p.expect("eof")
    spec = _normalise(kind_tok.text, pairs)
    build_group(spec)  # surfaces validation errors now
    return spec


def _require(kind, pairs, allowed, required):
    unknown = set(pairs) - set(allowed)
    if unknown:
        raise ValidationError(f"{kind}: unknown key(s) {sorted(unknown)}; allowed {list(allowed)}")
    missing = [k for k in required if k not in pairs]
    if missing:
        raise ValidationError(f"{kind}: missing key(s) {missing}")


def _normalise(kind, pairs) -> GroupSpec:
    if kind == "finite-perm":
        _require(kind, pairs, ("gens", "degree"), ("gens",))
        gens = pairs["gens"]
        if not isinstance(gens, list):
            raise ValidationError("gens must be a list of permutations")
        degree = pairs.get("degree", max(_degree_of(gens), 1))
        if not isinstance(degree, int) or degree < 1:
            raise ValidationError("degree must be a positive integer")
        try:
            perms = tuple(_perm_of(g, degree) for g in gens)
        except GroupError as exc:
            raise ValidationError(str(exc)) from exc
        payload = (("degree", degree), ("gens", perms))
    elif kind == "finite-table":
        _require(kind, pairs, ("table",), ("table",))
        payload = (("table", _int_matrix(pairs["table"], "table")),)
    elif kind == "abelian":
        _require(kind, pairs, ("invariants", "rank"), ())
        inv = pairs.get("invariants", [])
        rank = pairs.get("rank", 0)
        if not isinstance(inv, list) or not all(isinstance(d, int) for d in inv):
            raise ValidationError("invariants must be a list of integers")
        if not isinstance(rank, int):
            raise ValidationError("rank must be an integer")
        try:
            G = FgAbelianGroup(tuple(inv), rank)
        except GroupError as exc:
            raise ValidationError(str(exc)) from exc
        payload = (("invariants", G.invariants), ("rank", G.rank))
    elif kind == "bs":
        _require(kind, pairs, ("n",), ("n",))
        n = pairs["n"]
        if not isinstance(n, int) or n < 2:
            raise ValidationError("bs: n must be an integer >= 2")
        payload = (("n", n),)
    else:
        _require(kind, pairs, ("A", "d"), ("A",))
        A = _int_matrix(pairs["A"], "A")
        if "d" in pairs and pairs["d"] != len(A):
            raise ValidationError(f"poly: d={pairs['d']} but A is {len(A)}x{len(A)}")
        payload = (("A", A), ("d", len(A)))
    return GroupSpec(kind, payload)


def build_group(spec: GroupSpec):
    """The object described by a spec (FiniteGroup, FgAbelianGroup, int n, or PolyGroup)."""
    try:
        if spec.kind == "finite-perm":
            return core.group_from_permutations(spec.get("gens"), spec.get("degree"), name="G")
        if spec.kind == "finite-table":
            return core.group_from_table(spec.get("table"), name="G")
        if spec.kind == "abelian":
            return FgAbelianGroup(spec.get("invariants"), spec.get("rank"))
        if spec.kind == "bs":
            return spec.get("n")
        return PolyGroup(spec.get("A"))
    except ValidationError:
        raise
    except GroupError as exc:
        raise ValidationError(f"{spec.kind}: {exc}") from exc


def _fmt(value):
    if isinstance(value, tuple) and value and all(isinstance(r, tuple) for r in value):
        return "[" + ",".join(_fmt(r) for r in value) + "]"
    if isinstance(value, (tuple, list)):
        return "[" + ",".join(_fmt(v) for v in value) + "]"
    return str(value)


def format_group_spec(spec: GroupSpec) -> str:
    parts = ["group", spec.kind]
    for key, value in spec.payload:
        if key == "gens":
            text = "[" + ", ".join(core.format_cycles(g) for g in value) + "]"
        else:
            text = _fmt(value)
        parts.append(f"{key}={text}")
    return " ".join(parts)


# -- words ------------------------------------------------------------------------------

_TERM = re.compile(r"(?P<label>[A-Za-z]+)(?:\^(?P<exp>\S*))?")
_EXP = re.compile(r"-?\d+")


@dataclass(frozen=True)
class WordExpr:
    syllables: tuple

    def __post_init__(self):
        out = []
        for label, e in self.syllables:
            e = int(e)
            if out and out[-1][0] == label:
                e += out.pop()[1]
            if e:
                out.append((label, e))
        object.__setattr__(self, "syllables", tuple(out))

    def __str__(self):
        return " ".join(l if e == 1 else f"{l}^{e}" for l, e in self.syllables)


def parse_word(text, generators) -> WordExpr:
    gens = set(generators)
    syllables = []
    line, col = 1, 1
    pos = 0
    if not text.strip():
        raise ParseError("empty word", 1, 1, ("label",))
    while pos < len(text):
        ch = text[pos]
        if ch.isspace():
            line, col = (line + 1, 1) if ch == "\n" else (line, col + 1)
            pos += 1
            continue
        m = _TERM.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {ch!r}", line, col, ("label",))
        label = m.group("label")
        if label not in gens:
            raise UnknownGenerator(f"unknown generator {label!r}", line, col, tuple(sorted(gens)))
        exp = m.group("exp")
        if exp is None:
            e = 1
        elif not _EXP.fullmatch(exp):
            raise MalformedExponent(f"malformed exponent {exp!r}", line, col + len(label) + 1, ("integer",))
        else:
            e = int(exp)
        syllables.append((label, e))
        col += m.end() - pos
        pos = m.end()
    return WordExpr(tuple(syllables))


# -- elements and endomorphism data ------------------------------------------------------

def parse_finite_element(G, text):
    """An element index, or a permutation in cycle/array form for permutation groups."""
    v = parse_value(text)
    if isinstance(v, int):
        if not 0 <= v < G.order:
            raise ValidationError(f"element index {v} out of range for order {G.order}")
        return v
    if G.elements is None or not G.elements or not isinstance(G.elements[0], tuple):
        raise ValidationError("this group takes element indices only")
    degree = len(G.elements[0])
    try:
        perm = core.cycles_to_perm(v, degree) if isinstance(v, Cycles) else core._as_perm(v, degree)
    except (GroupError, TypeError) as exc:
        raise ValidationError(str(exc)) from exc
    try:
        return G.elements.index(perm)
    except ValueError:
        raise ValidationError(f"{core.format_cycles(perm)} is not in the group") from None


def parse_finite_map(G, text):
    """``id``, ``trivial``, ``inner=<elem>``, ``images=[...]`` on generators, or ``table=[...]``.

    A bare list is read as generator images.
    """
    stripped = text.strip()
    if stripped in ("id", "identity"):
        return core.identity_map(G)
    if stripped == "trivial":
        return core.trivial_map(G)
    if stripped.startswith("["):
        pairs = {"images": None}
        items = _split_top_level(stripped)
    else:
        pairs = parse_pairs(stripped)
        items = None
    if "inner" in pairs:
        return core.inner_map(G, parse_finite_element(G, text.split("=", 1)[1]))
    if "table" in pairs:
        table = pairs["table"]
        if not isinstance(table, list) or not all(isinstance(x, int) for x in table):
            raise ValidationError("table must be a flat list of element indices")
        try:
            return core.make_map(G, table)
        except (GroupError, ValueError) as exc:
            raise ValidationError(f"not an endomorphism: {exc}") from exc
    if "images" in pairs:
        if items is None:
            items = _split_top_level(text.split("=", 1)[1].strip())
        gens = G.generators()
        if len(items) != len(gens):
            raise ValidationError(f"expected {len(gens)} generator images, got {len(items)}")
        images = [parse_finite_element(G, it) for it in items]
        m = core.extend_generator_images(G, gens, images)
        if m is None:
            raise ValidationError("generator images do not extend to a homomorphism")
        return m
    raise ValidationError(f"cannot read endomorphism {text!r}")


def _split_top_level(text):
    """Split ``[x, y, ...]`` at top-level commas, keeping each item's text."""
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise ParseError("expected a bracketed list", 1, 1, ("[",))
    body = text[1:-1]
    items, depth, start = [], 0, 0
    for i, ch in enumerate(body):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif ch == "," and depth == 0:
            items.append(body[start:i])
            start = i + 1
    if body.strip():
        items.append(body[start:])
    return [it.strip() for it in items]


def parse_abelian_map(G: FgAbelianGroup, text):
    """``id``, ``trivial``, integer (scalar), flat list (diagonal) or list of rows."""
    v = {"id": 1, "identity": 1, "trivial": 0}.get(text.strip())
    v = parse_value(text) if v is None else v
    n = G.dim
    if isinstance(v, int):
        rows = [[v if i == j else 0 for j in range(n)] for i in range(n)]
    elif isinstance(v, list) and all(isinstance(x, int) for x in v):
        if len(v) != n:
            raise ValidationError(f"diagonal has {len(v)} entries, group has dimension {n}")
        rows = [[v[i] if i == j else 0 for j in range(n)] for i in range(n)]
    else:
        rows = _int_matrix(v, "matrix")
    try:
        return AbelianHom(G, rows)
    except GroupError as exc:
        raise ValidationError(str(exc)) from exc


def _as_int_vector(v, d):
    if isinstance(v, int):
        v = [v]
    if isinstance(v, Cycles) and len(v) == 1:
        v = list(v[0])
    if not isinstance(v, (list, tuple)) or not all(isinstance(x, int) for x in v):
        raise ValidationError(f"expected an integer vector, got {v!r}")
    if len(v) != d:
        raise ValidationError(f"expected a vector of length {d}, got {len(v)}")
    return tuple(v)


def parse_poly_element(G, text):
    """``((v1, ..., vd), t)``."""
    v = parse_value(text)
    if not isinstance(v, tuple) or len(v) != 2 or not isinstance(v[1], int):
        raise ValidationError(f"expected ((v...), t), got {text!r}")
    return PolyElement(_as_int_vector(v[0], G.d), v[1])


def parse_poly_auto(G, text):
    """``id`` or ``M=[[..]] [eps=+-1] [u=[..]]``."""
    if text.strip() in ("id", "identity"):
        return identity_auto(G)
    pairs = parse_pairs(text)
    _require("automorphism", pairs, ("M", "eps", "u"), ("M",))
    M = _int_matrix(pairs["M"], "M")
    eps = pairs.get("eps", 1)
    u = _as_int_vector(pairs["u"], G.d) if "u" in pairs else None
    try:
        return validate_poly_auto(G, M, eps, u)
    except GroupError as exc:
        raise ValidationError(str(exc)) from exc


def parse_bs_element(n, text):
    """``(x, t)`` with x in Z[1/n], or a word in a and b."""
    if text.strip().startswith("("):
        v = parse_value(text)
        if not isinstance(v, tuple) or len(v) != 2 or not isinstance(v[1], int):
            raise ValidationError(f"expected (x, t), got {text!r}")
        try:
            return BSElement.of(n, v[0], v[1])
        except ValueError as exc:
            raise ValidationError(str(exc)) from exc
    w = parse_word(text, ("a", "b"))
    return embed_word(BSWord(w.syllables), n)
