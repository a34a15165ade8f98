"""Strand-diagram morphisms in normal form.

A morphism between orientation words is stored as an exact linear combination
of matchings (perfect pairings of the boundary points), with coefficients in
the delta-polynomial ring. Composition glues two matchings, follows paths, and
converts each closed loop into one factor of delta; tensoring shifts indices.
Equality of morphisms is equality of term maps, so every identity that holds
here holds on the nose, not up to rewriting.

Boundary points: bottom points 0..k-1 carry the domain word, top points 0..l-1
the codomain word. An endpoint is ("bot", i) or ("top", j); tuple comparison
gives the canonical order (all bottom points before all top points).

The oriented flavor has letters u/d (strand directions); a pair must be either
a through strand with equal letters or a turn-back connecting opposite letters
on the same boundary. The unoriented flavor has the single letter s and no
pairing constraints.
"""
from __future__ import annotations

import dataclasses
import functools
import itertools
import json
import re
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from curcat.exact import DeltaPoly

Endpoint = tuple[str, int]

ORIENTED = "oriented"
UNORIENTED = "unoriented"

_FLIP = {"u": "d", "d": "u", "s": "s"}
_LETTERS = {ORIENTED: frozenset("ud"), UNORIENTED: frozenset("s")}


class DiagramTypeError(ValueError):
    """A boundary, orientation, or flavor mismatch."""


@dataclasses.dataclass(frozen=True, order=True)
class Word:
    """A finite sequence of strand letters with a flavor tag."""

    flavor: str
    letters: tuple[str, ...]

    def __post_init__(self):
        if self.flavor not in _LETTERS:
            raise DiagramTypeError(f"unknown flavor {self.flavor!r}")
        bad = set(self.letters) - _LETTERS[self.flavor]
        if bad:
            raise DiagramTypeError(
                f"letters {sorted(bad)} not allowed in {self.flavor} words"
            )

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return "".join(self.letters)

    def __add__(self, other: "Word") -> "Word":
        if self.flavor != other.flavor:
            raise DiagramTypeError(
                f"cannot concatenate {self.flavor} and {other.flavor} words"
            )
        return Word(self.flavor, self.letters + other.letters)

    def dual(self) -> "Word":
        """Reverse the word and flip each letter (u <-> d; s fixed)."""
        return Word(self.flavor, tuple(_FLIP[x] for x in reversed(self.letters)))

    def repeat(self, k: int) -> "Word":
        return Word(self.flavor, self.letters * k)

    def count(self, letter: str) -> int:
        return self.letters.count(letter)

    def is_uniform(self) -> bool:
        return len(set(self.letters)) <= 1


def word(text: str, flavor: str | None = None) -> Word:
    """Build a Word from a letter string like "uud" or "sss".

    The flavor is inferred from the letters when not given; an empty string
    defaults to oriented.

    >>> str(word("uud"))
    'uud'
    >>> word("ss").flavor
    'unoriented'
    """
    letters = tuple(text)
    if flavor is None:
        if "s" in letters:
            if set(letters) != {"s"}:
                raise DiagramTypeError(f"mixed-flavor letters in {text!r}")
            flavor = UNORIENTED
        else:
            flavor = ORIENTED
    return Word(flavor, letters)


def empty_word(flavor: str = ORIENTED) -> Word:
    return Word(flavor, ())


def _letter_at(domain: Word, codomain: Word, point: Endpoint) -> str:
    side, idx = point
    w = domain if side == "bot" else codomain
    if not 0 <= idx < len(w):
        raise DiagramTypeError(f"endpoint {point} out of range")
    return w.letters[idx]


@dataclasses.dataclass(frozen=True, order=True)
class Matching:
    """A perfect pairing of the boundary points of a (domain, codomain) pair.

    Stored canonically: each pair has its smaller endpoint first, pairs are
    sorted by their smaller endpoint. Use Matching.make to build one.
    """

    domain: Word
    codomain: Word
    pairs: tuple[tuple[Endpoint, Endpoint], ...]

    @staticmethod
    def make(
        domain: Word,
        codomain: Word,
        pairs: Iterable[tuple[Endpoint, Endpoint]],
    ) -> "Matching":
        if domain.flavor != codomain.flavor:
            raise DiagramTypeError("domain and codomain flavors differ")
        canon = tuple(sorted(tuple(sorted(p)) for p in pairs))
        seen: set[Endpoint] = set()
        for a, b in canon:
            if a == b:
                raise DiagramTypeError(f"endpoint {a} paired with itself")
            for pt in (a, b):
                if pt in seen:
                    raise DiagramTypeError(f"endpoint {pt} used twice")
                seen.add(pt)
            la = _letter_at(domain, codomain, a)
            lb = _letter_at(domain, codomain, b)
            if domain.flavor == ORIENTED:
                if a[0] == b[0]:
                    if la == lb:
                        raise DiagramTypeError(
                            f"turn-back {a}-{b} needs opposite orientations"
                        )
                elif la != lb:
                    raise DiagramTypeError(
                        f"through strand {a}-{b} needs equal orientations"
                    )
        if len(seen) != len(domain) + len(codomain):
            raise DiagramTypeError(
                f"matching covers {len(seen)} of {len(domain) + len(codomain)} points"
            )
        return Matching(domain, codomain, canon)

    def partner_map(self) -> dict[Endpoint, Endpoint]:
        out: dict[Endpoint, Endpoint] = {}
        for a, b in self.pairs:
            out[a] = b
            out[b] = a
        return out

    def pair_text(self) -> str:
        return "".join(f"({a[0][0]}{a[1]}-{b[0][0]}{b[1]})" for a, b in self.pairs)


def _compose_matchings(
    f: Matching, g: Matching
) -> tuple[tuple[tuple[Endpoint, Endpoint], ...], int]:
    """Glue g's top boundary to f's bottom boundary.

    Returns the resulting pairs on (g.domain, f.codomain) plus the number of
    closed loops swallowed in the middle.
    """
    gp = g.partner_map()
    fp = f.partner_map()

    def walk(layer: str, point: Endpoint) -> tuple[str, Endpoint, list[int]]:
        touched: list[int] = []
        while True:
            nxt = gp[point] if layer == "g" else fp[point]
            if layer == "g":
                if nxt[0] == "bot":
                    return "bot", nxt, touched
                touched.append(nxt[1])
                layer, point = "f", ("bot", nxt[1])
            else:
                if nxt[0] == "top":
                    return "top", nxt, touched
                touched.append(nxt[1])
                layer, point = "g", ("top", nxt[1])

    new_pairs: list[tuple[Endpoint, Endpoint]] = []
    done: set[Endpoint] = set()
    seen_mid: set[int] = set()
    externals = [("g", ("bot", i)) for i in range(len(g.domain))] + [
        ("f", ("top", j)) for j in range(len(f.codomain))
    ]
    for layer, start in externals:
        key = (layer, start)
        if key in done:
            continue
        side, end, touched = walk(layer, start)
        seen_mid.update(touched)
        end_layer = "g" if side == "bot" else "f"
        done.add(key)
        done.add((end_layer, end))
        new_pairs.append((start, end))

    loops = 0
    for m in range(len(g.codomain)):
        if m in seen_mid:
            continue
        loops += 1
        seen_mid.add(m)
        layer, point = "f", ("bot", m)
        while True:
            nxt = fp[point] if layer == "f" else gp[point]
            mid = nxt[1]
            if mid == m and (
                (layer == "f" and nxt[0] == "bot") or (layer == "g" and nxt[0] == "top")
            ):
                break
            seen_mid.add(mid)
            layer, point = ("g", ("top", mid)) if layer == "f" else ("f", ("bot", mid))
    return tuple(new_pairs), loops


_Coeff = DeltaPoly


def _as_coeff(c) -> DeltaPoly:
    if isinstance(c, DeltaPoly):
        return c
    return DeltaPoly.constant(Fraction(c))


class DiagMorphism:
    """An exact linear combination of matchings with delta-polynomial coefficients.

    Terms are kept sorted by matching; zero coefficients are dropped, so two
    morphisms are equal exactly when their term lists coincide.
    """

    __slots__ = ("domain", "codomain", "terms")

    def __init__(
        self,
        domain: Word,
        codomain: Word,
        terms: Mapping[Matching, DeltaPoly] | Iterable[tuple[Matching, DeltaPoly]] = (),
    ):
        if domain.flavor != codomain.flavor:
            raise DiagramTypeError("domain and codomain flavors differ")
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Matching, DeltaPoly] = {}
        for m, c in items:
            if m.domain != domain or m.codomain != codomain:
                raise DiagramTypeError("term boundary differs from morphism boundary")
            c = _as_coeff(c)
            if m in acc:
                c = acc[m] + c
            if c:
                acc[m] = c
            else:
                acc.pop(m, None)
        object.__setattr__(
            self, "terms", tuple(sorted(acc.items(), key=lambda kv: kv[0].pairs))
        )
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "codomain", codomain)

    def __setattr__(self, name, value):
        raise AttributeError("DiagMorphism is immutable")

    @property
    def flavor(self) -> str:
        return self.domain.flavor

    # constructors ----------------------------------------------------------

    @staticmethod
    def zero(domain: Word, codomain: Word) -> "DiagMorphism":
        return DiagMorphism(domain, codomain)

    @staticmethod
    def from_matching(m: Matching, coeff=1) -> "DiagMorphism":
        return DiagMorphism(m.domain, m.codomain, [(m, _as_coeff(coeff))])

    @staticmethod
    def identity(w: Word) -> "DiagMorphism":
        m = Matching.make(w, w, [(("bot", i), ("top", i)) for i in range(len(w))])
        return DiagMorphism.from_matching(m)

    @staticmethod
    def scalar(value, flavor: str = ORIENTED) -> "DiagMorphism":
        """The endomorphism of the unit object with the given coefficient."""
        e = empty_word(flavor)
        m = Matching.make(e, e, [])
        return DiagMorphism.from_matching(m, value)

    # linear structure -------------------------------------------------------

    def _expect_parallel(self, other: "DiagMorphism") -> None:
        if self.domain != other.domain or self.codomain != other.codomain:
            raise DiagramTypeError(
                f"boundary mismatch: {self.domain}->{self.codomain} vs "
                f"{other.domain}->{other.codomain}"
            )

    def __add__(self, other: "DiagMorphism") -> "DiagMorphism":
        if not isinstance(other, DiagMorphism):
            return NotImplemented
        self._expect_parallel(other)
        return DiagMorphism(self.domain, self.codomain, self.terms + other.terms)

    def __sub__(self, other: "DiagMorphism") -> "DiagMorphism":
        return self + (-other)

    def __neg__(self) -> "DiagMorphism":
        return DiagMorphism(
            self.domain, self.codomain, [(m, -c) for m, c in self.terms]
        )

    def scale(self, c) -> "DiagMorphism":
        c = _as_coeff(c)
        return DiagMorphism(
            self.domain, self.codomain, [(m, k * c) for m, k in self.terms]
        )

    def __mul__(self, other):
        """f * g composes (g applied first); f * scalar rescales."""
        if isinstance(other, DiagMorphism):
            return compose(self, other)
        if isinstance(other, (int, Fraction, DeltaPoly)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, DeltaPoly)):
            return self.scale(other)
        return NotImplemented

    def __matmul__(self, other: "DiagMorphism") -> "DiagMorphism":
        return tensor(self, other)

    # inspection -------------------------------------------------------------

    def coeff(self, m: Matching) -> DeltaPoly:
        for mm, c in self.terms:
            if mm == m:
                return c
        return DeltaPoly.zero()

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def scalar_value(self) -> DeltaPoly:
        """Coefficient of an endomorphism of the unit object."""
        if len(self.domain) or len(self.codomain):
            raise DiagramTypeError("not a scalar morphism")
        return self.terms[0][1] if self.terms else DeltaPoly.zero()

    def specialize(self, delta_value) -> "DiagMorphism":
        """Evaluate every coefficient at delta = value (kept as constants)."""
        return DiagMorphism(
            self.domain,
            self.codomain,
            [
                (m, DeltaPoly.constant(c.evaluate(delta_value)))
                for m, c in self.terms
            ],
        )

    def __eq__(self, other):
        if not isinstance(other, DiagMorphism):
            return NotImplemented
        return (
            self.domain == other.domain
            and self.codomain == other.codomain
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.domain, self.codomain, self.terms))

    def __repr__(self):
        return (
            f"DiagMorphism({self.domain}->{self.codomain}, "
            f"{len(self.terms)} terms)"
        )


# ---------------------------------------------------------------------------
# composition / tensor


def _retag_scalar(f: DiagMorphism, flavor: str) -> DiagMorphism:
    """Move a unit-object endomorphism to the other flavor's unit object."""
    e = empty_word(flavor)
    return DiagMorphism(
        e, e, [(Matching.make(e, e, []), c) for _, c in f.terms]
    )


def _match_flavors(
    f: DiagMorphism, g: DiagMorphism
) -> tuple[DiagMorphism, DiagMorphism]:
    if f.flavor == g.flavor:
        return f, g
    if not len(f.domain) and not len(f.codomain):
        return _retag_scalar(f, g.flavor), g
    if not len(g.domain) and not len(g.codomain):
        return f, _retag_scalar(g, f.flavor)
    raise DiagramTypeError(f"flavor mismatch: {f.flavor} vs {g.flavor}")


def compose(f: DiagMorphism, g: DiagMorphism) -> DiagMorphism:
    """The composite f after g (g's codomain glued to f's domain)."""
    f, g = _match_flavors(f, g)
    if g.codomain != f.domain:
        raise DiagramTypeError(
            f"cannot compose: inner boundaries {g.codomain} vs {f.domain} differ"
        )
    acc: dict[Matching, DeltaPoly] = {}
    delta = DeltaPoly.delta()
    for mf, cf in f.terms:
        for mg, cg in g.terms:
            pairs, loops = _compose_matchings(mf, mg)
            m = Matching.make(g.domain, f.codomain, pairs)
            c = cf * cg * delta**loops
            acc[m] = acc.get(m, DeltaPoly.zero()) + c
    return DiagMorphism(g.domain, f.codomain, acc)


def tensor(f: DiagMorphism, g: DiagMorphism) -> DiagMorphism:
    """Horizontal juxtaposition, f on the left."""
    f, g = _match_flavors(f, g)
    dom = f.domain + g.domain
    cod = f.codomain + g.codomain
    bshift, tshift = len(f.domain), len(f.codomain)

    def shift(p: Endpoint) -> Endpoint:
        side, i = p
        return (side, i + (bshift if side == "bot" else tshift))

    acc: dict[Matching, DeltaPoly] = {}
    for mf, cf in f.terms:
        for mg, cg in g.terms:
            pairs = mf.pairs + tuple((shift(a), shift(b)) for a, b in mg.pairs)
            m = Matching.make(dom, cod, pairs)
            acc[m] = acc.get(m, DeltaPoly.zero()) + cf * cg
    return DiagMorphism(dom, cod, acc)


def tensor_all(fs: Sequence[DiagMorphism]) -> DiagMorphism:
    out = fs[0]
    for f in fs[1:]:
        out = tensor(out, f)
    return out


# ---------------------------------------------------------------------------
# generators


def generator(kind: str, signature) -> DiagMorphism:
    """One of the elementary single-matching morphisms.

    kind "id": identity of a word. kind "crossing": swap two letters, given as
    a 2-letter word or a pair. kind "cap": a 2-letter word folded down to the
    unit (oriented caps need opposite letters). kind "cup": the unit opened up
    to a 2-letter word.
    """
    if kind == "id":
        return DiagMorphism.identity(_as_word(signature))
    if kind == "crossing":
        w = _as_word(signature)
        if len(w) != 2:
            raise DiagramTypeError("crossing takes exactly two letters")
        m = Matching.make(
            w,
            Word(w.flavor, (w.letters[1], w.letters[0])),
            [(("bot", 0), ("top", 1)), (("bot", 1), ("top", 0))],
        )
        return DiagMorphism.from_matching(m)
    if kind == "cap":
        w = _as_word(signature)
        if len(w) != 2:
            raise DiagramTypeError("cap takes a two-letter word")
        m = Matching.make(w, empty_word(w.flavor), [(("bot", 0), ("bot", 1))])
        return DiagMorphism.from_matching(m)
    if kind == "cup":
        w = _as_word(signature)
        if len(w) != 2:
            raise DiagramTypeError("cup takes a two-letter word")
        m = Matching.make(empty_word(w.flavor), w, [(("top", 0), ("top", 1))])
        return DiagMorphism.from_matching(m)
    raise DiagramTypeError(f"unknown generator kind {kind!r}")


def _as_word(signature) -> Word:
    if isinstance(signature, Word):
        return signature
    if isinstance(signature, str):
        return word(signature)
    if isinstance(signature, (tuple, list)):
        return word("".join(signature))
    raise DiagramTypeError(f"cannot read a word from {signature!r}")


def identity(w) -> DiagMorphism:
    return DiagMorphism.identity(_as_word(w))


def crossing(a: str, b: str) -> DiagMorphism:
    return generator("crossing", a + b)


def cap(w) -> DiagMorphism:
    return generator("cap", w)


def cup(w) -> DiagMorphism:
    return generator("cup", w)


def delta_scalar(flavor: str = ORIENTED) -> DiagMorphism:
    return DiagMorphism.scalar(DeltaPoly.delta(), flavor)


def swap_words(w1, w2) -> DiagMorphism:
    """The symmetric braiding w1 (x) w2 -> w2 (x) w1 as a single matching."""
    w1, w2 = _as_word(w1), _as_word(w2)
    if w1.flavor != w2.flavor:
        raise DiagramTypeError("flavor mismatch in braiding")
    n1, n2 = len(w1), len(w2)
    pairs = [(("bot", i), ("top", n2 + i)) for i in range(n1)]
    pairs += [(("bot", n1 + j), ("top", j)) for j in range(n2)]
    m = Matching.make(w1 + w2, w2 + w1, pairs)
    return DiagMorphism.from_matching(m)


def permutation_diagram(sigma: Sequence[int], w) -> DiagMorphism:
    """The matching sending bottom i to top sigma[i], on a uniform word."""
    w = _as_word(w)
    if not w.is_uniform():
        raise DiagramTypeError("permutation diagrams need a uniform word")
    if sorted(sigma) != list(range(len(w))):
        raise DiagramTypeError(f"not a permutation of 0..{len(w) - 1}: {sigma}")
    m = Matching.make(
        w, w, [(("bot", i), ("top", sigma[i])) for i in range(len(w))]
    )
    return DiagMorphism.from_matching(m)


def permutation_sign(sigma: Sequence[int]) -> int:
    inversions = sum(
        1
        for i in range(len(sigma))
        for j in range(i + 1, len(sigma))
        if sigma[i] > sigma[j]
    )
    return -1 if inversions % 2 else 1


@functools.lru_cache(maxsize=None)
def _antisymmetrizer_cached(k: int, flavor: str) -> DiagMorphism:
    w = Word(flavor, ("u" if flavor == ORIENTED else "s",) * k)
    coeff = Fraction(1)
    for i in range(2, k + 1):
        coeff /= i
    acc: dict[Matching, DeltaPoly] = {}
    for sigma in itertools.permutations(range(k)):
        m = Matching.make(
            w, w, [(("bot", i), ("top", sigma[i])) for i in range(k)]
        )
        acc[m] = DeltaPoly.constant(permutation_sign(sigma) * coeff)
    return DiagMorphism(w, w, acc)


def antisymmetrizer(k: int, flavor: str = ORIENTED) -> DiagMorphism:
    """(1/k!) sum of signed permutations of k parallel strands; idempotent."""
    if k < 1:
        raise DiagramTypeError("need at least one strand")
    return _antisymmetrizer_cached(k, flavor)


# ---------------------------------------------------------------------------
# matching enumeration


def all_matchings(domain: Word, codomain: Word) -> list[Matching]:
    """Every valid matching from domain to codomain, in lexicographic order."""
    if domain.flavor != codomain.flavor:
        raise DiagramTypeError("flavor mismatch")
    points = [("bot", i) for i in range(len(domain))] + [
        ("top", j) for j in range(len(codomain))
    ]
    if len(points) % 2:
        return []

    def ok(a: Endpoint, b: Endpoint) -> bool:
        if domain.flavor == UNORIENTED:
            return True
        la = _letter_at(domain, codomain, a)
        lb = _letter_at(domain, codomain, b)
        return (la == lb) if a[0] != b[0] else (la != lb)

    out: list[Matching] = []

    def recurse(free: list[Endpoint], acc: list[tuple[Endpoint, Endpoint]]):
        if not free:
            out.append(Matching(domain, codomain, tuple(acc)))
            return
        a = free[0]
        for idx in range(1, len(free)):
            b = free[idx]
            if ok(a, b):
                acc.append((a, b))
                recurse(free[1:idx] + free[idx + 1 :], acc)
                acc.pop()

    recurse(points, [])
    out.sort(key=lambda m: m.pairs)
    return out


# ---------------------------------------------------------------------------
# parser


class ParseError(ValueError):
    """Syntax error, carrying the offending position."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


_TOKEN_RE = re.compile(
    r"(?P<num>\d+(?:/\d+)?)|(?P<name>[a-z]+)|(?P<punct>[][();,@+\-*])"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        if m.group("num"):
            tokens.append(("num", m.group("num"), pos))
        elif m.group("name"):
            tokens.append(("name", m.group("name"), pos))
        else:
            tokens.append(("punct", m.group("punct"), pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    """Recursive descent over: expr := term (("+"|"-") term)*;
    term := [coeff] tens (";" tens)*; tens := atom ("@" atom)*.

    "@" is tensor and binds tighter than ";"; "a ; b" is the composite with b
    applied first (read the chain from its end upward, like function
    composition)."""

    def __init__(self, text: str, flavor: str | None):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.flavor = flavor

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def next(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str) -> None:
        kind, val, pos = self.next()
        if val != value:
            raise ParseError(f"expected {value!r}, found {val!r}", pos)

    def parse(self) -> DiagMorphism:
        result = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"trailing input {val!r}", pos)
        return result

    def expr(self) -> DiagMorphism:
        sign = 1
        if self.peek()[1] in ("+", "-"):
            sign = -1 if self.next()[1] == "-" else 1
        result = self.term().scale(sign)
        while self.peek()[1] in ("+", "-"):
            op = self.next()[1]
            t = self.term()
            try:
                result = result + (t if op == "+" else -t)
            except DiagramTypeError as e:
                raise ParseError(str(e), self.peek()[2]) from e
        return result

    def term(self) -> DiagMorphism:
        coeff = Fraction(1)
        if self.peek()[0] == "num":
            coeff = Fraction(self.next()[1])
            if self.peek()[1] == "*":
                self.next()
        result = self.tens()
        while self.peek()[1] == ";":
            self.next()
            pos = self.peek()[2]
            rhs = self.tens()
            try:
                result = compose(result, rhs)
            except DiagramTypeError as e:
                raise ParseError(str(e), pos) from e
        return result.scale(coeff)

    def tens(self) -> DiagMorphism:
        result = self.atom()
        while self.peek()[1] == "@":
            self.next()
            pos = self.peek()[2]
            rhs = self.atom()
            try:
                result = tensor(result, rhs)
            except DiagramTypeError as e:
                raise ParseError(str(e), pos) from e
        return result

    def atom(self) -> DiagMorphism:
        kind, val, pos = self.next()
        if val == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        if kind != "name":
            raise ParseError(f"expected an atom, found {val!r}", pos)
        try:
            return self.named_atom(val, pos)
        except DiagramTypeError as e:
            raise ParseError(str(e), pos) from e

    def named_atom(self, name: str, pos: int) -> DiagMorphism:
        if name == "delta":
            return delta_scalar(self.flavor or ORIENTED)
        if name == "id":
            return identity(self.word_arg(allow_empty=True))
        if name in ("cap", "cup"):
            return generator(name, self.word_arg())
        if name == "x":
            self.expect("(")
            a = self.letter_arg()
            self.expect(",")
            b = self.letter_arg()
            self.expect(")")
            return crossing(a, b)
        if name == "asym":
            self.expect("(")
            k_tok = self.next()
            if k_tok[0] != "num" or "/" in k_tok[1]:
                raise ParseError("asym takes an integer", k_tok[2])
            self.expect(")")
            return antisymmetrizer(int(k_tok[1]), self.flavor or ORIENTED)
        if name == "perm":
            self.expect("[")
            images = [self.int_arg()]
            while self.peek()[1] == ",":
                self.next()
                images.append(self.int_arg())
            self.expect("]")
            return permutation_diagram(images, self.word_arg())
        raise ParseError(f"unknown atom {name!r}", pos)

    def word_arg(self, allow_empty: bool = False) -> Word:
        self.expect("(")
        kind, val, pos = self.peek()
        text = ""
        if kind == "name":
            text = self.next()[1]
        elif not allow_empty:
            raise ParseError("expected a word", pos)
        self.expect(")")
        w = word(text, self.flavor if text == "" else None)
        if self.flavor and w.flavor != self.flavor:
            raise ParseError(f"{w.flavor} word in {self.flavor} context", pos)
        return w

    def letter_arg(self) -> str:
        kind, val, pos = self.next()
        if kind != "name" or len(val) != 1:
            raise ParseError(f"expected a single letter, found {val!r}", pos)
        return val

    def int_arg(self) -> int:
        kind, val, pos = self.next()
        if kind != "num" or "/" in val:
            raise ParseError(f"expected an integer, found {val!r}", pos)
        return int(val)


def parse_expr(text: str, flavor: str | None = None) -> DiagMorphism:
    """Parse the diagram expression language into a normal-form morphism.

    >>> parse_expr("cap(ud) ; cup(ud)").scalar_value()
    DeltaPoly('1*delta')
    >>> parse_expr("x(u,u) ; x(u,u)") == identity("uu")
    True
    """
    return _Parser(text, flavor).parse()


# ---------------------------------------------------------------------------
# rendering


def _term_to_json(m: Matching, c: DeltaPoly) -> dict:
    return {
        "pairs": [[a[0], a[1], b[0], b[1]] for a, b in m.pairs],
        "coeff": str(c),
    }


def diag_to_json_dict(f: DiagMorphism) -> dict:
    return {
        "flavor": f.flavor,
        "domain": str(f.domain),
        "codomain": str(f.codomain),
        "terms": [_term_to_json(m, c) for m, c in f.terms],
    }


def diag_from_json_dict(obj: dict) -> DiagMorphism:
    flavor = obj["flavor"]
    dom = word(obj["domain"], flavor)
    cod = word(obj["codomain"], flavor)
    terms = []
    for t in obj["terms"]:
        pairs = [((p[0], p[1]), (p[2], p[3])) for p in t["pairs"]]
        terms.append((Matching.make(dom, cod, pairs), DeltaPoly.parse(t["coeff"])))
    return DiagMorphism(dom, cod, terms)


def _render_text(f: DiagMorphism) -> str:
    if f.is_zero():
        return "0"
    lines = []
    for m, c in f.terms:
        pairs = m.pair_text()
        lines.append(f"{c} {pairs}".strip() if pairs else str(c))
    return "\n".join(lines)


def _tikz_point(side: str, idx: int) -> tuple[float, float]:
    return (0.5 * idx, 0.0 if side == "bot" else 1.0)


def _render_tikz(f: DiagMorphism) -> str:
    chunks = []
    for m, c in f.terms:
        lines = [f"% coeff {c}", r"\begin{tikzpicture}"]
        for a, b in m.pairs:
            xa, ya = _tikz_point(*a)
            xb, yb = _tikz_point(*b)
            la = _letter_at(m.domain, m.codomain, a)
            style = "-" if f.flavor == UNORIENTED else ("->" if la == "u" else "<-")
            if a[0] == b[0]:
                bend = 0.5 if a[0] == "bot" else -0.5
                lines.append(
                    f"  \\draw[{style}] ({xa},{ya}) .. controls ({xa},{ya + bend}) "
                    f"and ({xb},{yb + bend}) .. ({xb},{yb});"
                )
            else:
                lines.append(f"  \\draw[{style}] ({xa},{ya}) -- ({xb},{yb});")
        lines.append(r"\end{tikzpicture}")
        chunks.append("\n".join(lines))
    return "\n".join(chunks) if chunks else "% zero morphism"


def render(f: DiagMorphism, format: str = "text") -> str:
    """Serialize deterministically as text, tikz, or round-trippable json."""
    if format == "text":
        return _render_text(f)
    if format == "tikz":
        return _render_tikz(f)
    if format == "json":
        return json.dumps(diag_to_json_dict(f), indent=2, sort_keys=True)
    raise ValueError(f"unknown render format {format!r}")


def parse_json(text: str) -> DiagMorphism:
    return diag_from_json_dict(json.loads(text))
