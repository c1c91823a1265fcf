"""Exact arithmetic on the middle-thirds Cantor set.

Points of the set are infinite words over the digit alphabet {0, 2}; the word
(d1, d2, ...) denotes the real number sum_k dk * 3**-k in [0, 1].  This module
implements the eventually periodic points, cylinders and finite unions of
cylinders in a canonical antichain normal form, and exact interval metrics
over `fractions.Fraction`.  No floating point is used anywhere in the package.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

ALPHABET = "02"


class WordError(ValueError):
    """Malformed digit word or an illegal set operation."""


def _check_digits(word: str) -> None:
    if any(ch not in ALPHABET for ch in word):
        raise WordError(f"digits must come from {{0, 2}}: {word!r}")


def flip(digit: str) -> str:
    """The other digit."""
    if digit == "0":
        return "2"
    if digit == "2":
        return "0"
    raise WordError(f"not a digit: {digit!r}")


def _primitive(cycle: str) -> str:
    # Smallest period of the cycle, via the doubled-string occurrence trick.
    return cycle[: (cycle + cycle).index(cycle, 1)]


@dataclass(frozen=True)
class CantorPoint:
    """An eventually periodic point: prefix followed by cycle repeated forever.

    Instances normalize on construction so that equal digit streams compare
    equal as values: the cycle is primitive, and the prefix is minimal (its
    last digit never equals the digit the cycle would produce there, so no
    further digit can be absorbed into a rotation of the cycle).
    """

    prefix: str = ""
    cycle: str = "0"

    def __post_init__(self) -> None:
        _check_digits(self.prefix)
        _check_digits(self.cycle)
        if not self.cycle:
            raise WordError("cycle must be nonempty")
        cyc = _primitive(self.cycle)
        pre = self.prefix
        while pre and pre[-1] == cyc[-1]:
            pre = pre[:-1]
            cyc = cyc[-1] + cyc[:-1]
        object.__setattr__(self, "prefix", pre)
        object.__setattr__(self, "cycle", cyc)

    def digit(self, k: int) -> str:
        """The k-th digit, 0-indexed."""
        if k < len(self.prefix):
            return self.prefix[k]
        return self.cycle[(k - len(self.prefix)) % len(self.cycle)]

    def digits(self, n: int) -> str:
        """The first n digits as a finite word."""
        if n <= len(self.prefix):
            return self.prefix[:n]
        reps = (n - len(self.prefix)) // len(self.cycle) + 1
        return (self.prefix + self.cycle * reps)[:n]

    def value(self) -> Fraction:
        """Exact value in [0, 1]."""
        m, c = len(self.prefix), len(self.cycle)
        head = int(self.prefix, 3) if self.prefix else 0
        tail = Fraction(int(self.cycle, 3), 3**c - 1)
        return Fraction(head, 3**m) + tail / 3**m

    def starts_with(self, word: str) -> bool:
        return self.digits(len(word)) == word

    def __str__(self) -> str:
        return f"{self.prefix}^({self.cycle})"


ZERO_POINT = CantorPoint("", "0")


def parse_point(text: str) -> CantorPoint:
    """Inverse of ``str(point)``; accepts e.g. ``02^(20)`` or ``^(0)``."""
    head, sep, rest = text.partition("^(")
    if not sep or not rest.endswith(")"):
        raise WordError(f"not a point literal: {text!r}")
    return CantorPoint(head, rest[:-1])


def point_value(p: CantorPoint) -> Fraction:
    return p.value()


def distance(p: CantorPoint, q: CantorPoint) -> Fraction:
    """Distance between the real values of two points."""
    return abs(p.value() - q.value())


def separation_depth(p: CantorPoint, q: CantorPoint) -> int:
    """Index of the first digit where two distinct points disagree."""
    if p == q:
        raise WordError("points are equal; no separating digit")
    # Eventually periodic words that agree this far are equal.
    bound = max(len(p.prefix), len(q.prefix)) + lcm(len(p.cycle), len(q.cycle))
    for k in range(bound):
        if p.digit(k) != q.digit(k):
            return k
    raise AssertionError("unequal normal forms must differ within the bound")


@dataclass(frozen=True)
class RationalInterval:
    """Closed interval with exact rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise WordError(f"empty interval: [{self.lo}, {self.hi}]")

    def length(self) -> Fraction:
        return self.hi - self.lo


@dataclass(frozen=True)
class Cylinder:
    """The set of points extending a finite digit word."""

    word: str = ""

    def __post_init__(self) -> None:
        _check_digits(self.word)

    def interval(self) -> RationalInterval:
        return cylinder_interval(self.word)

    def as_clopen(self) -> "ClopenSet":
        return ClopenSet((self.word,))

    def __str__(self) -> str:
        return self.word or "ε"


def cylinder_interval(cyl: Cylinder | str) -> RationalInterval:
    """Convex hull of a cylinder inside [0, 1]."""
    word = cyl.word if isinstance(cyl, Cylinder) else cyl
    _check_digits(word)
    lo = Fraction(int(word, 3) if word else 0, 3 ** len(word))
    return RationalInterval(lo, lo + Fraction(1, 3 ** len(word)))


def all_words(depth: int) -> tuple[str, ...]:
    """All digit words of the given length, in increasing value order."""
    return tuple("".join(t) for t in itertools.product(ALPHABET, repeat=depth))


def cantor_stage(n: int) -> list[RationalInterval]:
    """The 2**n intervals of the n-th stage of the middle-thirds removal."""
    if n < 0:
        raise WordError("stage index must be a natural number")
    return [cylinder_interval(w) for w in all_words(n)]


def repr_point(word: str) -> CantorPoint:
    """Canonical representative of a cylinder: the word padded with zeros."""
    return CantorPoint(word, "0")


def _common_prefix(words: tuple[str, ...]) -> str:
    lo, hi = min(words), max(words)
    k = 0
    while k < len(lo) and lo[k] == hi[k]:
        k += 1
    return lo[:k]


def _normalize_words(words) -> tuple[str, ...]:
    # Antichain: drop words with a proper prefix present, then merge sibling
    # pairs (w0, w2) -> w to a fixpoint.  The result is a canonical form.
    ordered = sorted(set(words), key=len)
    kept: set[str] = set()
    for w in ordered:
        if not any(w[:k] in kept for k in range(len(w))):
            kept.add(w)
    stack = list(kept)
    while stack:
        w = stack.pop()
        if not w or w not in kept:
            continue
        sibling = w[:-1] + flip(w[-1])
        if sibling in kept:
            kept.discard(w)
            kept.discard(sibling)
            kept.add(w[:-1])
            stack.append(w[:-1])
    return tuple(sorted(kept))


@dataclass(frozen=True)
class ClopenSet:
    """A finite union of cylinders, kept as a sorted prefix antichain.

    The normal form is canonical: two instances denote the same set of points
    iff they are equal as values.  The empty tuple denotes the empty set and
    ``("",)`` the whole space.
    """

    words: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        for w in self.words:
            _check_digits(w)
        object.__setattr__(self, "words", _normalize_words(self.words))

    @staticmethod
    def from_words(words) -> "ClopenSet":
        return ClopenSet(tuple(words))

    def is_empty(self) -> bool:
        return not self.words

    def depth(self) -> int:
        return max(map(len, self.words), default=0)

    def member(self, p: CantorPoint) -> bool:
        if not self.words:
            return False
        lead = p.digits(self.depth())
        return any(lead.startswith(w) for w in self.words)

    def union(self, other: "ClopenSet") -> "ClopenSet":
        return ClopenSet(self.words + other.words)

    def intersect(self, other: "ClopenSet") -> "ClopenSet":
        out = []
        for a in self.words:
            for b in other.words:
                if a.startswith(b):
                    out.append(a)
                elif b.startswith(a):
                    out.append(b)
        return ClopenSet(tuple(out))

    def complement(self) -> "ClopenSet":
        out: list[str] = []

        def walk(prefix: str, words: list[str]) -> None:
            if "" in words:
                return
            if not words:
                out.append(prefix)
                return
            walk(prefix + "0", [w[1:] for w in words if w[0] == "0"])
            walk(prefix + "2", [w[1:] for w in words if w[0] == "2"])

        walk("", list(self.words))
        return ClopenSet(tuple(out))

    def minus(self, other: "ClopenSet") -> "ClopenSet":
        return self.intersect(other.complement())

    def subset(self, other: "ClopenSet") -> bool:
        # Valid on normal forms: a covered cylinder has a prefix in the cover.
        return all(any(a.startswith(b) for b in other.words) for a in self.words)

    def diam(self) -> Fraction:
        """Diameter as a subset of [0, 1]; both extremes are Cantor points."""
        if not self.words:
            raise WordError("diameter of the empty set")
        spans = [cylinder_interval(w) for w in self.words]
        return max(s.hi for s in spans) - min(s.lo for s in spans)

    def common_prefix(self) -> str:
        if not self.words:
            raise WordError("common prefix of the empty set")
        return _common_prefix(self.words)

    def __str__(self) -> str:
        if not self.words:
            return "∅"
        return ",".join(w or "ε" for w in self.words)


WHOLE_SPACE = ClopenSet(("",))


def union(a: ClopenSet, b: ClopenSet) -> ClopenSet:
    return a.union(b)


def intersect(a: ClopenSet, b: ClopenSet) -> ClopenSet:
    return a.intersect(b)


def complement(a: ClopenSet) -> ClopenSet:
    return a.complement()


def subset(a: ClopenSet, b: ClopenSet) -> bool:
    return a.subset(b)


def is_empty(a: ClopenSet) -> bool:
    return a.is_empty()


def member(p: CantorPoint, s: ClopenSet | Cylinder | str) -> bool:
    if isinstance(s, ClopenSet):
        return s.member(p)
    word = s.word if isinstance(s, Cylinder) else s
    return p.starts_with(word)


def diam(s: ClopenSet | Cylinder | str) -> Fraction:
    if isinstance(s, ClopenSet):
        return s.diam()
    word = s.word if isinstance(s, Cylinder) else s
    return Fraction(1, 3 ** len(word))


def parse_clopen(text: str) -> ClopenSet:
    """Parse a comma-joined word list; the whole space is spelled ``ε``."""
    if not text.strip():
        raise WordError(f"not a clopen literal: {text!r}")
    words = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if chunk == "ε":
            chunk = ""
        _check_digits(chunk)
        words.append(chunk)
    return ClopenSet(tuple(words))
