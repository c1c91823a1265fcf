"""Deterministic generation of the punctured Cantor square.

The space under study is the product of two Cantor sets with countably many
fiber sets removed: for every approximant point ``x`` of a dense sequence, a
whole column ``{x} x B`` is punched out, where ``B`` is a cylinder drawn from
a constrained enumeration.  Everything here is generated by fixed greedy
schemes, so two instances of :class:`Family` always agree digit for digit.

Tail markers keep the point classes decidable: every dense point ends in the
alternating cycle ``20``, every approximant ends in zeros after a
self-delimiting tag, so a single backward scan recovers which fiber (if any)
a given point belongs to.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt

from .words import CantorPoint, Cylinder, WordError, _check_digits, flip

DENSE_CYCLE = "20"

# Extra agreement depth of an approximant beyond its index.  Two units keep
# the distance bound strictly below 1/(n+1) even when n+1 is a power of 3.
DEPTH_OFFSET = 2


class FamilyError(ValueError):
    """Invalid index or word for the generated family."""


def diag_pair(t: int) -> tuple[int, int]:
    """Fixed diagonal enumeration of pairs of naturals."""
    s = (isqrt(8 * t + 1) - 1) // 2
    j = t - s * (s + 1) // 2
    return s - j, j


def lenlex_word(rank: int) -> str:
    """The rank-th word in length-lexicographic order, starting from ''."""
    if rank == 0:
        return ""
    return lenlex_nonempty(rank - 1)


def lenlex_nonempty(rank: int) -> str:
    """The rank-th nonempty word in length-lexicographic order."""
    length, r = 1, rank
    while r >= 2**length:
        r -= 2**length
        length += 1
    return format(r, f"0{length}b").replace("1", "2")


def lenlex_rank(word: str) -> int:
    """Rank of a nonempty word in the length-lexicographic order."""
    if not word:
        raise FamilyError("the empty word has no nonempty rank")
    base = 2 ** len(word) - 2
    return base + int(word.replace("2", "1"), 2)


def ceil_log3(m: int) -> int:
    """Least c with 3**c >= m, for m >= 1."""
    c, p = 0, 1
    while p < m:
        p *= 3
        c += 1
    return c


def approximant_depth(n: int, i: int) -> int:
    """Agreement depth of the i-th approximant of sequence n.

    Strictly increasing in i, and large enough that the approximant sits
    within 3**-(depth) < 1/(n+1) of its limit.
    """
    return i + ceil_log3(n + 1) + DEPTH_OFFSET


def approximant_tag(n: int, i: int) -> str:
    return "2" + "02" * n + "22" + "02" * i + "22"


@dataclass(frozen=True)
class DensePair:
    """The n-th point of the dense family in the square."""

    n: int
    x: CantorPoint
    y: CantorPoint


@dataclass(frozen=True)
class Approximant:
    """The i-th approximant of the x-coordinate of dense pair n."""

    n: int
    i: int
    point: CantorPoint
    depth: int


@dataclass(frozen=True)
class Fiber:
    """One removed column: the approximant and its base cylinder word."""

    n: int
    i: int
    point: CantorPoint
    base: str


class Family:
    """Append-only memo of the generated family.

    Deterministic: two instances always produce identical output.  The memo
    is not thread safe; give each thread its own instance.
    """

    def __init__(self) -> None:
        self._pairs: list[DensePair] = []
        self._x_taken: set[CantorPoint] = set()
        self._y_taken: set[CantorPoint] = set()
        self._x_pad: dict[str, int] = {}
        self._y_pad: dict[str, int] = {}
        self._approx: dict[tuple[int, int], Approximant] = {}
        self._recog: dict[CantorPoint, tuple[int, int] | None] = {}
        self._idx2word: dict[int, str] = {}
        self._word2idx: dict[str, int] = {}
        self._enum_step = 0
        self._fibers: list[Fiber] = []

    # -- dense pairs ------------------------------------------------------

    def dense_pair(self, n: int) -> DensePair:
        if n < 0:
            raise FamilyError("pair index must be a natural number")
        while len(self._pairs) <= n:
            t = len(self._pairs)
            xr, yr = diag_pair(t)
            x = self._fresh(lenlex_word(xr), self._x_taken, self._x_pad)
            y = self._fresh(lenlex_word(yr), self._y_taken, self._y_pad)
            self._x_taken.add(x)
            self._y_taken.add(y)
            self._pairs.append(DensePair(t, x, y))
        return self._pairs[n]

    @staticmethod
    def _pad_point(word: str, k: int) -> CantorPoint:
        return CantorPoint(word + "0" * k, DENSE_CYCLE)

    def _fresh(
        self, word: str, taken: set[CantorPoint], pads: dict[str, int]
    ) -> CantorPoint:
        # Minimal zero padding >= 1 keeping the new point distinct within
        # its own family; the point stays inside the requested cylinder.
        # Taken sets only grow, so the scan may resume at the last success.
        k = pads.get(word, 1)
        while self._pad_point(word, k) in taken:
            k += 1
        pads[word] = k
        return self._pad_point(word, k)

    # -- approximants -----------------------------------------------------

    def approximant(self, n: int, i: int) -> Approximant:
        key = (n, i)
        found = self._approx.get(key)
        if found is None:
            if n < 0 or i < 0:
                raise FamilyError("approximant indices must be natural numbers")
            x = self.dense_pair(n).x
            d = approximant_depth(n, i)
            word = x.digits(d) + flip(x.digit(d)) + approximant_tag(n, i)
            found = Approximant(n, i, CantorPoint(word, "0"), d)
            self._approx[key] = found
        return found

    def recognize(self, p: CantorPoint) -> tuple[int, int] | None:
        """Decode which approximant a point is, if any.

        Returns ``(n, i)`` exactly when ``p`` equals the i-th approximant of
        sequence n; any corruption of the tag yields ``None``.
        """
        if p not in self._recog:
            self._recog[p] = self._decode(p)
        return self._recog[p]

    def _decode(self, p: CantorPoint) -> tuple[int, int] | None:
        # Approximants end in zeros; in normal form that means cycle "0" and
        # a prefix ending in "2", so the tag sits at the very end of the
        # prefix and the backward scan is aligned.
        if p.cycle != "0" or not p.prefix.endswith("22"):
            return None
        rest = p.prefix[:-2]
        i = 0
        while rest.endswith("02"):
            rest = rest[:-2]
            i += 1
        if not rest.endswith("22"):
            return None
        rest = rest[:-2]
        n = 0
        while True:
            if len(rest) >= 2 and rest.endswith("2") and self._matches(rest, n, i):
                return n, i
            if rest.endswith("02"):
                rest = rest[:-2]
                n += 1
            else:
                return None

    def _matches(self, rest: str, n: int, i: int) -> bool:
        # rest should read: depth digits of the limit, flipped digit, "2".
        d = approximant_depth(n, i)
        if len(rest) != d + 2:
            return False
        x = self.dense_pair(n).x
        return rest[:d] == x.digits(d) and rest[d] == flip(x.digit(d))

    # -- base enumeration -------------------------------------------------

    def base_word(self, n: int) -> Cylinder:
        """Base cylinder of sequence n; always contains the n-th y point."""
        if n < 0:
            raise FamilyError("base index must be a natural number")
        while n not in self._idx2word:
            self._enum_tick()
        return Cylinder(self._idx2word[n])

    def base_index(self, word: str) -> int:
        """Index of the sequence whose base is the given nonempty word."""
        if not word:
            raise FamilyError("the whole-space cylinder is never a base")
        _check_digits(word)
        while word not in self._word2idx:
            self._enum_tick()
        return self._word2idx[word]

    def _assign(self, n: int, word: str) -> None:
        self._idx2word[n] = word
        self._word2idx[word] = n

    def _enum_tick(self) -> None:
        # Greedy back and forth: step t settles the t-th word and the t-th
        # index, so both directions of the table are total.
        t = self._enum_step
        w = lenlex_nonempty(t)
        if w not in self._word2idx:
            n = 0
            while n in self._idx2word or not self.dense_pair(n).y.starts_with(w):
                n += 1
            self._assign(n, w)
        if t not in self._idx2word:
            length = 1
            while True:
                pref = self.dense_pair(t).y.digits(length)
                if pref not in self._word2idx:
                    self._assign(t, pref)
                    break
                length += 1
        self._enum_step += 1

    def enumeration_steps(self) -> int:
        return self._enum_step

    # -- the punctured square ---------------------------------------------

    def in_x(self, x: CantorPoint, y: CantorPoint) -> bool:
        """Membership of (x, y) in the punctured square."""
        hit = self.recognize(x)
        if hit is None:
            return True
        return not y.starts_with(self.base_word(hit[0]).word)

    def fiber_witness(self, x: CantorPoint) -> CantorPoint:
        """A y with (x, y) inside the space, valid for every x."""
        hit = self.recognize(x)
        if hit is None:
            return CantorPoint("", "0")
        word = self.base_word(hit[0]).word
        return CantorPoint(flip(word[0]), "0")

    def removed_fibers(self, count: int) -> list[Fiber]:
        """First ``count`` removed columns in the fixed diagonal order."""
        while len(self._fibers) < count:
            n, i = diag_pair(len(self._fibers))
            a = self.approximant(n, i)
            self._fibers.append(Fiber(n, i, a.point, self.base_word(n).word))
        return self._fibers[:count]

    # -- export -----------------------------------------------------------

    def export(self, n_max: int, i_max: int) -> dict:
        """Deterministic, diffable description of the family window."""
        from .schema import scheme_params

        pairs = [
            {"n": n, "a": str(self.dense_pair(n).x), "b": str(self.dense_pair(n).y)}
            for n in range(n_max)
        ]
        approx = [
            {
                "n": n,
                "i": i,
                "point": str(self.approximant(n, i).point),
                "D": self.approximant(n, i).depth,
            }
            for n in range(n_max)
            for i in range(i_max)
        ]
        table = [{"n": n, "word": self.base_word(n).word} for n in range(n_max)]
        return {
            "schema_version": 1,
            "scheme_params": scheme_params(),
            "dense_pairs": pairs,
            "approximants": approx,
            "enumeration": table,
        }
