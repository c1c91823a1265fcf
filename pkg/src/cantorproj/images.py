"""Exact projection images of rectangles inside the punctured square.

The first-coordinate projection of a clopen rectangle intersected with the
punctured square is a clopen set minus an explicitly described countable set
of approximants.  ``ImagePiece`` records one rectangle's image as its clopen
hull together with per-sequence removal descriptions (``TailSet``); an
``ImageSet`` is a finite union of pieces with union semantics, so a point
removed in one piece but present in another belongs to the set.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .family import DEPTH_OFFSET, Family, ceil_log3
from .words import CantorPoint, ClopenSet, parse_clopen


class PieceError(ValueError):
    """Empty factor or a rectangle escaping its piece."""


@dataclass(frozen=True)
class Rect:
    """A clopen rectangle: first factor x_set, second factor y_set."""

    x_set: ClopenSet
    y_set: ClopenSet

    def is_empty(self) -> bool:
        return self.x_set.is_empty() or self.y_set.is_empty()

    def __str__(self) -> str:
        return f"{self.x_set}x{self.y_set}"

    def as_dict(self) -> dict:
        return {"x": list(self.x_set.words), "y": list(self.y_set.words)}


@dataclass(frozen=True)
class RectUnion:
    """A finite union of clopen rectangles; empty rectangles are dropped."""

    rects: tuple[Rect, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "rects", tuple(r for r in self.rects if not r.is_empty())
        )

    def is_empty(self) -> bool:
        return not self.rects

    def covers(self, x: CantorPoint, y: CantorPoint) -> bool:
        return any(r.x_set.member(x) and r.y_set.member(y) for r in self.rects)

    def __str__(self) -> str:
        return ";".join(str(r) for r in self.rects)

    def as_dict(self) -> list:
        return [r.as_dict() for r in self.rects]


def parse_rect(text: str) -> Rect:
    """Parse ``WxV`` with comma-joined cylinder words, ``ε`` for the root."""
    body = text.replace("×", "x")
    left, sep, right = body.partition("x")
    if not sep:
        raise PieceError(f"not a rectangle literal: {text!r}")
    return Rect(parse_clopen(left), parse_clopen(right))


def parse_rect_union(text: str) -> RectUnion:
    if not text.strip():
        raise PieceError("empty rectangle union literal")
    return RectUnion(tuple(parse_rect(chunk) for chunk in text.split(";")))


@dataclass(frozen=True)
class TailSet:
    """Removed members of one approximant sequence.

    ``{approximant(seq, i) : i >= start}`` when ``start`` is not None, plus
    the sporadic indices in ``extras``; with ``with_limit`` the limit point
    of the sequence is removed as well.  The closure of the denoted set adds
    exactly the limit when an infinite tail is present.
    """

    seq: int
    start: int | None
    extras: frozenset[int] = frozenset()
    with_limit: bool = False

    def __post_init__(self) -> None:
        if self.start is not None:
            bad = {i for i in self.extras if i >= self.start}
            if bad:
                raise PieceError(f"extras must precede the tail start: {sorted(bad)}")

    def covers_index(self, i: int) -> bool:
        if self.start is not None and i >= self.start:
            return True
        return i in self.extras

    def is_empty(self) -> bool:
        return self.start is None and not self.extras and not self.with_limit

    def sort_key(self) -> tuple:
        return (self.seq, -1 if self.start is None else self.start,
                tuple(sorted(self.extras)), self.with_limit)

    def as_dict(self) -> dict:
        return {
            "seq": self.seq,
            "start": self.start,
            "extras": sorted(self.extras),
            "with_limit": self.with_limit,
        }


@dataclass(frozen=True)
class ImagePiece:
    """Clopen hull minus the listed removals."""

    hull: ClopenSet
    removals: tuple[TailSet, ...] = ()

    def sort_key(self) -> tuple:
        return (self.hull.words, tuple(ts.sort_key() for ts in self.removals))

    def as_dict(self) -> dict:
        return {
            "hull": list(self.hull.words),
            "removals": [ts.as_dict() for ts in self.removals],
        }


@dataclass(frozen=True)
class ImageSet:
    """Union of image pieces, in a canonical order."""

    pieces: tuple[ImagePiece, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "pieces", tuple(sorted(self.pieces, key=ImagePiece.sort_key))
        )

    def hull(self) -> ClopenSet:
        out = ClopenSet()
        for p in self.pieces:
            out = out.union(p.hull)
        return out

    def as_dict(self) -> dict:
        return {"pieces": [p.as_dict() for p in self.pieces]}


def fin_indices(fam: Family, y_set: ClopenSet) -> tuple[int, ...]:
    """Sequences whose base cylinder contains the whole second factor.

    A normalized clopen set sits inside a cylinder iff that cylinder's word
    is a prefix of the common prefix of its words, so the answer is the
    finite chain of nonempty prefixes of that common prefix.
    """
    if y_set.is_empty():
        raise PieceError("second factor is empty")
    lcp = y_set.common_prefix()
    return tuple(fam.base_index(lcp[:k]) for k in range(1, len(lcp) + 1))


def project_rect(fam: Family, x_set: ClopenSet, y_set: ClopenSet) -> ImagePiece:
    """Image of (x_set x y_set) within the space, projected on coordinate 1.

    A point survives iff some y in the second factor avoids its removed
    column; that fails exactly for approximants of the finitely many
    sequences whose base swallows the whole second factor.
    """
    if x_set.is_empty() or y_set.is_empty():
        raise PieceError("empty rectangle factor")
    depth = x_set.depth()
    removals = []
    for n in fin_indices(fam, y_set):
        # Beyond this index the approximant agrees with its limit to the
        # full depth of the hull, so membership stabilizes.
        start_min = max(0, depth - ceil_log3(n + 1) - DEPTH_OFFSET)
        extras = frozenset(
            i for i in range(start_min) if x_set.member(fam.approximant(n, i).point)
        )
        if x_set.member(fam.dense_pair(n).x):
            removals.append(TailSet(n, start_min, extras))
        elif extras:
            removals.append(TailSet(n, None, extras))
    return ImagePiece(x_set, tuple(sorted(removals, key=TailSet.sort_key)))


def project_union(fam: Family, u: RectUnion) -> ImageSet:
    return ImageSet(tuple(project_rect(fam, r.x_set, r.y_set) for r in u.rects))


def piece_member(fam: Family, piece: ImagePiece, p: CantorPoint) -> bool:
    if not piece.hull.member(p):
        return False
    for ts in piece.removals:
        if ts.with_limit and p == fam.dense_pair(ts.seq).x:
            return False
    hit = fam.recognize(p)
    if hit is None:
        return True
    n, i = hit
    return not any(ts.seq == n and ts.covers_index(i) for ts in piece.removals)


def image_member(fam: Family, img: ImageSet, p: CantorPoint) -> bool:
    return any(piece_member(fam, piece, p) for piece in img.pieces)


def image_trace(fam: Family, img: ImageSet, depth: int) -> tuple[str, ...]:
    """Depth-d cylinders whose canonical representative lies in the image."""
    from .words import all_words, repr_point

    return tuple(
        w for w in all_words(depth) if image_member(fam, img, repr_point(w))
    )


def removal_sequences(img: ImageSet) -> tuple[int, ...]:
    return tuple(sorted({ts.seq for p in img.pieces for ts in p.removals}))


def adjust_open(fam: Family, piece: ImagePiece) -> ImagePiece:
    """Remove the limit of every infinite tail that lies in the hull.

    The adjusted piece denotes its hull minus a countable closed set, hence
    an open set; under union semantics the dropped limits are recovered by
    whichever piece keeps them interior.
    """
    out = []
    for ts in piece.removals:
        if ts.start is not None and piece.hull.member(fam.dense_pair(ts.seq).x):
            ts = replace(ts, with_limit=True)
        out.append(ts)
    return ImagePiece(piece.hull, tuple(sorted(out, key=TailSet.sort_key)))
