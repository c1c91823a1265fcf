"""Certified structure of projection images.

Every image splits into an open part plus finitely many isolated limit
points; this module computes that split, certifies it, presents the image as
an intersection of an open with a closed set around those points, and probes
exact closures of clopen slices through the image.
"""

from __future__ import annotations

from dataclasses import dataclass

from .family import DEPTH_OFFSET, Family, ceil_log3
from .images import (
    ImagePiece,
    ImageSet,
    PieceError,
    TailSet,
    adjust_open,
    image_member,
    piece_member,
)
from .schema import wrap
from .words import (
    CantorPoint,
    ClopenSet,
    all_words,
    repr_point,
    separation_depth,
)


class CertificationError(RuntimeError):
    """An internally produced certificate failed its own check."""


@dataclass(frozen=True)
class IsolatedPoint:
    """A limit point kept in the image while its approximants drop out."""

    seq: int
    point: CantorPoint
    separator: str
    missing_index: int

    def as_dict(self) -> dict:
        return {
            "seq": self.seq,
            "point": str(self.point),
            "separator": self.separator,
            "missing_index": self.missing_index,
        }


@dataclass(frozen=True)
class Decomposition:
    """Image = union of certified-open pieces + isolated points."""

    open_pieces: tuple[ImagePiece, ...]
    isolated: tuple[IsolatedPoint, ...]

    def as_dict(self) -> dict:
        return {
            "open_pieces": [p.as_dict() for p in self.open_pieces],
            "isolated": [d.as_dict() for d in self.isolated],
        }

    def certificate(self) -> dict:
        return wrap("decomposition", self.as_dict())


@dataclass(frozen=True)
class LC2Certificate:
    """Image = open part union (clopen cover intersect finite closed set)."""

    open_pieces: tuple[ImagePiece, ...]
    cover: ClopenSet
    points: tuple[CantorPoint, ...]

    def as_dict(self) -> dict:
        return {
            "open_pieces": [p.as_dict() for p in self.open_pieces],
            "cover": list(self.cover.words),
            "points": [str(p) for p in self.points],
        }

    def certificate(self) -> dict:
        return wrap("lc2", self.as_dict())


def _open_member(fam: Family, pieces, p: CantorPoint) -> bool:
    return any(piece_member(fam, piece, p) for piece in pieces)


def _isolated_seqs(fam: Family, img: ImageSet) -> list[int]:
    # A limit point is isolated iff it lies in the image while every piece
    # containing it removes a tail of its approximants; then cofinitely many
    # approximants are outside the image, and conversely a single piece
    # keeping the tail makes the point interior.
    out = []
    seqs = sorted(
        {ts.seq for p in img.pieces for ts in p.removals if ts.start is not None}
    )
    for n in seqs:
        x = fam.dense_pair(n).x
        holders = [p for p in img.pieces if p.hull.member(x)]
        if holders and all(
            any(ts.seq == n and ts.start is not None for ts in p.removals)
            for p in holders
        ):
            out.append(n)
    return out


def _missing_in(fam: Family, img: ImageSet, n: int, separator: str) -> int:
    cap = 8 + max(
        [len(separator)]
        + [p.hull.depth() for p in img.pieces]
        + [ts.start or 0 for p in img.pieces for ts in p.removals]
    )
    for i in range(cap):
        q = fam.approximant(n, i).point
        if q.starts_with(separator) and not image_member(fam, img, q):
            return i
    raise CertificationError(f"no missing approximant found for sequence {n}")


def decompose(fam: Family, img: ImageSet) -> Decomposition:
    """Split an image into its open part and isolated limit points.

    Raises :class:`CertificationError` if any certificate check fails,
    which would indicate a bug rather than bad input.
    """
    seqs = _isolated_seqs(fam, img)
    points = {n: fam.dense_pair(n).x for n in seqs}
    isolated = []
    for n in seqs:
        depth = 1 + max(
            (separation_depth(points[n], points[m]) for m in seqs if m != n),
            default=0,
        )
        sep = points[n].digits(depth)
        isolated.append(
            IsolatedPoint(n, points[n], sep, _missing_in(fam, img, n, sep))
        )
    open_pieces = tuple(adjust_open(fam, p) for p in img.pieces)
    dec = Decomposition(open_pieces, tuple(isolated))
    _certify_decomposition(fam, img, dec)
    return dec


def decomposition_member(fam: Family, dec: Decomposition, p: CantorPoint) -> bool:
    if any(d.point == p for d in dec.isolated):
        return True
    return _open_member(fam, dec.open_pieces, p)


def certificate_points(fam: Family, img: ImageSet) -> list[CantorPoint]:
    """Points that exercise every removal record of an image."""
    out: list[CantorPoint] = []
    for piece in img.pieces:
        for ts in piece.removals:
            out.append(fam.dense_pair(ts.seq).x)
            probes = set(ts.extras)
            if ts.start is not None:
                probes.update({max(0, ts.start - 1), ts.start, ts.start + 1})
            else:
                probes.add(max(ts.extras, default=0) + 1)
            for i in sorted(probes):
                out.append(fam.approximant(ts.seq, i).point)
    return out


def _certify_decomposition(fam: Family, img: ImageSet, dec: Decomposition) -> None:
    for d in dec.isolated:
        if _open_member(fam, dec.open_pieces, d.point):
            raise CertificationError(f"isolated point of sequence {d.seq} is in the open part")
        if not d.point.starts_with(d.separator):
            raise CertificationError(f"separator misses its own point ({d.seq})")
        for other in dec.isolated:
            if other.seq != d.seq and other.point.starts_with(d.separator):
                raise CertificationError(
                    f"separator of {d.seq} also contains the point of {other.seq}"
                )
        missing = fam.approximant(d.seq, d.missing_index).point
        if not missing.starts_with(d.separator) or image_member(fam, img, missing):
            raise CertificationError(f"missing-approximant witness broken for {d.seq}")
    for p in certificate_points(fam, img):
        if decomposition_member(fam, dec, p) != image_member(fam, img, p):
            raise CertificationError(f"reconstruction differs at {p}")


def lc2_certificate(fam: Family, img: ImageSet) -> LC2Certificate:
    """Present the image as open union (clopen cover intersect finite set)."""
    dec = decompose(fam, img)
    cover = ClopenSet(tuple(d.separator for d in dec.isolated))
    return LC2Certificate(dec.open_pieces, cover, tuple(d.point for d in dec.isolated))


def lc2_valid(
    fam: Family,
    img: ImageSet,
    cert: LC2Certificate,
    probe_depth: int = 4,
    extra_points: tuple[CantorPoint, ...] = (),
) -> bool:
    """Check the locally closed presentation pointwise."""
    if any(not cert.cover.member(p) for p in cert.points):
        return False
    probes = list(cert.points)
    probes += certificate_points(fam, img)
    probes += [repr_point(w) for w in all_words(probe_depth)]
    probes += list(extra_points)
    for p in probes:
        in_l2 = p in cert.points and cert.cover.member(p)
        got = _open_member(fam, cert.open_pieces, p) or in_l2
        if got != image_member(fam, img, p):
            return False
    return True


@dataclass(frozen=True)
class ClosureSplit:
    """Exact closures of F intersect E and F minus E for clopen F.

    ``inter_hull`` is the closure of the intersection.  The closure of the
    difference is ``diff_clopen`` plus the listed tails (with their limits)
    and sporadic points.
    """

    inter_hull: ClopenSet
    diff_clopen: ClopenSet
    diff_tails: tuple[TailSet, ...]
    diff_points: tuple[CantorPoint, ...]


def closure_split(fam: Family, img: ImageSet, f: ClopenSet) -> ClosureSplit:
    covered = img.hull()
    inter_hull = ClopenSet()
    for piece in img.pieces:
        inter_hull = inter_hull.union(piece.hull.intersect(f))
    diff_clopen = f.minus(covered)

    depth = max([f.depth()] + [p.hull.depth() for p in img.pieces])
    tails: list[TailSet] = []
    points: list[CantorPoint] = []
    for n in removal_sequences_of(img):
        x = fam.dense_pair(n).x
        stab = max(
            [max(0, depth - ceil_log3(n + 1) - DEPTH_OFFSET)]
            + [ts.start for p in img.pieces for ts in p.removals
               if ts.seq == n and ts.start is not None]
            + [i + 1 for p in img.pieces for ts in p.removals
               if ts.seq == n for i in ts.extras]
        )
        for i in range(stab):
            q = fam.approximant(n, i).point
            if f.member(q) and covered.member(q) and not image_member(fam, img, q):
                points.append(q)
        holders = [p for p in img.pieces if p.hull.member(x)]
        tail_flag = (
            f.member(x)
            and bool(holders)
            and all(
                any(ts.seq == n and ts.start is not None for ts in p.removals)
                for p in holders
            )
        )
        if tail_flag:
            tails.append(TailSet(n, stab))
            points.append(x)  # limit of the removed tail, hence in the closure
        elif f.member(x) and covered.member(x) and not image_member(fam, img, x):
            points.append(x)
    return ClosureSplit(inter_hull, diff_clopen, tuple(tails), tuple(points))


def removal_sequences_of(img: ImageSet) -> tuple[int, ...]:
    return tuple(sorted({ts.seq for p in img.pieces for ts in p.removals}))


def resolvable_probe(fam: Family, img: ImageSet, f: ClopenSet) -> bool:
    """True iff cl(F and E) intersect cl(F minus E) is not all of F.

    The intersection is a clopen core plus countably many points; a nonempty
    clopen set is uncountable, so the intersection exhausts F exactly when F
    already sits inside the clopen core.
    """
    if f.is_empty():
        raise PieceError("resolvability probe needs a nonempty closed set")
    split = closure_split(fam, img, f)
    core = split.inter_hull.intersect(split.diff_clopen)
    return not f.subset(core)
