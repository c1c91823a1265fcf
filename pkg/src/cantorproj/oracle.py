"""Brute-force oracles over truncations of the punctured square.

Everything here works from first principles: representative points, the raw
membership predicate restricted to finitely many removed columns, and
nothing from the image machinery.  Used to cross-check the exact projection
code on finite windows.
"""

from __future__ import annotations

from .family import Family
from .images import ImagePiece
from .words import CantorPoint, ClopenSet, all_words, repr_point


def in_x_truncated(fam: Family, x: CantorPoint, y: CantorPoint, n_fibers: int) -> bool:
    """Membership with only the first ``n_fibers`` columns removed."""
    for fb in fam.removed_fibers(n_fibers):
        if fb.point == x and y.starts_with(fb.base):
            return False
    return True


def brute_rect_trace(
    fam: Family,
    x_set: ClopenSet,
    y_set: ClopenSet,
    n_fibers: int,
    trace_depth: int = 6,
    sample_depth: int = 6,
) -> tuple[str, ...]:
    """Trace of the truncated image, computed point by point."""
    ys = [repr_point(w) for w in all_words(sample_depth) if y_set.member(repr_point(w))]
    out = []
    for w in all_words(trace_depth):
        x = repr_point(w)
        if not x_set.member(x):
            continue
        if any(in_x_truncated(fam, x, y, n_fibers) for y in ys):
            out.append(w)
    return tuple(out)


def exact_rect_trace(fam: Family, piece: ImagePiece, trace_depth: int = 6) -> tuple[str, ...]:
    from .images import piece_member

    return tuple(
        w
        for w in all_words(trace_depth)
        if piece_member(fam, piece, repr_point(w))
    )


def project_rect_truncated(
    fam: Family, x_set: ClopenSet, y_set: ClopenSet, n_fibers: int
) -> tuple[ClopenSet, tuple[CantorPoint, ...]]:
    """Truncated image as hull minus a finite list of removed points."""
    removed = []
    for fb in fam.removed_fibers(n_fibers):
        base = ClopenSet((fb.base,))
        if y_set.subset(base) and x_set.member(fb.point):
            removed.append(fb.point)
    return x_set, tuple(removed)


def truncated_member(
    truncated: tuple[ClopenSet, tuple[CantorPoint, ...]], p: CantorPoint
) -> bool:
    hull, removed = truncated
    return hull.member(p) and p not in removed
