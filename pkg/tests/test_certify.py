"""Open-plus-isolated decompositions, locally-closed form, closure probes."""

import dataclasses

import pytest

from cantorproj import (
    ClopenSet,
    PieceError,
    closure_split,
    decompose,
    decomposition_member,
    image_member,
    lc2_certificate,
    lc2_valid,
    parse_rect_union,
    piece_member,
    project_union,
    repr_point,
    resolvable_probe,
)
from cantorproj.certify import certificate_points
from cantorproj.schema import unwrap

WHOLE = ClopenSet(("",))


def img_of(fam, literal):
    return project_union(fam, parse_rect_union(literal))


class TestDecompose:
    def test_whole_square_trivial(self, fam):
        dec = decompose(fam, img_of(fam, "ε x ε"))
        assert dec.isolated == ()
        assert len(dec.open_pieces) == 1
        assert dec.open_pieces[0].removals == ()

    def test_single_isolated_limit(self, fam):
        x1 = fam.dense_pair(1).x
        img = img_of(fam, f"{x1.digits(3)} x 00")
        dec = decompose(fam, img)
        assert [iso.seq for iso in dec.isolated] == [1]
        iso = dec.isolated[0]
        assert iso.point == x1
        assert ClopenSet((iso.separator,)).member(x1)
        missing = fam.approximant(1, iso.missing_index).point
        assert ClopenSet((iso.separator,)).member(missing)
        assert not image_member(fam, img, missing)

    def test_two_isolated_limits(self, fam):
        img = img_of(fam, "0 x 00")
        dec = decompose(fam, img)
        assert sorted(iso.seq for iso in dec.isolated) == [0, 1]
        seps = [ClopenSet((iso.separator,)) for iso in dec.isolated]
        assert seps[0].intersect(seps[1]).is_empty()

    def test_open_part_omits_isolated_points(self, fam):
        img = img_of(fam, "0 x 00")
        dec = decompose(fam, img)
        for iso in dec.isolated:
            assert not any(
                piece_member(fam, piece, iso.point) for piece in dec.open_pieces
            )
            assert decomposition_member(fam, dec, iso.point)

    def test_union_keeps_limit_interior(self, fam):
        x1 = fam.dense_pair(1).x
        img = img_of(fam, f"{x1.digits(3)} x 00; {x1.digits(3)} x 02")
        dec = decompose(fam, img)
        assert all(iso.seq != 1 for iso in dec.isolated)
        assert decomposition_member(fam, dec, x1)

    def test_pointwise_reconstruction(self, fam):
        for literal in ("0 x 00", "002 x 00; 02 x 2", "2 x 0; 0 x 2", "ε x 00"):
            img = img_of(fam, literal)
            dec = decompose(fam, img)
            probes = certificate_points(fam, img)
            probes += [repr_point(w) for w in ("", "00", "02", "20", "222")]
            for p in probes:
                assert decomposition_member(fam, dec, p) == image_member(fam, img, p)

    def test_certificate_envelope(self, fam):
        dec = decompose(fam, img_of(fam, "0 x 00"))
        doc = dec.certificate()
        payload = unwrap(doc, "decomposition")
        assert len(payload["isolated"]) == 2

    def test_tampered_decomposition_detected(self, fam):
        img = img_of(fam, "0 x 00")
        dec = decompose(fam, img)
        chopped = dataclasses.replace(dec, isolated=dec.isolated[:-1])
        lost = dec.isolated[-1].point
        assert image_member(fam, img, lost)
        assert not decomposition_member(fam, chopped, lost)


class TestLC2:
    def test_valid_on_samples(self, fam):
        for literal in ("0 x 00", "002 x 00", "2 x 0; 0 x 2", "ε x ε"):
            img = img_of(fam, literal)
            cert = lc2_certificate(fam, img)
            extras = certificate_points(fam, img)
            assert lc2_valid(fam, img, cert, probe_depth=4, extra_points=extras)

    def test_cover_isolates_points(self, fam):
        img = img_of(fam, "0 x 00")
        cert = lc2_certificate(fam, img)
        for p in cert.points:
            assert cert.cover.member(p)

    def test_tampered_cover_rejected(self, fam):
        img = img_of(fam, "0 x 00")
        cert = lc2_certificate(fam, img)
        bald = dataclasses.replace(cert, points=cert.points[:-1])
        extras = certificate_points(fam, img)
        assert not lc2_valid(fam, img, bald, probe_depth=4, extra_points=extras)

    def test_envelope(self, fam):
        doc = lc2_certificate(fam, img_of(fam, "0 x 00")).certificate()
        assert unwrap(doc, "lc2")["points"]


class TestClosureSplit:
    def test_window_on_tail_hull(self, fam):
        x1 = fam.dense_pair(1).x
        img = img_of(fam, f"{x1.digits(3)} x 00")
        f = ClopenSet((x1.digits(3),))
        split = closure_split(fam, img, f)
        assert split.inter_hull == f
        assert split.diff_clopen.is_empty()
        flagged = [t for t in split.diff_tails if t.start is not None]
        assert [t.seq for t in flagged] == [1]
        assert x1 in split.diff_points

    def test_disjoint_window(self, fam):
        x1 = fam.dense_pair(1).x
        img = img_of(fam, f"{x1.digits(3)} x 00")
        split = closure_split(fam, img, ClopenSet(("2",)))
        assert split.inter_hull.is_empty()
        assert split.diff_clopen == ClopenSet(("2",))
        assert not split.diff_tails

    def test_whole_space_window(self, fam):
        img = img_of(fam, "0 x 00")
        split = closure_split(fam, img, WHOLE)
        assert split.inter_hull == ClopenSet(("0",))
        assert split.diff_clopen == ClopenSet(("2",))


class TestResolvableProbe:
    def test_bulk_law_small(self, fam):
        images = [img_of(fam, s) for s in ("0 x 00", "002 x 00", "ε x ε", "2 x 0; 0 x 2")]
        cells = ("00", "02", "20", "22")
        windows = [WHOLE] + [ClopenSet((w,)) for w in cells]
        windows += [ClopenSet((a, b)) for a in cells for b in cells if a < b]
        for img in images:
            for f in windows:
                assert resolvable_probe(fam, img, f)

    def test_empty_window_rejected(self, fam):
        with pytest.raises(PieceError):
            resolvable_probe(fam, img_of(fam, "0 x 00"), ClopenSet(()))
