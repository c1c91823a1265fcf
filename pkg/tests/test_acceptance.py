"""Acceptance gate: one printed verdict line per criterion.

Each test prints ``ACCEPTANCE NN <name>: PASS|FAIL`` before asserting, so a
plain ``pytest -v -s tests/test_acceptance.py`` reads as a checklist.  All
randomness is drawn from generators seeded with fixed constants; tolerances
are exact rational bounds, never floating point.
"""

import json
import random
import time
from fractions import Fraction

import pytest

from cantorproj import (
    CantorPoint,
    ClopenSet,
    Family,
    Rect,
    RectUnion,
    all_words,
    diam,
    distance,
    falsify_restriction,
    image_member,
    lc2_certificate,
    lc2_valid,
    parse_rect_union,
    piece_member,
    project_rect,
    project_union,
    repr_point,
    resolvable_probe,
    verify_witness,
)
from cantorproj.certify import certificate_points, decompose, decomposition_member
from cantorproj.cli import main as cli_main
from cantorproj.oracle import brute_rect_trace
from cantorproj.suites import WITNESS_MUTATIONS, mutate_witness, small_clopens

SEED = 20250823
TRIVIAL = RectUnion(())


def verdict(num: int, name: str, ok: bool, note: str = "") -> None:
    print(f"ACCEPTANCE {num:02d} {name}: {'PASS' if ok else 'FAIL'}", flush=True)
    assert ok, f"criterion {num} ({name}) failed{': ' + note if note else ''}"


def _random_word(rng, depth):
    return "".join(rng.choice("02") for _ in range(rng.randint(0, depth)))


def _random_clopen(rng, depth, max_words=2):
    return ClopenSet.from_words(
        tuple(_random_word(rng, depth) for _ in range(rng.randint(1, max_words)))
    )


@pytest.fixture(scope="module")
def rect_suite(fam):
    """A seeded suite of 1000 rectangle unions with their exact images."""
    rng = random.Random(SEED)
    out = []
    for _ in range(1000):
        rects = tuple(
            Rect(_random_clopen(rng, 3), _random_clopen(rng, 3))
            for _ in range(rng.randint(1, 3))
        )
        union = RectUnion(rects)
        out.append((union, project_union(fam, union)))
    return out


@pytest.fixture(scope="module")
def probe_points(fam):
    rng = random.Random(SEED + 1)
    pool = []
    for t in range(500):
        kind = t % 3
        if kind == 0:
            prefix = _random_word(rng, 6)
            cycle = "".join(rng.choice("02") for _ in range(rng.randint(1, 3)))
            pool.append(CantorPoint(prefix, cycle))
        elif kind == 1:
            pool.append(fam.dense_pair(rng.randint(0, 60)).x)
        else:
            pool.append(fam.approximant(rng.randint(0, 15), rng.randint(0, 10)).point)
    return pool


def test_01_family_distinct_and_convergent(fam):
    t0 = time.monotonic()
    ok = True
    xs = [fam.dense_pair(n).x for n in range(51)]
    ys = [fam.dense_pair(n).y for n in range(51)]
    ok &= len(set(xs)) == 51 and len(set(ys)) == 51
    dense_x = set(xs)
    seen = set()
    for n in range(51):
        bound = Fraction(1, n + 1)
        last = None
        for i in range(21):
            q = fam.approximant(n, i).point
            ok &= q not in seen and q not in dense_x
            seen.add(q)
            d = distance(q, xs[n])
            ok &= 0 < d < bound
            ok &= last is None or d < last
            last = d
    for n in range(201):
        ok &= fam.dense_pair(n).y.starts_with(fam.base_word(n).word)
    elapsed = time.monotonic() - t0
    verdict(1, "family-distinct-and-convergent", ok and elapsed < 10, f"{elapsed:.1f}s")


def test_02_joint_density_depth_three():
    t0 = time.monotonic()
    tables = []
    for _ in range(2):
        fresh = Family()
        first = {}
        want = [(u, v) for u in all_words(3) for v in all_words(3)]
        for n in range(3000):
            if len(first) == 64:
                break
            pair = fresh.dense_pair(n)
            for u, v in want:
                if (u, v) not in first and pair.x.starts_with(u) and pair.y.starts_with(v):
                    first[(u, v)] = n
        tables.append(first)
    ok = len(tables[0]) == 64 and tables[0] == tables[1]
    elapsed = time.monotonic() - t0
    verdict(2, "joint-density-depth-three", ok and elapsed < 10, f"{elapsed:.1f}s")


def test_03_exact_trace_equals_brute_trace(fam):
    t0 = time.monotonic()
    sets = small_clopens(depth=2)
    ok = True
    for w_set in sets:
        for v_set in sets:
            piece = project_rect(fam, w_set, v_set)
            exact = tuple(
                w for w in all_words(6) if piece_member(fam, piece, repr_point(w))
            )
            brute = brute_rect_trace(fam, w_set, v_set, 20, trace_depth=6)
            ok &= exact == brute
    elapsed = time.monotonic() - t0
    verdict(
        3,
        "oracle-trace-agreement",
        ok and elapsed < 60,
        f"{len(sets) ** 2} pairs in {elapsed:.1f}s",
    )


def test_04_decomposition_certified_with_probes(fam, rect_suite, probe_points):
    t0 = time.monotonic()
    ok = True
    for union, img in rect_suite:
        dec = decompose(fam, img)  # raises CertificationError when unsound
        probes = probe_points + certificate_points(fam, img)
        for p in probes:
            if decomposition_member(fam, dec, p) != image_member(fam, img, p):
                ok = False
                break
        if not ok:
            break
    elapsed = time.monotonic() - t0
    verdict(4, "decomposition-soundness", ok and elapsed < 120, f"{elapsed:.1f}s")


def test_05_locally_closed_form(fam, rect_suite):
    ok = True
    for union, img in rect_suite:
        cert = lc2_certificate(fam, img)
        if not lc2_valid(
            fam, img, cert, probe_depth=4, extra_points=certificate_points(fam, img)
        ):
            ok = False
            break
    verdict(5, "locally-closed-form", ok)


def test_06_resolvability_bulk_law(fam, rect_suite):
    cells = all_words(3)
    windows = []
    for mask in range(1, 256):
        windows.append(
            ClopenSet.from_words(tuple(c for j, c in enumerate(cells) if mask >> j & 1))
        )
    ok = True
    for union, img in rect_suite:
        for f in windows:
            if not resolvable_probe(fam, img, f):
                ok = False
                break
        if not ok:
            break
    verdict(6, "closure-resolvability", ok, str(len(windows)))


def test_07_witnesses_on_basic_rectangles(fam):
    t0 = time.monotonic()
    ok = True
    for wx in all_words(2):
        for wy in all_words(2):
            rect = Rect(ClopenSet((wx,)), ClopenSet((wy,)))
            cert = falsify_restriction(fam, TRIVIAL, rect, samples=20)
            good, clause = verify_witness(fam, cert, samples=20)
            ok &= good and clause is None
            coarse = ClopenSet((cert.base_coarse,))
            fine = ClopenSet((cert.base_fine,))
            ok &= 2 * diam(fine) < diam(coarse)
            ok &= fine.subset(coarse) and coarse.subset(rect.y_set)
            bound = Fraction(1, cert.n_fine + 1)
            ok &= all(
                distance(m.point, cert.witness_x) < bound for m in cert.missing
            )
            ok &= len(cert.missing) == 20
    elapsed = time.monotonic() - t0
    verdict(7, "witness-on-basic-rectangles", ok and elapsed < 60, f"{elapsed:.1f}s")


def test_08_mutations_all_rejected(fam):
    ok = len(WITNESS_MUTATIONS) == 10
    for literal in ("ε x ε", "2 x 0"):
        rect = parse_rect_union(literal).rects[0]
        cert = falsify_restriction(fam, TRIVIAL, rect, samples=8)
        for kind, expected in WITNESS_MUTATIONS:
            bad = mutate_witness(fam, cert, kind)
            got, clause = verify_witness(fam, bad, samples=len(cert.missing))
            ok &= not got and clause == expected
    verdict(8, "mutation-rejection", ok)


def test_09_fiber_witnesses(fam):
    t0 = time.monotonic()
    rng = random.Random(SEED + 9)
    ok = True
    for _ in range(200):
        prefix = _random_word(rng, 8)
        cycle = "".join(rng.choice("02") for _ in range(rng.randint(1, 4)))
        x = CantorPoint(prefix, cycle)
        ok &= fam.in_x(x, fam.fiber_witness(x))
    elapsed = time.monotonic() - t0
    verdict(9, "fiber-witnesses", ok and elapsed < 5, f"{elapsed:.1f}s")


def test_10_deterministic_outputs(tmp_path, capsys):
    pairs = []
    for stem, argv in (
        ("construct", ["construct", "--n-max", "8", "--i-max", "4"]),
        ("check", ["check"]),
    ):
        files = []
        for run in range(2):
            out = tmp_path / f"{stem}{run}.json"
            code = cli_main(argv + ["--out", str(out)])
            assert code == 0
            files.append(out.read_bytes())
        pairs.append(files[0] == files[1])
    capsys.readouterr()
    ok = all(pairs)
    verdict(10, "deterministic-outputs", ok)
