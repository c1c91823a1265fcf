"""Named self-check suites behind the ``check`` subcommand.

Every suite draws its randomness from a private generator seeded by the run
seed and the suite name, so a report is a pure function of its config and
two runs produce identical bytes.
"""

from __future__ import annotations

import json
import random
from dataclasses import asdict, dataclass, replace
from fractions import Fraction

from .certify import (
    CertificationError,
    certificate_points,
    decompose,
    decomposition_member,
    lc2_certificate,
    lc2_valid,
    resolvable_probe,
)
from .family import Family
from .images import Rect, RectUnion, image_member, project_rect, project_union
from .oracle import brute_rect_trace
from .witness import WitnessCertificate, falsify_restriction, verify_witness
from .words import (
    CantorPoint,
    ClopenSet,
    all_words,
    cantor_stage,
    cylinder_interval,
    diam,
    distance,
    flip,
    repr_point,
)


@dataclass(frozen=True)
class RunConfig:
    depth: int = 3
    n_max: int = 50
    i_max: int = 20
    truncation: int = 20
    budget: int = 10_000
    seed: int = 0
    suite_size: int = 60
    probes: int = 120

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    detail: dict


FAULTS = ("approximant-digit",)


class _FaultyFamily(Family):
    """Family with a deliberately corrupted approximant generator."""

    def approximant(self, n, i):
        ap = super().approximant(n, i)
        prefix = ap.point.prefix
        bad = CantorPoint(flip(prefix[0]) + prefix[1:], "0")
        return replace(ap, point=bad)


def make_family(fault: str | None = None) -> Family:
    if fault is None:
        return Family()
    if fault not in FAULTS:
        raise ValueError(f"unknown fault {fault!r}; expected one of {FAULTS}")
    return _FaultyFamily()


# -- deterministic random draws -------------------------------------------


def _random_word(rng: random.Random, depth: int) -> str:
    return "".join(rng.choice("02") for _ in range(rng.randint(0, depth)))


def _random_clopen(rng: random.Random, depth: int, max_words: int = 2) -> ClopenSet:
    count = rng.randint(1, max_words)
    return ClopenSet.from_words(tuple(_random_word(rng, depth) for _ in range(count)))


def _random_point(rng: random.Random, pre_len: int = 6, cyc_len: int = 3) -> CantorPoint:
    prefix = _random_word(rng, pre_len)
    cycle = "".join(rng.choice("02") for _ in range(rng.randint(1, cyc_len)))
    return CantorPoint(prefix, cycle)


def _random_rect_union(rng: random.Random, depth: int, max_rects: int = 3) -> RectUnion:
    rects = tuple(
        Rect(_random_clopen(rng, depth), _random_clopen(rng, depth))
        for _ in range(rng.randint(1, max_rects))
    )
    return RectUnion(rects)


def probe_pool(fam: Family, rng: random.Random, size: int) -> list[CantorPoint]:
    """A mixed bag of probe points: periodic, dense, and approximant."""
    pool = []
    for t in range(size):
        kind = t % 3
        if kind == 0:
            pool.append(_random_point(rng))
        elif kind == 1:
            pool.append(fam.dense_pair(rng.randint(0, 40)).x)
        else:
            pool.append(fam.approximant(rng.randint(0, 12), rng.randint(0, 8)).point)
    return pool


def small_clopens(depth: int = 2, max_words: int = 2) -> list[ClopenSet]:
    """All clopen sets built from at most two cylinders of bounded depth."""
    words = [w for d in range(depth + 1) for w in all_words(d)]
    seen = {}
    for i, w in enumerate(words):
        for ws in [(w,)] + [(w, words[j]) for j in range(i + 1, len(words))]:
            c = ClopenSet.from_words(ws)
            seen.setdefault(c.words, c)
    return [seen[k] for k in sorted(seen)]


def clopen_antichains(depth: int) -> list[ClopenSet]:
    """All nonempty clopen sets of the given depth, via cell subsets."""
    cells = all_words(depth)
    out = []
    for mask in range(1, 2 ** len(cells)):
        out.append(
            ClopenSet.from_words(tuple(c for j, c in enumerate(cells) if mask >> j & 1))
        )
    return out


# -- suites ----------------------------------------------------------------


def _suite_normal_form(fam, cfg, rng):
    checks, failures = 0, []
    for _ in range(200):
        p = _random_point(rng)
        k = rng.randint(1, 2)
        j = rng.randint(0, len(p.cycle) - 1)
        unrolled = CantorPoint(
            p.prefix + p.cycle * k + p.cycle[:j], p.cycle[j:] + p.cycle[:j]
        )
        checks += 1
        if unrolled != p:
            failures.append({"point": str(p), "unrolled": str(unrolled)})
        q = _random_point(rng)
        same_digits = p.digits(60) == q.digits(60)
        same_value = p.value() == q.value()
        checks += 1
        if not ((p == q) == same_digits == same_value):
            failures.append({"p": str(p), "q": str(q)})
    return not failures, {"checks": checks, "failures": failures[:5]}


def _suite_boolean_laws(fam, cfg, rng):
    checks, failures = 0, []
    whole = ClopenSet(("",))
    empty = ClopenSet(())
    for _ in range(120):
        a = _random_clopen(rng, cfg.depth)
        b = _random_clopen(rng, cfg.depth)
        c = _random_clopen(rng, cfg.depth)
        laws = {
            "de_morgan": a.union(b).complement() == a.complement().intersect(b.complement()),
            "double_complement": a.complement().complement() == a,
            "distribute": a.intersect(b.union(c)) == a.intersect(b).union(a.intersect(c)),
            "partition": a.union(a.complement()) == whole
            and a.intersect(a.complement()) == empty,
            "subset_minus": a.subset(b) == a.minus(b).is_empty(),
            "absorb": a.union(a.intersect(b)) == a,
        }
        p = _random_point(rng)
        laws["member_split"] = a.member(p) != a.complement().member(p)
        laws["member_union"] = a.union(b).member(p) == (a.member(p) or b.member(p))
        checks += len(laws)
        for name, ok in laws.items():
            if not ok:
                failures.append({"law": name, "a": str(a), "b": str(b), "c": str(c)})
    return not failures, {"checks": checks, "failures": failures[:5]}


def _suite_value_injective(fam, cfg, rng):
    checks, failures = 0, []
    seen: dict[Fraction, CantorPoint] = {}
    for _ in range(300):
        p = _random_point(rng)
        v = p.value()
        checks += 1
        if not 0 <= v <= 1:
            failures.append({"point": str(p), "value": str(v)})
        if v in seen and seen[v] != p:
            failures.append({"p": str(p), "q": str(seen[v])})
        seen[v] = p
        m = rng.randint(1, 12)
        partial = sum(
            Fraction(int(d), 3 ** (k + 1)) for k, d in enumerate(p.digits(m))
        )
        checks += 1
        if abs(v - partial) > Fraction(1, 3**m):
            failures.append({"point": str(p), "m": m})
    return not failures, {"checks": checks, "failures": failures[:5]}


def _suite_stage_agreement(fam, cfg, rng):
    checks, failures = 0, []
    key = lambda iv: (iv.lo, iv.hi)
    for n in range(cfg.depth + 3):
        stage = cantor_stage(n)
        cells = sorted((cylinder_interval(w) for w in all_words(n)), key=key)
        checks += 1
        if sorted(stage, key=key) != cells:
            failures.append({"stage": n})
        for iv in cells:
            checks += 1
            if iv.length() != Fraction(1, 3**n):
                failures.append({"stage": n, "interval": str(iv)})
    for _ in range(60):
        w = _random_word(rng, cfg.depth + 3)
        p = _random_point(rng)
        iv = cylinder_interval(w)
        checks += 1
        inside = iv.lo <= p.value() <= iv.hi
        if p.starts_with(w) and not inside:
            failures.append({"word": w, "point": str(p)})
    return not failures, {"checks": checks, "failures": failures[:5]}


def _suite_diam_law(fam, cfg, rng):
    checks, failures = 0, []
    for d in range(5):
        for w in all_words(d):
            checks += 1
            if diam(ClopenSet((w,))) != Fraction(1, 3 ** len(w)):
                failures.append({"word": w})
    for _ in range(80):
        w = _random_word(rng, 4)
        ext = w + "".join(rng.choice("02") for _ in range(rng.randint(0, 3)))
        gap = 2 * diam(ClopenSet((ext,))) < diam(ClopenSet((w,)))
        checks += 1
        if gap != (len(ext) >= len(w) + 1):
            failures.append({"outer": w, "inner": ext})
    return not failures, {"checks": checks, "failures": failures[:5]}


def _suite_family_determinism(fam, cfg, rng):
    one = type(fam)().export(n_max=12, i_max=6)
    two = type(fam)().export(n_max=12, i_max=6)
    same = json.dumps(one, sort_keys=True) == json.dumps(two, sort_keys=True)
    return same, {"checks": 1, "failures": [] if same else [{"law": "export_bytes"}]}


def _suite_distinctness(fam, cfg, rng):
    checks, failures = 0, []
    xs = {}
    ys = {}
    for n in range(cfg.n_max + 1):
        pair = fam.dense_pair(n)
        for label, point, seen in (("x", pair.x, xs), ("y", pair.y, ys)):
            checks += 1
            if point in seen:
                failures.append({"axis": label, "n": n, "clash": seen[point]})
            seen[point] = n
    approx = {}
    for n in range(min(cfg.n_max, 30) + 1):
        for i in range(min(cfg.i_max, 10) + 1):
            q = fam.approximant(n, i).point
            checks += 1
            if q in approx or q in xs:
                failures.append({"n": n, "i": i})
            approx[q] = (n, i)
    return not failures, {"checks": checks, "failures": failures[:5]}


def _suite_convergence(fam, cfg, rng):
    checks, failures = 0, []
    for n in range(cfg.n_max + 1):
        x = fam.dense_pair(n).x
        last = None
        for i in range(cfg.i_max + 1):
            d = distance(fam.approximant(n, i).point, x)
            checks += 1
            if not 0 < d < Fraction(1, n + 1):
                failures.append({"n": n, "i": i, "distance": str(d)})
            if last is not None and not d < last:
                failures.append({"n": n, "i": i, "law": "strict_decrease"})
            last = d
    return not failures, {"checks": checks, "failures": failures[:5]}


def _suite_enumeration(fam, cfg, rng):
    checks, failures = 0, []
    for d in range(1, 5):
        for w in all_words(d):
            n = fam.base_index(w)
            checks += 1
            if fam.base_word(n).word != w:
                failures.append({"word": w, "index": n})
    for n in range(201):
        base = fam.base_word(n)
        y = fam.dense_pair(n).y
        checks += 1
        if not y.starts_with(base.word):
            failures.append({"n": n, "law": "anchor_in_base"})
        checks += 1
        if fam.base_index(base.word) != n:
            failures.append({"n": n, "law": "roundtrip"})
    return not failures, {"checks": checks, "failures": failures[:5], "steps": fam.enumeration_steps()}


def _suite_density(fam, cfg, rng):
    checks, failures = 0, []
    cover = {}
    for w in all_words(cfg.depth):
        hit = None
        for n in range(4000):
            if fam.dense_pair(n).x.starts_with(w):
                hit = n
                break
        checks += 1
        if hit is None:
            failures.append({"word": w})
        else:
            cover[w] = hit
    index = max(cover.values()) if cover else None
    return not failures, {"checks": checks, "failures": failures, "cover_index": index}


def _suite_oracle_equivalence(fam, cfg, rng):
    checks, failures = 0, []
    sets = small_clopens(depth=2)
    pairs = [(a, b) for a in sets for b in sets]
    picks = rng.sample(range(len(pairs)), min(40, len(pairs)))
    depth1 = [c for c in sets if c.depth() <= 1]
    jobs = [(a, b) for a in depth1 for b in depth1]
    jobs += [pairs[i] for i in picks]
    from .images import piece_member

    for w_set, v_set in jobs:
        piece = project_rect(fam, w_set, v_set)
        exact = tuple(
            w for w in all_words(6) if piece_member(fam, piece, repr_point(w))
        )
        brute = brute_rect_trace(fam, w_set, v_set, cfg.truncation, trace_depth=6)
        checks += 1
        if exact != brute:
            failures.append({"w": str(w_set), "v": str(v_set)})
    return not failures, {"checks": checks, "failures": failures[:5]}


def _suite_decomposition(fam, cfg, rng):
    checks, failures = 0, []
    pool = probe_pool(fam, rng, cfg.probes)
    for t in range(cfg.suite_size):
        union = _random_rect_union(rng, cfg.depth)
        img = project_union(fam, union)
        try:
            dec = decompose(fam, img)
        except CertificationError as err:
            failures.append({"trial": t, "error": str(err)})
            continue
        probes = pool + certificate_points(fam, img)
        for p in probes:
            checks += 1
            if decomposition_member(fam, dec, p) != image_member(fam, img, p):
                failures.append({"trial": t, "point": str(p)})
                break
    return not failures, {"checks": checks, "failures": failures[:5]}


def _suite_lc2(fam, cfg, rng):
    checks, failures = 0, []
    for t in range(20):
        union = _random_rect_union(rng, cfg.depth)
        img = project_union(fam, union)
        cert = lc2_certificate(fam, img)
        extras = certificate_points(fam, img)
        checks += 1
        if not lc2_valid(fam, img, cert, probe_depth=4, extra_points=extras):
            failures.append({"trial": t})
    return not failures, {"checks": checks, "failures": failures[:5]}


def _suite_resolvability(fam, cfg, rng):
    checks, failures = 0, []
    fs = clopen_antichains(2)
    for t in range(12):
        union = _random_rect_union(rng, cfg.depth)
        img = project_union(fam, union)
        for f in fs:
            checks += 1
            if not resolvable_probe(fam, img, f):
                failures.append({"trial": t, "f": str(f)})
    return not failures, {"checks": checks, "failures": failures[:5]}


def _trivial_piece() -> RectUnion:
    return RectUnion(())


def _suite_witness(fam, cfg, rng):
    checks, failures = 0, []
    rects = [
        Rect(ClopenSet(("",)), ClopenSet(("",))),
        Rect(ClopenSet(("0",)), ClopenSet(("0",))),
        Rect(ClopenSet(("2",)), ClopenSet(("0",))),
        Rect(ClopenSet(("00",)), ClopenSet(("20",))),
        Rect(ClopenSet(("20",)), ClopenSet(("2",))),
        Rect(ClopenSet(("02",)), ClopenSet(("22",))),
    ]
    for rect in rects:
        cert = falsify_restriction(
            fam, _trivial_piece(), rect, budget=cfg.budget, samples=10
        )
        ok, clause = verify_witness(fam, cert, samples=10)
        checks += 1
        if not ok:
            failures.append({"rect": str(rect), "clause": clause})
        coarse = ClopenSet((cert.base_coarse,))
        fine = ClopenSet((cert.base_fine,))
        checks += 1
        if not 2 * diam(fine) < diam(coarse):
            failures.append({"rect": str(rect), "law": "diameter"})
    return not failures, {"checks": checks, "failures": failures[:5]}


WITNESS_MUTATIONS: list[tuple[str, str]] = [
    ("swap-order", "n_fine_gt_n_coarse"),
    ("detached-y-factor", "coarse_base_inside_y_factor"),
    ("fat-coarse", "diameter_gap"),
    ("detached-fine", "bases_nested"),
    ("complement-swallows-rect", "rect_inside_piece"),
    ("witness-not-in-x", "witness_in_x"),
    ("witness-borrowed", "witness_is_dense_pair"),
    ("truncated-missing", "missing_count"),
    ("forged-approximant", "[i=0] missing_identity"),
    ("evidence-in-fine", "[i=0] evidence_outside_fine_base"),
]


def mutate_witness(fam: Family, cert: WitnessCertificate, kind: str) -> WitnessCertificate:
    """Break exactly one clause of a valid certificate, by name."""
    if kind == "swap-order":
        return replace(cert, n_coarse=cert.n_fine, n_fine=cert.n_coarse)
    if kind == "detached-y-factor":
        off = ClopenSet((cert.base_coarse,)).complement()
        return replace(cert, rect=Rect(cert.rect.x_set, off))
    if kind == "fat-coarse":
        return replace(cert, base_coarse=cert.base_fine)
    if kind == "detached-fine":
        w = cert.base_fine
        return replace(cert, base_fine=flip(w[0]) + w[1:])
    if kind == "complement-swallows-rect":
        return replace(cert, piece_complement=RectUnion((cert.rect,)))
    if kind == "witness-not-in-x":
        return replace(
            cert,
            witness_x=cert.missing[0].point,
            witness_y=repr_point(cert.base_fine),
        )
    if kind == "witness-borrowed":
        return replace(cert, witness_x=fam.dense_pair(cert.n_coarse).x)
    if kind == "truncated-missing":
        return replace(cert, missing=cert.missing[:-1])
    if kind == "forged-approximant":
        first = cert.missing[0]
        p = first.point.prefix
        bad = CantorPoint(flip(p[0]) + p[1:], "0")
        return replace(cert, missing=(replace(first, point=bad),) + cert.missing[1:])
    if kind == "evidence-in-fine":
        first = cert.missing[0]
        forged = replace(first, evidence=repr_point(cert.base_fine))
        return replace(cert, missing=(forged,) + cert.missing[1:])
    raise ValueError(f"unknown mutation {kind!r}")


def _suite_witness_mutations(fam, cfg, rng):
    checks, failures = 0, []
    for rect in (
        Rect(ClopenSet(("",)), ClopenSet(("",))),
        Rect(ClopenSet(("2",)), ClopenSet(("0",))),
    ):
        cert = falsify_restriction(
            fam, _trivial_piece(), rect, budget=cfg.budget, samples=10
        )
        for kind, expected in WITNESS_MUTATIONS:
            mutated = mutate_witness(fam, cert, kind)
            ok, clause = verify_witness(fam, mutated, samples=len(cert.missing))
            checks += 1
            if ok or clause != expected:
                failures.append(
                    {"rect": str(rect), "mutation": kind, "clause": clause}
                )
    return not failures, {"checks": checks, "failures": failures[:5]}


SUITES = [
    ("core-normal-form-canonicity", _suite_normal_form),
    ("core-boolean-laws", _suite_boolean_laws),
    ("core-point-value-injective", _suite_value_injective),
    ("core-stage-cylinder-agreement", _suite_stage_agreement),
    ("core-diam-law", _suite_diam_law),
    ("family-determinism", _suite_family_determinism),
    ("family-distinctness", _suite_distinctness),
    ("family-approximant-convergence", _suite_convergence),
    ("family-enumeration-totality", _suite_enumeration),
    ("family-density", _suite_density),
    ("lab-oracle-equivalence", _suite_oracle_equivalence),
    ("lab-decomposition-soundness", _suite_decomposition),
    ("lab-lc2", _suite_lc2),
    ("lab-resolvability", _suite_resolvability),
    ("lab-witness", _suite_witness),
    ("lab-witness-mutations", _suite_witness_mutations),
]


def run_suite(name: str, fam: Family, cfg: RunConfig) -> SuiteResult:
    table = dict(SUITES)
    if name not in table:
        raise ValueError(f"unknown suite {name!r}")
    rng = random.Random(f"{cfg.seed}:{name}")
    try:
        passed, detail = table[name](fam, cfg, rng)
    except Exception as err:  # a crashed suite is a failed suite, not a crash
        passed, detail = False, {"error": f"{type(err).__name__}: {err}"}
    return SuiteResult(name=name, passed=passed, detail=detail)


def run_all(cfg: RunConfig, fault: str | None = None) -> dict:
    fam = make_family(fault)
    results = [run_suite(name, fam, cfg) for name, _ in SUITES]
    return {
        "config": cfg.as_dict(),
        "fault": fault,
        "suites": [
            {"name": r.name, "passed": r.passed, "detail": r.detail} for r in results
        ],
        "all_pass": all(r.passed for r in results),
    }
