"""Command line front end.

Subcommands::

    construct   emit the dense pairs, approximants and base assignments
    image       exact projection image of a rectangle union, decomposed
    falsify     search for a non-openness witness at a rectangle
    verify      recheck a witness certificate produced elsewhere
    check       run the named self-check suites

Exit codes: 0 success, 1 a verification or suite failed, 2 usage error,
3 search budget exhausted.  Defaults may be set via ``CANTORPROJ_*``
environment variables (``CANTORPROJ_DEPTH`` and so on); explicit flags win.
All JSON output is byte-deterministic for a fixed config.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .certify import CertificationError, decompose
from .family import Family, FamilyError
from .images import (
    PieceError,
    RectUnion,
    parse_rect_union,
    piece_member,
    project_union,
)
from .schema import CertificateFormatError
from .suites import FAULTS, RunConfig, run_all
from .witness import (
    SearchBudgetExceeded,
    falsify_restriction,
    verify_witness,
    witness_from_dict,
    witness_to_dict,
)
from .words import WordError, all_words, repr_point

ENV_PREFIX = "CANTORPROJ_"
INT_KNOBS = ("depth", "n_max", "i_max", "truncation", "budget", "seed")


class UsageError(Exception):
    pass


def _env_default(knob: str) -> int | None:
    raw = os.environ.get(ENV_PREFIX + knob.upper())
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{ENV_PREFIX}{knob.upper()} must be an integer, got {raw!r}")


def _config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    picked = {}
    for knob in INT_KNOBS:
        flag = getattr(args, knob, None)
        value = flag if flag is not None else _env_default(knob)
        if value is not None:
            picked[knob] = value
    return RunConfig(**{**cfg.as_dict(), **picked})


def _add_knobs(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--depth", type=int, default=None, help="trace and cell depth")
    sub.add_argument("--n-max", type=int, default=None, dest="n_max")
    sub.add_argument("--i-max", type=int, default=None, dest="i_max")
    sub.add_argument("--truncation", type=int, default=None, help="fibers kept by brute oracles")
    sub.add_argument("--budget", type=int, default=None, help="dense-pair scan bound")
    sub.add_argument("--seed", type=int, default=None)
    sub.add_argument("--out", default=None, help="write output here instead of stdout")
    sub.add_argument("--format", choices=("json", "text"), default="json")


def _emit(args: argparse.Namespace, text: str) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(args: argparse.Namespace, doc: dict) -> None:
    _emit(args, json.dumps(doc, sort_keys=True, indent=2) + "\n")


def cmd_construct(args: argparse.Namespace) -> int:
    cfg = _config(args)
    fam = Family()
    doc = fam.export(n_max=cfg.n_max, i_max=cfg.i_max)
    if args.format == "text":
        lines = [
            f"n={p['n']} x={p['a']} y={p['b']}" for p in doc["dense_pairs"]
        ]
        _emit(args, "\n".join(lines) + "\n")
    else:
        _emit_json(args, doc)
    return 0


def cmd_image(args: argparse.Namespace) -> int:
    cfg = _config(args)
    fam = Family()
    union = parse_rect_union(args.rect)
    img = project_union(fam, union)
    dec = decompose(fam, img)
    trace = sorted(
        w
        for w in all_words(cfg.depth)
        if any(piece_member(fam, piece, repr_point(w)) for piece in img.pieces)
    )
    doc = {
        "rect": union.as_dict(),
        "image": img.as_dict(),
        "decomposition": dec.as_dict(),
        "trace": {"depth": cfg.depth, "words": trace},
    }
    if args.format == "text":
        lines = [f"piece hull={piece.hull}" for piece in img.pieces]
        lines += [f"isolated {iso.seq}: {iso.point}" for iso in dec.isolated]
        lines.append(f"trace[{cfg.depth}]: {', '.join(trace) or 'none'}")
        _emit(args, "\n".join(lines) + "\n")
    else:
        _emit_json(args, doc)
    return 0


def cmd_falsify(args: argparse.Namespace) -> int:
    cfg = _config(args)
    fam = Family()
    union = parse_rect_union(args.rect)
    if len(union.rects) != 1:
        raise UsageError("falsify expects a single rectangle")
    complement = parse_rect_union(args.piece) if args.piece else RectUnion(())
    cert = falsify_restriction(
        fam, complement, union.rects[0], budget=cfg.budget, samples=args.samples
    )
    ok, clause = verify_witness(fam, cert, samples=args.samples)
    if not ok:
        _emit(args, f"self-verification failed at {clause}\n")
        return 1
    if args.verify_only:
        _emit_json(args, {"ok": True, "n_coarse": cert.n_coarse, "n_fine": cert.n_fine})
        return 0
    if args.format == "text":
        _emit(
            args,
            f"witness for {union.rects[0]}: coarse n={cert.n_coarse} "
            f"base={cert.base_coarse}, fine n={cert.n_fine} base={cert.base_fine}, "
            f"{len(cert.missing)} missing approximants\n",
        )
    else:
        _emit_json(args, witness_to_dict(cert))
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    fam = Family()
    if args.file == "-":
        raw = sys.stdin.read()
    else:
        with open(args.file, "r", encoding="utf-8") as fh:
            raw = fh.read()
    cert = witness_from_dict(json.loads(raw))
    samples = args.samples if args.samples is not None else len(cert.missing)
    ok, clause = verify_witness(fam, cert, samples=samples)
    doc = {"ok": ok, "clause": clause, "samples": samples}
    if args.format == "text":
        verdict = "ok" if ok else f"FAILED at {clause}"
        _emit(args, f"witness {verdict}\n")
    else:
        _emit_json(args, doc)
    return 0 if ok else 1


def cmd_check(args: argparse.Namespace) -> int:
    cfg = _config(args)
    report = run_all(cfg, fault=args.inject_fault)
    if args.format == "text":
        lines = [
            f"{s['name']}: {'PASS' if s['passed'] else 'FAIL'}"
            for s in report["suites"]
        ]
        lines.append("all suites passed" if report["all_pass"] else "FAILURES present")
        _emit(args, "\n".join(lines) + "\n")
    else:
        _emit_json(args, report)
    return 0 if report["all_pass"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cantorproj",
        description="exact projection counterexamples over the ternary Cantor set",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("construct", help="emit the generated family")
    _add_knobs(p)
    p.set_defaults(func=cmd_construct)

    p = subs.add_parser("image", help="project a rectangle union exactly")
    p.add_argument("rect", help="e.g. '0,2 x 00; 22 x ε'")
    _add_knobs(p)
    p.set_defaults(func=cmd_image)

    p = subs.add_parser("falsify", help="find a non-openness witness")
    p.add_argument("rect", help="a single rectangle 'W x V'")
    p.add_argument("--piece", default=None, help="piece complement as a rect union")
    p.add_argument("--samples", "-k", type=int, default=20)
    p.add_argument("--verify-only", action="store_true", dest="verify_only")
    _add_knobs(p)
    p.set_defaults(func=cmd_falsify)

    p = subs.add_parser("verify", help="recheck a witness certificate")
    p.add_argument("file", help="certificate path, or - for stdin")
    p.add_argument("--samples", "-k", type=int, default=None)
    _add_knobs(p)
    p.set_defaults(func=cmd_verify)

    p = subs.add_parser("check", help="run the self-check suites")
    p.add_argument("--inject-fault", choices=FAULTS, default=None, dest="inject_fault")
    _add_knobs(p)
    p.set_defaults(func=cmd_check)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except SearchBudgetExceeded as err:
        print(f"error: {err}", file=sys.stderr)
        return 3
    except (
        UsageError,
        PieceError,
        WordError,
        FamilyError,
        CertificateFormatError,
        json.JSONDecodeError,
        FileNotFoundError,
    ) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except CertificationError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
