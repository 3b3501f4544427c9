"""Command-line interface.

Exit codes: 0 when every check passes, 1 when a law or check fails, 2 on
malformed input or flags.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .table import CayleyTable, LoopError, format_table, parse_table, validate_table

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

ENCODING_HEADER = [
    "loop on B x A with B = C4 x C4 = <e1, e2> and A = GF(2)^6",
    "element (x, a) has index 64 * x + a",
    "B index of e1^k1 e2^k2 is k1 + 4 * k2 (bits: a1 + 2 a1' + 4 a2 + 8 a2')",
    "A bit order: c111 c222 c112 c121 c122 c212",
]
Q64_HEADER = [
    "quotient of the order-1024 loop by {1, e2^2} x span{c222, c122, c212}",
    "blocks labeled by minimal member, the identity block first",
]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- helpers --------------------------------------------------------------------

def _load(path: str, relabel: bool = False) -> CayleyTable:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror or exc}") from None
    try:
        raw, _ = parse_table(text)
        return validate_table(raw, label=Path(path).name, relabel_identity=relabel)
    except LoopError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _element(t: CayleyTable, token: str, what: str) -> int:
    try:
        v = int(token)
    except ValueError:
        raise UsageError(f"{what}: {token!r} is not an integer") from None
    if not 0 <= v < t.order:
        raise UsageError(f"{what}: {token!r} is outside 0..{t.order - 1}")
    return v


def _write_or_print(text: str, out: str | None) -> None:
    if out and out != "-":
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _emit(report, args) -> int:
    if getattr(args, "json", None):
        _write_or_print(report.to_json(), args.json)
        if args.json != "-":
            sys.stdout.write(report.render())
    else:
        sys.stdout.write(report.render())
    return EXIT_OK if report.passed else EXIT_FAIL


def _new_report(descriptor: str, args):
    from .report import Report

    return Report(descriptor, timings=getattr(args, "timings", False))


# -- subcommands ----------------------------------------------------------------

def cmd_validate(args) -> int:
    try:
        text = Path(args.file).read_text()
    except OSError as exc:
        raise UsageError(f"{args.file}: {exc.strerror or exc}") from None
    try:
        raw, _ = parse_table(text)
    except LoopError as exc:
        raise UsageError(f"{args.file}: {exc}") from None
    try:
        t = validate_table(raw, label=Path(args.file).name, relabel_identity=args.relabel)
    except LoopError as exc:
        print(f"invalid: {exc}")
        return EXIT_FAIL
    print(f"valid loop of order {t.order}")
    if args.output:
        Path(args.output).write_text(format_table(t))
    return EXIT_OK


def cmd_check(args) -> int:
    from .identities import LoopError as _LE, check_identity

    t = _load(args.file, args.relabel)
    law = args.law
    if law.startswith("minverse:"):
        law = "m_inverse:" + law.split(":", 1)[1]
    try:
        res = check_identity(t, law, mode=args.mode, samples=args.samples,
                             seed=args.seed, threads=args.threads)
    except _LE as exc:
        raise UsageError(str(exc)) from None
    rep = _new_report(t.label, args)
    rec = res.as_dict()
    rec["check"] = res.law
    rep.add(rec)
    return _emit(rep, args)


def cmd_structure(args) -> int:
    from .perm import mult_groups
    from .substructure import associator_subloop, commutant_center, nuclei, special_subloops

    t = _load(args.file, args.relabel)
    want_all = not (args.nuclei or args.center or args.associator_subloop or args.special or args.groups)
    rep = _new_report(t.label, args)
    if want_all or args.nuclei:
        nu = nuclei(t)
        rep.run(lambda: {"check": "nuclei", "passed": True,
                         **{k: list(v.members) for k, v in nu.items()}})
    if want_all or args.center:
        cz = commutant_center(t)
        rep.run(lambda: {"check": "center", "passed": True, "commutant": cz["C"],
                         "center": list(cz["Z"].members)})
    if want_all or args.associator_subloop:
        rep.run(lambda: {"check": "associator_subloop", "passed": True,
                         "members": list(associator_subloop(t).members)})
    groups = None
    if want_all or args.groups or args.special:
        groups = mult_groups(t)
    if want_all or args.groups:
        rep.run(lambda: {"check": "multiplication_groups", "passed": True,
                         "orders": {k: g.order() for k, g in sorted(groups.items())}})
    if want_all or args.special:
        rep.run(lambda: {"check": "special_subloops", "passed": True,
                         **special_subloops(t, groups)})
    return _emit(rep, args)


def cmd_isotope(args) -> int:
    from .isotopy import isotope_at

    t = _load(args.file, args.relabel)
    e = _element(t, args.at, "--at")
    try:
        res = isotope_at(t, args.side, e)
    except LoopError as exc:
        print(f"isotope is not a loop: {exc}")
        return EXIT_FAIL
    _write_or_print(format_table(res.table, [f"{args.side} isotope of {t.label} at {e}"]), args.output)
    return EXIT_OK


def cmd_quotient(args) -> int:
    from .substructure import NotNormal, quotient

    t = _load(args.file, args.relabel)
    tokens = [tok for tok in args.subloop.split(",") if tok.strip()]
    if not tokens:
        raise UsageError("--subloop: empty list")
    S = sorted({_element(t, tok.strip(), "--subloop") for tok in tokens})
    try:
        qm = quotient(t, S)
    except (NotNormal, LoopError) as exc:
        print(f"cannot form quotient: {exc}")
        return EXIT_FAIL
    _write_or_print(format_table(qm.table, [f"quotient of {t.label} by {len(S)}-element subloop",
                                            "blocks labeled by minimal member"]), args.output)
    return EXIT_OK


def cmd_paper_example(args) -> int:
    from .construction import build_q1024, build_q64

    q = build_q1024()
    if args.order == 1024:
        text = format_table(q, ENCODING_HEADER)
    else:
        text = format_table(build_q64(q).table, ENCODING_HEADER + Q64_HEADER)
    _write_or_print(text, args.output)
    return EXIT_OK


def cmd_suite(args) -> int:
    from .identities import NotMInverse, minverse_suite
    from .suites import NotBuchsteiner, PreconditionFailed, calculus_suite, theorem_suite

    t = _load(args.file, args.relabel)
    rep = _new_report(t.label, args)
    kind = args.kind
    try:
        if kind == "theorems":
            rep.run(lambda: theorem_suite(t, seed=args.seed))
        elif kind == "calculus":
            rep.run(lambda: calculus_suite(t, seed=args.seed))
        elif kind.startswith("minverse:"):
            try:
                m = int(kind.split(":", 1)[1])
            except ValueError:
                raise UsageError(f"--kind: {kind!r} needs an integer after 'minverse:'") from None
            rep.run(lambda: minverse_suite(t, m))
        else:
            raise UsageError(f"--kind: unknown suite {kind!r}")
    except (NotBuchsteiner, PreconditionFailed, NotMInverse) as exc:
        rep.add({"check": f"{kind}_precondition", "passed": False, "reason": str(exc),
                 "witness": getattr(exc, "witness", None)})
    return _emit(rep, args)


def cmd_verify(args) -> int:
    rep = _new_report("constructed loops (fast)" if args.fast else "constructed loops", args)
    verify_all(rep, fast=args.fast, seed=args.seed, threads=args.threads)
    return _emit(rep, args)


def verify_all(rep, fast: bool = False, seed: int = 0, threads: int = 1) -> None:
    """Build both loops and run every construction, law and suite check into ``rep``."""
    from .catalog import abelian
    from .construction import build_q1024, build_q64, published_kernel_normal_closure, verify_construction
    from .identities import check_identity, minverse_suite
    from .isotopy import is_isomorphic, right_isotope_table, wwip_isomorphism
    from .substructure import nuclei, quotient
    from .suites import calculus_suite, theorem_suite

    t0 = time.perf_counter()
    q = build_q1024()
    rep.add({"check": "q1024_valid_loop", "passed": q.order == 1024}, time.perf_counter() - t0)
    qm = build_q64(q)
    q64 = qm.table
    rep.add({"check": "q64_valid_loop", "passed": q64.order == 64})
    rep.run(lambda: [r.as_dict() for r in verify_construction(q, perturbations=1000, seed=seed)])
    rep.run(lambda: {"check": "published_kernel_normal_closure", "passed": True,
                     "closure_order": len(published_kernel_normal_closure(q)),
                     "note": "the listed four-vector kernel is not normal; Q64 uses an order-16 normal kernel"})

    mode = "sampled" if fast else "exhaustive"
    rep.run(lambda: {**check_identity(q, "buchsteiner", mode=mode, samples=10 ** 7, seed=seed,
                                      threads=threads).as_dict(), "check": "q1024_buchsteiner"})
    rep.run(lambda: {**check_identity(q64, "buchsteiner", mode="exhaustive").as_dict(),
                     "check": "q64_buchsteiner"})

    def q1024_nucleus():
        N = list(nuclei(q)["N"].members)
        qn = quotient(q, N).table
        iso = is_isomorphic(qn, abelian(4, 4))
        return {"check": "q1024_nucleus", "passed": N == list(range(64)) and iso is not None,
                "nucleus_order": len(N), "quotient_is_c4xc4": iso is not None}
    rep.run(q1024_nucleus)

    def q64_nucleus():
        N = list(nuclei(q64)["N"].members)
        qn = quotient(q64, N).table
        iso = is_isomorphic(qn, abelian(4, 2))
        sq_out = [x for x in range(64) if int(q64.mul[x, x]) not in N]
        return {"check": "q64_nucleus", "passed": len(N) == 8 and iso is not None and bool(sq_out),
                "nucleus_order": len(N), "quotient_is_c4xc2": iso is not None,
                "first_square_outside_nucleus": sq_out[0] if sq_out else None}
    rep.run(q64_nucleus)

    def not_cc(t, m):
        r = check_identity(t, "cc", mode=m, seed=seed, threads=threads)
        return {**r.as_dict(), "check": f"{t.label.lower()}_not_cc", "passed": not r.passed}
    rep.run(lambda: not_cc(q64, "exhaustive"))
    rep.run(lambda: not_cc(q, "sampled"))

    rep.run(lambda: [{**r, "check": "q64_" + r["check"]} for r in theorem_suite(q64, seed=seed)])
    rep.run(lambda: [{**r, "check": "q64_" + r["check"]} for r in calculus_suite(q64, seed=seed)])
    rep.run(lambda: [{**r, "check": "q1024_" + r["check"]} for r in calculus_suite(q, seed=seed)])

    def gloop():
        bad = [x for x in range(64) if not wwip_isomorphism(q64, x, check_buchsteiner=False)["verified"]]
        rng = np.random.default_rng(seed)
        sample = sorted(int(x) for x in rng.choice(64, size=8, replace=False))
        found = [x for x in sample
                 if is_isomorphic(q64, validate_table(right_isotope_table(q64, x))) is not None]
        return {"check": "q64_isotope_isomorphisms", "passed": not bad and found == sample,
                "canonical_map_failures": bad, "search_sample": sample, "search_found": found}
    rep.run(gloop)
    rep.run(lambda: [{**r, "check": "q64_" + r["check"]} for r in minverse_suite(q64, 1)])


# -- parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="buchloop", description="Finite loop toolkit for Buchsteiner loops.")
    p.add_argument("--version", action="version", version=f"buchloop {__version__}")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def with_table(sp):
        sp.add_argument("file")
        sp.add_argument("--relabel", action="store_true",
                        help="move the detected identity to index 0")

    def with_report(sp):
        sp.add_argument("--json", metavar="OUT", help="write the JSON report to OUT ('-' for stdout)")
        sp.add_argument("--timings", action="store_true", help="include per-record wall times")

    sp = sub.add_parser("validate", help="check the loop axioms")
    sp.add_argument("file")
    sp.add_argument("--relabel", action="store_true")
    sp.add_argument("-o", "--output", help="write the (relabeled) table")
    sp.set_defaults(fn=cmd_validate)

    sp = sub.add_parser("check", help="decide an identity")
    with_table(sp)
    with_report(sp)
    sp.add_argument("--law", required=True)
    sp.add_argument("--mode", choices=["exhaustive", "sampled"])
    sp.add_argument("--samples", type=int, default=10 ** 7)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    sp.set_defaults(fn=cmd_check)

    sp = sub.add_parser("structure", help="nuclei, center, associator subloop, groups")
    with_table(sp)
    with_report(sp)
    for flag in ("--nuclei", "--center", "--associator-subloop", "--special", "--groups"):
        sp.add_argument(flag, action="store_true")
    sp.set_defaults(fn=cmd_structure)

    sp = sub.add_parser("isotope", help="left or right isotope at an element")
    with_table(sp)
    sp.add_argument("--at", required=True)
    sp.add_argument("--side", choices=["left", "right"], default="right")
    sp.add_argument("-o", "--output")
    sp.set_defaults(fn=cmd_isotope)

    sp = sub.add_parser("quotient", help="quotient by a normal subloop")
    with_table(sp)
    sp.add_argument("--subloop", required=True, help="comma-separated members")
    sp.add_argument("-o", "--output")
    sp.set_defaults(fn=cmd_quotient)

    sp = sub.add_parser("paper-example", help="emit the constructed loop of order 1024 or 64")
    sp.add_argument("--order", type=int, choices=[1024, 64], required=True)
    sp.add_argument("-o", "--output")
    sp.set_defaults(fn=cmd_paper_example)

    sp = sub.add_parser("suite", help="run a check suite")
    with_table(sp)
    with_report(sp)
    sp.add_argument("--kind", required=True, help="theorems, calculus or minverse:<m>")
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(fn=cmd_suite)

    sp = sub.add_parser("verify-paper", help="build both loops and run every check")
    with_report(sp)
    sp.add_argument("--fast", action="store_true", help="sample the order-1024 law checks")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    sp.set_defaults(fn=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except UsageError as exc:
        print(f"buchloop: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
