"""Command-line front end.

Exit codes: 0 verdict true / verified, 1 verdict false, 2 input error,
3 internal verification defect.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Optional, Sequence

from . import __version__
from .certificates import (
    coprime_certificate,
    ideal_certificate,
    imp_certificate,
    rcf_certificate,
    verify_document,
)
from .closedloop import BLOCK_NAMES, stabilizes
from .codec import (
    FORMAT,
    InputError,
    ProblemFile,
    decode_rcf,
    decode_ratfunc,
    digest,
    encode_matrix,
    encode_ratfunc,
    load_json,
    load_problem,
)
from .exactalg import RatFunc
from .fixtures import FIXTURES, load_fixture, regulation_problem
from .ideals import VerificationDefect, ideal_generator, scalar_coprime_factorization
from .parse import ParseError
from .ratmat import DimensionError
from .regulation import (
    EntryFailure,
    NotCoprimeFactorization,
    imp_check,
    imp_check_classical,
    imp_check_via_generator,
    is_disturbance_rejecting,
    is_regulating,
    rcf_bezout_for_stable_plant,
    robustness_probe,
)

EXIT_TRUE, EXIT_FALSE, EXIT_INPUT, EXIT_DEFECT = 0, 1, 2, 3

BLOCK_LABELS = {
    "e_from_r": "(I-PC)^-1",
    "e_from_d": "(I-PC)^-1 P",
    "u_from_r": "C(I-PC)^-1",
    "u_from_d": "(I-CP)^-1",
}


class Report:
    """Accumulates a verdict report; rendered as text and optionally JSON."""

    def __init__(self, command: Sequence[str]):
        self.doc: dict[str, Any] = {
            "format": FORMAT,
            "tool": "rorcert",
            "version": __version__,
            "command": list(command),
            "input_digest": None,
            "verdicts": {},
            "witnesses": [],
            "certificates": [],
        }
        self.lines: list[str] = []

    def say(self, line: str = "") -> None:
        self.lines.append(line)

    def verdict(self, name: str, value: bool) -> None:
        self.doc["verdicts"][name] = value
        self.say(f"{name}: {'TRUE' if value else 'FALSE'}")

    def text(self) -> str:
        return "\n".join(self.lines) + "\n"


def _pair(ij) -> list[int]:
    return [ij[0] + 1, ij[1] + 1]


def _verdict_witness(block: str, ij, v) -> dict:
    return {
        "block": BLOCK_LABELS.get(block, block),
        "index": _pair(ij),
        "reason": v.reason.value,
        "denominator": encode_ratfunc(RatFunc(v.denominator))["num"] if v.denominator is not None else None,
        "routh_row": v.routh_row,
    }


def _entry_failure(f: EntryFailure) -> dict:
    w = _verdict_witness(f.block, f.index, f.verdict)
    w["entry"] = _pair(f.entry) if f.entry is not None else None
    w["theta"] = encode_ratfunc(f.theta)
    return w


def _load(args) -> ProblemFile:
    if getattr(args, "fixture", None):
        if getattr(args, "problem", None):
            raise InputError("give either a problem file or --fixture, not both")
        return load_fixture(args.fixture)
    if not getattr(args, "problem", None):
        raise InputError("a problem file or --fixture is required")
    return load_problem(args.problem)


def _stability(rep: Report, pf: ProblemFile) -> bool:
    srep = stabilizes(pf.plant, pf.controller)
    rep.verdict("stabilizes", srep.stable)
    if not srep.well_posed:
        rep.doc["witnesses"].append({"reason": "ill-posed: det(I - PC) = 0"})
        rep.say("  interconnection is ill-posed: det(I - PC) = 0")
        return False
    total = sum(b.rows * b.cols for b in srep.blocks.as_dict().values())
    rep.doc["closed_loop_entries_checked"] = total
    rep.say(f"  closed-loop entries checked: {total}")
    for name in BLOCK_NAMES:
        for ij, v in srep.failures.get(name, []):
            rep.doc["witnesses"].append(_verdict_witness(name, ij, v))
            rep.say(f"  unstable {BLOCK_LABELS[name]} entry {tuple(_pair(ij))}: {v.reason.value}"
                    f" (denominator {v.denominator}, Routh row {v.routh_row})")
    return srep.stable


def cmd_check(args, rep: Report) -> int:
    pf = _load(args)
    rep.doc["input_digest"] = pf.digest()
    prob = regulation_problem(pf)
    what = args.what

    if what == "stabilizes":
        return EXIT_TRUE if _stability(rep, pf) else EXIT_FALSE

    if what in ("regulate", "reject"):
        srep = stabilizes(pf.plant, pf.controller)
        if not srep.well_posed:
            rep.verdict("regulating" if what == "regulate" else "disturbance_rejecting", False)
            rep.doc["witnesses"].append({"reason": "ill-posed: det(I - PC) = 0"})
            return EXIT_FALSE
        if what == "regulate":
            ok = is_regulating(prob, srep.blocks)
            rep.verdict("regulating", ok)
        else:
            ok = is_disturbance_rejecting(prob, srep.blocks)
            rep.verdict("disturbance_rejecting", ok)
        return EXIT_TRUE if ok else EXIT_FALSE

    # what == "imp"
    if args.classical:
        return _check_classical(args, rep, pf, prob)
    if args.via == "generator":
        r = imp_check_via_generator(prob)
        rep.verdict("stabilizes", r.stability.stable)
        rep.doc["generator"] = encode_ratfunc(r.generator)
        rep.say(f"  ideal generator g = {r.generator}")
        gens = [theta for _, theta in prob.entries()]
        rep.doc["certificates"].append(ideal_certificate(gens, r.generator))
        for c in r.certificates:
            rep.doc["certificates"].append(imp_certificate(c.theta, c.A, c.B, prob.C))
            rep.say("  certificate g*I = A + B*C verified")
        rep.doc["witnesses"].extend(_entry_failure(f) for f in r.failures)
        for f in r.failures:
            rep.say(f"  g*{BLOCK_LABELS[f.block]} unstable at {tuple(_pair(f.index))}")
        rep.verdict("imp_generator", r.holds)
        return EXIT_TRUE if r.holds else EXIT_FALSE

    r = imp_check(prob)
    rep.verdict("stabilizes", r.stability.stable)
    for c in r.certificates:
        rep.doc["certificates"].append(imp_certificate(c.theta, c.A, c.B, prob.C, _pair(c.entry)))
        rep.say(f"  entry {tuple(_pair(c.entry))}: theta = {c.theta}; certificate verified")
    seen = set()
    for f in r.failures:
        rep.doc["witnesses"].append(_entry_failure(f))
        key = (f.entry, f.block)
        if key not in seen:
            seen.add(key)
            rep.say(f"  entry {tuple(_pair(f.entry))}: theta = {f.theta}; theta*{BLOCK_LABELS[f.block]}"
                    f" unstable (denominator {f.verdict.denominator})")
    rep.doc["certificate_count"] = len(r.certificates)
    rep.verdict("imp", r.holds)
    return EXIT_TRUE if r.holds else EXIT_FALSE


def _check_classical(args, rep: Report, pf: ProblemFile, prob) -> int:
    rcf = None
    if args.rcf:
        rcf = decode_rcf(load_json(args.rcf))
    elif pf.rcf is not None:
        rcf = pf.rcf
    rcf_tuple = None
    if rcf is not None:
        N, D = rcf["N"], rcf["D"]
        if "X" in rcf:
            X, Y = rcf["X"], rcf["Y"]
        else:
            try:
                X, Y = rcf_bezout_for_stable_plant(prob.P, N, D)
            except ValueError as exc:
                raise NotCoprimeFactorization(f"cannot construct Bezout witnesses: {exc}") from exc
        rcf_tuple = (N, D, X, Y)
    r = imp_check_classical(prob, rcf_tuple)
    rep.verdict("stabilizes", r.stability.stable)
    gens = [theta for _, theta in prob.entries()]
    g = ideal_generator(gens)
    fac = scalar_coprime_factorization(g)
    rep.doc["internal_model"] = encode_ratfunc(r.d)
    rep.say(f"  internal model d = {r.d}")
    rep.doc["certificates"].append(ideal_certificate(gens, g))
    rep.doc["certificates"].append(coprime_certificate(fac.g, fac.N, fac.D, fac.x, fac.y))
    if r.certificate is not None:
        c = r.certificate
        rep.doc["certificates"].append(imp_certificate(c.theta, c.A, c.B, prob.C))
        rep.say("  certificate d^-1*I = A0 + B0*C verified")
    rep.doc["witnesses"].extend(_entry_failure(f) for f in r.failures)
    if rcf_tuple is not None:
        rep.doc["certificates"].append(rcf_certificate(prob.C, *rcf_tuple))
        rep.doc["divisible"] = r.divisible
        rep.doc["D0"] = encode_matrix(r.D0)
        rep.say("  right coprime factorization verified")
        rep.say(f"  d divides every entry of D: {r.divisible}")
        rep.say("  D0 = d^-1 D =")
        for line in str(r.D0).splitlines():
            rep.say("    " + line)
        if r.divisibility_failures:
            rep.doc["witnesses"].append({"divisibility_failures": [_pair(ij) for ij in r.divisibility_failures]})
    rep.verdict("classical", r.holds)
    return EXIT_TRUE if r.holds else EXIT_FALSE


def cmd_ideal(args, rep: Report) -> int:
    if args.gens:
        gens = [decode_ratfunc(t) for t in args.gens]
        rep.doc["input_digest"] = digest([encode_ratfunc(f) for f in gens])
    else:
        pf = _load(args)
        rep.doc["input_digest"] = pf.digest()
        gens = [e for _, e in pf.generator.items()]
    if all(f.is_zero() for f in gens):
        raise InputError("all generator entries are zero")
    g = ideal_generator(gens)
    rep.doc["generator"] = encode_ratfunc(g)
    rep.doc["certificates"].append(ideal_certificate(gens, g))
    rep.say(f"generator: {g}")
    rep.verdict("verified", True)
    return EXIT_TRUE


def cmd_coprime(args, rep: Report) -> int:
    g = decode_ratfunc(args.expr)
    if g.is_zero():
        raise InputError("cannot factor the zero function")
    rep.doc["input_digest"] = digest(encode_ratfunc(g))
    fac = scalar_coprime_factorization(g)
    rep.doc["certificates"].append(coprime_certificate(fac.g, fac.N, fac.D, fac.x, fac.y))
    for name in ("g", "N", "D", "x", "y"):
        rep.say(f"{name} = {getattr(fac, name)}")
    rep.verdict("verified", True)
    return EXIT_TRUE


def cmd_verify(args, rep: Report) -> int:
    doc = load_json(args.file)
    rep.doc["input_digest"] = digest(doc)
    results = verify_document(doc)
    ok = all(r.ok for r in results)
    rep.doc["checks"] = [{"index": r.index, "kind": r.kind, "ok": r.ok, "reason": r.reason} for r in results]
    for r in results:
        rep.say(f"certificate {r.index} ({r.kind}): {'ok' if r.ok else 'REJECTED: ' + r.reason}")
    rep.verdict("verified", ok)
    return EXIT_TRUE if ok else EXIT_FALSE


def cmd_probe(args, rep: Report) -> int:
    if args.samples < 0 or args.degree < 0:
        raise InputError("--samples and --degree must be nonnegative")
    pf = _load(args)
    rep.doc["input_digest"] = pf.digest()
    prob = regulation_problem(pf)
    if not stabilizes(prob.P, prob.C).stable:
        rep.verdict("stabilizes", False)
        return EXIT_FALSE
    r = robustness_probe(prob, args.samples, args.degree, args.seed)
    rep.doc["probe"] = {
        "samples": r.samples,
        "skipped_degenerate": r.skipped,
        "stabilized": r.stabilized,
        "regulated": r.regulated,
        "disturbance_rejected": r.rejected,
        "imp": r.imp,
        "seed": args.seed,
        "degree": args.degree,
        "violations": r.violations,
        "regulation_failures": r.regulation_failures,
    }
    rep.say(f"samples: {r.samples} (degenerate skipped: {r.skipped})")
    rep.say(f"stabilized: {r.stabilized}/{r.checked}")
    rep.say(f"regulated: {r.regulated}/{r.checked}")
    rep.say(f"disturbance rejected: {r.rejected}/{r.checked}")
    rep.say(f"internal model present: {r.imp}")
    for v in r.violations:
        rep.say("  VIOLATION " + v)
    rep.verdict("probe_passed", r.passed)
    return EXIT_TRUE if r.passed else EXIT_FALSE


def _add_problem_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("problem", nargs="?", help="problem file (JSON)")
    p.add_argument("--fixture", choices=sorted(FIXTURES), help="use a built-in problem")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rorcert", description=__doc__.splitlines()[0] if __doc__ else None)
    parser.add_argument("--version", action="version", version=f"rorcert {__version__}")
    parser.add_argument("--json", metavar="PATH", help="also write the report as JSON")
    sub = parser.add_subparsers(dest="group", required=True)

    check = sub.add_parser("check", help="closed-loop and regulation verdicts")
    check.add_argument("what", choices=["stabilizes", "regulate", "reject", "imp"])
    _add_problem_args(check)
    check.add_argument("--via", choices=["entries", "generator"], default="entries")
    check.add_argument("--classical", action="store_true", help="minimal internal model / divisibility form")
    check.add_argument("--rcf", metavar="FILE", help="right coprime factorization of C (N, D[, X, Y])")
    check.add_argument("--json", metavar="PATH", default=argparse.SUPPRESS)

    ideal = sub.add_parser("ideal", help="fractional ideal generator")
    ideal.add_argument("what", choices=["generator"])
    _add_problem_args(ideal)
    ideal.add_argument("--gens", nargs="+", metavar="EXPR", help="generators given as expressions")
    ideal.add_argument("--json", metavar="PATH", default=argparse.SUPPRESS)

    cop = sub.add_parser("coprime", help="scalar coprime factorization over S")
    cop.add_argument("what", choices=["scalar"])
    cop.add_argument("expr")
    cop.add_argument("--json", metavar="PATH", default=argparse.SUPPRESS)

    ver = sub.add_parser("verify", help="independent certificate checker")
    ver.add_argument("what", choices=["certificate"])
    ver.add_argument("file")
    ver.add_argument("--json", metavar="PATH", default=argparse.SUPPRESS)

    probe = sub.add_parser("probe", help="robustness evidence over perturbed plants")
    _add_problem_args(probe)
    probe.add_argument("--samples", type=int, default=100)
    probe.add_argument("--degree", type=int, default=2)
    probe.add_argument("--seed", type=int, default=0)
    probe.add_argument("--json", metavar="PATH", default=argparse.SUPPRESS)
    return parser


COMMANDS = {"check": cmd_check, "ideal": cmd_ideal, "coprime": cmd_coprime, "verify": cmd_verify, "probe": cmd_probe}


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> tuple[int, dict]:
    """Run one command; returns ``(exit code, report document)``."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (EXIT_INPUT if exc.code else EXIT_TRUE), {}
    rep = Report(argv)
    try:
        code = COMMANDS[args.group](args, rep)
    except VerificationDefect as exc:
        print(f"internal verification defect: {exc}", file=stderr)
        return EXIT_DEFECT, rep.doc
    except NotCoprimeFactorization as exc:
        print(f"not a right coprime factorization: {exc}", file=stderr)
        return EXIT_INPUT, rep.doc
    except (InputError, ParseError, DimensionError) as exc:
        print(f"input error: {exc}", file=stderr)
        return EXIT_INPUT, rep.doc
    stdout.write(rep.text())
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rep.doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return code, rep.doc


def main(argv: Optional[Sequence[str]] = None) -> int:
    code, _ = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
