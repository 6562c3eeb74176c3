"""Command-line front end.

Every subcommand loads its input, runs one analysis and prints a report.
Output is deterministic: no timestamps, stable ordering and canonical number
rendering.  Exit status is 0 on success, 1 when the input is rejected and 2
when an internal invariant fails.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import io
from .novikov import format_fraction

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2


class Report:
    """Text lines plus a structured payload for ``--format structured``."""

    def __init__(self, command: str):
        self.command = command
        self.lines: list[str] = []
        self.data: dict = {}
        self.status = EXIT_OK

    def add(self, line: str, **fields) -> None:
        self.lines.append(line)
        self.data.update(fields)

    def emit(self, fmt: str, stream) -> None:
        if fmt == "structured":
            payload = {"command": self.command, "status": self.status, "lines": self.lines, **self.data}
            stream.write(json.dumps(payload, indent=2, sort_keys=True, default=_jsonable) + "\n")
        else:
            stream.write("\n".join(self.lines) + ("\n" if self.lines else ""))


def _jsonable(x):
    if isinstance(x, Fraction):
        return io.fraction_json(x)
    raise TypeError(f"cannot serialise {type(x).__name__}")


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


# -- subcommands -------------------------------------------------------------


def cmd_analyze(args, rep: Report) -> None:
    from .frobenius import HypothesisViolation, TruncationInconclusive, frobenius_uniruled_verdict
    from .qring import pt_annihilation_test, q_minus_ideal_test

    spec = io.load_ring(args.path)
    ideal = q_minus_ideal_test(spec)
    rep.add(ideal.describe(), q_minus_ideal=ideal.ideal,
            witness=None if ideal.witness is None else list(ideal.witness))
    if not ideal.ideal:
        rep.add("note: a nonzero invariant of this form makes the manifold uniruled, "
                "so Q- is not an ideal of this table")
    ann = pt_annihilation_test(spec)
    rep.add(f"pt * Q- = 0: {'yes' if ann.annihilates else 'no (' + ann.witness + ')'}; "
            f"consistent with ideal test: {'yes' if ann.agrees_with_ideal_test else 'NO'}",
            pt_annihilates=ann.annihilates, annihilation_consistent=ann.agrees_with_ideal_test)
    try:
        verdict = frobenius_uniruled_verdict(spec)
    except HypothesisViolation as exc:
        rep.add(f"unit test in Q-: hypotheses fail ({exc})", unit_verdict="hypotheses fail")
    except TruncationInconclusive as exc:
        rep.add(f"unit test in Q-: inconclusive ({exc})", unit_verdict="inconclusive")
    else:
        rep.add(verdict.describe(), unit_verdict="agree" if verdict.agree else "disagree",
                unit_in_q_minus=verdict.unit_in_q_minus)
        if not verdict.agree:
            rep.status = EXIT_INTERNAL
    if not ann.agrees_with_ideal_test:
        rep.status = EXIT_INTERNAL


def cmd_invert(args, rep: Report) -> None:
    from .blowup import RRing, ShapeViolation, default_floor, invert_generic, lemma_u_inverse, lemma_u_pattern, \
        parse_relement, r_mul, render_relement

    ring = RRing(args.n, args.delta)
    try:
        u = parse_relement(args.element, ring)
    except ValueError as exc:
        raise io.InputError(str(exc), "element") from None
    floor = args.floor if args.floor is not None else default_floor(u, ring)
    try:
        pat = lemma_u_pattern(u, ring)
    except ShapeViolation as exc:
        pat = None
        rep.add(f"closed form: not applicable ({exc})", closed_form=False)
    if pat is None:
        inv = invert_generic(u, ring, floor)
    else:
        rep.add(f"closed form: r = {format_fraction(pat.r)}, k0 = {format_fraction(pat.kappa0)}",
                closed_form=True, r=pat.r, kappa0=pat.kappa0)
        inv = lemma_u_inverse(u, ring, floor)
        if not inv.agrees_with(invert_generic(u, ring, floor), floor):
            rep.status = EXIT_INTERNAL
            rep.add("closed form and generic inverse DISAGREE")
    check = r_mul(u, inv, ring, floor)
    ok = check.agrees_with(type(u).one(ring), floor)
    rep.add(f"floor: {format_fraction(floor)}", floor=floor)
    rep.add(f"inverse: {render_relement(inv)}", inverse=render_relement(inv))
    rep.add(f"u * inverse = 1 above the floor: {'yes' if ok else 'NO'}", verified=ok)
    if not ok:
        rep.status = EXIT_INTERNAL


def cmd_seidel(args, rep: Report) -> None:
    from .blowup import RRing, exceptional_table
    from .seidel import extract_inverse_witness, k2_relations_check, kappa0_extract, su_unit_normalize

    loaded = io.load_seidel_file(args.path)
    els = loaded["elements"]
    for key in sorted(els):
        rep.add(f"{key}: k0 = {format_fraction(kappa0_extract(els[key]))}")
    rep.data["kappa0"] = {key: kappa0_extract(els[key]) for key in sorted(els)}
    needed = ("s", "s_inv", "s_blow", "s_blow_inv")
    if all(k in els for k in needed):
        report = k2_relations_check(*(els[k] for k in needed))
        rep.add(report.render(), identities_hold=report.all_hold)
        if not report.all_hold:
            rep.status = EXIT_INTERNAL
    if loaded["blowup"] is not None and "s_blow" in els:
        n, delta = loaded["blowup"]
        ring = RRing(n, delta)
        blow = exceptional_table(n, delta, associativity="ignore")
        s_blow = els["s_blow"]
        k0 = kappa0_extract(s_blow)
        floor = args.floor if args.floor is not None else k0 - 20 * ring.delta
        norm = su_unit_normalize(s_blow, ring, blow, floor)
        w = extract_inverse_witness(norm.u, ring, s_blow.loop, norm.kappa0)
        rep.add(f"normalized unit: r = {format_fraction(norm.r)}, k0 = {format_fraction(norm.kappa0)}")
        rep.add(f"witness: {format_fraction(w.coefficient)}*s^{w.s_power}*t^({format_fraction(w.t_exponent)}) "
                f"forces {w.invariant} with energy {format_fraction(w.class_energy)}",
                witness={"s_power": w.s_power, "t_exponent": w.t_exponent, "coefficient": w.coefficient,
                         "energy": w.class_energy, "invariant": w.invariant})


def cmd_dim(args, rep: Report) -> None:
    from .gwcalc import cut_down_dimension, vanishing_by_dimension

    space, symbols = io.load_dimension_file(args.path)
    rows = []
    for sym in symbols:
        v = vanishing_by_dimension(sym, space)
        dim = cut_down_dimension(sym, space)
        if v:
            verdict = f"forced zero by {v.rule}: {v.reason}"
        else:
            verdict = "undetermined"
        rep.lines.append(f"{sym.render()}: dimension {dim}; {verdict}")
        rows.append({"symbol": sym.render(), "dimension": dim, "forced_zero": bool(v),
                     "rule": v.rule if v else None})
    rep.data["symbols"] = rows


def cmd_decompose(args, rep: Report) -> None:
    from .gwcalc import decomposition_enumerate

    target, case = io.load_case(args.path)
    result = decomposition_enumerate(target, case)
    rep.add(f"target: {target.render()}")
    rep.lines.extend(result.render().split("\n"))
    rep.data["survivors"] = [s.render() for s in result.survivors]
    rep.data["discarded"] = [[s.render(), reason] for s, reason in result.discarded]


def cmd_frobenius(args, rep: Report) -> None:
    from .frobenius import analyze

    alg = io.load_algebra(args.path)
    report = analyze(alg)
    rep.lines.extend(report.render(alg).split("\n"))
    rep.data["nondegenerate"] = report.nondegenerate
    rep.data["residue_degrees"] = list(report.residue_degrees)
    if report.frob_verdict is not None:
        p_ann, has_unit = report.frob_verdict
        rep.data["unit_criterion_holds"] = p_ann == (not has_unit)


def cmd_selftest(args, rep: Report) -> None:
    from .acceptance import run_all

    results = run_all(args.seed)
    rep.add(f"seed: {args.seed}", seed=args.seed)
    for res in results:
        rep.lines.append(res.line())
    rep.data["criteria"] = [{"number": r.number, "passed": r.passed} for r in results]
    if not all(r.passed for r in results):
        rep.status = EXIT_INTERNAL


COMMANDS = {
    "analyze": (cmd_analyze, "scan a ring table for the Q- ideal property and a unit in Q-"),
    "invert": (cmd_invert, "invert an element of the blow-up quotient ring"),
    "seidel": (cmd_seidel, "check exponent identities and the witness pipeline for Seidel elements"),
    "dim": (cmd_dim, "apply the vanishing rules to invariant symbols"),
    "decompose": (cmd_decompose, "enumerate the terms of a degeneration formula instance"),
    "frobenius": (cmd_frobenius, "analyze a finite-dimensional algebra with a functional"),
    "selftest": (cmd_selftest, "run the acceptance suite"),
}


def build_parser() -> argparse.ArgumentParser:
    from .acceptance import DEFAULT_SEED

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--floor", type=_rational, default=None, help="working floor (rational)")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for randomized checks")
    common.add_argument("--format", choices=("text", "structured"), default="text")
    parser = argparse.ArgumentParser(prog="qhalg", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_fn, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text, parents=[common])
        if name == "invert":
            p.add_argument("--n", type=int, required=True)
            p.add_argument("--delta", type=_rational, default=Fraction(1))
            p.add_argument("element", help='e.g. "1 + s*t^(5)"')
        elif name != "selftest":
            p.add_argument("path")
    return parser


def run(argv=None, stdout=None, stderr=None) -> int:
    from .frobenius import HypothesisViolation, LemmaViolation
    from .qring import SpecError

    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    rep = Report(args.command)
    try:
        COMMANDS[args.command][0](args, rep)
    except io.InputError as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except (LemmaViolation, AssertionError) as exc:
        stderr.write(f"internal invariant violated: {exc}\n")
        return EXIT_INTERNAL
    except (SpecError, HypothesisViolation, ValueError, LookupError, ArithmeticError) as exc:
        stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_INPUT
    rep.emit(args.format, stdout)
    return rep.status


def main(argv=None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
