"""Command-line front end.

Each subcommand reads one item from its argument or, failing that, from
standard input. Exit status: 0 success, 1 domain failure, 2 parse error.
Output is assembled first and printed only on success.
"""
from __future__ import annotations

import argparse
import sys

from .inference import InternalSoundnessFailure, infer_checked
from .itypes import Arrow, TypeU, canonical_renaming, canonicalize
from .oracle import EnumBudget, sweep
from .principality import CType, ReconFailure, analyze, fo, recon
from .syntax import (ParseError, parse_context, parse_term, parse_type, parse_typing,
                     print_context, print_term, print_type, print_typing, print_u)
from .terms import FuelExhausted, is_beta_nf, normalize
from .typing_rules import (RuleViolation, SystemId, check_derivation, from_sexpr,
                           sr_counterexample, to_sexpr)


class DomainFailure(Exception):
    pass


class DerivationSyntaxError(Exception):
    pass


def _read(args) -> str:
    text = args.input if args.input is not None else sys.stdin.read()
    return text.strip()


def _first_line(text: str) -> str:
    return text.splitlines()[0] if text else ""


def cmd_parse(args) -> list[str]:
    text = _read(args)
    if args.kind == "term":
        return [print_term(parse_term(text))]
    if args.kind == "type":
        return [print_type(parse_type(text))]
    if args.kind == "context":
        return [print_context(parse_context(text))]
    return [print_typing(parse_typing(text))]


def cmd_normalize(args) -> list[str]:
    m = parse_term(_read(args))
    try:
        return [print_term(normalize(m, fuel=args.fuel))]
    except FuelExhausted as exc:
        raise DomainFailure(f"fuel exhausted after {exc.steps} steps") from exc


def cmd_infer(args) -> list[str]:
    m = parse_term(_read(args))
    if not is_beta_nf(m):
        if not args.normalize_first:
            raise DomainFailure("not a beta-normal form (use --normalize-first)")
        try:
            m = normalize(m, fuel=args.fuel)
        except FuelExhausted as exc:
            raise DomainFailure(f"fuel exhausted after {exc.steps} steps") from exc
    try:
        t, d = infer_checked(m)
    except InternalSoundnessFailure as exc:
        raise DomainFailure(str(exc)) from exc
    d = d.map_types(canonical_renaming(t))
    return [print_typing(canonicalize(t)), to_sexpr(d)]


def cmd_recon(args) -> list[str]:
    g, t = parse_typing(_first_line(_read(args)))
    try:
        n, rest = recon_checked(g, t)
    except ReconFailure as exc:
        raise DomainFailure(exc.tag) from exc
    return [print_term(n)]


def recon_checked(g, t):
    """Top-level recon: a nonempty leftover is a failure, as it is under a binder."""
    n, rest = recon(g, t)
    if rest:
        raise ReconFailure("leftover-nonempty", print_context(rest))
    return n, rest


def cmd_check(args) -> list[str]:
    if args.derivation == "-":
        text = sys.stdin.read()
    else:
        with open(args.derivation, encoding="utf-8") as fh:
            text = fh.read()
    try:
        d = from_sexpr(text)
    except ParseError:
        raise
    except ValueError as exc:
        raise DerivationSyntaxError(str(exc)) from exc
    system = SystemId(args.system)
    try:
        root = check_derivation(d, system)
    except RuleViolation as exc:
        raise DomainFailure(str(exc)) from exc
    return [f"ok {system.value}: {print_typing(root)}"]


def _max_width(x) -> int:
    if isinstance(x, TypeU):
        return max([len(x)] + [_max_width(i) for i in x.items])
    if isinstance(x, Arrow):
        return max(_max_width(x.left), _max_width(x.right))
    return 1


def cmd_analyze(args) -> list[str]:
    g, t = parse_typing(_first_line(_read(args)))
    width = max([_max_width(t)] + [_max_width(e) for e in g])
    if width > args.max_width:
        raise DomainFailure(f"intersection width {width} exceeds the cap of {args.max_width}")
    try:
        c = CType(g, t)
    except ValueError as exc:
        raise DomainFailure(f"not a C-type: {exc}") from exc
    out = [f"{name}: {'true' if value else 'false'}" for name, value in analyze(c).items()]
    if not isinstance(t, Arrow):
        entries = ", ".join(f"({e.position}, {print_u(e.entry)})" for e in fo(t, g))
        out.append(f"fo: {{{entries}}}")
    return out


def cmd_selftest(args) -> list[str]:
    budget = EnumBudget(max_term_size=args.max_size, max_free_index=args.max_index)
    report = sweep(budget, completeness_size=args.completeness_size)
    lines = report.summary().splitlines()
    if not report.ok:
        raise DomainFailure("\n".join(lines))
    return lines


def cmd_sr_demo(args) -> list[str]:
    r = sr_counterexample()
    return [
        f"redex:      {print_term(r.redex)}",
        f"contractum: {print_term(r.contractum)}",
        f"before:     {print_typing(r.before)}",
        f"after:      {print_typing(r.after)}",
        f"before context: {print_context(r.before.context)}",
        f"after context:  {print_context(r.after.context)}",
        f"contractum typeable under the before context: {'no' if r.contractum_rejects_before_context else 'yes'}",
        f"redex typeable under the after context: {'no' if r.redex_rejects_after_context else 'yes'}",
        f"subject reduction fails: {str(r.subject_reduction_fails).lower()}",
        f"subject expansion fails: {str(r.subject_expansion_fails).lower()}",
        "redex derivation (SM):",
        to_sexpr(r.before_derivation),
    ]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dbpt", description="de Bruijn intersection types: inference, "
                                "reconstruction and principality checks")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_, takes_input=True):
        s = sub.add_parser(name, help=help_)
        if takes_input:
            s.add_argument("input", nargs="?", help="text to read (default: standard input)")
        s.set_defaults(func=func)
        return s

    s = add("parse", cmd_parse, "parse and print in canonical form")
    s.add_argument("--as", dest="kind", choices=["term", "type", "context", "typing"], default="term")
    s = add("normalize", cmd_normalize, "leftmost-outermost normal form")
    s.add_argument("--fuel", type=int, default=10_000)
    s = add("infer", cmd_infer, "principal typing and its derivation")
    s.add_argument("--normalize-first", action="store_true")
    s.add_argument("--fuel", type=int, default=10_000)
    add("recon", cmd_recon, "rebuild a normal form from 'ctx |- type' on the first line")
    s = add("check", cmd_check, "validate an s-expression derivation", takes_input=False)
    s.add_argument("--system", choices=[x.value for x in SystemId], default="smr")
    s.add_argument("--derivation", required=True, help="file name, or - for standard input")
    s = add("analyze", cmd_analyze, "closed / fc / mc / complete / principal for 'ctx |- type'")
    s.add_argument("--max-width", type=int, default=8,
                   help="refuse inputs with a wider intersection (held decompositions are exponential)")
    s = add("selftest", cmd_selftest, "exhaustive property sweep", takes_input=False)
    s.add_argument("--max-size", type=int, default=5)
    s.add_argument("--max-index", type=int, default=2)
    s.add_argument("--completeness-size", type=int, default=0)
    add("sr-demo", cmd_sr_demo, "subject reduction / expansion counterexample", takes_input=False)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        lines = args.func(args)
    except (ParseError, DerivationSyntaxError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except DomainFailure as exc:
        print(f"fail: {exc}")
        return 1
    print("\n".join(lines))
    return 0


if __name__ == "__main__":
    sys.exit(main())
