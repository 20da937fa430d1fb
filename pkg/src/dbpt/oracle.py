"""Exhaustive small-scale enumerators and the property sweep.

Everything here is deterministic: enumeration is by increasing size, and
within a size by a fixed constructor order, so counts are stable across runs.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator

from .inference import (InternalSoundnessFailure, NoWitness, completeness_witness,
                        infer, infer_checked)
from .itypes import (NIL, OMEGA, Arrow, TVar, TypeT, TypeU, Typing,
                     apply_subst, arrows, ctx, ctx_and, omegas, type_size, typing_alpha_equiv,
                     type_vars, typing_size)
from .principality import (CType, ReconFailure, fo, in_c, in_t_nf,
                           is_closed, is_complete, is_finally_closed,
                           is_minimally_closed, is_principal, recon)
from .syntax import print_term, print_typing
from .terms import Abs, App, Index, NotNormal, Term, is_beta_nf, size, spine
from .typing_rules import (NotDerivable, RuleViolation, SystemId, check_derivation,
                           check_nf_typing, is_var_r_type, relevant)


@dataclass(frozen=True)
class EnumBudget:
    max_term_size: int = 5
    max_free_index: int = 2
    max_type_size: int = 8
    max_intersection_width: int = 2
    type_var_pool: int = 3

    def __post_init__(self):
        for name in ("max_term_size", "max_free_index", "max_type_size",
                     "max_intersection_width", "type_var_pool"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")


# -- terms -------------------------------------------------------------------

def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Ordered tuples of ``parts`` positive integers summing to ``total``."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _nfs(size: int, depth: int, max_free: int) -> tuple[Term, ...]:
    """Beta-normal forms with exactly ``size`` nodes under ``depth`` binders."""
    out: list[Term] = []
    indices = range(1, depth + max_free + 1)
    if size == 1:
        return tuple(Index(k) for k in indices)
    out.extend(Abs(b) for b in _nfs(size - 1, depth + 1, max_free))
    # k N1 .. Nm has 1 + m + sum(|Ni|) nodes
    for m in range(1, (size - 1) // 2 + 1):
        for sizes in _compositions(size - 1 - m, m):
            for args in itertools.product(*(_nfs(s, depth, max_free) for s in sizes)):
                for k in indices:
                    t: Term = Index(k)
                    for a in args:
                        t = App(t, a)
                    out.append(t)
    return tuple(out)


def enum_beta_nfs(budget: EnumBudget) -> Iterator[Term]:
    for s in range(1, budget.max_term_size + 1):
        yield from _nfs(s, 0, budget.max_free_index)


@lru_cache(maxsize=None)
def _all_terms(size: int, depth: int, max_free: int) -> tuple[Term, ...]:
    if size == 1:
        return tuple(Index(k) for k in range(1, depth + max_free + 1))
    out: list[Term] = [Abs(b) for b in _all_terms(size - 1, depth + 1, max_free)]
    for left in range(1, size - 1):
        for f in _all_terms(left, depth, max_free):
            for a in _all_terms(size - 1 - left, depth, max_free):
                out.append(App(f, a))
    return tuple(out)


def enum_all_terms(budget: EnumBudget) -> Iterator[Term]:
    """Every term (redexes included) within the size and free-index bounds."""
    for s in range(1, budget.max_term_size + 1):
        yield from _all_terms(s, 0, budget.max_free_index)


# -- types and typings -------------------------------------------------------

@lru_cache(maxsize=None)
def _types(size: int, pool: int, width: int) -> tuple[TypeT, ...]:
    if size == 1:
        return tuple(TVar(i) for i in range(pool))
    out = []
    for ls in range(1, size - 1):
        for left in _layers(ls, pool, width):
            for right in _types(size - 1 - ls, pool, width):
                out.append(Arrow(left, right))
    return tuple(out)


@lru_cache(maxsize=None)
def _layers(size: int, pool: int, width: int) -> tuple[TypeU, ...]:
    out = [OMEGA] if size == 1 else []
    seen = set()
    for k in range(1, width + 1):
        for sizes in _compositions(size - (k - 1), k):
            if list(sizes) != sorted(sizes):
                continue
            for members in itertools.product(*(_types(s, pool, width) for s in sizes)):
                v = TypeU(members)
                if v not in seen:
                    seen.add(v)
                    out.append(v)
    return tuple(out)


def enum_types(max_size: int, pool: int = 3, width: int = 2) -> Iterator[TypeT]:
    for s in range(1, max_size + 1):
        yield from _types(s, pool, width)


def enum_typings(n: Term, budget: EnumBudget, system: SystemId = SystemId.SMR) -> Iterator[Typing]:
    """Typings of the normal form ``n`` with typing size within budget.

    Built by running the generation lemmas backwards: every way of typing the
    subterms is combined through the only rule that can conclude the term.
    """
    if not is_beta_nf(n):
        raise NotNormal(print_term(n))
    return iter(sorted(_typings(n, budget.max_type_size, budget.type_var_pool,
                                budget.max_intersection_width, system),
                       key=lambda t: (typing_size(t), _typing_key(t))))


def _typing_key(t: Typing) -> tuple:
    return (tuple(e.key for e in t.context), t.ty.key)


def _result_types(max_size: int, pool: int, width: int, system: SystemId) -> list[TypeT]:
    types = list(enum_types(max_size, pool, width))
    if system is SystemId.SMR:
        types = [t for t in types if is_var_r_type(t)]
    return types


def _typings(m: Term, bound: int, pool: int, width: int, system: SystemId) -> set[Typing]:
    if bound < 2:
        return set()
    if isinstance(m, Index):
        out = set()
        for t in _result_types(bound // 2, pool, width, system):
            out.add(Typing(omegas(m.n - 1) + ctx(t), t))
        return out
    if isinstance(m, Abs):
        out = set()
        for g, t in _typings(m.body, bound - 1, pool, width, system):
            typing = Typing(g[1:], Arrow(g[0], t)) if g else Typing(NIL, Arrow(OMEGA, t))
            if typing_size(typing) <= bound:
                out.add(typing)
        return out
    head, args = spine(m)
    k = head.n
    # Each argument slot contributes a list of premises (context, type);
    # the slot's left type is the meet of the premise types, or omega.
    slot_options = []
    for a in args:
        ts = sorted(_typings(a, bound - 2, pool, width, system), key=_typing_key)
        options = []
        for w in range(1, width + 1):
            if system is SystemId.SMR and w > 1:
                break
            for group in itertools.combinations_with_replacement(ts, w):
                options.append((TypeU(tuple(t for _, t in group)), [g for g, _ in group]))
        if system is SystemId.SM:
            options.extend((OMEGA, [g]) for g, _ in ts)
        slot_options.append(options)
    out = set()
    for choice in itertools.product(*slot_options):
        lefts = [left for left, _ in choice]
        contexts = [g for _, gs in choice for g in gs]
        partial = sum(type_size(l) + 1 for l in lefts) + sum(
            type_size(e) for g in contexts for e in g if not e.is_omega)
        if partial + 2 > bound:
            continue
        for res in _result_types(bound - partial - 1, pool, width, system):
            h = arrows(lefts, res)
            if system is SystemId.SMR and not is_var_r_type(h):
                continue
            typing = Typing(ctx_and(omegas(k - 1) + ctx(h), *contexts), res)
            if typing_size(typing) <= bound:
                out.add(typing)
    return out


# -- C-types for the preservation properties ---------------------------------

def enum_ctypes(budget: EnumBudget) -> Iterator[CType]:
    """A deterministic family of C-types around the principal ones.

    For each principal ``T^N`` we also yield every C-type obtained by
    identifying two of its variables, by deleting one context member, by
    adding an ``a -> a`` on the left of the head or in front of the context,
    and every substitution instance found by the typing enumerator that
    still lies in the C-type grammar.
    """
    seen: set[CType] = set()

    def emit(g, head):
        try:
            c = CType(tuple(g), head)
        except ValueError:
            return None
        if c in seen:
            return None
        seen.add(c)
        return c

    for n in enum_beta_nfs(budget):
        base = infer(n)
        g, phi = base
        variants = [(g, phi)]
        vs = sorted(type_vars(base))
        for a, b in itertools.permutations(vs, 2):
            variants.append(apply_subst({a: TVar(b)}, base))
        for i, e in enumerate(g):
            for x in sorted(set(e.items), key=lambda t: t.key):
                items = list(e.items)
                items.remove(x)
                variants.append((g[:i] + (TypeU(tuple(items)),) + g[i + 1:], phi))
        fresh = TVar(max(vs) + 1)
        loop = Arrow(TypeU((fresh,)), fresh)
        variants.append((g, Arrow(TypeU((loop,)), phi)))
        variants.append(((TypeU((loop,)),) + g, phi))
        variants.append((g + (OMEGA,), phi))
        for gv, hv in variants:
            c = emit(gv, hv)
            if c is not None:
                yield c
    for n in enum_beta_nfs(EnumBudget(min(budget.max_term_size, 3), budget.max_free_index,
                                      budget.max_type_size, budget.max_intersection_width,
                                      budget.type_var_pool)):
        for t in enum_typings(n, budget):
            c = emit(*t)
            if c is not None:
                yield c


# -- the sweep ---------------------------------------------------------------

@dataclass
class SweepReport:
    budget: EnumBudget
    num_nfs: int = 0
    num_typings: int = 0
    checks: dict[str, int] = field(default_factory=dict)
    violations: list[str] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.violations

    def count(self, name: str) -> None:
        self.checks[name] = self.checks.get(name, 0) + 1

    def fail(self, name: str, n: Term, detail: str = "") -> None:
        self.violations.append(f"{name}: {print_term(n)}" + (f" ({detail})" if detail else ""))

    def summary(self) -> str:
        lines = [f"normal forms: {self.num_nfs}", f"typings checked for completeness: {self.num_typings}"]
        lines += [f"{k}: {v}" for k, v in sorted(self.checks.items())]
        lines.append(f"violations: {len(self.violations)}")
        lines += ["  " + v for v in self.violations]
        lines.append(f"time: {self.seconds:.1f}s")
        return "\n".join(lines)


def fo_shape_ok(t: CType) -> bool:
    """For closed, finally closed <G => a>: FO(a, G) is one entry ``(... -> a) /\\ v'`` with a not in v'."""
    alpha = t.head
    entries = fo(alpha, t.context)
    if len(entries) != 1:
        return False
    heads = [x for x in entries[0].entry.items if _final(x) == alpha.id]
    if len(heads) != 1:
        return False
    rest = list(entries[0].entry.items)
    rest.remove(heads[0])
    return alpha.id not in type_vars(TypeU(tuple(rest)))


def _final(t: TypeT) -> int:
    while isinstance(t, Arrow):
        t = t.right
    return t.id


def check_nf(n: Term, report: SweepReport) -> None:
    """Run every per-term property on one normal form."""
    try:
        t, d = infer_checked(n)
    except InternalSoundnessFailure as exc:
        report.fail("soundness", n, str(exc))
        return
    report.count("soundness")
    for node in d.nodes():
        if not relevant(node.term, node.typing.context):
            report.fail("relevance", n, print_typing(node.typing))
            break
    report.count("relevance")
    for system in SystemId:
        try:
            if check_derivation(d, system) != t:
                report.fail("replay", n, system.value)
        except RuleViolation as exc:
            report.fail("replay", n, f"{system.value}: {exc}")
    report.count("replay")
    vs = sorted(type_vars(t))
    for system, s in ((SystemId.SMR, {v: Arrow(TypeU((TVar(v + 100),)), TVar(v)) for v in vs}),
                      (SystemId.SM, {v: Arrow(TypeU((TVar(v), TVar(v + 100))), TVar(v)) for v in vs})):
        try:
            if check_derivation(d.map_types(s), system) != apply_subst(s, t):
                report.fail("substitution", n, system.value)
        except RuleViolation as exc:
            report.fail("substitution", n, f"{system.value}: {exc}")
    report.count("substitution")
    if not (in_c(t.context) and in_t_nf(t.ty)):
        report.fail("containment", n, print_typing(t))
        return
    report.count("containment")
    c = CType.of(t)
    for name, pred in (("closed", is_closed), ("fc", is_finally_closed), ("mc", is_minimally_closed),
                       ("complete", is_complete), ("principal", is_principal)):
        if not pred(c):
            report.fail(name, n)
    report.count("characterisation")
    if isinstance(t.ty, TVar) and not fo_shape_ok(c):
        report.fail("fo-shape", n)
    try:
        back, rest = recon(*t)
        if back != n or rest != NIL:
            report.fail("round-trip", n, f"got {print_term(back)} with leftover {rest}")
    except ReconFailure as exc:
        report.fail("round-trip", n, exc.tag)
    report.count("round-trip")


def _pushes(c: CType) -> Iterator[tuple[CType, CType, bool]]:
    """Pairs (A, B) from the push/pop lemmas; the flag says whether A <=> B or only A => B
    holds for minimal closure and completeness."""
    g, phi = c.context, c.head
    if g:
        yield c, CType(g[1:], Arrow(g[0], phi)), g[0].is_omega
    else:
        yield c, CType(NIL, Arrow(OMEGA, phi)), True
    if isinstance(phi, Arrow):
        yield CType((phi.left,) + g, phi.right), c, phi.left.is_omega
        if not g and phi.left.is_omega:
            yield CType(NIL, phi.right), c, True


def ctype_violations(c: CType) -> list[str]:
    """Preservation lemmas, the FO shape, the Example-mc construction and
    the converse round trip, checked on one headed C-type."""
    out = []
    shown = lambda x: print_typing(x.typing)
    for a, b, both in _pushes(c):
        for name, pred in (("closed", is_closed), ("fc", is_finally_closed)):
            if pred(a) != pred(b):
                out.append(f"{name} push/pop: {shown(a)} vs {shown(b)}")
        for name, pred in (("mc", is_minimally_closed), ("complete", is_complete)):
            pa, pb = pred(a), pred(b)
            if (pa != pb) if both else (pa and not pb):
                out.append(f"{name} push/pop: {shown(a)} vs {shown(b)}")
    if isinstance(c.head, TVar) and is_closed(c) and is_finally_closed(c) and not fo_shape_ok(c):
        out.append(f"fo-shape: {shown(c)}")
    if is_complete(c):
        fresh = TVar(max(type_vars(c.typing), default=-1) + 1)
        loop = Arrow(TypeU((fresh,)), fresh)
        if not is_complete(CType(c.context, Arrow(TypeU((loop,)), c.head))):
            out.append(f"example-mc extension not complete: {shown(c)}")
        if is_minimally_closed(CType((TypeU((loop,)),) + c.context, c.head)):
            out.append(f"example-mc push is m.c.: {shown(c)}")
    if is_principal(c):
        try:
            n, rest = recon(*c.typing)
        except ReconFailure as exc:
            out.append(f"principal but recon fails ({exc.tag}): {shown(c)}")
        else:
            if rest != NIL or not typing_alpha_equiv(infer(n), c.typing):
                out.append(f"principal but not infer image: {shown(c)}")
    return out


def check_completeness(n: Term, budget: EnumBudget, report: SweepReport) -> None:
    principal = infer(n)
    for typing in enum_typings(n, budget):
        report.num_typings += 1
        try:
            check_nf_typing(n, typing, SystemId.SMR)
        except NotDerivable as exc:
            report.fail("enumerated-typing", n, f"{print_typing(typing)}: {exc}")
            continue
        try:
            s = completeness_witness(n, typing)
        except NoWitness:
            report.fail("completeness", n, print_typing(typing))
            continue
        if apply_subst(s, principal) != typing:
            report.fail("completeness", n, f"witness does not reproduce {print_typing(typing)}")
    report.count("completeness")


def sweep(budget: EnumBudget, completeness_size: int = 0, ctypes: bool = True) -> SweepReport:
    """Check every property on all normal forms within budget.

    Completeness is additionally checked against enumerated typings for the
    normal forms of at most ``completeness_size`` nodes, and the C-type
    properties on ``enum_ctypes(budget)`` unless ``ctypes`` is off.
    """
    report = SweepReport(budget)
    start = time.perf_counter()
    for n in enum_beta_nfs(budget):
        report.num_nfs += 1
        check_nf(n, report)
        if completeness_size and size(n) <= completeness_size:
            check_completeness(n, budget, report)
    if ctypes:
        for c in enum_ctypes(budget):
            if c.head is None:
                continue
            report.count("ctypes")
            report.violations.extend(ctype_violations(c))
    report.seconds = time.perf_counter() - start
    return report
