"""Derivations and judgement checking for the systems SM and SM_r.

Rule tags::

    var    |- 1 : t.nil |- t
    var_r  same, with t = s1 -> ... -> sn -> a       (the only axiom of SM_r)
    varn   n : G |- t          gives  n+1 : w.G |- t
    ->i    M : u.G |- t        gives  \\.M : G |- u -> t
    ->'i   M : nil |- t        gives  \\.M : nil |- w -> t
    ->'e   M1 : G |- w -> t,  M2 : D |- s                  gives  M1 M2 : G /\\ D |- t
    ->e    M1 : G |- s1/\\../\\sn -> t,  M2 : Di |- si      gives  M1 M2 : G /\\ D1 /\\ .. /\\ Dn |- t

The axiom tags are interchangeable: a node is checked against the axiom of
the system being audited, so one tree can be replayed under both systems.
"""
from __future__ import annotations

import enum
import itertools
import re
from dataclasses import dataclass
from typing import Iterator, Optional

from .itypes import (NIL, OMEGA, Arrow, Context, TVar, TypeT, TypeU, Typing,
                     apply_subst, arrow_parts, arrows, ctx, ctx_and, omegas,
                     peel, u_sub)
from .syntax import (parse_context, parse_term, parse_type, print_context,
                     print_term, print_type)
from .terms import (Abs, App, Index, NotNormal, Term, beta_step, free_indices,
                    is_beta_nf, spine, sup)


class SystemId(enum.Enum):
    SM = "sm"
    SMR = "smr"


RULES = ("var", "var_r", "varn", "->i", "->'i", "->e", "->'e")


@dataclass(frozen=True)
class Derivation:
    rule: str
    term: Term
    typing: Typing
    premises: tuple[Derivation, ...] = ()

    def nodes(self) -> Iterator[Derivation]:
        yield self
        for p in self.premises:
            yield from p.nodes()

    def map_types(self, s) -> Derivation:
        """The same tree with substitution ``s`` applied to every typing."""
        return Derivation(self.rule, self.term, apply_subst(s, self.typing),
                          tuple(p.map_types(s) for p in self.premises))


class RuleViolation(ValueError):
    def __init__(self, path: tuple[int, ...], rule: str, reason: str):
        where = "root" if not path else "premise path " + ".".join(map(str, path))
        super().__init__(f"{rule} at {where}: {reason}")
        self.path = path
        self.rule = rule
        self.reason = reason


class NotDerivable(ValueError):
    pass


def is_var_r_type(t: TypeT) -> bool:
    """``s1 -> ... -> sn -> a`` with every ``si`` a bare type (no omega, no meet)."""
    lefts, _ = arrow_parts(t)
    return all(left.single is not None for left in lefts)


def relevant(m: Term, g: Context) -> bool:
    """|G| = sup(m) and G_i is non-omega exactly at the free indices of m."""
    fi = free_indices(m)
    return len(g) == sup(m) and all((not e.is_omega) == (i + 1 in fi) for i, e in enumerate(g))


# -- checking explicit trees -------------------------------------------------

def check_derivation(d: Derivation, system: SystemId) -> Typing:
    """Validate every node of ``d`` and return the root typing."""
    _check(d, system, ())
    return d.typing


def _check(d: Derivation, system: SystemId, path: tuple[int, ...]) -> None:
    def bad(reason: str):
        raise RuleViolation(path, d.rule, reason)

    arity = {"var": 0, "var_r": 0, "varn": 1, "->i": 1, "->'i": 1, "->'e": 2}
    if d.rule not in RULES:
        bad(f"unknown rule {d.rule!r}")
    if d.rule in arity and len(d.premises) != arity[d.rule]:
        bad(f"expected {arity[d.rule]} premises, got {len(d.premises)}")
    for i, p in enumerate(d.premises):
        _check(p, system, path + (i,))

    m, (g, t) = d.term, d.typing
    prem = [p.typing for p in d.premises]
    if d.rule in ("var", "var_r"):
        if m != Index(1):
            bad("axiom must type the index 1")
        if g != ctx(t):
            bad("axiom context must be exactly t.nil")
        if system is SystemId.SMR and not is_var_r_type(t):
            bad("SM_r axiom needs a type s1 -> ... -> sn -> a")
    elif d.rule == "varn":
        below = d.premises[0].term
        if not (isinstance(m, Index) and isinstance(below, Index) and m.n == below.n + 1):
            bad("varn raises an index by one")
        if g != (OMEGA,) + prem[0].context or t != prem[0].ty:
            bad("varn conclusion must be w.G |- t")
    elif d.rule == "->i":
        if not isinstance(m, Abs) or d.premises[0].term != m.body:
            bad("->i concludes an abstraction over the premise term")
        pg = prem[0].context
        if not pg:
            bad("->i premise context must be non-empty")
        if g != pg[1:] or t != Arrow(pg[0], prem[0].ty):
            bad("->i conclusion must be G |- u -> t for premise u.G |- t")
    elif d.rule == "->'i":
        if not isinstance(m, Abs) or d.premises[0].term != m.body:
            bad("->'i concludes an abstraction over the premise term")
        if prem[0].context != NIL or g != NIL:
            bad("->'i needs nil contexts")
        if t != Arrow(OMEGA, prem[0].ty):
            bad("->'i conclusion type must be w -> t")
    else:
        if not isinstance(m, App):
            bad("elimination rules conclude an application")
        if not d.premises:
            bad("elimination rules need a function premise")
        fun, args = d.premises[0], d.premises[1:]
        if fun.term != m.fun or any(a.term != m.arg for a in args):
            bad("premise terms do not match the application")
        ft = fun.typing.ty
        if not isinstance(ft, Arrow) or ft.right != t:
            bad("function premise must have type u -> t")
        if d.rule == "->'e":
            if not ft.left.is_omega:
                bad("->'e needs a function of type w -> t")
        else:
            if ft.left.is_omega or len(args) == 0:
                bad("->e needs a function of type s1/\\.../\\sn -> t with n >= 1")
            if len(args) != len(ft.left):
                bad(f"->e expects {len(ft.left)} argument premises, got {len(args)}")
            if TypeU(tuple(a.typing.ty for a in args)) != ft.left:
                bad("argument premise types do not match the intersection")
        if g != ctx_and(fun.typing.context, *(a.typing.context for a in args)):
            bad("conclusion context must be the meet of the premise contexts")


# -- syntax-directed search on normal forms ----------------------------------

class _Open:
    """A binder whose type is still to be chosen: it hands out members on demand."""

    def __repr__(self) -> str:
        return "OPEN"


OPEN = _Open()


def check_nf_typing(n: Term, t: Typing, system: SystemId) -> Derivation:
    """Decide whether the normal form ``n`` has typing ``t`` and return a derivation.

    The search follows the generation lemmas: indices are typed by the axiom
    plus varn, abstractions are opened by ->i/->'i, and a spine ``k N1..Nm``
    takes its head type from a member of context entry ``k``. The context is
    treated as a pool of members; every index occurrence consumes one, and
    the judgement holds when some derivation consumes the pool exactly.
    """
    if not is_beta_nf(n):
        raise NotNormal(f"not a beta-normal form: {print_term(n)}")
    search = _Search(system)
    d = search.run(n, t.context, t.ty)
    if d is None:
        raise NotDerivable(search.reason or "no derivation")
    assert d.typing == t, (d.typing, t)
    return d


def derivable(n: Term, t: Typing, system: SystemId) -> bool:
    try:
        check_nf_typing(n, t, system)
    except NotDerivable:
        return False
    return True


class _Search:
    def __init__(self, system: SystemId):
        self.system = system
        self.reason: Optional[str] = None

    def fail(self, reason: str) -> None:
        if self.reason is None:
            self.reason = reason
        return None

    def run(self, m: Term, g: Context, ty: TypeT) -> Optional[Derivation]:
        if not relevant(m, g):
            if len(g) != sup(m):
                return self.fail(f"relevance: context length {len(g)} differs from sup = {sup(m)}")
            return self.fail("relevance: the non-omega entries are not the free indices")
        for d, rest in self.derive(m, tuple(g), ty):
            if all(e.is_omega for e in rest):
                return d
            self.fail("generation: the context has members no premise uses")
        return None

    def derive(self, m: Term, pool: tuple, ty: Optional[TypeT]) -> Iterator[tuple[Derivation, tuple]]:
        """Derivations of ``m`` drawing on ``pool``, each with what is left of it.

        ``ty`` may be None when the type is ours to choose (arguments taken
        at omega, and everything under a binder of open type).
        """
        if isinstance(m, Index):
            yield from self.index(m, pool, ty)
        elif isinstance(m, Abs):
            yield from self.abs(m, pool, ty)
        else:
            yield from self.spine(m, pool, ty)

    def axiom(self, t: TypeT) -> Optional[Derivation]:
        if self.system is SystemId.SMR:
            if not is_var_r_type(t):
                return self.fail(f"SM_r types an index only with s1 -> ... -> a, not {print_type(t)}")
            return Derivation("var_r", Index(1), Typing(ctx(t), t))
        return Derivation("var", Index(1), Typing(ctx(t), t))

    def raise_index(self, d: Derivation, k: int) -> Derivation:
        for j in range(2, k + 1):
            d = Derivation("varn", Index(j), Typing((OMEGA,) + d.typing.context, d.typing.ty), (d,))
        return d

    def take(self, pool: tuple, k: int, want: Optional[TypeT]) -> Iterator[tuple[TypeT, tuple]]:
        """Members of entry ``k`` (distinct ones only), with the pool minus that member."""
        if k > len(pool):
            self.fail(f"generation: index {k} has no context entry")
            return
        entry = pool[k - 1]
        if entry is OPEN:
            yield (want if want is not None else TVar(0)), pool
            return
        if entry.is_omega:
            self.fail(f"generation: context entry {k} has no member left for this occurrence")
            return
        seen = []
        for h in entry.items:
            if h in seen or (want is not None and h != want):
                continue
            seen.append(h)
            yield h, pool[:k - 1] + (u_sub(entry, TypeU((h,))),) + pool[k:]
        if want is not None and not seen:
            self.fail(f"generation: no member of context entry {k} is {print_type(want)}")

    def index(self, m: Index, pool: tuple, ty: Optional[TypeT]) -> Iterator[tuple[Derivation, tuple]]:
        for t, rest in self.take(pool, m.n, ty):
            d = self.axiom(t)
            if d is not None:
                yield self.raise_index(d, m.n), rest

    def abs(self, m: Abs, pool: tuple, ty: Optional[TypeT]) -> Iterator[tuple[Derivation, tuple]]:
        if ty is None:
            for d, rest in self.derive(m.body, (OPEN,) + pool, None):
                yield self.close(m, d, d.typing.context[0] if d.typing.context else OMEGA), rest[1:]
            return
        if not isinstance(ty, Arrow):
            self.fail(f"generation: an abstraction cannot have the variable type {print_type(ty)}")
            return
        for d, rest in self.derive(m.body, (ty.left,) + pool, ty.right):
            if not rest[0].is_omega:
                self.fail(f"generation: the bound variable does not use all of {ty.left}")
                continue
            yield self.close(m, d, ty.left), rest[1:]

    def close(self, m: Abs, d: Derivation, left: TypeU) -> Derivation:
        pg = d.typing.context
        if not pg:
            # ->'i needs a closed body; the bound variable is then unused
            return Derivation("->'i", m, Typing(NIL, Arrow(OMEGA, d.typing.ty)), (d,))
        return Derivation("->i", m, Typing(pg[1:], Arrow(left, d.typing.ty)), (d,))

    def spine(self, m: Term, pool: tuple, ty: Optional[TypeT]) -> Iterator[tuple[Derivation, tuple]]:
        head, args = spine(m)
        if not isinstance(head, Index):
            raise NotNormal(f"not a beta-normal form: {print_term(m)}")
        k = head.n
        if k <= len(pool) and pool[k - 1] is OPEN:
            yield from self.open_head(head, args, pool, ty)
            return
        for h, rest in self.take(pool, k, None):
            split = peel(h, len(args))
            if split is None:
                self.fail(f"generation: head type {print_type(h)} has fewer than {len(args)} arrows")
                continue
            lefts, result = split
            if ty is not None and result != ty:
                self.fail(f"generation: head type {print_type(h)} does not end in {print_type(ty)}")
                continue
            head_d = self.axiom(h)
            if head_d is None:
                continue
            wanted = [(a, list(left.items) or [None]) for a, left in zip(args, lefts)]
            for arg_ds, rest2 in self.arguments(wanted, rest):
                yield self.build(self.raise_index(head_d, k), args, [len(w) for _, w in wanted], arg_ds), rest2

    def open_head(self, head: Index, args: list, pool: tuple, ty: Optional[TypeT]):
        # The binder's type is ours to choose: give each argument some number
        # of premises of open type and read the head type off the result.
        result = ty if ty is not None else TVar(0)
        widths = []
        for a in args:
            cap = max([len(pool[p - 1]) for p in free_indices(a)
                       if p <= len(pool) and pool[p - 1] is not OPEN] + [1])
            widths.append(range(1, cap + 1))
        for choice in itertools.product(*widths):
            wanted = [(a, [None] * w) for a, w in zip(args, choice)]
            for arg_ds, rest in self.arguments(wanted, pool):
                lefts, pos = [], 0
                for w in choice:
                    lefts.append(TypeU(tuple(d.typing.ty for d in arg_ds[pos:pos + w])))
                    pos += w
                head_d = self.axiom(arrows(lefts, result))
                if head_d is not None:
                    yield self.build(self.raise_index(head_d, head.n), args, list(choice), arg_ds), rest

    def arguments(self, wanted: list, pool: tuple) -> Iterator[tuple[list[Derivation], tuple]]:
        """Derive every (argument, type) premise in turn, threading the pool."""
        flat = [(a, t) for a, ts in wanted for t in ts]

        def go(j: int, pool: tuple, acc: list):
            if j == len(flat):
                yield list(acc), pool
                return
            a, t = flat[j]
            for d, rest in self.derive(a, pool, t):
                acc.append(d)
                yield from go(j + 1, rest, acc)
                acc.pop()

        yield from go(0, pool, [])

    def build(self, head_d: Derivation, args: list, counts: list[int], arg_ds: list[Derivation]) -> Derivation:
        d = head_d
        pos = 0
        for a, c in zip(args, counts):
            group = tuple(arg_ds[pos:pos + c])
            pos += c
            ft = d.typing.ty
            assert isinstance(ft, Arrow)
            rule = "->'e" if ft.left.is_omega else "->e"
            g = ctx_and(d.typing.context, *(p.typing.context for p in group))
            d = Derivation(rule, App(d.term, a), Typing(g, ft.right), (d,) + group)
        return d


# -- s-expression form -------------------------------------------------------

def to_sexpr(d: Derivation, indent: int = 0) -> str:
    """``(rule ("term" "ctx" "type") premise*)``, one node per line."""
    pad = "  " * indent
    g, t = d.typing
    head = f'{pad}({d.rule} ("{print_term(d.term)}" "{print_context(g)}" "{print_type(t)}")'
    if not d.premises:
        return head + ")"
    inner = "\n".join(to_sexpr(p, indent + 1) for p in d.premises)
    return f"{head}\n{inner})"


_SEXPR_TOKEN = re.compile(r'\s*(?:(?P<open>\()|(?P<close>\))|"(?P<str>[^"]*)"|(?P<atom>[^\s()"]+))')


def from_sexpr(text: str) -> Derivation:
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        mt = _SEXPR_TOKEN.match(text, pos)
        if mt is None:
            raise ValueError(f"bad s-expression at {pos}")
        kind = mt.lastgroup
        tokens.append((kind, mt.group(kind)))
        pos = mt.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1

    def node(i: int) -> tuple[Derivation, int]:
        if tokens[i][0] != "open" or tokens[i + 1][0] != "atom" or tokens[i + 2][0] != "open":
            raise ValueError("expected (rule (term ctx type) ...)")
        rule = tokens[i + 1][1]
        parts = [tokens[i + 3 + j] for j in range(3)]
        if any(kind != "str" for kind, _ in parts) or tokens[i + 6][0] != "close":
            raise ValueError("judgement must be three quoted strings")
        typing = Typing(parse_context(parts[1][1]), parse_type(parts[2][1]))
        term = parse_term(parts[0][1])
        i += 7
        premises = []
        while tokens[i][0] == "open":
            p, i = node(i)
            premises.append(p)
        if tokens[i][0] != "close":
            raise ValueError("unterminated derivation node")
        return Derivation(rule, term, typing, tuple(premises)), i + 1

    try:
        d, end = node(0)
    except IndexError:
        raise ValueError("unexpected end of derivation") from None
    if end != len(tokens):
        raise ValueError("trailing input after derivation")
    return d


# -- the subject reduction / expansion counterexample ------------------------

@dataclass(frozen=True)
class SRReport:
    redex: Term
    contractum: Term
    before: Typing
    before_derivation: Derivation
    after: Typing
    after_derivation: Derivation
    contractum_rejects_before_context: bool
    redex_rejects_after_context: bool

    @property
    def subject_reduction_fails(self) -> bool:
        return self.contractum_rejects_before_context

    @property
    def subject_expansion_fails(self) -> bool:
        return self.redex_rejects_after_context


def sr_counterexample() -> SRReport:
    """``(\\.\\.1) 3`` is typed under w.w.b.nil, its contractum ``\\.1`` only under nil."""
    alpha, beta = TVar(0), TVar(1)
    aa = Arrow(TypeU((alpha,)), alpha)
    one = Index(1)
    m = Abs(one)
    n = Index(3)
    redex = App(Abs(m), n)

    inner = Derivation("var", one, Typing(ctx(alpha), alpha))
    lam1 = Derivation("->i", m, Typing(NIL, aa), (inner,))
    lam2 = Derivation("->'i", Abs(m), Typing(NIL, Arrow(OMEGA, aa)), (lam1,))
    three = Derivation("var", Index(1), Typing(ctx(beta), beta))
    three = Derivation("varn", Index(2), Typing(omegas(1) + ctx(beta), beta), (three,))
    three = Derivation("varn", n, Typing(omegas(2) + ctx(beta), beta), (three,))
    before = Typing(omegas(2) + ctx(beta), aa)
    before_d = Derivation("->'e", redex, before, (lam2, three))
    if check_derivation(before_d, SystemId.SM) != before:
        raise AssertionError("redex judgement was not accepted")

    contractum = beta_step(redex)
    if contractum != m:
        raise AssertionError(f"unexpected contractum {contractum}")
    after = Typing(NIL, aa)
    after_d = check_nf_typing(contractum, after, SystemId.SM)
    rejects_before = not derivable(contractum, Typing(before.context, aa), SystemId.SM)
    # The redex has free index 3, so relevance rules out the nil context.
    rejects_after = not relevant(redex, after.context)
    if not (rejects_before and rejects_after):
        raise AssertionError("counterexample did not behave as expected")
    return SRReport(redex, contractum, before, before_d, after, after_d, rejects_before, rejects_after)
