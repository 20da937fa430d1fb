"""C-types and the syntactic characterisation of principal typings.

A C-type packages a typing as ``<G => phi>`` (or the headless ``<D =>>``).
Occurrences on the left of ``=>`` are negative, the head is positive and the
sign flips whenever we descend into the left side of an arrow.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, NamedTuple, Optional

from .itypes import (NIL, OMEGA, Arrow, Context, TVar, TypeT, TypeU, Typing,
                     arrow_parts, arrows, ctx, ctx_and, ctx_sub, omegas, trim,
                     sub_multisets, type_vars, u_sub)
from .terms import App, Abs, Index, Term, app

T_C = "T_C"
T_NF = "T_NF"
U_C = "U_C"


class HeadlessInput(ValueError):
    pass


class NoPartition(ValueError):
    pass


class ReconFailure(ValueError):
    TAGS = ("no-FO", "multiple-FO", "head-variable-reoccurs", "non-principal-argument", "leftover-nonempty")

    def __init__(self, tag: str, detail: str = ""):
        assert tag in self.TAGS
        super().__init__(f"{tag}: {detail}" if detail else tag)
        self.tag = tag


# -- grammar classes ---------------------------------------------------------

def in_t_c(t: TypeT) -> bool:
    if isinstance(t, TVar):
        return True
    left = t.left.single
    return left is not None and in_t_nf(left) and in_t_c(t.right)


def in_t_nf(t: TypeT) -> bool:
    if isinstance(t, TVar):
        return True
    return in_u_c(t.left) and in_t_nf(t.right)


def in_u_c(x: TypeT | TypeU) -> bool:
    if isinstance(x, TypeU):
        return all(in_t_c(t) for t in x.items)
    return in_t_c(x)


def grammar_class(x: TypeT | TypeU) -> frozenset[str]:
    """The restricted grammars ``x`` belongs to; empty means a plain type."""
    if isinstance(x, TypeU):
        return frozenset({U_C}) if in_u_c(x) else frozenset()
    classes = set()
    if in_t_c(x):
        classes |= {T_C, U_C}
    if in_t_nf(x):
        classes.add(T_NF)
    return frozenset(classes)


def in_c(g: Context) -> bool:
    return all(in_u_c(e) for e in g)


# -- C-types -----------------------------------------------------------------

@dataclass(frozen=True)
class CType:
    context: Context
    head: Optional[TypeT] = None

    def __post_init__(self):
        object.__setattr__(self, "context", tuple(self.context))
        if self.head is None and not self.context:
            raise ValueError("a headless C-type needs a non-empty context")
        if not in_c(self.context) or (self.head is not None and not in_t_nf(self.head)):
            raise ValueError("C-type context must be in C and its head in T_NF")

    @classmethod
    def of(cls, t: Typing) -> CType:
        return cls(t.context, t.ty)

    @property
    def typing(self) -> Typing:
        if self.head is None:
            raise HeadlessInput("headless C-type has no typing")
        return Typing(self.context, self.head)


class Polarity(NamedTuple):
    positive: int
    negative: int


class FOEntry(NamedTuple):
    position: int
    entry: TypeU


def _require_head(t: CType) -> TypeT:
    if t.head is None:
        raise HeadlessInput("predicate is defined for <G => phi> only")
    return t.head


def left_subtypes(t: CType) -> frozenset[TypeU]:
    out = {e for e in t.context if not e.is_omega}
    phi = t.head
    while isinstance(phi, Arrow):
        if not phi.left.is_omega:
            out.add(phi.left)
        phi = phi.right
    return frozenset(out)


def _occurrences(x, sign: int, acc: dict) -> None:
    if isinstance(x, TVar):
        pos, neg = acc.get(x.id, (0, 0))
        acc[x.id] = (pos + 1, neg) if sign > 0 else (pos, neg + 1)
    elif isinstance(x, Arrow):
        _occurrences(x.left, -sign, acc)
        _occurrences(x.right, sign, acc)
    else:
        for y in x.items:
            _occurrences(y, sign, acc)


@lru_cache(maxsize=None)
def polarities(t: CType) -> dict[int, Polarity]:
    acc: dict = {}
    for e in t.context:
        _occurrences(e, -1, acc)
    if t.head is not None:
        _occurrences(t.head, 1, acc)
    return {v: Polarity(*c) for v, c in acc.items()}


def polarity(t: CType, v: int | TVar) -> Polarity:
    if isinstance(v, TVar):
        v = v.id
    return polarities(t).get(v, Polarity(0, 0))


def final_occurrences(x: TypeT | TypeU) -> frozenset[int]:
    if isinstance(x, TypeU):
        return frozenset().union(*(final_occurrences(t) for t in x.items))
    return frozenset((arrow_parts(x)[1].id,))


def final_var(t: TypeT) -> TVar:
    return arrow_parts(t)[1]


@lru_cache(maxsize=None)
def is_closed(t: CType) -> bool:
    return all(p == (1, 1) for p in polarities(t).values())


def is_finally_closed(t: CType) -> bool:
    head = _require_head(t)
    v = final_var(head).id
    return any(v in final_occurrences(w) for w in left_subtypes(t))


def held_decompositions(t: CType) -> Iterator[CType]:
    """Every C-type held in ``t``: headed and headless, contexts trimmed of trailing omegas.

    Headed forms may have an all-omega (nil) context; headless ones need a
    non-omega entry.
    """
    _require_head(t)
    options = [[OMEGA] + list(sub_multisets(e)) if not e.is_omega else [OMEGA] for e in t.context]
    for pattern in itertools.product(*options):
        g = trim(pattern)
        yield CType(g, t.head)
        if g:
            yield CType(g, None)


def _same(a: CType, b: CType) -> bool:
    return trim(a.context) == trim(b.context) and a.head == b.head


@lru_cache(maxsize=None)
def is_minimally_closed(t: CType) -> bool:
    _require_head(t)
    if is_closed(t):
        return _connected(t)
    return minimally_closed_by_search(t)


def minimally_closed_by_search(t: CType) -> bool:
    """The definition read literally: no closed C-type strictly held in ``t``."""
    for h in held_decompositions(t):
        if not _same(h, t) and is_closed(h):
            return False
    return True


def _connected(t: CType) -> bool:
    """Are the context members and the head linked into one piece by shared variables?

    In a closed C-type every variable occurs exactly twice, so a held C-type
    is closed exactly when it contains, with each member, every member that
    shares a variable with it. The closed held ones are then the unions of
    connected pieces, and a strictly held one exists iff there are two pieces.
    """
    nodes = [type_vars(x) for e in t.context for x in e.items] + [type_vars(t.head)]
    seen = {0}
    frontier = [0]
    while frontier:
        i = frontier.pop()
        for j, vs in enumerate(nodes):
            if j not in seen and vs & nodes[i]:
                seen.add(j)
                frontier.append(j)
    return len(seen) == len(nodes)


@lru_cache(maxsize=None)
def is_complete(t: CType) -> bool:
    return is_closed(t) and is_finally_closed(t) and is_minimally_closed(t)


def fo(v: int | TVar, g: Context) -> list[FOEntry]:
    if isinstance(v, TVar):
        v = v.id
    return [FOEntry(i, e) for i, e in enumerate(g, start=1) if v in final_occurrences(e)]


def _is_var_at(g: Context, alpha: TVar) -> bool:
    """``g == w^(n-1).alpha.nil`` for some n >= 1."""
    return bool(g) and g[-1] == ctx(alpha)[0] and all(e.is_omega for e in g[:-1])


def _head_entry(g: Context, alpha: TVar) -> tuple[int, TypeT, TypeU]:
    """Locate ``(phi1 -> ... -> phim -> alpha) /\\ v'`` through FO; raises ReconFailure."""
    found = fo(alpha, g)
    if not found:
        raise ReconFailure("no-FO", f"no context entry ends in a{alpha.id}")
    if len(found) > 1:
        raise ReconFailure("multiple-FO", f"positions {[f.position for f in found]} all end in a{alpha.id}")
    pos, entry = found[0]
    heads = [x for x in entry.items if final_var(x) == alpha]
    rest = u_sub(entry, TypeU((heads[0],)))
    if len(heads) > 1 or alpha.id in type_vars(rest):
        raise ReconFailure("head-variable-reoccurs", f"a{alpha.id} occurs again in entry {pos}")
    return pos, heads[0], rest


def _partition(g: Context, head_pos: int, head: TypeT) -> tuple[list[Context], Context]:
    """Group ``g`` minus the head member by variable connectivity with the argument types.

    Returns one context per argument plus whatever is connected to none of
    them; raises NoPartition when a component touches two arguments.
    """
    lefts, _ = arrow_parts(head)
    if any(l.single is None for l in lefts):
        raise NoPartition("head arguments must be single types")
    arg_types = [l.single for l in lefts]
    residual = ctx_sub(g, omegas(head_pos - 1) + ctx(head))
    if residual is None:
        raise NoPartition(f"entry {head_pos} does not contain the head type")
    elements = [(p, x) for p, e in enumerate(residual) for x in e.items]
    parent = list(range(len(arg_types) + len(elements)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    owner: dict[int, int] = {}
    nodes = [type_vars(t) for t in arg_types] + [type_vars(x) for _, x in elements]
    for i, vs in enumerate(nodes):
        for v in vs:
            if v in owner:
                parent[find(i)] = find(owner[v])
            else:
                owner[v] = i
    roots = [find(i) for i in range(len(arg_types))]
    if len(set(roots)) != len(roots):
        raise NoPartition("two argument types are connected through shared type variables")
    blocks: list[list] = [[OMEGA] * len(residual) for _ in arg_types]
    leftover = [OMEGA] * len(residual)
    for k, (p, x) in enumerate(elements):
        r = find(len(arg_types) + k)
        target = blocks[roots.index(r)] if r in roots else leftover
        target[p] = TypeU(target[p].items + (x,))
    return [trim(tuple(b)) for b in blocks], trim(tuple(leftover))


def argument_partition(g: Context, head_pos: int, arg_types: list[TypeT]) -> list[Context]:
    """Split ``g`` minus the head entry into one sub-context per argument type.

    The head member is the one at ``head_pos`` whose arguments are exactly
    ``arg_types``; the rest is assigned by type-variable connectivity.
    """
    arg_types = list(arg_types)
    for h in g[head_pos - 1].items if head_pos <= len(g) else ():
        lefts, _ = arrow_parts(h)
        if [l.single for l in lefts] == arg_types:
            break
    else:
        raise NoPartition(f"entry {head_pos} has no member taking the given arguments")
    blocks, leftover = _partition(g, head_pos, h)
    if leftover:
        raise NoPartition("part of the context is connected to no argument")
    if ctx_and(omegas(head_pos - 1) + ctx(h), *blocks) != trim(g):
        raise NoPartition("blocks do not add up to the context")
    return blocks


@lru_cache(maxsize=None)
def is_principal(t: CType) -> bool:
    head = _require_head(t)
    if not is_complete(t):
        return False
    g = t.context
    if isinstance(head, TVar):
        if _is_var_at(g, head):
            return True
        try:
            pos, h, _ = _head_entry(g, head)
        except ReconFailure:
            return False
        lefts, _ = arrow_parts(h)
        if not lefts or any(l.single is None for l in lefts):
            return False
        phis = [l.single for l in lefts]
        try:
            blocks, leftover = _partition(g, pos, h)
        except NoPartition:
            return False
        # exact equality: a trailing omega entry is not absorbed by the sum
        if leftover or ctx_and(omegas(pos - 1) + ctx(h), *blocks) != g:
            return False
        return all(in_c(b) and is_principal(CType(b, phi)) for b, phi in zip(blocks, phis))
    if not g and head.left.is_omega:
        return is_principal(CType(NIL, head.right))
    return is_principal(CType((head.left,) + g, head.right))


def recon(g: Context, t: TypeT) -> tuple[Term, Context]:
    """Rebuild a normal form from a typing; on principal input the leftover is nil."""
    if isinstance(t, TVar):
        if not g:
            raise ReconFailure("no-FO", "empty context")
        pos, h, _ = _head_entry(g, t)
        phis = [l.single for l in arrow_parts(h)[0]]
        try:
            blocks, leftover = _partition(g, pos, h)
        except NoPartition as exc:
            raise ReconFailure("non-principal-argument", str(exc)) from exc
        args = []
        leftovers = [leftover]
        for b, phi in zip(blocks, phis):
            if not in_c(b) or not is_principal(CType(b, phi)):
                raise ReconFailure("non-principal-argument", f"<{b} => {phi}> is not principal")
            n_i, d_i = recon(b, phi)
            args.append(n_i)
            leftovers.append(d_i)
        return app(Index(pos), *args), trim(ctx_and(*leftovers))
    if not g and t.left.is_omega:
        body, rest = recon(NIL, t.right)
    else:
        body, rest = recon((t.left,) + tuple(g), t.right)
    if trim(rest):
        raise ReconFailure("leftover-nonempty", f"{len(trim(rest))} context entries unused")
    return Abs(body), NIL


def analyze(t: CType) -> dict[str, bool]:
    return {
        "closed": is_closed(t),
        "fc": is_finally_closed(t),
        "mc": is_minimally_closed(t),
        "complete": is_complete(t),
        "principal": is_principal(t),
    }
