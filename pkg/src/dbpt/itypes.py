"""Restricted intersection types, contexts and type substitutions.

``TypeT`` is either a type variable or an arrow whose left side is an
intersection layer ``TypeU``.  A ``TypeU`` is a multiset of ``TypeT`` kept in a
canonical sorted order, so that equality modulo associativity, commutativity
and the neutral element omega (the empty multiset) is plain ``==``.  The
intersection is not idempotent: ``a /\\ a`` and ``a`` are different.

Contexts are tuples of ``TypeU``; position ``i`` (1-based) types free index ``i``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping, NamedTuple, Union


@dataclass(frozen=True)
class TVar:
    id: int

    @cached_property
    def key(self) -> tuple:
        return (0, self.id)

    def __str__(self) -> str:
        return f"a{self.id}"


@dataclass(frozen=True)
class Arrow:
    left: TypeU
    right: TypeT

    def __post_init__(self):
        if isinstance(self.left, (TVar, Arrow)):
            object.__setattr__(self, "left", TypeU((self.left,)))
        if not isinstance(self.left, TypeU) or not isinstance(self.right, (TVar, Arrow)):
            raise TypeError("Arrow needs a TypeU (or TypeT) on the left and a TypeT on the right")

    @cached_property
    def key(self) -> tuple:
        return (1, self.left.key, self.right.key)

    def __str__(self) -> str:
        from .syntax import print_type
        return print_type(self)


TypeT = Union[TVar, Arrow]


@dataclass(frozen=True)
class TypeU:
    """Canonical multiset of ``TypeT``; the empty multiset is omega."""

    items: tuple[TypeT, ...] = field(default=())

    def __post_init__(self):
        items = tuple(self.items)
        for t in items:
            if not isinstance(t, (TVar, Arrow)):
                raise TypeError(f"intersection members must be TypeT, got {t!r}")
        object.__setattr__(self, "items", tuple(sorted(items, key=lambda t: t.key)))

    @cached_property
    def key(self) -> tuple:
        return tuple(t.key for t in self.items)

    @property
    def is_omega(self) -> bool:
        return not self.items

    @property
    def single(self) -> TypeT | None:
        """The sole member when this layer is a bare ``TypeT``."""
        return self.items[0] if len(self.items) == 1 else None

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self) -> Iterator[TypeT]:
        return iter(self.items)

    def __str__(self) -> str:
        from .syntax import print_u
        return print_u(self)


OMEGA = TypeU(())

Context = tuple[TypeU, ...]
NIL: Context = ()

Subst = Mapping[int, TypeT]


class Typing(NamedTuple):
    context: Context
    ty: TypeT

    def __str__(self) -> str:
        from .syntax import print_typing
        return print_typing(self)


class DomainOverlap(ValueError):
    pass


def tv(i: int) -> TVar:
    return TVar(i)


def u(*types: TypeT) -> TypeU:
    return TypeU(types)


def as_u(x: TypeT | TypeU) -> TypeU:
    return x if isinstance(x, TypeU) else TypeU((x,))


def arrows(lefts: Iterable[TypeT | TypeU], result: TypeT) -> TypeT:
    """``l1 -> l2 -> ... -> result`` (right nested)."""
    for left in reversed(list(lefts)):
        result = Arrow(as_u(left), result)
    return result


def omegas(n: int) -> Context:
    return (OMEGA,) * n


def ctx(*entries: TypeT | TypeU) -> Context:
    return tuple(as_u(e) for e in entries)


def u_and(a: TypeU, b: TypeU) -> TypeU:
    if a.is_omega:
        return b
    if b.is_omega:
        return a
    return TypeU(a.items + b.items)


def ctx_and(*contexts: Context) -> Context:
    """Pointwise intersection; ``nil`` is neutral so shorter contexts pad with omega."""
    length = max((len(g) for g in contexts), default=0)
    out = []
    for i in range(length):
        acc = OMEGA
        for g in contexts:
            if i < len(g):
                acc = u_and(acc, g[i])
        out.append(acc)
    return tuple(out)


def trim(g: Context) -> Context:
    """Drop trailing omega entries."""
    n = len(g)
    while n and g[n - 1].is_omega:
        n -= 1
    return g[:n]


def ctx_sub(g: Context, d: Context) -> Context | None:
    """Positionwise multiset difference ``g - d``; None when ``d`` is not contained in ``g``."""
    if len(trim(d)) > len(g):
        return None
    out = []
    for i, entry in enumerate(g):
        rest = u_sub(entry, d[i]) if i < len(d) else entry
        if rest is None:
            return None
        out.append(rest)
    return tuple(out)


def u_sub(a: TypeU, b: TypeU) -> TypeU | None:
    remaining = list(a.items)
    for t in b.items:
        try:
            remaining.remove(t)
        except ValueError:
            return None
    return TypeU(tuple(remaining))


def sub_multisets(v: TypeU) -> Iterator[TypeU]:
    """Distinct non-empty sub-multisets of ``v``."""
    distinct: list[TypeT] = []
    counts: list[int] = []
    for t in v.items:
        if distinct and distinct[-1] == t:
            counts[-1] += 1
        else:
            distinct.append(t)
            counts.append(1)
    for picks in itertools.product(*(range(c + 1) for c in counts)):
        items = tuple(t for t, k in zip(distinct, picks) for _ in range(k))
        if items:
            yield TypeU(items)


def arrow_parts(t: TypeT) -> tuple[list[TypeU], TVar]:
    """Split ``u1 -> ... -> un -> a`` into ``([u1..un], a)``."""
    lefts = []
    while isinstance(t, Arrow):
        lefts.append(t.left)
        t = t.right
    return lefts, t


def peel(t: TypeT, m: int) -> tuple[list[TypeU], TypeT] | None:
    """Strip ``m`` leading arrows: ``([u1..um], rest)`` or None if ``t`` has fewer."""
    lefts = []
    for _ in range(m):
        if not isinstance(t, Arrow):
            return None
        lefts.append(t.left)
        t = t.right
    return lefts, t


def shape(t: TypeT) -> str:
    """Which of the three forms ``t`` takes: ``var``, ``omega-arrow`` or ``meet-arrow``."""
    if isinstance(t, TVar):
        return "var"
    if isinstance(t, Arrow):
        return "omega-arrow" if t.left.is_omega else "meet-arrow"
    raise TypeError(f"not a type: {t!r}")


def apply_subst(s: Subst, x):
    """Apply ``s`` homomorphically to a TypeT, TypeU, Context or Typing."""
    if not s:
        return x
    if isinstance(x, TVar):
        return s.get(x.id, x)
    if isinstance(x, Arrow):
        return Arrow(apply_subst(s, x.left), apply_subst(s, x.right))
    if isinstance(x, TypeU):
        return TypeU(tuple(apply_subst(s, t) for t in x.items))
    if isinstance(x, Typing):
        return Typing(apply_subst(s, x.context), apply_subst(s, x.ty))
    if isinstance(x, tuple):
        return tuple(apply_subst(s, e) for e in x)
    raise TypeError(f"cannot substitute into {x!r}")


def domain(s: Subst) -> frozenset[int]:
    return frozenset(a for a, t in s.items() if t != TVar(a))


def subst_sum(s1: Subst, s2: Subst) -> dict[int, TypeT]:
    d1, d2 = domain(s1), domain(s2)
    if d1 & d2:
        raise DomainOverlap(f"substitution domains overlap on {sorted(d1 & d2)}")
    out = {a: s1[a] for a in d1}
    out.update((a, s2[a]) for a in d2)
    return out


def type_vars(x) -> frozenset[int]:
    if isinstance(x, TVar):
        return frozenset((x.id,))
    if isinstance(x, Arrow):
        return type_vars(x.left) | type_vars(x.right)
    if isinstance(x, TypeU):
        return frozenset().union(*(type_vars(t) for t in x.items))
    if isinstance(x, Typing):
        return type_vars(x.context) | type_vars(x.ty)
    if isinstance(x, tuple):
        return frozenset().union(*(type_vars(e) for e in x))
    raise TypeError(f"not a type: {x!r}")


def type_size(x) -> int:
    """Node count: variables and omega count 1, arrows and each binary meet add 1."""
    if isinstance(x, TVar):
        return 1
    if isinstance(x, Arrow):
        return 1 + type_size(x.left) + type_size(x.right)
    if isinstance(x, TypeU):
        if x.is_omega:
            return 1
        return sum(type_size(t) for t in x.items) + len(x.items) - 1
    raise TypeError(f"not a type: {x!r}")


def typing_size(t: Typing) -> int:
    """Size of the type plus the sizes of the non-omega context entries."""
    return type_size(t.ty) + sum(type_size(e) for e in t.context if not e.is_omega)


# -- first-order matching ----------------------------------------------------

def _bind(var: int, t: TypeT, s: dict, rename: bool) -> dict | None:
    if var in s:
        return s if s[var] == t else None
    if rename:
        if not isinstance(t, TVar) or t in s.values():
            return None
    out = dict(s)
    out[var] = t
    return out


def _match_t(p: TypeT, t: TypeT, s: dict, rename: bool) -> Iterator[dict]:
    if isinstance(p, TVar):
        s2 = _bind(p.id, t, s, rename)
        if s2 is not None:
            yield s2
        return
    if not isinstance(t, Arrow):
        return
    for s1 in _match_u(p.left, t.left, s, rename):
        yield from _match_t(p.right, t.right, s1, rename)


def _match_u(p: TypeU, t: TypeU, s: dict, rename: bool) -> Iterator[dict]:
    if len(p.items) != len(t.items):
        return
    yield from _match_items(list(p.items), list(t.items), s, rename)


def _match_items(ps: list, ts: list, s: dict, rename: bool) -> Iterator[dict]:
    if not ps:
        yield s
        return
    first, rest = ps[0], ps[1:]
    tried = []
    for i, t in enumerate(ts):
        if t in tried:
            continue
        tried.append(t)
        for s1 in _match_t(first, t, s, rename):
            yield from _match_items(rest, ts[:i] + ts[i + 1:], s1, rename)


def _match_seq(pairs: list, s: dict, rename: bool) -> Iterator[dict]:
    if not pairs:
        yield s
        return
    (p, t), rest = pairs[0], pairs[1:]
    gen = _match_u(p, t, s, rename) if isinstance(p, TypeU) else _match_t(p, t, s, rename)
    for s1 in gen:
        yield from _match_seq(rest, s1, rename)


def matches(pattern: Typing, target: Typing, rename: bool = False) -> Iterator[dict]:
    """Every substitution ``s`` (restricted to TV(pattern)) with ``s(pattern) == target``.

    With ``rename=True`` only injective variable-to-variable maps are produced.
    """
    if len(pattern.context) != len(target.context):
        return iter(())
    pairs = list(zip(pattern.context, target.context)) + [(pattern.ty, target.ty)]
    # Constrain by the most specific components first: cheap pruning.
    pairs.sort(key=lambda pt: len(pt[0]) if isinstance(pt[0], TypeU) else 0)
    return _match_seq(pairs, {}, rename)


def match(pattern: Typing, target: Typing) -> dict | None:
    return next(matches(pattern, target), None)


def typing_alpha_equiv(a: Typing, b: Typing) -> bool:
    """True iff a bijective renaming of type variables maps ``a`` onto ``b``."""
    if len(type_vars(a)) != len(type_vars(b)):
        return False
    return next(matches(a, b, rename=True), None) is not None


def canonical_renaming(t: Typing) -> dict[int, TypeT]:
    """Rename variables to 0, 1, ... in first-seen order (context left to right, then type)."""
    order: list[int] = []

    def walk(x):
        if isinstance(x, TVar):
            if x.id not in order:
                order.append(x.id)
        elif isinstance(x, Arrow):
            walk(x.left)
            walk(x.right)
        else:
            for y in x.items:
                walk(y)

    for entry in t.context:
        walk(entry)
    walk(t.ty)
    return {old: TVar(new) for new, old in enumerate(order)}


def canonicalize(t: Typing) -> Typing:
    return apply_subst(canonical_renaming(t), t)
