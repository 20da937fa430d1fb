"""Untyped lambda terms with de Bruijn indices.

Terms are immutable dataclasses; structural equality is term equality since
de Bruijn terms need no alpha-conversion.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Union


@dataclass(frozen=True)
class Index:
    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"de Bruijn index must be >= 1, got {self.n!r}")


@dataclass(frozen=True)
class App:
    fun: Term
    arg: Term


@dataclass(frozen=True)
class Abs:
    body: Term


Term = Union[Index, App, Abs]


class NotNormal(ValueError):
    """Raised when an operation needing a beta-normal form gets a redex."""


class FuelExhausted(RuntimeError):
    def __init__(self, last: Term, steps: int):
        super().__init__(f"no normal form reached after {steps} steps")
        self.last = last
        self.steps = steps


# Shapes of beta-normal forms: an index, an abstraction over a normal form,
# or an index applied to normal-form arguments.

@dataclass(frozen=True)
class NfVar:
    n: int


@dataclass(frozen=True)
class NfLam:
    body: NfShape


@dataclass(frozen=True)
class NfSpine:
    head: int
    args: tuple[Term, ...]


NfShape = Union[NfVar, NfLam, NfSpine]


def app(*terms: Term) -> Term:
    """Left-associated application ``t0 t1 ... tn``."""
    if not terms:
        raise ValueError("app() needs at least one term")
    result = terms[0]
    for t in terms[1:]:
        result = App(result, t)
    return result


def lam(body: Term, depth: int = 1) -> Term:
    for _ in range(depth):
        body = Abs(body)
    return body


@lru_cache(maxsize=None)
def free_indices(m: Term) -> frozenset[int]:
    if isinstance(m, Index):
        return frozenset((m.n,))
    if isinstance(m, App):
        return free_indices(m.fun) | free_indices(m.arg)
    return frozenset(n - 1 for n in free_indices(m.body) if n > 1)


def sup(m: Term) -> int:
    """Greatest free index of ``m``, or 0 for a closed term."""
    return max(free_indices(m), default=0)


def size(m: Term) -> int:
    """Number of AST nodes."""
    if isinstance(m, Index):
        return 1
    if isinstance(m, App):
        return 1 + size(m.fun) + size(m.arg)
    return 1 + size(m.body)


def lift(m: Term, cutoff: int = 0) -> Term:
    """Increment every index of ``m`` greater than ``cutoff`` by one.

    With the default cutoff this is the lift of all free indices; the cutoff
    grows by one under each binder so bound indices stay put.
    """
    if isinstance(m, Index):
        return Index(m.n + 1) if m.n > cutoff else m
    if isinstance(m, App):
        return App(lift(m.fun, cutoff), lift(m.arg, cutoff))
    return Abs(lift(m.body, cutoff + 1))


def subst(n: int, replacement: Term, target: Term) -> Term:
    """Beta-substitution ``{n/replacement}target``.

    Indices above ``n`` are decremented because the binder of ``n`` is being
    eliminated; the replacement is lifted whenever we go under a binder.
    """
    if n < 1:
        raise ValueError("substituted index must be >= 1")
    if isinstance(target, Index):
        if target.n > n:
            return Index(target.n - 1)
        if target.n == n:
            return replacement
        return target
    if isinstance(target, App):
        return App(subst(n, replacement, target.fun), subst(n, replacement, target.arg))
    return Abs(subst(n + 1, lift(replacement), target.body))


def beta_step(m: Term) -> Optional[Term]:
    """Contract the leftmost-outermost redex, or return None if there is none."""
    if isinstance(m, App):
        if isinstance(m.fun, Abs):
            return subst(1, m.arg, m.fun.body)
        fun = beta_step(m.fun)
        if fun is not None:
            return App(fun, m.arg)
        arg = beta_step(m.arg)
        if arg is not None:
            return App(m.fun, arg)
        return None
    if isinstance(m, Abs):
        body = beta_step(m.body)
        return None if body is None else Abs(body)
    return None


def normalize(m: Term, fuel: int = 10_000) -> Term:
    """Reduce to beta-normal form with at most ``fuel`` contractions.

    Raises FuelExhausted (carrying the last term reached) when the budget
    runs out, which is how divergent terms such as omega are reported.
    """
    if fuel < 1:
        raise ValueError("fuel must be >= 1")
    for step in range(fuel + 1):
        nxt = beta_step(m)
        if nxt is None:
            return m
        if step == fuel:
            break
        m = nxt
    raise FuelExhausted(m, fuel)


def is_beta_nf(m: Term) -> bool:
    if isinstance(m, Index):
        return True
    if isinstance(m, Abs):
        return is_beta_nf(m.body)
    return not isinstance(m.fun, Abs) and is_beta_nf(m.fun) and is_beta_nf(m.arg)


def spine(m: Term) -> tuple[Term, list[Term]]:
    """Split ``h a1 ... an`` into its head and argument list."""
    args = []
    while isinstance(m, App):
        args.append(m.arg)
        m = m.fun
    args.reverse()
    return m, args


def classify_nf(m: Term) -> NfShape:
    if isinstance(m, Index):
        return NfVar(m.n)
    if isinstance(m, Abs):
        return NfLam(classify_nf(m.body))
    head, args = spine(m)
    if not isinstance(head, Index) or not all(is_beta_nf(a) for a in args):
        raise NotNormal(f"not a beta-normal form: {m}")
    return NfSpine(head.n, tuple(args))
