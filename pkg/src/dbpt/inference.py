"""Principal typings of beta-normal forms in SM_r."""
from __future__ import annotations

import itertools

from .itypes import (NIL, OMEGA, Arrow, TVar, Typing, apply_subst, arrows,
                     ctx, ctx_and, matches, omegas)
from .terms import NfLam, NfSpine, NfVar, NotNormal, Term, classify_nf
from .typing_rules import Derivation, NotDerivable, SystemId, check_nf_typing


class FreshSupply:
    """Hands out type variables ``a<start>, a<start+1>, ...`` in draw order."""

    def __init__(self, start: int = 0):
        self._counter = itertools.count(start)

    def fresh(self) -> TVar:
        return TVar(next(self._counter))


class InternalSoundnessFailure(AssertionError):
    pass


class NoWitness(ValueError):
    pass


def infer(n: Term, supply: FreshSupply | None = None) -> Typing:
    """Principal typing of the beta-normal form ``n``.

    Variables are drawn depth-first, left to right, and a spine draws its
    result variable after all of its arguments.
    """
    if supply is None:
        supply = FreshSupply()
    return _infer(classify_nf(n), supply)


def _infer(shape, supply: FreshSupply) -> Typing:
    if isinstance(shape, NfVar):
        a = supply.fresh()
        return Typing(omegas(shape.n - 1) + ctx(a), a)
    if isinstance(shape, NfLam):
        g, t = _infer(shape.body, supply)
        if g:
            return Typing(g[1:], Arrow(g[0], t))
        return Typing(NIL, Arrow(OMEGA, t))
    assert isinstance(shape, NfSpine)
    parts = [_infer(classify_nf(a), supply) for a in shape.args]
    a = supply.fresh()
    head = arrows([t for _, t in parts], a)
    return Typing(ctx_and(omegas(shape.head - 1) + ctx(head), *(g for g, _ in parts)), a)


def infer_checked(n: Term) -> tuple[Typing, Derivation]:
    t = infer(n)
    try:
        d = check_nf_typing(n, t, SystemId.SMR)
    except NotDerivable as exc:
        raise InternalSoundnessFailure(f"inferred typing {t} was refused: {exc}") from exc
    return t, d


def completeness_witness(n: Term, t: Typing) -> dict:
    """A substitution taking ``infer(n)`` to ``t``.

    Structural matching suffices because the principal typing is closed:
    every type variable is pinned by its two occurrences.
    """
    principal = infer(n)
    for s in matches(principal, t):
        if apply_subst(s, principal) == t:
            return s
    raise NoWitness(f"{t} is not an instance of {principal}")
