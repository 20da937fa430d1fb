import pytest
from hypothesis import given, settings

from dbpt.inference import infer
from dbpt.itypes import NIL, OMEGA, Arrow, TVar, TypeU, Typing, ctx, omegas, u
from dbpt.principality import (T_C, T_NF, U_C, CType, HeadlessInput, NoPartition, Polarity,
                               ReconFailure, analyze, argument_partition, final_occurrences,
                               fo, grammar_class, held_decompositions, is_closed, is_complete,
                               is_finally_closed, is_minimally_closed, is_principal,
                               left_subtypes, polarity, recon)
from dbpt.syntax import parse_term, parse_typing
from dbpt.terms import Index

from strategies import normal_forms

a, b, c = TVar(0), TVar(1), TVar(2)
ALL = frozenset({T_C, T_NF, U_C})

# <b1 -> (b2 -> b3) -> b4 . (b1 -> b4) -> (b3 -> b2) -> a . nil => a>
COMP = CType.of(parse_typing(
    "(a1 -> (a2 -> a3) -> a4).((a1 -> a4) -> (a3 -> a2) -> a0).nil |- a0"))
RUNNING = parse_term("2 (\\. 1) 1 \\. (1 1)")


# neither grammar: a meet on the left, then a meet nested two lefts deep
PLAIN = Arrow(u(a, b), Arrow(u(Arrow(u(a, b), c)), a))


def var_ctype(n):
    return CType(omegas(n - 1) + ctx(a), a)


def test_grammar_classes():
    assert grammar_class(a) == ALL
    t = Arrow(u(a, b), c)
    assert grammar_class(t) == {T_NF}
    assert grammar_class(u(a, Arrow(u(b), c))) == {U_C}
    # the two grammars alternate on arrow lefts
    assert grammar_class(Arrow(u(Arrow(u(a, b), c)), a)) == {T_C, U_C}
    assert grammar_class(Arrow(u(Arrow(u(Arrow(u(a, b), c)), a)), b)) == {T_NF}
    assert grammar_class(PLAIN) == frozenset()


def test_ctype_validation():
    with pytest.raises(ValueError):
        CType(NIL, None)
    with pytest.raises(ValueError):
        CType(ctx(a), PLAIN)
    with pytest.raises(ValueError):
        CType(ctx(PLAIN), a)
    assert CType.of(Typing(ctx(a), a)).typing == Typing(ctx(a), a)
    with pytest.raises(HeadlessInput):
        CType(ctx(a)).typing


def test_left_subtypes():
    assert left_subtypes(var_ctype(3)) == {u(a)}
    assert left_subtypes(CType(NIL, a)) == frozenset()
    t = CType(ctx(u(b, c)), Arrow(u(a), Arrow(u(b), c)))
    assert left_subtypes(t) == {u(b, c), u(a), u(b)}


def test_polarity_and_final_occurrences():
    assert polarity(CType(ctx(a), a), a) == Polarity(1, 1)
    assert polarity(CType(ctx(a), a), b) == Polarity(0, 0)
    assert final_occurrences(Arrow(u(b), a)) == {0}
    assert final_occurrences(u(Arrow(u(c), a), b)) == {0, 1}
    assert final_occurrences(OMEGA) == frozenset()


def test_closed():
    assert is_closed(var_ctype(2))
    assert not is_closed(CType(NIL, a))
    assert is_closed(COMP)


def test_finally_closed():
    assert is_finally_closed(var_ctype(1))
    assert is_finally_closed(CType(ctx(a), Arrow(u(b), a)))
    assert not is_finally_closed(CType(ctx(Arrow(u(a), b)), a))
    with pytest.raises(HeadlessInput):
        is_finally_closed(CType(ctx(a)))


def test_held_decompositions():
    held = set(held_decompositions(CType(ctx(a), a)))
    assert held == {CType(ctx(a), a), CType(ctx(a)), CType(NIL, a)}
    assert list(held_decompositions(CType(NIL, a))) == [CType(NIL, a)]
    t = CType(ctx(u(a, Arrow(u(a), b)), OMEGA, b), b)
    for h in held_decompositions(t):
        for i, e in enumerate(h.context):
            assert all(e.items.count(x) <= t.context[i].items.count(x) for x in e.items)


def test_minimally_closed_and_complete():
    t = var_ctype(2)
    assert is_minimally_closed(t) and is_complete(t)
    assert is_complete(COMP)


def test_example_mc():
    base = CType.of(infer(Index(1)))
    loop = Arrow(u(TVar(5)), TVar(5))
    extended = CType(base.context, Arrow(u(loop), base.head))
    pushed = CType((u(loop),) + base.context, base.head)
    assert is_complete(extended)
    assert is_closed(pushed) and is_finally_closed(pushed)
    assert not is_minimally_closed(pushed)


def test_principal():
    assert is_principal(var_ctype(3))
    assert not is_principal(COMP)
    assert is_principal(CType.of(infer(RUNNING)))


def test_fo():
    assert fo(a, omegas(2) + ctx(a)) == [(3, u(a))]
    assert fo(a, NIL) == []
    assert fo(0, COMP.context) == [(2, COMP.context[1])]


def test_recon():
    assert recon(omegas(3) + ctx(a), a) == (Index(4), NIL)
    with pytest.raises(ReconFailure) as info:
        recon(NIL, a)
    assert info.value.tag == "no-FO"
    with pytest.raises(ReconFailure) as info:
        recon(*COMP.typing)
    assert info.value.tag == "non-principal-argument"
    assert recon(*infer(RUNNING)) == (RUNNING, NIL)


@pytest.mark.parametrize("text, tag", [
    ("(a1 -> a0).(a2 -> a0).nil |- a0", "multiple-FO"),
    ("((a0 -> a1) /\\ (a1 -> a0)).nil |- a0", "head-variable-reoccurs"),
    ("(a0 -> a0).nil |- a0", "non-principal-argument"),
    ("(a0 /\\ (a1 -> a0)).a1.nil |- a0", "head-variable-reoccurs"),
    ("a1.nil |- a1 -> a0", "no-FO"),
    ("nil |- a1 -> a1 /\\ a0 -> a0", "leftover-nonempty"),
])
def test_recon_failure_tags(text, tag):
    with pytest.raises(ReconFailure) as info:
        recon(*parse_typing(text))
    assert info.value.tag == tag


def test_argument_partition():
    g, _ = infer(RUNNING)
    head = g[1].single
    phis = [x.single for x in (head.left, head.right.left, head.right.right.left)]
    assert argument_partition(g, 2, phis) == [NIL, ctx(TVar(1)), NIL]
    single = parse_typing("(a0 -> a1).a0.nil |- a1")
    assert argument_partition(single.context, 1, [a]) == [ctx(OMEGA, a)]
    comp_head = COMP.context[1].single
    with pytest.raises(NoPartition):
        argument_partition(COMP.context, 2, [x.single for x in
                                             (comp_head.left, comp_head.right.left)])


def test_analyze_running_example():
    assert analyze(CType.of(infer(RUNNING))) == {
        "closed": True, "fc": True, "mc": True, "complete": True, "principal": True}


@settings(max_examples=100, deadline=None)
@given(normal_forms())
def test_principal_typings_are_principal_and_reconstruct(n):
    t = infer(n)
    c = CType.of(t)
    assert all(analyze(c).values())
    assert recon(*t) == (n, NIL)
