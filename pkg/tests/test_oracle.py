import itertools

import pytest

from dbpt.inference import completeness_witness, infer
from dbpt.itypes import Arrow, TVar, Typing, apply_subst, typing_size, u
from dbpt.oracle import (EnumBudget, _layers, _types, ctype_violations, enum_all_terms,
                         enum_beta_nfs, enum_ctypes, enum_types, enum_typings, sweep)
from dbpt.principality import is_minimally_closed, minimally_closed_by_search
from dbpt.syntax import parse_term
from dbpt.terms import Abs, App, Index, NotNormal, is_beta_nf, size, sup
from dbpt.typing_rules import SystemId, check_nf_typing, derivable, is_var_r_type


def test_budget_validation():
    with pytest.raises(ValueError):
        EnumBudget(max_term_size=0)
    with pytest.raises(ValueError):
        EnumBudget(type_var_pool=0)


def test_enum_small_budgets():
    assert set(enum_beta_nfs(EnumBudget(1, 2))) == {Index(1), Index(2)}
    # the free-index bound applies after binding, so \.2 (free index 1) is in range
    assert set(enum_beta_nfs(EnumBudget(2, 1))) == {Index(1), Abs(Index(1)), Abs(Index(2))}


@pytest.mark.parametrize("size_, index, count", [(3, 1, 7), (4, 2, 33), (5, 2, 91)])
def test_enum_matches_filter(size_, index, count):
    b = EnumBudget(size_, index)
    got = list(enum_beta_nfs(b))
    assert len(got) == len(set(got)) == count
    assert set(got) == {m for m in enum_all_terms(b) if is_beta_nf(m)}
    assert all(size(m) <= size_ for m in got)


def test_enum_order_is_by_size_and_stable():
    got = list(enum_beta_nfs(EnumBudget(5, 2)))
    assert [size(m) for m in got] == sorted(size(m) for m in got)
    assert got == list(enum_beta_nfs(EnumBudget(5, 2)))


def test_enum_types_respect_bounds():
    ts = list(enum_types(5, pool=2, width=2))
    assert len(ts) == len(set(ts))
    assert TVar(0) in ts and Arrow(u(TVar(0), TVar(1)), TVar(0)) in ts


def test_enum_typings_index_one_smr():
    b = EnumBudget(1, 1, max_type_size=5)
    got = list(enum_typings(Index(1), b))
    assert got
    for g, t in got:
        assert g == (u(t),) and is_var_r_type(t)
    assert Typing((u(TVar(0)),), TVar(0)) in got


def test_enum_typings_identity_smr():
    for g, t in enum_typings(Abs(Index(1)), EnumBudget(2, 1, max_type_size=6)):
        assert g == () and t.left == u(t.right)


def test_enum_typings_rejects_redex():
    with pytest.raises(NotNormal):
        list(enum_typings(App(Abs(Index(1)), Index(1)), EnumBudget()))


def _brute_force(n, system, bound=6, pool=2, width=2):
    """Every typing of ``n`` within bound, by filtering all candidates through the checker."""
    layers = [v for s in range(1, bound + 1) for v in _layers(s, pool, width)]
    tys = [t for s in range(1, bound + 1) for t in _types(s, pool, width)]
    out = set()
    for g in itertools.product(layers, repeat=sup(n)):
        for t in tys:
            typing = Typing(tuple(g), t)
            if typing_size(typing) <= bound and derivable(n, typing, system):
                out.add(typing)
    return out


@pytest.mark.parametrize("text", ["1", "2", "\\. 1", "\\. 2", "1 1", "1 2", "2 1", "\\. 1 1",
                                  "\\. \\. 1", "1 (\\. 1)"])
@pytest.mark.parametrize("system", list(SystemId))
def test_enum_typings_matches_brute_force(text, system):
    n = parse_term(text)
    b = EnumBudget(5, 2, max_type_size=6, max_intersection_width=2, type_var_pool=2)
    assert set(enum_typings(n, b, system)) == _brute_force(n, system)


def test_enumerated_typings_are_instances():
    for n in enum_beta_nfs(EnumBudget(3, 2)):
        t = infer(n)
        for typing in enum_typings(n, EnumBudget(3, 2, max_type_size=7)):
            check_nf_typing(n, typing, SystemId.SMR)
            assert apply_subst(completeness_witness(n, typing), t) == typing


def test_sweep_pinned_count():
    report = sweep(EnumBudget(5, 2), ctypes=False)
    assert report.num_nfs == 91
    assert report.ok, report.summary()


def test_sweep_smallest_budget():
    report = sweep(EnumBudget(1, 1), completeness_size=1)
    assert report.num_nfs == 1
    assert report.checks["soundness"] == 1
    assert report.num_typings > 0
    assert report.ok, report.summary()


def test_enum_ctypes_are_distinct_and_checked():
    cs = list(enum_ctypes(EnumBudget(4, 2)))
    assert len(cs) == len(set(cs)) > 100
    assert not [v for c in cs if c.head is not None for v in ctype_violations(c)]


def test_mc_connectivity_agrees_with_search():
    for c in enum_ctypes(EnumBudget(5, 2)):
        if c.head is not None:
            assert is_minimally_closed(c) == minimally_closed_by_search(c)
