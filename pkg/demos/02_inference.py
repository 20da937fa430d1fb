"""
Principal typings of normal forms
=================================

``infer`` computes a typing for any normal form. Contexts only mention the
free indices (relevance), intersections appear only to the left of arrows,
and every other typing of the term is a substitution instance.
"""

from dbpt import (SystemId, apply_subst, check_nf_typing, completeness_witness, infer,
                  infer_checked, parse_term, parse_typing, print_type, print_typing)
from dbpt.typing_rules import to_sexpr

n = parse_term("2 (\\. 1) 1 \\. (1 1)")
t = infer(n)
print(print_typing(t))

###############################################################################
# The derivation returned alongside the typing replays under both systems.

t, d = infer_checked(n)
print(to_sexpr(d))

###############################################################################
# Self-application needs an intersection: the bound variable is used both as
# a function and as its own argument.

print(print_typing(infer(parse_term("\\. 1 1"))))

###############################################################################
# A more specific typing, checked independently, and the substitution that
# turns the principal typing into it.

target = parse_typing("((a1 -> a1) -> a1 -> a1).nil |- (a1 -> a1) -> a1 -> a1")
check_nf_typing(parse_term("1"), target, SystemId.SMR)
s = completeness_witness(parse_term("1"), target)
print({f"a{v}": print_type(x) for v, x in s.items()})
print(print_typing(apply_subst(s, infer(parse_term("1")))))
