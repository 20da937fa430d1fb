"""
Why subject reduction fails here
================================

Contexts record exactly the free indices. Reducing ``(\\.\\.1) 3`` discards
the argument, so the free index 3 disappears, and the contractum cannot be
typed in the original context.
"""

from dbpt import SystemId, check_derivation, print_term, print_typing, sr_counterexample
from dbpt.typing_rules import to_sexpr

r = sr_counterexample()
print(print_term(r.redex), ":", print_typing(r.before))
print(print_term(r.contractum), ":", print_typing(r.after))

###############################################################################
# The redex derivation is valid in SM. It uses the rule for an argument that
# is thrown away.

print(to_sexpr(r.before_derivation))
print(print_typing(check_derivation(r.before_derivation, SystemId.SM)))

###############################################################################
# Neither direction survives the step.

print("subject reduction fails:", r.subject_reduction_fails)
print("subject expansion fails:", r.subject_expansion_fails)
