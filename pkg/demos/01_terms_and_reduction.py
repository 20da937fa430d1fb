"""
Terms, free indices and reduction
=================================

De Bruijn terms replace variable names by the number of binders between an
occurrence and its binder. An index that reaches past every binder is free
and points into the context.
"""

from dbpt import (beta_step, free_indices, is_beta_nf, lift, normalize, parse_term,
                  print_term, subst, sup)
from dbpt.terms import classify_nf

# the identity applied to a free variable
m = parse_term("(\\. 1) 3")
print(print_term(m), "free:", sorted(free_indices(m)), "sup:", sup(m))

###############################################################################
# One leftmost-outermost step contracts the redex. The argument drops into
# the body, and the free index 3 keeps pointing at the same context entry.

print(print_term(beta_step(m)))

###############################################################################
# Lifting shifts free indices past a new binder; bound ones stay put.

k = parse_term("\\. 1 2")
print(print_term(lift(k)), "|", print_term(subst(1, parse_term("5"), k)))

###############################################################################
# Normal forms have a small number of shapes: an index, an abstraction, or a
# head index applied to normal arguments.

for text in ["2", "\\. \\. 2 1", "2 (\\. 1) 1 \\. (1 1)"]:
    n = parse_term(text)
    print(text, "->", is_beta_nf(n), classify_nf(n))

###############################################################################
# Normalisation needs fuel, since some terms never stop reducing.

print(print_term(normalize(parse_term("(\\. \\. 2) 1 ((\\. 1 1) \\. 1 1)"))))
try:
    normalize(parse_term("(\\. 1 1) \\. 1 1"), fuel=50)
except Exception as exc:
    print(type(exc).__name__, exc)
