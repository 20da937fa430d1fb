"""
Recognising principal typings and rebuilding terms
==================================================

A typing is packed as a C-type and tested for being closed, finally closed,
minimally closed, complete and principal. Principal ones determine their
term, which ``recon`` rebuilds.
"""

from dbpt import CType, ReconFailure, analyze, infer, parse_term, parse_typing, print_term, recon
from dbpt.itypes import Arrow, TVar, type_vars, u

n = parse_term("2 (\\. 1) 1 \\. (1 1)")
t = infer(n)
print(analyze(CType.of(t)))
term, rest = recon(*t)
print(print_term(term), rest)

###############################################################################
# Complete is weaker than principal. This C-type passes the first four tests,
# but its context cannot be split into complete parts for the arguments.

comp = CType.of(parse_typing(
    "(a1 -> (a2 -> a3) -> a4).((a1 -> a4) -> (a3 -> a2) -> a0).nil |- a0"))
print(analyze(comp))
try:
    recon(*comp.typing)
except ReconFailure as exc:
    print("recon:", exc.tag)

###############################################################################
# Adding a loop ``b -> b`` as an extra argument keeps a C-type complete.
# Pushing the same loop into the context instead yields a closed piece that
# is disconnected from the rest, so minimal closure fails.

base = CType.of(infer(parse_term("1")))
b = TVar(max(type_vars(base.typing)) + 1)
loop = Arrow(u(b), b)
print(analyze(CType(base.context, Arrow(u(loop), base.head))))
print(analyze(CType((u(loop),) + base.context, base.head)))

###############################################################################
# A lone variable with an empty context has nothing to rebuild from.

try:
    recon((), TVar(0))
except ReconFailure as exc:
    print("recon:", exc.tag)
