"""Intersection types with de Bruijn indices: principal typings of normal forms.

Terms live in :mod:`dbpt.terms`, types in :mod:`dbpt.itypes`, the systems SM
and SM_r in :mod:`dbpt.typing_rules`, inference in :mod:`dbpt.inference` and
the characterisation of principal typings together with reconstruction in
:mod:`dbpt.principality`. :mod:`dbpt.oracle` holds the exhaustive checkers.
"""
from .inference import FreshSupply, NoWitness, completeness_witness, infer, infer_checked
from .itypes import (NIL, OMEGA, Arrow, TVar, TypeU, Typing, apply_subst, canonicalize,
                     ctx, ctx_and, match, typing_alpha_equiv, u)
from .principality import (CType, NoPartition, ReconFailure, analyze, argument_partition, fo,
                           is_closed, is_complete, is_finally_closed, is_minimally_closed,
                           is_principal, recon)
from .syntax import (ParseError, parse_context, parse_term, parse_type, parse_typing,
                     print_context, print_term, print_type, print_typing)
from .terms import (Abs, App, FuelExhausted, Index, NotNormal, beta_step, free_indices,
                    is_beta_nf, lift, normalize, subst, sup)
from .typing_rules import (Derivation, NotDerivable, RuleViolation, SystemId, check_derivation,
                           check_nf_typing, sr_counterexample)

__version__ = "0.1.0"
