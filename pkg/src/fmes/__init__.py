"""Exact computer algebra for the stuffle algebra of bi-indexed words.

The package implements the swap involution, the sl2-triple of derivations
with the weight -1 companion, weight-graded ideal quotients with exact
sparse elimination, the formal zeta-value quotient with the classical
double-shuffle comparison, a truncated q-series oracle, the appendix
machinery of truncated bimoulds, and the balanced-alphabet translation --
all over exact rationals, with a command-line interface for products,
normal forms, dimension tables and verification suites.
"""

from .words import LinComb, Word, count_words, grade, homogeneous_component
from .quasishuffle import (Derivation, quasi_shuffle, stuffle, stuffle_comb,
                           exp_diamond, log_diamond)
from .swap import swap_coeff_formula, swap_lincomb, swap_word
from .derivations import (apply_D, apply_W, apply_delta, apply_omega, apply_t,
                          commutator, polynomial_representation)
from .quotient import (BasisCache, EchelonBasis, IdealKind, dim, in_ideal,
                       normal_form)

__version__ = "0.1.0"

__all__ = [
    "BasisCache", "Derivation", "EchelonBasis", "IdealKind", "LinComb", "Word",
    "apply_D", "apply_W", "apply_delta", "apply_omega", "apply_t", "commutator",
    "count_words", "dim", "exp_diamond", "grade", "homogeneous_component",
    "in_ideal", "log_diamond", "normal_form", "polynomial_representation",
    "quasi_shuffle", "stuffle", "stuffle_comb", "swap_coeff_formula",
    "swap_lincomb", "swap_word", "__version__",
]
