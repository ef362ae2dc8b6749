"""Exact computations in free products of cyclic p-groups and their relatives."""

from .coset import CosetLimitError, CosetTable, Presentation, quotient_order, todd_coxeter
from .freeprod import FreeProductContext, element_order, nf_reduce
from .intmat import IntMatrix, SmithForm, abelian_invariants, determinant, smith_normal_form
from .parse import ParseError, parse_presentation, parse_word
from .word import AlphabetError, Word, commutator, lcs_relators

__version__ = "0.1.0"

__all__ = [
    "AlphabetError", "CosetLimitError", "CosetTable", "FreeProductContext", "IntMatrix",
    "ParseError", "Presentation", "SmithForm", "Word", "abelian_invariants", "commutator",
    "determinant", "element_order", "lcs_relators", "nf_reduce", "parse_presentation",
    "parse_word", "quotient_order", "smith_normal_form", "todd_coxeter",
]
