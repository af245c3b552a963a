from .structure import (EQ, Homomorphism, PointedStructure, Structure, Vocabulary,
                        identity, is_homomorphism)
from .search import exists_homomorphism, find_homomorphism
from .colimits import (collapse_I, coproduct, coproduct_many, expand_I, factorize, product,
                       pushout, quotient, quotient_I, wide_pushout)
from .enumerate import all_structures, canonical_form, is_isomorphic, random_structure

__all__ = [
    "EQ", "Homomorphism", "PointedStructure", "Structure", "Vocabulary", "identity",
    "is_homomorphism", "exists_homomorphism", "find_homomorphism", "collapse_I", "coproduct",
    "coproduct_many", "expand_I", "factorize", "product", "pushout", "quotient", "quotient_I",
    "wide_pushout", "all_structures", "canonical_form", "is_isomorphic", "random_structure",
]
