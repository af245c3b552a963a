from .syntax import (And, Atom, Bottom, Box, Dia, Eq, Exists, Forall, Formula, Implies, Not, Or,
                     Prop, Top, parse, parse_fo, parse_modal, to_sexpr)
from .semantics import (eval_fo, eval_modal, formula_size, free_vars, holds, is_existential_positive,
                        is_negative, modal_depth, quantifier_rank)
from .characteristic import ep_characteristic_fo, ep_characteristic_modal
from .sampling import FRAGMENTS, sample_formulas

__all__ = [
    "And", "Atom", "Bottom", "Box", "Dia", "Eq", "Exists", "Forall", "Formula", "Implies", "Not",
    "Or", "Prop", "Top", "parse", "parse_fo", "parse_modal", "to_sexpr", "eval_fo", "eval_modal",
    "formula_size", "free_vars", "holds", "is_existential_positive", "is_negative", "modal_depth",
    "quantifier_rank", "ep_characteristic_fo", "ep_characteristic_modal", "FRAGMENTS",
    "sample_formulas",
]
