"""Game comonads, their Eilenberg-Moore forests, and homomorphism-preservation checks
on finite relational structures."""

from .core import (Homomorphism, PointedStructure, Structure, Vocabulary, find_homomorphism)
from .comonads import ef_adjoint_G, ef_build, modal_adjoint_G, modal_build
from .equivalence import decide_arrow, decide_equiv, decide_iso
from .errors import ArborealError, MalformedInputError, SizeCapError, UnsupportedInputError
from .extendability import (EnvironmentFamily, check_relative_extendability, default_environment,
                            extend_iterated, extend_once, find_matched_pairs, path_restrict)
from .hpt import HPReport, Universe, check_bcp, check_hp, check_idempotent, check_negative_restriction
from .io import load_structure, structure_from_json, structure_to_json

__all__ = [
    "Homomorphism", "PointedStructure", "Structure", "Vocabulary", "find_homomorphism",
    "ef_adjoint_G", "ef_build", "modal_adjoint_G", "modal_build",
    "decide_arrow", "decide_equiv", "decide_iso",
    "ArborealError", "MalformedInputError", "SizeCapError", "UnsupportedInputError",
    "EnvironmentFamily", "check_relative_extendability", "default_environment", "extend_iterated",
    "extend_once", "find_matched_pairs", "path_restrict",
    "HPReport", "Universe", "check_bcp", "check_hp", "check_idempotent", "check_negative_restriction",
    "load_structure", "structure_from_json", "structure_to_json",
]
