"""Seeded random sentences within a resource-bounded fragment."""

from __future__ import annotations

import random

from ..core.structure import Vocabulary
from ..errors import MalformedInputError
from .syntax import And, Atom, Bottom, Box, Dia, Eq, Exists, Forall, Implies, Not, Or, Prop, Top

FRAGMENTS = {
    "FO_k": ("fo", False), "EPFO_k": ("fo", True),
    "ML_k": ("ml", False), "EPML_k": ("ml", True), "ML_k(#)": ("gml", False),
}
_ALIASES = {"fo": "FO_k", "epfo": "EPFO_k", "ep-fo": "EPFO_k", "∃+fo_k": "EPFO_k",
            "ml": "ML_k", "epml": "EPML_k", "ep-ml": "EPML_k", "∃+ml_k": "EPML_k",
            "gml": "ML_k(#)", "ml#": "ML_k(#)", "ml_k(#)": "ML_k(#)"}

MAX_CONNECTIVE_DEPTH = 3


def fragment_key(fragment: str) -> str:
    if fragment in FRAGMENTS:
        return fragment
    key = _ALIASES.get(fragment.lower())
    if key is None:
        raise MalformedInputError(f"unknown fragment {fragment!r}; expected one of {sorted(FRAGMENTS)}")
    return key


def sample_formulas(vocab, k: int, fragment: str, count: int, seed: int, max_grade: int = 3):
    """``count`` sentences of the fragment with quantifier rank / modal depth at most k.

    The same arguments always give the same list.
    """
    if not isinstance(vocab, Vocabulary):
        vocab = Vocabulary(vocab)
    kind, positive = FRAGMENTS[fragment_key(fragment)]
    rng = random.Random(seed)
    if kind == "fo":
        return [_fo(rng, vocab, k, (), 0, positive) for _ in range(count)]
    if not vocab.is_modal:
        raise MalformedInputError("modal fragments need arities at most 2")
    graded = kind == "gml"
    return [_ml(rng, vocab, k, 0, positive, graded, max_grade) for _ in range(count)]


def _fo(rng, vocab, budget, scope, depth, positive):
    options = []
    if scope:
        options += ["atom"] * 3 + ["eq"]
    if depth < MAX_CONNECTIVE_DEPTH:
        options += ["and", "or"]
        if not positive:
            options += ["not", "implies"]
    if budget > 0:
        options += ["exists"] * 3
        if not positive:
            options += ["forall"] * 3
    if not options:
        return rng.choice([Top(), Bottom()])
    pick = rng.choice(options)
    if pick == "atom":
        name = rng.choice(vocab.names)
        return Atom(name, tuple(rng.choice(scope) for _ in range(vocab.arity(name))))
    if pick == "eq":
        return Eq(rng.choice(scope), rng.choice(scope))
    if pick in ("and", "or"):
        args = tuple(_fo(rng, vocab, budget, scope, depth + 1, positive) for _ in range(2))
        return And(args) if pick == "and" else Or(args)
    if pick == "not":
        return Not(_fo(rng, vocab, budget, scope, depth + 1, positive))
    if pick == "implies":
        return Implies(_fo(rng, vocab, budget, scope, depth + 1, positive),
                       _fo(rng, vocab, budget, scope, depth + 1, positive))
    var = f"x{len(scope) + 1}"
    body = _fo(rng, vocab, budget - 1, scope + (var,), depth, positive)
    return Exists(var, body) if pick == "exists" else Forall(var, body)


def _ml(rng, vocab, budget, depth, positive, graded, max_grade):
    props = vocab.unary()
    rels = vocab.binary()
    options = ["const"]
    if props:
        options += ["prop"] * 3
    if depth < MAX_CONNECTIVE_DEPTH:
        options += ["and", "or"]
        if not positive:
            options += ["not"]
    if budget > 0 and rels:
        options += ["dia"] * 3
        if not positive:
            options += ["box"] * 2
    pick = rng.choice(options)
    if pick == "const":
        return Top() if positive or rng.random() < 0.5 else Bottom()
    if pick == "prop":
        return Prop(rng.choice(props))
    if pick in ("and", "or"):
        args = tuple(_ml(rng, vocab, budget, depth + 1, positive, graded, max_grade) for _ in range(2))
        return And(args) if pick == "and" else Or(args)
    if pick == "not":
        return Not(_ml(rng, vocab, budget, depth + 1, positive, graded, max_grade))
    grade = rng.randint(0, max_grade) if graded else None
    body = _ml(rng, vocab, budget - 1, depth, positive, graded, max_grade)
    rel = rng.choice(rels)
    return Dia(rel, grade, body) if pick == "dia" else Box(rel, grade, body)
