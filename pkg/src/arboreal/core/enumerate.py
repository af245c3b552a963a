"""Canonical forms, exhaustive enumeration and random generation of small structures."""

from __future__ import annotations

import itertools
import random
from typing import Iterator

from ..errors import SizeCapError
from .structure import PointedStructure, Structure, Vocabulary

_MAX_CANON_PERMS = 400_000


def _invariant(A: Structure, x):
    sig = []
    for name, ts in A.relations.items():
        arity = A.vocab.arity(name)
        counts = [0] * arity
        diag = 0
        for t in ts:
            for i, y in enumerate(t):
                if y == x:
                    counts[i] += 1
            if all(y == x for y in t):
                diag += 1
        sig.append((name, diag, tuple(counts)))
    return tuple(sig)


def canonical_form(A: Structure, point: str | None = None):
    """Hashable isomorphism invariant that is complete: equal iff isomorphic.

    Brute force over the permutations that respect a degree refinement, so
    intended for small structures only.
    """
    blocks = {}
    for x in A.universe:
        inv = (x == point, _invariant(A, x))
        blocks.setdefault(inv, []).append(x)
    keys = sorted(blocks)
    groups = [blocks[k] for k in keys]
    total = 1
    for g in groups:
        for i in range(2, len(g) + 1):
            total *= i
    if total > _MAX_CANON_PERMS:
        raise SizeCapError(f"canonical form needs {total} permutations")
    best = None
    for choice in itertools.product(*(itertools.permutations(g) for g in groups)):
        order = [x for g in choice for x in g]
        idx = {x: i for i, x in enumerate(order)}
        code = tuple((name, tuple(sorted(tuple(idx[x] for x in t) for t in ts)))
                     for name, ts in sorted(A.relations.items()))
        if best is None or code < best:
            best = code
    return (A.vocab, tuple(keys), best)


def canonical_pointed(P: PointedStructure):
    return canonical_form(P.base, P.point)


def is_isomorphic(A: Structure, B: Structure) -> bool:
    return len(A) == len(B) and A.vocab == B.vocab and canonical_form(A) == canonical_form(B)


def element_names(n: int) -> list[str]:
    letters = "abcdefghijklmnopqrstuvwxyz"
    if n <= len(letters):
        return list(letters[:n])
    return [f"x{i}" for i in range(n)]


def all_structures(vocab, n: int, up_to_iso: bool = True) -> Iterator[Structure]:
    """Every structure on the universe a, b, c, ... of size n (optionally one per iso class)."""
    if not isinstance(vocab, Vocabulary):
        vocab = Vocabulary(vocab)
    elems = element_names(n)
    slots = []
    for name, arity in vocab.items():
        for t in itertools.product(elems, repeat=arity):
            slots.append((name, t))
    seen = set()
    for bits in itertools.product((False, True), repeat=len(slots)):
        rels = {name: [] for name in vocab.names}
        for on, (name, t) in zip(bits, slots):
            if on:
                rels[name].append(t)
        A = Structure(vocab, elems, rels)
        if up_to_iso:
            key = canonical_form(A)
            if key in seen:
                continue
            seen.add(key)
        yield A


def random_structure(rng: random.Random, vocab, n: int, density: float = 0.3) -> Structure:
    if not isinstance(vocab, Vocabulary):
        vocab = Vocabulary(vocab)
    elems = element_names(n)
    rels = {}
    for name, arity in vocab.items():
        rels[name] = [t for t in itertools.product(elems, repeat=arity) if rng.random() < density]
    return Structure(vocab, elems, rels)


def random_pointed(rng: random.Random, vocab, n: int, density: float = 0.3) -> PointedStructure:
    A = random_structure(rng, vocab, n, density)
    return PointedStructure(A, A.universe[0])
