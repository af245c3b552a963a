"""Classical model-comparison games, played directly on the structures.

These are the independent references for the comonadic decisions: nothing
here builds a coalgebra or searches for homomorphisms.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from .core.structure import PointedStructure, Structure
from .errors import MalformedInputError, UnsupportedInputError


def _check_vocab(A, B):
    if A.vocab != B.vocab:
        raise MalformedInputError("vocabularies differ")


def _facts_with(S: Structure, dom, new):
    """Relation facts over ``dom`` (which contains ``new``) that mention ``new``."""
    out = []
    for name, arity in S.vocab.items():
        rel = S.rel(name)
        for t in itertools.product(dom, repeat=arity):
            if new in t:
                out.append((t, t in rel))
    return out


def oracle_ef_game(A: Structure, B: Structure, k: int) -> bool:
    """Duplicator wins the k-round Ehrenfeucht-Fraisse game on A and B."""
    _check_vocab(A, B)
    rels = list(A.vocab.items())

    def extends_iso(pairs, a, b):
        # is pairs + (a, b) still a partial isomorphism?
        fwd = dict(pairs)
        if a in fwd:
            return fwd[a] == b
        if any(y == b for _, y in pairs):
            return False
        fwd[a] = b
        dom = list(fwd)
        for name, arity in rels:
            ra, rb = A.rel(name), B.rel(name)
            for t in itertools.product(dom, repeat=arity):
                if a in t and ((t in ra) != (tuple(fwd[x] for x in t) in rb)):
                    return False
        return True

    @lru_cache(maxsize=None)
    def win(pairs, r):
        if r == 0:
            return True
        for a in A.universe:
            if not any(extends_iso(pairs, a, b) and win(pairs | {(a, b)}, r - 1) for b in B.universe):
                return False
        for b in B.universe:
            if not any(extends_iso(pairs, a, b) and win(pairs | {(a, b)}, r - 1) for a in A.universe):
                return False
        return True

    return win(frozenset(), k)


def oracle_ep_game(A: Structure, B: Structure, k: int) -> bool:
    """Duplicator wins the k-round existential-positive game: Spoiler moves only in A,
    and the position map must be a function that preserves every relation."""
    _check_vocab(A, B)
    rels = list(A.vocab.items())

    def extends_hom(pairs, a, b):
        fwd = dict(pairs)
        if a in fwd:
            return fwd[a] == b
        fwd[a] = b
        dom = list(fwd)
        for name, arity in rels:
            ra, rb = A.rel(name), B.rel(name)
            for t in itertools.product(dom, repeat=arity):
                if a in t and t in ra and tuple(fwd[x] for x in t) not in rb:
                    return False
        return True

    @lru_cache(maxsize=None)
    def win(pairs, r):
        if r == 0:
            return True
        return all(any(extends_hom(pairs, a, b) and win(pairs | {(a, b)}, r - 1) for b in B.universe)
                   for a in A.universe)

    return win(frozenset(), k)


def _modal_parts(P: PointedStructure):
    if not P.vocab.is_modal:
        raise UnsupportedInputError("modal games need relation arities at most 2")
    A = P.base
    props = {x: frozenset(u for u in A.vocab.unary() if (x,) in A.rel(u)) for x in A.universe}
    succ = {x: {r: [] for r in A.vocab.binary()} for x in A.universe}
    for r in A.vocab.binary():
        for x, y in sorted(A.rel(r)):
            succ[x][r].append(y)
    return props, succ


def oracle_bisim_game(P: PointedStructure, Q: PointedStructure, k: int) -> bool:
    """Duplicator wins the k-round bisimulation game from (P, Q)."""
    _check_vocab(P, Q)
    pa, sa = _modal_parts(P)
    pb, sb = _modal_parts(Q)
    binary = P.vocab.binary()

    @lru_cache(maxsize=None)
    def win(x, y, r):
        if pa[x] != pb[y]:
            return False
        if r == 0:
            return True
        for rel in binary:
            if not all(any(win(x2, y2, r - 1) for y2 in sb[y][rel]) for x2 in sa[x][rel]):
                return False
            if not all(any(win(x2, y2, r - 1) for x2 in sa[x][rel]) for y2 in sb[y][rel]):
                return False
        return True

    return win(P.point, Q.point, k)


def oracle_graded_bisim(P: PointedStructure, Q: PointedStructure, k: int) -> bool:
    """Depth-k graded bisimilarity by counting successor classes round by round."""
    _check_vocab(P, Q)
    pa, sa = _modal_parts(P)
    pb, sb = _modal_parts(Q)
    binary = P.vocab.binary()
    nodes = [(0, x) for x in P.base.universe] + [(1, y) for y in Q.base.universe]
    props = {**{(0, x): pa[x] for x in pa}, **{(1, y): pb[y] for y in pb}}
    succ = {**{(0, x): {r: [(0, z) for z in sa[x][r]] for r in binary} for x in sa},
            **{(1, y): {r: [(1, z) for z in sb[y][r]] for r in binary} for y in sb}}
    ids = {}
    colour = {v: ids.setdefault(("p", tuple(sorted(props[v]))), len(ids)) for v in nodes}
    for _ in range(k):
        new = {}
        for v in nodes:
            sig = (colour[v], tuple(tuple(sorted(colour[w] for w in succ[v][r])) for r in binary))
            new[v] = ids.setdefault(sig, len(ids))
        colour = new
    return colour[(0, P.point)] == colour[(1, Q.point)]
