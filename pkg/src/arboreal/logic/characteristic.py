"""Existential-positive characteristic sentences.

B satisfies the rank-k sentence of A exactly when Duplicator survives k rounds
of the positive game from A into B; the modal version does the same for the
depth-k unravelling of a pointed structure.
"""

from __future__ import annotations

import itertools

from ..core.structure import PointedStructure, Structure
from ..errors import SizeCapError, UnsupportedInputError
from .syntax import And, Atom, Dia, Eq, Exists, Prop, Top, conj

DEFAULT_NODE_CAP = 10 ** 6


def _estimate_fo(A: Structure, k: int) -> int:
    n = len(A)
    facts = sum(len(ts) for ts in A.relations.values()) + n
    return sum(n ** i for i in range(k + 1)) * (facts + 2)


def ep_characteristic_fo(A: Structure, k: int, cap: int = DEFAULT_NODE_CAP):
    if k < 0:
        raise ValueError("k must be non-negative")
    if _estimate_fo(A, k) > cap:
        raise SizeCapError(f"characteristic sentence would exceed {cap} nodes")
    elems = A.sorted_universe()
    rels = list(A.vocab.items())

    def var(i):
        return f"x{i + 1}"

    def new_facts(tup):
        # facts of the tuple that mention its newest position
        n = len(tup)
        last = n - 1
        out = [Eq(var(i), var(last)) for i in range(last) if tup[i] == tup[last]]
        for name, arity in rels:
            rel = A.rel(name)
            for pos in itertools.product(range(n), repeat=arity):
                if last in pos and tuple(tup[i] for i in pos) in rel:
                    out.append(Atom(name, tuple(var(i) for i in pos)))
        return out

    def chi(tup, r):
        parts = new_facts(tup) if tup else []
        if r > 0:
            parts.extend(Exists(var(len(tup)), chi(tup + (a,), r - 1)) for a in elems)
        return conj(parts) if parts else And(())

    return chi((), k)


def ep_characteristic_modal(P: PointedStructure, k: int, cap: int = DEFAULT_NODE_CAP):
    A = P.base
    if not A.vocab.is_modal:
        raise UnsupportedInputError("modal characteristic formulas need arities at most 2")
    unary = A.vocab.unary()
    binary = A.vocab.binary()
    succ = {x: {r: sorted(y for (z, y) in A.rel(r) if z == x) for r in binary} for x in A.universe}
    count = [0]

    def chi(x, r):
        count[0] += 1
        if count[0] > cap:
            raise SizeCapError(f"characteristic formula would exceed {cap} nodes")
        parts = [Prop(u) for u in unary if (x,) in A.rel(u)]
        if r > 0:
            for rel in binary:
                parts.extend(Dia(rel, None, chi(y, r - 1)) for y in succ[x][rel])
        parts = list(dict.fromkeys(parts))  # successors with the same unravelling repeat a conjunct
        return conj(parts) if parts else Top()

    return chi(P.point, k)
