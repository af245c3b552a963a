"""Factorisation, finite (co)products, quotients, pushouts along embeddings and
the equality expansion/collapse pair."""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from ..errors import MalformedInputError, UnsupportedInputError
from .structure import EQ, Homomorphism, Structure


def factorize(f: Homomorphism) -> tuple[Homomorphism, Homomorphism]:
    """Split f into a surjection onto its image followed by the image inclusion."""
    img = f.image()
    mid = f.target.induced(img)
    surj = Homomorphism(f.source, mid, f.map, check=False)
    emb = Homomorphism(mid, f.target, {y: y for y in mid.universe}, check=False)
    return surj, emb


def _same_vocab(*structs):
    v = structs[0].vocab
    for s in structs[1:]:
        if s.vocab != v:
            raise MalformedInputError("vocabularies differ")
    return v


def product(A: Structure, B: Structure):
    """Cartesian product. Returns (A x B, projection to A, projection to B)."""
    vocab = _same_vocab(A, B)
    name = {}
    elems = []
    for x in A.universe:
        for y in B.universe:
            name[x, y] = f"({x},{y})"
            elems.append(name[x, y])
    rels = {}
    for r in vocab.names:
        ts = set()
        for s in A.rel(r):
            for t in B.rel(r):
                ts.add(tuple(name[p] for p in zip(s, t)))
        rels[r] = frozenset(ts)
    P = Structure._trusted(vocab, elems, rels)
    pa = Homomorphism(P, A, {n: x for (x, _), n in name.items()}, check=False)
    pb = Homomorphism(P, B, {n: y for (_, y), n in name.items()}, check=False)
    return P, pa, pb


def coproduct_many(parts: Sequence[Structure], vocab=None):
    """Disjoint union tagging elements of the i-th part as ``i:x``."""
    if not parts:
        if vocab is None:
            raise MalformedInputError("empty coproduct needs a vocabulary")
        return Structure(vocab, []), []
    vocab = _same_vocab(*parts)
    elems = []
    rels = {r: set() for r in vocab.names}
    injections = []
    for i, S in enumerate(parts):
        m = {x: f"{i}:{x}" for x in S.universe}
        elems.extend(m[x] for x in S.universe)
        for r, ts in S.relations.items():
            rels[r].update(tuple(m[x] for x in t) for t in ts)
        injections.append(m)
    U = Structure._trusted(vocab, elems, {r: frozenset(ts) for r, ts in rels.items()})
    return U, [Homomorphism(S, U, m, check=False) for S, m in zip(parts, injections)]


def coproduct(A: Structure, B: Structure):
    """Disjoint union. Returns (A + B, injection of A, injection of B)."""
    U, (ia, ib) = coproduct_many([A, B])
    return U, ia, ib


def quotient(A: Structure, pairs: Iterable[tuple[str, str]]):
    """Quotient by the equivalence generated by ``pairs``.

    Each class is named by its lexicographically least member; classes are
    listed in order of first appearance. Returns (A/~, quotient map).
    """
    parent = {x: x for x in A.universe}

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for x, y in pairs:
        rx, ry = find(x), find(y)
        if rx != ry:
            # keep the smaller name as root so the root is the class minimum
            if ry < rx:
                rx, ry = ry, rx
            parent[ry] = rx
    q = {x: find(x) for x in A.universe}
    elems = list(dict.fromkeys(q[x] for x in A.universe))
    rels = {r: frozenset(tuple(q[x] for x in t) for t in ts) for r, ts in A.relations.items()}
    Q = Structure._trusted(A.vocab, elems, rels)
    return Q, Homomorphism(A, Q, q, check=False)


def _require_embedding(f: Homomorphism, what: str):
    if not f.is_embedding():
        raise UnsupportedInputError(f"{what} is not an embedding; only pushouts along embeddings are supported")


def wide_pushout(legs: Sequence[Homomorphism], base: Structure | None = None):
    """Colimit of a star of embeddings ``a -> b_i``.

    Computed as the coproduct of the b_i modulo the identification of the
    images of a. With no legs the colimit is ``base`` itself.
    Returns (colimit, [b_i -> colimit]).
    """
    if not legs:
        if base is None:
            raise MalformedInputError("wide pushout of no legs needs the base structure")
        return base, []
    a = legs[0].source
    for f in legs:
        if f.source != a:
            raise MalformedInputError("legs must share their source")
        _require_embedding(f, "leg")
    U, inj = coproduct_many([f.target for f in legs])
    glue = []
    for x in a.universe:
        first = inj[0].map[legs[0].map[x]]
        for f, i in zip(legs[1:], inj[1:]):
            glue.append((first, i.map[f.map[x]]))
    Q, q = quotient(U, glue)
    maps = [Homomorphism(f.target, Q, {y: q.map[i.map[y]] for y in f.target.universe}, check=False)
            for f, i in zip(legs, inj)]
    return Q, maps


def pushout(f: Homomorphism, g: Homomorphism):
    """Amalgam of A and B over C for embeddings f: C -> A, g: C -> B.

    Returns (P, iA, iB); both injections are embeddings and the square commutes.
    """
    if f.source != g.source:
        raise MalformedInputError("pushout legs must share their source")
    P, (ia, ib) = wide_pushout([f, g])
    return P, ia, ib


def expand_I(A: Structure) -> Structure:
    """Add the reserved symbol I interpreted as the identity."""
    if EQ in A.vocab:
        raise MalformedInputError(f"vocabulary already contains the reserved symbol {EQ!r}")
    rels = dict(A.relations)
    rels[EQ] = frozenset((x, x) for x in A.universe)
    return Structure._trusted(A.vocab.extend(EQ, 2), A.universe, rels)


def quotient_I(A: Structure):
    """Collapse along I: (quotient of the I-free reduct, quotient map)."""
    if EQ not in A.vocab or A.vocab.arity(EQ) != 2:
        raise MalformedInputError(f"vocabulary lacks the binary symbol {EQ!r}")
    reduct = A.reduct(A.vocab.drop(EQ))
    return quotient(reduct, A.rel(EQ))


def collapse_I(A: Structure) -> Structure:
    return quotient_I(A)[0]


def relabel(A: Structure, mapping: Mapping[str, str]) -> Structure:
    return A.rename(mapping)
