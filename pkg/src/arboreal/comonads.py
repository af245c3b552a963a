"""The Ehrenfeucht-Fraisse comonad E_k, the modal comonad M_k and the
equality-aware adjunction built on E_k."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from .core.colimits import expand_I, quotient_I
from .core.structure import EQ, Homomorphism, PointedStructure, Structure, is_homomorphism
from .errors import MalformedInputError, UnsupportedInputError, check_size
from .forest import ForestStructure


def seq_name(seq) -> str:
    return "[" + ",".join(seq) + "]"


def ef_carrier_size(n: int, k: int) -> int:
    return sum(n ** i for i in range(1, k + 1))


@dataclass(eq=False)
class EFCoalgebra:
    """E_k(A): non-empty sequences of length at most k, ordered by prefix."""

    base: Structure
    k: int
    carrier: ForestStructure
    seq: dict = field(repr=False)   # element name -> tuple of base elements
    name: dict = field(repr=False)  # tuple -> element name

    def __len__(self):
        return len(self.carrier)


def _lifted_tuples(A: Structure, seq, rel_arity):
    """Related tuples of E_k(A) whose deepest element is ``seq``, as position tuples."""
    L = len(seq)
    out = []
    for name, arity in rel_arity:
        ts = A.rel(name)
        for pos in itertools.product(range(L), repeat=arity):
            if max(pos) != L - 1:
                continue
            if tuple(seq[i] for i in pos) in ts:
                out.append((name, pos))
    return out


def ef_build(A: Structure, k: int, cap=None) -> EFCoalgebra:
    if k < 0:
        raise MalformedInputError("k must be non-negative")
    check_size(ef_carrier_size(len(A), k), "E_k carrier", cap)
    elems = A.sorted_universe()
    rel_arity = list(A.vocab.items())
    names = []
    seq_of = {}
    name_of = {}
    parent = {}
    rels = {n: set() for n in A.vocab.names}

    def grow(prefix, pnames):
        for x in elems:
            s = prefix + (x,)
            nm = seq_name(s)
            names.append(nm)
            seq_of[nm] = s
            name_of[s] = nm
            chain = pnames + (nm,)
            if pnames:
                parent[nm] = pnames[-1]
            for rname, pos in _lifted_tuples(A, s, rel_arity):
                rels[rname].add(tuple(chain[i] for i in pos))
            if len(s) < k:
                grow(s, chain)

    if k > 0:
        grow((), ())
    base = Structure._trusted(A.vocab, names, {n: frozenset(ts) for n, ts in rels.items()})
    return EFCoalgebra(A, k, ForestStructure(base, parent), seq_of, name_of)


@lru_cache(maxsize=2048)
def ef_build_cached(A: Structure, k: int) -> EFCoalgebra:
    return ef_build(A, k)


def ef_counit(c: EFCoalgebra) -> Homomorphism:
    return Homomorphism(c.carrier.base, c.base, {nm: s[-1] for nm, s in c.seq.items()}, check=False)


def ef_comult(c: EFCoalgebra, cap=None) -> tuple[Homomorphism, EFCoalgebra]:
    """delta: E_k A -> E_k E_k A, sending a sequence to the sequence of its prefixes.

    Returns the map and the materialized target coalgebra.
    """
    outer = ef_build(c.carrier.base, c.k, cap)
    mapping = {}
    for nm, s in c.seq.items():
        prefixes = tuple(c.name[s[:i]] for i in range(1, len(s) + 1))
        mapping[nm] = outer.name[prefixes]
    return Homomorphism(c.carrier.base, outer.carrier.base, mapping, check=False), outer


def ef_map(f: Homomorphism, k: int, src: EFCoalgebra | None = None,
           dst: EFCoalgebra | None = None) -> Homomorphism:
    """E_k(f): apply f pointwise to every sequence."""
    src = src or ef_build(f.source, k)
    dst = dst or ef_build(f.target, k)
    mapping = {nm: dst.name[tuple(f.map[x] for x in s)] for nm, s in src.seq.items()}
    return Homomorphism(src.carrier.base, dst.carrier.base, mapping, check=False)


# Symbolic law check: elements are nested tuples, never materialized beyond E_k(A).

def _prefixes(s):
    return tuple(s[:i] for i in range(1, len(s) + 1))


def _comparable(s, t):
    n = min(len(s), len(t))
    return s[:n] == t[:n]


def _lifted_holds(A: Structure, name: str, tup, level: int) -> bool:
    """Membership of ``tup`` in the relation of E_k applied ``level`` times to A."""
    if level == 0:
        return tup in A.rel(name)
    for i, s in enumerate(tup):
        for t in tup[i + 1:]:
            if not _comparable(s, t):
                return False
    return _lifted_holds(A, name, tuple(s[-1] for s in tup), level - 1)


def check_ef_laws(A: Structure, k: int) -> bool:
    """Counit and coassociativity laws of E_k at A, plus homomorphism and surjectivity
    of the structure maps, checked on nested tuples."""
    c = ef_build(A, k)
    seqs = list(c.seq.values())
    for s in seqs:
        d = _prefixes(s)
        if d[-1] != s:                      # counit after comult
            return False
        if tuple(p[-1] for p in d) != s:    # E(counit) after comult
            return False
        if _prefixes(d) != tuple(_prefixes(p) for p in d):
            return False
    if {s[-1] for s in seqs} != set(A.universe):
        return False
    for name, ts in c.carrier.base.relations.items():
        for t in ts:
            st = tuple(c.seq[x] for x in t)
            if not _lifted_holds(A, name, tuple(s[-1] for s in st), 0):
                return False
            if not _lifted_holds(A, name, tuple(_prefixes(s) for s in st), 2):
                return False
    return True


# Modal comonad

def path_name(path) -> str:
    return "[" + ",".join(path) + "]"


@dataclass(eq=False)
class ModalCoalgebra:
    """M_k(A, a): labelled paths from a of length at most k, as a tree."""

    base: PointedStructure
    k: int
    carrier: ForestStructure
    path: dict = field(repr=False)  # element name -> (a0, R1, a1, ...)
    name: dict = field(repr=False)

    @property
    def point(self) -> str:
        return self.name[(self.base.point,)]

    def pointed(self) -> PointedStructure:
        return PointedStructure(self.carrier.base, self.point)

    def __len__(self):
        return len(self.carrier)


def _require_modal(vocab):
    if not vocab.is_modal:
        raise UnsupportedInputError("modal constructions need relation arities at most 2")


def modal_build(P: PointedStructure, k: int, cap=None) -> ModalCoalgebra:
    if k < 0:
        raise MalformedInputError("k must be non-negative")
    A = P.base
    _require_modal(A.vocab)
    unary = A.vocab.unary()
    binary = A.vocab.binary()
    succ = {x: {r: [] for r in binary} for x in A.universe}
    for r in binary:
        for x, y in sorted(A.rel(r)):
            succ[x][r].append(y)
    names, path_of, name_of, parent = [], {}, {}, {}
    rels = {n: set() for n in A.vocab.names}
    limit_check = [0]

    def add(p, par):
        nm = path_name(p)
        names.append(nm)
        path_of[nm] = p
        name_of[p] = nm
        limit_check[0] += 1
        if limit_check[0] % 1024 == 0:
            check_size(limit_check[0], "M_k carrier", cap)
        if par is not None:
            parent[nm] = par
            rels[p[-2]].add((par, nm))
        for u in unary:
            if (p[-1],) in A.rel(u):
                rels[u].add((nm,))
        if (len(p) - 1) // 2 < k:
            for r in binary:
                for y in succ[p[-1]][r]:
                    add(p + (r, y), nm)

    add((P.point,), None)
    check_size(len(names), "M_k carrier", cap)
    base = Structure._trusted(A.vocab, names, {n: frozenset(ts) for n, ts in rels.items()})
    return ModalCoalgebra(P, k, ForestStructure(base, parent), path_of, name_of)


@lru_cache(maxsize=2048)
def modal_build_cached(P: PointedStructure, k: int) -> ModalCoalgebra:
    return modal_build(P, k)


def modal_counit(c: ModalCoalgebra) -> Homomorphism:
    return Homomorphism(c.carrier.base, c.base.base, {nm: p[-1] for nm, p in c.path.items()}, check=False)


def modal_comult(c: ModalCoalgebra, cap=None) -> tuple[Homomorphism, ModalCoalgebra]:
    outer = modal_build(c.pointed(), c.k, cap)
    mapping = {}
    for nm, p in c.path.items():
        steps = [c.name[p[:1]]]
        for i in range(1, len(p), 2):
            steps.append(p[i])
            steps.append(c.name[p[: i + 2]])
        mapping[nm] = outer.name[tuple(steps)]
    return Homomorphism(c.carrier.base, outer.carrier.base, mapping, check=False), outer


def modal_map(f: Homomorphism, P: PointedStructure, k: int, src=None, dst=None) -> Homomorphism:
    """M_k(f) for a point-preserving f: (A, a) -> (B, f(a))."""
    Q = PointedStructure(f.target, f.map[P.point])
    src = src or modal_build(P, k)
    dst = dst or modal_build(Q, k)
    mapping = {}
    for nm, p in src.path.items():
        img = tuple(f.map[x] if i % 2 == 0 else x for i, x in enumerate(p))
        mapping[nm] = dst.name[img]
    return Homomorphism(src.carrier.base, dst.carrier.base, mapping, check=False)


def check_modal_laws(P: PointedStructure, k: int) -> bool:
    c = modal_build(P, k)
    eps = modal_counit(c)
    delta, outer = modal_comult(c)
    eps_outer = modal_counit(outer)
    for x in c.carrier.universe:
        if eps_outer.map[delta.map[x]] != x:
            return False
    Meps = modal_map(eps, c.pointed(), k, src=outer, dst=c)
    for x in c.carrier.universe:
        if Meps.map[delta.map[x]] != x:
            return False
    delta_outer, outer2 = modal_comult(outer)
    Mdelta = modal_map(delta, c.pointed(), k, src=outer, dst=outer2)
    for x in c.carrier.universe:
        if delta_outer.map[delta.map[x]] != Mdelta.map[delta.map[x]]:
            return False
    return (is_homomorphism(eps.map, c.carrier.base, P.base)
            and is_homomorphism(delta.map, c.carrier.base, outer.carrier.base)
            and eps.image() == reachable(P, k))


def reachable(P: PointedStructure, k: int) -> set:
    seen = {P.point}
    frontier = {P.point}
    binary = P.base.vocab.binary()
    for _ in range(k):
        nxt = set()
        for r in binary:
            for x, y in P.base.rel(r):
                if x in frontier and y not in seen:
                    nxt.add(y)
        seen |= nxt
        frontier = nxt
    return seen


# The adjunction over equality-expanded structures

def ef_adjoint_R(A: Structure, k: int) -> ForestStructure:
    """R_k(A) = E_k(J A) with the prefix order."""
    return ef_R(A, k).carrier


def ef_R(A: Structure, k: int) -> EFCoalgebra:
    if EQ in A.vocab:
        raise MalformedInputError(f"vocabulary already contains the reserved symbol {EQ!r}")
    return ef_build_cached(expand_I(A), k)


@dataclass(eq=False)
class Companion:
    """G_k(A) together with the quotient map from the sequences of R_k(A)."""

    structure: Structure
    coalgebra: EFCoalgebra
    quotient: dict  # sequence name -> class name

    def counit(self) -> Homomorphism:
        """G_k(A) -> A: each class goes to the last element of its sequences."""
        last = {}
        for nm, cls in self.quotient.items():
            last[cls] = self.coalgebra.seq[nm][-1]
        A = self.coalgebra.base
        return Homomorphism(self.structure, A.reduct(A.vocab.drop(EQ)), last, check=False)


@lru_cache(maxsize=2048)
def ef_companion(A: Structure, k: int) -> Companion:
    R = ef_R(A, k)
    H, q = quotient_I(R.carrier.base)
    return Companion(H, R, q.map)


def ef_adjoint_G(A: Structure, k: int) -> Structure:
    """G_k(A) = H(E_k(J A)): the carrier with I-related sequences identified."""
    return ef_companion(A, k).structure


def modal_adjoint_R(P: PointedStructure, k: int) -> ForestStructure:
    return modal_build_cached(P, k).carrier


def modal_adjoint_G(P: PointedStructure, k: int) -> PointedStructure:
    return modal_build_cached(P, k).pointed()


# Transposes for the EF adjunction

def L_of(P: ForestStructure):
    """L(P): forget the order and collapse I. Returns (structure, quotient map)."""
    H, q = quotient_I(P.base)
    return H, q.map


def transpose_flat(f: Homomorphism, P: ForestStructure, a: Structure, k: int) -> Homomorphism:
    """f: L(P) -> a  gives  P -> R_k(a), sending x to the images of its down-set."""
    R = ef_R(a, k)
    if P.height() > k:
        raise MalformedInputError(f"forest of height {P.height()} exceeds k = {k}")
    _, q = L_of(P)
    mapping = {}
    for x in P.universe:
        s = tuple(f.map[q[y]] for y in P.chain(x))
        mapping[x] = R.name[s]
    return Homomorphism(P.base, R.carrier.base, mapping, check=False)


def transpose_sharp(m: Homomorphism, P: ForestStructure, a: Structure, k: int) -> Homomorphism:
    """m: P -> R_k(a)  gives  L(P) -> a, sending a class to the last element of its image."""
    R = ef_R(a, k)
    H, q = L_of(P)
    mapping = {}
    for x in P.universe:
        y = R.seq[m.map[x]][-1]
        cls = q[x]
        if mapping.setdefault(cls, y) != y:
            raise MalformedInputError("map does not respect I, so it has no transpose")
    return Homomorphism(H, a, mapping, check=False)


def is_smooth(P: ForestStructure) -> bool:
    """I is an equivalence on P and every relation is stable under I-transport."""
    if EQ not in P.vocab:
        raise MalformedInputError(f"vocabulary lacks {EQ!r}")
    I = P.base.rel(EQ)
    U = P.universe
    if any((x, x) not in I for x in U):
        return False
    if any((y, x) not in I for x, y in I):
        return False
    cls = {x: frozenset(y for y in U if (x, y) in I) for x in U}
    for x, y in I:
        if cls[x] != cls[y]:
            return False
    for name, ts in P.base.relations.items():
        if name == EQ:
            continue
        for t in ts:
            for alt in itertools.product(*(sorted(cls[x]) for x in t)):
                if alt not in ts:
                    return False
    return True
