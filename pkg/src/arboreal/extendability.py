"""One-step extensions by pushouts, relative extendability, and path restriction.

Paths of R_k(a) = E_k(J a) are identified with sequences over a: the
sequence s stands for the chain of its non-empty prefixes, and the empty
sequence for the root path. Everything here is relative to a finite
environment of structures ``e``; nothing claims extendability outright.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from .comonads import L_of, ef_R, is_smooth, seq_name
from .core.colimits import pushout, wide_pushout
from .core.enumerate import canonical_form
from .core.search import find_homomorphism
from .core.structure import EQ, Homomorphism, Structure, Vocabulary
from .errors import ArborealError, MalformedInputError, SizeCapError, UnsupportedInputError, size_cap
from .forest import ForestStructure, PathEmbedding, corestriction, forest_code

DEFAULT_ENV_NODES = 3
_ENV_CAP = 2_000_000


# sequences and their atomic types

def sequences(X: Structure, max_len: int):
    """All sequences over X of length 0..max_len, shorter first, lexicographic within a length."""
    elems = X.sorted_universe()
    for n in range(max_len + 1):
        yield from itertools.product(elems, repeat=n)


def atomic_type(X: Structure, seq) -> tuple:
    """Isomorphism type of the path of R_k(X) ending in ``seq``: equality pattern plus
    the relation facts among its positions."""
    n = len(seq)
    first = {}
    eq = tuple(first.setdefault(x, i) for i, x in enumerate(seq))
    facts = []
    for name, arity in X.vocab.items():
        rel = X.rel(name)
        for pos in itertools.product(range(n), repeat=arity):
            if tuple(seq[i] for i in pos) in rel:
                facts.append((name, pos))
    return (eq, frozenset(facts))


def _type_maps(alpha, beta) -> bool:
    """Is the position map a homomorphism (with equality) from type alpha to type beta?"""
    eq_a, facts_a = alpha
    eq_b, _ = beta
    for i, j in enumerate(eq_a):
        if j != i and eq_b[i] != eq_b[j]:
            return False
    return facts_a <= beta[1]


class PositiveTypes:
    """Rank-r existential-positive types of sequences in one structure, hash-consed to ints.

    Two sequences with the same rank-r type win or lose the same r-round
    positive games, in either direction, against any other structure. This
    lets large structures be compared by their few distinct types.
    """

    def __init__(self, X: Structure):
        self.X = X
        self.elems = X.sorted_universe()
        self.table = []       # id -> (atomic type, frozenset of child ids, rounds remain)
        self._ids = {}
        self._memo = {}

    def of(self, seq, r: int) -> int:
        key = (seq, r)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        atp = atomic_type(self.X, seq)
        kids = frozenset(self.of(seq + (x,), r - 1) for x in self.elems) if r > 0 else frozenset()
        sig = (atp, kids, r > 0)
        tid = self._ids.get(sig)
        if tid is None:
            tid = len(self.table)
            self.table.append(sig)
            self._ids[sig] = tid
        self._memo[key] = tid
        return tid


class _Games:
    """Positive games between a typed (possibly large) structure and a small one."""

    def __init__(self, types: PositiveTypes, Y: Structure):
        self.types = types
        self.Y = Y
        self.yelems = Y.sorted_universe()
        self._forth = {}
        self._back = {}
        self._atp = {}

    def atp(self, tau):
        hit = self._atp.get(tau)
        if hit is None:
            hit = self._atp[tau] = atomic_type(self.Y, tau)
        return hit

    def forth(self, tid, tau) -> bool:
        """Spoiler plays in the typed structure, Duplicator answers in Y."""
        key = (tid, tau)
        hit = self._forth.get(key)
        if hit is None:
            atp, kids, _ = self.types.table[tid]
            hit = _type_maps(atp, self.atp(tau)) and all(
                any(self.forth(kid, tau + (y,)) for y in self.yelems) for kid in kids)
            self._forth[key] = hit
        return hit

    def back(self, tau, tid) -> bool:
        """Spoiler plays in Y, Duplicator answers in the typed structure."""
        key = (tau, tid)
        hit = self._back.get(key)
        if hit is None:
            atp, kids, more = self.types.table[tid]
            hit = _type_maps(self.atp(tau), atp)
            if hit and more:
                hit = all(any(self.back(tau + (y,), kid) for kid in kids) for y in self.yelems)
            self._back[key] = hit
        return hit


def positive_game(X: Structure, s, Y: Structure, t, rounds: int) -> bool:
    """Duplicator survives ``rounds`` more rounds of the positive game from position (s, t),
    Spoiler playing in X."""
    return _positive_direct(X, tuple(s), Y, tuple(t), rounds)


def _positive_direct(X, s, Y, t, rounds):
    types = PositiveTypes(X)
    return _Games(types, Y).forth(types.of(s, rounds), t)


def coslice_equivalent(a: Structure, s, e: Structure, t, k: int) -> bool:
    """co_m and co_n map to each other over their common path, for m = s in R_k(a), n = t in R_k(e)."""
    s, t = tuple(s), tuple(t)
    if atomic_type(a, s) != atomic_type(e, t):
        return False
    r = k - len(s)
    return _positive_direct(a, s, e, t, r) and _positive_direct(e, t, a, s, r)


# the same relation by homomorphism search on the corestrictions

def _seq_path(a: Structure, k: int, s) -> PathEmbedding:
    R = ef_R(a, k)
    return PathEmbedding(R.carrier, tuple(R.name[s[:i]] for i in range(1, len(s) + 1)))


def coslice_arrow(a: Structure, s, e: Structure, t, k: int):
    """A homomorphism L(S_s) -> e sending the classes of the prefixes of s to t, if any.

    By the adjunction this is the same as a morphism S_s -> R_k(e) extending s -> t.
    """
    s, t = tuple(s), tuple(t)
    if len(s) != len(t):
        raise MalformedInputError("paths of different length")
    m = _seq_path(a, k, s)
    S, _, co = corestriction(m)
    LS, q = L_of(S)
    cons = {}
    for name, y in zip(co.chain, t):
        if cons.setdefault(q[name], y) != y:
            return None
    return find_homomorphism(LS, e, cons)


# environments

@dataclass
class EnvironmentFamily:
    """Structures e ranged over by extendability checks, each with a note on its origin."""

    members: list = field(default_factory=list)
    origins: list = field(default_factory=list)

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def add(self, e: Structure, origin: str = "supplied"):
        self.members.append(e)
        self.origins.append(origin)
        return self


def _tree_shapes(n: int, k: int):
    """Parent maps of rooted trees on nodes 0..n-1 (node i > 0 has a parent < i), height <= k."""
    if n == 0:
        return
    for parents in itertools.product(*(range(i) for i in range(1, n))):
        depth = [1]
        for i, p in enumerate(parents, start=1):
            depth.append(depth[p] + 1)
        if max(depth) <= k:
            yield parents


@lru_cache(maxsize=64)
def _default_environment(vocab: Vocabulary, k: int, N: int):
    if EQ in vocab:
        raise MalformedInputError(f"vocabulary already contains the reserved symbol {EQ!r}")
    full = vocab.extend(EQ, 2)
    members, origins = [], []
    seen_trees, seen_structs = set(), set()
    budget = 0
    for n in range(1, N + 1):
        names = [f"t{i}" for i in range(n)]
        for parents in _tree_shapes(n, k):
            parent = {names[i]: names[p] for i, p in enumerate(parents, start=1)}
            skeleton = ForestStructure(Structure(full, names), parent)
            slots = []
            for rel, arity in full.items():
                for t in itertools.product(names, repeat=arity):
                    distinct = list(dict.fromkeys(t))
                    if all(skeleton.comparable(x, y) for x, y in itertools.combinations(distinct, 2)):
                        slots.append((rel, t))
            budget += 2 ** len(slots)
            if budget > _ENV_CAP:
                raise SizeCapError(f"environment enumeration exceeds {_ENV_CAP} candidate trees")
            for bits in itertools.product((False, True), repeat=len(slots)):
                rels = {rel: [] for rel in full.names}
                for on, (rel, t) in zip(bits, slots):
                    if on:
                        rels[rel].append(t)
                T = ForestStructure(Structure(full, names, rels), parent)
                code = forest_code(T)
                if code in seen_trees:
                    continue
                seen_trees.add(code)
                e, _ = L_of(T)
                key = canonical_form(e)
                if key in seen_structs:
                    continue
                seen_structs.add(key)
                members.append(e)
                origins.append(f"L of tree {parent or 'single node'} with {dict((r, sorted(ts)) for r, ts in rels.items() if ts)}")
    return members, origins


def default_environment(vocab, k: int, N: int = DEFAULT_ENV_NODES) -> EnvironmentFamily:
    """Collapses of all tree-ordered equality-expanded structures with at most N nodes,
    height at most k and condition (E), one per isomorphism class."""
    if not isinstance(vocab, Vocabulary):
        vocab = Vocabulary(vocab)
    if N <= 0:
        return EnvironmentFamily()
    members, origins = _default_environment(vocab, k, N)
    return EnvironmentFamily(list(members), list(origins))


# matched pairs and the one-step extension

@dataclass(eq=False)
class MatchedPair:
    """Paths m = u in R_k(a), n = v in R_k(e) with isomorphic domains and a map
    L(S_n) -> a agreeing with u on the common path."""

    e: Structure
    u: tuple
    v: tuple
    to_a: Homomorphism           # L(S_v) -> a
    LS: Structure                # L(S_v)
    path_classes: tuple          # classes of the prefixes of v inside L(S_v)
    to_e: Homomorphism | None = None  # L(S_u) -> e, when the pair is matched both ways

    @property
    def equivalent(self) -> bool:
        return self.to_e is not None


def find_matched_pairs(a: Structure, e: Structure, k: int, both_ways: bool = True) -> list:
    Re = ef_R(e, k)
    out = []
    a_seqs = {}
    for u in sequences(a, k):
        a_seqs.setdefault(len(u), []).append(u)
    for v in sequences(e, k):
        tv = atomic_type(e, v)
        candidates = [u for u in a_seqs.get(len(v), []) if atomic_type(a, u) == tv]
        if not candidates:
            continue
        n = PathEmbedding(Re.carrier, tuple(Re.name[v[:i]] for i in range(1, len(v) + 1)))
        S, _, co = corestriction(n)
        LS, q = L_of(S)
        classes = tuple(q[x] for x in co.chain)
        for u in candidates:
            cons = {}
            if any(cons.setdefault(c, x) != x for c, x in zip(classes, u)):
                continue
            g = find_homomorphism(LS, a, cons)
            if g is None:
                continue
            h = coslice_arrow(a, u, e, v, k) if both_ways else None
            out.append(MatchedPair(e, u, v, g, LS, classes, h))
    return out


@dataclass(eq=False)
class Extension:
    """Result of one extension step: a section s: a -> b with a verified retraction."""

    a: Structure
    b: Structure
    section: Homomorphism
    retraction: Homomorphism
    pairs: int

    def certificate(self) -> dict:
        return {
            "source_size": len(self.a),
            "target_size": len(self.b),
            "matched_pairs": self.pairs,
            "section": dict(sorted(self.section.map.items())),
            "retraction": dict(sorted(self.retraction.map.items())),
            "retraction_after_section_is_identity": all(
                self.retraction.map[self.section.map[x]] == x for x in self.a.universe),
        }


def _tidy_names(a: Structure, b: Structure, s: dict):
    """Rename b so that the image of a keeps a's names and new elements are n0, n1, ..."""
    image = {y: x for x, y in s.items()}
    used = set(a.universe)
    ren = {}
    counter = 0
    for y in b.universe:
        if y in image:
            ren[y] = image[y]
            continue
        while f"n{counter}" in used:
            counter += 1
        ren[y] = f"n{counter}"
        used.add(ren[y])
        counter += 1
    return b.rename(ren), ren


def extend_once(a: Structure, k: int, env: EnvironmentFamily, cap=None) -> Extension:
    """Glue a copy of L(S_v) onto a along u for every matched pair, all at once."""
    limit = size_cap(cap)
    legs = []
    total = len(a)
    for e in env:
        for pair in find_matched_pairs(a, e, k, both_ways=False):
            LP = pair.LS.induced(pair.path_classes)
            u_sharp = Homomorphism(LP, a, {c: x for c, x in zip(pair.path_classes, pair.u)}, check=False)
            incl = Homomorphism(LP, pair.LS, {c: c for c in LP.universe}, check=False)
            total += len(pair.LS) - len(LP)
            if total > limit:
                raise SizeCapError(f"extension would exceed {limit} elements")
            _, leg, _ = pushout(u_sharp, incl)
            legs.append(leg)
    if legs:
        b, maps = wide_pushout(legs)
        s = legs[0].then(maps[0])
    else:
        b = a
        s = Homomorphism(a, a, {x: x for x in a.universe}, check=False)
    b, ren = _tidy_names(a, b, s.map)
    s = Homomorphism(a, b, {x: ren[y] for x, y in s.map.items()}, check=False)
    r = find_homomorphism(b, a, {y: x for x, y in s.map.items()})
    if r is None:
        raise ArborealError("no retraction found for the extension; this contradicts the construction")
    return Extension(a, b, s, r, len(legs))


@dataclass(eq=False)
class ChainLink:
    """b_i together with the composite section a -> b_i and retraction b_i -> a."""

    b: Structure
    section: Homomorphism
    retraction: Homomorphism

    def verified(self) -> bool:
        return all(self.retraction.map[self.section.map[x]] == x for x in self.section.source.universe)


def extend_iterated(a: Structure, k: int, env: EnvironmentFamily, steps: int, cap=None) -> list:
    """Finite prefix a = b_0 -> b_1 -> ... -> b_steps of the extension chain."""
    if steps < 0:
        raise MalformedInputError("steps must be non-negative")
    ident = Homomorphism(a, a, {x: x for x in a.universe}, check=False)
    chain = [ChainLink(a, ident, ident)]
    for _ in range(steps):
        last = chain[-1]
        ext = extend_once(last.b, k, env, cap)
        chain.append(ChainLink(ext.b, last.section.then(ext.section),
                               ext.retraction.then(last.retraction)))
    return chain


# relative extendability

@dataclass
class ExtendabilityReport:
    holds: bool
    checked: int
    counterexample: dict | None = None
    note: str = "relative to the supplied environment only"

    def __bool__(self):
        return self.holds

    def to_json(self):
        return {"holds": self.holds, "checked": self.checked,
                "counterexample": self.counterexample, "note": self.note}


def check_relative_extendability(h: Homomorphism, k: int, env: EnvironmentFamily) -> ExtendabilityReport:
    """Every matched pair (m, n) with n' one step above n has a partner m' above R_k(h)(m)
    with matching domain and co_m' and co_n' mapping to each other."""
    a, b = h.source, h.target
    btypes = PositiveTypes(b)
    atypes = PositiveTypes(a)
    checked = 0
    for ei, e in enumerate(env):
        to_e_a = _Games(atypes, e)
        to_e_b = _Games(btypes, e)
        a_seqs = {}
        for s in sequences(a, k - 1):
            a_seqs.setdefault((len(s), atomic_type(a, s)), []).append(s)
        for t in sequences(e, k - 1):
            r = k - len(t)
            for s in a_seqs.get((len(t), atomic_type(e, t)), []):
                tid = atypes.of(s, r)
                if not (to_e_a.forth(tid, t) and to_e_a.back(t, tid)):
                    continue
                hs = tuple(h.map[x] for x in s)
                for y in e.sorted_universe():
                    t2 = t + (y,)
                    checked += 1
                    want = atomic_type(e, t2)
                    found = None
                    tried = set()
                    for x in b.sorted_universe():
                        cand = hs + (x,)
                        tid2 = btypes.of(cand, r - 1)
                        if tid2 in tried:
                            continue
                        tried.add(tid2)
                        if (btypes.table[tid2][0] == want and to_e_b.forth(tid2, t2)
                                and to_e_b.back(t2, tid2)):
                            found = cand
                            break
                    if found is None:
                        return ExtendabilityReport(False, checked, {
                            "environment_index": ei,
                            "environment_member": _structure_brief(e),
                            "m": [seq_name(s)], "n": [seq_name(t)], "n_extended": [seq_name(t2)],
                            "image_of_m": [seq_name(hs)],
                        })
    return ExtendabilityReport(True, checked)


def _structure_brief(S: Structure):
    return {"universe": list(S.universe),
            "relations": {r: [list(t) for t in sorted(ts)] for r, ts in S.relations.items()}}


# path restriction

def path_restrict(Q: ForestStructure, a: Structure, j: Homomorphism):
    """Restrict a smooth chain Q to the elements whose I-class lies in the image of j: a -> L(Q).

    Returns (Q_a, iso L(Q_a) -> a).
    """
    if not Q.is_chain():
        raise MalformedInputError("path restriction needs a chain")
    if not is_smooth(Q):
        raise UnsupportedInputError("path is not smooth: I must be an equivalence stable under transport")
    H, q = L_of(Q)
    if j.target != H:
        raise MalformedInputError("j must land in L(Q)")
    if not j.is_embedding():
        raise MalformedInputError("j must be an embedding")
    back = {y: x for x, y in j.map.items()}
    keep = [x for x in Q.universe if q[x] in back]
    Qa = _restrict_chain(Q, keep)
    H2, q2 = L_of(Qa)
    iso = Homomorphism(H2, a, {q2[x]: back[q[x]] for x in keep}, check=False)
    return Qa, iso


def _restrict_chain(Q: ForestStructure, keep):
    kept = set(keep)
    base = Q.base.induced(kept)
    ordered = [x for x in sorted(Q.universe, key=Q.depth.__getitem__) if x in kept]
    parent = {ordered[i]: ordered[i - 1] for i in range(1, len(ordered))}
    return ForestStructure(base, parent)


def _chain_order(Q: ForestStructure):
    return sorted(Q.universe, key=Q.depth.__getitem__)


def _is_prefix(P_elems, Qa: ForestStructure) -> bool:
    order = _chain_order(Qa)
    return list(P_elems) == order[:len(P_elems)]


def check_path_restriction(Q: ForestStructure, a: Structure, j: Homomorphism, Qa: ForestStructure) -> bool:
    """Both factorisation conditions for a restriction, tested prefix by prefix.

    (i) a prefix P of Q whose classes all lie in the image of j is a prefix of Q_a;
    (ii) for any prefix P of Q, the classes of q[P] inside the image of j are
    exactly the classes of some prefix of Q_a.
    """
    _, q = L_of(Q)
    image = set(j.map.values())
    order = _chain_order(Q)
    order_a = _chain_order(Qa)
    reachable = [frozenset(q[x] for x in order_a[:i]) for i in range(len(order_a) + 1)]
    for i in range(len(order) + 1):
        P = order[:i]
        classes = {q[x] for x in P}
        if classes <= image and not _is_prefix(P, Qa):
            return False
        if frozenset(classes & image) not in reachable:
            return False
    return True
