"""Resource-indexed relations between structures, decided through the comonads.

``logic`` is ``"ef"`` (plain structures, the E_k adjunction over equality
expansions) or ``"modal"`` (pointed Kripke structures, the M_k adjunction).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .comonads import ef_R, ef_adjoint_G, modal_build_cached
from .core.search import find_homomorphism
from .core.structure import Homomorphism, PointedStructure, Structure
from .errors import MalformedInputError
from .forest import ForestStructure, PathEmbedding, forest_code, path_code, paths_of

LOGICS = ("ef", "modal")


@dataclass
class BackAndForthSystem:
    """Matched path pairs, each with the order-preserving bijection between the chains."""

    X: ForestStructure
    Y: ForestStructure
    pairs: list = field(default_factory=list)  # (PathEmbedding, PathEmbedding, dict)

    def __contains__(self, pair):
        m, n = pair
        return any(p[0].chain == m.chain and p[1].chain == n.chain for p in self.pairs)

    def to_json(self):
        return [[list(m.chain), list(n.chain)] for m, n, _ in self.pairs]


def _levels(tree):
    out = {}
    for node in tree.nodes:
        out.setdefault(len(node), []).append(node)
    return out


def back_and_forth(X: ForestStructure, Y: ForestStructure, greatest: bool = True):
    """Greatest back-and-forth system between X and Y, or None if the roots are not matched.

    Pairs are path embeddings of equal length with equal path codes (so the
    order-preserving bijection is an isomorphism of the induced paths). A pair
    survives if every cover of either side is matched by a surviving cover of
    the other. Levels are processed bottom-up, which yields the greatest
    fixpoint in one sweep because covers only go one level deeper.

    With ``greatest=False`` only pairs reachable from the root are explored,
    which is enough to decide whether a system exists.
    """
    if X.vocab != Y.vocab:
        raise MalformedInputError("vocabularies differ")
    PX, PY = paths_of(X), paths_of(Y)
    code = {}
    for tree, host in ((PX, X), (PY, Y)):
        for node in tree.nodes:
            code[id(host), node.chain] = path_code(host, node.chain)

    def cx(m):
        return code[id(X), m.chain]

    def cy(n):
        return code[id(Y), n.chain]

    if greatest:
        alive = set()
        lx, ly = _levels(PX), _levels(PY)
        for d in sorted(set(lx) & set(ly), reverse=True):
            for m in lx[d]:
                for n in ly[d]:
                    if cx(m) == cy(n) and _forth_back(PX, PY, m, n, lambda a, b: (a.chain, b.chain) in alive):
                        alive.add((m.chain, n.chain))
        if ((), ()) not in alive:
            return None
        system = BackAndForthSystem(X, Y)
        for mc, nc in sorted(alive, key=lambda p: (len(p[0]), p)):
            system.pairs.append((PathEmbedding(X, mc), PathEmbedding(Y, nc), dict(zip(mc, nc))))
        return system

    memo = {}

    def ok(m, n):
        key = (m.chain, n.chain)
        v = memo.get(key)
        if v is None:
            v = cx(m) == cy(n) and _forth_back(PX, PY, m, n, ok)
            memo[key] = v
        return v

    root = (PX.root, PY.root)
    if not ok(*root):
        return None
    system = BackAndForthSystem(X, Y)
    stack = [root]
    seen = set()
    while stack:
        m, n = stack.pop()
        if (m.chain, n.chain) in seen:
            continue
        seen.add((m.chain, n.chain))
        system.pairs.append((m, n, dict(zip(m.chain, n.chain))))
        for m2 in PX.children(m):
            for n2 in PY.children(n):
                if memo.get((m2.chain, n2.chain)):
                    stack.append((m2, n2))
    return system


def _forth_back(PX, PY, m, n, good):
    kids_m = PX.children(m)
    kids_n = PY.children(n)
    for m2 in kids_m:
        if not any(good(m2, n2) for n2 in kids_n):
            return False
    for n2 in kids_n:
        if not any(good(m2, n2) for m2 in kids_m):
            return False
    return True


def _check(logic, a, b):
    if logic not in LOGICS:
        raise MalformedInputError(f"logic must be one of {LOGICS}, got {logic!r}")
    want = PointedStructure if logic == "modal" else Structure
    for s in (a, b):
        if not isinstance(s, want):
            raise MalformedInputError(f"{logic} decisions take {want.__name__} arguments")
    if a.vocab != b.vocab:
        raise MalformedInputError("vocabularies differ")


def R_forest(logic: str, k: int, a) -> ForestStructure:
    if logic == "ef":
        return ef_R(a, k).carrier
    return modal_build_cached(a, k).carrier


def arrow_witness(logic: str, k: int, a, b) -> Homomorphism | None:
    """A homomorphism G_k(a) -> b (point to point in the modal case), if any."""
    _check(logic, a, b)
    if logic == "ef":
        return find_homomorphism(ef_adjoint_G(a, k), b)
    c = modal_build_cached(a, k)
    return find_homomorphism(c.carrier.base, b.base, {c.point: b.point})


def decide_arrow(logic: str, k: int, a, b) -> bool:
    return arrow_witness(logic, k, a, b) is not None


def equiv_witness(logic: str, k: int, a, b, greatest: bool = False):
    _check(logic, a, b)
    return back_and_forth(R_forest(logic, k, a), R_forest(logic, k, b), greatest=greatest)


def decide_equiv(logic: str, k: int, a, b) -> bool:
    return equiv_witness(logic, k, a, b) is not None


def decide_iso(logic: str, k: int, a, b) -> bool:
    _check(logic, a, b)
    return forest_code(R_forest(logic, k, a)) == forest_code(R_forest(logic, k, b))


def forest_isomorphism(X: ForestStructure, Y: ForestStructure) -> dict | None:
    """An order and relation preserving bijection X -> Y, found by matching subtree codes."""
    if forest_code(X) != forest_code(Y):
        return None
    fx, fy = X.node_facts(), Y.node_facts()

    def codes(F, facts):
        memo = {}

        def code(x):
            if x not in memo:
                memo[x] = (facts[x], tuple(sorted(code(y) for y in F.children[x])))
            return memo[x]

        for x in sorted(F.universe, key=F.depth.__getitem__, reverse=True):
            code(x)
        return memo

    cx, cy = codes(X, fx), codes(Y, fy)
    out = {}

    def match(xs, ys):
        pool = list(ys)
        for x in xs:
            for i, y in enumerate(pool):
                if cx[x] == cy[y]:
                    out[x] = y
                    del pool[i]
                    match(X.children[x], Y.children[y])
                    break

    match(X.roots, Y.roots)
    return out


def iso_witness(logic: str, k: int, a, b):
    _check(logic, a, b)
    return forest_isomorphism(R_forest(logic, k, a), R_forest(logic, k, b))
