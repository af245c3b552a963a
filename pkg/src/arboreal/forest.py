"""Forest-ordered structures, path embeddings, path trees and type trees."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .core.structure import Homomorphism, Structure, is_homomorphism
from .errors import MalformedInputError, UnsupportedInputError


class ForestStructure:
    """A structure together with a forest order given by a parent map.

    Roots are the elements without a parent. Depth of a root is 1, so the
    height of the forest is the largest depth.
    """

    __slots__ = ("base", "parent", "children", "roots", "depth", "_chains", "_facts", "_hash")

    def __init__(self, base: Structure, parent: Mapping[str, str]):
        self.base = base
        parent = dict(parent)
        for c, p in parent.items():
            if c not in base or p not in base:
                raise MalformedInputError(f"parent entry {c!r} -> {p!r} mentions unknown elements")
            if c == p:
                raise MalformedInputError(f"{c!r} is its own parent")
        self.parent = parent
        self.children = {x: [] for x in base.universe}
        for x in base.universe:
            if x in parent:
                self.children[parent[x]].append(x)
        self.roots = tuple(x for x in base.universe if x not in parent)
        depth = {}
        for x in base.universe:
            path = []
            y = x
            while y not in depth:
                if y in path:
                    raise MalformedInputError("parent map has a cycle")
                path.append(y)
                if y not in parent:
                    depth[y] = 1
                    path.pop()
                    break
                y = parent[y]
            d = depth[y]
            for z in reversed(path):
                d += 1
                depth[z] = d
        self.depth = depth
        self._chains = {}
        self._facts = None
        self._hash = None

    @property
    def vocab(self):
        return self.base.vocab

    @property
    def universe(self):
        return self.base.universe

    def __len__(self):
        return len(self.base)

    def height(self) -> int:
        return max(self.depth.values(), default=0)

    def chain(self, x) -> tuple:
        """The down-set of x listed from its root to x."""
        c = self._chains.get(x)
        if c is None:
            p = self.parent.get(x)
            c = (x,) if p is None else self.chain(p) + (x,)
            self._chains[x] = c
        return c

    def leq(self, x, y) -> bool:
        d = self.depth[x]
        return d <= self.depth[y] and self.chain(y)[d - 1] == x

    def comparable(self, x, y) -> bool:
        return self.leq(x, y) or self.leq(y, x)

    def covers(self):
        return [(p, c) for c, p in self.parent.items()]

    def is_chain(self) -> bool:
        return len(self.roots) <= 1 and all(len(cs) <= 1 for cs in self.children.values())

    def node_facts(self) -> dict:
        """For each x, the relation facts of tuples inside chain(x) whose deepest element is x,
        recorded as (relation, depth positions)."""
        if self._facts is None:
            facts = {x: [] for x in self.base.universe}
            for name, ts in self.base.relations.items():
                for t in ts:
                    deepest = max(t, key=self.depth.__getitem__)
                    if all(self.leq(y, deepest) for y in t):
                        facts[deepest].append((name, tuple(self.depth[y] for y in t)))
            self._facts = {x: tuple(sorted(fs)) for x, fs in facts.items()}
        return self._facts

    def __eq__(self, other):
        return isinstance(other, ForestStructure) and self.base == other.base and self.parent == other.parent

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.base, frozenset(self.parent.items())))
        return self._hash

    def __repr__(self):
        return f"ForestStructure({self.base!r}, parent={self.parent})"


def check_condition_E(X: ForestStructure) -> bool:
    """Distinct elements that occur together in a relation tuple are comparable."""
    for ts in X.base.relations.values():
        for t in ts:
            distinct = list(dict.fromkeys(t))
            for i, x in enumerate(distinct):
                for y in distinct[i + 1:]:
                    if not X.comparable(x, y):
                        return False
    return True


def check_condition_M(X: ForestStructure) -> bool:
    """Tree order whose covers are exactly the pairs lying in exactly one binary relation."""
    if not X.vocab.is_modal:
        raise UnsupportedInputError("condition (M) needs a vocabulary of arity at most 2")
    if len(X.roots) > 1:
        return False
    count = {}
    for name in X.vocab.binary():
        for t in X.base.rel(name):
            count[t] = count.get(t, 0) + 1
    covers = set(X.covers())
    for pair in covers:
        if count.get(pair, 0) != 1:
            return False
    for pair, n in count.items():
        if n == 1 and pair not in covers:
            return False
    return True


def is_forest_morphism(f: Homomorphism, X: ForestStructure, Y: ForestStructure) -> bool:
    """Base homomorphism that sends roots to roots and covers to covers."""
    if not is_homomorphism(f.map, X.base, Y.base):
        return False
    for r in X.roots:
        if f.map[r] in Y.parent:
            return False
    for c, p in X.parent.items():
        if Y.parent.get(f.map[c]) != f.map[p]:
            return False
    return True


@dataclass(frozen=True)
class PathEmbedding:
    """A downward closed chain of a forest, listed root first (empty for the root path)."""

    host: ForestStructure
    chain: tuple

    def __post_init__(self):
        object.__setattr__(self, "chain", tuple(self.chain))
        if self.chain and self.host.chain(self.chain[-1]) != self.chain:
            raise MalformedInputError(f"{list(self.chain)} is not the down-set of its last element")

    @property
    def last(self):
        return self.chain[-1] if self.chain else None

    def __len__(self):
        return len(self.chain)

    def leq(self, other: "PathEmbedding") -> bool:
        return other.chain[: len(self.chain)] == self.chain

    def comparable(self, other: "PathEmbedding") -> bool:
        return self.leq(other) or other.leq(self)

    def domain(self) -> Structure:
        return self.host.base.induced(self.chain)

    def code(self):
        return path_code(self.host, self.chain)

    def __hash__(self):
        return hash(self.chain)

    def __eq__(self, other):
        return isinstance(other, PathEmbedding) and self.chain == other.chain and self.host is other.host


def path_code(X: ForestStructure, chain) -> tuple:
    """Canonical code of the path induced on a down-set: length plus positioned facts."""
    facts = X.node_facts()
    out = []
    for x in chain:
        out.extend(facts[x])
    return (len(chain), tuple(sorted(out)))


class PathTree:
    """All path embeddings of a forest ordered by prefix; ``nodes[0]`` is the empty chain."""

    def __init__(self, host: ForestStructure):
        self.host = host
        root = PathEmbedding(host, ())
        self.nodes = [root]
        self._children = {(): []}
        order = []  # depth first, children in base order

        def visit(node, kids):
            for k in kids:
                child = PathEmbedding(host, node.chain + (k,))
                self._children[node.chain].append(child)
                self._children[child.chain] = []
                order.append(child)
                visit(child, host.children[k])

        visit(root, host.roots)
        self.nodes.extend(order)

    @property
    def root(self) -> PathEmbedding:
        return self.nodes[0]

    def children(self, node: PathEmbedding):
        return self._children[node.chain]

    def parent(self, node: PathEmbedding):
        if not node.chain:
            return None
        return PathEmbedding(self.host, node.chain[:-1])

    def __len__(self):
        return len(self.nodes)

    def is_chain(self) -> bool:
        return all(len(c) <= 1 for c in self._children.values())


def paths_of(X: ForestStructure) -> PathTree:
    return PathTree(X)


def corestriction(m: PathEmbedding):
    """S_m: the chain of m together with everything above its last element.

    Returns (S, inclusion S -> host, m viewed inside S).
    """
    X = m.host
    if not m.chain:
        keep = list(X.universe)
    else:
        last = m.chain[-1]
        keep = set(m.chain)
        keep.update(x for x in X.universe if X.leq(last, x))
        keep = [x for x in X.universe if x in keep]
    base = X.base.induced(keep)
    kept = set(keep)
    S = ForestStructure(base, {c: p for c, p in X.parent.items() if c in kept})
    inc = Homomorphism(base, X.base, {x: x for x in keep}, check=False)
    return S, inc, PathEmbedding(S, m.chain)


def push_path(f: Homomorphism, m: PathEmbedding, Y: ForestStructure) -> PathEmbedding:
    """Image of a path under a forest morphism into Y."""
    return PathEmbedding(Y, tuple(f.map[x] for x in m.chain))


def _assign_labels(X: ForestStructure):
    if not check_condition_E(X):
        raise UnsupportedInputError("canonical forest codes need condition (E)")
    return X.node_facts()


def forest_code(X: ForestStructure):
    """AHU-style code: equal iff the forest structures are isomorphic (under condition (E))."""
    facts = _assign_labels(X)
    memo = {}

    def code(x):
        c = memo.get(x)
        if c is None:
            c = (facts[x], tuple(sorted(code(y) for y in X.children[x])))
            memo[x] = c
        return c

    # iterative warm-up from the deepest nodes keeps recursion shallow
    for x in sorted(X.universe, key=X.depth.__getitem__, reverse=True):
        code(x)
    return tuple(sorted(code(r) for r in X.roots))


@dataclass(frozen=True, order=True)
class TypeTree:
    label: tuple
    children: tuple = ()

    def size(self) -> int:
        return 1 + sum(c.size() for c in self.children)

    def to_json(self):
        return {"label": _label_json(self.label), "children": [c.to_json() for c in self.children]}


def _label_json(label):
    n, facts = label
    return {"length": n, "facts": [[name, list(pos)] for name, pos in facts]}


def reduce_tree(t: TypeTree) -> TypeTree:
    """Merge sibling subtrees that are equal after reduction."""
    kids = sorted(set(reduce_tree(c) for c in t.children))
    return TypeTree(t.label, tuple(kids))


def type_tree(X: ForestStructure, start: PathEmbedding | None = None) -> TypeTree:
    """Reduced tree of path codes above ``start`` in Path(X)."""
    if start is None:
        start = PathEmbedding(X, ())
    facts = X.node_facts()

    def build(chain, acc):
        kids = X.roots if not chain else X.children[chain[-1]]
        subs = []
        for k in kids:
            acc2 = acc + facts[k]
            subs.append(build(chain + (k,), acc2))
        return TypeTree((len(chain), tuple(sorted(acc))), tuple(sorted(set(subs))))

    acc = ()
    for x in start.chain:
        acc = acc + facts[x]
    return build(start.chain, acc)
