"""Finite relational structures and homomorphisms between them."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from ..errors import MalformedInputError

EQ = "I"  # reserved binary symbol of the equality expansion


class Vocabulary:
    """Relation names with their arities.

    Immutable and hashable. Iteration yields names in sorted order.
    """

    __slots__ = ("_items", "_map")

    def __init__(self, relations: Mapping[str, int] | Iterable[tuple[str, int]] = ()):
        items = dict(relations)
        for name, arity in items.items():
            if not isinstance(name, str) or not name:
                raise MalformedInputError(f"bad relation name {name!r}")
            if not isinstance(arity, int) or isinstance(arity, bool) or arity < 1:
                raise MalformedInputError(f"arity of {name} must be a positive integer, got {arity!r}")
        self._items = tuple(sorted(items.items()))
        self._map = dict(self._items)

    def arity(self, name: str) -> int:
        try:
            return self._map[name]
        except KeyError:
            raise MalformedInputError(f"unknown relation symbol {name!r}") from None

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self._items)

    def items(self):
        return self._items

    def as_dict(self) -> dict[str, int]:
        return dict(self._items)

    @property
    def is_modal(self) -> bool:
        return all(a <= 2 for _, a in self._items)

    def unary(self) -> tuple[str, ...]:
        return tuple(n for n, a in self._items if a == 1)

    def binary(self) -> tuple[str, ...]:
        return tuple(n for n, a in self._items if a == 2)

    def extend(self, name: str, arity: int) -> "Vocabulary":
        if name in self._map:
            raise MalformedInputError(f"relation symbol {name!r} already present")
        return Vocabulary({**self._map, name: arity})

    def drop(self, name: str) -> "Vocabulary":
        return Vocabulary({n: a for n, a in self._items if n != name})

    def __contains__(self, name):
        return name in self._map

    def __iter__(self):
        return iter(self.names)

    def __len__(self):
        return len(self._items)

    def __eq__(self, other):
        return isinstance(other, Vocabulary) and self._items == other._items

    def __hash__(self):
        return hash(self._items)

    def __repr__(self):
        return f"Vocabulary({self._map})"


class Structure:
    """A finite sigma-structure.

    ``universe`` keeps the order it was given in (duplicates dropped); that
    order is the variable order of homomorphism search. Equality and hashing
    ignore it.
    """

    __slots__ = ("vocab", "universe", "_rels", "_uset", "_hash")

    def __init__(self, vocab: Vocabulary | Mapping[str, int], universe: Iterable[str],
                 relations: Mapping[str, Iterable[Iterable[str]]] | None = None):
        if not isinstance(vocab, Vocabulary):
            vocab = Vocabulary(vocab)
        self.vocab = vocab
        elems = []
        seen = set()
        for x in universe:
            if not isinstance(x, str):
                raise MalformedInputError(f"element ids must be strings, got {x!r}")
            if x in seen:
                raise MalformedInputError(f"element {x!r} listed twice")
            seen.add(x)
            elems.append(x)
        self.universe = tuple(elems)
        self._uset = frozenset(seen)
        relations = relations or {}
        rels = {}
        for name in relations:
            if name not in vocab:
                raise MalformedInputError(f"relation {name!r} not in vocabulary")
        for name, arity in vocab.items():
            tuples = set()
            for t in relations.get(name, ()):
                t = tuple(t)
                if len(t) != arity:
                    raise MalformedInputError(f"tuple {t} of {name} has length {len(t)}, expected {arity}")
                for x in t:
                    if x not in self._uset:
                        raise MalformedInputError(f"tuple {t} of {name} mentions unknown element {x!r}")
                tuples.add(t)
            rels[name] = frozenset(tuples)
        self._rels = rels
        self._hash = None

    @classmethod
    def _trusted(cls, vocab, universe, rels):
        # internal constructor: no validation, rels already frozensets for every symbol
        obj = cls.__new__(cls)
        obj.vocab = vocab
        obj.universe = tuple(universe)
        obj._uset = frozenset(obj.universe)
        obj._rels = rels
        obj._hash = None
        return obj

    @property
    def relations(self) -> Mapping[str, frozenset]:
        return self._rels

    def rel(self, name: str) -> frozenset:
        try:
            return self._rels[name]
        except KeyError:
            raise MalformedInputError(f"unknown relation symbol {name!r}") from None

    def holds(self, name: str, tup) -> bool:
        return tuple(tup) in self.rel(name)

    def __contains__(self, x):
        return x in self._uset

    def __len__(self):
        return len(self.universe)

    @property
    def elements(self) -> frozenset:
        return self._uset

    def sorted_universe(self) -> list[str]:
        return sorted(self._uset)

    def size(self) -> int:
        return len(self.universe)

    def induced(self, subset: Iterable[str]) -> "Structure":
        """Induced substructure, keeping this structure's element order."""
        keep = set(subset)
        unknown = keep - self._uset
        if unknown:
            raise MalformedInputError(f"unknown elements {sorted(unknown)}")
        rels = {n: frozenset(t for t in ts if all(x in keep for x in t)) for n, ts in self._rels.items()}
        return Structure._trusted(self.vocab, [x for x in self.universe if x in keep], rels)

    def reduct(self, vocab: Vocabulary) -> "Structure":
        for n, a in vocab.items():
            if n not in self.vocab or self.vocab.arity(n) != a:
                raise MalformedInputError(f"{n}/{a} is not in the vocabulary")
        return Structure._trusted(vocab, self.universe, {n: self._rels[n] for n in vocab.names})

    def rename(self, mapping: Mapping[str, str]) -> "Structure":
        """Apply an injective renaming of elements."""
        if len(set(mapping[x] for x in self.universe)) != len(self.universe):
            raise MalformedInputError("renaming is not injective")
        rels = {n: frozenset(tuple(mapping[x] for x in t) for t in ts) for n, ts in self._rels.items()}
        return Structure._trusted(self.vocab, [mapping[x] for x in self.universe], rels)

    def tuples_with(self, x) -> list[tuple[str, tuple]]:
        return [(n, t) for n, ts in self._rels.items() for t in ts if x in t]

    def __eq__(self, other):
        if not isinstance(other, Structure):
            return NotImplemented
        return (self.vocab == other.vocab and self._uset == other._uset
                and self._rels == other._rels)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vocab, self._uset, tuple(sorted(self._rels.items(), key=lambda kv: kv[0]))))
        return self._hash

    def __repr__(self):
        rels = {n: sorted(ts) for n, ts in self._rels.items() if ts}
        return f"Structure({list(self.universe)}, {rels})"


@dataclass(frozen=True)
class PointedStructure:
    base: Structure
    point: str

    def __post_init__(self):
        if self.point not in self.base:
            raise MalformedInputError(f"point {self.point!r} is not in the universe")

    @property
    def vocab(self):
        return self.base.vocab

    @property
    def universe(self):
        return self.base.universe

    def __len__(self):
        return len(self.base)


def _check_map(mapping, A: Structure, B: Structure):
    for x in A.universe:
        if x not in mapping:
            raise MalformedInputError(f"map is not total: {x!r} has no image")
        if mapping[x] not in B:
            raise MalformedInputError(f"image {mapping[x]!r} of {x!r} is outside the target")


def is_homomorphism(mapping: Mapping[str, str], A: Structure, B: Structure) -> bool:
    """True iff ``mapping`` sends every relation tuple of A into B.

    Raises MalformedInputError when the map is not total on A or leaves B.
    """
    if A.vocab != B.vocab:
        raise MalformedInputError("vocabularies differ")
    _check_map(mapping, A, B)
    for name, ts in A.relations.items():
        target = B.rel(name)
        for t in ts:
            if tuple(mapping[x] for x in t) not in target:
                return False
    return True


class Homomorphism:
    """A structure-preserving total map ``source -> target``."""

    __slots__ = ("source", "target", "map")

    def __init__(self, source: Structure, target: Structure, mapping: Mapping[str, str], check: bool = True):
        self.source = source
        self.target = target
        if check:
            _check_map(mapping, source, target)
        self.map = {x: mapping[x] for x in source.universe} if check else dict(mapping)
        if check and not is_homomorphism(self.map, source, target):
            raise MalformedInputError("map does not preserve relations")

    def __call__(self, x):
        return self.map[x]

    def then(self, other: "Homomorphism") -> "Homomorphism":
        """Diagrammatic composition: first self, then other."""
        return Homomorphism(self.source, other.target, {x: other.map[y] for x, y in self.map.items()}, check=False)

    def image(self) -> set:
        return set(self.map.values())

    def is_injective(self) -> bool:
        return len(set(self.map.values())) == len(self.map)

    def is_surjective(self) -> bool:
        return self.image() == set(self.target.universe)

    def is_embedding(self) -> bool:
        """Injective and reflects every relation."""
        if not self.is_injective():
            return False
        inv = {y: x for x, y in self.map.items()}
        for name, ts in self.target.relations.items():
            src = self.source.rel(name)
            for t in ts:
                if all(y in inv for y in t) and tuple(inv[y] for y in t) not in src:
                    return False
        return True

    def is_isomorphism(self) -> bool:
        return self.is_surjective() and self.is_embedding()

    def __eq__(self, other):
        return (isinstance(other, Homomorphism) and self.source == other.source
                and self.target == other.target and self.map == other.map)

    def __repr__(self):
        return f"Homomorphism({self.map})"


def identity(A: Structure) -> Homomorphism:
    return Homomorphism(A, A, {x: x for x in A.universe}, check=False)


def empty_structure(vocab) -> Structure:
    return Structure(vocab, [])
