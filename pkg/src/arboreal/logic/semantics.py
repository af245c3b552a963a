"""Truth of formulas in finite structures, and resource measures."""

from __future__ import annotations

from typing import Mapping

from ..core.structure import PointedStructure, Structure
from ..errors import MalformedInputError, UnsupportedInputError
from .syntax import (And, Atom, Bottom, Box, Dia, Eq, Exists, Forall, Formula, Implies, Not, Or,
                     Prop, Top, children)


def eval_fo(phi: Formula, A: Structure, assignment: Mapping[str, str] | None = None) -> bool:
    """Tarskian truth of phi in A under ``assignment``."""
    env = dict(assignment or {})
    for v, x in env.items():
        if x not in A:
            raise MalformedInputError(f"variable {v} assigned to unknown element {x!r}")
    return _fo(phi, A, env)


def _fo(phi, A, env):
    if isinstance(phi, Atom):
        if phi.rel not in A.vocab:
            raise MalformedInputError(f"unknown relation symbol {phi.rel!r}")
        if A.vocab.arity(phi.rel) != len(phi.args):
            raise MalformedInputError(f"{phi.rel} applied to {len(phi.args)} arguments")
        return tuple(_lookup(env, v) for v in phi.args) in A.rel(phi.rel)
    if isinstance(phi, Eq):
        return _lookup(env, phi.left) == _lookup(env, phi.right)
    if isinstance(phi, And):
        return all(_fo(p, A, env) for p in phi.args)
    if isinstance(phi, Or):
        return any(_fo(p, A, env) for p in phi.args)
    if isinstance(phi, Not):
        return not _fo(phi.arg, A, env)
    if isinstance(phi, Implies):
        return (not _fo(phi.left, A, env)) or _fo(phi.right, A, env)
    if isinstance(phi, (Exists, Forall)):
        want = isinstance(phi, Exists)
        saved = env.get(phi.var, _MISSING)
        try:
            for x in A.universe:
                env[phi.var] = x
                if _fo(phi.body, A, env) == want:
                    return want
            return not want
        finally:
            if saved is _MISSING:
                env.pop(phi.var, None)
            else:
                env[phi.var] = saved
    if isinstance(phi, Top):
        return True
    if isinstance(phi, Bottom):
        return False
    raise UnsupportedInputError(f"{type(phi).__name__} is not first-order")


_MISSING = object()


def _lookup(env, v):
    try:
        return env[v]
    except KeyError:
        raise MalformedInputError(f"free variable {v!r} is unassigned") from None


def modal_extension(phi: Formula, A: Structure) -> frozenset:
    """The set of worlds of A where phi holds."""
    if not A.vocab.is_modal:
        raise UnsupportedInputError("modal evaluation needs relation arities at most 2")
    memo = {}
    succ = {}
    for r in A.vocab.binary():
        m = {x: [] for x in A.universe}
        for x, y in A.rel(r):
            m[x].append(y)
        succ[r] = m
    everything = frozenset(A.universe)

    def ext(p):
        key = id(p)
        hit = memo.get(key)
        if hit is not None:
            return hit[1]
        if isinstance(p, Prop):
            if p.name not in A.vocab or A.vocab.arity(p.name) != 1:
                raise MalformedInputError(f"unknown proposition {p.name!r}")
            out = frozenset(t[0] for t in A.rel(p.name))
        elif isinstance(p, Top):
            out = everything
        elif isinstance(p, Bottom):
            out = frozenset()
        elif isinstance(p, Not):
            out = everything - ext(p.arg)
        elif isinstance(p, And):
            out = everything
            for q in p.args:
                out = out & ext(q)
        elif isinstance(p, Or):
            out = frozenset()
            for q in p.args:
                out = out | ext(q)
        elif isinstance(p, (Dia, Box)):
            if p.rel not in succ:
                raise MalformedInputError(f"unknown modality {p.rel!r}")
            n = 1 if p.grade is None else p.grade
            inner = ext(p.body)
            if isinstance(p, Box):
                inner = everything - inner
            dia = frozenset(x for x in A.universe if sum(1 for y in succ[p.rel][x] if y in inner) >= n)
            out = dia if isinstance(p, Dia) else everything - dia
        else:
            raise UnsupportedInputError(f"{type(p).__name__} is not modal")
        memo[key] = (p, out)  # keep p alive so its id stays unique
        return out

    return ext(phi)


def eval_modal(phi: Formula, P: PointedStructure) -> bool:
    return P.point in modal_extension(phi, P.base)


def holds(phi: Formula, S) -> bool:
    """Evaluate a sentence on a structure, or a modal formula on a pointed structure."""
    if isinstance(S, PointedStructure):
        return eval_modal(phi, S)
    return eval_fo(phi, S)


# measures

def quantifier_rank(phi: Formula) -> int:
    inner = max((quantifier_rank(c) for c in children(phi)), default=0)
    return inner + 1 if isinstance(phi, (Exists, Forall)) else inner


def modal_depth(phi: Formula) -> int:
    inner = max((modal_depth(c) for c in children(phi)), default=0)
    return inner + 1 if isinstance(phi, (Dia, Box)) else inner


def free_vars(phi: Formula) -> frozenset:
    if isinstance(phi, Atom):
        return frozenset(phi.args)
    if isinstance(phi, Eq):
        return frozenset((phi.left, phi.right))
    if isinstance(phi, (Exists, Forall)):
        return free_vars(phi.body) - {phi.var}
    out = frozenset()
    for c in children(phi):
        out |= free_vars(c)
    return out


def formula_size(phi: Formula) -> int:
    n = 0
    stack = [phi]
    while stack:
        p = stack.pop()
        n += 1
        stack.extend(children(p))
    return n


def is_existential_positive(phi: Formula) -> bool:
    """Only atoms, equalities, propositions, the constants, and, or, exists and plain diamonds."""
    stack = [phi]
    while stack:
        p = stack.pop()
        if isinstance(p, (Not, Implies, Forall, Box)):
            return False
        if isinstance(p, Dia) and p.grade not in (None, 1):
            return False
        stack.extend(children(p))
    return True


def is_negative(phi: Formula) -> bool:
    """Built from negated atoms with and, or, exists and forall."""
    if isinstance(phi, Not):
        return isinstance(phi.arg, (Atom, Eq))
    if isinstance(phi, (And, Or)):
        return all(is_negative(c) for c in phi.args)
    if isinstance(phi, (Exists, Forall)):
        return is_negative(phi.body)
    return False
