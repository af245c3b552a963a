"""Homomorphism search.

Backtracking over the source elements in input order, values in lexicographic
order, with generalized arc consistency on relation tuples. After each
assignment the unassigned variables are split into independent components
(no shared constraint) and each component is solved on its own, so a failure
in one branch of a tree-shaped source never re-enumerates a sibling branch.
"""

from __future__ import annotations

from typing import Mapping

from ..errors import MalformedInputError
from .structure import Homomorphism, Structure


class _Problem:
    def __init__(self, A: Structure, B: Structure):
        self.vars = list(A.universe)
        self.index = {v: i for i, v in enumerate(self.vars)}
        self.rank = {x: i for i, x in enumerate(sorted(B.universe))}
        self.cons = []  # (vars tuple, distinct vars, allowed tuples)
        self.by_var = {v: [] for v in self.vars}
        seen = set()
        for name, ts in A.relations.items():
            allowed = B.rel(name)
            for t in ts:
                key = (name, t)
                if key in seen:
                    continue
                seen.add(key)
                distinct = tuple(dict.fromkeys(t))
                ci = len(self.cons)
                self.cons.append((t, distinct, allowed))
                for v in distinct:
                    self.by_var[v].append(ci)

    def revise(self, ci, doms):
        """Prune domains of constraint ci. Returns changed vars, or None on wipe-out."""
        t, distinct, allowed = self.cons[ci]
        if all(len(doms[v]) == 1 for v in distinct):
            probe = tuple(next(iter(doms[v])) for v in t)
            return () if probe in allowed else None
        support = {v: set() for v in distinct}
        for u in allowed:
            ok = True
            fixed = {}
            for v, x in zip(t, u):
                prev = fixed.get(v)
                if prev is None:
                    if x not in doms[v]:
                        ok = False
                        break
                    fixed[v] = x
                elif prev != x:
                    ok = False
                    break
            if ok:
                for v, x in fixed.items():
                    support[v].add(x)
        changed = []
        for v in distinct:
            d = doms[v]
            if len(support[v]) < len(d):
                nd = d & support[v]
                if not nd:
                    return None
                if len(nd) < len(d):
                    doms[v] = nd
                    changed.append(v)
        return changed

    def propagate(self, doms, queue):
        pending = list(dict.fromkeys(queue))
        inq = set(pending)
        while pending:
            ci = pending.pop()
            inq.discard(ci)
            changed = self.revise(ci, doms)
            if changed is None:
                return False
            for v in changed:
                for cj in self.by_var[v]:
                    if cj != ci and cj not in inq:
                        inq.add(cj)
                        pending.append(cj)
        return True

    def components(self, free, doms):
        parent = {v: v for v in free}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        done = set()
        for v in free:
            for ci in self.by_var[v]:
                if ci in done:
                    continue
                done.add(ci)
                open_vars = [w for w in self.cons[ci][1] if len(doms[w]) > 1]
                for w in open_vars[1:]:
                    ra, rb = find(open_vars[0]), find(w)
                    if ra != rb:
                        parent[rb] = ra
        groups = {}
        for v in free:
            groups.setdefault(find(v), []).append(v)
        comps = list(groups.values())
        comps.sort(key=lambda c: self.index[c[0]])
        return comps

    def solve(self, scope, doms):
        free = [v for v in scope if len(doms[v]) > 1]
        if not free:
            return doms
        for comp in self.components(free, doms):
            doms = self.solve_component(comp, doms)
            if doms is None:
                return None
        return doms

    def solve_component(self, comp, doms):
        v = comp[0]
        for x in sorted(doms[v], key=self.rank.__getitem__):
            trial = dict(doms)
            trial[v] = {x}
            if self.propagate(trial, self.by_var[v]):
                res = self.solve(comp[1:], trial)
                if res is not None:
                    return res
        return None


def find_homomorphism(A: Structure, B: Structure,
                      constraints: Mapping[str, str] | None = None) -> Homomorphism | None:
    """Return a homomorphism A -> B extending ``constraints``, or None.

    Deterministic: the same inputs always give the same map.
    """
    if A.vocab != B.vocab:
        raise MalformedInputError("vocabularies differ")
    constraints = dict(constraints or {})
    for x, y in constraints.items():
        if x not in A:
            raise MalformedInputError(f"constraint on unknown source element {x!r}")
        if y not in B:
            raise MalformedInputError(f"constraint target {y!r} is not in the target")
    prob = _Problem(A, B)
    everything = set(B.universe)
    doms = {v: ({constraints[v]} if v in constraints else everything) for v in prob.vars}
    if any(not d for d in doms.values()):
        return None
    if not prob.propagate(doms, range(len(prob.cons))):
        return None
    res = prob.solve(prob.vars, doms)
    if res is None:
        return None
    return Homomorphism(A, B, {v: next(iter(res[v])) for v in prob.vars}, check=False)


def exists_homomorphism(A, B, constraints=None) -> bool:
    return find_homomorphism(A, B, constraints) is not None
