"""Homomorphism-preservation harness over finite universes of structures.

Every flag and witness here is relative to the supplied universe; nothing is
claimed about structures outside it.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from .comonads import (ef_R, ef_adjoint_G, ef_companion, modal_adjoint_G, modal_adjoint_R)
from .core.search import find_homomorphism
from .core.structure import PointedStructure, Structure
from .equivalence import LOGICS, decide_arrow, decide_equiv, decide_iso
from .errors import ArborealError, MalformedInputError, UnsupportedInputError
from .forest import forest_code
from .io import load_directory, structure_to_json
from .logic.characteristic import ep_characteristic_fo, ep_characteristic_modal
from .logic.semantics import free_vars, holds, is_negative, modal_depth, quantifier_rank
from .logic.syntax import Formula, Or, disj, is_fo, is_modal

SCOPE_NOTE = ("relative to the supplied universe only; the sentence set is approximated by the "
              "saturation matrices and is not enumerated")


class Universe:
    """A finite list of structures over one vocabulary, with lazily computed relation matrices."""

    def __init__(self, members, logic: str = "ef", names=None, cache_path=None):
        if logic not in LOGICS:
            raise MalformedInputError(f"logic must be one of {LOGICS}")
        members = list(members)
        want = PointedStructure if logic == "modal" else Structure
        for m in members:
            if not isinstance(m, want):
                raise MalformedInputError(f"a {logic} universe holds {want.__name__} members")
        if len({m.vocab for m in members}) > 1:
            raise MalformedInputError("universe members use different vocabularies")
        self.members = members
        self.logic = logic
        self.names = list(names) if names is not None else [f"m{i}" for i in range(len(members))]
        self.cache_path = Path(cache_path) if cache_path is not None else None
        self._matrices = {}

    @classmethod
    def load(cls, directory, logic: str | None = None):
        """All structure files of a directory; the cache lives beside it as <dir>.hpt-cache.json."""
        names, members = load_directory(directory)
        if logic is None:
            logic = "modal" if members and isinstance(members[0], PointedStructure) else "ef"
        d = Path(directory).resolve()
        return cls(members, logic, names, d.parent / f"{d.name}.hpt-cache.json")

    def __len__(self):
        return len(self.members)

    def __getitem__(self, i):
        return self.members[i]

    def content_hash(self, k: int) -> str:
        blob = json.dumps({"logic": self.logic, "k": k,
                           "members": [structure_to_json(m) for m in self.members]}, sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()

    def matrices(self, k: int) -> dict:
        hit = self._matrices.get(k)
        if hit is not None:
            return hit
        key = self.content_hash(k)
        stored = self._read_cache()
        if key in stored:
            mats = stored[key]
        else:
            mats = self._compute(k)
            if self.cache_path is not None:
                stored[key] = mats
                self.cache_path.write_text(json.dumps(stored), encoding="utf-8")
        _check_coherence(mats)
        self._matrices[k] = mats
        return mats

    def _read_cache(self) -> dict:
        if self.cache_path is None or not self.cache_path.exists():
            return {}
        try:
            return json.loads(self.cache_path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError):
            return {}

    def _compute(self, k: int) -> dict:
        n = len(self.members)
        U, lg = self.members, self.logic
        arrow = [[decide_arrow(lg, k, U[i], U[j]) for j in range(n)] for i in range(n)]
        equiv = [[False] * n for _ in range(n)]
        iso = [[False] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                e = arrow[i][j] and arrow[j][i] and decide_equiv(lg, k, U[i], U[j])
                s = e and decide_iso(lg, k, U[i], U[j])
                equiv[i][j] = equiv[j][i] = e
                iso[i][j] = iso[j][i] = s
        return {"arrow": arrow, "equiv": equiv, "iso": iso}


def _check_coherence(m):
    n = len(m["arrow"])
    for i in range(n):
        for j in range(n):
            if m["iso"][i][j] and not m["equiv"][i][j]:
                raise ArborealError(f"inconsistent matrices: iso without equivalence at ({i}, {j})")
            if m["equiv"][i][j] and not (m["arrow"][i][j] and m["arrow"][j][i]):
                raise ArborealError(f"inconsistent matrices: equivalence without arrows at ({i}, {j})")


@dataclass
class HPReport:
    description: str
    logic: str
    k: int
    variant: str
    members: list
    saturated_under_equiv: bool
    saturated_under_iso: bool
    closed_under_morphisms: bool
    upward_closed_under_arrow: bool
    witness: Formula | None = None
    witness_verified: bool | None = None
    counterexamples: dict = field(default_factory=dict)
    note: str = SCOPE_NOTE

    @property
    def premises(self) -> bool:
        saturated = self.saturated_under_iso if self.variant == "hp#" else self.saturated_under_equiv
        return saturated and self.closed_under_morphisms

    @property
    def holds(self) -> bool:
        """The preservation property for this class: premises imply upward closure."""
        return not self.premises or self.upward_closed_under_arrow

    @property
    def full_pass(self) -> bool:
        return (self.saturated_under_equiv and self.saturated_under_iso and self.closed_under_morphisms
                and self.upward_closed_under_arrow and bool(self.witness_verified))

    def to_json(self) -> dict:
        return {
            "description": self.description, "logic": self.logic, "k": self.k, "variant": self.variant,
            "members": self.members,
            "flags": {"saturated_under_equiv": self.saturated_under_equiv,
                      "saturated_under_iso": self.saturated_under_iso,
                      "closed_under_morphisms": self.closed_under_morphisms,
                      "upward_closed_under_arrow": self.upward_closed_under_arrow},
            "premises": self.premises, "holds": self.holds,
            "witness": None if self.witness is None else str(self.witness),
            "witness_verified": self.witness_verified,
            "counterexamples": self.counterexamples, "note": self.note,
        }


def _hom(logic, a, b):
    if logic == "modal":
        return find_homomorphism(a.base, b.base, {a.point: b.point})
    return find_homomorphism(a, b)


def members_of(U: Universe, phi: Formula) -> list:
    """Indices of the members satisfying a sentence (or a modal formula at the point)."""
    if U.logic == "ef":
        if not is_fo(phi):
            raise MalformedInputError("an ef universe needs a first-order sentence")
        if free_vars(phi):
            raise MalformedInputError(f"sentence has free variables {sorted(free_vars(phi))}")
    elif not is_modal(phi):
        raise MalformedInputError("a modal universe needs a modal formula")
    return [i for i, m in enumerate(U.members) if holds(phi, m)]


def check_hp(U: Universe, D, k: int, logic: str | None = None, variant: str | None = None) -> HPReport:
    """Flags for the class D within U, and an existential-positive witness when D is upward closed.

    D is a list of member indices or a formula.
    """
    logic = logic or U.logic
    if logic != U.logic:
        raise MalformedInputError(f"universe was built for {U.logic}, not {logic}")
    variant = variant or ("hp#" if logic == "modal" else "hp")
    if variant not in ("hp", "hp#"):
        raise MalformedInputError("variant must be hp or hp#")
    if isinstance(D, Formula):
        description = str(D)
        D = members_of(U, D)
    else:
        D = sorted(set(D))
        if any(not 0 <= i < len(U) for i in D):
            raise MalformedInputError("member index outside the universe")
        description = "members " + ", ".join(U.names[i] for i in D)
    inside = set(D)
    outside = [j for j in range(len(U)) if j not in inside]
    mats = U.matrices(k)
    cex = {}

    def first_crossing(rel):
        for i in D:
            for j in outside:
                if rel[i][j]:
                    return [U.names[i], U.names[j]]
        return None

    sat_eq = first_crossing(mats["equiv"])
    sat_iso = first_crossing(mats["iso"])
    upward = first_crossing(mats["arrow"])
    if sat_eq:
        cex["saturated_under_equiv"] = sat_eq
    if sat_iso:
        cex["saturated_under_iso"] = sat_iso
    if upward:
        cex["upward_closed_under_arrow"] = upward
    closed = True
    for i in D:
        for j in outside:
            h = _hom(logic, U[i], U[j])
            if h is not None:
                closed = False
                cex["closed_under_morphisms"] = {"source": U.names[i], "target": U.names[j],
                                                 "map": dict(sorted(h.map.items()))}
                break
        if not closed:
            break
    report = HPReport(description, logic, k, variant, [U.names[i] for i in D],
                      sat_eq is None, sat_iso is None, closed, upward is None, counterexamples=cex)
    if report.upward_closed_under_arrow:
        report.witness = _witness(U, D, k, mats["arrow"])
        got = members_of(U, report.witness)
        report.witness_verified = got == D
        if not report.witness_verified:
            raise ArborealError("witness does not define the class although it is upward closed")
    return report


def _witness(U: Universe, D, k, arrow):
    # minimal members under the arrow preorder, one per equivalence class, first in input order wins
    chosen = []
    for i in D:
        if any(arrow[j][i] and not arrow[i][j] for j in D):
            continue
        if any(arrow[i][c] and arrow[c][i] for c in chosen):
            continue
        chosen.append(i)
    if U.logic == "ef":
        parts = [ep_characteristic_fo(U[i], k) for i in chosen]
    else:
        parts = [ep_characteristic_modal(U[i], k) for i in chosen]
    return disj(parts) if parts else Or(())


def witness_rank(U: Universe, phi: Formula) -> int:
    return quantifier_rank(phi) if U.logic == "ef" else modal_depth(phi)


# companion and idempotency checks

def _logic_of(a):
    return "modal" if isinstance(a, PointedStructure) else "ef"


def companion(a, k: int):
    return modal_adjoint_G(a, k) if isinstance(a, PointedStructure) else ef_adjoint_G(a, k)


def check_bcp(a, k: int, logic: str | None = None) -> bool:
    """Is a equivalent to its companion G_k(a) in the k-round game?"""
    logic = logic or _logic_of(a)
    return decide_equiv(logic, k, a, companion(a, k))


def check_idempotent(a, k: int) -> bool:
    """Do R_k(a) and R_k(G_k a) have the same canonical code?"""
    if isinstance(a, PointedStructure):
        if not a.vocab.is_modal:
            raise UnsupportedInputError("modal idempotency needs arities at most 2")
        return forest_code(modal_adjoint_R(a, k)) == forest_code(modal_adjoint_R(modal_adjoint_G(a, k), k))
    return forest_code(ef_R(a, k).carrier) == forest_code(ef_R(ef_adjoint_G(a, k), k).carrier)


def check_negative_restriction(T, k: int, samples) -> bool:
    """For every sample satisfying T, G_k(sample) satisfies T and the counit is surjective."""
    T = list(T)
    for phi in T:
        if not is_negative(phi):
            raise MalformedInputError(f"not built from negated atoms: {phi}")
        if free_vars(phi):
            raise MalformedInputError(f"not a sentence: {phi}")
    if not T:
        return True
    for A in samples:
        if not all(holds(phi, A) for phi in T):
            continue
        comp = ef_companion(A, k)
        if not comp.counit().is_surjective():
            return False
        if not all(holds(phi, comp.structure) for phi in T):
            return False
    return True
