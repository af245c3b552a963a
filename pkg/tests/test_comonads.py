import random

import pytest
from hypothesis import given, settings

from arboreal.comonads import (L_of, check_ef_laws, check_modal_laws, ef_R, ef_adjoint_G, ef_build,
                               ef_carrier_size, ef_comult, ef_companion, ef_counit, ef_map,
                               is_smooth, modal_adjoint_G, modal_build, modal_counit, reachable,
                               seq_name, transpose_flat, transpose_sharp)
from arboreal.core import (EQ, Homomorphism, PointedStructure, Structure, Vocabulary,
                           find_homomorphism, is_isomorphic)
from arboreal.core.enumerate import random_pointed, random_structure
from arboreal.errors import MalformedInputError, SizeCapError, UnsupportedInputError
from arboreal.extendability import sequences
from arboreal.forest import ForestStructure, check_condition_E, check_condition_M
from arboreal.hpt import check_idempotent

from conftest import GRAPH, KRIPKE, graph, graphs, kripke, pointed_kripke


def rel_of(c, s, t):
    return (c.name[s], c.name[t]) in c.carrier.base.rel("R")


# E_k

@pytest.mark.parametrize("n,k", [(n, k) for n in range(4) for k in range(4)])
def test_carrier_size(n, k):
    A = graph("abc"[:n])
    assert len(ef_build(A, k)) == sum(n ** i for i in range(1, k + 1)) == ef_carrier_size(n, k)


def test_zero_rounds(swap):
    assert len(ef_build(swap, 0)) == 0
    with pytest.raises(MalformedInputError):
        ef_build(swap, -1)


def test_lifted_relation_needs_comparable_sequences(swap):
    c = ef_build(swap, 2)
    assert len(c) == 6
    assert rel_of(c, ("a",), ("a", "b"))
    assert not rel_of(c, ("a",), ("b",))


def test_counit_takes_last_element(swap):
    c = ef_build(swap, 2)
    assert ef_counit(c).map[c.name[("a", "b")]] == "b"


def test_comultiplication_lists_prefixes(swap):
    c = ef_build(swap, 2)
    delta, outer = ef_comult(c)
    ab = delta.map[c.name[("a", "b")]]
    assert outer.seq[ab] == (c.name[("a",)], c.name[("a", "b")])
    assert outer.seq[delta.map[c.name[("a",)]]] == (c.name[("a",)],)


def test_carrier_cap(swap, monkeypatch):
    monkeypatch.setenv("FMT_SIZE_CAP", "5")
    with pytest.raises(SizeCapError):
        ef_build(swap, 3)


def test_functor_identity_and_composition():
    rng = random.Random(3)
    for _ in range(30):
        A = random_structure(rng, GRAPH, rng.randint(1, 3), 0.4)
        B = random_structure(rng, GRAPH, rng.randint(1, 3), 0.4)
        C = random_structure(rng, GRAPH, rng.randint(1, 3), 0.6)
        ident = Homomorphism(A, A, {x: x for x in A.universe})
        assert all(x == y for x, y in ef_map(ident, 2).map.items())
        f, g = find_homomorphism(A, B), find_homomorphism(B, C)
        if f is None or g is None:
            continue
        assert ef_map(f, 2).then(ef_map(g, 2)).map == ef_map(f.then(g), 2).map


def test_functor_preserves_prefixes(swap):
    f = Homomorphism(swap, swap, {"a": "b", "b": "a"})
    c = ef_build(swap, 2)
    Ef = ef_map(f, 2, c, c)
    img_a, img_ab = c.seq[Ef.map[c.name[("a",)]]], c.seq[Ef.map[c.name[("a", "b")]]]
    assert img_ab[: len(img_a)] == img_a


@settings(max_examples=40, deadline=None)
@given(graphs(3))
def test_ef_laws_and_conditions(A):
    for k in (1, 2, 3):
        assert check_ef_laws(A, k)
        c = ef_build(A, k)
        assert check_condition_E(c.carrier)
        if len(A):
            assert ef_counit(c).is_surjective()


# M_k

def test_two_cycle_unravels_to_chain():
    c = modal_build(kripke("ab", [("a", "b"), ("b", "a")]), 3)
    assert len(c) == 4 and c.carrier.is_chain()


def test_single_point_unravelling():
    assert len(modal_build(kripke("a"), 3)) == 1
    reflexive = modal_build(kripke("a", [("a", "a")]), 3)
    assert len(reflexive) == 4 and reflexive.carrier.is_chain()


def test_modal_needs_arity_at_most_two():
    P = PointedStructure(Structure(Vocabulary({"T": 3}), ["a"]), "a")
    with pytest.raises(UnsupportedInputError):
        modal_build(P, 1)


@settings(max_examples=60, deadline=None)
@given(pointed_kripke(4))
def test_modal_laws_and_conditions(P):
    for k in (0, 1, 2, 3):
        assert check_modal_laws(P, k)
        c = modal_build(P, k)
        assert check_condition_M(c.carrier)
        assert modal_counit(c).image() == reachable(P, k)


@settings(max_examples=60, deadline=None)
@given(pointed_kripke(4))
def test_modal_idempotency(P):
    for k in (1, 2, 3):
        assert check_idempotent(P, k)


def test_reachable_set_counts_steps():
    P = kripke("abc", [("a", "b"), ("b", "c")])
    assert reachable(P, 0) == {"a"}
    assert reachable(P, 1) == {"a", "b"}
    assert reachable(P, 2) == {"a", "b", "c"}


# the equality-aware adjunction

def test_companion_of_swap(swap):
    G = ef_adjoint_G(swap, 2)
    assert len(G) == 4
    comp = ef_companion(swap, 2)
    ca, cb = comp.quotient[seq_name(("a",))], comp.quotient[seq_name(("b",))]
    assert ca == comp.quotient[seq_name(("a", "a"))]
    assert (ca, cb) not in G.rel("R") and (cb, ca) not in G.rel("R")


def test_companion_counts(swap):
    assert len(ef_adjoint_G(swap, 3)) == 6
    assert len(ef_adjoint_G(swap, 1)) == 2


def test_first_companion_keeps_only_diagonal_facts(swap):
    # length-1 sequences are pairwise incomparable, so only loops survive
    G1 = ef_adjoint_G(swap, 1)
    assert G1.rel("R") == frozenset()
    looped = graph("ab", [("a", "a")])
    assert is_isomorphic(ef_adjoint_G(looped, 1), looped)


def test_reserved_symbol_clash():
    A = Structure(GRAPH.extend(EQ, 2), ["a"])
    with pytest.raises(MalformedInputError):
        ef_R(A, 1)


def _paths_of_R(e, k):
    R = ef_R(e, k)
    for s in sequences(e, k):
        if s:
            names = [R.name[s[:i]] for i in range(1, len(s) + 1)]
            base = R.carrier.base.induced(names)
            yield s, ForestStructure(base, {names[i]: names[i - 1] for i in range(1, len(names))})


def test_every_path_of_R_is_smooth():
    rng = random.Random(6)
    for _ in range(20):
        e = random_structure(rng, GRAPH, rng.randint(1, 3), 0.5)
        for _, P in _paths_of_R(e, 3):
            assert is_smooth(P)


def test_transposes_are_inverse():
    rng = random.Random(7)
    checked = 0
    for _ in range(30):
        e = random_structure(rng, GRAPH, rng.randint(1, 3), 0.5)
        a = random_structure(rng, GRAPH, rng.randint(1, 3), 0.5)
        for _, P in _paths_of_R(e, 2):
            H, _ = L_of(P)
            f = find_homomorphism(H, a)
            if f is None:
                continue
            m = transpose_flat(f, P, a, 2)
            assert transpose_sharp(m, P, a, 2).map == f.map
            # an embedding on one side is an embedding on the other
            assert m.is_embedding() == f.is_embedding()
            checked += 1
    assert checked > 20


def test_sharp_of_path_inclusion_reads_last_elements(swap):
    R = ef_R(swap, 2)
    s = ("a", "b")
    names = [R.name[s[:i]] for i in range(1, 3)]
    P = ForestStructure(R.carrier.base.induced(names), {names[1]: names[0]})
    inc = Homomorphism(P.base, R.carrier.base, {x: x for x in names})
    sharp = transpose_sharp(inc, P, swap, 2)
    H, q = L_of(P)
    assert {sharp.map[q[x]] for x in names} == {"a", "b"}
    assert sharp.map[q[names[1]]] == "b"


def test_flat_rejects_tall_forests(swap):
    R = ef_R(swap, 3)
    s = ("a", "b", "a")
    names = [R.name[s[:i]] for i in range(1, 4)]
    P = ForestStructure(R.carrier.base.induced(names), {names[1]: names[0], names[2]: names[1]})
    H, _ = L_of(P)
    f = find_homomorphism(H, swap)
    with pytest.raises(MalformedInputError):
        transpose_flat(f, P, swap, 2)


def test_modal_companion_is_pointed():
    P = kripke("ab", [("a", "b")], p="b")
    G = modal_adjoint_G(P, 2)
    assert G.point == modal_build(P, 2).point
    assert G.vocab == KRIPKE


def test_random_pointed_laws():
    rng = random.Random(12)
    for _ in range(20):
        P = random_pointed(rng, KRIPKE, rng.randint(1, 4), 0.4)
        assert check_modal_laws(P, 3)
