import itertools
import random

import pytest

from arboreal.comonads import L_of, ef_R, ef_adjoint_G
from arboreal.core import EQ, Homomorphism, Structure, all_structures, canonical_form, find_homomorphism
from arboreal.core.enumerate import random_structure
from arboreal.equivalence import decide_arrow, decide_equiv
from arboreal.errors import MalformedInputError, UnsupportedInputError
from arboreal.extendability import (EnvironmentFamily, _restrict_chain, atomic_type,
                                    check_path_restriction, check_relative_extendability,
                                    coslice_arrow, coslice_equivalent, default_environment,
                                    extend_iterated, extend_once, find_matched_pairs, path_restrict,
                                    positive_game, sequences)
from arboreal.forest import ForestStructure, check_condition_E
from arboreal.games import oracle_ep_game

from conftest import GRAPH, graph


def ident(a):
    return Homomorphism(a, a, {x: x for x in a.universe})


# environments

def test_environment_of_single_nodes():
    env = default_environment(GRAPH, 1, 1)
    assert sorted(len(e.rel("R")) for e in env) == [0, 1]
    assert all(len(e) == 1 for e in env)


def test_empty_environment():
    assert len(default_environment(GRAPH, 2, 0)) == 0


def test_environment_is_duplicate_free():
    env = default_environment(GRAPH, 2, 3)
    codes = [canonical_form(e) for e in env]
    assert len(codes) == len(set(codes))
    assert all(1 <= len(e) <= 3 for e in env)
    assert len(env.origins) == len(env.members)


def test_environment_contains_collapses_of_small_trees(swap, loop):
    env = default_environment(GRAPH, 2, 3)
    codes = {canonical_form(e) for e in env}
    assert canonical_form(swap) in codes
    assert canonical_form(loop) in codes
    # every member is a quotient of a height-2 tree, so it maps onto its own two-round companion
    for e in env:
        assert decide_arrow("ef", 2, e, ef_adjoint_G(e, 2))


def test_environment_members_come_from_trees_with_condition_E():
    # rebuild a member from a two-node chain and check it collapses as expected
    V = GRAPH.extend(EQ, 2)
    T = ForestStructure(Structure(V, ["t0", "t1"], {"R": [("t0", "t1")], EQ: [("t0", "t1")]}), {"t1": "t0"})
    assert check_condition_E(T)
    e, _ = L_of(T)
    assert len(e) == 1 and e.rel("R") == {(e.universe[0],) * 2}


# positive games on sequences

def test_positive_game_matches_oracle():
    rng = random.Random(0)
    for _ in range(60):
        A = random_structure(rng, GRAPH, rng.randint(0, 3), 0.4)
        B = random_structure(rng, GRAPH, rng.randint(0, 3), 0.4)
        for k in range(3):
            assert positive_game(A, (), B, (), k) == oracle_ep_game(A, B, k)


def test_coslice_relation_matches_homomorphism_route():
    rng = random.Random(1)
    compared = 0
    for _ in range(25):
        a = random_structure(rng, GRAPH, rng.randint(1, 2), 0.5)
        e = random_structure(rng, GRAPH, rng.randint(1, 2), 0.5)
        for s in sequences(a, 2):
            for t in sequences(e, len(s)):
                if len(t) != len(s) or atomic_type(a, s) != atomic_type(e, t):
                    continue
                by_game = coslice_equivalent(a, s, e, t, 2)
                by_search = coslice_arrow(a, s, e, t, 2) is not None and coslice_arrow(e, t, a, s, 2) is not None
                assert by_game == by_search
                compared += 1
    assert compared > 50


# matched pairs

def test_diagonal_pairs_match(swap):
    pairs = find_matched_pairs(swap, swap, 2)
    found = {(p.u, p.v) for p in pairs}
    for s in sequences(swap, 2):
        assert (s, s) in found


def test_root_pair_matches_iff_companion_maps_in():
    rng = random.Random(2)
    for _ in range(30):
        a = random_structure(rng, GRAPH, rng.randint(1, 3), 0.4)
        e = random_structure(rng, GRAPH, rng.randint(1, 2), 0.4)
        root = [p for p in find_matched_pairs(a, e, 2) if p.u == ()]
        assert bool(root) == (find_homomorphism(ef_adjoint_G(e, 2), a) is not None)


def test_loop_never_matches_loop_free_structure(swap, loop):
    assert find_matched_pairs(swap, loop, 2) == []


def test_pair_witnesses_commute(swap):
    for p in find_matched_pairs(swap, swap, 2):
        for cls, x in zip(p.path_classes, p.u):
            assert p.to_a.map[cls] == x
        assert p.equivalent


# one extension step

def test_empty_environment_extension_is_identity(swap):
    ext = extend_once(swap, 2, EnvironmentFamily())
    assert ext.b == swap and ext.section.map == {"a": "a", "b": "b"}


def test_root_pair_glues_a_disjoint_companion():
    point = graph("a")
    ext = extend_once(point, 1, EnvironmentFamily([point], ["self"]))
    assert len(ext.b) == 2
    assert ext.certificate()["retraction_after_section_is_identity"]


def test_extension_certificates():
    env = default_environment(GRAPH, 2, 2)
    rng = random.Random(3)
    for _ in range(10):
        a = random_structure(rng, GRAPH, rng.randint(1, 3), 0.4)
        ext = extend_once(a, 2, env)
        assert ext.section.is_embedding()
        assert ext.retraction.source == ext.b and ext.retraction.target == a
        assert all(ext.retraction.map[ext.section.map[x]] == x for x in a.universe)
        assert set(ext.section.map) == set(a.universe) and all(ext.section.map[x] == x for x in a.universe)


def test_iterated_extension():
    env = default_environment(GRAPH, 1, 1)
    a = graph("ab", [("a", "b")])
    chain = extend_iterated(a, 1, env, 0)
    assert len(chain) == 1 and chain[0].b == a
    chain = extend_iterated(a, 1, env, 3)
    sizes = [len(link.b) for link in chain]
    assert sizes == sorted(sizes)
    for link in chain:
        assert link.verified()
        assert decide_arrow("ef", 1, a, link.b) and decide_arrow("ef", 1, link.b, a)


def test_negative_steps_rejected(swap):
    with pytest.raises(MalformedInputError):
        extend_iterated(swap, 1, EnvironmentFamily(), -1)


# relative extendability

def test_extension_is_relatively_extendable():
    env = default_environment(GRAPH, 2, 3)
    for a in (graph("a"), graph("ab", [("a", "b")]), graph("ab", [("a", "a")])):
        ext = extend_once(a, 2, env)
        report = check_relative_extendability(ext.section, 2, env)
        assert report.holds and report.checked > 0


def test_identity_on_swap_fails_against_full_environment(swap):
    env = default_environment(GRAPH, 2, 3)
    report = check_relative_extendability(ident(swap), 2, env)
    assert not report.holds
    cex = report.counterexample
    assert cex["m"] == ["[]"] and len(cex["n_extended"]) == 1


def test_loop_alone_gives_no_obligation(swap, loop):
    # nothing in the swap structure matches a loop, so the check is vacuous
    report = check_relative_extendability(ident(swap), 2, EnvironmentFamily([loop], ["loop"]))
    assert report.holds


def test_structure_with_every_one_step_type_is_extendable():
    a = graph("ab", [("b", "b")])
    assert check_relative_extendability(ident(a), 1, default_environment(GRAPH, 1, 3)).holds


def test_equivalence_upgrade_for_extendable_structures():
    env = default_environment(GRAPH, 2, 3)
    small = [s for n in (1, 2) for s in all_structures(GRAPH, n)]
    grown = [extend_once(s, 2, env).b for s in small[:3]]
    candidates = [s for s in small + [b for b in grown if len(b) <= 200]]
    passing = [s for s in candidates if check_relative_extendability(ident(s), 2, env).holds]
    assert len(passing) >= 2
    for a, b in itertools.product(passing, repeat=2):
        both = decide_arrow("ef", 2, a, b) and decide_arrow("ef", 2, b, a)
        assert both == decide_equiv("ef", 2, a, b)


# path restriction

def _paths(e, k):
    R = ef_R(e, k)
    for s in sequences(e, k):
        if s:
            yield _restrict_chain(R.carrier, [R.name[s[:i]] for i in range(1, len(s) + 1)])


def test_restriction_along_isomorphism_is_everything():
    for Q in _paths(graph("ab", [("a", "b"), ("b", "b")]), 3):
        H, _ = L_of(Q)
        Qa, iso = path_restrict(Q, H, ident(H))
        assert Qa == Q and iso.is_isomorphism()


def test_restriction_to_single_class():
    e = graph("ab", [("a", "b")])
    R = ef_R(e, 3)
    s = ("a", "b", "a")
    Q = _restrict_chain(R.carrier, [R.name[s[:i]] for i in range(1, 4)])
    H, q = L_of(Q)
    cls = q[R.name[("a",)]]
    a = H.induced([cls])
    Qa, iso = path_restrict(Q, a, Homomorphism(a, H, {cls: cls}))
    assert set(Qa.universe) == {R.name[("a",)], R.name[("a", "b", "a")]}
    assert Qa.is_chain() and iso.is_isomorphism()


def test_restriction_conditions_on_samples():
    rng = random.Random(4)
    checked = 0
    for _ in range(25):
        e = random_structure(rng, GRAPH, rng.randint(1, 3), 0.4)
        for Q in _paths(e, 3):
            H, _ = L_of(Q)
            for r in range(len(H) + 1):
                for sub in itertools.combinations(H.universe, r):
                    a = H.induced(sub)
                    j = Homomorphism(a, H, {x: x for x in sub})
                    Qa, iso = path_restrict(Q, a, j)
                    assert iso.is_isomorphism()
                    assert check_path_restriction(Q, a, j, Qa)
                    checked += 1
    assert checked > 500


def test_restriction_needs_smooth_path():
    V = GRAPH.extend(EQ, 2)
    Q = ForestStructure(Structure(V, ["x", "y"], {EQ: [("x", "y")]}), {"y": "x"})
    with pytest.raises(UnsupportedInputError):
        path_restrict(Q, graph("a"), ident(graph("a")))
