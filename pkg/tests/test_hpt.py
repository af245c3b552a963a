import json

import pytest

from arboreal.comonads import ef_companion
from arboreal.errors import ArborealError, MalformedInputError
from arboreal.hpt import (Universe, check_bcp, check_hp, check_idempotent, check_negative_restriction,
                          members_of, witness_rank)
from arboreal.io import dump_structure
from arboreal.logic import eval_fo, holds, is_existential_positive, parse
from arboreal.core.enumerate import all_structures

from conftest import GRAPH, complete, graph, kripke

LOOP_SENTENCE = parse("(exists x (R x x))")
CLIQUE = parse("(forall x (forall y (implies (not (= x y)) (R x y))))")
GRADED = parse("(or (dia R 2 (dia R (prop p))) (dia R (dia R (prop p))))")

NAMES = ["point", "loop", "edge", "swap", "loopedge", "k3", "pathloop", "empty"]


def ef_universe(**kw):
    members = [graph("a"), graph("a", [("a", "a")]), graph("ab", [("a", "b")]),
               graph("ab", [("a", "b"), ("b", "a")]), graph("ab", [("a", "a"), ("a", "b")]),
               complete(3), graph("abc", [("a", "b"), ("b", "c"), ("c", "c")]), graph("")]
    return Universe(members, "ef", NAMES, **kw)


def modal_universe():
    members = [kripke("a"), kripke("ab", [("a", "b")], p="b"),
               kripke("abc", [("a", "b"), ("a", "c")], p="bc"),
               kripke("abc", [("a", "b"), ("a", "c"), ("b", "b"), ("c", "c")]),
               kripke("ab", [("a", "b"), ("b", "a")]),
               kripke("abcd", [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")], p="d")]
    return Universe(members, "modal")


# the universe and its matrices

def test_matrices_are_coherent():
    m = ef_universe().matrices(2)
    n = len(NAMES)
    for i in range(n):
        assert m["arrow"][i][i] and m["equiv"][i][i] and m["iso"][i][i]
        for j in range(n):
            assert m["equiv"][i][j] == m["equiv"][j][i]
            if m["iso"][i][j]:
                assert m["equiv"][i][j]
            if m["equiv"][i][j]:
                assert m["arrow"][i][j] and m["arrow"][j][i]


def test_matrix_cache_round_trip(tmp_path):
    cache = tmp_path / "u.hpt-cache.json"
    first = ef_universe(cache_path=cache).matrices(1)
    stored = json.loads(cache.read_text())
    assert list(stored.values()) == [first]
    assert ef_universe(cache_path=cache).matrices(1) == first


def test_corrupt_cache_is_rejected(tmp_path):
    cache = tmp_path / "u.hpt-cache.json"
    U = ef_universe(cache_path=cache)
    bad = U._compute(1)
    bad["iso"][0][1] = True
    cache.write_text(json.dumps({U.content_hash(1): bad}))
    with pytest.raises(ArborealError):
        ef_universe(cache_path=cache).matrices(1)


def test_load_puts_cache_beside_directory(tmp_path):
    d = tmp_path / "uni"
    d.mkdir()
    for name, S in zip(NAMES, ef_universe().members):
        dump_structure(S, d / f"{name}.json")
    U = Universe.load(d)
    assert U.names == sorted(NAMES) and U.logic == "ef"
    U.matrices(1)
    assert (tmp_path / "uni.hpt-cache.json").exists()


def test_mixed_members_rejected():
    with pytest.raises(MalformedInputError):
        Universe([graph("a"), kripke("a")], "ef")
    with pytest.raises(MalformedInputError):
        Universe([graph("a")], "modal")


# reports

def test_loop_sentence_passes_everything():
    U = ef_universe()
    r = check_hp(U, LOOP_SENTENCE, 1)
    assert r.members == ["loop", "loopedge", "pathloop"]
    assert r.full_pass and r.holds
    assert is_existential_positive(r.witness) and witness_rank(U, r.witness) == 1


def test_clique_sentence_is_not_closed():
    r = check_hp(ef_universe(), CLIQUE, 2)
    assert not r.closed_under_morphisms and not r.upward_closed_under_arrow
    cex = r.counterexamples["closed_under_morphisms"]
    assert cex["source"] in r.members and cex["target"] not in r.members
    assert r.witness is None and r.holds


def counterexample_is_homomorphism(U, cex):
    src, dst = U[U.names.index(cex["source"])], U[U.names.index(cex["target"])]
    return (set(cex["map"]) == set(src.universe)
            and all((cex["map"][x], cex["map"][y]) in dst.rel("R") for x, y in src.rel("R")))


def test_counterexample_map_is_a_homomorphism():
    U = ef_universe()
    cex = check_hp(U, CLIQUE, 2).counterexamples["closed_under_morphisms"]
    assert cex["map"] and counterexample_is_homomorphism(U, cex)


def test_trivial_classes():
    U = ef_universe()
    everything = check_hp(U, list(range(len(U))), 2)
    assert everything.full_pass and all(eval_fo(everything.witness, S) for S in U.members)
    nothing = check_hp(U, [], 2)
    assert nothing.full_pass and not any(eval_fo(nothing.witness, S) for S in U.members)


def test_upward_closed_classes_are_closed_under_morphisms():
    # a homomorphism gives an arrow at every k, so upward closure is the stronger property
    U = ef_universe()
    for mask in range(1 << len(U)):
        D = [i for i in range(len(U)) if mask >> i & 1]
        r = check_hp(U, D, 1)
        if r.upward_closed_under_arrow:
            assert r.closed_under_morphisms and r.witness_verified


def test_bad_member_index():
    with pytest.raises(MalformedInputError):
        check_hp(ef_universe(), [99], 1)


def test_open_formula_rejected():
    with pytest.raises(MalformedInputError):
        members_of(ef_universe(), parse("(R x x)"))


def test_graded_modal_class():
    U = modal_universe()
    r = check_hp(U, GRADED, 2)
    assert r.variant == "hp#" and r.full_pass
    assert witness_rank(U, r.witness) <= 2 and is_existential_positive(r.witness)


def test_small_universe_can_break_preservation():
    # closed under morphisms inside the universe, yet an arrow leaves the class
    r = check_hp(modal_universe(), parse("(dia R 2 (dia R (true)))"), 2)
    assert r.premises and not r.upward_closed_under_arrow and not r.holds
    assert r.counterexamples["upward_closed_under_arrow"] == ["m3", "m4"]


# companion checks

def test_bcp_examples(swap):
    assert not check_bcp(swap, 2) and not check_bcp(swap, 3)
    assert check_bcp(swap, 1)
    assert check_bcp(kripke("ab", [("a", "b"), ("b", "a")]), 3)


def test_idempotency_examples(swap):
    assert not check_idempotent(swap, 2)
    assert check_idempotent(graph("a"), 3)
    assert check_idempotent(kripke("ab", [("a", "b")], p="b"), 2)


def test_bcp_implies_companion_agrees_on_sampled_sentences():
    phis = [LOOP_SENTENCE, CLIQUE, parse("(exists x (exists y (and (R x y) (R y x))))")]
    for S in all_structures(GRAPH, 2):
        if check_bcp(S, 2):
            G = ef_companion(S, 2).structure
            assert all(holds(p, S) == holds(p, G) for p in phis)


# negative theories

def test_loop_free_theory_restricts():
    T = [parse("(forall x (not (R x x)))")]
    samples = [S for n in range(1, 3) for S in all_structures(GRAPH, n)]
    assert check_negative_restriction(T, 2, samples)


def test_empty_theory():
    assert check_negative_restriction([], 2, [graph("a")])


def test_theory_must_be_negative():
    with pytest.raises(MalformedInputError):
        check_negative_restriction([CLIQUE], 2, [graph("a")])
    with pytest.raises(MalformedInputError):
        check_negative_restriction([parse("(not (R x x))")], 2, [graph("a")])
