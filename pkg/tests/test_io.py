import json

import pytest
from hypothesis import given, settings

from arboreal.core import PointedStructure
from arboreal.errors import MalformedInputError
from arboreal.forest import ForestStructure
from arboreal.io import (dump_structure, load_directory, load_structure, structure_from_json,
                         structure_to_json)

from conftest import graph, graphs, kripke, pointed_kripke


@settings(max_examples=50, deadline=None)
@given(graphs(3))
def test_plain_round_trip(A):
    assert structure_from_json(structure_to_json(A)) == A


@settings(max_examples=50, deadline=None)
@given(pointed_kripke(3))
def test_pointed_round_trip(P):
    back = structure_from_json(json.loads(json.dumps(structure_to_json(P))))
    assert isinstance(back, PointedStructure) and back == P


def test_forest_round_trip():
    data = {"vocabulary": {"R": 2}, "universe": ["x", "y"], "relations": {"R": [["x", "y"]]},
            "parent": {"y": "x"}}
    F = structure_from_json(data)
    assert isinstance(F, ForestStructure) and F.parent == {"y": "x"}
    assert structure_from_json(structure_to_json(F)).parent == F.parent


@pytest.mark.parametrize("data", [
    [],
    {"vocabulary": {"R": 2}},
    {"vocabulary": {"R": 2}, "universe": ["a"], "colour": "red"},
    {"vocabulary": {"R": -1}, "universe": ["a"]},
    {"vocabulary": {"R": True}, "universe": ["a"]},
    {"vocabulary": {"R": 2}, "universe": [1]},
    {"vocabulary": {"R": 2}, "universe": ["a"], "relations": {"R": [["a"]]}},
    {"vocabulary": {"R": 2}, "universe": ["a"], "relations": {"S": [["a", "a"]]}},
    {"vocabulary": {"R": 2}, "universe": ["a"], "relations": {"R": [["a", "z"]]}},
    {"vocabulary": {"R": 2}, "universe": ["a", "a"]},
    {"vocabulary": {"R": 2}, "universe": ["a"], "point": "b"},
    {"vocabulary": {"R": 2}, "universe": ["a"], "point": "a", "parent": {}},
])
def test_malformed_files(data):
    with pytest.raises(MalformedInputError):
        structure_from_json(data)


def test_unreadable_files(tmp_path):
    with pytest.raises(MalformedInputError):
        load_structure(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(MalformedInputError):
        load_structure(bad)


def test_directory_sorted_by_name(tmp_path):
    dump_structure(graph("a"), tmp_path / "b.json")
    dump_structure(kripke("a"), tmp_path / "a.json")
    (tmp_path / "notes.txt").write_text("ignored")
    names, members = load_directory(tmp_path)
    assert names == ["a", "b"] and isinstance(members[0], PointedStructure)
    with pytest.raises(MalformedInputError):
        load_directory(tmp_path / "a.json")
