"""JSON files for structures, pointed structures and forests.

    {"vocabulary": {"R": 2}, "universe": ["a", "b"],
     "relations": {"R": [["a", "b"]]}, "point": "a", "parent": {"b": "a"}}

"point" and "parent" are optional. Unknown keys are rejected.
"""

from __future__ import annotations

import json
from pathlib import Path

from .core.structure import PointedStructure, Structure, Vocabulary
from .errors import MalformedInputError
from .forest import ForestStructure

_KEYS = {"vocabulary", "universe", "relations", "point", "parent"}


def _require(cond, msg):
    if not cond:
        raise MalformedInputError(msg)


def structure_from_json(data: dict):
    """Structure, PointedStructure or ForestStructure depending on which keys are present."""
    _require(isinstance(data, dict), "structure file must hold a JSON object")
    extra = set(data) - _KEYS
    _require(not extra, f"unknown keys: {sorted(extra)}")
    for key in ("vocabulary", "universe"):
        _require(key in data, f"missing key {key!r}")
    vocab = data["vocabulary"]
    _require(isinstance(vocab, dict), "vocabulary must map names to arities")
    for name, arity in vocab.items():
        _require(isinstance(arity, int) and not isinstance(arity, bool) and arity >= 0,
                 f"arity of {name!r} must be a non-negative integer")
    universe = data["universe"]
    _require(isinstance(universe, list) and all(isinstance(x, str) for x in universe),
             "universe must be a list of strings")
    rels = data.get("relations", {})
    _require(isinstance(rels, dict), "relations must be an object")
    tuples = {}
    for name, ts in rels.items():
        _require(isinstance(ts, list) and all(isinstance(t, list) for t in ts),
                 f"relation {name!r} must be a list of tuples")
        tuples[name] = [tuple(t) for t in ts]
    S = Structure(Vocabulary(vocab), universe, tuples)
    if "parent" in data:
        _require("point" not in data, "a forest file cannot also carry a point")
        parent = data["parent"]
        _require(isinstance(parent, dict), "parent must map children to parents")
        return ForestStructure(S, parent)
    if "point" in data:
        point = data["point"]
        _require(isinstance(point, str) and point in S, f"point {point!r} is not in the universe")
        return PointedStructure(S, point)
    return S


def structure_to_json(S) -> dict:
    if isinstance(S, PointedStructure):
        out = structure_to_json(S.base)
        out["point"] = S.point
        return out
    if isinstance(S, ForestStructure):
        out = structure_to_json(S.base)
        out["parent"] = dict(S.parent)
        return out
    return {
        "vocabulary": S.vocab.as_dict(),
        "universe": list(S.universe),
        "relations": {name: [list(t) for t in sorted(S.rel(name))] for name in S.vocab.names},
    }


def load_structure(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise MalformedInputError(f"cannot read {path}: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInputError(f"{path}: invalid JSON ({exc})") from None
    return structure_from_json(data)


def dump_structure(S, path):
    Path(path).write_text(json.dumps(structure_to_json(S), indent=2) + "\n", encoding="utf-8")


def load_directory(path) -> tuple[list, list]:
    """All *.json structure files in a directory, sorted by file name."""
    d = Path(path)
    if not d.is_dir():
        raise MalformedInputError(f"{path} is not a directory")
    files = sorted(p for p in d.glob("*.json"))
    return [p.stem for p in files], [load_structure(p) for p in files]


def decision_json(relation: str, logic: str, k: int, result: bool, witness=None) -> dict:
    return {"relation": relation, "logic": logic, "k": k, "result": result, "witness": witness}
