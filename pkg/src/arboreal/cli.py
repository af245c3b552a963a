"""Command-line entry point. Every command prints one JSON document.

Exit codes: 0 ran, 1 malformed or unsupported input, 2 size cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import games
from .comonads import ef_build, modal_build
from .core.search import find_homomorphism
from .core.structure import PointedStructure, Structure
from .equivalence import (LOGICS, R_forest, arrow_witness, equiv_witness, iso_witness)
from .errors import ArborealError, MalformedInputError, SizeCapError, UnsupportedInputError
from .extendability import default_environment, extend_iterated
from .forest import ForestStructure, check_condition_E, check_condition_M, type_tree
from .hpt import (Universe, check_bcp, check_hp, check_idempotent, check_negative_restriction,
                  witness_rank)
from .io import decision_json, load_directory, load_structure, structure_to_json
from .logic.characteristic import ep_characteristic_fo, ep_characteristic_modal
from .logic.semantics import formula_size, holds, modal_depth, quantifier_rank
from .logic.syntax import parse


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise MalformedInputError(message)


def _structure(path, kind=None):
    S = load_structure(path)
    if kind == "plain" and not isinstance(S, Structure):
        raise MalformedInputError(f"{path}: expected a structure without point or parent")
    if kind == "pointed" and not isinstance(S, PointedStructure):
        raise MalformedInputError(f"{path}: expected a pointed structure")
    return S


def _for_logic(path, logic):
    return _structure(path, "pointed" if logic == "modal" else "plain")


def _formula_text(arg: str) -> str:
    p = Path(arg)
    if p.is_file():
        return p.read_text(encoding="utf-8")
    return arg


def _theory(path) -> list:
    text = Path(path).read_text(encoding="utf-8")
    try:
        items = json.loads(text)
    except json.JSONDecodeError:
        items = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith(";")]
    if not isinstance(items, list) or not all(isinstance(x, str) for x in items):
        raise MalformedInputError("theory file must be a JSON list of formulas or one formula per line")
    return [parse(x) for x in items]


# commands

def cmd_structure_validate(args):
    S = load_structure(args.file)
    out = {"valid": True, "size": len(S)}
    if isinstance(S, ForestStructure):
        out.update(kind="forest", height=S.height(), condition_E=check_condition_E(S))
        if S.vocab.is_modal:
            out["condition_M"] = check_condition_M(S)
    else:
        out["kind"] = "pointed" if isinstance(S, PointedStructure) else "structure"
    return out


def cmd_comonad(args):
    if args.which == "ef":
        c = ef_build(_structure(args.file, "plain"), args.k)
        return structure_to_json(c.carrier)
    c = modal_build(_structure(args.file, "pointed"), args.k)
    out = structure_to_json(c.carrier)
    out["point"] = c.point
    return out


def cmd_decide(args):
    a = _for_logic(args.a, args.logic)
    b = _for_logic(args.b, args.logic)
    if args.relation == "hom":
        if args.logic == "modal":
            h = find_homomorphism(a.base, b.base, {a.point: b.point})
        else:
            h = find_homomorphism(a, b)
        witness = None if h is None else dict(sorted(h.map.items()))
        return decision_json("hom", args.logic, args.k, h is not None, witness)
    if args.relation == "arrow":
        h = arrow_witness(args.logic, args.k, a, b)
        return decision_json("arrow", args.logic, args.k, h is not None,
                             None if h is None else dict(sorted(h.map.items())))
    if args.relation == "equiv":
        system = equiv_witness(args.logic, args.k, a, b)
        return decision_json("equiv", args.logic, args.k, system is not None,
                             None if system is None else system.to_json())
    iso = iso_witness(args.logic, args.k, a, b)
    return decision_json("iso", args.logic, args.k, iso is not None,
                         None if iso is None else dict(sorted(iso.items())))


_ORACLES = {
    "efgame": (games.oracle_ef_game, "plain"),
    "epgame": (games.oracle_ep_game, "plain"),
    "bisim": (games.oracle_bisim_game, "pointed"),
    "graded": (games.oracle_graded_bisim, "pointed"),
}


def cmd_oracle(args):
    fn, kind = _ORACLES[args.which]
    a, b = _structure(args.a, kind), _structure(args.b, kind)
    return {"oracle": args.which, "k": args.k, "result": fn(a, b, args.k)}


def cmd_formula_eval(args):
    phi = parse(_formula_text(args.formula))
    S = load_structure(args.structure)
    if isinstance(S, ForestStructure):
        raise UnsupportedInputError("formulas are evaluated on structures, not forests")
    return {"formula": str(phi), "result": holds(phi, S)}


def cmd_witness(args):
    if args.which == "ep-fo":
        phi = ep_characteristic_fo(_structure(args.file, "plain"), args.k)
        rank = quantifier_rank(phi)
    else:
        phi = ep_characteristic_modal(_structure(args.file, "pointed"), args.k)
        rank = modal_depth(phi)
    return {"formula": str(phi), "rank": rank, "size": formula_size(phi)}


def cmd_typetree(args):
    S = load_structure(args.file)
    if isinstance(S, ForestStructure):
        X = S
    else:
        X = R_forest("modal" if isinstance(S, PointedStructure) else "ef", args.k, S)
    t = type_tree(X)
    return {"k": args.k, "size": t.size(), "tree": t.to_json()}


def cmd_extend(args):
    a = _structure(args.file, "plain")
    env = default_environment(a.vocab, args.k, args.env_nodes)
    for extra in args.env or []:
        env.add(_structure(extra, "plain"), f"file {extra}")
    chain = extend_iterated(a, args.k, env, args.steps)
    certs = [{"step": i, "size": len(link.b), "section": dict(sorted(link.section.map.items())),
              "retraction": dict(sorted(link.retraction.map.items())), "verified": link.verified()}
             for i, link in enumerate(chain)]
    out = {"k": args.k, "steps": args.steps, "environment_size": len(env),
           "note": "extensions relative to the supplied environment and step budget", "chain": []}
    if args.out:
        d = Path(args.out)
        d.mkdir(parents=True, exist_ok=True)
        for i, link in enumerate(chain):
            p = d / f"b{i}.json"
            p.write_text(json.dumps(structure_to_json(link.b), indent=2) + "\n", encoding="utf-8")
            out["chain"].append(str(p))
        cp = d / "certificate.json"
        cp.write_text(json.dumps(certs, indent=2) + "\n", encoding="utf-8")
        out["certificate"] = str(cp)
    else:
        out["chain"] = [structure_to_json(link.b) for link in chain]
        out["certificate"] = certs
    return out


def cmd_hpt_check(args):
    U = Universe.load(args.universe, args.logic)
    if args.formula is not None:
        D = parse(_formula_text(args.formula))
    else:
        wanted = [x.strip() for x in args.members.split(",") if x.strip()]
        unknown = [x for x in wanted if x not in U.names]
        if unknown:
            raise MalformedInputError(f"unknown members {unknown}; known: {U.names}")
        D = [U.names.index(x) for x in wanted]
    report = check_hp(U, D, args.k, variant=args.variant)
    out = report.to_json()
    if report.witness is not None:
        out["witness_rank"] = witness_rank(U, report.witness)
    return out


def cmd_hpt_bcp(args):
    a = load_structure(args.file)
    return {"check": "bcp", "k": args.k, "result": check_bcp(a, args.k)}


def cmd_hpt_idempotent(args):
    a = load_structure(args.file)
    return {"check": "idempotent", "k": args.k, "result": check_idempotent(a, args.k)}


def cmd_hpt_negative(args):
    T = _theory(args.theory)
    _, samples = load_directory(args.samples)
    samples = [s for s in samples if isinstance(s, Structure)]
    return {"check": "negative-restriction", "k": args.k, "theory": [str(p) for p in T],
            "samples": len(samples), "result": check_negative_restriction(T, args.k, samples)}


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="arboreal", description="Game comonads and preservation checks on finite structures.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    st = sub.add_parser("structure").add_subparsers(dest="action", required=True, parser_class=_Parser)
    v = st.add_parser("validate")
    v.add_argument("file")
    v.set_defaults(func=cmd_structure_validate)

    c = sub.add_parser("comonad")
    c.add_argument("which", choices=["ef", "modal"])
    c.add_argument("--k", type=int, required=True)
    c.add_argument("file")
    c.set_defaults(func=cmd_comonad)

    d = sub.add_parser("decide")
    d.add_argument("relation", choices=["hom", "arrow", "equiv", "iso"])
    d.add_argument("--logic", choices=LOGICS, default="ef")
    d.add_argument("--k", type=int, default=0)
    d.add_argument("a")
    d.add_argument("b")
    d.set_defaults(func=cmd_decide)

    o = sub.add_parser("oracle")
    o.add_argument("which", choices=sorted(_ORACLES))
    o.add_argument("--k", type=int, required=True)
    o.add_argument("a")
    o.add_argument("b")
    o.set_defaults(func=cmd_oracle)

    f = sub.add_parser("formula").add_subparsers(dest="action", required=True, parser_class=_Parser)
    fe = f.add_parser("eval")
    fe.add_argument("formula", help="s-expression or a file holding one")
    fe.add_argument("structure")
    fe.set_defaults(func=cmd_formula_eval)

    w = sub.add_parser("witness")
    w.add_argument("which", choices=["ep-fo", "ep-modal"])
    w.add_argument("--k", type=int, required=True)
    w.add_argument("file")
    w.set_defaults(func=cmd_witness)

    t = sub.add_parser("typetree")
    t.add_argument("--k", type=int, required=True)
    t.add_argument("file")
    t.set_defaults(func=cmd_typetree)

    e = sub.add_parser("extend")
    e.add_argument("--k", type=int, required=True)
    e.add_argument("--steps", type=int, default=1)
    e.add_argument("--env-nodes", type=int, default=3)
    e.add_argument("--env", action="append", help="extra environment structure file (repeatable)")
    e.add_argument("--out", help="directory for chain files and certificate.json")
    e.add_argument("file")
    e.set_defaults(func=cmd_extend)

    h = sub.add_parser("hpt").add_subparsers(dest="action", required=True, parser_class=_Parser)
    hc = h.add_parser("check")
    hc.add_argument("--k", type=int, required=True)
    hc.add_argument("--universe", required=True)
    hc.add_argument("--logic", choices=LOGICS)
    hc.add_argument("--variant", choices=["hp", "hp#"])
    group = hc.add_mutually_exclusive_group(required=True)
    group.add_argument("--formula")
    group.add_argument("--members", help="comma-separated file stems")
    hc.set_defaults(func=cmd_hpt_check)
    for name, fn in (("bcp", cmd_hpt_bcp), ("idempotent", cmd_hpt_idempotent)):
        hp = h.add_parser(name)
        hp.add_argument("--k", type=int, required=True)
        hp.add_argument("file")
        hp.set_defaults(func=fn)
    hn = h.add_parser("negative-restriction")
    hn.add_argument("--k", type=int, required=True)
    hn.add_argument("--theory", required=True)
    hn.add_argument("--samples", required=True)
    hn.set_defaults(func=cmd_hpt_negative)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "k", 0) is not None and getattr(args, "k", 0) < 0:
            raise MalformedInputError("k must be non-negative")
        out = args.func(args)
    except SizeCapError as exc:
        print(json.dumps({"error": str(exc), "kind": "size-cap"}))
        return 2
    except (MalformedInputError, UnsupportedInputError, ArborealError) as exc:
        print(json.dumps({"error": str(exc), "kind": "input"}))
        return 1
    except (OSError, RecursionError) as exc:
        print(json.dumps({"error": str(exc), "kind": "input"}))
        return 1
    print(json.dumps(out, indent=2))
    return 0


if __name__ == "__main__":
    sys.exit(main())
