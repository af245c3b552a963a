"""Formula syntax for first-order and (graded) modal logic, with an
s-expression reader and printer that round-trip exactly.

    (forall x (forall y (implies (not (= x y)) (R x y))))
    (dia R 2 (prop p))
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import MalformedInputError

KEYWORDS = frozenset({"true", "false", "not", "and", "or", "implies", "exists", "forall",
                      "=", "prop", "dia", "box"})


class Formula:
    __slots__ = ()

    def __str__(self):
        return to_sexpr(self)


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Bottom(Formula):
    pass


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True)
class And(Formula):
    args: tuple = ()


@dataclass(frozen=True)
class Or(Formula):
    args: tuple = ()


# first-order only

@dataclass(frozen=True)
class Eq(Formula):
    left: str
    right: str


@dataclass(frozen=True)
class Atom(Formula):
    rel: str
    args: tuple


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


# modal only

@dataclass(frozen=True)
class Prop(Formula):
    name: str


@dataclass(frozen=True)
class Dia(Formula):
    """At least ``grade`` R-successors satisfy body; ``grade=None`` is the plain diamond."""

    rel: str
    grade: int | None
    body: Formula


@dataclass(frozen=True)
class Box(Formula):
    rel: str
    grade: int | None
    body: Formula


FO_ONLY = (Eq, Atom, Implies, Exists, Forall)
MODAL_ONLY = (Prop, Dia, Box)


def children(phi: Formula) -> tuple:
    if isinstance(phi, (And, Or)):
        return phi.args
    if isinstance(phi, Not):
        return (phi.arg,)
    if isinstance(phi, Implies):
        return (phi.left, phi.right)
    if isinstance(phi, (Exists, Forall, Dia, Box)):
        return (phi.body,)
    return ()


def conj(parts) -> Formula:
    parts = tuple(parts)
    return parts[0] if len(parts) == 1 else And(parts)


def disj(parts) -> Formula:
    parts = tuple(parts)
    return parts[0] if len(parts) == 1 else Or(parts)


# printing

def to_sexpr(phi: Formula) -> str:
    out = []
    _emit(phi, out)
    return "".join(out)


def _emit(phi, out):
    # explicit stack keeps deep characteristic formulas away from the recursion limit
    stack = [phi]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            out.append(item)
            continue
        head, tail = _parts(item)
        out.append("(" + head)
        stack.append(")")
        for sub in reversed(tail):
            stack.append(sub)
            stack.append(" ")


def _parts(phi):
    if isinstance(phi, Top):
        return "true", ()
    if isinstance(phi, Bottom):
        return "false", ()
    if isinstance(phi, Not):
        return "not", (phi.arg,)
    if isinstance(phi, And):
        return "and", phi.args
    if isinstance(phi, Or):
        return "or", phi.args
    if isinstance(phi, Eq):
        return f"= {phi.left} {phi.right}", ()
    if isinstance(phi, Atom):
        return " ".join((phi.rel,) + tuple(phi.args)), ()
    if isinstance(phi, Implies):
        return "implies", (phi.left, phi.right)
    if isinstance(phi, Exists):
        return f"exists {phi.var}", (phi.body,)
    if isinstance(phi, Forall):
        return f"forall {phi.var}", (phi.body,)
    if isinstance(phi, Prop):
        return f"prop {phi.name}", ()
    if isinstance(phi, (Dia, Box)):
        head = "dia" if isinstance(phi, Dia) else "box"
        grade = "" if phi.grade is None else f" {phi.grade}"
        return f"{head} {phi.rel}{grade}", (phi.body,)
    raise MalformedInputError(f"not a formula: {phi!r}")


# reading

def _tokens(text):
    tok = []
    buf = []
    for ch in text:
        if ch in "()":
            if buf:
                tok.append("".join(buf))
                buf = []
            tok.append(ch)
        elif ch.isspace():
            if buf:
                tok.append("".join(buf))
                buf = []
        else:
            buf.append(ch)
    if buf:
        tok.append("".join(buf))
    return tok


def _tree(tokens):
    stack = [[]]
    for t in tokens:
        if t == "(":
            stack.append([])
        elif t == ")":
            if len(stack) == 1:
                raise MalformedInputError("unbalanced ')'")
            done = stack.pop()
            stack[-1].append(done)
        else:
            stack[-1].append(t)
    if len(stack) != 1:
        raise MalformedInputError("unbalanced '('")
    if len(stack[0]) != 1 or not isinstance(stack[0][0], list):
        raise MalformedInputError("expected exactly one parenthesised formula")
    return stack[0][0]


def _name(x, what):
    if not isinstance(x, str) or x in KEYWORDS:
        raise MalformedInputError(f"expected a {what}, got {x!r}")
    return x


def _build(node):
    if not isinstance(node, list) or not node:
        raise MalformedInputError(f"expected a formula, got {node!r}")
    head, rest = node[0], node[1:]
    if not isinstance(head, str):
        raise MalformedInputError("formula head must be a symbol")

    def arity(n):
        if len(rest) != n:
            raise MalformedInputError(f"({head} ...) takes {n} arguments, got {len(rest)}")

    if head == "true":
        arity(0)
        return Top()
    if head == "false":
        arity(0)
        return Bottom()
    if head == "not":
        arity(1)
        return Not(_build(rest[0]))
    if head == "and":
        return And(tuple(_build(r) for r in rest))
    if head == "or":
        return Or(tuple(_build(r) for r in rest))
    if head == "implies":
        arity(2)
        return Implies(_build(rest[0]), _build(rest[1]))
    if head == "=":
        arity(2)
        return Eq(_name(rest[0], "variable"), _name(rest[1], "variable"))
    if head in ("exists", "forall"):
        arity(2)
        cls = Exists if head == "exists" else Forall
        return cls(_name(rest[0], "variable"), _build(rest[1]))
    if head == "prop":
        arity(1)
        return Prop(_name(rest[0], "proposition"))
    if head in ("dia", "box"):
        cls = Dia if head == "dia" else Box
        if len(rest) == 2:
            return cls(_name(rest[0], "relation"), None, _build(rest[1]))
        if len(rest) == 3:
            g = rest[1]
            if not isinstance(g, str) or not g.isdigit() or (len(g) > 1 and g[0] == "0"):
                raise MalformedInputError(f"grade must be a non-negative integer, got {g!r}")
            return cls(_name(rest[0], "relation"), int(g), _build(rest[2]))
        raise MalformedInputError(f"({head} ...) takes 2 or 3 arguments")
    if head in KEYWORDS:
        raise MalformedInputError(f"misplaced keyword {head!r}")
    return Atom(head, tuple(_name(r, "variable") for r in rest))


def parse(text: str) -> Formula:
    return _build(_tree(_tokens(text)))


def _kinds(phi):
    fo = modal = False
    stack = [phi]
    while stack:
        p = stack.pop()
        fo |= isinstance(p, FO_ONLY)
        modal |= isinstance(p, MODAL_ONLY)
        stack.extend(children(p))
    return fo, modal


def is_fo(phi) -> bool:
    return not _kinds(phi)[1]


def is_modal(phi) -> bool:
    return not _kinds(phi)[0]


def parse_fo(text: str) -> Formula:
    phi = parse(text)
    if not is_fo(phi):
        raise MalformedInputError("modal operators in a first-order formula")
    return phi


def parse_modal(text: str) -> Formula:
    phi = parse(text)
    if not is_modal(phi):
        raise MalformedInputError("first-order operators in a modal formula")
    return phi
