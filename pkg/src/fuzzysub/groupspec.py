"""Group-spec expressions such as ``"D8 x C16"`` or ``"Z2^3 x Z8"``.

Grammar (case- and whitespace-insensitive)::

    expr   := term ("x" term)*
    term   := family INT ("^" INT)?
    family := "C" | "Z" | "D"

``C`` and ``Z`` both mean the cyclic group of the given order.  ``D`` takes
the dihedral group's TOTAL order, so ``D8`` has eight elements.  ``^k``
repeats a factor ``k`` times.  ``Q`` and ``SD`` are reserved names.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from functools import reduce

from .errors import SpecCapacityError, SpecError
from .groups import DEFAULT_ORDER_CAP, Group, build_cyclic, build_dihedral, direct_product


class Family(enum.Enum):
    CYCLIC = "C"
    DIHEDRAL = "D"


@dataclass(frozen=True)
class Atom:
    family: Family
    order: int
    repeat: int = 1


@dataclass(frozen=True)
class GroupExpr:
    factors: tuple[Atom, ...]

    @property
    def order(self) -> int:
        return math.prod(a.order**a.repeat for a in self.factors)


_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<word>[a-z]+)|(?P<sym>\^)|(?P<bad>\S))", re.I)
_RESERVED = {"q": "quaternion", "sd": "semidihedral"}


def _tokens(text: str):
    pos = 0
    while True:
        m = _TOKEN.match(text, pos)
        if m is None:
            return
        kind = m.lastgroup
        yield kind, m.group(kind), m.start(kind)
        pos = m.end()


def _split_words(tokens):
    """Split letter runs like ``xd`` (from ``c16xd16``) into single tokens.

    Only ``x`` may be glued to a family name; reserved names stay whole so
    they can be reported as unsupported.
    """
    for kind, value, pos in tokens:
        if kind != "word":
            yield kind, value, pos
            continue
        low = value.lower()
        if low[0] == "x" and len(low) > 1:
            yield "word", value[0], pos
            value, low, pos = value[1:], low[1:], pos + 1
        yield "word", value, pos


def _to_int(digits: str, pos: int, cap: int) -> int:
    if len(digits.lstrip("0")) > len(str(cap)):
        raise SpecCapacityError(f"integer exceeds the order cap {cap}", digits, pos)
    return int(digits)


def parse_spec(text: str, cap: int = DEFAULT_ORDER_CAP) -> GroupExpr:
    toks = list(_split_words(_tokens(text)))
    end = len(text)
    atoms: list[Atom] = []
    total = 1
    i = 0

    def peek():
        return toks[i] if i < len(toks) else ("end", "", end)

    while True:
        kind, value, pos = peek()
        if kind == "end":
            raise SpecError("expected a group factor", value or "<end>", pos)
        if kind != "word":
            raise SpecError("expected a family letter C, Z or D", value, pos)
        low = value.lower()
        if low in _RESERVED:
            raise SpecError(f"{_RESERVED[low]} groups are not supported", value, pos)
        if low in ("c", "z"):
            family = Family.CYCLIC
        elif low == "d":
            family = Family.DIHEDRAL
        else:
            raise SpecError("unknown group family", value, pos)
        i += 1

        kind, num, npos = peek()
        if kind != "int":
            raise SpecError("expected an integer order", num or "<end>", npos)
        order = _to_int(num, npos, cap)
        i += 1
        if order < 1:
            raise SpecError("group order must be positive", num, npos)
        if family is Family.DIHEDRAL and (order < 4 or order % 2):
            raise SpecError("dihedral order must be even and at least 4", num, npos)

        repeat = 1
        kind, sym, spos = peek()
        if kind == "sym":
            i += 1
            kind, rnum, rpos = peek()
            if kind != "int":
                raise SpecError("expected an integer exponent after '^'", rnum or "<end>", rpos)
            repeat = _to_int(rnum, rpos, cap)
            i += 1
            if repeat < 1:
                raise SpecError("exponent must be at least 1", rnum, rpos)
            if repeat > cap:
                raise SpecCapacityError(f"exponent exceeds the order cap {cap}", rnum, rpos)

        atoms.append(Atom(family, order, repeat))
        for _ in range(repeat if order > 1 else 0):
            total *= order
            if total > cap:
                raise SpecCapacityError(f"realized order exceeds the order cap {cap}", num, npos)

        kind, value, pos = peek()
        if kind == "end":
            break
        if kind == "word" and value.lower() == "x":
            i += 1
            continue
        raise SpecError("expected 'x' between factors", value, pos)

    return GroupExpr(tuple(atoms))


def canonical_factors(expr: GroupExpr) -> list[Atom]:
    flat = [Atom(a.family, a.order) for a in expr.factors for _ in range(a.repeat)]
    return sorted(flat, key=lambda a: (a.family is not Family.DIHEDRAL, -a.order))


def canonicalize(expr: GroupExpr) -> str:
    return " x ".join(f"{a.family.value}{a.order}" for a in canonical_factors(expr))


def realize(expr: GroupExpr, cap: int = DEFAULT_ORDER_CAP) -> Group:
    parts = [
        build_dihedral(a.order, cap) if a.family is Family.DIHEDRAL else build_cyclic(a.order, cap)
        for a in canonical_factors(expr)
    ]
    g = reduce(lambda a, b: direct_product(a, b, cap), parts)
    return Group(g.table, g.inverse, g.element_labels, canonicalize(expr))


def group_from_spec(text: str, cap: int = DEFAULT_ORDER_CAP) -> Group:
    return realize(parse_spec(text, cap), cap)


def canonical_spec(text: str, cap: int = DEFAULT_ORDER_CAP) -> str:
    return canonicalize(parse_spec(text, cap))
