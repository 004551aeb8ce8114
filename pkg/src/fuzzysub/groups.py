"""Finite groups as explicit Cayley tables.

Element indexing is fixed so that subgroup bitsets are reproducible:

* cyclic ``C_n``: index ``i`` is ``g^i``;
* dihedral of order ``2m``: indices ``0..m-1`` are rotations ``r^i``,
  indices ``m..2m-1`` are reflections ``r^i s``;
* direct product ``A x B``: ``(a, b)`` sits at ``a * |B| + b``.

Index 0 is always the identity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CapacityError, InvalidParameterError

DEFAULT_ORDER_CAP = 1024


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Group:
    """Immutable finite group. ``table[a, b]`` is the index of ``a*b``."""

    table: np.ndarray
    inverse: np.ndarray
    element_labels: tuple[str, ...]
    spec: str
    order: int = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "table", _frozen(self.table.astype(np.int64)))
        object.__setattr__(self, "inverse", _frozen(self.inverse.astype(np.int64)))
        object.__setattr__(self, "order", int(self.table.shape[0]))

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"Group({self.spec!r}, order={self.order})"

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def same_table(self, other: Group) -> bool:
        return self.order == other.order and bool(np.array_equal(self.table, other.table))


def _check_cap(order: int, cap: int) -> None:
    if order > cap:
        raise CapacityError(f"group order {order} exceeds the order cap {cap}")


def _power_label(base: str, k: int) -> str:
    if k == 0:
        return "e"
    return base if k == 1 else f"{base}^{k}"


def build_cyclic(n: int, cap: int = DEFAULT_ORDER_CAP) -> Group:
    if n < 1:
        raise InvalidParameterError(f"cyclic order must be positive, got {n}")
    _check_cap(n, cap)
    idx = np.arange(n)
    table = (idx[:, None] + idx[None, :]) % n
    inverse = (-idx) % n
    labels = tuple(_power_label("g", i) for i in range(n))
    return Group(table, inverse, labels, f"C{n}")


def build_dihedral(order: int, cap: int = DEFAULT_ORDER_CAP) -> Group:
    """Dihedral group of the given *total* order (``D8`` has 8 elements)."""
    if order < 4 or order % 2:
        raise InvalidParameterError(
            f"dihedral order must be even and at least 4, got {order}"
        )
    _check_cap(order, cap)
    m = order // 2
    rot = np.arange(m)
    i = np.concatenate([rot, rot])[:, None]
    j = np.concatenate([rot, rot])[None, :]
    a_ref = np.arange(order)[:, None] >= m
    b_ref = np.arange(order)[None, :] >= m
    # r^i r^j = r^(i+j); r^i s r^j = r^(i-j) s; flips compose to rotations
    exponent = np.where(a_ref, i - j, i + j) % m
    table = exponent + m * (a_ref ^ b_ref)
    inverse = np.concatenate([(-rot) % m, rot + m])
    labels = tuple(_power_label("r", k) for k in range(m)) + tuple(
        "s" if k == 0 else f"{_power_label('r', k)} s" for k in range(m)
    )
    return Group(table, inverse, labels, f"D{order}")


def direct_product(a: Group, b: Group, cap: int = DEFAULT_ORDER_CAP) -> Group:
    order = a.order * b.order
    _check_cap(order, cap)
    nb = b.order
    ta = a.table[:, None, :, None]
    tb = b.table[None, :, None, :]
    table = (ta * nb + tb).reshape(order, order)
    inverse = (a.inverse[:, None] * nb + b.inverse[None, :]).reshape(order)
    labels = tuple(f"({x}, {y})" for x in a.element_labels for y in b.element_labels)
    return Group(table, inverse, labels, f"{a.spec} x {b.spec}")


def element_order(g: Group, x: int) -> int:
    if not 0 <= x < g.order:
        raise IndexError(f"element index {x} out of range for order {g.order}")
    k, y = 1, x
    while y != 0:
        y = int(g.table[y, x])
        k += 1
    return k


def element_orders(g: Group) -> np.ndarray:
    """Orders of all elements at once (vectorised repeated multiplication)."""
    orders = np.zeros(g.order, dtype=np.int64)
    cur = np.arange(g.order)
    for k in range(1, g.order + 1):
        hit = (cur == 0) & (orders == 0)
        orders[hit] = k
        if orders.all():
            break
        cur = g.table[cur, np.arange(g.order)]
    return orders


def check_axioms(g: Group, samples: int = 100_000, seed: int = 0) -> None:
    """Raise ``AssertionError`` if any group axiom fails.

    Associativity is exhaustive up to order 64 and sampled above.
    """
    n, t = g.order, g.table
    full = np.arange(n)
    for row in t:
        assert np.array_equal(np.sort(row), full), "table row is not a permutation"
    for col in t.T:
        assert np.array_equal(np.sort(col), full), "table column is not a permutation"
    assert np.array_equal(t[0], full) and np.array_equal(t[:, 0], full), "index 0 is not the identity"
    assert np.all(t[full, g.inverse] == 0), "inverse table is wrong"
    if n <= 64:
        lhs = t[t[:, :, None], full[None, None, :]]
        rhs = t[full[:, None, None], t[None, :, :]]
        assert np.array_equal(lhs, rhs), "table is not associative"
    else:
        rng = np.random.default_rng(seed)
        a, b, c = rng.integers(0, n, size=(3, samples))
        assert np.array_equal(t[t[a, b], c], t[a, t[b, c]]), "table is not associative"


def center(g: Group) -> np.ndarray:
    """Indices of central elements."""
    return np.nonzero(np.all(g.table == g.table.T, axis=1))[0]


def lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)
