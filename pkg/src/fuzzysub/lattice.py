"""Subgroup lattices as canonically sorted bitsets.

Enumeration starts from the trivial and the cyclic subgroups and keeps
joining a known subgroup ``H`` with an element ``x`` outside it.  Only
*minimal extensions* are tried: ``x`` whose prime powers ``x^q`` already lie
in ``H``.  That loses nothing.  For ``K`` above a maximal subgroup ``M`` of
``K``, an element ``x`` of minimal order in ``K \\ M`` has every ``x^q``
(``q`` a prime dividing its order) in ``M``, and ``M`` and ``x`` generate ``K``.  Induction down any
maximal chain reaches every subgroup.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import CapacityError, InternalError
from .groups import Group, element_orders

DEFAULT_SUBGROUP_LIMIT = 100_000


@dataclass(frozen=True)
class SubgroupSet:
    """One subgroup; bit ``i`` of ``bits`` is set iff element ``i`` belongs."""

    bits: int
    size: int

    @classmethod
    def from_elements(cls, elements: Iterable[int]) -> SubgroupSet:
        bits = 0
        for e in set(elements):
            bits |= 1 << int(e)
        return cls(bits, bits.bit_count())

    def elements(self) -> list[int]:
        out, b, i = [], self.bits, 0
        while b:
            if b & 1:
                out.append(i)
            b >>= 1
            i += 1
        return out

    def __contains__(self, x: int) -> bool:
        return bool(self.bits >> x & 1)

    def __le__(self, other: SubgroupSet) -> bool:
        return self.bits & ~other.bits == 0

    def __lt__(self, other: SubgroupSet) -> bool:
        return self <= other and self.bits != other.bits


def _row_to_int(row: np.ndarray) -> int:
    return int.from_bytes(row.tobytes(), "little")


def _int_to_row(bits: int, words: int) -> np.ndarray:
    return np.frombuffer(bits.to_bytes(words * 8, "little"), dtype=np.uint64).copy()


def closure(g: Group, seed: SubgroupSet | Iterable[int]) -> SubgroupSet:
    """Smallest subgroup containing ``seed`` and the identity."""
    gens = seed.elements() if isinstance(seed, SubgroupSet) else sorted({int(x) for x in seed})
    for x in gens:
        if not 0 <= x < g.order:
            raise IndexError(f"element index {x} out of range for order {g.order}")
    member = kernels.generate(g.table, np.zeros(0, np.int64), np.asarray(gens, np.int64))
    return SubgroupSet(_row_to_int(kernels.pack(member, kernels.n_words(g.order))), int(member.sum()))


@dataclass(frozen=True, eq=False)
class SubgroupLattice:
    """All subgroups of ``group`` sorted by ``(size, bits)``.

    ``words[i]`` is subgroup ``i`` as packed ``uint64`` words.  Index 0 is the
    trivial subgroup and the last index is the whole group.  ``below`` holds,
    in CSR form, every proper subgroup of each entry; ``covers`` holds only
    the maximal ones (the Hasse diagram).
    """

    group: Group
    words: np.ndarray
    sizes: np.ndarray
    below_ptr: np.ndarray
    below_idx: np.ndarray
    cover_ptr: np.ndarray
    cover_idx: np.ndarray
    _index: dict = field(repr=False)

    def __len__(self) -> int:
        return int(self.sizes.shape[0])

    @property
    def top(self) -> int:
        return len(self) - 1

    @cached_property
    def subgroups(self) -> list[SubgroupSet]:
        return [SubgroupSet(_row_to_int(w), int(s)) for w, s in zip(self.words, self.sizes)]

    def covers(self, h: int) -> np.ndarray:
        return self.cover_idx[self.cover_ptr[h] : self.cover_ptr[h + 1]]

    def below(self, h: int) -> np.ndarray:
        return self.below_idx[self.below_ptr[h] : self.below_ptr[h + 1]]

    def index_of(self, sub: SubgroupSet | np.ndarray) -> int:
        """Lattice index of a subgroup; ``KeyError`` if it is not an entry."""
        if isinstance(sub, SubgroupSet):
            sub = _int_to_row(sub.bits, self.words.shape[1])
        return self._index[np.ascontiguousarray(sub, dtype=np.uint64).tobytes()]

    def _check(self, h: int) -> None:
        if not 0 <= h < len(self):
            raise IndexError(f"subgroup index {h} out of range for {len(self)} subgroups")

    def to_dict(self) -> dict:
        return {
            "spec": self.group.spec,
            "order": self.group.order,
            "subgroup_count": len(self),
            "subgroups": [
                {"size": s.size, "bits_hex": format(s.bits, "x")} for s in self.subgroups
            ],
            "covers": [self.covers(h).tolist() for h in range(len(self))],
        }


def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def _power(table: np.ndarray, x: int, k: int) -> int:
    y = 0
    for _ in range(k):
        y = int(table[y, x])
    return y


def enumerate_subgroups(g: Group, limit: int = DEFAULT_SUBGROUP_LIMIT) -> SubgroupLattice:
    table = g.table
    n = g.order
    nw = kernels.n_words(n)
    empty = np.zeros(0, np.int64)

    found: dict[bytes, int] = {}
    members: list[np.ndarray] = []
    gens: list[list[int]] = []
    queue: list[int] = []

    def add(member: np.ndarray, generators: list[int]) -> None:
        key = kernels.pack(member, nw).tobytes()
        if key in found:
            return
        if len(found) >= limit:
            raise CapacityError(
                f"{g.spec} has more than {limit} subgroups (subgroup limit {limit})"
            )
        found[key] = len(members)
        members.append(member)
        gens.append(generators)
        queue.append(len(members) - 1)

    trivial = np.zeros(n, np.bool_)
    trivial[0] = True
    add(trivial, [])

    # one generator per cyclic subgroup, plus its prime powers
    orders = element_orders(g)
    reps: list[int] = []
    seen_cyclic: set[bytes] = set()
    for x in range(1, n):
        member = kernels.generate(table, empty, np.array([x], np.int64))
        key = kernels.pack(member, nw).tobytes()
        if key not in seen_cyclic:
            seen_cyclic.add(key)
            reps.append(x)
            add(member, [x])
    rep_arr = np.asarray(reps, np.int64)
    width = max((len(_prime_factors(int(orders[x]))) for x in reps), default=1)
    powers = np.zeros((len(reps), width), np.int64)
    for r, x in enumerate(reps):
        for c, q in enumerate(_prime_factors(int(orders[x]))):
            powers[r, c] = _power(table, x, q)

    head = 0
    while head < len(queue):
        h = queue[head]
        head += 1
        member = members[h]
        if rep_arr.size == 0:
            break
        cand = rep_arr[~member[rep_arr] & member[powers].all(axis=1)]
        if cand.size == 0:
            continue
        elems = np.nonzero(member)[0]
        base = gens[h]
        for x in cand.tolist():
            new_gens = base + [x]
            add(kernels.generate(table, elems, np.asarray(new_gens, np.int64)), new_gens)

    keys = sorted(found, key=lambda k: (int(members[found[k]].sum()), int.from_bytes(k, "little")))
    words = np.frombuffer(b"".join(keys), dtype=np.uint64).reshape(len(keys), nw).copy()
    sizes = np.array([int(members[found[k]].sum()) for k in keys], dtype=np.int64)
    index = {k: i for i, k in enumerate(keys)}
    below_ptr, below_idx = kernels.containment(words, sizes)
    cover_ptr, cover_idx = kernels.covers(words, below_ptr, below_idx)
    for a in (words, sizes, below_ptr, below_idx, cover_ptr, cover_idx):
        a.setflags(write=False)
    return SubgroupLattice(g, words, sizes, below_ptr, below_idx, cover_ptr, cover_idx, index)


def maximal_subgroups(lat: SubgroupLattice, h: int) -> list[int]:
    lat._check(h)
    return lat.covers(h).tolist()


def meet_words(lat: SubgroupLattice, hs: Sequence[int]) -> np.ndarray:
    return np.bitwise_and.reduce(lat.words[list(hs)], axis=0)


def intersect(lat: SubgroupLattice, h1: int, h2: int) -> int:
    lat._check(h1)
    lat._check(h2)
    row = lat.words[h1] & lat.words[h2]
    try:
        return lat.index_of(row)
    except KeyError:
        raise InternalError(
            f"meet of subgroups {h1} and {h2} is missing from the lattice of {lat.group.spec}"
        ) from None


def is_subgroup(g: Group, sub: SubgroupSet) -> bool:
    """Direct closure test, independent of the enumeration machinery."""
    elems = np.asarray(sub.elements(), np.int64)
    if 0 not in sub or elems.size == 0:
        return False
    mask = np.zeros(g.order, np.bool_)
    mask[elems] = True
    return bool(mask[g.table[np.ix_(elems, elems)]].all() and mask[g.inverse[elems]].all())


def lagrange_ok(g: Group, sub: SubgroupSet) -> bool:
    return g.order % sub.size == 0


def smallest_prime_factor(n: int) -> int:
    return _prime_factors(n)[0] if n > 1 else 1


def height(lat: SubgroupLattice) -> int:
    """Length of the longest maximal chain (number of covering steps)."""
    depth = np.zeros(len(lat), np.int64)
    for h in range(len(lat)):
        cov = lat.covers(h)
        if cov.size:
            depth[h] = depth[cov].max() + 1
    return int(depth[-1])


__all__ = [
    "DEFAULT_SUBGROUP_LIMIT",
    "SubgroupLattice",
    "SubgroupSet",
    "closure",
    "enumerate_subgroups",
    "height",
    "intersect",
    "is_subgroup",
    "lagrange_ok",
    "maximal_subgroups",
    "meet_words",
    "smallest_prime_factor",
]
