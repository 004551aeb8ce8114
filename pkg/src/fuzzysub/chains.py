"""Counting chains of subgroups that end in a given subgroup.

``h(H)`` counts strictly increasing chains ``H_1 < ... < H_k = H``.  Two
independent routes compute it:

* :func:`count_chains_dp` sums over the whole containment order,
  ``f(H) = 1 + sum(f(K) for K < H)``;
* :func:`count_chains_ie` recurses over maximal subgroups with signed
  inclusion-exclusion over their intersections, doubled.

All arithmetic is on Python integers.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import CapacityError, InternalError, MethodMismatchError
from .groups import Group
from .lattice import DEFAULT_SUBGROUP_LIMIT, SubgroupLattice, enumerate_subgroups

DEFAULT_IE_CAP = 20


class Method(enum.Enum):
    DP = "dp"
    IE = "ie"
    BOTH = "both"


def count_chains_dp(lat: SubgroupLattice) -> list[int]:
    f = np.empty(len(lat), dtype=object)
    for h in range(len(lat)):
        f[h] = 1 + f[lat.below(h)].sum()
    return [int(v) for v in f]


def signed_meets(lat: SubgroupLattice, maxima) -> dict[int, int]:
    """Collapse the inclusion-exclusion expansion over ``maxima``.

    Returns ``{meet index: signed multiplicity}`` with the same total as the
    sum over all non-empty subsets ``S`` of ``(-1)**(len(S)-1) * [meet(S)]``.
    Subsets are grouped by their last member, so each step only intersects
    the new maximal subgroup with the distinct meets seen so far.
    """
    acc: dict[int, int] = {}
    for m in maxima:
        step = {int(m): 1}
        row = lat.words[m]
        for k, c in acc.items():
            meet = lat._index.get((lat.words[k] & row).tobytes())
            if meet is None:
                raise InternalError(
                    f"meet of subgroups {k} and {m} is missing from the lattice of {lat.group.spec}"
                )
            step[meet] = step.get(meet, 0) - c
        for k, c in step.items():
            acc[k] = acc.get(k, 0) + c
    return {k: c for k, c in acc.items() if c}


def count_chains_ie(
    lat: SubgroupLattice,
    h: int | None = None,
    memo: dict[int, int] | None = None,
    cap: int = DEFAULT_IE_CAP,
) -> int:
    if h is None:
        h = lat.top
    if memo is None:
        memo = {}
    stack = [h]
    while stack:
        node = stack[-1]
        if node in memo:
            stack.pop()
            continue
        maxima = lat.covers(node)
        if maxima.size == 0:
            memo[node] = 1
            stack.pop()
            continue
        if maxima.size > cap:
            raise CapacityError(
                f"subgroup {node} of {lat.group.spec} has {maxima.size} maximal subgroups, "
                f"over the inclusion-exclusion cap {cap}; use the DP method"
            )
        terms = signed_meets(lat, maxima)
        pending = [k for k in terms if k not in memo]
        if pending:
            stack.extend(pending)
            continue
        memo[node] = 2 * sum(c * memo[k] for k, c in terms.items())
        stack.pop()
    return memo[h]


@dataclass
class ChainCount:
    """Result of :func:`fuzzy_subgroup_count`."""

    value: int
    method: Method
    spec: str
    order: int
    subgroup_count: int
    runtimes_ms: dict[str, float] = field(default_factory=dict)


def fuzzy_subgroup_count(
    g: Group,
    method: Method | str = Method.BOTH,
    *,
    subgroup_limit: int = DEFAULT_SUBGROUP_LIMIT,
    ie_cap: int = DEFAULT_IE_CAP,
    lattice: SubgroupLattice | None = None,
) -> ChainCount:
    """Number of distinct fuzzy subgroups of ``g``.

    With ``Method.BOTH`` the DP and inclusion-exclusion values must agree;
    a disagreement raises :class:`MethodMismatchError`.
    """
    method = Method(method)
    runtimes: dict[str, float] = {}
    t0 = time.perf_counter()
    lat = lattice if lattice is not None else enumerate_subgroups(g, subgroup_limit)
    runtimes["lattice"] = (time.perf_counter() - t0) * 1e3

    dp = ie = None
    if method in (Method.DP, Method.BOTH):
        t0 = time.perf_counter()
        dp = count_chains_dp(lat)[lat.top]
        runtimes["dp"] = (time.perf_counter() - t0) * 1e3
    if method in (Method.IE, Method.BOTH):
        t0 = time.perf_counter()
        ie = count_chains_ie(lat, cap=ie_cap)
        runtimes["ie"] = (time.perf_counter() - t0) * 1e3
    if dp is not None and ie is not None and dp != ie:
        raise MethodMismatchError(f"{g.spec}: DP gives {dp} but inclusion-exclusion gives {ie}")
    value = dp if dp is not None else ie
    return ChainCount(value, method, g.spec, g.order, len(lat), runtimes)
