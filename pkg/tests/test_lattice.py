import json

import numpy as np
import pytest

from fuzzysub.errors import CapacityError
from fuzzysub.groups import build_cyclic
from fuzzysub.groupspec import group_from_spec
from fuzzysub.lattice import (
    SubgroupSet,
    closure,
    enumerate_subgroups,
    height,
    intersect,
    is_subgroup,
    lagrange_ok,
    maximal_subgroups,
    smallest_prime_factor,
)

from oracles import all_subsets_subgroups, pairwise_join_subgroups, specs_up_to

SMALL = specs_up_to(16)
MID = ["D8 x C4", "D16 x C2", "C8 x C8", "C2 x C2 x C4", "D12 x C2", "C3 x C3 x C3", "D8 x D4"]


def as_sets(lat):
    return {frozenset(s.elements()) for s in lat.subgroups}


def test_small_corpus_size():
    assert len(SMALL) == 45


@pytest.mark.parametrize("spec", SMALL)
def test_matches_exhaustive_subsets(spec):
    g = group_from_spec(spec)
    lat = enumerate_subgroups(g)
    assert as_sets(lat) == all_subsets_subgroups(g.table)
    assert len(lat) == len(as_sets(lat))


@pytest.mark.parametrize("spec", MID)
def test_matches_pairwise_joins(spec):
    g = group_from_spec(spec)
    assert as_sets(enumerate_subgroups(g)) == pairwise_join_subgroups(g.table)


@pytest.mark.parametrize("spec", ["D8", "D16 x C2", "C4 x C4", "D12"])
def test_lattice_structure(spec):
    g = group_from_spec(spec)
    lat = enumerate_subgroups(g)
    subs = lat.subgroups
    assert subs[0].size == 1 and subs[lat.top].size == g.order
    assert list(lat.sizes) == sorted(lat.sizes)
    for s in subs:
        assert is_subgroup(g, s) and lagrange_ok(g, s)
    for h in range(len(lat)):
        below = set(lat.below(h).tolist())
        assert below == {k for k in range(len(lat)) if subs[k] < subs[h]}
        cov = lat.covers(h).tolist()
        # covers are irredundant and every proper subgroup lies under one
        for a in cov:
            assert not any(subs[a] < subs[b] for b in cov)
        for k in below:
            assert any(subs[k] <= subs[c] for c in cov)
    for a in range(len(lat)):
        for b in range(len(lat)):
            m = intersect(lat, a, b)
            assert subs[m].bits == subs[a].bits & subs[b].bits


def test_hasse_of_d8():
    lat = enumerate_subgroups(group_from_spec("D8"))
    assert len(lat) == 10
    assert [int(s) for s in lat.sizes] == [1, 2, 2, 2, 2, 2, 4, 4, 4, 8]
    assert len(maximal_subgroups(lat, lat.top)) == 3
    assert height(lat) == 3


def test_maximals_of_rank3_abelian():
    lat = enumerate_subgroups(group_from_spec("C2 x C2 x C4"))
    maxima = maximal_subgroups(lat, lat.top)
    assert len(maxima) == 1 + 2 + 4
    assert all(lat.sizes[m] == 8 for m in maxima)


def test_cyclic_lattice_is_divisor_chain():
    lat = enumerate_subgroups(build_cyclic(12))
    assert [int(s) for s in lat.sizes] == [1, 2, 3, 4, 6, 12]
    lat = enumerate_subgroups(build_cyclic(32))
    assert len(lat) == 6 and height(lat) == 5


def test_closure_examples():
    g = group_from_spec("D8")
    # r generates the rotations, r and s generate everything
    assert closure(g, [1]).elements() == [0, 1, 2, 3]
    assert closure(g, [1, 4]).size == 8
    assert closure(g, []).elements() == [0]
    assert closure(g, SubgroupSet.from_elements([2, 4])).elements() == [0, 2, 4, 6]
    with pytest.raises(IndexError):
        closure(g, [8])


def test_intersect_example():
    g = group_from_spec("C2 x C2")
    lat = enumerate_subgroups(g)
    a = lat.index_of(SubgroupSet.from_elements([0, 1]))
    b = lat.index_of(SubgroupSet.from_elements([0, 2]))
    assert intersect(lat, a, b) == 0
    assert intersect(lat, a, lat.top) == a
    with pytest.raises(IndexError):
        intersect(lat, 0, len(lat))


def test_subgroup_limit():
    g = group_from_spec("C2^5")
    assert len(enumerate_subgroups(g)) == 374
    with pytest.raises(CapacityError, match="limit 100"):
        enumerate_subgroups(g, limit=100)
    assert len(enumerate_subgroups(g, limit=374)) == 374


def test_subgroupset_ops():
    a = SubgroupSet.from_elements([0, 2])
    b = SubgroupSet.from_elements([0, 1, 2, 3])
    assert a < b and a <= b and not b <= a and not a < a
    assert 2 in a and 1 not in a
    assert a.size == 2


def test_helpers():
    assert smallest_prime_factor(1) == 1
    assert smallest_prime_factor(45) == 3
    assert smallest_prime_factor(128) == 2


def test_to_dict_is_json():
    lat = enumerate_subgroups(group_from_spec("C2 x C2"))
    d = json.loads(json.dumps(lat.to_dict()))
    assert d["spec"] == "C2 x C2" and d["order"] == 4 and d["subgroup_count"] == 5
    assert d["subgroups"][0] == {"size": 1, "bits_hex": "1"}
    assert d["covers"][-1] == [1, 2, 3]


def test_lattice_arrays_are_frozen():
    lat = enumerate_subgroups(group_from_spec("D8"))
    with pytest.raises(ValueError):
        lat.sizes[0] = 5
    assert isinstance(lat.words, np.ndarray) and lat.words.dtype == np.uint64
