import itertools

import pytest

import brute
from adjspace import AdjunctionError, GluedSpace
from adjspace.analysis import analyze
from adjspace.fintop import check_open_map
from adjspace.miner import (LEMMAS, MAX_POINTS, _gluings, _partitions, _system_from_blocks,
                            closure_extends, enumerate_systems, mine)


def brute_count(max_points):
    """Distinct valid systems by exhaustive labelled enumeration and relabelling keys."""
    tops = {n: brute.labelled_topologies(n) for n in range(1, max_points + 1)}
    keys = set()
    for sizes in _partitions(max_points):
        for spaces in itertools.product(*(tops[s] for s in sizes)):
            comp_of = [i for i, s in enumerate(spaces) for _ in range(s.n)]
            for blocks in _gluings(comp_of):
                if _system_from_blocks(spaces, blocks).validate().ok:
                    keys.add(brute.system_key(spaces, blocks))
    return len(keys)


def test_system_counts():
    counts = [sum(1 for _ in enumerate_systems(n)) for n in range(1, 6)]
    assert counts == [1, 6, 25, 126, 674]


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_dedup_matches_brute_force(n):
    assert sum(1 for _ in enumerate_systems(n)) == brute_count(n)


def test_enumerated_systems_are_pairwise_distinct():
    seen = set()
    for sys in enumerate_systems(4):
        blocks = {}
        offsets = list(itertools.accumulate([0] + [s.n for s in sys.spaces]))
        for (i, j), f in sys.maps.items():
            for x, y in f.items():
                a, b = offsets[i] + x, offsets[j] + y
                blocks.setdefault(a, {a}).add(b)
        merged = {frozenset(v | {k}) for k, v in blocks.items()}
        key = brute.system_key(sys.spaces, [sorted(b) for b in merged])
        assert key not in seen
        seen.add(key)


def test_bound():
    with pytest.raises(AdjunctionError):
        list(enumerate_systems(MAX_POINTS + 1))
    with pytest.raises(AdjunctionError):
        mine("nonsense", 3)
    with pytest.raises(AdjunctionError):
        mine("t1", 3, "nonsense")


@pytest.mark.parametrize("lemma", sorted(LEMMAS))
def test_lemmas_hold(lemma):
    res = mine(lemma, 5)
    assert res.holds and res.applicable > 0


def test_connectedness_witness_is_two_points():
    res = mine("connectedness", 5, "nonempty_regions")
    assert res.counterexamples
    w = res.counterexamples[0]
    assert [s.n for s in w.spaces] == [1, 1]
    rep = analyze(w)
    assert rep.connected is False


def test_t1_witness_is_sierpinski():
    res = mine("t1", 5, "t1_components")
    w = res.counterexamples[0]
    assert w.m == 1 and w.spaces[0].n == 2 and not w.spaces[0].is_T1()
    assert analyze(w).t1 is False


def test_open_embedding_witness():
    res = mine("open_embedding", 5, "open_regions")
    w = res.counterexamples[0]
    assert not w.all_regions_open()
    sp = GluedSpace(w)
    assert not all(check_open_map(phi) for phi in sp.phi)


def test_open_maps_hypothesis_is_implied_by_t1_components():
    # finite T1 spaces are discrete, so every region is open and every phi_i is open
    for sys in enumerate_systems(6):
        if all(s.is_T1() for s in sys.spaces):
            assert all(check_open_map(phi) for phi in GluedSpace(sys).phi)


def test_minimal_witnesses_only():
    res = mine("component_graph", 5, "connected_graph")
    sizes = {sum(s.n for s in w.spaces) for w in res.counterexamples}
    assert len(sizes) == 1


def test_closure_extension():
    from adjspace.catalog import finite_branched
    sys = finite_branched(2)
    assert closure_extends(sys, 0, 1)


def test_result_json():
    data = mine("connectedness", 3, "nonempty_regions").to_json()
    assert data["lemma"] == "connectedness" and data["counterexamples"]
