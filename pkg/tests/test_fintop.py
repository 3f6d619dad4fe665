import itertools

import pytest

import brute
from adjspace.fintop import (FinMap, FinSpace, all_spaces, canonical_form, check_continuous,
                             check_embedding, check_open_map, disjoint_union, find_isomorphism,
                             identity_map, mask, members, quotient, subspace)

S2 = FinSpace.sierpinski()
A, B = 0, 1


def small_spaces(limit=4):
    for n in range(1, limit + 1):
        yield from brute.labelled_topologies(n)


# -- documented examples -------------------------------------------------------

def test_sierpinski_open_sets():
    # [DERIVED] lattice {}, {b}, {a,b}
    assert brute.open_lattice(S2) == {0, mask([B]), mask([A, B])}
    assert S2.is_open(mask([B]))
    assert S2.is_open(0)
    assert not S2.is_open(mask([A]))


def test_sierpinski_operators():
    assert S2.closure(mask([B])) == mask([A, B])
    assert S2.closure(S2.full) == S2.full
    assert S2.boundary(mask([B])) == mask([A])


def test_connectedness_examples():
    assert S2.is_connected()
    assert FinSpace.discrete(1).is_connected()
    assert not FinSpace.discrete(2).is_connected()


def test_separation_examples():
    assert S2.y_pairs() == [(A, B)]
    assert FinSpace.discrete(3).is_hausdorff()
    assert not S2.is_T1()
    assert FinSpace.discrete(3).is_T1()
    with pytest.raises(ValueError):
        S2.separable_pair(A, A)


def test_quotient_examples():
    q, _ = quotient(S2, [[0], [1]])
    assert find_isomorphism(q, S2) is not None
    q, _ = quotient(S2, [[0, 1]])
    assert q.n == 1


def test_two_line_models_glued_at_left():
    # [DERIVED] L1 ~ L2 gives five points with the two origins inseparable
    line = FinSpace.line_model()
    total, _ = disjoint_union([line, line])
    q, proj = quotient(total, [[0, 3], [1], [2], [4], [5]])
    assert q.n == 5
    o1, o2 = proj(1), proj(4)
    assert [(min(a, b), max(a, b)) for a, b in q.y_pairs(incomparable=True)] == [(o1, o2)]
    assert brute.quotient_opens(total, [[0, 3], [1], [2], [4], [5]]) == set(brute.open_lattice(q))


def test_map_examples():
    ident = identity_map(S2)
    assert check_continuous(ident) and check_open_map(ident) and check_embedding(ident)
    const = FinMap(FinSpace.discrete(2), S2, (B, B))
    assert check_continuous(const)
    assert not check_embedding(const)
    sub, inc = subspace(S2, mask([B]))
    assert check_embedding(inc) and check_open_map(inc)


def test_rejects_bad_tables():
    with pytest.raises(ValueError):
        FinSpace(2, (0b10, 0b10))  # 0 not in its own min open
    with pytest.raises(ValueError):
        FinSpace(3, (0b011, 0b110, 0b100))  # not transitive
    with pytest.raises(ValueError):
        FinMap(S2, S2, (0,))
    with pytest.raises(ValueError):
        S2.is_open(0b100)
    with pytest.raises(ValueError):
        quotient(S2, [[0]])


def test_json_roundtrip():
    line = FinSpace.line_model()
    assert FinSpace.from_json(line.to_json()) == line


# -- oracle agreement ------------------------------------------------------------

def test_topology_counts_match_known_sequence():
    # [DERIVED] number of labelled topologies and of homeomorphism classes
    assert [len(brute.labelled_topologies(n)) for n in range(1, 5)] == [1, 4, 29, 355]
    assert [len(all_spaces(n)) for n in range(1, 7)] == [1, 3, 9, 33, 139, 718]


def test_all_spaces_are_pairwise_non_homeomorphic():
    spaces = all_spaces(4)
    for a, b in itertools.combinations(spaces, 2):
        assert find_isomorphism(a, b) is None
    for sp in brute.labelled_topologies(3):
        assert sum(find_isomorphism(sp, rep) is not None for rep in all_spaces(3)) == 1


def test_operators_agree_with_lattice():
    for sp in small_spaces():
        for s in range(1 << sp.n):
            assert sp.is_open(s) == (s in brute.open_lattice(sp))
            assert sp.closure(s) == brute.closure(sp, s)
            assert sp.interior(s) == brute.interior(sp, s)
            assert sp.is_connected(s) == brute.is_connected(sp, s)


def test_open_sets_enumeration_agrees():
    for sp in small_spaces():
        assert set(sp.open_sets()) == brute.open_lattice(sp)


def test_separable_pair_agrees():
    for sp in small_spaces():
        for x, y in itertools.combinations(range(sp.n), 2):
            assert sp.separable_pair(x, y) == brute.separable(sp, x, y)


def test_t1_is_discrete():
    for sp in small_spaces():
        assert sp.is_T1() == all(sp.min_open[x] == 1 << x for x in range(sp.n))


def test_quotients_agree_with_lattice():
    for sp in small_spaces(3):
        for classes in _partitions(list(range(sp.n))):
            q, proj = quotient(sp, classes)
            assert set(brute.open_lattice(q)) == brute.quotient_opens(sp, classes)
            assert check_continuous(proj)


def test_check_continuous_agrees():
    for src in brute.labelled_topologies(2):
        for tgt in brute.labelled_topologies(3):
            for table in itertools.product(range(3), repeat=2):
                f = FinMap(src, tgt, table)
                assert check_continuous(f) == brute.is_continuous(table, src, tgt)


def test_canonical_form_is_invariant():
    for sp in brute.labelled_topologies(3):
        key = canonical_form(sp)
        for perm in itertools.permutations(range(3)):
            table = [0] * 3
            for x in range(3):
                table[perm[x]] = mask(perm[y] for y in members(sp.min_open[x]))
            assert canonical_form(FinSpace(3, tuple(table))) == key


def _partitions(xs):
    if not xs:
        yield []
        return
    first, rest = xs[0], xs[1:]
    for part in _partitions(rest):
        yield [[first]] + part
        for k in range(len(part)):
            yield part[:k] + [[first] + part[k]] + part[k + 1:]
