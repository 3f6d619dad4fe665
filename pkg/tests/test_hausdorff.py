import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from adjspace import AdjSystem, GluedPoint, GluedSpace, HypothesisError, Region
from adjspace.catalog import (N_truncated, doubled_plane, doubled_plane_V, euclidean_catalog,
                              finite_branched, finite_model, n_branched_line, nontransitive_line,
                              region_union_V, single_line)
from adjspace.hausdorff import (boundary_eq_y_check, enumerate_h_candidates, extension_lemma_check,
                                hajicek_check, subsystem_preservation_check,
                                uniqueness_experiment, y_boundary_openness_check, y_graph_dot,
                                y_pairs, y_related, y_set, y_transitivity_report)
from adjspace.regions import Interval


def pt(i, x):
    return GluedPoint(i, (Fraction(x),))


@pytest.fixture(scope="module")
def two():
    return GluedSpace(n_branched_line(2))


@pytest.fixture(scope="module")
def plane():
    return GluedSpace(doubled_plane())


# -- the relation ----------------------------------------------------------------

def test_origins_of_branched_line(two):
    assert y_related(two, pt(0, 0), pt(1, 0))
    assert not y_related(two, pt(0, 0), pt(0, 0))
    assert not y_related(two, pt(0, -1), pt(1, -1))


def test_nontransitive_outer_pair_separated():
    sp = GluedSpace(nontransitive_line())
    assert y_related(sp, pt(0, 0), pt(1, 0))
    assert y_related(sp, pt(1, 0), pt(2, 0))
    assert not y_related(sp, pt(0, 0), pt(2, 0))


def test_y_pairs_of_branched_lines():
    for n in (2, 3, 5):
        sp = GluedSpace(n_branched_line(n))
        fam = y_pairs(sp)
        assert len(fam.entries) == n * (n - 1) // 2
        assert all(e.boundary == Region.line("{0}") and e.pairing.is_identity for e in fam.entries)
        pairs = fam.point_pairs()
        assert len(pairs) == n * (n - 1) // 2
        assert all(p.coords == q.coords == (0,) for p, q in pairs)


def test_doubled_plane_family(plane):
    fam = y_pairs(plane)
    assert len(fam.entries) == 1
    e = fam.entries[0]
    assert (e.i, e.j) == (0, 1)
    assert e.boundary == Region.box(Interval.line(), Interval.at(0))
    with pytest.raises(Exception):
        fam.point_pairs()


def test_hausdorff_single_component():
    assert y_pairs(GluedSpace(single_line())).is_empty()


def test_refuses_non_open_regions():
    closed = Region.line("(-inf,0]")
    sp = GluedSpace(AdjSystem([1, 1], {(0, 1): closed, (1, 0): closed}))
    with pytest.raises(HypothesisError):
        y_pairs(sp)
    with pytest.raises(HypothesisError):
        y_related(sp, pt(0, 0), pt(1, 0))


def test_finite_same_component_pairs_allowed_only_for_unseparated_components():
    from adjspace import FinSpace
    # a component with an inseparable incomparable pair of its own
    v = FinSpace(3, (0b101, 0b110, 0b100))
    fam = y_pairs(GluedSpace(AdjSystem([v])))
    assert [(p.coords, q.coords) for p, q in fam.pairs] == [(0, 1)]


# -- properties --------------------------------------------------------------------

GRID_SETS = [Region.line(*ivs) for ivs in
             [(), ("(-inf,0)",), ("(-1,1)",), ("(0,inf)",), ("(-inf,inf)",), ("(-2,-1)", "(1,2)"),
              ("{0}",), ("[0,1]",)]]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([n_branched_line(2), n_branched_line(3), nontransitive_line(), N_truncated(3)]),
       st.data())
def test_y_set_laws(sys, data):
    sp = GluedSpace(sys)
    parts = [data.draw(st.sampled_from(GRID_SETS)) for _ in range(sp.m)]
    extra = [data.draw(st.sampled_from(GRID_SETS)) for _ in range(sp.m)]
    w1 = sp.saturate(parts)
    w2 = w1 | sp.saturate(extra)
    assert y_set(sp, w1) <= y_set(sp, w2)
    assert y_set(sp, sp.empty()).is_empty()
    pts = sp._witness_points(w2)
    for p, q in itertools.product(pts, repeat=2):
        assert y_related(sp, p, q) == y_related(sp, q, p)
        if sp.point_eq(p, q):
            assert not y_related(sp, p, q)
        if y_related(sp, p, q) and q in w1:
            assert p in y_set(sp, w1)


def test_boundary_of_canonical_images_matches_display():
    for sys in euclidean_catalog():
        sp = GluedSpace(sys)
        for i in range(sp.m):
            v = sp.canonical_image(i)
            assert boundary_eq_y_check(sp, v)
            expected = sp.empty()
            for j in range(sp.m):
                if j != i:
                    expected = expected | sp.pushforward(j, sys.regions[j, i].boundary())
            assert sp.glued_boundary(v) == expected


def test_canonical_images_are_h_submanifolds():
    for sys in euclidean_catalog():
        sp = GluedSpace(sys)
        union = sp.empty()
        for i in range(sp.m):
            v = sp.canonical_image(i)
            assert hajicek_check(sp, v).is_h_submanifold
            union = union | v
        assert union == sp.whole()


# -- H-submanifold checks ------------------------------------------------------------

def test_doubled_plane_V(plane):
    v = doubled_plane_V(plane)
    rep = hajicek_check(plane, v)
    assert rep.open and rep.connected and rep.hausdorff and rep.criterion
    assert not boundary_eq_y_check(plane, v)
    origins = plane.from_points([GluedPoint(0, (0, 0)), GluedPoint(1, (0, 0))])
    assert rep.cl_y_set - rep.y_set == origins
    assert plane.glued_closure(v) == plane.whole()


def test_whole_branched_line_is_not_hausdorff(two):
    assert not hajicek_check(two, two.whole()).hausdorff


def test_boundary_openness(two, plane):
    assert y_boundary_openness_check(two, two.canonical_image(0))
    assert y_boundary_openness_check(plane, plane.canonical_image(0))
    with pytest.raises(HypothesisError):
        y_boundary_openness_check(plane, doubled_plane_V(plane))


def test_subsystem_preservation():
    sp = GluedSpace(nontransitive_line())
    assert subsystem_preservation_check(sp, sp.canonical_image(0), [0, 1])
    assert subsystem_preservation_check(sp, sp.canonical_image(1), [1])
    assert subsystem_preservation_check(sp, sp.canonical_image(2), [0, 1, 2])
    with pytest.raises(Exception):
        subsystem_preservation_check(sp, sp.canonical_image(2), [0])


def test_extension_lemma_examples(two, plane):
    v = two.canonical_image(0)
    assert extension_lemma_check(two, v, two.pushforward(0, Region.line("(-2,-1)"))).hypotheses
    check = extension_lemma_check(two, v, two.pushforward(1, Region.line("(-1,1)")))
    assert not check.hypotheses and check.ok
    u = plane.pushforward(1, Region.box(Interval.open(Fraction(1, 2), Fraction(3, 2)),
                                        Interval.open(Fraction(-1, 2), Fraction(1, 2))))
    check = extension_lemma_check(plane, doubled_plane_V(plane), u)
    assert check.hypotheses and check.contained


def test_extension_lemma_over_grid_family():
    for sys in (n_branched_line(2), nontransitive_line()):
        sp = GluedSpace(sys)
        hs = [v for v in enumerate_h_candidates(sp, [-1, 0, 1]) if hajicek_check(sp, v).is_h_submanifold]
        assert hs
        for v in hs:
            for u in enumerate_h_candidates(sp, [-1, 0, 1]):
                assert extension_lemma_check(sp, v, u)


# -- uniqueness and truncation -------------------------------------------------------

@pytest.mark.parametrize("n", [1, 2, 3])
def test_uniqueness(n):
    sp = GluedSpace(n_branched_line(n))
    found = uniqueness_experiment(sp, [-1, 0, 1])
    assert sorted(found, key=repr) == sorted((sp.canonical_image(i) for i in range(n)), key=repr)


def test_uniqueness_rejects_bad_input(two):
    with pytest.raises(Exception):
        uniqueness_experiment(two, [])
    with pytest.raises(Exception):
        enumerate_h_candidates(GluedSpace(doubled_plane()))


def test_truncation_example():
    sp = GluedSpace(N_truncated(2))
    v = region_union_V(sp)
    assert v == sp.pushforward(0, Region.line("(-inf,1)"))
    assert y_set(sp, v).is_empty()
    assert sp.glued_boundary(v) == sp.from_points([pt(0, 1), pt(1, 1)])
    assert not boundary_eq_y_check(sp, v)


# -- non-transitivity and DOT ----------------------------------------------------------

def test_transitivity_reports():
    assert y_transitivity_report(GluedSpace(nontransitive_line())) == [(pt(0, 0), pt(1, 0), pt(2, 0))]
    assert y_transitivity_report(GluedSpace(n_branched_line(2))) == []
    assert y_transitivity_report(GluedSpace(n_branched_line(3))) == []


def test_dot(two):
    dot = y_graph_dot(two)
    assert dot.startswith("graph Y {") and dot.rstrip().endswith("}")
    assert dot.count(" -- ") == 1


# -- euclidean vs finite oracle ---------------------------------------------------------

def cross_image_disagreements(sys):
    """Compare Y on finite-model cells that never share a canonical image.

    Cells inside one component are separated in the line but not in a finite
    model with two or more cut points, so only cross-image pairs are matched.
    """
    fm = finite_model(sys)
    fs, es = GluedSpace(fm.system), GluedSpace(sys)
    cells = [(i, n) for i in range(sys.m) for n in range(len(fm.cells[i]))]
    bad, checked = [], 0
    for (i, n), (j, k) in itertools.combinations(cells, 2):
        p, q = GluedPoint(i, fm.witness(i, n)), GluedPoint(j, fm.witness(j, k))
        shared = {r.index for r in es.representatives(p)} & {r.index for r in es.representatives(q)}
        e = y_related(es, p, q)
        if shared:
            assert not e
            continue
        checked += 1
        if e != y_related(fs, GluedPoint(i, n), GluedPoint(j, k)):
            bad.append((p, q))
    return checked, bad


@pytest.mark.parametrize("sys", euclidean_catalog(), ids=lambda s: s.name)
def test_euclidean_y_matches_finite_model(sys):
    _, bad = cross_image_disagreements(sys)
    assert bad == []


def test_finite_model_of_two_branched_line_is_the_line_model():
    fm = finite_model(n_branched_line(2))
    assert [len(c) for c in fm.cells] == [3, 3]
    fs = GluedSpace(fm.system)
    from adjspace.fintop import find_isomorphism
    assert find_isomorphism(fs.quotient, GluedSpace(finite_branched(2)).quotient) is not None
