import json

import pytest

from adjspace import AdjunctionError, FinSpace, GluedPoint, GluedSpace, Region
from adjspace.analysis import analyze, component_graph_dot, is_complete, y_dot
from adjspace.catalog import (BUILDERS, N_truncated, build_named, doubled_plane, euclidean_catalog,
                              finite_branched, finite_model, gluedset_from_json, n_branched_line,
                              system_from_json, system_to_json)
from adjspace.hausdorff import hajicek_check, y_pairs
from adjspace.catalog import doubled_plane_V


@pytest.mark.parametrize("name,params", [(n, (3,) if a else ()) for n, (_, a) in BUILDERS.items()])
def test_builders_validate(name, params):
    assert build_named(name, *params).validate().ok


def test_builder_errors():
    with pytest.raises(AdjunctionError):
        build_named("klein_bottle")
    with pytest.raises(AdjunctionError):
        build_named("n_branched_line", 0)
    with pytest.raises(AdjunctionError):
        build_named("N_truncated", 1)
    with pytest.raises(AdjunctionError):
        build_named("doubled_plane", 2)


def test_named_examples():
    sp = GluedSpace(build_named("n_branched_line", 2))
    assert y_pairs(sp).point_pairs() == [(GluedPoint(0, (0,)), GluedPoint(1, (0,)))]
    sp = GluedSpace(build_named("doubled_plane"))
    assert hajicek_check(sp, doubled_plane_V(sp)).is_h_submanifold


def test_truncated_regions():
    sys = N_truncated(4)
    assert sys.regions[0, 3] == Region.line("(-inf,1)")
    assert sys.regions[2, 1] == Region.line("(-inf,2)")
    assert sys.regions[3, 2] == Region.line("(-inf,3)")


@pytest.mark.parametrize("sys", euclidean_catalog() + [finite_branched(3)], ids=lambda s: s.name)
def test_json_roundtrip(sys):
    data = json.loads(json.dumps(system_to_json(sys)))
    back = system_from_json(data)
    assert back.regions == sys.regions and back.maps == sys.maps and back.spaces == sys.spaces


def test_json_keys_are_one_based():
    data = system_to_json(n_branched_line(2))
    assert set(data["regions"]) == {"1,2", "2,1"}


def test_json_shorthand_and_errors():
    sys = system_from_json({"spaces": [1, 1], "regions": {"1,2": ["(-inf,0)"], "2,1": "(-inf,0)"}})
    assert sys.validate().ok
    for bad in [{}, {"spaces": [1], "regions": {"x": []}}, {"spaces": [1], "backend": "cw"},
                {"spaces": [1], "regions": {"5,1": "(0,1)"}}]:
        with pytest.raises(AdjunctionError):
            system_from_json(bad)


def test_gluedset_json():
    sp = GluedSpace(n_branched_line(2))
    v = gluedset_from_json(sp, {"sets": {"1": ["(-1,1)"]}})
    assert v.parts[1] == Region.line("(-1,0)")
    assert gluedset_from_json(sp, json.loads(json.dumps(v.to_json()))) == v
    fin = GluedSpace(finite_branched(2))
    assert gluedset_from_json(fin, {"sets": {"2": [0]}}).parts[0] == 1
    with pytest.raises(AdjunctionError):
        gluedset_from_json(sp, {"sets": {"3": []}})


def test_finite_model_cells():
    fm = finite_model(N_truncated(3))
    assert [len(c) for c in fm.cells] == [5, 5, 5]
    assert fm.system.validate().ok
    with pytest.raises(AdjunctionError):
        finite_model(finite_branched(2))


# -- analysis reports ------------------------------------------------------------------

def test_analysis_branched_line():
    rep = analyze(n_branched_line(3))
    assert rep.valid and rep.hausdorff is False and rep.y_pair_count == 3
    assert rep.connected and rep.t1
    assert len(rep.component_edges) == 3
    assert all(e["is_h_submanifold"] and e["boundary_eq_y"] for e in rep.embeddings)


def test_analysis_single_and_truncated():
    assert analyze(build_named("single_line")).hausdorff is True
    rep = analyze(N_truncated(3))
    assert rep.truncated_counterexample and rep.to_json()["truncated_counterexample"]


def test_analysis_invalid():
    from adjspace import AdjSystem
    rep = analyze(AdjSystem([1, 1], {(0, 1): Region.line("(-inf,0)")}))
    assert not rep.valid and rep.violations
    assert rep.lines()[1] == "valid: false"


def test_reports_consistent_on_catalog_and_mined():
    from adjspace.miner import enumerate_systems
    for sys in euclidean_catalog():
        analyze(sys).check_consistency()
    for sys in enumerate_systems(4):
        analyze(sys).check_consistency()


def test_dot_outputs():
    sys = n_branched_line(3)
    dot = component_graph_dot(sys)
    assert dot.count(" -- ") == 3 and dot.count(";") == 6
    dot = y_dot(sys)
    assert dot.count(" -- ") == analyze(sys).y_pair_count
    assert is_complete(sys)
