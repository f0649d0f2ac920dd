import copy

import pytest

from sl3skein.cluster_core import verify_compatibility
from sl3skein.skein_presented import load_builtin
from sl3skein.surface import (
    DecoratedTriangulation,
    FlipError,
    TriangulationError,
    build_index_set,
    build_quiver,
    change_sign,
    commutation_matrix,
    endpoint_grading,
    flip,
    flip_round_trip,
    l3_check,
    parse_signs,
    surface_pair,
    web_cluster,
)

from conftest import builtin_seed

SURFACES = ["triangle", "quadrilateral", "pentagon", "annulus11"]


@pytest.mark.parametrize("name", SURFACES)
def test_compatibility_diagonal_is_six(name):
    rep = verify_compatibility(surface_pair(load_builtin(name)))
    assert rep.ok
    assert set(rep.diagonal) == {6}


def test_sizes_and_labels():
    tri = load_builtin("triangle")
    assert build_index_set(tri).labels == ("e21", "e12", "e32", "e23", "e13", "e31", "t[T]")
    assert len(build_index_set(load_builtin("quadrilateral"))) == 12
    assert len(build_index_set(load_builtin("pentagon"))) == 17
    assert build_index_set(load_builtin("annulus11")).labels[4:6] == ("e(E1:0)", "e(E1:1)")


def test_triangle_quiver_has_one_mutable_vertex():
    B = build_quiver(load_builtin("triangle"))
    assert B.unfrozen == [6]
    assert [B.b(i, 6) for i in range(6)] == [-1, 1, -1, 1, -1, 1]


def test_commutation_matrix_is_local_for_distant_arcs():
    dec = load_builtin("triangle")
    pi = commutation_matrix(dec).pi
    labels = build_index_set(dec).labels
    e21, e12 = labels.index("e21"), labels.index("e12")
    assert pi[e21][e12] == 0


def test_endpoint_gradings_of_triangle_webs():
    dec = load_builtin("triangle")
    pts = dec.triangulation.marked_points
    grads = [endpoint_grading(w, pts) for w in web_cluster(dec)]
    # the sink triad has every germ pointing away from its corners
    assert grads[-1] == (1, 0, 1, 0, 1, 0)
    assert all(sum(g) in (2, 3) for g in grads)


def test_change_sign_index():
    dec = load_builtin("quadrilateral")
    new, k = change_sign(dec, "T341")
    assert new.signs["T341"] == "+"
    assert build_index_set(dec).labels[k].startswith("t[")


def test_parse_signs():
    tri = load_builtin("quadrilateral").triangulation
    assert parse_signs("+-", tri) == {"T231": "+", "T341": "-"}
    assert parse_signs("T341:+", tri) == {"T341": "+"}
    assert parse_signs(None, tri) == {}
    with pytest.raises(TriangulationError):
        parse_signs("+", tri)
    with pytest.raises(TriangulationError):
        parse_signs("T341:x", tri)


def test_bad_triangulations():
    good = load_builtin("triangle").to_dict()
    with pytest.raises(TriangulationError):
        DecoratedTriangulation.load({"name": "x"})
    broken = copy.deepcopy(good)
    broken["triangles"][0]["edges"][0] = "nope"
    with pytest.raises(TriangulationError):
        DecoratedTriangulation.load(broken)
    broken = copy.deepcopy(good)
    broken["signs"] = {"T": "?"}
    with pytest.raises(TriangulationError):
        DecoratedTriangulation.load(broken)
    with pytest.raises(TriangulationError):
        DecoratedTriangulation.load("/nonexistent/file.json")


@pytest.mark.parametrize("name", ["quadrilateral", "annulus11"])
def test_flip_matches_target_quiver_and_round_trips(name):
    dec = load_builtin(name)
    dec = dec.with_signs({t: "+" for t in dec.triangulation.triangle_order})
    for e in dec.triangulation.internal_edges():
        res = flip(dec, e)
        assert len(res.word) == 4
        assert sorted(res.relabel) == list(range(len(res.relabel)))
        assert flip_round_trip(dec, e).ok


def test_flip_errors():
    dec = load_builtin("quadrilateral")
    with pytest.raises(FlipError, match="sign"):
        flip(dec, "D13")
    plus = dec.with_signs({"T341": "+"})
    with pytest.raises(FlipError):
        flip(plus, "E12")
    with pytest.raises(FlipError):
        flip(plus, "missing")


@pytest.mark.parametrize("name", SURFACES)
def test_lattice_checks(name):
    rep = l3_check(load_builtin(name))
    assert rep.ok
    assert rep.coker_rank == 2 * len(load_builtin(name).triangulation.marked_points)


def test_surface_seed_frame_is_basis():
    seed = builtin_seed("pentagon")
    assert all(x.is_monomial() for x in seed.frame)
