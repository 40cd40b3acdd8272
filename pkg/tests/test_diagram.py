import random
from itertools import combinations
from math import comb

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from corpus import disc_corpus, quadric_complexes, random_closed_walk, reduced_corpus
from quadric.complex import fill_disc, four_flag_completion
from quadric.diagram import (
    DiscDiagram,
    boundary_labels,
    carrier,
    curvature_report,
    detect_pathologies,
    dual_curves,
    extract_boundary_ladder,
    gauss_bonnet_total,
    geodesic_crossing_check,
    grid_diagram,
    is_cat0_disc,
    isoperimetric_check,
    path_diagram,
    positive_boundary_sites,
    reduce_to_locally_minimal,
    separation_distance,
    three_squares_diagram,
    vertex_curvature,
)
from quadric.errors import (
    DegenerateDiagramError,
    DiagramError,
    NotLocallyQuadricError,
    PreconditionError,
    UnknownVertexError,
)
from quadric.graph import SimplicialGraph, complete_bipartite, cycle_graph

SQUARE = grid_diagram(1, 1)
STRIP = grid_diagram(1, 3)
GRID2 = grid_diagram(2, 2)
EDGE = path_diagram(1)
THREE = three_squares_diagram()


def cat0_corpus():
    return [(n, d) for n, d in disc_corpus() if not d.is_single_vertex() and is_cat0_disc(d)]


# -- the map itself --------------------------------------------------------------


def test_inner_faces_are_squares_and_contractible():
    for name, d in disc_corpus():
        assert all(len(f) == 4 for f in d.faces), name
        assert oracles.euler_characteristic(d) == 1, name


def test_invalid_maps_rejected():
    with pytest.raises(DiagramError):
        DiscDiagram([0, 1], [1, 0], [0, 1])
    with pytest.raises(DiagramError):
        DiscDiagram.from_faces([("a", "b", "a", "c")])
    with pytest.raises(DiagramError):
        DiscDiagram.from_faces([])


def test_square_count_and_boundary():
    assert SQUARE.boundary_length == 4 and SQUARE.face_count == 1
    assert GRID2.boundary_length == 8 and GRID2.face_count == 4
    assert EDGE.boundary_path == ("p0", "p1")


# -- curvature -----------------------------------------------------------------------


def test_vertex_curvature_examples():
    assert vertex_curvature(SQUARE, "0_0") == 1
    assert vertex_curvature(EDGE, "p0") == 2
    assert vertex_curvature(GRID2, "1_1") == 0
    rep = curvature_report(GRID2)
    assert (rep.delta["1_1"], rep.rho["1_1"]) == (4, 4)
    with pytest.raises(UnknownVertexError):
        vertex_curvature(SQUARE, "zz")


def test_gauss_bonnet_examples():
    assert gauss_bonnet_total(SQUARE) == 4
    assert gauss_bonnet_total(GRID2) == 4
    assert gauss_bonnet_total(EDGE) == 4
    with pytest.raises(DegenerateDiagramError):
        gauss_bonnet_total(DiscDiagram.single_vertex())


def test_gauss_bonnet_on_corpus():
    for name, d in disc_corpus():
        if not d.is_single_vertex():
            assert gauss_bonnet_total(d) == 4, name
            assert curvature_report(d).total == 4


def test_positive_sites_examples():
    assert len(positive_boundary_sites(SQUARE)) == 4
    assert sorted(positive_boundary_sites(STRIP)) == ["0_0", "0_3", "1_0", "1_3"]
    sites = positive_boundary_sites(EDGE)
    assert len(sites) == 2 and all(vertex_curvature(EDGE, v) == 2 for v in sites)


def test_positive_sites_case_analysis():
    for name, d in cat0_corpus():
        rep = curvature_report(d)
        sites = positive_boundary_sites(d)
        assert len(sites) >= 2, name
        for v in sites:
            assert (rep.delta[v], rep.rho[v]) in {(1, 0), (2, 1)}, name
            assert rep.kappa[v] in (1, 2)
        if all(rep.delta[v] != 1 for v in d.vertices):
            assert sum(1 for v in sites if rep.kappa[v] == 1) >= 4, name


def test_cat0_examples():
    assert all(is_cat0_disc(grid_diagram(r, c)) for r in range(1, 4) for c in range(1, 4))
    assert not is_cat0_disc(THREE)
    assert is_cat0_disc(SQUARE)


def test_isoperimetric_examples():
    assert isoperimetric_check(SQUARE)
    assert isoperimetric_check(GRID2)
    for k in range(1, 6):
        d = grid_diagram(k, k)
        assert d.face_count == k * k < comb(4 * k, 2)
        assert isoperimetric_check(d)


# -- dual curves -----------------------------------------------------------------------


def test_dual_curve_examples():
    assert len(dual_curves(SQUARE)) == 2
    assert len(dual_curves(STRIP)) == 4
    assert len(dual_curves(GRID2)) == 4
    assert len(dual_curves(EDGE)) == 1


def test_dual_curves_partition_midcubes():
    for name, d in disc_corpus():
        curves = dual_curves(d)
        edges = [e for c in curves for e in c.edges]
        assert sorted(edges) == sorted(d.edges), name
        # each square contributes two segments
        segs = [f for c in curves for f in c.squares]
        assert sorted(segs) == sorted(f for f in d.face_ids for _ in range(2)), name


def test_pathology_examples():
    assert detect_pathologies(GRID2).empty
    rep = detect_pathologies(THREE)
    assert len(rep.triangles) == 1 and not rep.bigons and not rep.monogons and not rep.nonogons


def test_carrier_examples():
    for c in dual_curves(SQUARE):
        assert carrier(SQUARE, c).face_count == 1
    long = max(dual_curves(STRIP), key=len)
    assert carrier(STRIP, long).face_count == 3
    for c in dual_curves(GRID2):
        car = carrier(GRID2, c)
        assert car.face_count == 2 and car.boundary_length == 6
    with pytest.raises(PreconditionError):
        carrier(THREE, 0)


def test_separation_examples():
    assert separation_distance(GRID2, "0_0", "0_1") == 1
    assert separation_distance(GRID2, "1_1", "1_1") == 0
    assert separation_distance(GRID2, "0_0", "2_2") == 4
    with pytest.raises(PreconditionError):
        separation_distance(THREE, "v", "a0")


def test_geodesic_crossing_examples():
    assert geodesic_crossing_check(SQUARE, ["0_0", "0_1"])
    assert not geodesic_crossing_check(SQUARE, ["0_0", "0_1", "0_0"])
    d = grid_diagram(2, 2)
    h = oracles.diagram_nx(d)
    for u, v in combinations(d.vertices, 2):
        for p in nx.all_shortest_paths(h, u, v):
            assert geodesic_crossing_check(d, p)
    with pytest.raises(DiagramError):
        geodesic_crossing_check(SQUARE, ["0_0", "1_1"])


def test_cat0_corpus_dual_curve_census():
    for name, d in cat0_corpus():
        assert detect_pathologies(d).empty, name
        assert len(dual_curves(d)) * 2 == d.boundary_length, name
        h = oracles.diagram_nx(d)
        dist = dict(nx.all_pairs_shortest_path_length(h))
        for u, v in combinations(d.vertices, 2):
            assert separation_distance(d, u, v) == dist[u][v], name
        for u, v in combinations(d.vertices[:6], 2):
            for p in nx.all_shortest_paths(h, u, v):
                assert geodesic_crossing_check(d, p), name


def test_carriers_in_cat0_corpus():
    for name, d in cat0_corpus()[::3]:
        for c in dual_curves(d):
            car = carrier(d, c)
            assert car.face_count == len(c.squares), name


# -- ladders ---------------------------------------------------------------------------


def test_ladder_examples():
    lad = extract_boundary_ladder(SQUARE, ("0_0", "0_1"))
    assert len(lad.squares) == 1 and set(lad.top) == {"1_0", "1_1"}
    lad = extract_boundary_ladder(STRIP, ("0_0", "0_1", "0_2", "0_3"))
    assert len(lad.squares) == 3 and lad.top == ("1_0", "1_1", "1_2", "1_3")
    lad = extract_boundary_ladder(GRID2, ("0_0", "0_1", "0_2"))
    assert lad.top == ("1_0", "1_1", "1_2")
    assert set(dual_curves(GRID2)[lad.curve].squares) == set(lad.squares)


def test_ladder_precondition():
    with pytest.raises(PreconditionError):
        extract_boundary_ladder(GRID2, ("0_0", "0_1"))
    with pytest.raises(DiagramError):
        extract_boundary_ladder(GRID2, ("0_0", "1_1"))


# -- reduction -------------------------------------------------------------------------


def identity(vs):
    return {v: v for v in vs}


def test_reduction_leaves_minimal_diagrams():
    x = four_flag_completion(complete_bipartite(2, 3))
    d = DiscDiagram.from_faces([("a0", "b0", "a1", "b1")], labels=identity(x.vertices[:2] + ("b0", "b1")))
    assert reduce_to_locally_minimal(d, x) == d


def test_reduction_valence_two():
    x = four_flag_completion(complete_bipartite(2, 3))
    d = DiscDiagram.from_faces(
        [("a0", "b0", "a1", "b1"), ("a0", "b0", "a1", "b2")], labels=identity(x.vertices)
    )
    trace = []
    r = reduce_to_locally_minimal(d, x, trace)
    assert r.face_count == 1 and boundary_labels(r) == boundary_labels(d)
    assert [t[2] for t in trace] == ["merge"]


def test_reduction_valence_three():
    g = SimplicialGraph(
        ["v", "a0", "a1", "a2", "b0", "b1", "b2"],
        [("v", "a0"), ("v", "a1"), ("v", "a2"), ("a0", "b0"), ("b0", "a1"), ("a1", "b1"),
         ("b1", "a2"), ("a2", "b2"), ("b2", "a0"), ("a0", "b1")],
    )
    x = four_flag_completion(g)
    d = THREE.with_labels(identity(g.vertices))
    trace = []
    r = reduce_to_locally_minimal(d, x, trace)
    assert r.face_count == 2 and boundary_labels(r) == boundary_labels(d) and is_cat0_disc(r)
    assert [t[2] for t in trace] == ["split"]


def test_reduction_fold():
    # two squares folding onto the same square collapse to a tree
    x = four_flag_completion(cycle_graph(4))
    lab = {"v": "c0", "a0": "c1", "b0": "c2", "a1": "c3", "b1": "c2"}
    d = DiscDiagram.from_faces([("v", "a0", "b0", "a1"), ("v", "a1", "b1", "a0")], labels=lab)
    trace = []
    r = reduce_to_locally_minimal(d, x, trace)
    assert r.face_count == 0 and boundary_labels(r) == boundary_labels(d)
    assert [t[2] for t in trace] == ["fold"]


def test_reduction_errors():
    x = four_flag_completion(complete_bipartite(2, 3))
    with pytest.raises(DiagramError):
        reduce_to_locally_minimal(SQUARE, x)
    with pytest.raises(DiagramError):
        reduce_to_locally_minimal(SQUARE.with_labels({v: "a0" for v in SQUARE.vertices}), x)
    partial = type(x)(x.skeleton, x.squares[:2])
    d = DiscDiagram.from_faces(
        [("a0", "b0", "a1", "b1"), ("a0", "b0", "a1", "b2")], labels=identity(x.vertices)
    )
    with pytest.raises(NotLocallyQuadricError):
        reduce_to_locally_minimal(d, partial)


def test_reduced_corpus_invariants():
    for name, d, x in reduced_corpus():
        assert is_cat0_disc(d), name
        assert isoperimetric_check(d), name
        if not d.is_single_vertex():
            assert gauss_bonnet_total(d) == 4


@given(st.data())
@settings(max_examples=40, deadline=None)
def test_reduction_trace_is_monotone(data):
    x = data.draw(st.sampled_from(quadric_complexes()))
    rng = random.Random(data.draw(st.integers(0, 10**6)))
    walk = random_closed_walk(x.skeleton, data.draw(st.integers(2, 12)), rng)
    d = fill_disc(x, walk)
    trace = []
    r = reduce_to_locally_minimal(d, x, trace)
    counts = [d.face_count] + [t[3] for t in trace]
    assert all(a > b for a, b in zip(counts, counts[1:]))
    assert boundary_labels(r) == boundary_labels(d)
    assert is_cat0_disc(r)
    assert detect_pathologies(r).empty
    if not r.is_single_vertex():
        assert 2 * len(dual_curves(r)) == r.boundary_length
