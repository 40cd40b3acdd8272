import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from corpus import bipartite_family, four_bridged_corpus, quadric_complexes
from quadric.complex import four_flag_completion
from quadric.dismantling import (
    GroupAction,
    all_bfs_orders,
    bfs_dismantle,
    bfs_order,
    bi_dismantle,
    bidominator,
    invariant_biclique,
    invariant_biclique_complex,
    twin_classes,
    verify_action,
)
from quadric.errors import (
    GraphError,
    InvalidActionError,
    NotBiDismantlableError,
    NotBipartiteError,
    NotConnectedError,
    NotFourBridgedError,
    NotQuadricError,
    UnknownVertexError,
)
from quadric.graph import (
    SimplicialGraph,
    complete_bipartite,
    cycle_graph,
    grid_graph,
    is_biclique,
    path_graph,
)

ABC = SimplicialGraph("abc", [("a", "b"), ("b", "c")])
C6 = cycle_graph(6)
GRID = grid_graph(3, 3)


def star(n):
    return SimplicialGraph(["c"] + [f"l{i}" for i in range(n)], [("c", f"l{i}") for i in range(n)])


def rotation(n, prefix="c"):
    return {f"{prefix}{i}": f"{prefix}{(i + 1) % n}" for i in range(n)}


def grid_rotation(k):
    return {f"{i}_{j}": f"{j}_{k - 1 - i}" for i in range(k) for j in range(k)}


def grid_flip(rows, cols):
    return {f"{i}_{j}": f"{i}_{cols - 1 - j}" for i in range(rows) for j in range(cols)}


# -- breadth-first orders ------------------------------------------------------


def test_bfs_examples():
    o = bfs_order(ABC, "a")
    assert o.order == ("a", "b", "c") and o.parent["c"] == "b"
    o = bfs_order(star(3), "c")
    assert o.order == ("c", "l0", "l1", "l2")
    with pytest.raises(NotConnectedError):
        bfs_order(SimplicialGraph("ab"), "a")
    with pytest.raises(UnknownVertexError):
        bfs_order(ABC, "z")


def check_bfs(g, o):
    h = oracles.to_nx(g)
    dist = nx.single_source_shortest_path_length(h, o.start)
    assert o.number[o.start] == 1
    assert sorted(o.number.values()) == list(range(1, len(g) + 1))
    for v in g.vertices:
        for w in g.vertices:
            if dist[v] < dist[w]:
                assert o.number[v] < o.number[w]
        if v != o.start:
            pp = o.pseudoparents[v]
            assert o.parent[v] == min(pp, key=o.number.__getitem__)
            assert all(dist[p] == dist[v] - 1 for p in pp)


def test_bfs_grid_orders():
    orders = list(all_bfs_orders(GRID, "0_0"))
    assert len(orders) > 1
    for o in orders:
        check_bfs(GRID, o)


def test_bfs_distance_compatible_on_family():
    for g in bipartite_family()[::4]:
        for u in g.vertices:
            check_bfs(g, bfs_order(g, u))


def test_fellow_traveller_property():
    for g in four_bridged_corpus()[::9]:
        for u in g.vertices[:3]:
            for o in all_bfs_orders(g, u, limit=20):
                for v in g.vertices:
                    if v == u:
                        continue
                    for w in o.pseudoparents[v]:
                        if w != u:
                            assert o.parent[w] in o.pseudoparents[o.parent[v]]


def test_parent_of_last_pseudoparent_dominates_in_ball():
    for g in four_bridged_corpus():
        h = oracles.to_nx(g)
        for u in g.vertices:
            o = bfs_order(g, u)
            dist = nx.single_source_shortest_path_length(h, u)
            for v in g.vertices:
                r = dist[v]
                if r < 2:
                    continue
                dom = o.parent[o.max_pseudoparent(v)]
                ball_nv = {x for x in h[v] if dist[x] <= r}
                ball_nd = {x for x in h[dom] if dist[x] <= r}
                assert ball_nv <= ball_nd


# -- bi-domination -----------------------------------------------------------------


def test_bidominator_examples():
    assert bidominator(ABC, "a") == "c"
    assert all(bidominator(C6, v) is None for v in C6.vertices)
    k = complete_bipartite(2, 2)
    assert bidominator(k, "a0") == "a1" and bidominator(k, "a1") == "a0"


def test_bi_dismantle_examples():
    r = bi_dismantle(complete_bipartite(3, 4))
    assert r.ok and r.steps == ()
    r = bi_dismantle(C6)
    assert not r.ok and r.final == C6
    r = bi_dismantle(GRID)
    assert r.ok and is_biclique(r.final, r.final.vertices)


def test_bi_dismantle_errors():
    with pytest.raises(GraphError):
        bi_dismantle(SimplicialGraph("a"))
    with pytest.raises(NotBipartiteError):
        bi_dismantle(cycle_graph(3))
    with pytest.raises(NotConnectedError):
        bi_dismantle(SimplicialGraph("ab"))


def replay(g, steps):
    cur = g
    for v, dom in steps:
        assert cur.neighbors(v) <= cur.neighbors(dom) and v != dom
        cur = cur.remove_vertices([v])
    return cur


def test_greedy_agrees_with_backtracking():
    for g in bipartite_family():
        if len(g) < 2:
            continue
        r = bi_dismantle(g)
        assert r.ok == oracles.bi_dismantlable(oracles.to_nx(g)), g.edges
        assert replay(g, r.steps) == r.final


def test_bfs_dismantle_examples():
    assert bfs_dismantle(star(4), "c").steps == ()
    r = bfs_dismantle(GRID, "0_0")
    assert r.removed[:3] == ("2_2", "1_2", "2_1")
    assert set(r.final.vertices) == {"0_0", "0_1", "1_0"}
    r = bfs_dismantle(complete_bipartite(3, 3), "a0")
    assert r.removed == ("a1", "a2") and len(r.final) == 4
    with pytest.raises(NotFourBridgedError):
        bfs_dismantle(C6)


def test_dismantling_four_bridged_corpus():
    for g in four_bridged_corpus():
        r = bi_dismantle(g)
        assert r.ok
        for u in g.vertices:
            b = bfs_dismantle(g, u)
            assert replay(g, b.steps) == b.final
            assert max(b.final.distance(u, v) for v in b.final.vertices) <= 1


# -- actions -----------------------------------------------------------------------------


def test_verify_action_examples():
    assert verify_action(GroupAction(C6, [{v: v for v in C6.vertices}]))
    c4 = cycle_graph(4)
    assert verify_action(GroupAction(c4, [rotation(4)]))
    p = path_graph(4)
    v = verify_action(GroupAction(p, [{"p0": "p1", "p1": "p0", "p2": "p2", "p3": "p3"}]))
    assert not v
    with pytest.raises(InvalidActionError):
        verify_action(GroupAction(p, [{"p0": "p1"}]))
    with pytest.raises(InvalidActionError):
        verify_action(GroupAction(p, [{"p0": "p1", "p1": "p1", "p2": "p2", "p3": "p3"}]))


def test_verify_action_checks_squares():
    k = complete_bipartite(2, 3)
    x = four_flag_completion(k)
    y = type(x)(k, x.squares[:2])
    swap = {"a0": "a0", "a1": "a1", "b0": "b2", "b1": "b1", "b2": "b0"}
    assert verify_action(GroupAction(x, [swap]))
    assert not verify_action(GroupAction(y, [swap]))


def check_invariant(g, a, result):
    assert is_biclique(g, result)
    assert oracles.is_biclique(oracles.to_nx(g), result)
    for m in a.maps():
        assert {m[v] for v in result} == set(result)


def test_invariant_biclique_examples():
    c4 = cycle_graph(4)
    a = GroupAction(c4, [rotation(4)])
    assert invariant_biclique(c4, a) == set(c4.vertices)
    s = star(4)
    a = GroupAction(s, [{"c": "c", "l0": "l1", "l1": "l0", "l2": "l2", "l3": "l3"},
                        {"c": "c", "l0": "l1", "l1": "l2", "l2": "l3", "l3": "l0"}])
    assert invariant_biclique(s, a) == set(s.vertices)
    a = GroupAction(GRID, [grid_rotation(3)])
    res = invariant_biclique(GRID, a)
    check_invariant(GRID, a, res)
    assert res == {"1_1", "0_1", "1_0", "1_2", "2_1"}


def test_invariant_biclique_errors():
    with pytest.raises(NotBiDismantlableError):
        invariant_biclique(C6, GroupAction(C6, [rotation(6)]))
    with pytest.raises(InvalidActionError):
        p = path_graph(4)
        invariant_biclique(p, GroupAction(p, [{"p0": "p1", "p1": "p0", "p2": "p2", "p3": "p3"}]))


def test_invariant_biclique_complex_examples():
    x = four_flag_completion(grid_graph(3, 3))
    a = GroupAction(x, [grid_flip(3, 3)])
    check_invariant(x.skeleton, a, invariant_biclique_complex(x, a))
    k = four_flag_completion(complete_bipartite(3, 3))
    for m in oracles.automorphisms(oracles.to_nx(k.skeleton)):
        a = GroupAction(k, [m])
        check_invariant(k.skeleton, a, invariant_biclique_complex(k, a))
    with pytest.raises(NotQuadricError):
        c6 = four_flag_completion(C6)
        invariant_biclique_complex(c6, GroupAction(c6, [rotation(6)]))


def test_invariant_biclique_trace_cases():
    trace = []
    invariant_biclique(complete_bipartite(1, 1), GroupAction(complete_bipartite(1, 1), []), trace)
    assert trace == []
    g = grid_graph(3, 3)
    trace = []
    invariant_biclique(g, GroupAction(g, [grid_flip(3, 3)]), trace)
    assert trace and trace[0][0] == "remove"
    k = complete_bipartite(2, 2)
    g = SimplicialGraph(k.vertices + ("t",), k.edges + (("t", "a0"),))
    trace = []
    res = invariant_biclique(g, GroupAction(g, []), trace)
    assert trace[0][0] == "collapse" and is_biclique(g, res)


def test_twin_classes():
    assert twin_classes(complete_bipartite(2, 3)) == [("a0", "a1"), ("b0", "b1", "b2")]


def test_invariant_biclique_on_random_automorphisms():
    rng = random.Random(4)
    for x in quadric_complexes():
        h = oracles.to_nx(x.skeleton)
        autos = oracles.automorphisms(h) if len(h) <= 12 else []
        gens = rng.sample(autos, min(3, len(autos)))
        a = GroupAction(x, gens)
        check_invariant(x.skeleton, a, invariant_biclique_complex(x, a))


@given(st.data())
@settings(max_examples=60, deadline=None)
def test_invariant_biclique_property(data):
    g = data.draw(st.sampled_from(four_bridged_corpus()))
    h = oracles.to_nx(g)
    gm = nx.algorithms.isomorphism.GraphMatcher(h, h)
    autos = []
    for m in gm.isomorphisms_iter():
        autos.append(dict(m))
        if len(autos) >= 30:
            break
    gens = data.draw(st.lists(st.sampled_from(autos), max_size=3))
    a = GroupAction(g, gens)
    check_invariant(g, a, invariant_biclique(g, a))
