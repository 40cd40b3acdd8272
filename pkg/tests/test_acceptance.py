"""Acceptance gate: one test per criterion, each printing a single PASS/FAIL line.

All checks are exact.  Curvature is counted in integer quarter turns, so
the Gauss-Bonnet tolerance is zero; every criterion must also finish
within its time budget.
"""

import random
import time
from itertools import combinations
from math import comb

import networkx as nx

import oracles
from corpus import (
    bipartite_family,
    cat0_square_complexes,
    cftf_fixtures,
    disc_corpus,
    four_bridged_corpus,
    poly_corpus,
    quadric_complexes,
    reduced_corpus,
)
from quadric.complex import four_flag_completion, is_quadric
from quadric.diagram import (
    curvature_report,
    detect_pathologies,
    dual_curves,
    is_cat0_disc,
    isoperimetric_check,
    positive_boundary_sites,
    separation_distance,
)
from quadric.dismantling import (
    GroupAction,
    bfs_dismantle,
    bfs_order,
    bi_dismantle,
    invariant_biclique,
    invariant_biclique_complex,
)
from quadric.graph import (
    complete_bipartite,
    grid_graph,
    is_biclique,
    is_convex_subgraph,
    is_isometric_subgraph,
    metric_ball_vertices,
)
from quadric.presentation import (
    Presentation,
    TwoComplex,
    check_c4,
    check_diagram_cftf,
    check_strong_helly,
    check_t4,
    poly_curvature_report,
    positive_sites_cftf,
)
from quadric.quadrization import cayley_ball, quadrize, transfer_action
from test_complex import characterisation
from test_quadrization import grid_flip, grid_rotation, skeleton_nx, square_rotation, strip_flip

GAUSS_BONNET = 4  # total curvature of a disc, in quarter turns
TOLERANCE = 0
TIME_BUDGET = 60.0  # seconds per criterion

P = Presentation.parse_short


class Clock:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def finish(report, number, failures, detail, clock):
    ok = not failures and clock.elapsed < TIME_BUDGET
    detail = f"{detail}; {clock.elapsed:.1f}s"
    if failures:
        detail += f"; first failure: {failures[0]}"
    report(number, ok, detail)
    assert ok, detail


def cat0_discs():
    return [(n, d) for n, d in disc_corpus() if not d.is_single_vertex() and is_cat0_disc(d)]


def test_criterion_01_gauss_bonnet(report):
    with Clock() as clock:
        bad = []
        discs = [(n, d) for n, d in disc_corpus() if not d.is_single_vertex()]
        for name, d in discs:
            total = sum(curvature_report(d).kappa.values())
            if not isinstance(total, int) or abs(total - GAUSS_BONNET) > TOLERANCE:
                bad.append((name, total))
        polys = poly_corpus()
        for name, d in polys:
            total = poly_curvature_report(d).total
            if abs(total - GAUSS_BONNET) > TOLERANCE:
                bad.append((name, total))
        if len(discs) < 200 or len(polys) < 100:
            bad.append(("corpus too small", len(discs), len(polys)))
    finish(report, 1, bad, f"{len(discs)} square discs, {len(polys)} polygonal discs, total = 4 exactly", clock)


def test_criterion_02_positive_sites(report):
    with Clock() as clock:
        bad = []
        discs = cat0_discs()
        spurless = 0
        for name, d in discs:
            rep = curvature_report(d)
            sites = positive_boundary_sites(d)
            if len(sites) < 2:
                bad.append((name, "sites", len(sites)))
            if all(rep.delta[v] != 1 for v in d.vertices):
                spurless += 1
                if sum(1 for v in sites if rep.kappa[v] == 1) < 4:
                    bad.append((name, "spurless corners"))
        polys = 0
        for name, d in poly_corpus():
            if not check_diagram_cftf(d) or d.is_single_cell():
                continue
            polys += 1
            sites = positive_sites_cftf(d)
            if len(sites) < 2:
                bad.append((name, "poly sites", len(sites)))
            shelled = not any(k == "tip" for k, _ in sites) and all(
                d.nu(f) >= 3 for f in d.face_ids if d.is_boundary_face(f)
            )
            if shelled and len(sites) < 4:
                bad.append((name, "poly spurless sites", len(sites)))
    finish(report, 2, bad, f"{len(discs)} CAT(0) discs ({spurless} spurless), {polys} C(4)-T(4) polygonal", clock)


def test_criterion_03_dual_curves(report):
    with Clock() as clock:
        bad = []
        pairs = 0
        discs = cat0_discs()
        for name, d in discs:
            if len(dual_curves(d)) * 2 != d.boundary_length:
                bad.append((name, "curve count"))
            if not detect_pathologies(d).empty:
                bad.append((name, "pathology"))
            dist = dict(nx.all_pairs_shortest_path_length(oracles.diagram_nx(d)))
            for u, v in combinations(d.vertices, 2):
                pairs += 1
                if separation_distance(d, u, v) != dist[u][v]:
                    bad.append((name, u, v))
    finish(report, 3, bad, f"{len(discs)} CAT(0) discs, {pairs} vertex pairs", clock)


def test_criterion_04_isoperimetric(report):
    with Clock() as clock:
        bad = []
        corpus = reduced_corpus()
        for name, d, _ in corpus:
            n = d.boundary_length
            if d.face_count and not d.face_count < comb(n, 2):
                bad.append((name, d.face_count, n))
            if not isoperimetric_check(d):
                bad.append((name, "check"))
    finish(report, 4, bad, f"{len(corpus)} reduced discs, area < C(n,2)", clock)


def test_criterion_05_recognition(report):
    with Clock() as clock:
        rng = random.Random(2)
        bad = []
        count = positives = 0
        for g in bipartite_family():
            if len(g) < 2:
                continue
            count += 1
            q, b, f = characterisation(g, rng)
            positives += q
            if not q == b == f:
                bad.append((g.edges, q, b, f))
    finish(report, 5, bad, f"{count} connected bipartite graphs <= 9 vertices, {positives} quadric, 0 disagreements", clock)


def test_criterion_06_dismantling(report):
    with Clock() as clock:
        bad = []
        corpus = four_bridged_corpus()
        steps = 0
        for g in corpus:
            if len(g) > 12:
                bad.append(("too large", len(g)))
            if not bi_dismantle(g).ok:
                bad.append((g.edges, "greedy"))
            h = oracles.to_nx(g)
            for u in g.vertices:
                o = bfs_order(g, u)
                dist = nx.single_source_shortest_path_length(h, u)
                res = bfs_dismantle(g, u)
                for v, dom in res.steps:
                    steps += 1
                    r = dist[v]
                    if dom != o.parent[o.max_pseudoparent(v)]:
                        bad.append((g.edges, u, v, "dominator"))
                    if not {x for x in h[v] if dist[x] <= r} <= {x for x in h[dom] if dist[x] <= r}:
                        bad.append((g.edges, u, v, "ball domination"))
                if max(dist[v] for v in res.final.vertices) > 1:
                    bad.append((g.edges, u, "not a star"))
        family = 0
        for g in bipartite_family():
            if len(g) < 2:
                continue
            family += 1
            if bi_dismantle(g).ok != oracles.bi_dismantlable(oracles.to_nx(g)):
                bad.append((g.edges, "greedy vs backtracking"))
    finish(report, 6, bad, f"{len(corpus)} 4-bridged graphs, {steps} BFS removals checked, {family} graphs greedy = backtracking", clock)


def action_fixtures():
    out = []
    k = four_flag_completion(complete_bipartite(3, 3))
    for m in oracles.automorphisms(oracles.to_nx(k.skeleton)):
        out.append(("K33", k, GroupAction(k, [m])))
    for n in range(2, 6):
        x = four_flag_completion(grid_graph(n, n))
        rot = {f"{i}_{j}": f"{j}_{n - 1 - i}" for i in range(n) for j in range(n)}
        flip = {f"{i}_{j}": f"{i}_{n - 1 - j}" for i in range(n) for j in range(n)}
        for gens in ([rot], [flip], [rot, flip]):
            out.append((f"grid{n}", x, GroupAction(x, gens)))
    for y, a in (square_rotation(), strip_flip(), grid_flip(2), grid_flip(3), grid_rotation(2), grid_rotation(3)):
        t = transfer_action(y, a)
        out.append(("quadrized", t.host, t))
    return out


def test_criterion_07_invariant_bicliques(report):
    with Clock() as clock:
        bad = []
        fixtures = action_fixtures()
        for name, x, a in fixtures:
            b = invariant_biclique_complex(x, a)
            g = x.skeleton
            if not (is_biclique(g, b) and oracles.is_biclique(oracles.to_nx(g), b)):
                bad.append((name, "not a biclique"))
            if any({m[v] for v in b} != set(b) for m in a.maps()):
                bad.append((name, "not stabilized"))
            if invariant_biclique(g, GroupAction(g, a.maps())) != b:
                bad.append((name, "graph and complex disagree"))
        if len(fixtures) < 50:
            bad.append(("too few fixtures", len(fixtures)))
    finish(report, 7, bad, f"{len(fixtures)} (complex, action) fixtures", clock)


def random_presentation(rng, max_total=16):
    k = rng.randint(1, 3)
    gens = [1, 2, 3][:k]
    rels, total = [], 0
    for _ in range(rng.randint(1, 4)):
        n = rng.randint(1, min(8, max_total - total))
        w = [rng.choice(gens) * rng.choice((1, -1))]
        while len(w) < n:
            x = rng.choice(gens) * rng.choice((1, -1))
            if x != -w[-1] and (len(w) < n - 1 or n < 2 or x != -w[0]):
                w.append(x)
        rels.append(tuple(w))
        total += n
        if total >= max_total:
            break
    return Presentation("abc"[:k], rels)


def test_criterion_08_small_cancellation(report):
    with Clock() as clock:
        bad = []
        expected = [
            (P("abc", ["abAB", "bcbCBC"]), (True, True)),
            (P("ab", ["abAB"]), (True, True)),
            (P("a", ["aaaa"]), (False, None)),
        ]
        for p, (c4, t4) in expected:
            got = (bool(check_c4(p)), bool(check_t4(p)))
            if got[0] != c4 or (t4 is not None and got[1] != t4):
                bad.append((p.relators, got))
        checked = 0
        for n in range(1, 9):
            for w in oracles.cyclically_reduced_words(2, n):
                p = Presentation("ab", [w])
                checked += 1
                if bool(check_t4(p)) != bool(check_t4(p, "star")):
                    bad.append((w, "T4 methods"))
        rng = random.Random(16)
        for _ in range(3000):
            p = random_presentation(rng)
            if sum(map(len, p.relators)) > 16:
                bad.append((p.relators, "sampler"))
            checked += 1
            a, b = bool(check_t4(p)), bool(check_t4(p, "star"))
            if a != b or a != oracles.t4(p.relators):
                bad.append((p.relators, a, b))
    finish(report, 8, bad, f"worked examples exact; T(4) methods agree on {checked} presentations (length <= 16)", clock)


def test_criterion_09_quadrization(report):
    with Clock() as clock:
        bad = []
        fixtures = cftf_fixtures()
        for name, y in fixtures:
            if not y.simply_connected or not is_quadric(quadrize(y).complex):
                bad.append((name, "quadrization"))
        for r in range(4):
            ball = cayley_ball(P("ab", ["abAB"]), r)
            if not nx.is_isomorphic(skeleton_nx(ball), oracles.z2_ball(r)):
                bad.append(("Z2 ball", r))
        helly = cat0_square_complexes()
        for x in helly:
            if not check_strong_helly(TwoComplex.from_square_complex(x)):
                bad.append(("strong Helly", len(x.vertices)))
    finish(report, 9, bad, f"{len(fixtures)} C(4)-T(4) fixtures quadric, Z2 balls r<=3 isomorphic, "
                           f"strong Helly on {len(helly)} CAT(0) complexes", clock)


def test_criterion_10_ball_isometry(report):
    with Clock() as clock:
        bad = []
        balls = 0
        for x in quadric_complexes():
            g = x.skeleton
            for v in g.vertices:
                for r in range(g.diameter() + 1):
                    balls += 1
                    if not is_isometric_subgraph(g, metric_ball_vertices(g, v, r)):
                        bad.append((len(g), v, r))
        window = grid_graph(7, 7)
        ball = metric_ball_vertices(window, "3_3", 1)
        if not is_isometric_subgraph(window, ball):
            bad.append(("window ball not isometric",))
        if is_convex_subgraph(window, ball):
            bad.append(("window ball unexpectedly convex",))
    finish(report, 10, bad, f"{balls} balls isometric; radius-1 ball in the 7x7 window isometric but not convex", clock)
