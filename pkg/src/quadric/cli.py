"""Command-line front end.

Every command prints ``key: value`` lines sorted by key.  Exit status is 0
on success, 1 for unreadable input or a violated contract and 2 when a
property named with ``--assert`` does not hold.
"""

import argparse
import sys

from . import io
from .complex import fill_disc, is_4_flag, is_locally_quadric, is_quadric
from .diagram import (
    DiscDiagram,
    boundary_labels,
    curvature_report,
    detect_pathologies,
    dual_curves,
    is_cat0_disc,
    positive_boundary_sites,
    reduce_to_locally_minimal,
)
from .dismantling import (
    GroupAction,
    bi_dismantle,
    bfs_dismantle,
    invariant_biclique,
    verify_action,
)
from .errors import QuadricError
from .graph import girth, is_4_bridged, is_biclique, is_bipartite, six_cycle_diagonal_violations
from .presentation import (
    check_c4,
    check_t4,
    piece_census,
    poly_curvature_report,
    positive_sites_cftf,
)
from .quadrization import cayley_ball, quadrize, thicken_free_edges


class AssertionFailed(Exception):
    pass


def _fmt(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (list, tuple)):
        return " ".join(_fmt(x) for x in v) if v else "-"
    if isinstance(v, float) and v == float("inf"):
        return "inf"
    return str(v)


def render(report):
    return "".join(f"{k}: {_fmt(report[k])}\n" for k in sorted(report))


def _cycle(c):
    return "(" + " ".join(c) + ")"


def _read(path):
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load_graph(path):
    """A graph file, or the 1-skeleton of a complex file."""
    text = _read(path)
    if any(line.split()[:1] == ["sq"] for line in text.splitlines()):
        return io.read_complex(text, path).skeleton
    return io.read_graph(text, path)


def _check_asserts(args, props):
    failed = [name for name in (args.assert_ or []) if not props.get(name, True)]
    unknown = [name for name in (args.assert_ or []) if name not in props]
    if unknown:
        raise QuadricError(f"unknown --assert property {unknown[0]!r}; known: {sorted(props)}")
    if failed:
        raise AssertionFailed(", ".join(failed))


# -- graph -------------------------------------------------------------------


def cmd_graph_check(args):
    g = _load_graph(args.file)
    rep = {"vertices": len(g), "edges": len(g.edges), "simplicial": True}
    rep["connected"] = g.is_connected()
    rep["bipartite"] = is_bipartite(g)
    rep["girth"] = girth(g)
    viol = six_cycle_diagonal_violations(g)
    rep["six_cycle_diagonal_violations"] = len(viol)
    fb = None
    if rep["connected"]:
        fb = is_4_bridged(g)
        rep["four_bridged"] = fb.ok
        if not fb:
            rep["four_bridged_witness"] = [_cycle(c) for c in fb.witnesses]
    else:
        rep["four_bridged"] = "n/a (disconnected)"
    sys.stdout.write(render(rep))
    _check_asserts(args, {
        "bipartite": rep["bipartite"],
        "connected": rep["connected"],
        "four-bridged": bool(fb),
    })


def cmd_graph_dismantle(args):
    g = _load_graph(args.file)
    rep = {}
    if is_biclique(g, g.vertices):
        res = bi_dismantle(g)
        rep["status"] = "already biclique"
    elif args.bfs is not None:
        res = bfs_dismantle(g, args.bfs)
        rep["start"] = args.bfs
        rep["status"] = "biclique" if is_biclique(res.final, res.final.vertices) else "star"
    else:
        res = bi_dismantle(g)
        rep["status"] = "biclique" if res.ok else "stuck"
    rep["method"] = "bfs" if args.bfs is not None else "greedy"
    rep["removed"] = len(res.steps)
    width = len(str(max(len(res.steps), 1)))
    for i, (u, v) in enumerate(res.steps, 1):
        rep[f"step_{i:0{width}d}"] = f"{u} by {v}"
    rep["final"] = list(res.final.vertices)
    if not res.ok:
        rep["stuck_vertices"] = len(res.final)
    if args.verify:
        cur = g
        ok = True
        for u, v in res.steps:
            ok = ok and cur.neighbors(u) <= cur.neighbors(v) and u != v
            cur = cur.remove_vertices([u])
        rep["verified"] = ok
        if not ok:
            raise QuadricError("a reported domination step does not hold")
    sys.stdout.write(render(rep))
    _check_asserts(args, {"dismantlable": res.ok})


def cmd_graph_biclique(args):
    text = _read(args.file)
    if any(line.split()[:1] == ["sq"] for line in text.splitlines()):
        host = io.read_complex(text, args.file)
        g = host.skeleton
    else:
        host = g = io.read_graph(text, args.file)
    a = io.read_action(_read(args.action), host, args.action)
    v = verify_action(a)
    if not v:
        raise QuadricError(f"action is not by automorphisms: {v.witnesses}")
    b = invariant_biclique(g, GroupAction(g, dict(a.generators)))
    rep = {
        "biclique": sorted(b),
        "size": len(b),
        "is_biclique": is_biclique(g, b),
        "stabilized": a.stabilizes(b),
        "generators": len(a.generators),
    }
    sys.stdout.write(render(rep))


# -- complexes ---------------------------------------------------------------


def cmd_complex_check(args):
    x = io.read_complex(_read(args.file), args.file)
    rep = {"vertices": len(x.vertices), "edges": len(x.skeleton.edges), "squares": len(x.squares)}
    flag = is_4_flag(x)
    loc = is_locally_quadric(x)
    rep["four_flag"] = flag.ok
    rep["locally_quadric"] = loc.ok
    if not loc:
        rep["locally_quadric_witness"] = [f"{c}:{_cycle(w) if isinstance(w[0], str) else w}" for c, w in loc.witnesses[:5]]
    if not flag:
        rep["four_flag_missing"] = [_cycle(c) for c in flag.witnesses[:5]]
    quad = None
    if x.skeleton.is_connected():
        quad = is_quadric(x)
        rep["quadric"] = quad.ok
    else:
        rep["quadric"] = "n/a (disconnected)"
    sys.stdout.write(render(rep))
    _check_asserts(args, {
        "four-flag": flag.ok,
        "locally-quadric": loc.ok,
        "quadric": bool(quad),
    })


def cmd_complex_fill(args):
    x = io.read_complex(_read(args.file), args.file)
    walk = [w for w in args.walk.replace(",", " ").split() if w]
    d = fill_disc(x, walk)
    rep = {"boundary_length": d.boundary_length, "squares": d.square_count}
    if args.reduce:
        trace = []
        d = reduce_to_locally_minimal(d, x, trace)
        rep["reduction_steps"] = len(trace)
        rep["squares_reduced"] = d.square_count
    rep["boundary"] = list(boundary_labels(d))
    if not d.is_single_vertex():
        rep["gauss_bonnet"] = sum(curvature_report(d).kappa.values())
    rep["cat0"] = is_cat0_disc(d)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(io.write_diagram(d))
    sys.stdout.write(render(rep))


def _emit_quadrization(y, args, rep):
    if y.free_edges():
        if not args.thicken:
            raise QuadricError(f"free 1-cells {y.free_edges()[:5]}; rerun with --thicken")
        y = thicken_free_edges(y)
        rep["thickened"] = True
    q = quadrize(y)
    x = q.complex
    rep.update({"vertices": len(x.vertices), "edges": len(x.skeleton.edges), "squares": len(x.squares)})
    if args.check_quadric:
        rep["quadric"] = bool(is_quadric(x)) if x.skeleton.is_connected() else False
    text = io.write_complex(x) + "".join(line + "\n" for line in q.origin_lines())
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    sys.stdout.write(render(rep))
    _check_asserts(args, {"quadric": rep.get("quadric", True)})


def cmd_complex_quadrize(args):
    if args.presentation:
        return cmd_presentation_quadrize(args, args.presentation)
    y = io.read_two_complex(_read(args.file), args.file)
    _emit_quadrization(y, args, {})


# -- presentations -----------------------------------------------------------


def cmd_presentation_check(args):
    p = io.read_presentation(_read(args.file), args.file)
    c4, t4 = check_c4(p), check_t4(p)
    t4s = check_t4(p, method="star")
    if t4.ok != t4s.ok:
        raise QuadricError("T(4) implementations disagree")
    rep = {"generators": len(p.generators), "relators": len(p.relators), "C4": c4.ok, "T4": t4.ok}
    if not c4:
        w, dec = c4.witnesses[0]
        rep["C4_witness"] = " | ".join(p.format_word(x) for x in dec)
    if not t4:
        rep["T4_witness"] = " ; ".join(p.format_word(r) for r in t4.witnesses[0])
    census = piece_census(p)
    rep["pieces"] = sum(census.values())
    for k, n in census.items():
        rep[f"pieces_length_{k}"] = n
    if p.flags():
        rep["flags"] = p.flags()
    sys.stdout.write(render(rep))
    _check_asserts(args, {"c4": c4.ok, "t4": t4.ok})


def cmd_presentation_quadrize(args, path=None):
    path = path or args.file
    p = io.read_presentation(_read(path), path)
    if args.radius is None:
        raise QuadricError("--radius is required for a presentation")
    y = cayley_ball(p, args.radius, assume_distinct=args.assume_distinct)
    args.thicken = True
    rep = {"radius": args.radius, "ball_0cells": len(y.vertices), "ball_2cells": len(y.cells)}
    _emit_quadrization(y, args, rep)


# -- diagrams ----------------------------------------------------------------


def cmd_diagram_report(args):
    d = io.read_diagram(_read(args.file), args.file)
    rep = {"vertices": len(d.vertices), "edges": len(d.edges), "faces": d.face_count,
           "boundary_length": d.boundary_length}
    props = {}
    if isinstance(d, DiscDiagram):
        cr = curvature_report(d)
        for v in d.vertices:
            rep[f"curvature {v}"] = f"{cr.kappa[v]} delta={cr.delta[v]} rho={cr.rho[v]}"
        if not d.is_single_vertex():
            rep["gauss_bonnet"] = cr.total
            rep["positive_sites"] = positive_boundary_sites(d)
        curves = dual_curves(d)
        rep["dual_curves"] = len(curves)
        rep["cat0"] = is_cat0_disc(d)
        path = detect_pathologies(d)
        if path.empty:
            rep["pathologies"] = "none"
        for name in ("nonogons", "monogons", "bigons", "triangles"):
            rep[name] = len(getattr(path, name))
        props = {"cat0": rep["cat0"], "no-pathologies": path.empty}
    else:
        pc = poly_curvature_report(d)
        rep["kind"] = "polygonal"
        for v, k in pc.nodes.items():
            rep[f"curvature {v}"] = k
        for f, k in pc.faces.items():
            rep[f"face_curvature {' '.join(d.face_vertices(f))}"] = k
        rep["gauss_bonnet"] = pc.total
        try:
            rep["positive_sites"] = [f"{k}:{v}" for k, v in positive_sites_cftf(d)]
        except QuadricError as exc:
            rep["positive_sites"] = f"n/a ({exc})"
    sys.stdout.write(render(rep))
    _check_asserts(args, props)


# -- entry point -------------------------------------------------------------


def build_parser():
    ap = argparse.ArgumentParser(prog="quadric", description=__doc__.splitlines()[0])
    top = ap.add_subparsers(dest="group", required=True)

    def leaf(sub, name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=func)
        p.add_argument("--assert", dest="assert_", action="append", metavar="PROPERTY",
                       help="exit 2 unless PROPERTY holds (repeatable)")
        return p

    g = top.add_parser("graph").add_subparsers(dest="cmd", required=True)
    p = leaf(g, "check", cmd_graph_check, "bipartiteness, girth, 4-bridged test")
    p.add_argument("file")
    p = leaf(g, "dismantle", cmd_graph_dismantle, "bi-dismantling sequence")
    p.add_argument("file")
    p.add_argument("--bfs", metavar="START", help="dismantle along a BFS order from START")
    p.add_argument("--verify", action="store_true", help="re-check every domination step")
    p = leaf(g, "biclique", cmd_graph_biclique, "biclique invariant under a group action")
    p.add_argument("file")
    p.add_argument("action")

    c = top.add_parser("complex").add_subparsers(dest="cmd", required=True)
    p = leaf(c, "check", cmd_complex_check, "4-flag, local conditions, quadric")
    p.add_argument("file")
    p = leaf(c, "fill", cmd_complex_fill, "disc diagram filling a closed walk")
    p.add_argument("file")
    p.add_argument("--walk", required=True, help="comma-separated vertices")
    p.add_argument("--reduce", action="store_true", help="reduce to a locally minimal diagram")
    p.add_argument("--output", help="write the diagram here")
    p = leaf(c, "quadrize", cmd_complex_quadrize, "quadrization of a 2-complex")
    p.add_argument("file", nargs="?")
    p.add_argument("--presentation", help="quadrize a Cayley ball of this presentation")
    p.add_argument("--radius", type=int)
    p.add_argument("--thicken", action="store_true", help="thicken free 1-cells first")
    p.add_argument("--check-quadric", action="store_true")
    p.add_argument("--assume-distinct", action="store_true",
                   help="treat undecided word pairs as distinct when building Cayley balls")
    p.add_argument("--output", help="write the square complex here")

    pr = top.add_parser("presentation").add_subparsers(dest="cmd", required=True)
    p = leaf(pr, "check", cmd_presentation_check, "C(4), T(4) and pieces")
    p.add_argument("file")
    p = leaf(pr, "quadrize", cmd_presentation_quadrize, "quadrize a Cayley ball")
    p.add_argument("file")
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--check-quadric", action="store_true")
    p.add_argument("--assume-distinct", action="store_true")
    p.add_argument("--output")

    dg = top.add_parser("diagram").add_subparsers(dest="cmd", required=True)
    p = leaf(dg, "report", cmd_diagram_report, "curvature, dual curves, pathologies")
    p.add_argument("file")
    return ap


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse reports usage errors with status 2, which is reserved for --assert
        return 1 if exc.code == 2 else exc.code
    try:
        if args.func is cmd_complex_quadrize and not args.file and not args.presentation:
            raise QuadricError("give a 2-complex file or --presentation")
        args.func(args)
    except AssertionFailed as exc:
        sys.stdout.flush()
        print(f"assertion failed: {exc}", file=sys.stderr)
        return 2
    except (QuadricError, OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
