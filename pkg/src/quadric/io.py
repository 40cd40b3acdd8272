"""Line-based text formats for graphs, complexes, diagrams, actions and presentations.

Blank lines and ``#`` comments are ignored everywhere; every parse error
carries the offending line number.
"""

import re

from .complex import SquareComplex
from .diagram import DiscDiagram, PlanarMap
from .dismantling import GroupAction
from .errors import DiagramError, GraphError, NonReducedRelatorError, ParseError
from .graph import SimplicialGraph
from .presentation import PolyDiagram, Presentation, TwoComplex

ID = re.compile(r"^[A-Za-z0-9_.-]+$")


def _lines(text):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line.split()


def _ids(tokens, no, source):
    for t in tokens:
        if not ID.match(t):
            raise ParseError(f"bad identifier {t!r}", no, source)
    return tokens


def _arity(toks, n, no, source):
    if len(toks) != n:
        raise ParseError(f"{toks[0]!r} expects {n - 1} arguments, got {len(toks) - 1}", no, source)


# -- graphs and square complexes -------------------------------------------


def _read_graph_parts(text, source, allow_squares):
    verts, vline = [], {}
    edges, eline = [], {}
    squares = []
    for no, toks in _lines(text):
        kind = toks[0]
        if kind == "v":
            _arity(toks, 2, no, source)
            (v,) = _ids(toks[1:], no, source)
            if v in vline:
                raise ParseError(f"duplicate vertex {v!r} (first on line {vline[v]})", no, source)
            vline[v] = no
            verts.append(v)
        elif kind == "e":
            _arity(toks, 3, no, source)
            a, b = _ids(toks[1:], no, source)
            if a == b:
                raise ParseError(f"self-loop at {a!r}", no, source)
            key = (min(a, b), max(a, b))
            if key in eline:
                raise ParseError(f"duplicate edge {a}-{b} (first on line {eline[key]})", no, source)
            eline[key] = no
            edges.append((a, b, no))
        elif kind == "sq" and allow_squares:
            _arity(toks, 5, no, source)
            squares.append((tuple(_ids(toks[1:], no, source)), no))
        else:
            raise ParseError(f"unknown record {kind!r}", no, source)
    for a, b, no in edges:
        for x in (a, b):
            if x not in vline:
                raise ParseError(f"edge uses undeclared vertex {x!r}", no, source)
    g = SimplicialGraph(verts, [(a, b) for a, b, _ in edges])
    return g, squares


def read_graph(text, source=None):
    g, _ = _read_graph_parts(text, source, False)
    return g


def write_graph(g):
    out = [f"v {v}" for v in sorted(g.vertices)]
    out += [f"e {a} {b}" for a, b in sorted(g.edges)]
    return "\n".join(out) + "\n"


def read_complex(text, source=None):
    g, squares = _read_graph_parts(text, source, True)
    seen = set()
    for sq, no in squares:
        try:
            SquareComplex(g, [sq])
        except GraphError as exc:
            raise ParseError(str(exc), no, source) from None
        key = frozenset(sq), tuple(sorted(sq))
        if key in seen:
            raise ParseError(f"duplicate square {sq}", no, source)
        seen.add(key)
    return SquareComplex(g, [sq for sq, _ in squares])


def write_complex(x):
    text = write_graph(x.skeleton)
    return text + "".join(f"sq {' '.join(sq)}\n" for sq in x.squares)


# -- actions ---------------------------------------------------------------


def read_action(text, host, source=None, cells=None):
    """Generators as ``gen <name>`` blocks of ``map <x> <y>`` lines.

    ``cells`` is the set of ids each generator must map; it defaults to the
    host's vertices.
    """
    domain = set(cells if cells is not None else host.vertices)
    gens = {}
    cur = None
    start = {}
    for no, toks in _lines(text):
        if toks[0] == "gen":
            _arity(toks, 2, no, source)
            (name,) = _ids(toks[1:], no, source)
            if name in gens:
                raise ParseError(f"duplicate generator {name!r}", no, source)
            cur = gens[name] = {}
            start[name] = no
        elif toks[0] == "map":
            _arity(toks, 3, no, source)
            if cur is None:
                raise ParseError("map before any gen", no, source)
            a, b = _ids(toks[1:], no, source)
            if a not in domain or b not in domain:
                raise ParseError(f"map uses unknown cell {a if a not in domain else b!r}", no, source)
            if a in cur:
                raise ParseError(f"{a!r} mapped twice", no, source)
            cur[a] = b
        else:
            raise ParseError(f"unknown record {toks[0]!r}", no, source)
    for name, m in gens.items():
        required = domain if cells is None else set(host.vertices) | set(getattr(host, "cells", ()))
        if not required <= set(m):
            missing = sorted(required - set(m))
            raise ParseError(f"generator {name!r} is not total: missing {missing[:5]}", start[name], source)
        if len(set(m.values())) != len(m):
            raise ParseError(f"generator {name!r} is not a permutation", start[name], source)
    return GroupAction(host, gens)


def write_action(a):
    out = []
    for name, m in a.generators:
        out.append(f"gen {name}")
        out += [f"map {k} {m[k]}" for k in sorted(m)]
    return "\n".join(out) + "\n"


# -- presentations and 2-complexes -------------------------------------------


def read_presentation(text, source=None):
    gens = None
    rels = []
    for no, toks in _lines(text):
        if toks[0] == "gen":
            if gens is not None:
                raise ParseError("second gen line", no, source)
            gens = _ids(toks[1:], no, source)
            if len(set(gens)) != len(gens):
                raise ParseError("duplicate generator", no, source)
            idx = {g: i + 1 for i, g in enumerate(gens)}
        elif toks[0] == "rel":
            if gens is None:
                raise ParseError("rel before gen", no, source)
            word = []
            for t in toks[1:]:
                neg = t.startswith("~")
                name = t[1:] if neg else t
                if name not in idx:
                    raise ParseError(f"unknown generator {name!r}", no, source)
                word.append(-idx[name] if neg else idx[name])
            if not word:
                raise ParseError("empty relator", no, source)
            rels.append((tuple(word), no))
        else:
            raise ParseError(f"unknown record {toks[0]!r}", no, source)
    if gens is None:
        raise ParseError("missing gen line", None, source)
    for w, no in rels:
        try:
            Presentation(gens, [w])
        except NonReducedRelatorError as exc:
            raise NonReducedRelatorError(f"{source + ':' if source else ''}{no}: {exc}") from None
    return Presentation(gens, [w for w, _ in rels])


def write_presentation(p):
    out = ["gen " + " ".join(p.generators)]
    out += ["rel " + p.format_word(r) for r in p.relators]
    return "\n".join(out) + "\n"


def read_two_complex(text, source=None):
    """``c0 <id>``, ``c1 <id> <v> <w>`` and ``c2 <id> <walk>``; no simple-connectivity certificate."""
    vs, es, cells = [], {}, {}
    seen = {}
    for no, toks in _lines(text):
        kind = toks[0]
        if kind == "c0":
            _arity(toks, 2, no, source)
            (k,) = _ids(toks[1:], no, source)
            vs.append(k)
        elif kind == "c1":
            _arity(toks, 4, no, source)
            k, a, b = _ids(toks[1:], no, source)
            es[k] = (a, b)
        elif kind == "c2":
            if len(toks) < 3:
                raise ParseError("c2 needs an id and a nonempty walk", no, source)
            k = _ids(toks[1:2], no, source)[0]
            walk = []
            for t in toks[2:]:
                if t.startswith("-"):
                    walk.append((t[1:], -1))
                else:
                    walk.append((t, 1))
            cells[k] = walk
        else:
            raise ParseError(f"unknown record {kind!r}", no, source)
        if toks[1] in seen:
            raise ParseError(f"duplicate cell id {toks[1]!r} (first on line {seen[toks[1]]})", no, source)
        seen[toks[1]] = no
    try:
        return TwoComplex(vs, es, cells, False)
    except GraphError as exc:
        raise ParseError(str(exc), None, source) from None


def write_two_complex(y):
    out = [f"c0 {v}" for v in y.vertices]
    out += [f"c1 {k} {a} {b}" for k, (a, b) in y.edges.items()]
    for k, walk in y.cells.items():
        out.append(f"c2 {k} " + " ".join(e if s > 0 else "-" + e for e, s in walk))
    return "\n".join(out) + "\n"


# -- diagrams --------------------------------------------------------------


def read_diagram(text, source=None):
    """Darts with twins, rotations at vertices, an outer dart and vertex labels.

    Returns a :class:`DiscDiagram` when every inner face is a square and a
    :class:`PolyDiagram` otherwise.  ``label e`` and ``label sq`` records are
    accepted but not used: cell labels are determined by vertex labels.
    """
    dart_ids = []
    twin = {}
    rot = {}
    outer = None
    labels = {}
    where = {}
    for no, toks in _lines(text):
        kind = toks[0]
        if kind == "dart":
            if len(toks) != 4 or toks[2] != "twin":
                raise ParseError("expected 'dart <id> twin <id>'", no, source)
            a, b = _ids([toks[1], toks[3]], no, source)
            if a == b:
                raise ParseError(f"dart {a!r} is its own twin", no, source)
            for x, y in ((a, b), (b, a)):
                if x in twin and twin[x] != y:
                    raise ParseError(f"dart {x!r} given two twins", no, source)
                if x not in twin:
                    dart_ids.append(x)
                    where[x] = no
                twin[x] = y
        elif kind == "rot":
            if len(toks) < 2:
                raise ParseError("rot needs a vertex", no, source)
            v = _ids(toks[1:2], no, source)[0]
            if v in rot:
                raise ParseError(f"second rotation for vertex {v!r}", no, source)
            rot[v] = (_ids(toks[2:], no, source), no)
        elif kind == "outer":
            _arity(toks, 2, no, source)
            outer = (toks[1], no)
        elif kind == "label":
            if len(toks) != 4 or toks[1] not in ("v", "e", "sq"):
                raise ParseError("expected 'label v|e|sq <cell> <cell>'", no, source)
            if toks[1] == "v":
                labels[toks[2]] = (toks[3], no)
        else:
            raise ParseError(f"unknown record {kind!r}", no, source)
    index = {d: i for i, d in enumerate(dart_ids)}
    n = len(dart_ids)
    origin = [None] * n
    sigma = [None] * n
    for v, (ds, no) in rot.items():
        for d in ds:
            if d not in index:
                raise ParseError(f"rotation uses undeclared dart {d!r}", no, source)
        for i, d in enumerate(ds):
            if origin[index[d]] is not None:
                raise ParseError(f"dart {d!r} appears in two rotations", no, source)
            origin[index[d]] = v
            sigma[index[d]] = index[ds[(i + 1) % len(ds)]]
    for d in dart_ids:
        if origin[index[d]] is None:
            raise ParseError(f"dart {d!r} is in no rotation", where[d], source)
    lone = None
    if n == 0:
        if len(rot) != 1:
            raise ParseError("a dartless diagram has exactly one vertex", None, source)
        lone = next(iter(rot))
    elif any(not ds for ds, _ in rot.values()):
        raise ParseError("isolated vertex in a diagram with edges", None, source)
    tw = [index[twin[d]] for d in dart_ids]
    phi = [sigma[tw[i]] for i in range(n)]
    if n and outer is None:
        raise ParseError("missing outer record", None, source)
    out_dart = None
    if outer is not None:
        if outer[0] not in index:
            raise ParseError(f"unknown outer dart {outer[0]!r}", outer[1], source)
        out_dart = index[outer[0]]
    lab = None
    if labels:
        lab = {}
        for v, (t, no) in labels.items():
            if v not in rot:
                raise ParseError(f"label for unknown vertex {v!r}", no, source)
            lab[v] = t
    try:
        base = PlanarMap(origin, tw, phi, out_dart, lab, lone)
        inner = [f for f in base.face_ids if f != base.outer_face_id] if n else []
        cls = DiscDiagram if all(len(base.face_darts(f)) == 4 for f in inner) else PolyDiagram
        return cls(origin, tw, phi, out_dart, lab, lone)
    except DiagramError as exc:
        raise ParseError(str(exc), None, source) from None


def write_diagram(d):
    out = []
    n = len(d.origin)
    for i in range(n):
        if i < d.twin[i]:
            out.append(f"dart d{i} twin d{d.twin[i]}")
    if n == 0:
        out.append(f"rot {d.lone}")
    for v in d.vertices:
        if n:
            out.append(f"rot {v} " + " ".join(f"d{x}" for x in d.out_darts[v]))
    if n:
        out.append(f"outer d{d.outer}")
    if d.labels:
        out += [f"label v {v} {d.labels[v]}" for v in sorted(d.labels)]
    return "\n".join(out) + "\n"
