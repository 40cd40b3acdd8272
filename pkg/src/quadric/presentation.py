"""Presentations, pieces, C(4)/T(4), polygonal diagrams and 2-complexes.

Letters are signed integers: generator ``i`` (1-based) is ``i`` and its
inverse is ``-i``.
"""

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

from .diagram import PlanarMap
from .errors import (
    DegenerateDiagramError,
    GraphError,
    NonReducedRelatorError,
    PreconditionError,
)
from .graph import SimplicialGraph
from .verdict import Verdict


# -- words -------------------------------------------------------------------


def inverse(word):
    return tuple(-x for x in reversed(word))


def free_reduce(word):
    out = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(word):
    w = free_reduce(word)
    i, j = 0, len(w)
    while j - i >= 2 and w[i] == -w[j - 1]:
        i += 1
        j -= 1
    return w[i:j]


def is_cyclically_reduced(word):
    w = tuple(word)
    if free_reduce(w) != w:
        return False
    return len(w) < 2 or w[0] != -w[-1]


def rotations(word):
    return [word[i:] + word[:i] for i in range(len(word))] if word else [()]


def primitive_root(word):
    """Shortest ``u`` with ``word == u**k``."""
    n = len(word)
    for d in range(1, n + 1):
        if n % d == 0 and word[:d] * (n // d) == word:
            return word[:d]
    return word


# -- presentations ------------------------------------------------------------


class Presentation:
    """Finite presentation with cyclically reduced relators.

    >>> p = Presentation.parse_short("ab", ["abAB"])
    >>> len(p.relators)
    1
    """

    def __init__(self, generators, relators=()):
        self.generators = tuple(generators)
        if len(set(self.generators)) != len(self.generators):
            raise ValueError("duplicate generator names")
        n = len(self.generators)
        rels = []
        for r in relators:
            r = tuple(int(x) for x in r)
            if not r:
                raise NonReducedRelatorError("empty relator")
            if any(x == 0 or abs(x) > n for x in r):
                raise ValueError(f"relator {r} uses an unknown generator")
            if not is_cyclically_reduced(r):
                raise NonReducedRelatorError(f"relator {self.format_word(r)} is not cyclically reduced")
            rels.append(r)
        self.relators = tuple(rels)

    @classmethod
    def parse_short(cls, generators, relators):
        """Single-letter generators; an upper-case letter is an inverse."""
        gens = list(generators)
        idx = {g: i + 1 for i, g in enumerate(gens)}
        rels = []
        for r in relators:
            word = []
            for ch in r:
                if ch in idx:
                    word.append(idx[ch])
                elif ch.lower() in idx and ch.isupper():
                    word.append(-idx[ch.lower()])
                else:
                    raise ValueError(f"unknown letter {ch!r}")
            rels.append(tuple(word))
        return cls(gens, rels)

    def letter_name(self, x):
        name = self.generators[abs(x) - 1]
        return name if x > 0 else "~" + name

    def format_word(self, word):
        return " ".join(self.letter_name(x) for x in word) if word else "1"

    def flags(self):
        """Notes about relators that are accepted but unusual."""
        out = []
        for r in self.relators:
            if len(r) <= 2:
                out.append(f"short relator {self.format_word(r)}")
            if primitive_root(r) != r:
                out.append(f"proper power {self.format_word(r)}")
        return out

    def __eq__(self, other):
        if not isinstance(other, Presentation):
            return NotImplemented
        return (self.generators, self.relators) == (other.generators, other.relators)

    def __hash__(self):
        return hash((self.generators, self.relators))

    def __repr__(self):
        rels = ", ".join(self.format_word(r) for r in self.relators)
        return f"Presentation(<{', '.join(self.generators)} | {rels}>)"

    @cached_property
    def placements(self):
        """``((relator, orientation, offset), word)`` for every reading of every relator."""
        out = []
        for i, r in enumerate(self.relators):
            for sign, w in ((1, r), (-1, inverse(r))):
                for k in range(len(w)):
                    out.append(((i, sign, k), w[k:] + w[:k]))
        return out


def symmetrize(p):
    """All cyclic rotations of all relators and their inverses, as distinct words."""
    return sorted({w for _, w in p.placements})


def pieces(p):
    """Common prefixes of two different relator readings.

    Two readings are different when they start at different places of a
    relator or belong to different relators; a shared prefix counts unless
    it is the whole of both readings.  So a proper power overlaps itself.
    """
    out = set()
    pl = p.placements
    for (k1, w1), (k2, w2) in combinations(pl, 2):
        m = min(len(w1), len(w2))
        t = 0
        while t < m and w1[t] == w2[t]:
            t += 1
        if t == len(w1) == len(w2):
            t -= 1
        for s in range(1, t + 1):
            out.add(w1[:s])
    return out


def min_piece_decomposition(word, piece_set):
    """Fewest pieces concatenating to ``word``, as a list, or ``None``."""
    n = len(word)
    best = [None] * (n + 1)
    best[0] = []
    for i in range(n):
        if best[i] is None:
            continue
        for j in range(i + 1, n + 1):
            w = word[i:j]
            if w not in piece_set:
                break
            if best[j] is None or len(best[i]) + 1 < len(best[j]):
                best[j] = best[i] + [w]
    return best[n]


def check_cp(p, q):
    """No relator reading is a product of fewer than ``q`` pieces."""
    ps = pieces(p)
    for _, w in p.placements:
        dec = min_piece_decomposition(w, ps)
        if dec is not None and len(dec) < q:
            return Verdict.failed(
                f"relator reading is a product of {len(dec)} pieces",
                [(w, tuple(dec))],
                pieces=len(ps),
            )
    return Verdict.passed(pieces=len(ps))


def check_c4(p):
    return check_cp(p, 4)


def t4_violations_triples(p, first_only=False):
    """Triples ``r1, r2, r3`` of relator readings with cancellation in every product.

    ``r_i r_{i+1}`` cancels when the last letter of ``r_i`` is inverse to the
    first letter of ``r_{i+1}``; consecutive readings must not be mutually
    inverse.
    """
    sym = symmetrize(p)
    by_first = {}
    for w in sym:
        by_first.setdefault(w[0], []).append(w)
    out = []
    for r1 in sym:
        for r2 in by_first.get(-r1[-1], ()):
            if r2 == inverse(r1):
                continue
            for r3 in by_first.get(-r2[-1], ()):
                if r3 == inverse(r2) or r3[-1] != -r1[0] or r1 == inverse(r3):
                    continue
                out.append((r1, r2, r3))
                if first_only:
                    return out
    return out


def star_graph(p):
    """Letters as vertices; ``x^-1 -- y`` for each cyclically consecutive pair ``x y``."""
    n = len(p.generators)
    names = {}
    for i in range(1, n + 1):
        names[i] = f"+{i}"
        names[-i] = f"-{i}"
    edges = set()
    for r in p.relators:
        for k in range(len(r)):
            x, y = r[k], r[(k + 1) % len(r)]
            a, b = names[-x], names[y]
            if a != b:
                edges.add(tuple(sorted((a, b))))
    return SimplicialGraph(names.values(), edges)


def _triangles(g):
    out = []
    for u in g.vertices:
        for v in g.neighbors(u):
            if v <= u:
                continue
            for w in g.neighbors(u) & g.neighbors(v):
                if w > v:
                    out.append((u, v, w))
    return out


def check_t4(p, method="triples"):
    """T(4): no triple of relator readings cancelling all round.

    ``method="triples"`` enumerates triples; ``method="star"`` looks for a
    triangle in the star graph.  The two agree.
    """
    if method == "triples":
        bad = t4_violations_triples(p, first_only=True)
        if bad:
            return Verdict.failed("cancelling triple of relator readings", bad)
        return Verdict.passed(method="triples")
    if method == "star":
        tri = _triangles(star_graph(p))
        if tri:
            return Verdict.failed("star graph has a triangle", tri[:1])
        return Verdict.passed(method="star")
    raise ValueError(method)


def piece_census(p):
    """Number of pieces of each length."""
    out = {}
    for w in pieces(p):
        out[len(w)] = out.get(len(w), 0) + 1
    return dict(sorted(out.items()))


# -- polygonal disc diagrams -----------------------------------------------


class PolyDiagram(PlanarMap):
    """Disc diagram with 2-cells of any length."""

    @cached_property
    def nodes(self):
        return tuple(v for v in self.vertices if self.valence(v) != 2)

    def nu(self, fid):
        """Node corners on the boundary of a 2-cell, with multiplicity."""
        nodes = set(self.nodes)
        return sum(1 for d in self.face_darts(fid) if self.origin[d] in nodes)

    def arcs(self):
        """Maximal paths whose interior vertices are not nodes, as vertex walks."""
        nodes = set(self.nodes)
        used = set()
        out = []
        for v in sorted(nodes):
            for d in self.out_darts[v]:
                if self.edge_of(d) in used:
                    continue
                walk = [v]
                e = d
                while True:
                    used.add(self.edge_of(e))
                    w = self.head(e)
                    walk.append(w)
                    if w in nodes:
                        break
                    # valence 2: leave by the other dart
                    nxt = [x for x in self.out_darts[w] if x != self.twin[e]]
                    e = nxt[0]
                out.append(tuple(walk))
        for e0 in self.edges:
            if e0 in used:
                continue
            # a closed arc without nodes
            walk = [self.origin[e0]]
            e = e0
            while True:
                used.add(self.edge_of(e))
                w = self.head(e)
                walk.append(w)
                nxt = [x for x in self.out_darts[w] if x != self.twin[e]]
                e = nxt[0]
                if self.edge_of(e) in used:
                    break
            out.append(tuple(walk))
        return out

    def is_boundary_face(self, fid):
        return any(self.is_outer_dart(self.twin[d]) for d in self.face_darts(fid))

    def is_single_cell(self):
        return self.face_count == 1 and len(self.edges) == len(self.faces[0])


@dataclass(frozen=True)
class PolyCurvature:
    nodes: dict
    faces: dict

    @property
    def total(self):
        return sum(self.nodes.values()) + sum(self.faces.values())


def poly_curvature_report(d):
    """Curvature of nodes (``4 - 2 delta + rho``) and 2-cells (``4 - nu``)."""
    if d.is_single_vertex():
        raise DegenerateDiagramError("single 0-cell")
    nodes = {v: 4 - 2 * d.valence(v) + d.corners(v) for v in d.nodes}
    faces = {f: 4 - d.nu(f) for f in d.face_ids}
    return PolyCurvature(nodes, faces)


def check_diagram_cftf(d):
    """Internal 2-cells have at least 4 nodes and internal nodes valence at least 4."""
    bad = []
    for f in d.face_ids:
        if not d.is_boundary_face(f) and d.nu(f) < 4:
            bad.append(("face", f))
    for v in d.internal_vertices():
        if v in d.nodes and d.valence(v) < 4:
            bad.append(("node", v))
    if bad:
        return Verdict.failed("diagram is not C(4)-T(4)", bad)
    return Verdict.passed()


def positive_sites_cftf(d):
    """Spur tips and boundary 2-cells with fewer than four nodes."""
    if d.is_single_vertex() or d.is_single_cell():
        raise DegenerateDiagramError("single 0-cell or single 2-cell")
    v = check_diagram_cftf(d)
    if not v:
        raise PreconditionError("diagram violates C(4)-T(4): " + repr(v.witnesses))
    tips = [("tip", x) for x in d.vertices if d.valence(x) == 1]
    cells = [("cell", f) for f in d.face_ids if d.is_boundary_face(f) and d.nu(f) < 4]
    return tips + cells


# -- 2-complexes -----------------------------------------------------------


class TwoComplex:
    """Combinatorial 2-complex with named cells.

    ``edges`` maps a 1-cell id to its ``(tail, head)`` 0-cells; ``cells``
    maps a 2-cell id to a closed walk of ``(edge id, +1 | -1)`` steps.
    Cell ids are unique across dimensions.  ``simply_connected`` is a
    certificate set only by constructors that guarantee it.
    """

    def __init__(self, vertices, edges, cells, simply_connected=False):
        self.vertices = tuple(sorted(set(vertices)))
        self.edges = dict(sorted(edges.items()))
        self.cells = {k: tuple((e, int(s)) for e, s in w) for k, w in sorted(cells.items())}
        self.simply_connected = bool(simply_connected)
        ids = list(self.vertices) + list(self.edges) + list(self.cells)
        if len(set(ids)) != len(ids):
            raise GraphError("cell ids must be unique across dimensions")
        vs = set(self.vertices)
        for e, (a, b) in self.edges.items():
            if a not in vs or b not in vs:
                raise GraphError(f"1-cell {e} has an endpoint that is not a 0-cell")
        for f, walk in self.cells.items():
            if not walk:
                raise GraphError(f"2-cell {f} has an empty boundary")
            for (e, s), (e2, s2) in zip(walk, walk[1:] + walk[:1]):
                if e not in self.edges or e2 not in self.edges or s not in (1, -1) or s2 not in (1, -1):
                    raise GraphError(f"2-cell {f} uses an unknown 1-cell or bad orientation")
                if self._head(e, s) != self._tail(e2, s2):
                    raise GraphError(f"boundary of 2-cell {f} is not a closed walk")

    def _tail(self, e, s):
        a, b = self.edges[e]
        return a if s > 0 else b

    def _head(self, e, s):
        a, b = self.edges[e]
        return b if s > 0 else a

    def boundary_vertices(self, f):
        """0-cells along the boundary walk of ``f``, in order."""
        return tuple(self._tail(e, s) for e, s in self.cells[f])

    def boundary_edges(self, f):
        return tuple(e for e, _ in self.cells[f])

    def free_edges(self):
        on = {e for w in self.cells.values() for e, _ in w}
        return [e for e in self.edges if e not in on]

    def is_loop(self, e):
        a, b = self.edges[e]
        return a == b

    def skeleton_is_connected(self):
        if not self.vertices:
            return True
        adj = {v: set() for v in self.vertices}
        for a, b in self.edges.values():
            adj[a].add(b)
            adj[b].add(a)
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            v = stack.pop()
            for w in adj[v] - seen:
                seen.add(w)
                stack.append(w)
        return len(seen) == len(self.vertices)

    def __eq__(self, other):
        if not isinstance(other, TwoComplex):
            return NotImplemented
        return (self.vertices, self.edges, self.cells) == (other.vertices, other.edges, other.cells)

    def __hash__(self):
        return hash((self.vertices, tuple(self.edges.items()), tuple(self.cells.items())))

    def __repr__(self):
        return (f"TwoComplex({len(self.vertices)} 0-cells, {len(self.edges)} 1-cells, "
                f"{len(self.cells)} 2-cells)")

    def renamed(self, prefix):
        v = {x: prefix + x for x in self.vertices}
        e = {k: (v[a], v[b]) for k, (a, b) in self.edges.items()}
        return TwoComplex(
            v.values(),
            {prefix + k: ab for k, ab in e.items()},
            {prefix + f: [(prefix + x, s) for x, s in w] for f, w in self.cells.items()},
            self.simply_connected,
        )

    # trusted constructors ----------------------------------------------

    @classmethod
    def polygon(cls, n, prefix=""):
        """A single ``n``-gon 2-cell on ``n`` distinct 0-cells."""
        vs = [f"{prefix}v{i}" for i in range(n)]
        es = {f"{prefix}e{i}": (vs[i], vs[(i + 1) % n]) for i in range(n)}
        return cls(vs, es, {f"{prefix}F": [(f"{prefix}e{i}", 1) for i in range(n)]}, True)

    @classmethod
    def tree(cls, edges, prefix=""):
        vs = sorted({v for e in edges for v in e})
        es = {f"{prefix}e{i}": tuple(e) for i, e in enumerate(edges)}
        y = cls(vs, es, {}, False)
        acyclic = len(es) == len(vs) - 1 and y.skeleton_is_connected()
        y.simply_connected = acyclic
        return y

    @classmethod
    def grid(cls, rows, cols):
        """``rows`` x ``cols`` square grid, 0-cells ``i_j``."""
        vs = [f"{i}_{j}" for i in range(rows + 1) for j in range(cols + 1)]
        es = {}
        for i in range(rows + 1):
            for j in range(cols + 1):
                if j < cols:
                    es[f"h{i}_{j}"] = (f"{i}_{j}", f"{i}_{j + 1}")
                if i < rows:
                    es[f"v{i}_{j}"] = (f"{i}_{j}", f"{i + 1}_{j}")
        cells = {}
        for i in range(rows):
            for j in range(cols):
                cells[f"F{i}_{j}"] = [(f"h{i}_{j}", 1), (f"v{i}_{j + 1}", 1),
                                      (f"h{i + 1}_{j}", -1), (f"v{i}_{j}", -1)]
        return cls(vs, es, cells, True)

    @classmethod
    def from_square_complex(cls, x):
        """Square complex as a 2-complex; certified when it is quadric."""
        from .complex import is_quadric

        es = {}
        name = {}
        for u, w in x.skeleton.edges:
            k = f"{u}--{w}"
            es[k] = (u, w)
            name[(u, w)] = (k, 1)
            name[(w, u)] = (k, -1)
        cells = {}
        for sq in x.squares:
            k = "sq." + ".".join(sq)
            cells[k] = [name[(sq[i], sq[(i + 1) % 4])] for i in range(4)]
        certified = x.skeleton.is_connected() and bool(is_quadric(x))
        return cls(x.vertices, es, cells, certified)

    def glue(self, other, vertex_map):
        """Union with ``other`` after renaming its 0-cells by ``vertex_map``.

        1-cells of ``other`` whose (renamed) endpoints already carry a 1-cell
        of ``self`` are identified with it.  The identified part must be a
        tree for the result to keep the simple-connectivity certificate.
        """
        vm = {v: vertex_map.get(v, v) for v in other.vertices}
        by_ends = {}
        for k, (a, b) in self.edges.items():
            by_ends.setdefault((a, b), k)
        emap = {}
        new_edges = dict(self.edges)
        shared = []
        for k, (a, b) in other.edges.items():
            a2, b2 = vm[a], vm[b]
            if (a2, b2) in by_ends:
                emap[k] = (by_ends[(a2, b2)], 1)
                shared.append((a2, b2))
            elif (b2, a2) in by_ends:
                emap[k] = (by_ends[(b2, a2)], -1)
                shared.append((b2, a2))
            else:
                if k in new_edges:
                    raise GraphError(f"1-cell id {k} clashes")
                new_edges[k] = (a2, b2)
                emap[k] = (k, 1)
        cells = dict(self.cells)
        for f, walk in other.cells.items():
            if f in cells:
                raise GraphError(f"2-cell id {f} clashes")
            cells[f] = [(emap[e][0], s * emap[e][1]) for e, s in walk]
        common = set(vm.values()) & set(self.vertices)
        inter = TwoComplex.tree(shared) if shared else None
        tree_ok = (
            (len(common) == 1 and not shared)
            or (inter is not None and inter.simply_connected and set(inter.vertices) == common)
        )
        return TwoComplex(
            set(self.vertices) | set(vm.values()),
            new_edges,
            cells,
            self.simply_connected and other.simply_connected and tree_ok,
        )


def presentation_complex(p):
    """One 0-cell, a loop per generator and a 2-cell per relator."""
    es = {g: ("o", "o") for g in p.generators}
    cells = {}
    for i, r in enumerate(p.relators):
        cells[f"r{i}"] = [(p.generators[abs(x) - 1], 1 if x > 0 else -1) for x in r]
    return TwoComplex(["o"], es, cells, False)


def complex_presentation(y):
    """1-cells as generators, 2-cell boundaries as relators."""
    gens = list(y.edges)
    idx = {e: i + 1 for i, e in enumerate(gens)}
    rels = [tuple(s * idx[e] for e, s in w) for _, w in sorted(y.cells.items())]
    return Presentation(gens, rels)


def check_complex_cftf(y):
    """C(4) and T(4) for a 2-complex read as the presentation of its cells."""
    p = complex_presentation(y)
    c4 = check_c4(p)
    if not c4:
        return c4
    return check_t4(p)


def check_embedded_cells(y):
    """Each 2-cell boundary visits distinct 0-cells and distinct 1-cells."""
    bad = []
    for f in y.cells:
        vs = y.boundary_vertices(f)
        es = y.boundary_edges(f)
        if len(set(vs)) != len(vs) or len(set(es)) != len(es):
            bad.append(f)
    if bad:
        return Verdict.failed("2-cells with non-embedded boundary", bad)
    return Verdict.passed()


def _cell_closure(y, f):
    return frozenset(y.boundary_vertices(f)), frozenset(y.boundary_edges(f))


def _is_path(y, vs, es):
    """Whether the subcomplex with 0-cells ``vs`` and 1-cells ``es`` is a nonempty path."""
    if not vs:
        return False
    deg = {v: 0 for v in vs}
    for e in es:
        a, b = y.edges[e]
        if a == b:
            return False
        deg[a] += 1
        deg[b] += 1
    if len(es) != len(vs) - 1 or any(d > 2 for d in deg.values()):
        return False
    adj = {v: set() for v in vs}
    for e in es:
        a, b = y.edges[e]
        adj[a].add(b)
        adj[b].add(a)
    start = next(iter(vs))
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in adj[v] - seen:
            seen.add(w)
            stack.append(w)
    return len(seen) == len(vs)


def cell_intersection(y, f, g):
    vf, ef = _cell_closure(y, f)
    vg, eg = _cell_closure(y, g)
    return vf & vg, ef & eg


def check_strong_helly(y, override=False):
    """Strong Helly for the 2-cells of a simply connected 2-complex with embedded cells.

    For every two intersecting cells the intersection is a path; for every
    pairwise intersecting triple the triple intersection is nonempty and
    one of the pairwise intersections lies in the third cell.  Witnesses
    are ``("path", f, g)``, ``("helly", f, g, h)`` and ``("strong", f, g, h)``.
    """
    if not y.simply_connected and not override:
        raise PreconditionError("no simple-connectivity certificate (pass override=True to force)")
    emb = check_embedded_cells(y)
    if not emb:
        raise PreconditionError(f"non-embedded 2-cells {emb.witnesses}")
    names = sorted(y.cells)
    closure = {f: _cell_closure(y, f) for f in names}
    meet = {}
    bad = []
    for f, g in combinations(names, 2):
        vs = closure[f][0] & closure[g][0]
        es = closure[f][1] & closure[g][1]
        if vs:
            meet[(f, g)] = (vs, es)
            if not _is_path(y, vs, es):
                bad.append(("path", f, g))
    for f, g, h in combinations(names, 3):
        if (f, g) not in meet or (f, h) not in meet or (g, h) not in meet:
            continue
        if not closure[f][0] & closure[g][0] & closure[h][0]:
            bad.append(("helly", f, g, h))
            continue
        ok = False
        for (a, b), c in (((f, g), h), ((f, h), g), ((g, h), f)):
            vs, es = meet[(a, b)]
            if vs <= closure[c][0] and es <= closure[c][1]:
                ok = True
                break
        if not ok:
            bad.append(("strong", f, g, h))
    if bad:
        return Verdict.failed("Helly-type conditions fail", bad)
    return Verdict.passed(pairs=len(meet))
