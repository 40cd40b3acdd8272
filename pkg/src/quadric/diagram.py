"""Planar disc diagrams as combinatorial maps.

A map is stored as three dart-indexed arrays: ``origin`` (vertex name),
``twin`` (the reverse dart) and ``phi`` (next dart around the face on the
left).  The rotation at a vertex is ``sigma = phi . twin`` and vertices are
its orbits.  One face is distinguished as the outer face through a base
dart; reading that face from the base dart gives the boundary path.

Curvature is kept in integer quarter-pi units: a vertex of valence ``delta``
meeting ``rho`` corners of 2-cells has curvature ``4 - 2*delta + rho``.
"""

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from math import comb

from .errors import (
    DegenerateDiagramError,
    DiagramError,
    NotLocallyQuadricError,
    PathologyError,
    PreconditionError,
    UnknownVertexError,
)
from .graph import canonical_cycle


class PlanarMap:
    """Connected genus-0 combinatorial map with a distinguished outer face.

    ``lone`` names the vertex of the dartless one-vertex map.  ``labels``
    optionally sends vertex names to vertices of a target complex.
    """

    def __init__(self, origin, twin, phi, outer=None, labels=None, lone=None):
        self.origin = tuple(origin)
        self.twin = tuple(twin)
        self.phi = tuple(phi)
        n = len(self.origin)
        if len(self.twin) != n or len(self.phi) != n:
            raise DiagramError("origin, twin and phi must have equal length")
        if n == 0:
            if outer is not None:
                raise DiagramError("a dartless map has no outer dart")
            self.outer = None
            self.lone = "v" if lone is None else lone
        else:
            if outer is None:
                outer = 0
            self.outer = outer
            self.lone = None
        self.labels = None if labels is None else dict(labels)
        self._validate()

    # -- validation ------------------------------------------------------

    def _validate(self):
        n = len(self.origin)
        twin, phi = self.twin, self.phi
        if n % 2:
            raise DiagramError("odd number of darts")
        for d in range(n):
            t = twin[d]
            if not 0 <= t < n or t == d or twin[t] != d:
                raise DiagramError(f"twin is not a fixed-point-free involution at dart {d}")
        if sorted(phi) != list(range(n)):
            raise DiagramError("phi is not a permutation of the darts")
        for d in range(n):
            if self.origin[phi[d]] != self.origin[twin[d]]:
                raise DiagramError(f"face successor of dart {d} does not start at its head")
        if n and not 0 <= self.outer < n:
            raise DiagramError("outer dart out of range")
        # each rotation orbit carries one name, and names are not shared
        seen = {}
        for orb in self._orbits(lambda d: phi[twin[d]]):
            names = {self.origin[d] for d in orb}
            if len(names) != 1:
                raise DiagramError(f"rotation orbit mixes vertex names {sorted(names)}")
            (name,) = names
            if name in seen:
                raise DiagramError(f"vertex name {name!r} labels two rotation orbits")
            seen[name] = orb
        if n:
            comp = {0}
            stack = [0]
            while stack:
                d = stack.pop()
                for e in (twin[d], phi[d]):
                    if e not in comp:
                        comp.add(e)
                        stack.append(e)
            if len(comp) != n:
                raise DiagramError("map is not connected")
        v = len(self.vertices)
        e = n // 2
        f = len(self._face_orbits)
        if n and v - e + f != 2:
            raise DiagramError(f"map is not planar (V-E+F = {v - e + f})")
        if self.labels is not None and set(self.labels) != set(self.vertices):
            raise DiagramError("labels must cover exactly the diagram vertices")

    def _orbits(self, step):
        n = len(self.origin)
        seen = [False] * n
        out = []
        for d in range(n):
            if seen[d]:
                continue
            orb = []
            e = d
            while not seen[e]:
                seen[e] = True
                orb.append(e)
                e = step(e)
            out.append(tuple(orb))
        return out

    # -- combinatorial structure ------------------------------------------

    @cached_property
    def _face_orbits(self):
        return self._orbits(lambda d: self.phi[d])

    @cached_property
    def face_of(self):
        """Dart -> face id, the face id being the least dart of the face."""
        out = [0] * len(self.origin)
        for orb in self._face_orbits:
            m = min(orb)
            for d in orb:
                out[d] = m
        return tuple(out)

    @cached_property
    def outer_face_id(self):
        return None if self.outer is None else self.face_of[self.outer]

    @cached_property
    def faces(self):
        """Inner faces as dart cycles starting at their least dart, sorted."""
        out = []
        for orb in self._face_orbits:
            m = min(orb)
            if m == self.outer_face_id:
                continue
            i = orb.index(m)
            out.append(orb[i:] + orb[:i])
        return tuple(sorted(out))

    @cached_property
    def face_ids(self):
        return tuple(f[0] for f in self.faces)

    def face_darts(self, fid):
        for f in self.faces:
            if f[0] == fid:
                return f
        raise DiagramError(f"no inner face {fid}")

    def face_vertices(self, fid):
        return tuple(self.origin[d] for d in self.face_darts(fid))

    @cached_property
    def vertices(self):
        if self.lone is not None:
            return (self.lone,)
        return tuple(sorted(set(self.origin)))

    @cached_property
    def out_darts(self):
        """Vertex -> outgoing darts in rotation order, from the least dart."""
        out = {}
        if self.lone is not None:
            return {self.lone: ()}
        for orb in self._orbits(lambda d: self.phi[self.twin[d]]):
            m = orb.index(min(orb))
            out[self.origin[orb[0]]] = orb[m:] + orb[:m]
        return out

    def head(self, d):
        return self.origin[self.twin[d]]

    def sigma(self, d):
        return self.phi[self.twin[d]]

    @cached_property
    def edges(self):
        """Edge ids (the lesser dart of each twin pair), sorted."""
        return tuple(d for d in range(len(self.origin)) if d < self.twin[d])

    def edge_of(self, d):
        return min(d, self.twin[d])

    def edge_vertices(self, e):
        return (self.origin[e], self.head(e))

    def is_outer_dart(self, d):
        return self.face_of[d] == self.outer_face_id

    @cached_property
    def boundary_darts(self):
        if self.outer is None:
            return ()
        out = [self.outer]
        d = self.phi[self.outer]
        while d != self.outer:
            out.append(d)
            d = self.phi[d]
        return tuple(out)

    @cached_property
    def boundary_path(self):
        """Vertices read along the outer face from the base dart (cyclic)."""
        if self.lone is not None:
            return (self.lone,)
        return tuple(self.origin[d] for d in self.boundary_darts)

    @property
    def boundary_length(self):
        return len(self.boundary_darts)

    @property
    def face_count(self):
        return len(self.faces)

    def _check(self, v):
        if v not in self.out_darts:
            raise UnknownVertexError(v)

    def valence(self, v):
        self._check(v)
        return len(self.out_darts[v])

    def corners(self, v):
        """Number of corners of inner faces at ``v``."""
        self._check(v)
        return sum(1 for d in self.out_darts[v] if not self.is_outer_dart(d))

    def is_boundary_vertex(self, v):
        self._check(v)
        if self.lone is not None:
            return True
        return any(self.is_outer_dart(d) for d in self.out_darts[v])

    def internal_vertices(self):
        return [v for v in self.vertices if not self.is_boundary_vertex(v)]

    def boundary_vertices(self):
        return [v for v in self.vertices if self.is_boundary_vertex(v)]

    def is_single_vertex(self):
        return self.lone is not None

    @cached_property
    def neighbours(self):
        return {
            v: frozenset(self.head(d) for d in ds) for v, ds in self.out_darts.items()
        }

    def distances_from(self, v):
        self._check(v)
        dist = {v: 0}
        queue = [v]
        for u in queue:
            for w in sorted(self.neighbours[u]):
                if w not in dist:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return dist

    @cached_property
    def _all_distances(self):
        return {v: self.distances_from(v) for v in self.vertices}

    def distance(self, u, v):
        self._check(u)
        self._check(v)
        return self._all_distances[u][v]

    def dart_between(self, u, v):
        """The unique dart from ``u`` to ``v``; ambiguous or missing is an error."""
        self._check(u)
        found = [d for d in self.out_darts[u] if self.head(d) == v]
        if len(found) != 1:
            what = "no edge" if not found else "several edges"
            raise DiagramError(f"{what} between {u!r} and {v!r}")
        return found[0]

    # -- equality, construction -------------------------------------------

    def _key(self):
        return (self.origin, self.twin, self.phi, self.outer, self.lone,
                None if self.labels is None else tuple(sorted(self.labels.items())))

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return (f"{type(self).__name__}({len(self.vertices)} vertices, "
                f"{len(self.edges)} edges, {self.face_count} faces)")

    def with_labels(self, labels):
        return type(self)(self.origin, self.twin, self.phi, self.outer, labels, self.lone)

    @classmethod
    def single_vertex(cls, name="v", label=None):
        return cls((), (), (), None, None if label is None else {name: label}, name)

    @classmethod
    def from_faces(cls, faces, edges=(), start=None, labels=None):
        """Assemble a map from inner faces given as vertex cycles plus loose edges.

        Vertex names must be distinct within each face and each vertex pair
        may carry at most one edge.  Faces are reoriented coherently across
        shared edges.  Around a cut vertex the pieces are placed in order of
        their least dart.  The base dart is the least outer dart leaving
        ``start`` (default: the least boundary vertex).
        """
        faces = [tuple(f) for f in faces]
        pairs = set()
        for f in faces:
            if len(set(f)) != len(f) or len(f) < 2:
                raise DiagramError(f"face {f} must be an embedded cycle")
            for i in range(len(f)):
                pairs.add(frozenset((f[i], f[(i + 1) % len(f)])))
        for u, w in edges:
            if u == w:
                raise DiagramError("loops are not supported here")
            pairs.add(frozenset((u, w)))
        if not pairs:
            raise DiagramError("no edges; use single_vertex")
        dart = {}
        origin = []
        for p in sorted(tuple(sorted(p)) for p in pairs):
            u, w = p
            dart[(u, w)] = len(origin)
            origin.append(u)
            dart[(w, u)] = len(origin)
            origin.append(w)
        n = len(origin)
        twin = [d ^ 1 for d in range(n)]

        # coherent orientation, one face-adjacency component at a time
        by_edge = {}
        for i, f in enumerate(faces):
            for j in range(len(f)):
                by_edge.setdefault(frozenset((f[j], f[(j + 1) % len(f)])), []).append(i)
        for p, fs in by_edge.items():
            if len(fs) > 2:
                raise DiagramError(f"edge {sorted(p)} lies on more than two faces")
        oriented = [None] * len(faces)
        for root in range(len(faces)):
            if oriented[root] is not None:
                continue
            oriented[root] = faces[root]
            stack = [root]
            while stack:
                i = stack.pop()
                f = oriented[i]
                directed = {(f[j], f[(j + 1) % len(f)]) for j in range(len(f))}
                for j in range(len(f)):
                    for k in by_edge[frozenset((f[j], f[(j + 1) % len(f)]))]:
                        if k == i:
                            continue
                        g = faces[k]
                        gd = {(g[t], g[(t + 1) % len(g)]) for t in range(len(g))}
                        want = g if not (gd & directed) else g[::-1]
                        if oriented[k] is None:
                            oriented[k] = want
                            stack.append(k)
                        elif oriented[k] != want:
                            raise DiagramError("faces cannot be oriented coherently")
        phi = [None] * n
        for f in oriented:
            m = len(f)
            for j in range(m):
                d = dart[(f[j], f[(j + 1) % m])]
                if phi[d] is not None:
                    raise DiagramError("two faces traverse the same edge in one direction")
                phi[d] = dart[(f[(j + 1) % m], f[(j + 2) % m])]
        inner = [p is not None for p in phi]
        _complete_outer(origin, twin, phi, inner)
        outer_darts = [d for d in range(n) if not inner[d]]
        if not outer_darts:
            raise DiagramError("faces close up into a sphere")
        if start is None:
            start = min(origin[d] for d in outer_darts)
        cands = [d for d in outer_darts if origin[d] == start]
        if not cands:
            raise DiagramError(f"{start!r} is not on the boundary")
        return cls(origin, twin, phi, min(cands), labels)


def _complete_outer(origin, twin, phi, inner):
    """Fill ``phi`` on darts not covered by inner faces."""
    out = {}
    for d, v in enumerate(origin):
        out.setdefault(v, []).append(d)
    for v, ds in out.items():
        known = {}
        for y in ds:
            if inner[twin[y]]:
                known[y] = phi[twin[y]]
        images = set(known.values())
        starts = sorted(y for y in ds if y not in images)
        if not starts:
            continue
        chains = []
        covered = 0
        for s in starts:
            y = s
            covered += 1
            while y in known:
                y = known[y]
                covered += 1
            chains.append((s, y))
        if covered != len(ds):
            raise DiagramError(f"vertex {v!r} is not a disc point")
        for i, (_, end) in enumerate(chains):
            phi[twin[end]] = chains[(i + 1) % len(chains)][0]


class DiscDiagram(PlanarMap):
    """Disc diagram whose inner faces are all squares."""

    def _validate(self):
        super()._validate()
        for f in self.faces:
            if len(f) != 4:
                raise DiagramError(f"inner face of length {len(f)}; squares only")

    @property
    def square_count(self):
        return len(self.faces)


# -- builders --------------------------------------------------------------


def grid_diagram(rows, cols):
    """``rows`` x ``cols`` grid of squares on vertices ``i_j``."""
    if rows < 1 or cols < 1:
        raise ValueError("grid dimensions must be positive")
    faces = [
        (f"{i}_{j}", f"{i}_{j + 1}", f"{i + 1}_{j + 1}", f"{i + 1}_{j}")
        for i in range(rows)
        for j in range(cols)
    ]
    return DiscDiagram.from_faces(faces, start="0_0")


def path_diagram(length, prefix="p"):
    """A tree diagram: a path with ``length`` edges."""
    if length == 0:
        return DiscDiagram.single_vertex(f"{prefix}0")
    names = [f"{prefix}{i}" for i in range(length + 1)]
    return DiscDiagram.from_faces([], list(zip(names, names[1:])), start=names[0])


def tree_diagram(edges, start=None):
    return DiscDiagram.from_faces([], edges, start=start)


def three_squares_diagram():
    """Three squares around an internal vertex ``v`` of valence 3."""
    faces = [("v", "a0", "b0", "a1"), ("v", "a1", "b1", "a2"), ("v", "a2", "b2", "a0")]
    return DiscDiagram.from_faces(faces, start="a0")


# -- mutable surgery workspace ----------------------------------------------


class _Workspace:
    """Mutable dart soup used by gluing and by the reduction surgeries.

    ``name[d]`` is the vertex name at the origin of ``d`` before the current
    edit; ``lab[d]`` its label in the target complex (or ``None``).
    """

    def __init__(self):
        self.twin = {}
        self.phi = {}
        self.name = {}
        self.lab = {}
        self._next = 0

    @classmethod
    def from_map(cls, d):
        ws = cls()
        for i in range(len(d.origin)):
            ws.twin[i] = d.twin[i]
            ws.phi[i] = d.phi[i]
            ws.name[i] = d.origin[i]
            ws.lab[i] = None if d.labels is None else d.labels[d.origin[i]]
        ws._next = len(d.origin)
        return ws

    def new_edge(self, u, w, lu=None, lw=None):
        a, b = self._next, self._next + 1
        self._next += 2
        self.twin[a], self.twin[b] = b, a
        self.name[a], self.name[b] = u, w
        self.lab[a], self.lab[b] = lu, lw
        return a, b

    def head_lab(self, d):
        return self.lab[self.twin[d]]

    def sigma(self, d):
        return self.phi[self.twin[d]]

    def sigma_inv(self, d):
        # phi^-1 then twin
        for e, p in self.phi.items():
            if p == d:
                return self.twin[e]
        raise DiagramError("broken rotation")

    def face(self, d):
        out = [d]
        e = self.phi[d]
        while e != d:
            out.append(e)
            e = self.phi[e]
        return out

    def drop(self, darts):
        for d in darts:
            for table in (self.twin, self.phi, self.name, self.lab):
                table.pop(d, None)

    def absorb(self, other):
        """Move all darts of ``other`` into this workspace; returns the id offset."""
        off = self._next
        for d in other.twin:
            self.twin[d + off] = other.twin[d] + off
            self.phi[d + off] = other.phi[d] + off
            self.name[d + off] = other.name[d]
            self.lab[d + off] = other.lab[d]
        self._next += other._next
        return off

    def prune(self, keep):
        comp = {keep}
        stack = [keep]
        while stack:
            d = stack.pop()
            for e in (self.twin[d], self.phi[d]):
                if e not in comp:
                    comp.add(e)
                    stack.append(e)
        self.drop([d for d in list(self.twin) if d not in comp])

    def assemble(self, outer, cls, labelled=True, lone=None):
        """Renumber darts, name rotation orbits and build a map of type ``cls``."""
        if not self.twin:
            name = lone if lone is not None else "v"
            return cls.single_vertex(name, lone if labelled else None)
        ids = sorted(self.twin)
        idx = {d: i for i, d in enumerate(ids)}
        seen = set()
        orbits = []
        for d in ids:
            if d in seen:
                continue
            orb = []
            e = d
            while e not in seen:
                seen.add(e)
                orb.append(e)
                e = self.sigma(e)
            orbits.append(orb)
        # a merged orbit keeps its least old name; splits get numeric suffixes
        base = [min(self.name[d] for d in orb) for orb in orbits]
        taken = set()
        groups = {}
        for i, b in enumerate(base):
            groups.setdefault(b, []).append(i)
        names = [None] * len(orbits)
        for b in sorted(groups):
            names[groups[b][0]] = b
            taken.add(b)
        for b in sorted(groups):
            k = 1
            for i in groups[b][1:]:
                while f"{b}.{k}" in taken or f"{b}.{k}" in groups:
                    k += 1
                names[i] = f"{b}.{k}"
                taken.add(names[i])
        origin = [None] * len(ids)
        labels = {}
        for orb, nm in zip(orbits, names):
            labs = {self.lab[d] for d in orb}
            if labelled and len(labs) != 1:
                raise DiagramError(f"vertex {nm!r} receives inconsistent labels {labs}")
            for d in orb:
                origin[idx[d]] = nm
            if labelled:
                (labels[nm],) = labs
        twin = [idx[self.twin[d]] for d in ids]
        phi = [idx[self.phi[d]] for d in ids]
        return cls(origin, twin, phi, idx[outer], labels if labelled else None)


# -- filling walks (used by the square-complex filler) ----------------------


def _fill_piece(kind, walk):
    """Workspace and outer dart list for a base case of the filling recursion."""
    ws = _Workspace()
    if kind == "spur":
        a, b = walk
        x, y = ws.new_edge(a, b, a, b)
        ws.phi[x], ws.phi[y] = y, x
        return ws, [x, y]
    if kind == "square":
        n = len(walk)
        outer = []
        inner = []
        for i in range(n):
            u, w = walk[i], walk[(i + 1) % n]
            x, y = ws.new_edge(u, w, u, w)
            outer.append(x)
            inner.append(y)
        for i in range(n):
            ws.phi[outer[i]] = outer[(i + 1) % n]
            # inner dart i runs w_{i+1} -> w_i; its successor runs w_i -> w_{i-1}
            ws.phi[inner[i]] = inner[(i - 1) % n]
        return ws, outer
    raise ValueError(kind)


def _glue(ws1, outer1, ws2, outer2, plen, glen):
    """Glue along a path: ``outer1`` = P then gamma^-1, ``outer2`` = gamma then Q."""
    ws = ws1
    off = ws.absorb(ws2)
    outer2 = [d + off for d in outer2]
    k = glen
    drop = []
    for t in range(k):
        e1 = outer1[plen + t]
        e2 = outer2[k - 1 - t]
        a, b = ws.twin[e1], ws.twin[e2]
        ws.twin[a], ws.twin[b] = b, a
        drop += [e1, e2]
    ring = outer1[:plen] + outer2[k:]
    for i, d in enumerate(ring):
        ws.phi[d] = ring[(i + 1) % len(ring)]
    ws.drop(drop)
    return ws, ring


def fill_walk(walk, shortcut, is_square):
    """Diagram with boundary ``walk`` (a cyclic tuple of target vertices).

    ``shortcut(walk)`` returns ``(i, j, path)`` with ``path`` a geodesic from
    ``walk[i]`` to ``walk[j]`` strictly shorter than both boundary arcs, or
    ``None`` when none exists.  ``is_square(walk)`` says whether an embedded
    4-cycle bounds a square.  Returns a labelled :class:`DiscDiagram`.
    """
    walk = tuple(walk)
    if len(walk) == 0:
        raise DegenerateDiagramError("empty walk")
    if len(walk) == 1:
        return DiscDiagram.single_vertex(walk[0], walk[0])
    ws, ring = _fill_rec(walk, shortcut, is_square)
    return ws.assemble(ring[0], DiscDiagram)


def _fill_rec(walk, shortcut, is_square):
    n = len(walk)
    if n == 2:
        return _fill_piece("spur", walk)
    if n == 4 and len(set(walk)) == 4:
        if not is_square(walk):
            raise NotLocallyQuadricError(f"embedded 4-cycle {walk} bounds no square", [walk])
        return _fill_piece("square", walk)
    cut = shortcut(walk)
    if cut is None:
        raise NotLocallyQuadricError(f"closed walk {walk} admits no shortcut", [walk])
    i, j, gamma = cut
    k = len(gamma) - 1
    w1 = walk[i:j] + tuple(reversed(gamma))[:-1]
    w2 = tuple(gamma[:-1]) + walk[j:] + walk[:i]
    ws1, o1 = _fill_rec(w1, shortcut, is_square)
    ws2, o2 = _fill_rec(w2, shortcut, is_square)
    ws, ring = _glue(ws1, o1, ws2, o2, j - i, k)
    # ring starts at walk[i]; rotate so that it starts at walk[0]
    r = (n - i) % n
    return ws, ring[r:] + ring[:r]


# -- curvature ---------------------------------------------------------------


@dataclass(frozen=True)
class CurvatureReport:
    kappa: dict
    delta: dict
    rho: dict

    @property
    def total(self):
        return sum(self.kappa.values())


def vertex_curvature(d, v):
    """Curvature of ``v`` in quarter-pi units."""
    return 4 - 2 * d.valence(v) + d.corners(v)


def curvature_report(d):
    delta = {v: d.valence(v) for v in d.vertices}
    rho = {v: d.corners(v) for v in d.vertices}
    kappa = {v: 4 - 2 * delta[v] + rho[v] for v in d.vertices}
    return CurvatureReport(kappa, delta, rho)


def _require_darts(d):
    if d.is_single_vertex():
        raise DegenerateDiagramError("single-vertex diagram")


def gauss_bonnet_total(d):
    _require_darts(d)
    return sum(vertex_curvature(d, v) for v in d.vertices)


def positive_boundary_sites(d):
    _require_darts(d)
    return [v for v in d.boundary_vertices() if vertex_curvature(d, v) > 0]


def is_cat0_disc(d):
    """Every internal vertex meets at least four squares."""
    return all(d.corners(v) >= 4 for v in d.internal_vertices())


def isoperimetric_check(d):
    """Square count is below ``C(n, 2)`` for boundary length ``n``."""
    return d.face_count < comb(d.boundary_length, 2)


# -- dual curves -------------------------------------------------------------


@dataclass(frozen=True)
class DualCurve:
    """A dual curve: the edges it crosses and the squares it runs through, in order.

    ``endpoints`` holds the first and last edges for a curve that reaches the
    boundary (equal for a curve through a single free edge) and is empty for
    a closed curve.
    """

    index: int
    edges: tuple
    squares: tuple
    endpoints: tuple
    closed: bool = False

    def __len__(self):
        return len(self.squares)


@dataclass
class _DualData:
    curves: list
    curve_of_edge: dict
    # face id -> (curve through darts 0/2, curve through darts 1/3)
    face_curves: dict = field(default_factory=dict)


def _dual_data(d):
    cached = d.__dict__.get("_dual_cache")
    if cached is not None:
        return cached
    links = []
    inc = {e: [] for e in d.edges}
    for f in d.faces:
        for a, b in ((f[0], f[2]), (f[1], f[3])):
            li = len(links)
            links.append((d.edge_of(a), d.edge_of(b), f[0]))
            inc[d.edge_of(a)].append(li)
            inc[d.edge_of(b)].append(li)
    # components by union-find over links
    parent = {e: e for e in d.edges}

    def find(e):
        while parent[e] != e:
            parent[e] = parent[parent[e]]
            e = parent[e]
        return e

    for a, b, _ in links:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    comps = {}
    for e in d.edges:
        comps.setdefault(find(e), []).append(e)
    curves = []
    curve_of_edge = {}
    for idx, root in enumerate(sorted(comps)):
        members = comps[root]
        ends = [e for e in members if len(inc[e]) < 2]
        start = min(ends) if ends else min(members)
        order = [start]
        squares = []
        used = set()
        cur = start
        while True:
            nxt = [li for li in sorted(inc[cur], key=lambda li: links[li][2]) if li not in used]
            if not nxt:
                break
            li = nxt[0]
            used.add(li)
            a, b, f = links[li]
            squares.append(f)
            cur = b if a == cur else a
            order.append(cur)
        closed = not ends
        if closed:
            order.pop()
        curve = DualCurve(idx, tuple(order), tuple(squares),
                          () if closed else (order[0], order[-1]), closed)
        curves.append(curve)
        for e in members:
            curve_of_edge[e] = idx
    data = _DualData(curves, curve_of_edge)
    for f in d.faces:
        data.face_curves[f[0]] = (curve_of_edge[d.edge_of(f[0])], curve_of_edge[d.edge_of(f[1])])
    d.__dict__["_dual_cache"] = data
    return data


def dual_curves(d):
    return list(_dual_data(d).curves)


@dataclass(frozen=True)
class PathologyReport:
    nonogons: tuple = ()
    monogons: tuple = ()
    bigons: tuple = ()
    triangles: tuple = ()

    @property
    def empty(self):
        return not (self.nonogons or self.monogons or self.bigons or self.triangles)

    def __bool__(self):
        return not self.empty


def detect_pathologies(d):
    """Closed curves, self-crossing curves, and pairs/triples of curves crossing badly.

    Witnesses: nonogons and monogons by curve index (monogons with the square
    where the curve meets itself), bigons as ``(c1, c2, squares)``, triangles
    as ``(c1, c2, c3)``.
    """
    data = _dual_data(d)
    nonogons = tuple(c.index for c in data.curves if c.closed)
    monogons = []
    crossings = {}
    for f, (c1, c2) in sorted(data.face_curves.items()):
        if c1 == c2:
            monogons.append((c1, f))
        else:
            crossings.setdefault((min(c1, c2), max(c1, c2)), []).append(f)
    bigons = tuple((a, b, tuple(fs)) for (a, b), fs in sorted(crossings.items()) if len(fs) >= 2)
    cross = set(crossings)
    nodes = sorted({c for p in cross for c in p})
    triangles = tuple(
        (a, b, c)
        for a, b, c in combinations(nodes, 3)
        if (a, b) in cross and (b, c) in cross and (a, c) in cross
    )
    return PathologyReport(nonogons, tuple(monogons), bigons, triangles)


def curve_sides(d, curve):
    """Vertex components left after deleting the edges the curve crosses."""
    idx = curve.index if isinstance(curve, DualCurve) else curve
    data = _dual_data(d)
    cut = {e for e, c in data.curve_of_edge.items() if c == idx}
    comp = {}
    sides = []
    for v in d.vertices:
        if v in comp:
            continue
        k = len(sides)
        comp[v] = k
        members = [v]
        for u in members:
            for dd in d.out_darts[u]:
                if d.edge_of(dd) in cut:
                    continue
                w = d.head(dd)
                if w not in comp:
                    comp[w] = k
                    members.append(w)
        sides.append(frozenset(members))
    return sides


def _require_clean(d):
    if not is_cat0_disc(d):
        raise PreconditionError("diagram has an internal vertex meeting fewer than four squares")
    rep = detect_pathologies(d)
    if not rep.empty:
        raise PathologyError("dual curves are pathological", rep)


def separation_distance(d, u, v):
    """Number of dual curves with ``u`` and ``v`` on different sides."""
    d._check(u)
    d._check(v)
    _require_clean(d)
    if "_sides_cache" not in d.__dict__:
        table = []
        for c in _dual_data(d).curves:
            side = {}
            for k, s in enumerate(curve_sides(d, c)):
                for w in s:
                    side[w] = k
            table.append(side)
        d.__dict__["_sides_cache"] = table
    return sum(1 for side in d.__dict__["_sides_cache"] if side[u] != side[v])


def geodesic_crossing_check(d, path):
    """True iff the walk crosses no dual curve twice."""
    path = list(path)
    if not path:
        raise DiagramError("empty walk")
    for v in path:
        d._check(v)
    data = _dual_data(d)
    seen = set()
    for u, w in zip(path, path[1:]):
        c = data.curve_of_edge[d.edge_of(d.dart_between(u, w))]
        if c in seen:
            return False
        seen.add(c)
    return True


def _interval_convex(d, vertices):
    s = set(vertices)
    for a, b in combinations(sorted(s), 2):
        dab = d.distance(a, b)
        da, db = d._all_distances[a], d._all_distances[b]
        for w in d.vertices:
            if w not in s and da[w] + db[w] == dab:
                return False
    return True


def carrier(d, curve):
    """The squares a boundary-to-boundary dual curve runs through, as a grid diagram.

    Checks that they form an embedded 1 x n grid whose vertex set is convex
    in the 1-skeleton of ``d``.
    """
    if not is_cat0_disc(d):
        raise PreconditionError("carrier needs a diagram with no internal vertex of low degree")
    if not isinstance(curve, DualCurve):
        curve = _dual_data(d).curves[curve]
    if curve.closed:
        raise PathologyError("closed dual curve has no carrier", curve)
    rails = [d.edge_vertices(curve.edges[0])]
    faces = []
    for e, f in zip(curve.edges[1:], curve.squares):
        p, q = rails[-1]
        fd = d.face_darts(f)
        hits = [k for k, t in enumerate(fd) if {d.origin[t], d.head(t)} == {p, q}]
        if len(hits) != 1:
            raise PathologyError("curve squares do not form a ladder", curve)
        k = hits[0]
        s_, t_ = d.origin[fd[k]], d.head(fd[k])
        image = {t_: d.head(fd[(k + 1) % 4]), s_: d.origin[fd[(k + 3) % 4]]}
        nxt = (image[p], image[q])
        if {d.edge_of(fd[(k + 2) % 4])} != {e} or set(nxt) != set(d.edge_vertices(e)):
            raise PathologyError("curve squares do not form a ladder", curve)
        faces.append((p, q, nxt[1], nxt[0]))
        rails.append(nxt)
    verts = [v for r in rails for v in r]
    if len(set(verts)) != len(verts) or len(set(curve.squares)) != len(curve.squares):
        raise PathologyError("carrier is not an embedded ladder", curve)
    if not _interval_convex(d, verts):
        raise PathologyError("carrier is not convex", curve)
    labels = None if d.labels is None else {v: d.labels[v] for v in verts}
    if not faces:
        return DiscDiagram.from_faces([], [rails[0]], start=rails[0][0], labels=labels)
    return DiscDiagram.from_faces(faces, start=rails[0][0], labels=labels)


@dataclass(frozen=True)
class Ladder:
    """A 1 x n grid mapped into a diagram along a boundary subpath.

    ``bottom`` is the boundary subpath, ``top`` the opposite long side and
    ``squares`` the face ids, one per bottom edge.  ``curve`` is the index of
    the dual curve crossing every rung, i.e. the image of the middle line.
    """

    bottom: tuple
    top: tuple
    squares: tuple
    curve: int


def _locate_boundary_subpath(d, zeta):
    bp = d.boundary_path
    darts = d.boundary_darts
    n = len(bp)
    m = len(zeta) - 1
    if m < 1 or m > n:
        raise DiagramError("boundary subpath must have between 1 and n edges")
    for s in range(n):
        if all(bp[(s + t) % n] == zeta[t] for t in range(m + 1)):
            return [darts[(s + t) % n] for t in range(m)]
    raise DiagramError(f"{tuple(zeta)} is not a subpath of the boundary path")


def _on_boundary(d, zeta):
    try:
        _locate_boundary_subpath(d, zeta)
    except DiagramError:
        return False
    return True


def extract_boundary_ladder(d, zeta):
    """The 1 x n grid hanging off a boundary subpath with corner-like ends.

    ``zeta`` is a vertex walk along the boundary path whose end vertices have
    curvature 1 and whose inner vertices have curvature 0.
    """
    zeta = tuple(zeta)
    if not is_cat0_disc(d):
        raise PreconditionError("ladder extraction needs a diagram with no low-degree internal vertex")
    try:
        darts = _locate_boundary_subpath(d, zeta)
    except DiagramError:
        lad = extract_boundary_ladder(d, zeta[::-1]) if _on_boundary(d, zeta[::-1]) else None
        if lad is None:
            raise
        return Ladder(zeta, lad.top[::-1], lad.squares[::-1], lad.curve)
    for i, v in enumerate(zeta):
        want = 1 if i in (0, len(zeta) - 1) else 0
        if vertex_curvature(d, v) != want:
            raise PreconditionError(
                f"vertex {v!r} has curvature {vertex_curvature(d, v)}, expected {want}"
            )
    squares = []
    top = []
    for t, x in enumerate(darts):
        inner = d.twin[x]
        if d.is_outer_dart(inner):
            raise PreconditionError(f"edge {zeta[t]}-{zeta[t + 1]} borders no square")
        f = d.face_of[inner]
        fd = d.face_darts(f)
        k = fd.index(inner)
        # inner runs zeta[t+1] -> zeta[t]; the square is zeta[t+1], zeta[t], u_t, u_{t+1}
        u_t = d.head(fd[(k + 1) % 4])
        u_next = d.origin[fd[(k + 3) % 4]]
        if top:
            if top[-1] != u_t:
                raise PathologyError("consecutive ladder squares do not share a rung")
        else:
            top.append(u_t)
        top.append(u_next)
        squares.append(f)
    data = _dual_data(d)
    rungs = [d.edge_of(d.dart_between(zeta[i], top[i])) for i in range(len(zeta))]
    curves = {data.curve_of_edge[e] for e in rungs}
    if len(curves) != 1:
        raise PathologyError("ladder rungs lie on more than one dual curve")
    return Ladder(zeta, tuple(top), tuple(squares), curves.pop())


# -- reduction to a locally minimal diagram ---------------------------------


def validate_labels(d, x):
    """Check that the labels of ``d`` define a combinatorial map into ``x``."""
    if d.labels is None:
        raise DiagramError("diagram is not labelled")
    lab = d.labels
    for v in d.vertices:
        if lab[v] not in x.skeleton:
            raise DiagramError(f"label {lab[v]!r} of {v!r} is not a vertex of the complex")
    for e in d.edges:
        a, b = d.edge_vertices(e)
        if not x.skeleton.has_edge(lab[a], lab[b]):
            raise DiagramError(f"edge {a}-{b} maps to a non-edge")
    for f in d.faces:
        cyc = tuple(lab[d.origin[t]] for t in f)
        if not x.has_square(cyc):
            raise DiagramError(f"face {f[0]} maps to {cyc}, which is not a square")


def _k2(ws, x, sq_ok):
    """Remove a valence-2 internal vertex whose out darts are ``x`` and ``sigma(x)``."""
    y = ws.sigma(x)
    if ws.sigma(y) != x:
        raise DiagramError("internal vertex does not have valence 2")
    s1, s2 = ws.face(x), ws.face(y)
    if len(s1) != 4 or len(s2) != 4 or ws.twin[s1[3]] != y or ws.twin[s2[3]] != x:
        raise DiagramError("corners around a valence-2 vertex are not two squares")
    _, x1, x2, x3 = s1
    _, y1, y2, y3 = s2
    la, lp, lb = ws.lab[x1], ws.lab[x2], ws.lab[y1]
    lq = ws.lab[y2]
    if lp == lq:
        # both squares fold onto the same square: zip the outside together
        pairs = [(x1, y2), (x2, y1)]
        region = set(s1) | set(s2)
        ws_pairs = []
        for a, b in pairs:
            ta, tb = ws.twin[a], ws.twin[b]
            if ta == b:
                continue
            if ta in region or tb in region:
                raise DiagramError("unexpected fold configuration")
            ws_pairs.append((ta, tb))
        ws.drop(s1 + s2)
        for ta, tb in ws_pairs:
            ws.twin[ta], ws.twin[tb] = tb, ta
        return "fold"
    if not sq_ok((la, lp, lb, lq)):
        raise NotLocallyQuadricError(
            f"4-cycle {(la, lp, lb, lq)} around a valence-2 vertex bounds no square",
            [(la, lp, lb, lq)],
        )
    ws.phi[x2] = y1
    ws.phi[y2] = x1
    ws.drop([x, y, x3, y3])
    return "merge"


def _k3(ws, x0, sq_ok, adj_ok):
    x1 = ws.sigma(x0)
    x2 = ws.sigma(x1)
    if ws.sigma(x2) != x0:
        raise DiagramError("internal vertex does not have valence 3")
    spokes = [x0, x2, x1]
    hexagon = []
    for s in spokes:
        f = ws.face(s)
        if len(f) != 4:
            raise DiagramError("corner at a valence-3 vertex is not a square")
        hexagon += [f[1], f[2]]
    labs = [ws.lab[h] for h in hexagon]
    for i in (0, 2, 4):
        if labs[(i - 1) % 6] == labs[(i + 1) % 6]:
            # boundary folds at hexagon[i]'s origin: zip the two edges, then
            # the corner vertex becomes a valence-2 internal vertex
            p, q = hexagon[(i - 1) % 6], hexagon[i]
            tp, tq = ws.twin[p], ws.twin[q]
            if tp != q:
                ws.twin[p], ws.twin[q] = q, p
                ws.twin[tp], ws.twin[tq] = tq, tp
            return "unfold+" + _k2(ws, q, sq_ok)
    options = []
    for j in range(3):
        h = [hexagon[(j + t) % 6] for t in range(6)]
        hl = [ws.lab[t] for t in h]
        if not adj_ok(hl[0], hl[3]):
            continue
        if sq_ok(tuple(hl[0:4])) and sq_ok(tuple(hl[3:6]) + (hl[0],)):
            options.append((tuple(sorted((hl[0], hl[3]))), j, h))
    if not options:
        raise NotLocallyQuadricError(
            f"immersed hexagon {tuple(labs)} has no diagonal splitting it into squares",
            [tuple(labs)],
        )
    _, _, h = min(options)
    u, w = ws.name[h[0]], ws.name[h[3]]
    g_back, g_fwd = ws.new_edge(w, u, ws.lab[h[3]], ws.lab[h[0]])
    # g_back runs h3 -> h0, g_fwd runs h0 -> h3
    ring_a = [h[0], h[1], h[2], g_back]
    ring_b = [h[3], h[4], h[5], g_fwd]
    for ring in (ring_a, ring_b):
        for t in range(4):
            ws.phi[ring[t]] = ring[(t + 1) % 4]
    ws.drop([x0, x1, x2, ws.twin[x0], ws.twin[x1], ws.twin[x2]])
    return "split"


def reduce_to_locally_minimal(d, x, trace=None):
    """Surgery until every internal vertex meets at least four squares.

    At each step the internal vertex of least valence (then least name) is
    treated.  Valence 2: two squares folding onto one square are cut out and
    their outer edges zipped; otherwise they are replaced by the square on
    their outer 4-cycle.  Valence 3: an immersed hexagon is refilled with two
    squares along a diagonal; a non-immersed one is first zipped at its fold,
    which leaves a valence-2 vertex handled in the same step.  The square
    count drops at every step.  ``trace``, when a list, receives
    ``(vertex, valence, action, squares_after)`` per step.
    """
    validate_labels(d, x)
    skel = x.skeleton

    def sq_ok(cyc):
        return len(set(cyc)) == 4 and x.has_square(cyc)

    def adj_ok(a, b):
        return skel.has_edge(a, b)

    cur = d
    while True:
        bad = sorted(
            (cur.valence(v), v) for v in cur.internal_vertices() if cur.corners(v) < 4
        )
        if not bad:
            return cur
        k, v = bad[0]
        ws = _Workspace.from_map(cur)
        x0 = cur.out_darts[v][0]
        if k == 2:
            action = _k2(ws, x0, sq_ok)
        elif k == 3:
            action = _k3(ws, x0, sq_ok, adj_ok)
        else:
            raise DiagramError(f"internal vertex {v!r} of valence {k} cannot occur in a labelled diagram")
        ws.prune(cur.outer)
        nxt = ws.assemble(cur.outer, DiscDiagram)
        if nxt.face_count >= cur.face_count:
            raise DiagramError("reduction step failed to lower the square count")
        if boundary_labels(nxt) != boundary_labels(cur):
            raise DiagramError("reduction step changed the boundary path")
        if trace is not None:
            trace.append((v, k, action, nxt.face_count))
        cur = nxt


def boundary_labels(d):
    if d.labels is None:
        return d.boundary_path
    return tuple(d.labels[v] for v in d.boundary_path)


# -- text reports ------------------------------------------------------------


def curvature_lines(d):
    rep = curvature_report(d)
    return [
        f"curvature {v} {rep.kappa[v]} delta={rep.delta[v]} rho={rep.rho[v]}"
        for v in d.vertices
    ]


def dual_curve_lines(d):
    out = []
    for c in dual_curves(d):
        edges = " ".join("-".join(d.edge_vertices(e)) for e in c.edges)
        kind = "closed" if c.closed else "open"
        out.append(f"curve {c.index} {kind} squares={len(c.squares)} edges={edges}")
    return out


def pathology_lines(d):
    rep = detect_pathologies(d)
    return [
        f"nonogons: {len(rep.nonogons)}",
        f"monogons: {len(rep.monogons)}",
        f"bigons: {len(rep.bigons)}",
        f"triangles: {len(rep.triangles)}",
    ]


def face_cycle(d, fid):
    return canonical_cycle(d.face_vertices(fid))
