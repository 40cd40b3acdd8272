"""Quadrization of 2-complexes, action transfer and bounded Cayley balls."""

from dataclasses import dataclass, field

from .complex import SquareComplex, four_flag_completion
from .dismantling import GroupAction, invariant_biclique_complex, verify_action
from .errors import (
    BudgetExhaustedError,
    InvalidActionError,
    PreconditionError,
    QuadricError,
)
from .graph import SimplicialGraph, canonical_cycle
from .presentation import (
    TwoComplex,
    _is_path,
    check_c4,
    check_complex_cftf,
    check_embedded_cells,
    check_t4,
    cyclic_reduce,
    free_reduce,
    inverse,
    symmetrize,
)
from .verdict import Verdict


# -- thickening ------------------------------------------------------------


def thicken_free_edges(y):
    """Put every free 1-cell on the boundary of a new bigon 2-cell.

    A free loop ``e`` is first subdivided by a 0-cell ``e.mid`` into
    ``e.0`` and ``e.1``.  A free 1-cell ``e`` with distinct ends gets a
    parallel 1-cell ``e.par`` and a 2-cell ``e.face`` bounded by the two.
    The result deformation retracts onto ``y``.
    """
    free = y.free_edges()
    if not free:
        return y
    vs = list(y.vertices)
    es = dict(y.edges)
    cells = dict(y.cells)
    todo = []
    for e in free:
        a, b = y.edges[e]
        if a == b:
            mid = f"{e}.mid"
            vs.append(mid)
            del es[e]
            es[f"{e}.0"] = (a, mid)
            es[f"{e}.1"] = (mid, a)
            todo += [f"{e}.0", f"{e}.1"]
        else:
            todo.append(e)
    for e in todo:
        es[f"{e}.par"] = es[e]
        cells[f"{e}.face"] = [(e, 1), (f"{e}.par", -1)]
    return TwoComplex(vs, es, cells, y.simply_connected)


def _edge_image(y, m, e):
    if e in m:
        return m[e]
    a, b = y.edges[e]
    ends = {m[a], m[b]}
    cands = [k for k, (c, d) in y.edges.items() if {c, d} == ends]
    if len(cands) != 1:
        raise InvalidActionError(f"cannot infer the image of 1-cell {e!r}")
    return cands[0]


def thicken_action(y, a):
    """Extend an action on ``y`` to ``thicken_free_edges(y)`` using the canonical names."""
    free = y.free_edges()
    gens = {}
    for name, m in a.generators:
        m2 = dict(m)
        for e in free:
            g = _edge_image(y, m, e)
            if y.is_loop(e):
                m2[f"{e}.mid"] = f"{g}.mid"
                for k in ("0", "1"):
                    m2[f"{e}.{k}"] = f"{g}.{k}"
                    m2[f"{e}.{k}.par"] = f"{g}.{k}.par"
                    m2[f"{e}.{k}.face"] = f"{g}.{k}.face"
                m2.pop(e, None)
            else:
                m2[e] = g
                m2[f"{e}.par"] = f"{g}.par"
                m2[f"{e}.face"] = f"{g}.face"
        gens[name] = m2
    return GroupAction(thicken_free_edges(y), gens)


# -- incidence graph and quadrization ----------------------------------------


def _require_quadrizable(y):
    free = y.free_edges()
    if free:
        raise PreconditionError(f"free 1-cells {free} (thicken them first)")
    emb = check_embedded_cells(y)
    if not emb:
        raise PreconditionError(f"non-embedded 2-cells {list(emb.witnesses)}")


def incidence_graph(y):
    """Bipartite graph on ``v.<0-cell>`` and ``f.<2-cell>``, joined by incidence."""
    _require_quadrizable(y)
    verts = [f"v.{v}" for v in y.vertices] + [f"f.{f}" for f in y.cells]
    edges = {(f"v.{v}", f"f.{f}") for f in y.cells for v in y.boundary_vertices(f)}
    return SimplicialGraph(verts, edges)


@dataclass(frozen=True)
class QuadrizationResult:
    complex: SquareComplex
    vertex_origin: dict = field(default_factory=dict)

    def origin_lines(self):
        return [f"origin {k} {kind} {cid}" for k, (kind, cid) in sorted(self.vertex_origin.items())]


def quadrize(y):
    """4-flag completion of the incidence graph, with the origin of each vertex."""
    g = incidence_graph(y)
    origin = {}
    for v in y.vertices:
        origin[f"v.{v}"] = ("0cell", v)
    for f in y.cells:
        origin[f"f.{f}"] = ("2cell", f)
    return QuadrizationResult(four_flag_completion(g), origin)


# -- actions on 2-complexes ------------------------------------------------


def verify_cell_action(y, a):
    """Each generator permutes 0-cells and 2-cells preserving boundary cycles.

    1-cells, when given, must be permuted compatibly with their endpoints.
    """
    bad = []
    vs, fs = set(y.vertices), set(y.cells)
    for name, m in a.generators:
        dom = set(m)
        if not vs | fs <= dom:
            raise InvalidActionError(f"generator {name!r} does not map every 0-cell and 2-cell")
        if {m[v] for v in vs} != vs or {m[f] for f in fs} != fs:
            raise InvalidActionError(f"generator {name!r} does not permute the cells")
        es = dom & set(y.edges)
        if es and ({m[e] for e in es} - set(y.edges) or len({m[e] for e in es}) != len(es)):
            raise InvalidActionError(f"generator {name!r} maps 1-cells badly")
        for e in es:
            a0, b0 = y.edges[e]
            if {m[a0], m[b0]} != set(y.edges[m[e]]):
                bad.append((name, e))
        for f in fs:
            img = canonical_cycle([m[v] for v in y.boundary_vertices(f)])
            if img != canonical_cycle(y.boundary_vertices(m[f])):
                bad.append((name, f))
    if bad:
        return Verdict.failed("generators that do not respect boundaries", bad)
    return Verdict.passed()


def transfer_action(y, a):
    """The induced action on the quadrization, verified to be by automorphisms."""
    v = verify_cell_action(y, a)
    if not v:
        raise InvalidActionError(f"invalid action on the 2-complex: {v.witnesses}")
    q = quadrize(y)
    gens = {}
    for name, m in a.generators:
        t = {f"v.{x}": f"v.{m[x]}" for x in y.vertices}
        t.update({f"f.{x}": f"f.{m[x]}" for x in y.cells})
        gens[name] = t
    out = GroupAction(q.complex, gens)
    if not verify_action(out):
        raise InvalidActionError("transferred maps are not automorphisms of the quadrization")
    return out


@dataclass(frozen=True)
class InvariantCell:
    """``kind`` is ``"0cell"``, ``"1cell"`` or ``"2cell"``; ``support`` its 0-cells."""

    kind: str
    cell: str
    support: frozenset

    def is_fixed_by(self, y, a):
        for _, m in a.generators:
            if frozenset(m[v] for v in self.support) != self.support:
                return False
            if self.kind == "0cell" and m[self.cell] != self.cell:
                return False
        return True


def _order_path(y, vs, es):
    adj = {v: [] for v in vs}
    for e in es:
        a, b = y.edges[e]
        adj[a].append((b, e))
        adj[b].append((a, e))
    ends = sorted(v for v in vs if len(adj[v]) <= 1)
    path, edges = [ends[0]], []
    while True:
        nxt = [(w, e) for w, e in adj[path[-1]] if e not in edges]
        if not nxt:
            return path, edges
        w, e = nxt[0]
        path.append(w)
        edges.append(e)


def invariant_cell(y, a, override=False):
    """A 0-cell, 1-cell or 2-cell boundary fixed by the finite group generated by ``a``.

    The invariant biclique of the quadrization is computed; its 2-cells
    meet in a path (or share a boundary), whose middle cell is fixed.
    """
    if not y.simply_connected and not override:
        raise PreconditionError("no simple-connectivity certificate (pass override=True to force)")
    emb = check_embedded_cells(y)
    if not emb:
        raise PreconditionError(f"non-embedded 2-cells {list(emb.witnesses)}")
    cf = check_complex_cftf(y)
    if not cf:
        raise PreconditionError("2-complex is not C(4)-T(4): " + cf.reason)
    v = verify_cell_action(y, a)
    if not v:
        raise InvalidActionError(f"invalid action on the 2-complex: {v.witnesses}")
    if all(all(m[k] == k for k in m) for _, m in a.generators):
        least = y.vertices[0]
        return InvariantCell("0cell", least, frozenset([least]))
    if y.free_edges():
        a = thicken_action(y, a)
        y = a.host
    q = quadrize(y)
    ta = transfer_action(y, a)
    bic = invariant_biclique_complex(q.complex, ta)
    faces = sorted(q.vertex_origin[x][1] for x in bic if q.vertex_origin[x][0] == "2cell")
    if len(faces) == 1:
        f = faces[0]
        return InvariantCell("2cell", f, frozenset(y.boundary_vertices(f)))
    vs = frozenset.intersection(*(frozenset(y.boundary_vertices(f)) for f in faces))
    es = frozenset.intersection(*(frozenset(y.boundary_edges(f)) for f in faces))
    if not vs:
        raise QuadricError("2-cells of the invariant biclique do not meet")
    if not _is_path(y, vs, es):
        f = faces[0]
        if vs == frozenset(y.boundary_vertices(f)):
            return InvariantCell("2cell", f, vs)
        raise QuadricError("2-cells of the invariant biclique do not meet in a path")
    path, edges = _order_path(y, vs, es)
    n = len(edges)
    if n % 2 == 0:
        mid = path[n // 2]
        return InvariantCell("0cell", mid, frozenset([mid]))
    e = edges[n // 2]
    return InvariantCell("1cell", e, frozenset(y.edges[e]))


# -- bounded word problem and Cayley balls ----------------------------------


def _echelon(rows, n):
    rows = [list(r) for r in rows if any(r)]
    done = []
    for c in range(n):
        active = [r for r in rows if r[c] != 0]
        rest = [r for r in rows if r[c] == 0]
        while len(active) > 1:
            active.sort(key=lambda r: abs(r[c]))
            p = active[0]
            nxt = [p]
            for r in active[1:]:
                q = r[c] // p[c]
                r = [x - q * y for x, y in zip(r, p)]
                (nxt if r[c] != 0 else rest).append(r)
            active = nxt
        if active:
            done.append(active[0])
        rows = [r for r in rest if any(r)]
    return done


class _Lattice:
    """Integer span of relator exponent-sum vectors."""

    def __init__(self, p):
        self.n = len(p.generators)
        vecs = [self.vector(r) for r in p.relators]
        self.rows = _echelon(vecs, self.n)

    def vector(self, word):
        v = [0] * self.n
        for x in word:
            v[abs(x) - 1] += 1 if x > 0 else -1
        return v

    def contains(self, v):
        v = list(v)
        for r in self.rows:
            c = next(i for i, x in enumerate(r) if x)
            if v[c] % r[c]:
                return False
            q = v[c] // r[c]
            v = [x - q * y for x, y in zip(v, r)]
        return not any(v)


def _canon_cyclic(w):
    cands = [w[i:] + w[:i] for i in range(len(w))]
    iw = inverse(w)
    cands += [iw[i:] + iw[:i] for i in range(len(iw))]
    return min(cands) if cands else ()


def is_trivial_bounded(p, word, budget=10**6, sym=None):
    """``"equal"`` if a rewriting search reaches the empty word, else ``"unresolved"``.

    Searches cyclic words reachable by replacing a prefix of a relator
    reading with the inverse of its remainder, up to length ``|word|`` plus
    the longest relator.  Raises :class:`BudgetExhaustedError` past
    ``budget`` states.
    """
    w0 = cyclic_reduce(word)
    if not w0:
        return "equal"
    if not p.relators:
        return "unresolved"
    sym = sym if sym is not None else symmetrize(p)
    cap = len(w0) + max(len(r) for r in p.relators)
    start = _canon_cyclic(w0)
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for s in frontier:
            for i in range(len(s)):
                t = s[i:] + s[:i]
                for rel in sym:
                    L = 0
                    while L < len(rel) and L < len(t) and t[L] == rel[L]:
                        L += 1
                        new = cyclic_reduce(inverse(rel[L:]) + t[L:])
                        if not new:
                            return "equal"
                        if len(new) > cap:
                            continue
                        c = _canon_cyclic(new)
                        if c not in seen:
                            seen.add(c)
                            if len(seen) > budget:
                                raise BudgetExhaustedError(
                                    f"word problem search exceeded {budget} states", None
                                )
                            nxt.append(c)
        frontier = nxt
    return "unresolved"


class WordOracle:
    """Equality of words in a presentation: exact for free groups, else bounded."""

    def __init__(self, p, budget=10**6):
        self.p = p
        self.budget = budget
        self.lattice = _Lattice(p)
        self.sym = symmetrize(p)

    def compare(self, u, v):
        """``"equal"``, ``"distinct"`` (certified) or ``"unresolved"``."""
        u, v = free_reduce(u), free_reduce(v)
        if u == v:
            return "equal"
        if not self.p.relators:
            return "distinct"
        diff = [a - b for a, b in zip(self.lattice.vector(u), self.lattice.vector(v))]
        if not self.lattice.contains(diff):
            return "distinct"
        return is_trivial_bounded(self.p, u + inverse(v), self.budget, self.sym)


def _word_id(p, w):
    if not w:
        return "g"
    return "g." + ".".join(p.generators[abs(x) - 1] + ("" if x > 0 else "-") for x in w)


def cayley_ball(p, radius, budget=10**6, assume_distinct=False):
    """Ball of radius ``radius`` about the identity in the Cayley 2-complex.

    0-cells are shortlex-least words, named ``g.a.b-`` for ``a b^-1``
    (``g`` is the identity).  1-cells ``e<k>`` go from ``w`` to ``w x``;
    2-cells ``c<k>`` are relator loops based at each 0-cell lying wholly
    in the ball.  A pair of words that abelianization cannot separate and
    the bounded search cannot identify aborts with
    :class:`BudgetExhaustedError` unless ``assume_distinct`` is set.  The
    result has no simple-connectivity certificate.
    """
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    if not check_c4(p) or not check_t4(p):
        raise PreconditionError("cayley_ball needs a C(4)-T(4) presentation")
    oracle = WordOracle(p, budget)
    letters = [s * i for i in range(1, len(p.generators) + 1) for s in (1, -1)]
    elements = [()]

    def find(word):
        for e in elements:
            try:
                verdict = oracle.compare(word, e)
            except BudgetExhaustedError as exc:
                raise BudgetExhaustedError(str(exc), tuple(elements)) from None
            if verdict == "equal":
                return e
            if verdict == "unresolved" and not assume_distinct:
                raise BudgetExhaustedError(
                    f"cannot decide whether {word} equals {e}", tuple(elements)
                )
        return None

    level = [()]
    for _ in range(radius):
        new = []
        for w in level:
            for x in letters:
                c = free_reduce(w + (x,))
                if len(c) <= len(w):
                    continue
                if find(c) is None:
                    elements.append(c)
                    new.append(c)
        level = new

    inball = set(elements)
    move = {w: {} for w in elements}
    edges = {}
    k = 0
    for w in elements:
        for i in range(1, len(p.generators) + 1):
            c = free_reduce(w + (i,))
            t = c if c in inball else find(c)
            if t is None:
                continue
            eid = f"e{k}"
            k += 1
            edges[eid] = (_word_id(p, w), _word_id(p, t))
            move[w][i] = (t, eid, 1)
            move[t][-i] = (w, eid, -1)
    cells = {}
    k = 0
    for w in elements:
        for r in p.relators:
            cur, walk = w, []
            for x in r:
                step = move[cur].get(x)
                if step is None:
                    break
                cur = step[0]
                walk.append((step[1], step[2]))
            else:
                if cur == w:
                    cells[f"c{k}"] = walk
                    k += 1
    return TwoComplex([_word_id(p, w) for w in elements], edges, cells, False)
