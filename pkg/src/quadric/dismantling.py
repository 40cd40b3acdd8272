"""Bi-domination, breadth-first orders and invariant bicliques."""

from dataclasses import dataclass

from .errors import (
    GraphError,
    InvalidActionError,
    NotBiDismantlableError,
    NotBipartiteError,
    NotConnectedError,
    NotFourBridgedError,
    NotQuadricError,
)
from .graph import SimplicialGraph, is_4_bridged, is_biclique, is_bipartite
from .verdict import Verdict


# -- breadth-first orders --------------------------------------------------


@dataclass(frozen=True)
class BfsOrder:
    """A breadth-first numbering from ``start``.

    ``order`` lists the vertices by number, ``parent[v]`` is the vertex whose
    neighbours were being numbered when ``v`` got its number, and
    ``pseudoparents[v]`` are the neighbours of ``v`` numbered before it.
    """

    start: str
    order: tuple
    number: dict
    parent: dict
    pseudoparents: dict
    distance: dict

    def precedes(self, v, w):
        return self.number[v] < self.number[w]

    def max_pseudoparent(self, v):
        pp = self.pseudoparents[v]
        return max(pp, key=self.number.__getitem__) if pp else None


def bfs_order(g, u, tiebreak=None):
    """Breadth-first numbering; fresh neighbours are numbered by ``tiebreak`` (default: name)."""
    g._check(u)
    if not g.is_connected():
        raise NotConnectedError("bfs_order requires a connected graph")
    key = tiebreak or (lambda v: v)
    number = {u: 1}
    order = [u]
    parent = {}
    for w in order:
        fresh = sorted((v for v in g.neighbors(w) if v not in number), key=key)
        for v in fresh:
            number[v] = len(order) + 1
            order.append(v)
            parent[v] = w
    return _finish_order(g, u, order, parent)


def _finish_order(g, u, order, parent):
    number = {v: i + 1 for i, v in enumerate(order)}
    pseudo = {v: frozenset(w for w in g.neighbors(v) if number[w] < number[v]) for v in order}
    dist = {v: g.distance(u, v) for v in order}
    return BfsOrder(u, tuple(order), number, dict(parent), pseudo, dist)


def all_bfs_orders(g, u, limit=None):
    """Every breadth-first numbering from ``u`` (at most ``limit`` of them)."""
    g._check(u)
    count = 0

    def rec(order, parent, pos):
        nonlocal count
        if limit is not None and count >= limit:
            return
        if pos == len(order):
            count += 1
            yield _finish_order(g, u, list(order), dict(parent))
            return
        w = order[pos]
        fresh = sorted(v for v in g.neighbors(w) if v not in parent and v != u)
        for perm in _permutations(fresh):
            for v in perm:
                parent[v] = w
            yield from rec(order + list(perm), parent, pos + 1)
            for v in perm:
                del parent[v]

    yield from rec([u], {}, 0)


def _permutations(items):
    if len(items) <= 1:
        yield list(items)
        return
    for i, x in enumerate(items):
        for rest in _permutations(items[:i] + items[i + 1:]):
            yield [x] + rest


# -- bi-domination ---------------------------------------------------------


def bidominator(g, u):
    """Least ``v != u`` whose neighbourhood contains that of ``u``, or ``None``."""
    nu = g.neighbors(u)
    for v in g.vertices:
        if v != u and nu <= g.neighbors(v):
            return v
    return None


def bidominated_vertices(g):
    return [u for u in g.vertices if bidominator(g, u) is not None]


@dataclass(frozen=True)
class DismantleResult:
    """Outcome of a dismantling run.

    ``steps`` lists ``(removed, dominator)`` pairs; ``final`` is the graph left
    at the end, a biclique when ``ok`` and otherwise the stuck graph.
    """

    ok: bool
    steps: tuple
    final: SimplicialGraph

    def __bool__(self):
        return self.ok

    @property
    def removed(self):
        return tuple(v for v, _ in self.steps)


def _check_dismantle_input(g):
    if len(g) < 2:
        raise GraphError("dismantling needs at least two vertices")
    if not g.is_connected():
        raise NotConnectedError("dismantling needs a connected graph")
    if not is_bipartite(g):
        raise NotBipartiteError("dismantling needs a bipartite graph")


def bi_dismantle(g):
    """Greedily remove the least bi-dominated vertex until a biclique remains.

    Greedy removal cannot lose a dismantling, so a stuck result certifies
    that ``g`` is not bi-dismantlable.
    """
    _check_dismantle_input(g)
    steps = []
    cur = g
    while not is_biclique(cur, cur.vertices):
        for u in cur.vertices:
            v = bidominator(cur, u)
            if v is not None:
                break
        else:
            return DismantleResult(False, tuple(steps), cur)
        steps.append((u, v))
        cur = cur.remove_vertices([u])
    return DismantleResult(True, tuple(steps), cur)


def bfs_dismantle(g, start=None):
    """Strip vertices farthest from ``start`` first, checking each domination.

    A vertex ``v`` at distance ``r >= 2`` is removed with dominator the parent
    of its last-numbered pseudoparent; the domination is verified both in the
    ball of radius ``r`` and in the current graph.  Ends at the radius-1
    ball, a star.
    """
    if len(g) < 2:
        raise GraphError("dismantling needs at least two vertices")
    verdict = is_4_bridged(g)
    if not verdict:
        raise NotFourBridgedError("bfs_dismantle requires a 4-bridged graph", verdict.witnesses)
    u = min(g.vertices) if start is None else start
    bfs = bfs_order(g, u)
    dist = bfs.distance
    victims = sorted((v for v in g.vertices if dist[v] >= 2), key=lambda v: (-dist[v], v))
    steps = []
    cur = g
    for v in victims:
        r = dist[v]
        w = bfs.max_pseudoparent(v)
        dom = bfs.parent[w]
        ball_nv = frozenset(x for x in g.neighbors(v) if dist[x] <= r)
        ball_nd = frozenset(x for x in g.neighbors(dom) if dist[x] <= r)
        if not ball_nv <= ball_nd or not cur.neighbors(v) <= cur.neighbors(dom):
            raise NotBiDismantlableError(
                f"{v!r} is not dominated by {dom!r} in the ball of radius {r}", cur, [s for s, _ in steps]
            )
        steps.append((v, dom))
        cur = cur.remove_vertices([v])
    return DismantleResult(True, tuple(steps), cur)


# -- group actions ---------------------------------------------------------


class GroupAction:
    """Finite group given by generating vertex permutations of a graph or square complex."""

    def __init__(self, host, generators):
        self.host = host
        if isinstance(generators, dict):
            items = sorted(generators.items())
        else:
            items = [(f"g{i}", gen) for i, gen in enumerate(generators)]
        self.generators = tuple((name, dict(m)) for name, m in items)

    @property
    def graph(self):
        return self.host if isinstance(self.host, SimplicialGraph) else self.host.skeleton

    def maps(self):
        return [m for _, m in self.generators]

    def image(self, m, vertices):
        return frozenset(m[v] for v in vertices)

    def stabilizes(self, vertices):
        s = frozenset(vertices)
        return all(self.image(m, s) == s for m in self.maps())

    def __repr__(self):
        return f"GroupAction({len(self.generators)} generators)"


def verify_action(a):
    """Each generator is a bijection of the host vertices preserving edges (and squares)."""
    g = a.graph
    verts = set(g.vertices)
    for name, m in a.generators:
        if set(m) != verts:
            raise InvalidActionError(f"generator {name!r} is not defined on exactly the host vertices")
        if set(m.values()) != verts:
            raise InvalidActionError(f"generator {name!r} is not a permutation of the host vertices")
    bad = []
    for name, m in a.generators:
        for u, w in g.edges:
            if not g.has_edge(m[u], m[w]):
                bad.append((name, (u, w)))
                break
        else:
            squares = getattr(a.host, "squares", ())
            for sq in squares:
                if not a.host.has_square([m[v] for v in sq]):
                    bad.append((name, sq))
                    break
    if bad:
        return Verdict.failed("generators that are not automorphisms", bad)
    return Verdict.passed()


def _restrict(maps, keep):
    out = []
    for m in maps:
        r = {v: m[v] for v in keep}
        if set(r.values()) != set(keep):
            raise InvalidActionError("vertex set is not invariant under the action")
        out.append(r)
    return out


def twin_classes(g):
    """Classes of vertices with equal neighbourhoods, each sorted, keyed by least member."""
    by_nbhd = {}
    for v in g.vertices:
        by_nbhd.setdefault(g.neighbors(v), []).append(v)
    return sorted(tuple(sorted(c)) for c in by_nbhd.values())


def invariant_biclique(g, a, trace=None):
    """A biclique of ``g`` mapped onto itself by every generator of ``a``.

    If ``g`` is a biclique it is returned whole.  Otherwise, when no two
    vertices share a neighbourhood, all bi-dominated vertices are deleted
    (an invariant set); when some do, the graph is collapsed to its twin
    classes.  The recursion's answer is pulled back.  ``trace``, when a
    list, receives one ``("remove", D)`` or ``("collapse", classes)`` entry
    per level.
    """
    if len(g) < 2:
        raise GraphError("invariant_biclique needs at least two vertices")
    if not g.is_connected():
        raise NotConnectedError("invariant_biclique needs a connected graph")
    if not verify_action(a):
        raise InvalidActionError("generators are not automorphisms of the host")
    result = _inv_rec(g, a.maps(), trace)
    return frozenset(result)


def _inv_rec(g, maps, trace):
    if is_biclique(g, g.vertices):
        return set(g.vertices)
    classes = twin_classes(g)
    if all(len(c) == 1 for c in classes):
        dominated = bidominated_vertices(g)
        if not dominated:
            raise NotBiDismantlableError("no bi-dominated vertex and not a biclique", g)
        keep = [v for v in g.vertices if v not in set(dominated)]
        if len(keep) < 2:
            raise NotBiDismantlableError("removing dominated vertices leaves too little", g)
        sub = g.full_subgraph(keep)
        if not sub.is_connected():
            raise NotBiDismantlableError("removing dominated vertices disconnects the graph", g)
        if trace is not None:
            trace.append(("remove", tuple(dominated)))
        return _inv_rec(sub, _restrict(maps, keep), trace)
    rep = {}
    for c in classes:
        for v in c:
            rep[v] = c[0]
    for c in classes:
        for v, w in zip(c, c[1:]):
            if g.has_edge(v, w):
                raise GraphError("adjacent vertices with equal neighbourhoods")
    qedges = {tuple(sorted((rep[u], rep[w]))) for u, w in g.edges}
    quotient = SimplicialGraph([c[0] for c in classes], qedges)
    qmaps = [{c[0]: rep[m[c[0]]] for c in classes} for m in maps]
    if trace is not None:
        trace.append(("collapse", tuple(c for c in classes if len(c) > 1)))
    picked = _inv_rec(quotient, qmaps, trace)
    members = {c[0]: c for c in classes}
    return {v for r in picked for v in members[r]}


def invariant_biclique_complex(x, a, trace=None):
    """Invariant biclique of the 1-skeleton of a quadric complex."""
    from .complex import is_quadric

    verdict = is_quadric(x)
    if not verdict:
        raise NotQuadricError("invariant_biclique_complex needs a quadric complex", verdict.witnesses)
    if not verify_action(a):
        raise InvalidActionError("generators are not automorphisms of the complex")
    return invariant_biclique(x.skeleton, GroupAction(x.skeleton, dict(a.generators)), trace)

