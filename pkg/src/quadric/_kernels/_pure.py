"""Pure-Python reference kernels.

Every function takes an adjacency list ``adj`` where ``adj[i]`` is the sorted
list of neighbour indices of vertex ``i``.  Vertex indices follow the total
order of vertex identifiers, so "least index" means "least identifier".
Unreachable pairs are reported as ``-1`` in distance tables; the public graph
API converts that to an explicit infinity marker.
"""

from collections import deque

BACKEND = "python"


def all_pairs_distances(adj):
    n = len(adj)
    table = []
    for s in range(n):
        row = [-1] * n
        row[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            du = row[u] + 1
            for w in adj[u]:
                if row[w] < 0:
                    row[w] = du
                    queue.append(w)
        table.append(row)
    return table


def embedded_cycles(adj, max_len):
    """All embedded cycles of length 3..max_len in canonical form.

    A cycle is reported once, starting at its least vertex and walking
    towards the smaller of that vertex's two cycle neighbours.
    """
    n = len(adj)
    out = []
    path = []
    on_path = [False] * n

    def extend(s, u):
        k = len(path)
        for w in adj[u]:
            if w <= s:
                if w == s and k >= 3 and path[1] < u:
                    out.append(tuple(path))
                continue
            if on_path[w] or k >= max_len:
                continue
            path.append(w)
            on_path[w] = True
            extend(s, w)
            on_path[w] = False
            path.pop()

    for s in range(n):
        path.append(s)
        on_path[s] = True
        extend(s, s)
        on_path[s] = False
        path.pop()
    out.sort(key=lambda c: (len(c), c))
    return out


def _isometric_of_length(adj, dist, length, first_only):
    n = len(adj)
    found = []
    path = []

    def extend(s):
        k = len(path)
        u = path[-1]
        for w in adj[u]:
            if w <= s:
                continue
            ok = True
            for j in range(k):
                gap = k - j
                want = gap if 2 * gap <= length else length - gap
                if dist[path[j]][w] != want:
                    ok = False
                    break
            if not ok:
                continue
            if k == length - 1:
                if path[1] < w:
                    found.append(tuple(path) + (w,))
                    if first_only:
                        return True
                continue
            path.append(w)
            if extend(s):
                return True
            path.pop()
        return False

    for s in range(n):
        path.append(s)
        done = extend(s)
        path.pop()
        if done:
            break
    return found


def isometric_cycles(adj, dist, max_len):
    """All isometrically embedded cycles of length 3..max_len, canonical form."""
    out = []
    for length in range(3, max_len + 1):
        out.extend(_isometric_of_length(adj, dist, length, False))
    return out


def find_isometric_cycle(adj, dist, max_len, skip_len):
    """Shortest-then-least isometric cycle whose length differs from ``skip_len``."""
    for length in range(3, max_len + 1):
        if length == skip_len:
            continue
        hit = _isometric_of_length(adj, dist, length, True)
        if hit:
            return hit[0]
    return None
