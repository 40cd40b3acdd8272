# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; same contracts as :mod:`quadric._kernels._pure`."""

from libc.stdlib cimport malloc, free

BACKEND = "cython"


cdef struct CSR:
    int n
    int *ptr
    int *idx


cdef CSR _to_csr(adj) except *:
    cdef CSR g
    cdef int n = len(adj)
    cdef int total = 0
    cdef int i, k
    for nbrs in adj:
        total += len(nbrs)
    g.n = n
    g.ptr = <int *> malloc((n + 1) * sizeof(int))
    g.idx = <int *> malloc((total + 1) * sizeof(int))
    if g.ptr == NULL or g.idx == NULL:
        raise MemoryError()
    k = 0
    for i in range(n):
        g.ptr[i] = k
        for w in adj[i]:
            g.idx[k] = w
            k += 1
    g.ptr[n] = k
    return g


cdef void _free_csr(CSR *g):
    free(g.ptr)
    free(g.idx)


cdef int *_dist_block(dist, int n) except NULL:
    cdef int *d = <int *> malloc((n * n + 1) * sizeof(int))
    cdef int i, j
    if d == NULL:
        raise MemoryError()
    for i in range(n):
        row = dist[i]
        for j in range(n):
            d[i * n + j] = row[j]
    return d


def all_pairs_distances(adj):
    cdef CSR g = _to_csr(adj)
    cdef int n = g.n
    cdef int *queue = <int *> malloc((n + 1) * sizeof(int))
    cdef int *row = <int *> malloc((n + 1) * sizeof(int))
    cdef int s, head, tail, u, k, w, du
    out = []
    try:
        for s in range(n):
            for k in range(n):
                row[k] = -1
            row[s] = 0
            head = 0
            tail = 1
            queue[0] = s
            while head < tail:
                u = queue[head]
                head += 1
                du = row[u] + 1
                for k in range(g.ptr[u], g.ptr[u + 1]):
                    w = g.idx[k]
                    if row[w] < 0:
                        row[w] = du
                        queue[tail] = w
                        tail += 1
            out.append([row[k] for k in range(n)])
    finally:
        free(queue)
        free(row)
        _free_csr(&g)
    return out


cdef void _cycles_from(CSR *g, int s, int max_len, int *path, char *on_path,
                       int k, list out):
    # path[0..k-1] is the current simple path starting at s
    cdef int u = path[k - 1]
    cdef int e, w, i
    for e in range(g.ptr[u], g.ptr[u + 1]):
        w = g.idx[e]
        if w <= s:
            if w == s and k >= 3 and path[1] < u:
                out.append(tuple([path[i] for i in range(k)]))
            continue
        if on_path[w] or k >= max_len:
            continue
        path[k] = w
        on_path[w] = 1
        _cycles_from(g, s, max_len, path, on_path, k + 1, out)
        on_path[w] = 0


def embedded_cycles(adj, int max_len):
    cdef CSR g = _to_csr(adj)
    cdef int n = g.n
    cdef int *path = <int *> malloc((max_len + 2) * sizeof(int))
    cdef char *on_path = <char *> malloc((n + 1) * sizeof(char))
    cdef int s, i
    cdef list out = []
    try:
        for i in range(n):
            on_path[i] = 0
        for s in range(n):
            path[0] = s
            on_path[s] = 1
            _cycles_from(&g, s, max_len, path, on_path, 1, out)
            on_path[s] = 0
    finally:
        free(path)
        free(on_path)
        _free_csr(&g)
    out.sort(key=lambda c: (len(c), c))
    return out


cdef int _iso_from(CSR *g, int *d, int n, int s, int length, int *path, int k,
                   list out, int first_only):
    cdef int u = path[k - 1]
    cdef int e, w, j, gap, want, ok, i
    for e in range(g.ptr[u], g.ptr[u + 1]):
        w = g.idx[e]
        if w <= s:
            continue
        ok = 1
        for j in range(k):
            gap = k - j
            if 2 * gap <= length:
                want = gap
            else:
                want = length - gap
            if d[path[j] * n + w] != want:
                ok = 0
                break
        if not ok:
            continue
        if k == length - 1:
            if path[1] < w:
                out.append(tuple([path[i] for i in range(k)]) + (w,))
                if first_only:
                    return 1
            continue
        path[k] = w
        if _iso_from(g, d, n, s, length, path, k + 1, out, first_only):
            return 1
    return 0


cdef list _iso_of_length(CSR *g, int *d, int length, int first_only):
    cdef int n = g.n
    cdef int *path = <int *> malloc((length + 2) * sizeof(int))
    cdef int s
    cdef list out = []
    try:
        for s in range(n):
            path[0] = s
            if _iso_from(g, d, n, s, length, path, 1, out, first_only):
                break
    finally:
        free(path)
    return out


def isometric_cycles(adj, dist, int max_len):
    cdef CSR g = _to_csr(adj)
    cdef int *d = NULL
    cdef int length
    out = []
    try:
        d = _dist_block(dist, g.n)
        for length in range(3, max_len + 1):
            out.extend(_iso_of_length(&g, d, length, 0))
    finally:
        free(d)
        _free_csr(&g)
    return out


def find_isometric_cycle(adj, dist, int max_len, int skip_len):
    cdef CSR g = _to_csr(adj)
    cdef int *d = NULL
    cdef int length
    cdef list hit
    try:
        d = _dist_block(dist, g.n)
        for length in range(3, max_len + 1):
            if length == skip_len:
                continue
            hit = _iso_of_length(&g, d, length, 1)
            if hit:
                return hit[0]
    finally:
        free(d)
        _free_csr(&g)
    return None
