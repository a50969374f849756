# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: plain Floyd-Warshall and the bounded cycle-tree DFS.

Missing arcs arrive as INF64 in int64 arrays. Vertices are 0-based here.
"""

import time

import numpy as np
cimport numpy as cnp

ctypedef cnp.int64_t i64

cdef i64 INF64 = 2 ** 62


def fw_apsp(cnp.ndarray[i64, ndim=2] arr):
    """All-pairs shortest values and the 1-based intermediate of the last
    improvement (0 for a direct arc)."""
    cdef Py_ssize_t n = arr.shape[0]
    cdef cnp.ndarray[i64, ndim=2] dist = arr.copy()
    cdef cnp.ndarray[i64, ndim=2] via = np.zeros((n, n), dtype=np.int64)
    cdef i64[:, :] d = dist
    cdef i64[:, :] v = via
    cdef Py_ssize_t i, j, k
    cdef i64 a, b, c
    for j in range(n):
        for i in range(n):
            a = d[i, j]
            if a >= INF64:
                continue
            for k in range(n):
                b = d[j, k]
                if b >= INF64:
                    continue
                c = a + b
                if c < d[i, k]:
                    d[i, k] = c
                    v[i, k] = j + 1
    return dist, via


def ctree_dfs(cnp.ndarray[i64, ndim=2] r, cnp.ndarray[i64, ndim=2] dist, roots,
              i64 bound, long node_budget, int eager_depth, double deadline):
    """Depth-first cycle trees from each root, keeping prefixes below ``bound``.

    A branch is cut when its prefix value, or the prefix plus the shortest
    way back to the root, reaches the bound. Returns (cycles, nodes,
    exhausted) where cycles is a list of (vertex tuple, value).
    """
    cdef Py_ssize_t n = r.shape[0]
    cdef i64[:, :] w = r
    cdef i64[:, :] sp = dist
    cdef cnp.ndarray[i64, ndim=1] path_a = np.zeros(n + 1, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] pref_a = np.zeros(n + 1, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] next_a = np.zeros(n + 1, dtype=np.int64)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] seen_a = np.zeros(n, dtype=np.uint8)
    cdef i64[:] path = path_a
    cdef i64[:] pref = pref_a
    cdef i64[:] nxt = next_a
    cdef cnp.uint8_t[:] seen = seen_a
    cdef long nodes = 0
    cdef bint exhausted = False
    cdef Py_ssize_t depth, t, root, b, u
    cdef i64 x, val, back
    cdef bint dup
    out = []
    for root_obj in roots:
        root = root_obj
        depth = 0
        path[0] = root
        pref[0] = 0
        nxt[0] = 0
        seen[root] = 1
        while depth >= 0:
            b = path[depth]
            u = nxt[depth]
            if u >= n:
                if depth < eager_depth:
                    seen[b] = 0
                depth -= 1
                continue
            nxt[depth] = u + 1
            x = w[b, u]
            if u == b or x >= INF64:
                continue
            val = pref[depth] + x
            if u == root:
                if depth >= 1 and val < bound:
                    out.append((tuple([path[t] for t in range(depth + 1)]), val))
                continue
            if val >= bound:
                continue
            back = sp[u, root]
            if back >= INF64 or val + back >= bound:
                continue
            if depth + 1 < eager_depth:
                if seen[u]:
                    continue
            else:
                dup = False
                for t in range(depth + 1):
                    if path[t] == u:
                        dup = True
                        break
                if dup:
                    continue
            nodes += 1
            if nodes > node_budget or (deadline > 0 and (nodes & 1023) == 0 and time.monotonic() > deadline):
                exhausted = True
                break
            depth += 1
            path[depth] = u
            pref[depth] = val
            nxt[depth] = 0
            if depth < eager_depth:
                seen[u] = 1
        seen_a[:] = 0
        if exhausted:
            break
    return out, nodes, exhausted
