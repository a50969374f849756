"""Pure-Python versions of the compiled kernels, same signatures and results."""

from __future__ import annotations

import time

import numpy as np

INF64 = 2**62


def fw_apsp(arr):
    n = arr.shape[0]
    d = arr.tolist()
    via = [[0] * n for _ in range(n)]
    for j in range(n):
        dj = d[j]
        for i in range(n):
            a = d[i][j]
            if a >= INF64:
                continue
            di = d[i]
            vi = via[i]
            for k in range(n):
                b = dj[k]
                if b >= INF64:
                    continue
                c = a + b
                if c < di[k]:
                    di[k] = c
                    vi[k] = j + 1
    return np.array(d, dtype=np.int64), np.array(via, dtype=np.int64)


def ctree_dfs(r, dist, roots, bound, node_budget, eager_depth, deadline):
    n = r.shape[0]
    w = r.tolist()
    sp = dist.tolist()
    out = []
    nodes = 0
    exhausted = False
    for root in roots:
        root = int(root)
        path = [root]
        pref = [0]
        nxt = [0]
        seen = [False] * n
        seen[root] = True
        while path:
            depth = len(path) - 1
            b = path[depth]
            u = nxt[depth]
            if u >= n:
                if depth < eager_depth:
                    seen[b] = False
                path.pop()
                pref.pop()
                nxt.pop()
                continue
            nxt[depth] = u + 1
            x = w[b][u]
            if u == b or x >= INF64:
                continue
            val = pref[depth] + x
            if u == root:
                if depth >= 1 and val < bound:
                    out.append((tuple(path), val))
                continue
            if val >= bound:
                continue
            back = sp[u][root]
            if back >= INF64 or val + back >= bound:
                continue
            if depth + 1 < eager_depth:
                if seen[u]:
                    continue
            elif u in path:
                continue
            nodes += 1
            if nodes > node_budget or (deadline > 0 and nodes & 1023 == 0 and time.monotonic() > deadline):
                exhausted = True
                break
            path.append(u)
            pref.append(val)
            nxt.append(0)
            if depth + 1 < eager_depth:
                seen[u] = True
        if exhausted:
            break
    return out, nodes, exhausted
