"""Exact maximum transport on a bipartite row/column network (Edmonds-Karp)."""
from collections import deque

import numpy as np

_EPS = 1e-15


def max_transport(rows: np.ndarray, cols: np.ndarray, allowed: np.ndarray) -> np.ndarray:
    """
    Largest total mass placeable on the ``allowed`` cells of a nonnegative grid whose row and
    column sums are bounded by ``rows`` and ``cols``.

    Network: source -> row i (capacity rows[i]) -> col j (unbounded, allowed cells only)
    -> sink (capacity cols[j]). Augmentations only add and subtract capacities, so the
    result is exact up to floating-point summation.

    :return: the flow as an (n_rows, n_cols) array, zero outside ``allowed``.
    """
    nr, nc = len(rows), len(cols)
    src, sink = nr + nc, nr + nc + 1
    size = nr + nc + 2
    cap = np.zeros((size, size))
    cap[src, :nr] = rows
    cap[nr:nr + nc, sink] = cols
    big = float(np.sum(rows) + np.sum(cols)) + 1.0
    r_idx, c_idx = np.nonzero(allowed)
    cap[r_idx, nr + c_idx] = big
    flow = np.zeros_like(cap)

    while True:
        parent = [-1] * size
        parent[src] = src
        queue = deque([src])
        while queue and parent[sink] < 0:
            u = queue.popleft()
            for v in np.nonzero(cap[u] - flow[u] > _EPS)[0]:
                if parent[v] < 0:
                    parent[v] = u
                    queue.append(v)
        if parent[sink] < 0:
            break
        path = []
        v = sink
        while v != src:
            path.append((parent[v], v))
            v = parent[v]
        push = min(cap[u, v] - flow[u, v] for u, v in path)
        for u, v in path:
            flow[u, v] += push
            flow[v, u] -= push

    out = flow[:nr, nr:nr + nc].copy()
    out[out < 0] = 0.0
    return out


def northwest_fill(rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
    """Northwest-corner feasible grid for marginals with equal totals."""
    r, c = np.array(rows, dtype=float), np.array(cols, dtype=float)
    grid = np.zeros((len(r), len(c)))
    i = j = 0
    while i < len(r) and j < len(c):
        m = min(r[i], c[j])
        grid[i, j] = m
        r[i] -= m
        c[j] -= m
        if r[i] <= _EPS:
            i += 1
        else:
            j += 1
    return grid
