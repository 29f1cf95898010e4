"""Pure numpy/scipy fallback kernels, same contracts as the numba versions."""

from __future__ import annotations

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components


def component_labels(n_vertices, tails, heads):
    if tails.shape[0] == 0:
        return np.arange(n_vertices, dtype=np.int64)
    data = np.ones(tails.shape[0], dtype=np.int8)
    adj = coo_matrix((data, (tails, heads)), shape=(n_vertices, n_vertices))
    n_comp, comp = connected_components(adj, directed=False)
    minima = np.full(n_comp, n_vertices, dtype=np.int64)
    np.minimum.at(minima, comp, np.arange(n_vertices, dtype=np.int64))
    return minima[comp]


def extend_candidates(mono_src, mono_tgt, order, pvert, pcol, candidates):
    n_vertices = mono_src.shape[1]
    # group BFS positions into layers so each candidate fills sigma with O(depth)
    # fancy-indexing steps instead of a per-vertex python loop
    depth = np.zeros(n_vertices, dtype=np.int64)
    pos = np.empty(n_vertices, dtype=np.int64)
    pos[order] = np.arange(n_vertices)
    for t in range(1, n_vertices):
        v = order[t]
        depth[v] = depth[pvert[v]] + 1
    layers = []
    max_depth = int(depth.max()) if n_vertices else 0
    for d in range(1, max_depth + 1):
        vs = np.flatnonzero(depth == d)
        layers.append((vs, pvert[vs], pcol[vs]))
    rows = []
    sigma = np.empty(n_vertices, dtype=np.int64)
    for w0 in candidates:
        sigma[order[0]] = w0
        for vs, pv, pc in layers:
            sigma[vs] = mono_tgt[pc, sigma[pv]]
        if np.array_equal(sigma[mono_src], mono_tgt[:, sigma]):
            rows.append(sigma.copy())
    if not rows:
        return np.empty((0, n_vertices), dtype=np.int64)
    return np.stack(rows)
