"""Numba-compiled kernels. Import only through maniplexes._kernels."""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def component_labels(n_vertices, tails, heads):
    """Label each vertex with the minimum vertex id of its connected component.

    tails/heads are parallel arrays of edge endpoints (already filtered to the
    edges that should count). Isolated vertices keep their own id.
    """
    parent = np.arange(n_vertices, dtype=np.int64)
    for k in range(tails.shape[0]):
        a = tails[k]
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        b = heads[k]
        while parent[b] != b:
            parent[b] = parent[parent[b]]
            b = parent[b]
        if a != b:
            if a < b:
                parent[b] = a
            else:
                parent[a] = b
    labels = np.empty(n_vertices, dtype=np.int64)
    for v in range(n_vertices):
        r = v
        while parent[r] != r:
            r = parent[r]
        # roots are component minima because unions always hang the larger root
        labels[v] = r
        a = v
        while parent[a] != a:
            nxt = parent[a]
            parent[a] = r
            a = nxt
    return labels


@njit(cache=True)
def extend_candidates(mono_src, mono_tgt, order, pvert, pcol, candidates):
    """Try to extend each candidate base-vertex image to a full equivariant map.

    mono_src/mono_tgt give, per color c and vertex v, the vertex reached from v
    across its color-c edge in the source and target premaniplex. order is a BFS
    ordering of all source vertices starting at the base; pvert/pcol give, per
    vertex, the BFS parent and the color used to reach it (base entries unused).
    A candidate image w0 of the base determines at most one equivariant vertex
    map; returns the rows verifying sigma[mono_src[c, v]] == mono_tgt[c, sigma[v]]
    everywhere. Pass the same array twice for automorphism search.
    """
    n_colors, n_vertices = mono_src.shape
    out = np.empty((candidates.shape[0], n_vertices), dtype=np.int64)
    count = 0
    sigma = np.empty(n_vertices, dtype=np.int64)
    for idx in range(candidates.shape[0]):
        sigma[order[0]] = candidates[idx]
        for t in range(1, n_vertices):
            v = order[t]
            sigma[v] = mono_tgt[pcol[v], sigma[pvert[v]]]
        ok = True
        for c in range(n_colors):
            for v in range(n_vertices):
                if sigma[mono_src[c, v]] != mono_tgt[c, sigma[v]]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out[count] = sigma
            count += 1
    return out[:count].copy()
