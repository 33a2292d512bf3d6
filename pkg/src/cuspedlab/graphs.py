"""Unweighted-graph engine: CSR storage, frontier BFS, canonical geodesics.

All spaces in this package (Cayley balls, horoballs, cusped spaces) are
unit-edge graphs stored as a symmetric CSR structure.  Distances come from a
vectorized frontier BFS; canonical geodesics break ties toward the smallest
vertex id, which pins down every derived quantity deterministically.
"""

from __future__ import annotations

import threading
from collections import OrderedDict

import numpy as np

UNREACHED = -1


def build_csr(n: int, edges_u: np.ndarray, edges_v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Symmetric CSR (indptr, indices) from undirected edge endpoint arrays."""
    rows = np.concatenate([edges_u, edges_v])
    cols = np.concatenate([edges_v, edges_u])
    order = np.lexsort((cols, rows))
    rows = rows[order]
    cols = cols[order]
    counts = np.bincount(rows, minlength=n)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    return indptr, cols.astype(np.int32)


def _gather_neighbors(indptr: np.ndarray, indices: np.ndarray, frontier: np.ndarray) -> np.ndarray:
    starts = indptr[frontier]
    counts = indptr[frontier + 1] - starts
    total = int(counts.sum())
    if total == 0:
        return np.empty(0, dtype=indices.dtype)
    offs = np.repeat(starts + counts - np.cumsum(counts), counts) + np.arange(total)
    return indices[offs]


def bfs_distances(
    indptr: np.ndarray,
    indices: np.ndarray,
    n: int,
    sources,
    max_depth: int | None = None,
    stop_targets: np.ndarray | None = None,
) -> np.ndarray:
    """Distances from a source set; -1 where unreached.

    ``max_depth`` bounds the exploration radius.  ``stop_targets`` (a vertex
    id array) ends the search as soon as every target has a distance, so
    local queries stay local.
    """
    dist = np.full(n, UNREACHED, dtype=np.int32)
    frontier = np.unique(np.asarray(sources, dtype=np.int32))
    dist[frontier] = 0
    d = 0
    while frontier.size:
        if stop_targets is not None and np.all(dist[stop_targets] >= 0):
            break
        if max_depth is not None and d >= max_depth:
            break
        neigh = _gather_neighbors(indptr, indices, frontier)
        if neigh.size == 0:
            break
        neigh = neigh[dist[neigh] < 0]
        if neigh.size == 0:
            break
        d += 1
        dist[neigh] = d
        frontier = np.unique(neigh)
    return dist


class Graph:
    """Immutable unit-edge graph with a bounded per-source distance cache."""

    def __init__(self, n: int, edges_u, edges_v, cache_bytes: int = 256 * 1024 * 1024):
        self.n = int(n)
        eu = np.asarray(edges_u, dtype=np.int32)
        ev = np.asarray(edges_v, dtype=np.int32)
        self.indptr, self.indices = build_csr(self.n, eu, ev)
        self.num_edges = len(eu)
        per_entry = max(4 * self.n, 1)
        self._cache_cap = max(16, cache_bytes // per_entry)
        self._cache: OrderedDict[int, np.ndarray] = OrderedDict()
        self._lock = threading.Lock()

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    def distances_from(self, source: int) -> np.ndarray:
        """Full distance array from one vertex, LRU-cached."""
        source = int(source)
        with self._lock:
            hit = self._cache.get(source)
            if hit is not None:
                self._cache.move_to_end(source)
                return hit
        dist = bfs_distances(self.indptr, self.indices, self.n, [source])
        dist.setflags(write=False)
        with self._lock:
            self._cache[source] = dist
            if len(self._cache) > self._cache_cap:
                self._cache.popitem(last=False)
        return dist

    def distances_from_set(
        self,
        sources,
        max_depth: int | None = None,
        stop_targets: np.ndarray | None = None,
    ) -> np.ndarray:
        return bfs_distances(
            self.indptr, self.indices, self.n, sources, max_depth=max_depth, stop_targets=stop_targets
        )

    def distance(self, u: int, v: int) -> int:
        d = int(self.distances_from(u)[v])
        if d < 0:
            raise ValueError(f"vertices {u} and {v} are disconnected")
        return d

    def canonical_geodesic(self, u: int, v: int) -> list[int]:
        """The id-lexicographically least shortest path from u to v."""
        u = int(u)
        v = int(v)
        if u == v:
            return [u]
        du = self.distances_from(u)
        dv = self.distances_from(v)
        total = int(du[v])
        if total < 0:
            raise ValueError(f"vertices {u} and {v} are disconnected")
        path = [u]
        cur = u
        for step in range(1, total + 1):
            nbrs = self.neighbors(cur)
            ok = nbrs[(du[nbrs] == step) & (du[nbrs] + dv[nbrs] == total)]
            cur = int(ok.min())
            path.append(cur)
        return path

    def geodesic_dag(self, u: int, v: int) -> "GeodesicDag":
        du = self.distances_from(u)
        dv = self.distances_from(v)
        total = int(du[v])
        if total < 0:
            raise ValueError(f"vertices {u} and {v} are disconnected")
        mask = (du >= 0) & (dv >= 0) & (du + dv == total)
        verts = np.flatnonzero(mask).astype(np.int32)
        return GeodesicDag(self, int(u), int(v), total, verts, du, dv)


class GeodesicDag:
    """Vertices lying on some shortest u-v path, layered by distance from u."""

    def __init__(self, graph: Graph, u: int, v: int, total: int, verts: np.ndarray, du, dv):
        self.graph = graph
        self.u = u
        self.v = v
        self.length = total
        self.vertices = verts
        self._du = du
        self._dv = dv
        self._member = None

    def member_mask(self) -> np.ndarray:
        if self._member is None:
            m = np.zeros(self.graph.n, dtype=bool)
            m[self.vertices] = True
            self._member = m
        return self._member

    def depth(self, w: int) -> int:
        return int(self._du[w])

    def successors(self, w: int) -> np.ndarray:
        nbrs = self.graph.neighbors(w)
        m = self.member_mask()
        return nbrs[m[nbrs] & (self._du[nbrs] == self._du[w] + 1)]

    def width(self) -> int:
        if self.vertices.size == 0:
            return 0
        layers = np.bincount(self._du[self.vertices])
        return int(layers.max())

    def last_exit_vertices(self, region: np.ndarray) -> list[int]:
        """Region vertices that end the region-visit of some shortest path.

        A vertex w qualifies when some shortest path goes through w and never
        meets the region again after w.  Computed by a clean-suffix DP from v
        backwards through the DAG layers.
        """
        region_mask = np.zeros(self.graph.n, dtype=bool)
        region_mask[np.asarray(region, dtype=np.int64)] = True
        clean = {self.v: True}
        order = sorted(self.vertices.tolist(), key=lambda w: -int(self._du[w]))
        for w in order:
            if w == self.v:
                continue
            ok = False
            for s in self.successors(w):
                s = int(s)
                if not region_mask[s] and clean.get(s, False):
                    ok = True
                    break
            clean[w] = ok
        return sorted(int(w) for w in self.vertices if region_mask[w] and clean[int(w)])


def path_entry_exit(path, region) -> tuple[int | None, int | None]:
    """First and last path vertex inside the region, or (None, None)."""
    region = set(int(x) for x in region)
    entry = None
    exit_ = None
    for w in path:
        if int(w) in region:
            if entry is None:
                entry = int(w)
            exit_ = int(w)
    return entry, exit_


def export_edge_list(graph: Graph, path) -> None:
    """Plain-text export: header with the vertex count, then one edge per line."""
    indptr, indices = graph.indptr, graph.indices
    with open(path, "w") as fh:
        fh.write(f"{graph.n} {graph.num_edges}\n")
        for u in range(graph.n):
            for v in indices[indptr[u] : indptr[u + 1]]:
                if u < v:
                    fh.write(f"{u} {v}\n")
