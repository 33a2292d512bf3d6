"""Combinatorial horoballs and the cusped space they form with a Cayley ball.

A horoball over a base set carries vertices (x, n) for levels 0..depth, a
vertical edge per column and level, and a horizontal edge between (x, n) and
(y, n) exactly when 0 < d(x, y) <= 2**n.  The cusped space glues one
truncated horoball onto every peripheral coset that meets the ball,
identifying level 0 with the coset's ball vertices.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cayley import CayleyBall, FlaggedDistance
from .errors import InvalidDepthError, InvalidMetricError, TruncationError
from .graphs import Graph, GeodesicDag, bfs_distances, export_edge_list, path_entry_exit
from .words import CosetId, Presentation, Word, invert, multiply


@dataclass
class Horoball:
    """Truncated combinatorial horoball over an abstract finite base.

    Standalone instances own their graph with vertex ids level*m + column.
    Instances embedded in a cusped space only describe the layout; their
    vertices live in the host graph.
    """

    base_size: int
    depth: int
    metric: np.ndarray | None = None
    graph: Graph | None = None
    # embedding data, filled by build_cusped_space
    peripheral_index: int = -1
    rep_word: Word = ()
    rep_col: int = 0
    columns: np.ndarray | None = None  # ball ids of level-0 vertices, axis order
    stride: int = 0  # intrinsic gap between consecutive columns
    offset: int = -1  # first host id of level 1
    low_confidence: bool = False

    def vertex(self, col: int, level: int) -> int:
        if self.graph is not None:
            return level * self.base_size + col
        if level == 0:
            return int(self.columns[col])
        return self.offset + (level - 1) * self.base_size + col

    def column_distance(self, i: int, j: int) -> int:
        if self.metric is not None:
            return int(self.metric[i, j])
        return abs(i - j) * self.stride

    def coset_id(self) -> CosetId:
        return CosetId(self.peripheral_index, self.rep_word)


def _check_metric(metric: np.ndarray) -> None:
    m = metric.shape[0]
    if metric.shape != (m, m):
        raise InvalidMetricError("metric must be square")
    if not np.array_equal(metric, metric.T):
        raise InvalidMetricError("metric must be symmetric")
    if np.any(np.diag(metric) != 0):
        raise InvalidMetricError("metric diagonal must be zero")
    off = metric[~np.eye(m, dtype=bool)]
    if off.size and off.min() <= 0:
        raise InvalidMetricError("metric must be positive off the diagonal")


def build_horoball(metric: np.ndarray, depth: int) -> Horoball:
    """Standalone horoball graph over a base with the given finite metric."""
    if depth < 1:
        raise InvalidDepthError(f"depth must be >= 1, got {depth}")
    metric = np.asarray(metric, dtype=np.int64)
    _check_metric(metric)
    m = metric.shape[0]
    eu: list[int] = []
    ev: list[int] = []
    for n in range(depth):
        for c in range(m):
            eu.append(n * m + c)
            ev.append((n + 1) * m + c)
    for n in range(depth + 1):
        reach = 2**n
        for i in range(m):
            for j in range(i + 1, m):
                if 0 < metric[i, j] <= reach:
                    eu.append(n * m + i)
                    ev.append(n * m + j)
    graph = Graph((depth + 1) * m, np.array(eu), np.array(ev))
    return Horoball(base_size=m, depth=depth, metric=metric, graph=graph)


def layer_distance(hb: Horoball, level: int, i: int, j: int) -> int | None:
    """Hop count between columns i and j using only level-n horizontal edges."""
    m = hb.base_size
    reach = 2**level
    dist = [-1] * m
    dist[i] = 0
    frontier = [i]
    while frontier:
        nxt = []
        for x in frontier:
            for y in range(m):
                if dist[y] < 0 and 0 < hb.column_distance(x, y) <= reach:
                    dist[y] = dist[x] + 1
                    nxt.append(y)
        frontier = nxt
    return dist[j] if dist[j] >= 0 else None


def default_depth(ball: CayleyBall, presentation: Presentation) -> int:
    """Smallest depth whose top layer spans every coset diameter in the ball.

    Beyond ceil(log2(max intrinsic coset diameter)) + 1 the horizontal edges
    already connect everything, so deeper levels only add vertical padding.
    """
    spans = []
    for pi in range(len(presentation.peripherals)):
        h = presentation.cyclic_generator(pi)
        for _, cols in _coset_partition(ball, h):
            if len(cols) > 1:
                spans.append((len(cols) - 1) * len(h))
    if not spans:
        return 1
    return int(np.ceil(np.log2(max(spans)))) + 1


def _coset_partition(ball: CayleyBall, h: Word) -> list[tuple[Word, list[int]]]:
    """Partition ball vertices into <h>-cosets; columns sorted along h-powers."""
    hinv = invert(h)
    assigned = np.zeros(ball.n, dtype=bool)
    cosets: list[tuple[Word, list[int]]] = []
    for v in range(ball.n):
        if assigned[v]:
            continue
        w = ball.words[v]
        forward: list[int] = []
        cur = w
        while True:
            cur = multiply(cur, h)
            idx = ball.index.get(cur)
            if idx is None:
                break
            forward.append(idx)
        backward: list[int] = []
        cur = w
        while True:
            cur = multiply(cur, hinv)
            idx = ball.index.get(cur)
            if idx is None:
                break
            backward.append(idx)
        cols = backward[::-1] + [v] + forward
        for idx in cols:
            if assigned[idx]:
                raise TruncationError(
                    f"coset through {ball.words[v]} is not a line segment in the ball"
                )
            assigned[idx] = True
        rep = min(cols)  # ball ids are shortlex order
        cosets.append((ball.words[rep], cols))
    cosets.sort(key=lambda rc: ball.index[rc[0]])
    return cosets


@dataclass
class CuspedSpace:
    """Cayley ball fused with truncated horoballs over every peripheral coset."""

    ball: CayleyBall
    presentation: Presentation
    depth: int
    horoballs: list[Horoball]
    graph: Graph
    level: np.ndarray = field(repr=False)
    hb_index: np.ndarray = field(repr=False)  # horoball owning ids >= ball.n
    col_index: np.ndarray = field(repr=False)
    frontier_mask: np.ndarray = field(repr=False)
    base_hb: list[np.ndarray] = field(repr=False)  # per peripheral: vertex -> horoball
    delta_hat: float | None = None

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def radius(self) -> int:
        return self.ball.radius

    def horoball_of(self, coset: CosetId) -> Horoball:
        hb = self._by_coset.get((coset.peripheral_index, coset.representative))
        if hb is None:
            raise TruncationError(f"no horoball for coset {coset}")
        return hb

    def coset_of_vertex(self, v: int, peripheral_index: int = 0) -> CosetId:
        if v >= self.ball.n:
            hb = self.horoballs[self.hb_index[v]]
            return hb.coset_id()
        hb = self.horoballs[self.base_hb[peripheral_index][v]]
        return hb.coset_id()

    def horoball_member_ids(self, hb: Horoball) -> np.ndarray:
        upper = np.arange(hb.offset, hb.offset + hb.depth * hb.base_size, dtype=np.int64)
        return np.concatenate([hb.columns.astype(np.int64), upper])

    def deep_vertex(self, hb: Horoball) -> int:
        return hb.vertex(hb.rep_col, self.depth)

    def vertex_label(self, v: int) -> str:
        from .words import word_str

        if v < self.ball.n:
            return word_str(self.ball.words[v]) or "e"
        hb = self.horoballs[self.hb_index[v]]
        col = int(self.col_index[v])
        base = word_str(self.ball.words[hb.columns[col]]) or "e"
        return f"{base}@{int(self.level[v])}"

    # -- metric queries ------------------------------------------------

    def dist(self, u: int, v: int) -> int:
        return self.graph.distance(u, v)

    def dist_flagged(self, u: int, v: int, trim: int = 0) -> FlaggedDistance:
        """Distance plus a flag when some shortest path touches the frontier.

        trim > 0 ignores corridor vertices within trim of either endpoint,
        which is how proxy-anchored measurements discount their forced
        sphere/deep-layer endpoints.
        """
        du = self.graph.distances_from(u)
        dv = self.graph.distances_from(v)
        d = int(du[v])
        corridor = (du >= 0) & (dv >= 0) & (du + dv == d)
        if trim > 0:
            corridor &= (du > trim) & (dv > trim)
        return FlaggedDistance(d, bool(np.any(corridor & self.frontier_mask)))

    def geodesic(self, u: int, v: int) -> list[int]:
        return self.graph.canonical_geodesic(u, v)

    def all_geodesics_dag(self, u: int, v: int) -> GeodesicDag:
        return self.graph.geodesic_dag(u, v)

    def entry_exit_on_set(self, path, region) -> tuple[int | None, int | None]:
        return path_entry_exit(path, region)

    def ball_interior_ids(self, max_len: int) -> np.ndarray:
        return np.flatnonzero(self.ball.lengths() <= max_len).astype(np.int32)

    # -- export ---------------------------------------------------------

    def manifest(self) -> dict:
        return {
            "radius": self.radius,
            "depth": self.depth,
            "vertex_count": self.n,
            "ball_vertex_count": self.ball.n,
            "edge_count": self.graph.num_edges,
            "horoballs": [
                {
                    "peripheral": hb.peripheral_index,
                    "representative": self.vertex_label(int(hb.columns[hb.rep_col])),
                    "base_size": hb.base_size,
                    "low_confidence": hb.low_confidence,
                }
                for hb in self.horoballs
            ],
        }

    def export(self, prefix: str) -> None:
        import json

        with open(f"{prefix}.manifest.json", "w") as fh:
            json.dump(self.manifest(), fh, indent=2, sort_keys=True)
        export_edge_list(self.graph, f"{prefix}.edges.txt")


def build_cusped_space(ball: CayleyBall, presentation: Presentation, depth: int) -> CuspedSpace:
    if depth < 1:
        raise InvalidDepthError(f"depth must be >= 1, got {depth}")
    eu: list[np.ndarray] = []
    ev: list[np.ndarray] = []

    # ball tree edges
    tree_u = []
    tree_v = []
    g = ball.graph
    for u in range(ball.n):
        for v in g.neighbors(u):
            if u < v:
                tree_u.append(u)
                tree_v.append(int(v))
    eu.append(np.array(tree_u, dtype=np.int64))
    ev.append(np.array(tree_v, dtype=np.int64))

    horoballs: list[Horoball] = []
    base_hb: list[np.ndarray] = []
    next_id = ball.n
    for pi in range(len(presentation.peripherals)):
        h = presentation.cyclic_generator(pi)
        stride = len(h)
        owner = np.full(ball.n, -1, dtype=np.int32)
        for rep_word, cols in _coset_partition(ball, h):
            m = len(cols)
            columns = np.array(cols, dtype=np.int32)
            hb = Horoball(
                base_size=m,
                depth=depth,
                peripheral_index=pi,
                rep_word=rep_word,
                rep_col=int(np.argmin(columns)),
                columns=columns,
                stride=stride,
                offset=next_id,
                low_confidence=m < 3,
            )
            owner[columns] = len(horoballs)
            horoballs.append(hb)
            next_id += depth * m

            # vertical edges, level 0 uses the ball ids
            lo = columns.astype(np.int64)
            hi = hb.offset + np.arange(m, dtype=np.int64)
            eu.append(lo)
            ev.append(hi)
            for n in range(1, depth):
                lo = hb.offset + (n - 1) * m + np.arange(m, dtype=np.int64)
                eu.append(lo)
                ev.append(lo + m)
            # horizontal edges; level 0 would duplicate Cayley edges (they
            # exist only when stride == 1) so start at level 1
            for n in range(1, depth + 1):
                reach = (2**n) // stride
                if reach < 1:
                    continue
                for t in range(1, min(reach, m - 1) + 1):
                    lo = hb.offset + (n - 1) * m + np.arange(m - t, dtype=np.int64)
                    eu.append(lo)
                    ev.append(lo + t)

    total = next_id
    all_u = np.concatenate(eu) if eu else np.empty(0, dtype=np.int64)
    all_v = np.concatenate(ev) if ev else np.empty(0, dtype=np.int64)
    graph = Graph(total, all_u.astype(np.int32), all_v.astype(np.int32))

    level = np.zeros(total, dtype=np.int16)
    hb_index = np.full(total, -1, dtype=np.int32)
    col_index = np.full(total, -1, dtype=np.int32)
    for i, hb in enumerate(horoballs):
        m = hb.base_size
        ids = np.arange(hb.offset, hb.offset + depth * m)
        level[ids] = (np.arange(depth * m) // m) + 1
        hb_index[ids] = i
        col_index[ids] = np.arange(depth * m) % m
        col_index[hb.columns] = np.arange(m)

    frontier = np.zeros(total, dtype=bool)
    frontier[ball.sphere] = True
    frontier[level == depth] = True

    for pi in range(len(presentation.peripherals)):
        owner = np.full(ball.n, -1, dtype=np.int32)
        base_hb.append(owner)
    for i, hb in enumerate(horoballs):
        base_hb[hb.peripheral_index][hb.columns] = i

    cs = CuspedSpace(
        ball=ball,
        presentation=presentation,
        depth=depth,
        horoballs=horoballs,
        graph=graph,
        level=level,
        hb_index=hb_index,
        col_index=col_index,
        frontier_mask=frontier,
        base_hb=base_hb,
    )
    cs._by_coset = {(hb.peripheral_index, hb.rep_word): hb for hb in horoballs}
    return cs


def horoball_entry_vertex(cs: CuspedSpace, path, hb: Horoball) -> int | None:
    """First vertex of the path inside the horoball (necessarily level 0
    when the path starts outside)."""
    members = set(int(x) for x in cs.horoball_member_ids(hb))
    for w in path:
        if int(w) in members:
            return int(w)
    return None
