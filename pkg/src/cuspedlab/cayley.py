"""Radius-R balls of free-group Cayley graphs with exact word metric."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetExceededError, PresentationError
from .graphs import Graph, export_edge_list
from .words import Presentation, Word, invert, multiply

DEFAULT_VERTEX_BUDGET = 3_000_000


def ball_size(rank: int, radius: int) -> int:
    """Number of reduced words of length <= radius in a rank-k free group."""
    k2 = 2 * rank
    if radius == 0:
        return 1
    if rank == 1:
        return 1 + 2 * radius
    return 1 + k2 * ((k2 - 1) ** radius - 1) // (k2 - 2)


@dataclass
class FlaggedDistance:
    value: int
    suspect: bool


@dataclass
class CayleyBall:
    """All reduced words of length <= radius, with tree adjacency.

    Vertex ids follow the deterministic BFS from the identity, which for the
    generator order a < a^-1 < b < b^-1 < ... coincides with shortlex order.
    """

    presentation: Presentation
    radius: int
    words: list[Word]
    index: dict[Word, int]
    graph: Graph
    sphere: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return len(self.words)

    def __contains__(self, w: Word) -> bool:
        return w in self.index

    def id_of(self, w: Word) -> int:
        return self.index[w]

    def word_of(self, v: int) -> Word:
        return self.words[v]

    def lengths(self) -> np.ndarray:
        return self._lengths

    def graph_distance(self, u: int, v: int) -> FlaggedDistance:
        """BFS distance inside the ball.

        The suspect flag follows the conservative rule: a pair certifies an
        in-ball geodesic only when |u| + |v| <= radius, even though in a tree
        the computed value is exact for every pair.
        """
        wu, wv = self.words[u], self.words[v]
        value = self.graph.distance(u, v)
        return FlaggedDistance(value, len(wu) + len(wv) > self.radius)

    def export_edges(self, path) -> None:
        export_edge_list(self.graph, path)


def build_ball(
    presentation: Presentation, radius: int, vertex_budget: int = DEFAULT_VERTEX_BUDGET
) -> CayleyBall:
    if radius < 1:
        raise PresentationError(f"radius must be >= 1, got {radius}")
    if presentation.rank < 1:
        raise PresentationError("rank must be >= 1")
    projected = ball_size(presentation.rank, radius)
    if projected > vertex_budget:
        raise BudgetExceededError(projected, vertex_budget)

    letters = []
    for g in range(1, presentation.rank + 1):
        letters.extend([g, -g])

    words: list[Word] = [()]
    index: dict[Word, int] = {(): 0}
    edges_u: list[int] = []
    edges_v: list[int] = []
    head = 0
    while head < len(words):
        w = words[head]
        if len(w) < radius:
            last = w[-1] if w else 0
            for g in letters:
                if g == -last:
                    continue
                child = w + (g,)
                index[child] = len(words)
                words.append(child)
                edges_u.append(head)
                edges_v.append(index[child])
        head += 1

    assert len(words) == projected
    graph = Graph(len(words), np.array(edges_u, dtype=np.int32), np.array(edges_v, dtype=np.int32))
    lengths = np.fromiter((len(w) for w in words), dtype=np.int32, count=len(words))
    ball = CayleyBall(
        presentation=presentation,
        radius=radius,
        words=words,
        index=index,
        graph=graph,
        sphere=np.flatnonzero(lengths == radius).astype(np.int32),
    )
    ball._lengths = lengths
    return ball


def word_distance(u: Word, v: Word) -> int:
    """Exact free-group word metric, independent of any ball truncation."""
    return len(multiply(invert(u), v))
