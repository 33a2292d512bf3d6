"""Gromov products, triangle slimness/thinness, and empirical delta estimates."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cusped import CuspedSpace
from .errors import SamplingStarvedError
from .graphs import bfs_distances


def realize(x) -> int:
    """Vertex id of a vertex-or-proxy argument."""
    return int(x.realization) if hasattr(x, "realization") else int(x)


def gromov_product(cs: CuspedSpace, a, b, base) -> float:
    """(a, b) product with respect to the base point, a half-integer >= 0."""
    va, vb, vp = realize(a), realize(b), realize(base)
    return 0.5 * (cs.dist(va, vp) + cs.dist(vb, vp) - cs.dist(va, vb))


@dataclass
class TriangleMeasurement:
    vertices: tuple[int, int, int]
    sides: tuple[list[int], list[int], list[int]]  # (a,b), (b,c), (a,c)
    slimness: int
    thinness: int
    internal_points: tuple[int, int, int]  # on (b,c), (a,c), (a,b)
    suspect: bool


def _pair_distance(cs: CuspedSpace, u: int, v: int) -> int:
    d = bfs_distances(
        cs.graph.indptr, cs.graph.indices, cs.n, [u], stop_targets=np.array([v])
    )[v]
    return int(d)


def measure_triangle(cs: CuspedSpace, a, b, c) -> TriangleMeasurement:
    """Exact slimness and thinness of the canonical-geodesic triangle on a, b, c."""
    va, vb, vc = realize(a), realize(b), realize(c)
    if len({va, vb, vc}) != 3:
        raise ValueError("triangle vertices must be distinct")
    side_ab = cs.geodesic(va, vb)
    side_bc = cs.geodesic(vb, vc)
    side_ac = cs.geodesic(va, vc)

    slim = 0
    sides = [side_ab, side_bc, side_ac]
    for i, side in enumerate(sides):
        others = np.array(
            sorted(set(sides[(i + 1) % 3]) | set(sides[(i + 2) % 3])), dtype=np.int64
        )
        targets = np.array(side, dtype=np.int64)
        dist = bfs_distances(
            cs.graph.indptr, cs.graph.indices, cs.n, others, stop_targets=targets
        )
        slim = max(slim, int(dist[targets].max()))

    d_ab = len(side_ab) - 1
    d_bc = len(side_bc) - 1
    d_ac = len(side_ac) - 1
    prod_a = (d_ab + d_ac - d_bc) / 2
    prod_b = (d_ab + d_bc - d_ac) / 2
    prod_c = (d_ac + d_bc - d_ab) / 2

    # internal points sit at the floored Gromov product along each side
    i_c = side_ab[int(prod_a)]
    i_b = side_ac[int(prod_a)]
    i_a = side_bc[int(prod_b)]

    thin = 0
    for t in range(1, int(prod_a) + 1):
        thin = max(thin, _pair_distance(cs, side_ab[t], side_ac[t]))
    for t in range(1, int(prod_b) + 1):
        thin = max(thin, _pair_distance(cs, side_ab[d_ab - t], side_bc[t]))
    for t in range(1, int(prod_c) + 1):
        thin = max(thin, _pair_distance(cs, side_ac[d_ac - t], side_bc[d_bc - t]))

    suspect = any(
        cs.dist_flagged(u, v).suspect for u, v in ((va, vb), (vb, vc), (va, vc))
    )
    return TriangleMeasurement(
        vertices=(va, vb, vc),
        sides=(side_ab, side_bc, side_ac),
        slimness=slim,
        thinness=thin,
        internal_points=(int(i_a), int(i_b), int(i_c)),
        suspect=suspect,
    )


@dataclass
class DeltaEstimate:
    sample_count: int
    max_slimness: int
    max_thinness: int
    histogram: dict[int, int] = field(default_factory=dict)
    flag_rejection_fraction: float = 0.0
    triangles: list[TriangleMeasurement] = field(default_factory=list, repr=False)

    @property
    def delta_hat(self) -> int:
        return self.max_slimness


def estimate_delta(
    cs: CuspedSpace,
    n_samples: int,
    min_separation: int = 2,
    seed: int = 0,
    compute_thinness: bool = True,
    keep_triangles: bool = True,
) -> DeltaEstimate:
    """Sampled delta estimate over separated, unflagged vertex triples.

    Deterministic for a fixed seed.  Sets ``cs.delta_hat`` as a side effect so
    downstream coarse operations can localize their searches.
    """
    if n_samples < 1:
        raise ValueError(f"n_samples must be >= 1, got {n_samples}")
    rng = np.random.default_rng(seed)
    max_tries = 80 * n_samples
    accepted: list[TriangleMeasurement] = []
    rejected_flags = 0
    tried = 0
    histogram: dict[int, int] = {}
    max_slim = 0
    max_thin = 0
    while len(accepted) < n_samples and tried < max_tries:
        tried += 1
        trip = rng.choice(cs.n, size=3, replace=False)
        va, vb, vc = (int(x) for x in trip)
        pairs = ((va, vb), (vb, vc), (va, vc))
        fds = [cs.dist_flagged(u, v) for u, v in pairs]
        if any(fd.value < min_separation for fd in fds):
            continue
        if any(fd.suspect for fd in fds):
            rejected_flags += 1
            continue
        tri = measure_triangle(cs, va, vb, vc)
        if not compute_thinness:
            tri.thinness = tri.slimness
        accepted.append(tri)
        histogram[tri.slimness] = histogram.get(tri.slimness, 0) + 1
        max_slim = max(max_slim, tri.slimness)
        max_thin = max(max_thin, tri.thinness)
    if len(accepted) < n_samples:
        raise SamplingStarvedError(n_samples, len(accepted), "separated unflagged triples")
    est = DeltaEstimate(
        sample_count=len(accepted),
        max_slimness=max_slim,
        max_thinness=max_thin,
        histogram=dict(sorted(histogram.items())),
        flag_rejection_fraction=rejected_flags / tried if tried else 0.0,
        triangles=accepted if keep_triangles else [],
    )
    cs.delta_hat = float(max_slim)
    return est
