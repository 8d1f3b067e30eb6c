"""Seeded random and structured instances for experiments and tests."""
from __future__ import annotations

import numpy as np
from scipy.spatial.distance import cdist

from .graphs import Graph, graph_metric
from .measures import ProbabilityMeasure
from .metric import Cover, FiniteMetricSpace, ball
from .pou import PartitionOfUnity, SparseL1Vector


def line_space(positions) -> FiniteMetricSpace:
    p = np.asarray(positions, dtype=float).reshape(-1, 1)
    return FiniteMetricSpace(cdist(p, p, "cityblock"), validate=False)


def random_connected_graph(rng: np.random.Generator, n: int, p: float = 0.15) -> Graph:
    """Random spanning tree plus independent extra edges with probability ``p``."""
    order = rng.permutation(n)
    edges = {tuple(sorted((int(order[i]), int(order[rng.integers(0, i)])))) for i in range(1, n)}
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                edges.add((u, v))
    return Graph(n, edges)


def random_metric_space(rng: np.random.Generator, n: int, kind: str | None = None) -> FiniteMetricSpace:
    """Euclidean plane points, a weighted graph metric, or an unweighted graph metric."""
    kind = kind or ["euclidean", "weighted", "graph"][int(rng.integers(0, 3))]
    if kind == "euclidean":
        pts = rng.uniform(0, 10, size=(n, 2))
        return FiniteMetricSpace(cdist(pts, pts))
    G = random_connected_graph(rng, n, float(rng.uniform(0.05, 0.3)))
    if kind == "graph":
        return graph_metric(G)
    from scipy.sparse import csr_matrix
    from scipy.sparse.csgraph import shortest_path

    es = np.array(sorted(G.edges), dtype=int).reshape(-1, 2)
    w = rng.integers(1, 6, size=len(es)).astype(float)
    A = csr_matrix((np.r_[w, w], (np.r_[es[:, 0], es[:, 1]], np.r_[es[:, 1], es[:, 0]])), shape=(n, n))
    return FiniteMetricSpace(shortest_path(A, directed=False))


def random_cover(rng: np.random.Generator, X: FiniteMetricSpace, max_radius: float | None = None) -> Cover:
    """Balls at random centers and radii until the space is covered."""
    diam = X.diameter() or 1.0
    max_radius = max_radius or diam / 2 + 1
    sets, covered = [], set()
    while len(covered) < X.n:
        x = int(rng.choice([p for p in range(X.n) if p not in covered]))
        B = ball(X, x, float(rng.uniform(0.5, max_radius)))
        sets.append(B)
        covered |= B
    return Cover.from_sets(X, sets)


def closed_ball_cover(X: FiniteMetricSpace, radius: float, centers=None) -> Cover:
    """``{y : d(c, y) <= radius}`` for each center (default every point)."""
    centers = range(X.n) if centers is None else centers
    return Cover(X, [(c, frozenset(np.flatnonzero(X.dist[c] <= radius + 1e-9).tolist())) for c in centers])


def random_measure(rng: np.random.Generator, X: FiniteMetricSpace, support: int | None = None) -> ProbabilityMeasure:
    """Random weights on a random support; weights are dyadic so sums are exact."""
    k = support or int(rng.integers(1, X.n + 1))
    pts = rng.choice(X.n, size=k, replace=False)
    raw = rng.integers(1, 16, size=k).astype(float)
    w = np.zeros(X.n)
    w[pts] = raw
    total = w.sum()
    # round to a power-of-two denominator, then fix the sum on the largest entry
    scale = 2.0**20
    w = np.floor(w / total * scale) / scale
    w[pts[np.argmax(raw)]] += 1.0 - w.sum()
    return ProbabilityMeasure(X, w)


def random_partition(rng: np.random.Generator, X: FiniteMetricSpace, n: int, labels: int = 8) -> PartitionOfUnity:
    """Random partition with carriers of size at most ``n + 1``."""
    values = []
    for _ in range(X.n):
        k = int(rng.integers(1, min(n + 1, labels) + 1))
        carrier = rng.choice(labels, size=k, replace=False)
        w = rng.uniform(0.05, 1.0, size=k)
        w /= w.sum()
        values.append(SparseL1Vector({f"v{int(c)}": float(a) for c, a in zip(carrier, w)}))
    return PartitionOfUnity(X, values, [f"v{i}" for i in range(labels)])
