"""Graphs and finite groups as metric spaces, with the expander-side checks.

Cheeger constants are found by exhaustive subset search (vectorized over
bitmasks); halo searches enumerate subsets directly.  Group products are kept
implicit so that Cayley graphs of ``G^n`` never need a full multiplication
table.
"""
from __future__ import annotations

import itertools
import math
import warnings
from collections import deque
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, shortest_path

from . import config
from .errors import PreconditionError, ValidationError
from .metric import INF, Cover, FiniteMetricSpace, horizon_counts
from .pou import PartitionOfUnity, SparseL1Vector, lipschitz_number

CHEEGER_CAP = 22
PRODUCT_CAP = 2**16


class Graph:
    """Simple undirected graph on vertices ``0..n-1``."""

    def __init__(self, n: int, edges: Iterable[Sequence[int]]):
        if n < 0:
            raise ValidationError(f"vertex count must be nonnegative, got {n}")
        self.n = int(n)
        es = set()
        for e in edges:
            u, v = (int(a) for a in e)
            if not (0 <= u < n and 0 <= v < n):
                raise ValidationError(f"edge ({u},{v}) references a vertex outside 0..{n - 1}")
            if u == v:
                raise ValidationError(f"loop at vertex {u}")
            key = (min(u, v), max(u, v))
            if key in es:
                raise ValidationError(f"multi-edge {key}")
            es.add(key)
        self.edges: frozenset[tuple[int, int]] = frozenset(es)
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in sorted(es):
            adj[u].append(v)
            adj[v].append(u)
        self.adj = [tuple(sorted(a)) for a in adj]

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={len(self.edges)})"

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    def min_degree(self) -> int:
        return min((len(a) for a in self.adj), default=0)

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        return connected_components(self._sparse(), directed=False)[0] == 1

    def _sparse(self) -> csr_matrix:
        if not self.edges:
            return csr_matrix((self.n, self.n))
        u, v = np.array(sorted(self.edges)).T
        return csr_matrix((np.ones(len(u)), (u, v)), shape=(self.n, self.n))

    def bfs(self, source: int) -> list[float]:
        dist = [INF] * self.n
        dist[source] = 0
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for w in self.adj[u]:
                if dist[w] == INF:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return dist

    def edge_boundary(self, A: Iterable[int]) -> frozenset[tuple[int, int]]:
        A = set(A)
        return frozenset(e for e in self.edges if (e[0] in A) != (e[1] in A))

    def neighbors_of_set(self, A: Iterable[int]) -> frozenset[int]:
        A = set(A)
        return frozenset(w for a in A for w in self.adj[a]) - A


def graph_metric(G: Graph) -> FiniteMetricSpace:
    """Shortest-path metric with unit edge lengths."""
    if not G.is_connected():
        raise ValidationError("graph is disconnected; shortest-path metric is not finite")
    D = shortest_path(G._sparse(), directed=False, unweighted=True)
    return FiniteMetricSpace(D, validate=False)


def girth(G: Graph) -> float:
    """Length of a shortest cycle (``inf`` for forests), by BFS from every vertex."""
    best = INF
    for root in range(G.n):
        dist = [-1] * G.n
        parent = [-1] * G.n
        dist[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            if 2 * dist[u] + 1 >= best:
                break
            for w in G.adj[u]:
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif w != parent[u]:
                    best = min(best, dist[u] + dist[w] + 1)
    return best


@dataclass(frozen=True)
class CheegerResult:
    h: Fraction
    subset: tuple[int, ...]
    exact: bool


def _popcount(a: np.ndarray) -> np.ndarray:
    if hasattr(np, "bitwise_count"):
        return np.bitwise_count(a).astype(np.int64)
    out = np.zeros_like(a)
    b = a.copy()
    while b.any():
        out += b & 1
        b >>= 1
    return out


def cheeger_constant(G: Graph, cap: int = CHEEGER_CAP, heuristic: bool = False) -> CheegerResult:
    """Exact edge-expansion minimum over subsets with ``0 < |A| <= n/2``.

    The returned subset is the lexicographically least minimizer.  Above
    ``cap`` vertices an error is raised unless ``heuristic=True``, in which
    case BFS-order sweep cuts give an upper bound marked ``exact=False``.
    """
    n = G.n
    if n < 2:
        raise ValueError("Cheeger constant needs at least two vertices")
    if n > cap:
        if not heuristic:
            raise PreconditionError(f"{n} vertices exceeds the exact-search cap {cap}")
        return _sweep_cheeger(G)
    half = n // 2
    edges = np.array(sorted(G.edges), dtype=np.int64).reshape(-1, 2)
    best_cut = np.full(half + 1, np.iinfo(np.int64).max)
    chunk = 1 << 20
    total = 1 << n
    for start in range(1, total, chunk):
        masks = np.arange(start, min(start + chunk, total), dtype=np.int64)
        size = _popcount(masks)
        keep = size <= half
        masks, size = masks[keep], size[keep]
        cut = np.zeros(len(masks), dtype=np.int64)
        for u, v in edges:
            cut += ((masks >> u) ^ (masks >> v)) & 1
        np.minimum.at(best_cut, size, cut)
    h = min(Fraction(int(best_cut[k]), k) for k in range(1, half + 1))
    # second pass collects every minimizer to pick the lexicographic least
    winners = []
    for start in range(1, total, chunk):
        masks = np.arange(start, min(start + chunk, total), dtype=np.int64)
        size = _popcount(masks)
        keep = size <= half
        masks, size = masks[keep], size[keep]
        cut = np.zeros(len(masks), dtype=np.int64)
        for u, v in edges:
            cut += ((masks >> u) ^ (masks >> v)) & 1
        hit = cut * h.denominator == size * h.numerator
        winners.extend(masks[hit].tolist())
    subsets = [tuple(i for i in range(n) if m >> i & 1) for m in winners]
    return CheegerResult(h, min(subsets), True)


def _sweep_cheeger(G: Graph) -> CheegerResult:
    best = None
    for root in range(G.n):
        order = sorted(range(G.n), key=lambda v, d=G.bfs(root): (d[v], v))
        A: set[int] = set()
        cut = 0
        for k, v in enumerate(order[: G.n // 2], start=1):
            inside = sum(1 for w in G.adj[v] if w in A)
            cut += G.degree(v) - 2 * inside
            A.add(v)
            cand = (Fraction(cut, k), tuple(sorted(A)))
            if best is None or cand < best:
                best = cand
    return CheegerResult(best[0], best[1], False)


def expander_check(G: Graph, k: int, eps: float) -> bool:
    if G.max_degree() > k:
        return False
    h = cheeger_constant(G).h
    return h > 0 and config.le(eps, float(h))


def halo(X: FiniteMetricSpace, A: Iterable[int]) -> frozenset[int]:
    """Points outside A whose open 2-ball meets A."""
    A = X.check_subset(A)
    if not A:
        return frozenset()
    near = X.set_distance(A) < 2 - config.get_tol()
    return frozenset(np.flatnonzero(near).tolist()) - A


@dataclass(frozen=True)
class HaloSearchResult:
    min_ratio: Fraction
    subset: tuple[int, ...]
    exhaustive: bool
    checked: int


def _near_masks(X: FiniteMetricSpace) -> list[int]:
    near = X.ball_matrix(2)
    return [sum(1 << int(j) for j in np.flatnonzero(row)) for row in near]


def halo_ratio_search(
    X: FiniteMetricSpace,
    max_size: int,
    seed: int = 0,
    exhaustive_cap: int = 10**7,
    samples: int = 10**4,
) -> HaloSearchResult:
    """Minimum of ``|halo(A)| / |A|`` over nonempty ``A`` with ``|A| <= max_size``.

    Exhaustive when ``C(n, max_size)`` is at most ``exhaustive_cap``; otherwise
    ``samples`` seeded random subsets are tried and the result is an upper
    bound only.
    """
    n = X.n
    max_size = min(max_size, n)
    if max_size < 1:
        raise ValueError("max_size must be at least 1")
    near = _near_masks(X)

    def ratio(A: Sequence[int]) -> Fraction:
        m = 0
        own = 0
        for a in A:
            m |= near[a]
            own |= 1 << a
        return Fraction(bin(m & ~own).count("1"), len(A))

    best: tuple[Fraction, tuple[int, ...]] | None = None
    exhaustive = math.comb(n, max_size) <= exhaustive_cap
    checked = 0
    if exhaustive:
        candidates = (A for k in range(1, max_size + 1) for A in itertools.combinations(range(n), k))
    else:
        rng = np.random.default_rng(seed)

        def draw():
            for _ in range(samples):
                k = int(rng.integers(1, max_size + 1))
                yield tuple(sorted(rng.choice(n, size=k, replace=False).tolist()))

        candidates = draw()
    for A in candidates:
        checked += 1
        q = ratio(A)
        if best is None or q < best[0]:
            best = (q, A)
    return HaloSearchResult(best[0], best[1], exhaustive, checked)


@dataclass(frozen=True)
class DoubleCountReport:
    lhs: int
    rhs: int
    p_min: Fraction
    c_min: Fraction
    bound_ok: bool | None

    @property
    def identity_holds(self) -> bool:
        return self.lhs == self.rhs


def double_counting_check(G: Graph, U: Cover) -> DoubleCountReport:
    """Count halo incidences two ways and test ``p_min <= 1/(1 + c_min)``.

    ``bound_ok`` is ``None`` when ``c_min == 0`` (the bound is vacuous).
    """
    X = U.space
    if X.n != G.n:
        raise ValueError("cover lives on a different space than the graph")
    lhs = 0
    c_min = None
    for _, pts in U.elements:
        hs = len(halo(X, pts))
        lhs += hs
        q = Fraction(hs, len(pts))
        c_min = q if c_min is None else min(c_min, q)
    at_point = horizon_counts(U, None)
    at_one = horizon_counts(U, 1)
    at_two = horizon_counts(U, 2)
    rhs = int((at_two - at_point).sum())
    p_min = min(Fraction(int(a), int(b)) for a, b in zip(at_one, at_two))
    bound_ok = p_min <= 1 / (1 + c_min) if c_min > 0 else None
    return DoubleCountReport(lhs, rhs, p_min, c_min, bound_ok)


class FiniteGroup:
    """Group on ``0..order-1`` given by a multiplication table.

    ``generators`` are symmetrized (inverses added) with a warning when the
    given set is not closed under inverses.
    """

    def __init__(self, table, identity: int, generators: Iterable[int], validate: bool = True):
        self.table = np.asarray(table, dtype=np.int64)
        self.order = self.table.shape[0]
        self.identity = int(identity)
        if validate:
            self.validate()
        self.inverse = self._inverses()
        self.generators = self._symmetrize(generators)
        if validate and not self.cayley_graph().is_connected():
            raise ValidationError(f"generators {self.generators} do not generate the group")

    def _inverses(self) -> np.ndarray:
        t = self.table
        return np.argmax(t == self.identity, axis=1)

    def _symmetrize(self, generators) -> tuple[int, ...]:
        gens = [int(g) for g in generators]
        for g in gens:
            if not 0 <= g < self.order:
                raise ValidationError(f"generator {g} is not a group element")
        closed = sorted(set(gens) | {int(self.inverse[g]) for g in gens})
        if set(closed) != set(gens):
            warnings.warn(f"generating set symmetrized to {closed}", stacklevel=3)
        return tuple(closed)

    def validate(self) -> None:
        t, n, e = self.table, self.order, self.identity
        if t.shape != (n, n):
            raise ValidationError(f"multiplication table must be square, got {t.shape}")
        if t.min() < 0 or t.max() >= n:
            raise ValidationError("multiplication table has out-of-range entries")
        if not 0 <= e < n:
            raise ValidationError(f"identity {e} out of range")
        ar = np.arange(n)
        if not (np.array_equal(t[e], ar) and np.array_equal(t[:, e], ar)):
            raise ValidationError(f"{e} is not a two-sided identity")
        for a in range(n):
            if not (t[a] == e).any():
                raise ValidationError(f"element {a} has no inverse")
            # (a*b)*c == a*(b*c) for all b, c
            if not np.array_equal(t[t[a]], t[a][t]):
                b, c = (int(v) for v in np.argwhere(t[t[a]] != t[a][t])[0])
                raise ValidationError(f"associativity fails at ({a},{b},{c})")

    def mul(self, a, b):
        return self.table[a, b]

    def elements(self) -> range:
        return range(self.order)

    def cayley_graph(self, generators: Iterable[int] | None = None) -> Graph:
        gens = self.generators if generators is None else tuple(generators)
        edges = set()
        for g in range(self.order):
            for s in gens:
                h = int(self.table[g, s])
                if h != g:
                    edges.add((min(g, h), max(g, h)))
        return Graph(self.order, edges)

    def word_lengths(self) -> list[float]:
        return self.cayley_graph().bfs(self.identity)

    @classmethod
    def cyclic(cls, N: int, generators: Iterable[int] = (1,)) -> FiniteGroup:
        a = np.arange(N)
        return cls((a[:, None] + a[None, :]) % N, 0, generators)


class ProductGroup(FiniteGroup):
    """``G^n`` with elements encoded base ``|G|`` (factor 0 is the least digit).

    The generating set is the union of copies of the factor's generators in
    each coordinate.  Multiplication is digitwise, so no ``|G|^n`` table is built.
    """

    def __init__(self, factor: FiniteGroup, n: int):
        self.factor = factor
        self.n_factors = n
        q = factor.order
        self.order = q**n
        self.identity = sum(factor.identity * q**i for i in range(n))
        self.generators = tuple(
            sorted(
                self.identity + (s - factor.identity) * q**i
                for i in range(n)
                for s in factor.generators
            )
        )
        self.inverse = None

    @property
    def table(self):
        raise AttributeError("product groups do not materialize a multiplication table")

    def digits(self, a) -> np.ndarray:
        q = self.factor.order
        a = np.asarray(a, dtype=np.int64)
        return np.stack([(a // q**i) % q for i in range(self.n_factors)], axis=-1)

    def compose(self, digits: np.ndarray) -> np.ndarray:
        q = self.factor.order
        weights = q ** np.arange(self.n_factors, dtype=np.int64)
        return (np.asarray(digits, dtype=np.int64) * weights).sum(axis=-1)

    def mul(self, a, b):
        da, db = self.digits(a), self.digits(b)
        return self.compose(self.factor.table[da, db])

    def cayley_graph(self, generators: Iterable[int] | None = None) -> Graph:
        everything = np.arange(self.order, dtype=np.int64)
        digits = self.digits(everything)
        edges = set()
        for i in range(self.n_factors):
            for s in self.factor.generators:
                moved = digits.copy()
                moved[:, i] = self.factor.table[digits[:, i], s]
                target = self.compose(moved)
                for g, h in zip(everything.tolist(), target.tolist()):
                    if g != h:
                        edges.add((min(g, h), max(g, h)))
        return Graph(self.order, edges)


def product_group_space(G: FiniteGroup, n: int, cap: int = PRODUCT_CAP) -> tuple[ProductGroup, Graph]:
    """``G^n`` with per-coordinate generators and its Cayley graph.

    The Cayley word length is checked to be the sum of the factor word
    lengths (the l1 metric of the factors).
    """
    if G.order < 2:
        raise PreconditionError("factor group must be nontrivial")
    if n < 1:
        raise ValueError("n must be at least 1")
    if G.order**n > cap:
        raise PreconditionError(f"|G|^n = {G.order ** n} exceeds the vertex cap {cap}")
    H = ProductGroup(G, n)
    graph = H.cayley_graph()
    factor_len = np.array(G.word_lengths())
    lengths = np.array(graph.bfs(H.identity))
    expected = factor_len[H.digits(np.arange(H.order))].sum(axis=1)
    if not np.array_equal(lengths, expected):
        g = int(np.flatnonzero(lengths != expected)[0])
        raise ValidationError(f"word length of {g} is {lengths[g]}, expected l1 sum {expected[g]}")
    return H, graph


def _closed_ball(graph: Graph, center: int, radius: int) -> list[int]:
    d = graph.bfs(center)
    return [v for v in range(graph.n) if d[v] <= radius]


def _halo_at_least_size(graph: Graph, A: Sequence[int]) -> bool:
    return len(graph.neighbors_of_set(A)) >= len(A)


@dataclass(frozen=True)
class HaloClaimResult:
    holds: bool
    checked: int
    exhaustive: bool
    counterexample: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return self.holds


def product_halo_claim_check(
    G: FiniteGroup,
    n: int,
    M: int,
    seed: int = 0,
    samples: int = 10**4,
    exhaustive_cap: int = 2**20,
) -> HaloClaimResult:
    """Check ``|halo(A)| >= |A|`` for nonempty A inside the closed M-ball of ``G^n``."""
    if not n > 3 * M + 2:
        raise PreconditionError(f"need n > 3M + 2, got n = {n}, M = {M}")
    H, graph = product_group_space(G, n)
    pool = _closed_ball(graph, H.identity, M)
    return _subset_halo_scan(graph, pool, len(pool), seed, samples, exhaustive_cap)


def _subset_halo_scan(graph, pool, max_size, seed, samples, exhaustive_cap) -> HaloClaimResult:
    total = sum(math.comb(len(pool), k) for k in range(1, max_size + 1))
    if total <= exhaustive_cap:
        checked = 0
        for k in range(1, max_size + 1):
            for A in itertools.combinations(pool, k):
                checked += 1
                if not _halo_at_least_size(graph, A):
                    return HaloClaimResult(False, checked, True, A)
        return HaloClaimResult(True, checked, True)
    rng = np.random.default_rng(seed)
    for i in range(samples):
        k = int(rng.integers(1, max_size + 1))
        A = tuple(sorted(rng.choice(pool, size=k, replace=False).tolist()))
        if not _halo_at_least_size(graph, A):
            return HaloClaimResult(False, i + 1, False, A)
    return HaloClaimResult(True, samples, False)


def girth_halo_check(G: Graph, M: int, vertices: Iterable[int] | None = None) -> HaloClaimResult:
    """Check ``|halo(A)| >= |A|`` for all nonempty ``A`` with ``|A| <= M``.

    ``vertices`` restricts the candidate pool (e.g. the interior of a
    truncated tree); every pool vertex must have degree at least three.
    """
    pool = sorted(range(G.n) if vertices is None else set(vertices))
    low = [v for v in pool if G.degree(v) < 3]
    if low:
        raise PreconditionError(f"vertices of degree < 3 in the pool: {low[:10]}")
    g = girth(G)
    if not g > 4 * M:
        raise PreconditionError(f"girth {g} <= 4M = {4 * M}")
    total = sum(math.comb(len(pool), k) for k in range(1, M + 1))
    if total > 10**7:
        raise PreconditionError(f"{total} subsets is too many for an exhaustive scan")
    return _subset_halo_scan(G, pool, M, 0, 0, 10**7)


@dataclass(frozen=True)
class FolnerResult:
    max_gen_ratio: Fraction
    phi_lipschitz: float
    sandwich_ok: bool


def folner_analysis(G: FiniteGroup, F: Iterable[int]) -> FolnerResult:
    """Translation ratio of ``F`` and the Lipschitz number of ``x -> uniform on xF``.

    ``sandwich_ok`` records ``max_gen_ratio/2 <= phi_lipschitz <= max_gen_ratio``
    together with the per-edge identity ``||phi(x) - phi(y)|| = |x^-1 y F Δ F|/|F|``.
    """
    F = frozenset(int(a) for a in F)
    if not F:
        raise ValueError("F must be nonempty")
    t = G.table
    Fl = sorted(F)
    size = len(F)
    ratio = max(Fraction(len(frozenset(t[g, Fl].tolist()) ^ F), size) for g in G.generators)
    graph = G.cayley_graph()
    X = graph_metric(graph)
    translates = [frozenset(t[x, Fl].tolist()) for x in range(G.order)]
    phi = PartitionOfUnity(X, [SparseL1Vector.uniform(sorted(T)) for T in translates], list(range(G.order)))
    lip = lipschitz_number(phi)
    ok = config.le(float(ratio) / 2, lip) and config.le(lip, float(ratio))
    for x, y in graph.edges:
        shift = int(t[G.inverse[x], y])
        moved = frozenset(t[shift, Fl].tolist())
        exact = Fraction(len(moved ^ F), size)
        dist = phi[x].distance(phi[y])
        ok = ok and config.le(float(exact), dist) and config.le(dist, 2 * float(exact))
    return FolnerResult(ratio, lip, ok)


# built-in families


def cycle_graph(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)] if n > 2 else [(0, 1)] if n == 2 else [])


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def complete_graph(n: int) -> Graph:
    return Graph(n, itertools.combinations(range(n), 2))


def hypercube_graph(d: int) -> Graph:
    return Graph(2**d, [(v, v ^ (1 << i)) for v in range(2**d) for i in range(d) if v < v ^ (1 << i)])


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner)


def random_regular_graph(d: int, n: int, seed: int = 0) -> Graph:
    import networkx as nx

    g = nx.random_regular_graph(d, n, seed=seed)
    return Graph(n, g.edges())


def truncated_regular_tree(d: int, radius: int) -> tuple[Graph, list[int]]:
    """Ball of the given radius in the d-regular tree; returns the graph and its interior."""
    edges = []
    depth = [0]
    frontier = [0]
    for level in range(radius):
        nxt = []
        for v in frontier:
            children = d if v == 0 else d - 1
            for _ in range(children):
                w = len(depth)
                depth.append(level + 1)
                edges.append((v, w))
                nxt.append(w)
        frontier = nxt
    interior = [v for v, k in enumerate(depth) if k < radius]
    return Graph(len(depth), edges), interior


def z2_power(n: int) -> tuple[ProductGroup, Graph]:
    return product_group_space(FiniteGroup.cyclic(2), n)
