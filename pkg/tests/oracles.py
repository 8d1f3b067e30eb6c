"""Brute-force reference implementations, written straight from the definitions."""
import itertools
from fractions import Fraction

import networkx as nx


def diameter(X, sets):
    return max((X.dist[a, b] for s in sets for a in s for b in s), default=0.0)


def lebesgue(X, sets):
    """Largest r among candidate radii such that every open r-ball fits in one set."""
    if any(s == set(range(X.n)) for s in sets):
        return float("inf")
    cands = sorted({float(d) for d in X.dist.ravel() if d > 0} | {0.0})
    best = 0.0
    for r in cands:
        ok = all(
            any({y for y in range(X.n) if X.dist[x, y] < r} <= s for s in sets) for x in range(X.n)
        )
        if ok:
            best = r
    return best


def girth(n, edges):
    """Shortest simple cycle by explicit cycle enumeration."""
    G = nx.Graph()
    G.add_nodes_from(range(n))
    G.add_edges_from(edges)
    lengths = [len(c) for c in nx.simple_cycles(G)]
    return min(lengths) if lengths else float("inf")


def cheeger(n, edges):
    best = None
    for k in range(1, n // 2 + 1):
        for A in itertools.combinations(range(n), k):
            A = set(A)
            cut = sum((u in A) != (v in A) for u, v in edges)
            q = Fraction(cut, k)
            if best is None or q < best:
                best = q
    return best


def graph_halo(n, edges, A):
    A = set(A)
    return {v for u, v in edges if u in A and v not in A} | {u for u, v in edges if v in A and u not in A}
