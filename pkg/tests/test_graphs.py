import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from coarsekit.errors import PreconditionError, ValidationError
from coarsekit.graphs import (
    FiniteGroup,
    Graph,
    cheeger_constant,
    complete_graph,
    cycle_graph,
    double_counting_check,
    expander_check,
    folner_analysis,
    girth,
    girth_halo_check,
    graph_metric,
    halo,
    halo_ratio_search,
    hypercube_graph,
    path_graph,
    petersen_graph,
    product_group_space,
    product_halo_claim_check,
    truncated_regular_tree,
    z2_power,
)
from coarsekit.instances import random_connected_graph, random_cover
from coarsekit.metric import Cover


@st.composite
def graphs(draw, max_n=12):
    n = draw(st.integers(1, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph(n, edges)


def test_graph_validation():
    with pytest.raises(ValidationError):
        Graph(3, [(0, 3)])
    with pytest.raises(ValidationError):
        Graph(3, [(1, 1)])
    with pytest.raises(ValidationError, match="disconnected"):
        graph_metric(Graph(3, [(0, 1)]))


def test_graph_metric_examples():
    assert (graph_metric(complete_graph(3)).dist == 1 - np.eye(3)).all()
    assert graph_metric(path_graph(4)).dist[0, 3] == 3
    assert graph_metric(petersen_graph()).diameter() == 2


def test_girth_examples():
    assert girth(complete_graph(3)) == 3
    assert girth(path_graph(7)) == math.inf
    assert girth(truncated_regular_tree(3, 3)[0]) == math.inf
    assert girth(petersen_graph()) == 5
    assert girth(hypercube_graph(3)) == 4


@given(graphs())
def test_girth_matches_cycle_enumeration(G):
    assert girth(G) == oracles.girth(G.n, G.edges)


def test_cheeger_examples():
    assert cheeger_constant(complete_graph(2)).h == 1
    assert cheeger_constant(complete_graph(2)).subset == (0,)
    res = cheeger_constant(cycle_graph(6))
    assert res.h == Fraction(2, 3) and res.subset == (0, 1, 2)
    assert cheeger_constant(complete_graph(4)).h == 2


def test_cheeger_cap():
    big = cycle_graph(30)
    with pytest.raises(PreconditionError, match="cap"):
        cheeger_constant(big)
    approx = cheeger_constant(big, heuristic=True)
    assert not approx.exact
    assert approx.h >= Fraction(2, 15)


@given(graphs(max_n=10))
def test_cheeger_matches_brute_force(G):
    if G.n < 2:
        return
    assert cheeger_constant(G).h == oracles.cheeger(G.n, G.edges)


def test_expander_examples():
    assert expander_check(complete_graph(4), 3, 2)
    assert not expander_check(cycle_graph(6), 2, 1)
    assert expander_check(complete_graph(2), 1, 1)
    assert not expander_check(complete_graph(4), 2, 1)


def test_halo_examples():
    X = graph_metric(cycle_graph(6))
    assert halo(X, range(6)) == frozenset()
    assert halo(X, {0}) == {1, 5}
    assert halo(X, set()) == frozenset()


def test_halo_search_examples():
    X = graph_metric(cycle_graph(6))
    res = halo_ratio_search(X, 2)
    assert res.min_ratio == 1 and res.exhaustive
    assert len(res.subset) == 2 and X.dist[res.subset] == 1
    P = graph_metric(petersen_graph())
    assert halo_ratio_search(P, 1).min_ratio == 3


@given(graphs())
def test_halo_matches_neighbor_scan(G):
    if not G.is_connected():
        return
    X = graph_metric(G)
    for A in itertools.islice(itertools.combinations(range(G.n), 2), 20):
        assert halo(X, A) == oracles.graph_halo(G.n, G.edges, A)


@given(graphs(), st.data())
def test_halo_dominates_edge_boundary(G, data):
    if not G.is_connected() or G.max_degree() == 0:
        return
    X = graph_metric(G)
    A = data.draw(st.sets(st.integers(0, G.n - 1)))
    assert len(halo(X, A)) * G.max_degree() >= len(G.edge_boundary(A))


def test_double_count_c4():
    G = cycle_graph(4)
    X = graph_metric(G)
    rep = double_counting_check(G, Cover.from_sets(X, [{0, 1}, {2, 3}]))
    assert rep.lhs == rep.rhs == 4
    assert rep.p_min == Fraction(1, 2) and rep.c_min == 1
    assert rep.bound_ok


def test_double_count_whole_graph():
    G = petersen_graph()
    rep = double_counting_check(G, Cover.from_sets(graph_metric(G), [range(10)]))
    assert rep.lhs == rep.rhs == 0
    assert rep.c_min == 0 and rep.bound_ok is None


@given(st.integers(0, 10**6))
def test_double_count_identity_random(seed):
    rng = np.random.default_rng(seed)
    G = random_connected_graph(rng, int(rng.integers(2, 40)), 0.1)
    X = graph_metric(G)
    rep = double_counting_check(G, random_cover(rng, X, 3))
    assert rep.identity_holds
    if rep.c_min > 0:
        assert rep.bound_ok


def test_z2_cayley_is_hamming():
    for n in range(1, 9):
        H, graph = z2_power(n)
        D = graph_metric(graph).dist
        idx = np.arange(2**n)
        digits = H.digits(idx)
        ham = (digits[:, None, :] != digits[None, :, :]).sum(axis=2)
        assert (D == ham).all()


def test_product_group_examples():
    _, graph = product_group_space(FiniteGroup.cyclic(2), 2)
    assert girth(graph) == 4 and graph.n == 4 and len(graph.edges) == 4
    _, graph = z2_power(5)
    assert graph_metric(graph).diameter() == 5
    G = FiniteGroup.cyclic(5)
    _, graph = product_group_space(G, 1)
    assert graph.edges == G.cayley_graph().edges
    with pytest.raises(PreconditionError, match="cap"):
        product_group_space(FiniteGroup.cyclic(2), 17)
    with pytest.raises(PreconditionError, match="nontrivial"):
        product_group_space(FiniteGroup.cyclic(1, []), 3)


def test_product_halo_claim():
    res = product_halo_claim_check(FiniteGroup.cyclic(2), 6, 1)
    assert res and res.exhaustive and res.checked == 2**7 - 1
    res = product_halo_claim_check(FiniteGroup.cyclic(2), 9, 2, samples=500)
    assert res and not res.exhaustive
    with pytest.raises(PreconditionError, match="3M"):
        product_halo_claim_check(FiniteGroup.cyclic(2), 5, 1)


def test_girth_halo_examples():
    assert girth_halo_check(petersen_graph(), 1)
    tree, interior = truncated_regular_tree(3, 5)
    for M in (1, 2, 3):
        assert girth_halo_check(tree, M, interior)
    with pytest.raises(PreconditionError, match="girth"):
        girth_halo_check(complete_graph(4), 1)
    with pytest.raises(PreconditionError, match="degree"):
        girth_halo_check(cycle_graph(9), 1)


def test_group_validation():
    with pytest.raises(ValidationError):
        FiniteGroup([[0, 1], [1, 1]], 0, [1])
    with pytest.raises(ValidationError):
        FiniteGroup([[0, 1], [1, 0]], 0, [0])
    with pytest.warns(UserWarning, match="symmetrized"):
        G = FiniteGroup.cyclic(5, [1])
    assert set(G.generators) == {1, 4}


def test_folner_examples():
    Z12 = FiniteGroup.cyclic(12, [1, 11])
    res = folner_analysis(Z12, range(12))
    assert res.max_gen_ratio == 0 and res.phi_lipschitz == 0
    res = folner_analysis(Z12, [0, 1, 2, 3])
    assert res.max_gen_ratio == Fraction(1, 2) and res.sandwich_ok
    assert folner_analysis(Z12, [0]).max_gen_ratio == 2
    with pytest.raises(ValueError):
        folner_analysis(Z12, [])


def test_folner_monotone_on_intervals():
    N = 20
    G = FiniteGroup.cyclic(N, [1, N - 1])
    ratios = [folner_analysis(G, range(l)).max_gen_ratio for l in range(1, N - 1)]
    assert ratios == [Fraction(2, l) for l in range(1, N - 1)]
    assert all(a > b for a, b in zip(ratios, ratios[1:]))
