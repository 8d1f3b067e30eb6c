from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import space_and_cover
from coarsekit.constructions import (
    RoundingParams,
    amenable_cover_to_pou,
    average_pou,
    horizon_ratio,
    horizon_ratio_bound,
    point_horizon_ratio,
    ratio_bound_from_pou,
    round_to_barycentric,
    window_cover,
)
from coarsekit.errors import PreconditionError, ValidationError
from coarsekit.graphs import cycle_graph, graph_metric, hypercube_graph
from coarsekit.instances import closed_ball_cover, line_space, random_metric_space, random_partition
from coarsekit.metric import Cover, lebesgue_number, thicken
from coarsekit.pou import PartitionOfUnity, barycentric_from_cover, lipschitz_number

LINE4 = line_space([0, 1, 2, 3])


def cycle(n):
    return graph_metric(cycle_graph(n))


def test_whole_space_ratio_is_one():
    U = Cover.from_sets(LINE4, [range(4)])
    assert horizon_ratio(LINE4, U, 1, 2).min_ratio == 1
    assert horizon_ratio(LINE4, U, 0.5, 3).holds(0.01)


def test_singleton_ratio_on_line():
    U = Cover.from_sets(LINE4, [{i} for i in range(4)])
    rep = horizon_ratio(LINE4, U, 1, 2)
    assert rep.min_ratio == Fraction(1, 3)
    assert rep.worst_point in (1, 2)
    assert rep.horizon_sizes[0] == (1, 2)


def test_ratio_arguments():
    U = Cover.from_sets(LINE4, [range(4)])
    with pytest.raises(ValueError):
        horizon_ratio(LINE4, U, 2, 1)
    with pytest.raises(ValueError):
        point_horizon_ratio(LINE4, U, 0)


def test_thicken_transform_ratios_dominate():
    X = cycle(30)
    V = window_cover(X, range(0, 30, 3), 5)
    r = 2
    before = horizon_ratio(X, V, r, 2 * r)
    W = thicken(V, r)
    # hor(B(x,r), V) sits inside hor({x}, W) and hor(B(x,2r), W) inside hor(B(x,3r), V)
    after = point_horizon_ratio(X, W, r)
    assert after.min_ratio >= horizon_ratio(X, V, r, 3 * r).min_ratio
    assert before.min_ratio >= horizon_ratio(X, V, r, 3 * r).min_ratio


def test_average_whole_space():
    X = cycle(10)
    f = barycentric_from_cover(closed_ball_cover(X, 5))
    U = Cover.from_sets(X, [range(10)])
    g = average_pou(f, U, 0.5, basepoints={0: 3}, M=6)
    assert all(g[x] == f[3] for x in range(10))
    assert lipschitz_number(g) == 0


def test_average_constant():
    X = cycle(12)
    f = PartitionOfUnity(X, [{"a": 0.25, "b": 0.75}] * 12)
    g = average_pou(f, window_cover(X, range(12), 3), 1.0)
    assert all(g[x] == f[x] for x in range(12))


def test_average_rejects_small_M():
    X = cycle(12)
    f = PartitionOfUnity(X, [{"a": 1}] * 12)
    with pytest.raises(PreconditionError, match="reach"):
        average_pou(f, window_cover(X, range(12), 3), 1.0, M=1)
    with pytest.raises(PreconditionError, match="basepoint"):
        average_pou(f, window_cover(X, range(12), 3), 1.0, basepoints={s: s + 5 for s in range(12)})


def test_average_rejects_steep_partition():
    X = cycle(12)
    f = barycentric_from_cover(window_cover(X, range(12), 2))
    with pytest.raises(PreconditionError, match="lipschitz_number"):
        average_pou(f, window_cover(X, range(12), 3), 1.0)


@given(st.integers(0, 10**6))
def test_average_postconditions_on_cycle(seed):
    rng = np.random.default_rng(seed)
    N = 160
    X = cycle(N)
    centers = sorted(rng.choice(N, size=int(rng.integers(40, N)), replace=False).tolist())
    covered = closed_ball_cover(X, 40, centers)
    f = barycentric_from_cover(covered)
    width = int(rng.integers(1, 4))
    U = window_cover(X, range(N), width)
    g = average_pou(f, U, 1.0)
    assert lebesgue_number(g.induced_cover()) >= 1


def test_rounding_integral_input():
    X = line_space([0])
    g = PartitionOfUnity(X, [{"a": 2 / 3, "b": 1 / 3}])
    res = round_to_barycentric(g, RoundingParams(1, 3))
    assert res.G2 == [{"a": 2, "b": 1}]
    assert res.h[0] == g[0]
    assert len(res.p[0]) == 3


def test_rounding_tie_example():
    X = line_space([0])
    g = PartitionOfUnity(X, [{"a": 0.5, "b": 0.5}])
    res = round_to_barycentric(g, RoundingParams(1, 3))
    assert res.G2 == [{"a": 2, "b": 1}]
    assert res.k_before == [1]
    assert res.h[0].distance(g[0]) == pytest.approx(1 / 3)
    assert res.h[0] == {"a": 2 / 3, "b": 1 / 3}


def test_rounding_barycentric_dividing_m():
    X = line_space([0, 1])
    g = PartitionOfUnity(X, [{"a": 0.25, "b": 0.25, "c": 0.25, "d": 0.25}, {"a": 0.5, "b": 0.5}])
    res = round_to_barycentric(g, RoundingParams(3, 8))
    assert all(res.h[x] == g[x] for x in range(2))


def test_rounding_params_invariant():
    with pytest.raises(ValidationError, match="m = 3"):
        RoundingParams(1, 3, 0.5)
    p = RoundingParams.minimal(1, 0.5)
    assert p.m == 14
    with pytest.raises(PreconditionError, match="carrier"):
        X = line_space([0])
        round_to_barycentric(PartitionOfUnity(X, [{"a": 0.5, "b": 0.5}]), RoundingParams(0, 3))


@given(st.integers(0, 10**6), st.sampled_from([0.25, 0.5, 1.0]))
def test_rounding_clauses(seed, eps):
    rng = np.random.default_rng(seed)
    X = random_metric_space(rng, int(rng.integers(1, 10)))
    n = int(rng.integers(0, 4))
    g = random_partition(rng, X, n)
    params = RoundingParams.minimal(n, eps)
    res = round_to_barycentric(g, params)
    for x in range(X.n):
        assert all(isinstance(k, int) for k in res.G2[x].values())
        assert abs(res.k_before[x]) < n + 1
        assert sum(abs(c) for c in res.G1[x].values()) <= 2 * n + 2 + 1e-9
        assert sum(res.G2[x].values()) == params.m
        assert set(res.G2[x]) == g[x].carrier
        assert res.h[x].distance(g[x]) <= (2 * n + 2) / params.m + 1e-9
    assert res.p.is_barycentric


def test_cover_to_pou_whole_space():
    X = cycle(8)
    g = amenable_cover_to_pou(X, Cover.from_sets(X, [range(8)]), 1, 0.1)
    assert lipschitz_number(g) == 0


def test_cover_to_pou_arcs_on_c24():
    X = cycle(24)
    g = amenable_cover_to_pou(X, window_cover(X, range(24), 16), 2, 0.25)
    assert lebesgue_number(g.induced_cover()) >= 4


def test_cover_to_pou_needs_lebesgue():
    X = cycle(24)
    with pytest.raises(PreconditionError, match="4r"):
        amenable_cover_to_pou(X, window_cover(X, range(24), 4), 2, 0.25)


def test_cover_to_pou_needs_ratio():
    X = cycle(24)
    with pytest.raises(PreconditionError, match="horizon ratio"):
        amenable_cover_to_pou(X, window_cover(X, range(24), 16), 2, 0.01)


def test_ratio_bound_arithmetic():
    assert horizon_ratio_bound(1, 0.1, 2) == pytest.approx(2 / 3)
    assert horizon_ratio_bound(3, 1e-9, 10) == pytest.approx(1)
    with pytest.raises(PreconditionError):
        horizon_ratio_bound(1, 0.5, 2)


@pytest.mark.parametrize("d", [3, 4])
def test_ratio_bound_on_hypercube(d):
    X = graph_metric(hypercube_graph(d))
    bound, rep = ratio_bound_from_pou(X, closed_ball_cover(X, 2), 1)
    assert float(rep.min_ratio) >= bound


def test_ratio_bound_q3_values():
    X = graph_metric(hypercube_graph(3))
    U = closed_ball_cover(X, 2)
    assert lipschitz_number(barycentric_from_cover(U)) == pytest.approx(1 / 7)
    bound, rep = ratio_bound_from_pou(X, U, 2)
    # open 2-balls hold 4 points, (s+1)mu = 3/7
    assert bound == pytest.approx(1 / (1 + 4 * (3 / 7) / (4 / 7)))
    assert bound == pytest.approx(0.25)
    assert rep.min_ratio == Fraction(7, 8)


@given(space_and_cover(), st.floats(0.5, 3), st.floats(0.1, 3))
def test_ratio_antitone_in_s(data, s, ds):
    X, U = data
    a = point_horizon_ratio(X, U, s).min_ratio
    b = point_horizon_ratio(X, U, s + ds).min_ratio
    assert 0 < b <= a <= 1
