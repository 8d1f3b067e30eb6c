"""Acceptance criteria as runnable checks.

Each ``criterion_*`` function returns a :class:`CriterionResult`; a criterion
passes only if every instance passes and the wall time is within budget.
"""
from __future__ import annotations

import math
import time
from collections.abc import Callable
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import graphs
from .constructions import (
    RoundingParams,
    amenable_cover_to_pou,
    average_pou,
    horizon_ratio_bound,
    point_horizon_ratio,
    ratio_bound_from_pou,
    round_to_barycentric,
    window_cover,
)
from .instances import closed_ball_cover, line_space, random_connected_graph, random_cover, random_measure, random_metric_space
from .measures import (
    DisjointFamily,
    boundary_identity,
    cover_finder,
    msp_greedy,
    msp_to_ula,
    scan_boundary_set,
    ula_witness_check,
)
from .metric import Cover, lebesgue_number
from .pou import (
    PartitionOfUnity,
    PropertyAWitness,
    SparseL1Vector,
    barycentric_expansion,
    barycentric_from_cover,
    coboundedness,
    contract,
    levin_pou,
    lipschitz_number,
    normalize,
    pairwise_l1,
    pou_to_witness,
    simplex_bounds,
    witness_to_pou,
)

SEED = 20240601


@dataclass
class CriterionResult:
    ident: int
    name: str
    passed: bool
    detail: str
    seconds: float
    budget: float

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] criterion {self.ident:2d} {self.name}: {self.detail} ({self.seconds:.2f}s / {self.budget:g}s)"


def _timed(ident: int, name: str, budget: float, body: Callable[[], tuple[bool, str]]) -> CriterionResult:
    t0 = time.perf_counter()
    try:
        ok, detail = body()
    except Exception as exc:  # report, never hide
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    dt = time.perf_counter() - t0
    if ok and dt > budget:
        ok, detail = False, f"{detail}; over time budget"
    return CriterionResult(ident, name, ok, detail, dt, budget)


def criterion_1(trials: int = 10**4) -> CriterionResult:
    def body():
        rng = np.random.default_rng(SEED + 1)
        for t in range(trials):
            A = set(np.flatnonzero(rng.random(64) < rng.uniform(0.02, 0.9)).tolist()) or {int(rng.integers(64))}
            B = set(np.flatnonzero(rng.random(64) < rng.uniform(0.02, 0.9)).tolist()) or {int(rng.integers(64))}
            b = simplex_bounds(A, B)
            if not b.lower1 <= b.lower2 <= b.exact <= b.upper:
                return False, f"pair {t}: {b}"
            if t % 50 == 0:
                d = SparseL1Vector.uniform(sorted(A)).distance(SparseL1Vector.uniform(sorted(B)))
                if abs(d - float(b.exact)) > 1e-9:
                    return False, f"pair {t}: exact {b.exact} vs l1 {d}"
        return True, f"{trials} pairs"

    return _timed(1, "simplex sandwich", 2, body)


def criterion_2(trials: int = 50) -> CriterionResult:
    def body():
        rng = np.random.default_rng(SEED + 2)
        bounds = 0
        for t in range(trials):
            n = int(rng.integers(4, 65))
            G = random_connected_graph(rng, n, float(rng.uniform(0.02, 0.2)))
            X = graphs.graph_metric(G)
            r = graphs.double_counting_check(G, random_cover(rng, X, 3))
            if not r.identity_holds:
                return False, f"instance {t}: lhs {r.lhs} != rhs {r.rhs}"
            if r.bound_ok is False:
                return False, f"instance {t}: p_min {r.p_min} > 1/(1+{r.c_min})"
            bounds += r.bound_ok is True
        G = graphs.cycle_graph(4)
        r = graphs.double_counting_check(G, Cover.from_sets(graphs.graph_metric(G), [{0, 1}, {2, 3}]))
        if not (r.identity_holds and r.p_min == Fraction(1, 2) and r.c_min == 1 and r.p_min == 1 / (1 + r.c_min)):
            return False, f"C4 equality instance: {r}"
        return True, f"{trials} identities, {bounds} nonvacuous bounds, C4 equality"

    return _timed(2, "double counting", 5, body)


def criterion_3() -> CriterionResult:
    def body():
        for n in range(2, 13):
            h = graphs.cheeger_constant(graphs.complete_graph(n)).h
            if h != math.ceil(n / 2):
                return False, f"K{n}: {h}"
        for n in range(3, 17):
            h = graphs.cheeger_constant(graphs.cycle_graph(n)).h
            if h != Fraction(2, n // 2):
                return False, f"C{n}: {h}"
        return True, "K2..K12, C3..C16"

    return _timed(3, "Cheeger closed forms", 10, body)


def criterion_4() -> CriterionResult:
    def body():
        res = graphs.girth_halo_check(graphs.petersen_graph(), 1)
        if not res:
            return False, f"Petersen counterexample {res.counterexample}"
        total = res.checked
        T, interior = graphs.truncated_regular_tree(3, 5)
        for M in (1, 2, 3):
            res = graphs.girth_halo_check(T, M, interior)
            if not (res and res.exhaustive):
                return False, f"tree M={M}: counterexample {res.counterexample}"
            total += res.checked
        return True, f"{total} subsets, no counterexample"

    return _timed(4, "girth halo bound", 10, body)


def criterion_5() -> CriterionResult:
    def body():
        Z2 = graphs.FiniteGroup.cyclic(2)
        res = graphs.product_halo_claim_check(Z2, 6, 1)
        if not (res and res.exhaustive and res.checked == 127):
            return False, f"(Z/2)^6: {res}"
        res = graphs.product_halo_claim_check(Z2, 9, 2, seed=SEED, samples=10**4)
        if not res:
            return False, f"(Z/2)^9 counterexample {res.counterexample}"
        return True, f"127 exhaustive + {res.checked} sampled"

    return _timed(5, "product group halo", 30, body)


def criterion_6(trials: int = 100) -> CriterionResult:
    def body():
        rng = np.random.default_rng(SEED + 6)
        for t in range(trials):
            X = random_metric_space(rng, int(rng.integers(2, 41)))
            r = float(rng.uniform(0, X.diameter())) or X.diameter()
            f, _ = levin_pou(X, list(range(X.n)), r)
            cob, leb = coboundedness(f), lebesgue_number(f.induced_cover())
            if not (cob <= 6 * r + 1e-9 and leb >= r - 1e-9):
                return False, f"instance {t}: cob {cob}, leb {leb}, r {r}"
        return True, f"{trials} spaces"

    return _timed(6, "Levin construction", 10, body)


def criterion_7(trials: int = 100) -> CriterionResult:
    def body():
        rng = np.random.default_rng(SEED + 7)
        for t in range(trials):
            X = random_metric_space(rng, int(rng.integers(2, 16)))
            m = int(rng.integers(1, 9))
            labels = [f"v{i}" for i in range(int(rng.integers(1, 6)))]
            F = []
            for _ in range(X.n):
                cuts = np.sort(rng.integers(0, m + 1, size=len(labels) - 1))
                parts = np.diff(np.r_[0, cuts, m])
                F.append({v: int(k) for v, k in zip(labels, parts) if k})
            p = barycentric_expansion(X, F, labels)
            g = normalize(X, F, labels)
            exact = np.array(
                [[sum(abs(Fx.get(v, 0) - Fy.get(v, 0)) for v in labels) for Fy in F] for Fx in F], dtype=float
            ) / m
            if np.abs(pairwise_l1(p) - exact).max() > 1e-12:
                return False, f"instance {t}: distances not preserved"
            back = contract(p, {lab: lab[0] for lab in p.labels}, [v for v in labels if any(v in Fx for Fx in F)])
            if any(back[x] != g[x] for x in range(X.n)):
                return False, f"instance {t}: contraction does not recover F/m"
            if lebesgue_number(p.induced_cover()) != lebesgue_number(g.induced_cover()):
                return False, f"instance {t}: Lebesgue number changed"
            if coboundedness(p) != coboundedness(g):
                return False, f"instance {t}: coboundedness changed"
        return True, f"{trials} integer inputs"

    return _timed(7, "barycentric expansion", 5, body)


def criterion_8(trials: int = 100) -> CriterionResult:
    from .instances import random_partition

    def body():
        rng = np.random.default_rng(SEED + 8)
        for t in range(trials):
            n = int(rng.integers(0, 5))
            eps = float(rng.choice([0.25, 0.5, 1.0, 2.0]))
            X = random_metric_space(rng, int(rng.integers(2, 20)))
            g = random_partition(rng, X, n)
            params = RoundingParams.minimal(n, eps)
            res = round_to_barycentric(g, params)
            for x in range(X.n):
                if sum(res.G2[x].values()) != params.m:
                    return False, f"instance {t}: ||G2({x})|| != m"
                if res.h[x].carrier != g[x].carrier:
                    return False, f"instance {t}: carrier changed at {x}"
                if res.h[x].distance(g[x]) > (2 * n + 2) / params.m + 1e-9:
                    return False, f"instance {t}: ||h-g|| too large at {x}"
                if not abs(res.k_before[x]) < n + 1:
                    return False, f"instance {t}: |k({x})| >= n+1"
            if not res.p.is_barycentric:
                return False, f"instance {t}: p not barycentric"
        return True, f"{trials} partitions"

    return _timed(8, "integer rounding", 5, body)


def _averaging_cases():
    """(space, f, averaging cover, eps) on cycles and hypercubes."""
    cases = []
    for N, w, eps, stride in ((60, 16, 0.5, 1), (140, 64, 0.25, 1), (260, 120, 0.2, 2)):
        X = graphs.graph_metric(graphs.cycle_graph(N))
        f = barycentric_from_cover(window_cover(X, range(N), w))
        U = window_cover(X, range(0, N, stride), stride)
        cases.append(("cycle", X, f, U, eps))
    for d, t, eps in ((3, 0.02, 0.5), (4, 0.01, 0.4), (5, 0.005, 0.3)):
        X = graphs.graph_metric(graphs.hypercube_graph(d))
        f1 = barycentric_from_cover(closed_ball_cover(X, 1))
        values = [SparseL1Vector({**{k: t * v for k, v in f1[x].items()}, "base": 1 - t}) for x in range(X.n)]
        f = PartitionOfUnity(X, values, [*f1.labels, "base"])
        U = Cover.from_sets(X, [{x} for x in range(X.n)])
        cases.append(("hypercube", X, f, U, eps))
    return cases


def _cover_to_pou_cases():
    """(space, cover, r, mu, eps)."""
    C24 = graphs.graph_metric(graphs.cycle_graph(24))
    C120 = graphs.graph_metric(graphs.cycle_graph(120))
    C200 = graphs.graph_metric(graphs.cycle_graph(200))
    out = [
        ("C24", C24, window_cover(C24, range(24), 16), 2, 0.25, None),
        ("C120", C120, window_cover(C120, range(120), 64), 4, 0.125, 0.5),
        ("C200", C200, window_cover(C200, range(200), 120), 6, 0.1, 0.4),
    ]
    for d, radius, r, mu in ((4, 3, 1, 0.1), (5, 4, 1, 0.2), (6, 4, 1, 0.2)):
        Q = graphs.graph_metric(graphs.hypercube_graph(d))
        out.append((f"Q{d}", Q, closed_ball_cover(Q, radius), r, mu, None))
    return out


def criterion_9() -> CriterionResult:
    def body():
        for kind, X, f, U, eps in _averaging_cases():
            g = average_pou(f, U, eps)
            if lebesgue_number(g.induced_cover()) < 1 / eps - 1e-9:
                return False, f"{kind} n={X.n}: Lebesgue number below 1/eps"
        for name, X, U, r, mu, eps in _cover_to_pou_cases():
            g = amenable_cover_to_pou(X, U, r, mu, eps)
            if not g.is_barycentric:
                return False, f"{name}: output not barycentric"
        return True, "6 averaging + 6 cover-to-partition instances"

    return _timed(9, "averaging and cover-to-partition", 10, body)


def criterion_10() -> CriterionResult:
    def body():
        details = []
        for d, radius, s in ((3, 2, 1), (3, 2, 2), (4, 2, 1), (4, 2, 2), (4, 3, 1)):
            Q = graphs.graph_metric(graphs.hypercube_graph(d))
            U = closed_ball_cover(Q, radius)
            bound, rep = ratio_bound_from_pou(Q, U, s)
            direct = point_horizon_ratio(Q, U, s).min_ratio
            mu = lipschitz_number(barycentric_from_cover(U))
            M = int(Q.ball_matrix(s).sum(axis=1).max())
            if abs(bound - horizon_ratio_bound(s, mu, M)) > 1e-12 or float(direct) < bound - 1e-9:
                return False, f"Q{d} radius {radius} s={s}: {direct} vs {bound}"
            details.append(f"Q{d}/{radius}/s={s}: {direct} >= {bound:.3f}")
        return True, "; ".join(details)

    return _timed(10, "horizon ratio bound", 10, body)


def _segment_instance(rng):
    """Segments of a line separated by wide gaps, windowed within each segment."""
    R = int(rng.integers(1, 3))
    k = int(rng.integers(1, 4))
    L = int(rng.integers(20, 40))
    w = int(rng.integers(14, L + 1))
    gap = 4 * R + 1 + int(rng.integers(0, 3))
    pos, sets = [], []
    for b in range(k):
        start = b * (L + gap)
        base = len(pos)
        pos += [start + i for i in range(L)]
        for s in range(-w + 1, L):
            pts = frozenset(base + i for i in range(max(s, 0), min(s + w, L)))
            if pts and pts not in sets:
                sets.append(pts)
    X = line_space(pos)
    return X, Cover.from_sets(X, sets), R, w


def criterion_11(trials: int = 100, msp_trials: int = 50) -> CriterionResult:
    def body():
        rng = np.random.default_rng(SEED + 11)
        for t in range(trials):
            X = random_metric_space(rng, int(rng.integers(2, 30)))
            U = random_cover(rng, X)
            mu = random_measure(rng, X)
            R = float(rng.uniform(0.5, X.diameter() + 1))
            lhs, rhs = boundary_identity(X, mu, U, R, exact=True)
            if lhs != rhs:
                return False, f"identity instance {t}: {lhs} != {rhs}"
        scans = 0
        while scans < trials:
            X = random_metric_space(rng, int(rng.integers(2, 30)))
            U = random_cover(rng, X)
            mu = random_measure(rng, X)
            R = float(rng.uniform(0.5, X.diameter() / 2 + 1))
            ratios = point_horizon_ratio(X, U, R).ratios
            worst = min(ratios[x] for x in mu.support)
            eps = float(1 / worst - 1) * 1.01 + 1e-6
            lab, pts = scan_boundary_set(X, mu, U, R, eps)
            if not ula_witness_check(X, mu, pts, R, eps):
                return False, f"scan {scans}: element {lab} fails the check"
            scans += 1
        for t in range(msp_trials):
            X, U, R, w = _segment_instance(rng)
            mu = random_measure(rng, X)
            worst = min(point_horizon_ratio(X, U, 2 * R).ratios[x] for x in range(X.n))
            eps_g = float(1 / worst - 1) * 1.01 + 1e-6
            c = 0.95 / (1 + 2 * eps_g)
            fam = msp_greedy(X, mu, 2 * R, w - 1, cover_finder(X, U, 2 * R, eps_g), c, eps_g)
            DisjointFamily(fam.members, 2 * R).validate(X)
            if not fam.mass(mu) > c:
                return False, f"msp {t}: mass {fam.mass(mu)} <= c"
            eps_u = max(2 * (1 - c) * 1.01, 1e-3)
            j, Z = msp_to_ula(X, mu, fam, R, eps_u)
            if not ula_witness_check(X, mu, Z, R, eps_u):
                return False, f"msp {t}: selected member fails the check"
        return True, f"{trials} identities, {trials} scans, {msp_trials} greedy families"

    return _timed(11, "measure procedures", 15, body)


def _window_witness(N: int, h: int, cycle: bool) -> tuple:
    X = graphs.graph_metric(graphs.cycle_graph(N) if cycle else graphs.path_graph(N))
    if cycle:
        A = tuple(frozenset(((x + i) % N, 0) for i in range(-h, h + 1)) for x in range(N))
    else:
        A = tuple(frozenset((y, 0) for y in range(max(0, x - h), min(N, x + h + 1))) for x in range(N))
    return X, PropertyAWitness(A, float(h + 1))


def _core_witness(rng, X, bar: float) -> PropertyAWitness:
    """Shared block at one center plus a few private pairs per point.

    The ratio between any two points is ``(p_x + p_y)/K``, kept below ``bar/2``.
    """
    c = int(rng.integers(X.n))
    private = rng.integers(0, 4, size=X.n)
    K = int(math.floor(2 * 2 * private.max() / bar)) + 1 + int(rng.integers(0, 10))
    A = tuple(
        frozenset([(c, k) for k in range(K)] + [(x, K + j) for j in range(int(private[x]))]) for x in range(X.n)
    )
    return PropertyAWitness(A, float(X.dist[:, c].max()) + 1.0)


def criterion_12(trials: int = 50, windows: int = 6) -> CriterionResult:
    def body():
        rng = np.random.default_rng(SEED + 12)
        for t in range(trials):
            eps = float(rng.uniform(0.3, 1.0))
            if t < windows:
                # centered windows on cycles and paths, R = 1.5
                R = 1.5
                bar = min(eps, 0.5) / (R + 1)
                d_max = math.ceil((2 - bar) / bar) - 1
                # 2d/(2h+1-d) < bar/2 for every d <= d_max
                h = int(math.floor((4 * d_max / bar + d_max - 1) / 2)) + 1 + int(rng.integers(0, 8))
                N = int(rng.integers(2 * h + 2, 2 * h + 20))
                X, A = _window_witness(N, h, bool(t % 2))
            else:
                X = random_metric_space(rng, int(rng.integers(2, 25)))
                R = float(rng.uniform(0.5, X.diameter() + 1))
                bar = min(eps, 0.5) / (R + 1)
                A = _core_witness(rng, X, bar)
            f = witness_to_pou(X, A, bar)
            if lipschitz_number(f) > bar + 1e-9:
                return False, f"instance {t}: partition not ({bar},{bar})-Lipschitz"
            back = pou_to_witness(f, R, eps)
            back.validate(X)
            worst, where = back.worst_pair(X, R)
            if where is not None and not worst < eps:
                return False, f"instance {t}: ratio {worst} >= eps at {where}"
        return True, f"{trials} round trips ({windows} window, {trials - windows} core witnesses)"

    return _timed(12, "witness round trip", 5, body)


def criterion_13() -> CriterionResult:
    def body():
        checked = 0
        for N in (12, 24):
            G = graphs.FiniteGroup.cyclic(N, (1, N - 1))
            prev = None
            for ell in range(1, N - 1):
                r = graphs.folner_analysis(G, range(ell))
                if r.max_gen_ratio != Fraction(2, ell) or not r.sandwich_ok:
                    return False, f"Z/{N}, length {ell}: {r}"
                if prev is not None and not r.max_gen_ratio < prev:
                    return False, f"Z/{N}: ratio not decreasing at {ell}"
                prev = r.max_gen_ratio
                checked += 1
        return True, f"{checked} intervals"

    return _timed(13, "Folner intervals", 2, body)


CRITERIA = [
    criterion_1,
    criterion_2,
    criterion_3,
    criterion_4,
    criterion_5,
    criterion_6,
    criterion_7,
    criterion_8,
    criterion_9,
    criterion_10,
    criterion_11,
    criterion_12,
    criterion_13,
]


def run_all() -> list[CriterionResult]:
    return [c() for c in CRITERIA]
