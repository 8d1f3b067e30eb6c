"""Amenability-side constructions: horizon ratios, averaging, rounding, cover-to-partition.

Every construction re-verifies its stated conclusions on the instance it
produced and raises :class:`PostconditionError` if one fails.
"""
from __future__ import annotations

import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import config
from .errors import InternalInconsistencyError, PostconditionError, PreconditionError, ValidationError
from .metric import Cover, FiniteMetricSpace, horizon_counts, lebesgue_number
from .pou import (
    PartitionOfUnity,
    SparseL1Vector,
    barycentric_expansion,
    barycentric_from_cover,
    lipschitz_number,
    pairwise_l1,
)


@dataclass
class AmenabilityReport:
    r: float | None
    s: float
    min_ratio: Fraction
    worst_point: int
    horizon_sizes: list[tuple[int, int]] = field(repr=False)

    def holds(self, eps: float) -> bool:
        """Whether the ratio exceeds ``1 - eps`` at every point."""
        return float(self.min_ratio) > 1 - eps

    @property
    def ratios(self) -> list[Fraction]:
        return [Fraction(a, b) for a, b in self.horizon_sizes]


def _ratio_report(U: Cover, r: float | None, s: float) -> AmenabilityReport:
    inner = horizon_counts(U, r)
    outer = horizon_counts(U, s)
    sizes = [(int(a), int(b)) for a, b in zip(inner, outer)]
    ratios = [Fraction(a, b) for a, b in sizes]
    worst = min(range(len(ratios)), key=ratios.__getitem__)
    return AmenabilityReport(r, s, ratios[worst], worst, sizes)


def horizon_ratio(X: FiniteMetricSpace, U: Cover, r: float, s: float) -> AmenabilityReport:
    """Per-point ``|hor(B(x, r))| / |hor(B(x, s))|`` and its minimum."""
    if not s > r > 0:
        raise ValueError(f"need s > r > 0, got r = {r}, s = {s}")
    _same_space(X, U)
    return _ratio_report(U, r, s)


def point_horizon_ratio(X: FiniteMetricSpace, U: Cover, s: float) -> AmenabilityReport:
    """Per-point ``|hor({x})| / |hor(B(x, s))|`` (``r`` is reported as ``None``)."""
    if not s > 0:
        raise ValueError(f"need s > 0, got {s}")
    _same_space(X, U)
    return _ratio_report(U, None, s)


def _same_space(X, U):
    if U.space is not X and U.space.n != X.n:
        raise ValueError("cover lives on a different space")


def default_basepoints(U: Cover) -> dict:
    return {lab: min(pts) for lab, pts in U.elements}


def average_pou(
    f: PartitionOfUnity,
    U: Cover,
    eps: float,
    basepoints: Mapping | None = None,
    M: float | None = None,
) -> PartitionOfUnity:
    """Average ``f`` over the basepoints of the elements near each point.

    ``g(x)`` is the mean of ``f(x_s)`` over ``s`` with ``B(x, 1/eps)`` meeting
    ``U_s``.  ``M`` must bound every ``d(x, x_s)`` over those pairs (default:
    the largest such distance, at least 1).  Requires the Lipschitz number
    ``delta`` of ``f`` to satisfy ``delta < eps/(2M+1)``; verifies
    ``Leb(g) >= 1/eps`` and ``||g(x)-g(y)|| <= delta(2M + d(x,y)) + delta``.
    """
    X = f.space
    _same_space(X, U)
    if eps <= 0:
        raise ValueError("eps must be positive")
    base = default_basepoints(U) if basepoints is None else dict(basepoints)
    for lab, pts in U.elements:
        if base.get(lab) not in pts:
            raise PreconditionError(f"basepoint {base.get(lab)!r} of element {lab!r} is not in it")
    labels = U.labels
    bp = np.array([base[lab] for lab in labels])
    meets = (X.ball_matrix(1 / eps).astype(np.int64) @ U.membership.T.astype(np.int64)) > 0
    reach = max(float(X.dist[x, bp[meets[x]]].max()) for x in range(X.n))
    if M is None:
        M = max(reach, 1.0)
    elif not config.le(reach, M):
        raise PreconditionError(f"M = {M} is below the basepoint reach {reach}")
    if not M > 0.5:
        raise PreconditionError(f"need M > 1/2, got {M}")
    delta = lipschitz_number(f)
    if not delta < eps / (2 * M + 1):
        raise PreconditionError(
            f"f has lipschitz_number {delta:.6g}, need < eps/(2M+1) = {eps / (2 * M + 1):.6g}"
        )
    F = f.dense()
    G = np.stack([F[bp[meets[x]]].mean(axis=0) for x in range(X.n)])
    values = [SparseL1Vector({f.labels[j]: G[x, j] for j in np.flatnonzero(G[x])}) for x in range(X.n)]
    g = PartitionOfUnity(X, values, f.labels)
    leb = lebesgue_number(g.induced_cover())
    if not config.le(1 / eps, leb):
        raise PostconditionError(f"Lebesgue number {leb} < 1/eps = {1 / eps}")
    bound = delta * (2 * M + X.dist) + delta
    excess = pairwise_l1(g) - bound
    if (excess > config.get_tol()).any():
        x, y = (int(v) for v in np.argwhere(excess > config.get_tol())[0])
        raise PostconditionError(f"averaged partition too steep at ({x},{y})")
    return g


@dataclass(frozen=True)
class RoundingParams:
    """Dimension ``n``, integer scale ``m`` and target ``eps`` for rounding.

    With ``eps`` given, ``m >= 2(n+1)/eps + (n+1)(n+2)`` is enforced; with
    ``eps=None`` any ``m >= 1`` is accepted and the construction itself
    reports if it gets stuck.
    """

    n: int
    m: int
    eps: float | None = None

    def __post_init__(self):
        if self.n < 0 or self.m < 1:
            raise ValidationError(f"bad rounding parameters n={self.n}, m={self.m}")
        if self.eps is not None and self.m < self.min_m(self.n, self.eps):
            raise ValidationError(
                f"m = {self.m} < 2(n+1)/eps + (n+1)(n+2) = {2 * (self.n + 1) / self.eps + (self.n + 1) * (self.n + 2):.6g}"
            )

    @staticmethod
    def min_m(n: int, eps: float) -> int:
        return math.ceil(2 * (n + 1) / eps + (n + 1) * (n + 2) - 1e-12)

    @classmethod
    def minimal(cls, n: int, eps: float) -> RoundingParams:
        return cls(n, cls.min_m(n, eps), eps)


@dataclass
class RoundingResult:
    h: PartitionOfUnity
    p: PartitionOfUnity
    G2: list[dict]
    G1: list[dict]
    k_before: list[int]


def round_to_barycentric(g: PartitionOfUnity, params: RoundingParams) -> RoundingResult:
    """Integer rounding of ``m*g`` followed by barycentric expansion.

    Fractional parts go to ``G1`` (entries in ``(0,1)`` keep one unit in
    ``G2``); the integer excess ``k(x)`` is then moved onto the label of largest
    ``G2`` weight (ties by label order).  ``h = G2/m`` and ``p`` is the
    barycentric expansion of ``G2``.
    """
    n, m = params.n, params.m
    X = g.space
    for x, v in enumerate(g.values):
        if len(v) > n + 1:
            raise PreconditionError(f"point {x} has carrier of size {len(v)} > n+1 = {n + 1}")
    tol = config.get_tol()
    G1s, G2s, ks = [], [], []
    for x in range(X.n):
        carrier = g.sorted_carrier(x)
        G = {v: m * g[x][v] for v in carrier}
        G2: dict = {}
        G1: dict = {}
        for v in carrier:
            near = round(G[v])
            val = float(near) if abs(G[v] - near) <= tol * m else G[v]
            whole = max(1, math.floor(val))
            G2[v] = whole
            G1[v] = G[v] - whole
        k = m - sum(G2.values())
        if not abs(k) < n + 1:
            raise InternalInconsistencyError(f"point {x}: |k| = {abs(k)} >= n+1")
        ks.append(k)
        w = max(carrier, key=lambda v: (G2[v], -g.label_index(v)))
        if k < 0 and not G2[w] > -k:
            raise PreconditionError(f"point {x}: no label with G2 weight above |k| = {-k}; m too small")
        G2[w] += k
        G1[w] -= k
        G1s.append(G1)
        G2s.append(G2)
    for x, (G1, G2) in enumerate(zip(G1s, G2s)):
        if sum(G2.values()) != m:
            raise InternalInconsistencyError(f"point {x}: ||G2|| = {sum(G2.values())} != m")
        if any(c <= 0 for c in G2.values()):
            raise InternalInconsistencyError(f"point {x}: G2 lost part of the carrier")
        if math.fsum(abs(c) for c in G1.values()) > 2 * n + 2 + tol:
            raise PostconditionError(f"point {x}: ||G1|| exceeds 2n+2")
    h = PartitionOfUnity(X, [SparseL1Vector({v: c / m for v, c in G2.items()}) for G2 in G2s], g.labels)
    bound = (2 * n + 2) / m
    for x in range(X.n):
        if h[x].carrier != g[x].carrier:
            raise PostconditionError(f"point {x}: carrier changed")
        if not config.le(h[x].distance(g[x]), bound):
            raise PostconditionError(f"point {x}: ||h - g|| = {h[x].distance(g[x])} > (2n+2)/m")
    p = barycentric_expansion(X, G2s, g.labels)
    return RoundingResult(h, p, G2s, G1s, ks)


def amenable_cover_to_pou(
    X: FiniteMetricSpace, U: Cover, r: float, mu: float, eps: float | None = None
) -> PartitionOfUnity:
    """Barycentric partition uniform on ``hor(B(x, 2r), U)``.

    Requires ``Leb(U) >= 4r`` and ``(r, 2r)``-horizon ratios above
    ``1/(1+mu)``.  Verifies ``Leb(g) >= 2r`` and, for ``d(x,y) < r``,
    ``|A(x) - A(y)| < mu |A(x) ∩ A(y)|`` and ``||g(x) - g(y)|| < 4 mu``.  When
    ``eps`` is given with ``r > max(1/eps, (2-eps)/eps)`` and ``mu <= eps/4``
    the result is also checked to be ``(eps, eps)``-Lipschitz with Lebesgue
    number above ``1/eps``.
    """
    _same_space(X, U)
    if r <= 0 or mu <= 0:
        raise ValueError("r and mu must be positive")
    leb = lebesgue_number(U)
    if not config.le(4 * r, leb):
        raise PreconditionError(f"Lebesgue number {leb} < 4r = {4 * r}")
    report = _ratio_report(U, r, 2 * r)
    if not float(report.min_ratio) * (1 + mu) > 1:
        raise PreconditionError(
            f"horizon ratio {report.min_ratio} at point {report.worst_point} is not above 1/(1+mu)"
        )
    near2 = X.ball_matrix(2 * r).astype(np.int64) @ U.membership.T.astype(np.int64) > 0
    labels = U.labels
    A = [frozenset(labels[j] for j in np.flatnonzero(row)) for row in near2]
    g = PartitionOfUnity(X, [SparseL1Vector.uniform(sorted(Ax, key=labels.index)) for Ax in A], labels)
    gleb = lebesgue_number(g.induced_cover())
    if not config.le(2 * r, gleb):
        raise PostconditionError(f"Lebesgue number of g is {gleb} < 2r")
    L1 = pairwise_l1(g)
    close = X.ball_matrix(r)
    for x, y in np.argwhere(close).tolist():
        if not len(A[x] - A[y]) < mu * len(A[x] & A[y]):
            raise PostconditionError(f"pair ({x},{y}): |A(x) - A(y)| >= mu |A(x) ∩ A(y)|")
        if not L1[x, y] < 4 * mu:
            raise PostconditionError(f"pair ({x},{y}): ||g(x) - g(y)|| = {L1[x, y]} >= 4 mu")
    if eps is not None and r > max(1 / eps, (2 - eps) / eps) and mu <= eps / 4:
        if not gleb > 1 / eps:
            raise PostconditionError(f"Lebesgue number {gleb} <= 1/eps")
        if (L1 > eps * X.dist + eps + config.get_tol()).any():
            raise PostconditionError("partition is not (eps, eps)-Lipschitz")
    return g


def horizon_ratio_bound(s: float, mu: float, M: int) -> float:
    """``(1 + M (s+1) mu / (1 - (s+1) mu))^-1``."""
    t = (s + 1) * mu
    if not t < 1:
        raise PreconditionError(f"(s+1)*mu = {t} >= 1")
    return 1.0 / (1.0 + M * t / (1.0 - t))


def ratio_bound_from_pou(
    X: FiniteMetricSpace, U: Cover, s: float, mu: float | None = None, M: int | None = None
) -> tuple[float, AmenabilityReport]:
    """Lower bound on ``|hor({x})| / |hor(B(x, s))|`` from the Lipschitz number of ``p_U``.

    ``mu`` defaults to the measured Lipschitz number of the induced
    barycentric partition and ``M`` to the largest s-ball.  Both are checked
    against the instance, then the bound is verified at every point.
    """
    _same_space(X, U)
    sizes = X.ball_matrix(s).sum(axis=1)
    biggest = int(sizes.max())
    if M is None:
        M = biggest
    elif biggest > M:
        raise PreconditionError(f"an s-ball has {biggest} > M = {M} points")
    measured = lipschitz_number(barycentric_from_cover(U))
    if mu is None:
        mu = measured
    elif not config.le(measured, mu):
        raise PreconditionError(f"p_U is not ({mu},{mu})-Lipschitz: lipschitz_number {measured}")
    bound = horizon_ratio_bound(s, mu, M)
    report = _ratio_report(U, None, s)
    if not config.le(bound, float(report.min_ratio)):
        raise PostconditionError(f"min ratio {report.min_ratio} < bound {bound}")
    return bound, report


def window_cover(X: FiniteMetricSpace, starts: Sequence[int], length: int) -> Cover:
    """Cover of a cycle or path (points in order) by index windows ``[s, s+length)``."""
    n = X.n
    return Cover(X, [(s, frozenset((s + i) % n for i in range(length))) for s in starts])
