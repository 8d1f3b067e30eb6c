"""Probability measures, R-boundaries and the sparsification procedures."""
from __future__ import annotations

import itertools
import math
from collections.abc import Callable, Iterable
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import config
from .constructions import point_horizon_ratio
from .errors import InternalInconsistencyError, PreconditionError, ValidationError
from .metric import Cover, FiniteMetricSpace, family_diameter, horizon_counts


class ProbabilityMeasure:
    def __init__(self, space: FiniteMetricSpace, weights, validate: bool = True):
        self.space = space
        self.weights = np.asarray(weights, dtype=float)
        if validate:
            self.validate()

    def validate(self) -> None:
        w = self.weights
        if w.shape != (self.space.n,):
            raise ValidationError(f"{w.shape[0] if w.ndim else 0} weights for {self.space.n} points")
        if (w < 0).any():
            raise ValidationError(f"negative weight at point {int(np.argmax(w < 0))}")
        if abs(math.fsum(w) - 1.0) > config.get_tol() * max(1, len(w)):
            raise ValidationError(f"weights sum to {math.fsum(w)}, not 1")

    def __call__(self, A: Iterable[int]) -> float:
        return math.fsum(self.weights[sorted(A)]) if A else 0.0

    @property
    def support(self) -> frozenset[int]:
        return frozenset(np.flatnonzero(self.weights > 0).tolist())

    def restricted(self, Y: Iterable[int]) -> ProbabilityMeasure:
        """Rescaled restriction to ``Y`` (must have positive mass)."""
        Y = sorted(Y)
        mass = self(Y)
        if mass <= 0:
            raise ValueError("cannot restrict to a null set")
        w = np.zeros_like(self.weights)
        w[Y] = self.weights[Y] / mass
        return ProbabilityMeasure(self.space, w, validate=False)

    @classmethod
    def uniform(cls, space: FiniteMetricSpace, support: Iterable[int] | None = None) -> ProbabilityMeasure:
        pts = sorted(range(space.n) if support is None else support)
        w = np.zeros(space.n)
        w[pts] = 1.0 / len(pts)
        return cls(space, w)


def r_boundary(X: FiniteMetricSpace, E: Iterable[int], R: float, closed: bool = False) -> frozenset[int]:
    """Points outside E at distance ``< R`` from E (``<= R`` with ``closed=True``)."""
    if R <= 0:
        raise ValueError(f"R must be positive, got {R}")
    E = X.check_subset(E)
    if not E:
        return frozenset()
    d = X.set_distance(E)
    near = d <= R + config.get_tol() if closed else d < R - config.get_tol()
    return frozenset(np.flatnonzero(near).tolist()) - E


def ula_witness_check(
    X: FiniteMetricSpace, mu: ProbabilityMeasure, E: Iterable[int], R: float, eps: float, closed: bool = False
) -> bool:
    E = frozenset(E)
    if not E:
        raise ValueError("E must be nonempty")
    return config.lt(mu(r_boundary(X, E, R, closed)), eps * mu(E))


def boundary_identity(
    X: FiniteMetricSpace, mu: ProbabilityMeasure, U: Cover, R: float, exact: bool = False
) -> tuple[float, float] | tuple[Fraction, Fraction]:
    """Both sides of ``sum_s mu(∂_R U_s) = sum_x mu(x)(|hor(B(x,R))| - |hor({x})|)``.

    With ``exact=True`` the float weights are converted to Fractions without
    rounding, so the two sides must agree exactly.
    """
    excess = horizon_counts(U, R) - horizon_counts(U, None)
    if exact:
        w = [Fraction(float(v)) for v in mu.weights]
        lhs = sum((w[x] for _, pts in U.elements for x in r_boundary(X, pts, R)), Fraction(0))
        rhs = sum((w[x] * int(e) for x, e in enumerate(excess)), Fraction(0))
        return lhs, rhs
    lhs = math.fsum(mu(r_boundary(X, pts, R)) for _, pts in U.elements)
    rhs = math.fsum(mu.weights * excess)
    return lhs, rhs


def scan_boundary_set(
    X: FiniteMetricSpace, mu: ProbabilityMeasure, U: Cover, R: float, eps: float
) -> tuple[object, frozenset[int]]:
    """First cover element (label order) with ``mu(∂_R U_t) < eps * mu(U_t)``.

    Requires ``|hor({x})| / |hor(B(x, R))| > 1/(1+eps)`` at every support
    point; under that hypothesis some element must qualify.
    """
    report = point_horizon_ratio(X, U, R)
    supp = sorted(mu.support)
    worst = min(supp, key=lambda x: report.ratios[x])
    if not float(report.ratios[worst]) * (1 + eps) > 1:
        raise PreconditionError(
            f"horizon ratio {report.ratios[worst]} at support point {worst} is not above 1/(1+eps)"
        )
    for lab, pts in U.elements:
        if ula_witness_check(X, mu, pts, R, eps):
            return lab, pts
    raise InternalInconsistencyError("ratio hypothesis holds but no cover element has a light boundary")


@dataclass(frozen=True)
class DisjointFamily:
    members: tuple[frozenset[int], ...]
    R: float

    def validate(self, X: FiniteMetricSpace) -> None:
        for i, Z in enumerate(self.members):
            if not Z:
                raise ValidationError(f"member {i} is empty")
        for i, j in itertools.combinations(range(len(self.members)), 2):
            gap = float(X.dist[np.ix_(sorted(self.members[i]), sorted(self.members[j]))].min())
            if config.lt(gap, self.R):
                raise ValidationError(f"members {i} and {j} are {gap} < R = {self.R} apart")

    def mass(self, mu: ProbabilityMeasure) -> float:
        return math.fsum(mu(Z) for Z in self.members)


Finder = Callable[[ProbabilityMeasure], Iterable[int]]


def cover_finder(X: FiniteMetricSpace, U: Cover, R: float, eps: float) -> Finder:
    """Set-finder that scans ``U`` for a light-boundary element."""

    def find(nu: ProbabilityMeasure) -> frozenset[int]:
        return scan_boundary_set(X, nu, U, R, eps)[1]

    return find


def brute_force_finder(X: FiniteMetricSpace, R: float, S: float, eps: float, max_support: int = 16) -> Finder:
    """Exhaustive finder over subsets of the support of diameter at most ``S``."""

    def find(nu: ProbabilityMeasure) -> frozenset[int]:
        supp = sorted(nu.support)
        if len(supp) > max_support:
            raise PreconditionError(f"support of {len(supp)} points is too large to enumerate")
        for k in range(1, len(supp) + 1):
            for Z in itertools.combinations(supp, k):
                if family_diameter(X, [Z]) > S + config.get_tol():
                    continue
                if ula_witness_check(X, nu, Z, R, eps):
                    return frozenset(Z)
        raise PreconditionError("no subset of diameter <= S has a light boundary")

    return find


def heavy_support(mu: ProbabilityMeasure, target: float) -> list[int]:
    """Smallest prefix of support points by descending weight with mass >= target."""
    order = sorted(mu.support, key=lambda x: (-mu.weights[x], x))
    Y, mass = [], 0.0
    for x in order:
        if mass >= target - config.get_tol():
            break
        Y.append(x)
        mass += mu.weights[x]
    return Y


def msp_greedy(
    X: FiniteMetricSpace,
    mu: ProbabilityMeasure,
    R: float,
    S: float,
    finder: Finder,
    c: float,
    eps: float,
) -> DisjointFamily:
    """R-disjoint family of sets of diameter <= S carrying mass > c.

    Restricts to heavy points ``Y`` of mass ``>= (1+c)/2`` and repeatedly asks
    ``finder`` for a light-boundary set of the rescaled remainder, removing its
    R-neighborhood each time.
    """
    if not 0 < c < 1:
        raise PreconditionError(f"need 0 < c < 1, got {c}")
    if not (1 + c) / (2 * (1 + eps)) > c:
        raise PreconditionError(f"eps = {eps} too large for c = {c}: need (1+c)/(2(1+eps)) > c")
    remaining = set(heavy_support(mu, (1 + c) / 2))
    members = []
    step = 0
    while remaining:
        step += 1
        nu = mu.restricted(remaining)
        try:
            Z = frozenset(finder(nu))
        except Exception as exc:
            raise PreconditionError(f"finder failed at iteration {step}: {exc}") from exc
        if Z and family_diameter(X, [Z]) > S + config.get_tol():
            raise PreconditionError(f"finder returned a set of diameter > S at iteration {step}")
        if not Z or not ula_witness_check(X, nu, Z, R, eps):
            raise PreconditionError(f"finder returned a set without a light boundary at iteration {step}")
        Zi = Z & remaining
        members.append(Zi)
        near = X.set_distance(Zi) < R - config.get_tol()
        remaining -= set(np.flatnonzero(near).tolist())
    family = DisjointFamily(tuple(members), R)
    try:
        family.validate(X)
    except ValidationError as exc:
        raise InternalInconsistencyError(str(exc)) from exc
    if any(family_diameter(X, [Z]) > S + config.get_tol() for Z in members):
        raise InternalInconsistencyError("member of diameter > S")
    if not family.mass(mu) > c:
        raise InternalInconsistencyError(f"family mass {family.mass(mu)} <= c = {c}")
    return family


def msp_to_ula(
    X: FiniteMetricSpace, mu: ProbabilityMeasure, family: DisjointFamily, R: float, eps: float
) -> tuple[int, frozenset[int]]:
    """First member of a 2R-disjoint family with ``mu(∂_R Z) < eps * mu(Z)``."""
    DisjointFamily(family.members, 2 * R).validate(X)
    total = family.mass(mu)
    need = max(1 - eps / 2, 0.5)
    if not total > need:
        raise PreconditionError(f"family mass {total} is not above max(1 - eps/2, 1/2) = {need}")
    for j, Z in enumerate(family.members):
        if ula_witness_check(X, mu, Z, R, eps):
            return j, Z
    raise InternalInconsistencyError("no member qualifies although the mass hypothesis holds")
