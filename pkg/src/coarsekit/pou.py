"""Sparse l1 vectors and partitions of unity on finite metric spaces.

A partition of unity assigns to every point a nonnegative weight map of l1
norm one over an explicit, ordered label universe.  Label order matters: it
fixes carrier enumeration and tie-breaking in every construction below.
"""
from __future__ import annotations

import math
from collections.abc import Hashable, Iterable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np
from scipy.spatial.distance import cdist

from . import config
from .errors import PostconditionError, PreconditionError, ValidationError
from .metric import INF, Cover, FiniteMetricSpace, lebesgue_number, neighborhood


class SparseL1Vector(Mapping):
    """Finitely supported real weight map; zero entries are never stored."""

    __slots__ = ("_w",)

    def __init__(self, weights: Mapping | Iterable[tuple[Hashable, float]] = ()):
        items = weights.items() if isinstance(weights, Mapping) else weights
        self._w = {k: float(v) for k, v in items if v != 0}

    def __getitem__(self, key):
        return self._w.get(key, 0.0)

    def __contains__(self, key) -> bool:
        return key in self._w

    def __iter__(self):
        return iter(self._w)

    def __len__(self) -> int:
        return len(self._w)

    def items(self):
        return self._w.items()

    def keys(self):
        return self._w.keys()

    def values(self):
        return self._w.values()

    def get(self, key, default=None):
        return self._w.get(key, default)

    def __repr__(self) -> str:
        return f"SparseL1Vector({self._w!r})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Mapping):
            return NotImplemented
        return self.distance(other) <= config.get_tol() * max(1, len(self) + len(other))

    __hash__ = None

    @property
    def carrier(self) -> frozenset:
        return frozenset(self._w)

    def norm(self) -> float:
        return math.fsum(abs(v) for v in self._w.values())

    def distance(self, other: Mapping) -> float:
        keys = set(self._w) | set(other)
        return math.fsum(abs(self._w.get(k, 0.0) - other.get(k, 0.0)) for k in keys)

    def scaled(self, c: float) -> SparseL1Vector:
        return SparseL1Vector({k: c * v for k, v in self._w.items()})

    @classmethod
    def uniform(cls, labels: Iterable[Hashable]) -> SparseL1Vector:
        labels = list(labels)
        return cls({v: 1.0 / len(labels) for v in labels})


class BarycentricFlag(NamedTuple):
    is_barycentric: bool
    carrier_sizes: list[int]


class PartitionOfUnity:
    """Per-point :class:`SparseL1Vector` values over an ordered label universe."""

    def __init__(
        self,
        space: FiniteMetricSpace,
        values: Sequence[Mapping],
        labels: Sequence[Hashable] | None = None,
        validate: bool = True,
    ):
        self.space = space
        self.values = [v if isinstance(v, SparseL1Vector) else SparseL1Vector(v) for v in values]
        if labels is None:
            seen: dict = {}
            for v in self.values:
                for k in v:
                    seen.setdefault(k, None)
            labels = list(seen)
        self.labels: tuple = tuple(labels)
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        self._dense = None
        self._cob = None
        if validate:
            self.validate()

    def validate(self) -> None:
        if len(self.values) != self.space.n:
            raise ValidationError(f"{len(self.values)} values for {self.space.n} points")
        if len(self._index) != len(self.labels):
            raise ValidationError("label universe has duplicates")
        tol = config.get_tol()
        for x, v in enumerate(self.values):
            for k, w in v.items():
                if k not in self._index:
                    raise ValidationError(f"point {x}: label {k!r} not in the label universe")
                if w < 0:
                    raise ValidationError(f"point {x}: negative weight {w} on {k!r}")
            if abs(v.norm() - 1.0) > tol * max(1, len(v)):
                raise ValidationError(f"point {x}: l1 norm {v.norm()} != 1")

    def __getitem__(self, x: int) -> SparseL1Vector:
        return self.values[x]

    def __len__(self) -> int:
        return len(self.values)

    def __repr__(self) -> str:
        return f"PartitionOfUnity(n={self.space.n}, labels={len(self.labels)})"

    def label_index(self, label) -> int:
        return self._index[label]

    def sorted_carrier(self, x: int) -> list:
        return sorted(self.values[x], key=self._index.__getitem__)

    def dense(self) -> np.ndarray:
        """``n x |labels|`` weight matrix in label order (a read-only cached array)."""
        if self._dense is None:
            out = np.zeros((self.space.n, len(self.labels)))
            for x, v in enumerate(self.values):
                for k, w in v.items():
                    out[x, self._index[k]] = w
            out.setflags(write=False)
            self._dense = out
        return self._dense

    def preimages(self) -> list[tuple[Hashable, frozenset[int]]]:
        """Nonempty carrier preimages ``f^-1(st(v))`` in label order."""
        members: dict = {}
        for x, v in enumerate(self.values):
            for k in v:
                members.setdefault(k, set()).add(x)
        return [(lab, frozenset(members[lab])) for lab in self.labels if lab in members]

    def induced_cover(self) -> Cover:
        return Cover(self.space, self.preimages())

    def barycentric_flag(self) -> BarycentricFlag:
        tol = config.get_tol()
        sizes = [len(v) for v in self.values]
        ok = all(
            all(abs(w - 1.0 / len(v)) <= tol for w in v.values()) for v in self.values
        )
        return BarycentricFlag(ok, sizes)

    @property
    def is_barycentric(self) -> bool:
        return self.barycentric_flag().is_barycentric

    def dimension(self) -> int:
        return max(len(v) for v in self.values) - 1


@dataclass(frozen=True)
class PoUMetrics:
    lipschitz_number: float
    variation_at_r: float | None
    coboundedness: float
    lebesgue: float


def pairwise_l1(f: PartitionOfUnity) -> np.ndarray:
    F = f.dense()
    return cdist(F, F, metric="cityblock")


def lipschitz_number(f: PartitionOfUnity, L1: np.ndarray | None = None) -> float:
    """Least e with ``||f(x)-f(y)|| <= e*d(x,y) + e`` for all pairs."""
    if f.space.n < 2:
        return 0.0
    if L1 is None:
        L1 = pairwise_l1(f)
    return float((L1 / (f.space.dist + 1.0)).max())


def coboundedness(f: PartitionOfUnity) -> float:
    """Largest diameter of a nonempty carrier preimage."""
    if f._cob is None:
        D = f.space.dist
        best = 0.0
        for col in (f.dense() > 0).T:
            idx = np.flatnonzero(col)
            if len(idx) > 1:
                best = max(best, float(D[np.ix_(idx, idx)].max()))
        f._cob = best
    return f._cob


def pou_metrics(f: PartitionOfUnity, r: float | None = None) -> PoUMetrics:
    L1 = pairwise_l1(f)
    variation = None
    if r is not None:
        near = f.space.ball_matrix(r)
        variation = float(L1[near].max()) if near.any() else 0.0
    return PoUMetrics(
        lipschitz_number=lipschitz_number(f, L1),
        variation_at_r=variation,
        coboundedness=coboundedness(f),
        lebesgue=lebesgue_number(f.induced_cover()),
    )


def normalize(X: FiniteMetricSpace, F: Sequence[Mapping], labels=None) -> PartitionOfUnity:
    values = []
    for x, v in enumerate(F):
        v = v if isinstance(v, SparseL1Vector) else SparseL1Vector(v)
        if any(w < 0 for w in v.values()):
            raise ValueError(f"point {x}: negative entry, cannot normalize")
        nv = v.norm()
        if nv <= 0:
            raise ValueError(f"point {x}: zero vector cannot be normalized")
        values.append(v.scaled(1.0 / nv))
    return PartitionOfUnity(X, values, labels)


def contract(f: PartitionOfUnity, alpha: Mapping, target: Sequence | None = None) -> PartitionOfUnity:
    """Push ``f`` forward along the label map ``alpha`` (sum over fibers)."""
    for x, v in enumerate(f.values):
        for k in v:
            if k not in alpha:
                raise ValueError(f"label map undefined on carrier label {k!r} (point {x})")
    if target is None:
        seen: dict = {}
        for lab in f.labels:
            if lab in alpha:
                seen.setdefault(alpha[lab], None)
        target = list(seen)
    else:
        image = {alpha[lab] for lab in f.labels if lab in alpha}
        missing = [t for t in target if t not in image]
        if missing:
            raise ValueError(f"label map is not onto: {missing!r} not hit")
    values = []
    for v in f.values:
        out: dict = {}
        for k, w in v.items():
            out[alpha[k]] = out.get(alpha[k], 0.0) + w
        values.append(SparseL1Vector(out))
    return PartitionOfUnity(f.space, values, target)


def relabel_product(f: PartitionOfUnity, M: float) -> tuple[dict, PartitionOfUnity]:
    """Injective relabeling ``v -> (x, n)`` with ``g^-1(st(x, n))`` inside ``B(x, M)``.

    ``x(v)`` is the lowest-index point carrying ``v`` and ``n`` is the 1-based
    position of ``v`` in that point's carrier (label order).
    """
    carriers = [f.sorted_carrier(x) for x in range(f.space.n)]
    owner: dict = {}
    for x, c in enumerate(carriers):
        for pos, v in enumerate(c, start=1):
            owner.setdefault(v, (x, pos))
    empty = [v for v in f.labels if v not in owner]
    if empty:
        raise PreconditionError(f"labels with empty preimage: {empty[:5]!r}")
    cob = coboundedness(f)
    if not config.lt(cob, M):
        raise PreconditionError(f"partition is not {M}-cobounded (preimage diameter {cob})")
    alpha = {v: owner[v] for v in f.labels}
    g = contract(f, alpha, [alpha[v] for v in f.labels])
    D = f.space.dist
    for (x, n), pts in g.preimages():
        far = [y for y in pts if not config.lt(D[x, y], M)]
        if far:
            raise PostconditionError(f"preimage of {(x, n)} leaves B({x}, {M}): {far}")
    return alpha, g


def barycentric_from_cover(U: Cover) -> PartitionOfUnity:
    values = [SparseL1Vector.uniform(lab for lab, pts in U.elements if x in pts) for x in range(U.space.n)]
    return PartitionOfUnity(U.space, values, U.labels)


class SimplexBounds(NamedTuple):
    lower1: Fraction
    lower2: Fraction
    exact: Fraction
    upper: Fraction


def simplex_bounds(A: Iterable, B: Iterable) -> SimplexBounds:
    """The four quantities of the barycentric-distance sandwich, exactly."""
    A, B = frozenset(A), frozenset(B)
    if not A or not B:
        raise ValueError("simplex bounds need nonempty sets")
    a, b = len(A), len(B)
    sym = len(A ^ B)
    only_a, only_b, both = len(A - B), len(B - A), len(A & B)
    exact = Fraction(only_a, a) + Fraction(only_b, b) + both * abs(Fraction(1, a) - Fraction(1, b))
    return SimplexBounds(
        lower1=Fraction(sym, max(a, b)),
        lower2=Fraction(only_a, a) + Fraction(only_b, b),
        exact=exact,
        upper=Fraction(2 * sym, min(a, b)),
    )


def _as_count(value, x, v) -> int:
    if isinstance(value, (int, np.integer)):
        k = int(value)
    elif isinstance(value, float) and value.is_integer():
        k = int(value)
    else:
        raise ValueError(f"point {x}: non-integer entry {value!r} on {v!r}")
    if k < 0:
        raise ValueError(f"point {x}: negative entry {k} on {v!r}")
    return k


def barycentric_expansion(
    X: FiniteMetricSpace, F: Sequence[Mapping], labels: Sequence | None = None
) -> PartitionOfUnity:
    """Barycentric expansion of an integer-valued map of constant norm ``m``.

    The result lives on labels ``(v, i)`` and puts weight ``1/m`` on
    ``(v, 1), ..., (v, F(x)(v))``.
    """
    counts = [{v: _as_count(w, x, v) for v, w in Fx.items()} for x, Fx in enumerate(F)]
    norms = {sum(c.values()) for c in counts}
    if len(norms) != 1:
        raise ValueError(f"norm of F is not constant: {sorted(norms)}")
    (m,) = norms
    if m <= 0:
        raise ValueError("F is identically zero")
    if labels is None:
        seen: dict = {}
        for c in counts:
            for v in c:
                seen.setdefault(v, None)
        labels = list(seen)
    top = {v: max((c.get(v, 0) for c in counts), default=0) for v in labels}
    universe = [(v, i) for v in labels for i in range(1, top[v] + 1)]
    values = [
        SparseL1Vector({(v, i): 1.0 / m for v, k in c.items() for i in range(1, k + 1)})
        for c in counts
    ]
    return PartitionOfUnity(X, values, universe)


def levin_pou(X: FiniteMetricSpace, S: Sequence[int], r: float) -> tuple[PartitionOfUnity, Cover]:
    """Barycentric partition induced by the Levin cover of an r-dense sequence.

    With ``U_n = B(x_n, 2r)``, ``V_n = U_n minus earlier U_i`` and
    ``W_n = B(V_n, r)``, the returned partition is ``p_W`` for the nonempty
    ``W_n``; its coboundedness is below ``6r`` and its Lebesgue number at
    least ``r`` (both checked).
    """
    if r <= 0:
        raise ValueError(f"r must be positive, got {r}")
    S = [X.check_point(s) for s in S]
    if not S:
        raise PreconditionError("empty dense set")
    reach = X.dist[:, S].min(axis=1)
    far = np.flatnonzero(~(reach < r - config.get_tol()))
    if far.size:
        raise PreconditionError(f"S is not {r}-dense: points {far.tolist()[:10]} are not within {r} of S")
    claimed = np.zeros(X.n, dtype=bool)
    elements = []
    for s in S:
        U = X.dist[s] < 2 * r - config.get_tol()
        V = U & ~claimed
        claimed |= U
        if V.any():
            elements.append((s, neighborhood(X, np.flatnonzero(V).tolist(), r)))
    W = Cover(X, elements)
    f = barycentric_from_cover(W)
    cob, leb = coboundedness(f), lebesgue_number(f.induced_cover())
    if not config.lt(cob, 6 * r):
        raise PostconditionError(f"Levin partition coboundedness {cob} >= 6r = {6 * r}")
    if not config.le(r, leb):
        raise PostconditionError(f"Levin partition Lebesgue number {leb} < r = {r}")
    return f, W


@dataclass(frozen=True)
class PropertyAWitness:
    """Finite sets ``A(x)`` of ``(point, n)`` pairs with ``A(x)`` inside ``B(x, S_bound) x N``."""

    A: tuple[frozenset, ...]
    S_bound: float

    def validate(self, X: FiniteMetricSpace) -> None:
        if len(self.A) != X.n:
            raise ValidationError(f"witness has {len(self.A)} sets for {X.n} points")
        for x, Ax in enumerate(self.A):
            if not Ax:
                raise ValidationError(f"A({x}) is empty")
            ys = np.fromiter((y for y, _ in Ax), dtype=np.int64, count=len(Ax))
            if ys.min() < 0 or ys.max() >= X.n:
                raise ValidationError(f"A({x}) names a point outside the space")
            far = X.dist[x, ys] >= self.S_bound - config.get_tol()
            if far.any():
                y = int(ys[np.argmax(far)])
                raise ValidationError(f"A({x}) contains a pair at point {y} outside B({x}, {self.S_bound})")

    def worst_pair(self, X: FiniteMetricSpace, R: float) -> tuple[float, tuple[int, int] | None]:
        """Largest ``|A(x) Δ A(y)| / |A(x) ∩ A(y)|`` over ``d(x, y) < R`` (inf if disjoint)."""
        worst, where = 0.0, None
        near = X.ball_matrix(R)
        for x in range(X.n):
            for y in np.flatnonzero(near[x]).tolist():
                if y <= x:
                    continue
                common = len(self.A[x] & self.A[y])
                ratio = INF if common == 0 else len(self.A[x] ^ self.A[y]) / common
                if where is None or ratio > worst:
                    worst, where = ratio, (x, y)
        return worst, where


def pou_to_witness(f: PartitionOfUnity, R: float, eps: float, M: float | None = None) -> PropertyAWitness:
    """Finite-set witness at scale ``(R, eps)`` from a Lipschitz barycentric partition.

    Requires ``f`` to be ``(e, e)``-Lipschitz with ``e = min(eps, 1/2)/(R+1)``.
    ``M`` defaults to one more than the coboundedness of ``f``.
    """
    if not f.is_barycentric:
        raise PreconditionError("partition is not barycentric")
    X = f.space
    bar = min(eps, 0.5) / (R + 1)
    lip = lipschitz_number(f)
    if not config.le(lip, bar):
        raise PreconditionError(
            f"partition is not ({bar:.6g},{bar:.6g})-Lipschitz: achieved lipschitz_number {lip:.6g}"
        )
    if M is None:
        M = coboundedness(f) + 1.0
    _, g = relabel_product(f, M)
    witness = PropertyAWitness(tuple(g[x].carrier for x in range(X.n)), float(M))
    witness.validate(X)
    worst, where = witness.worst_pair(X, R)
    if where is not None and not config.lt(worst, eps):
        raise PostconditionError(
            f"witness ratio {worst:.6g} >= eps = {eps} at pair {where} "
            f"(lipschitz_number {lip:.6g}, bound {bar:.6g})"
        )
    return witness


def witness_to_pou(X: FiniteMetricSpace, witness: PropertyAWitness, eps: float) -> PartitionOfUnity:
    """Barycentric partition ``x -> uniform on A(x)``, certified ``(eps, eps)``-Lipschitz."""
    if not 0 < eps < 2:
        raise PreconditionError(f"eps must lie in (0, 2), got {eps}")
    witness.validate(X)
    scale = (2 - eps) / eps
    worst, where = witness.worst_pair(X, scale)
    if where is not None and not config.lt(worst, eps / 2):
        x, y = where
        raise PreconditionError(
            f"pair ({x},{y}) at distance {X.dist[x, y]} < {scale:.6g} has ratio {worst:.6g} >= eps/2"
        )
    labels = sorted({a for Ax in witness.A for a in Ax})
    f = PartitionOfUnity(X, [SparseL1Vector.uniform(sorted(Ax)) for Ax in witness.A], labels)
    # each preimage lies in an S-ball around its label's point, so its diameter is < 2S
    cob = coboundedness(f)
    if not config.lt(cob, 2 * witness.S_bound):
        raise PostconditionError(f"coboundedness {cob} >= 2*S_bound")
    L1 = pairwise_l1(f)
    slack = eps * X.dist + eps - L1
    if (slack < -config.get_tol()).any():
        x, y = (int(v) for v in np.argwhere(slack < -config.get_tol())[0])
        raise PostconditionError(f"(eps,eps)-Lipschitz bound fails at ({x},{y}): {L1[x, y]}")
    return f
