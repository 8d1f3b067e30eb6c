"""Finite metric spaces, covers and the basic large-scale measurements on them.

Balls are open throughout: ``B(x, r) = {y : d(x, y) < r}``, so ``B(x, 0)`` is
empty.  Subsets of points are ``frozenset[int]``; infinite values are
``math.inf``.
"""
from __future__ import annotations

import math
import warnings
from collections.abc import Hashable, Iterable, Sequence

import numpy as np

from . import config
from .errors import PseudometricWarning, ValidationError

INF = math.inf


class FiniteMetricSpace:
    """Points ``0..n-1`` with a distance matrix.

    The matrix is validated on construction (zero diagonal, symmetry,
    nonnegativity, triangle inequality).  Distinct points at distance zero are
    allowed; they set :attr:`pseudometric` and emit a warning.
    """

    def __init__(self, dist, labels: Sequence[str] | None = None, validate: bool = True):
        d = np.array(dist, dtype=float)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise ValidationError(f"dist must be a square matrix, got shape {d.shape}")
        d.setflags(write=False)
        self.dist = d
        self.labels = list(labels) if labels is not None else None
        if self.labels is not None and len(self.labels) != self.n:
            raise ValidationError(f"{len(self.labels)} labels for {self.n} points")
        self.pseudometric = False
        if validate:
            self.validate()

    @property
    def n(self) -> int:
        return self.dist.shape[0]

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return f"FiniteMetricSpace(n={self.n})"

    def validate(self) -> None:
        d, tol, n = self.dist, config.get_tol(), self.n
        if not np.all(np.isfinite(d)):
            i, j = np.argwhere(~np.isfinite(d))[0]
            raise ValidationError(f"non-finite distance at ({i},{j})")
        if np.any(d < -tol):
            i, j = np.argwhere(d < -tol)[0]
            raise ValidationError(f"negative distance at ({i},{j})")
        diag = np.abs(np.diag(d)) > tol
        if diag.any():
            i = int(np.argmax(diag))
            raise ValidationError(f"nonzero diagonal d[{i}][{i}] = {d[i, i]}")
        asym = np.abs(d - d.T) > tol
        if asym.any():
            i, j = (int(v) for v in np.argwhere(asym)[0])
            raise ValidationError(f"asymmetric distance at ({i},{j}): {d[i, j]} != {d[j, i]}")
        for j in range(n):
            # d[i,k] <= d[i,j] + d[j,k] for all i,k, one pivot at a time
            bad = d > d[:, j : j + 1] + d[j : j + 1, :] + tol
            if bad.any():
                i, k = (int(v) for v in np.argwhere(bad)[0])
                raise ValidationError(
                    f"triangle inequality fails at ({i},{j},{k}): "
                    f"d[{i}][{k}]={d[i, k]} > {d[i, j]} + {d[j, k]}"
                )
        zero = (d <= tol) & ~np.eye(n, dtype=bool)
        if zero.any():
            i, j = (int(v) for v in np.argwhere(zero)[0])
            self.pseudometric = True
            warnings.warn(
                f"pseudometric: distinct points {i} and {j} at distance 0",
                PseudometricWarning,
                stacklevel=3,
            )

    def check_point(self, x: int) -> int:
        if not (isinstance(x, (int, np.integer)) and 0 <= x < self.n):
            raise IndexError(f"point {x!r} out of range for space of {self.n} points")
        return int(x)

    def check_subset(self, A: Iterable[int]) -> frozenset[int]:
        return frozenset(self.check_point(a) for a in A)

    def mask(self, A: Iterable[int]) -> np.ndarray:
        m = np.zeros(self.n, dtype=bool)
        idx = list(A)
        if idx:
            m[idx] = True
        return m

    def diameter(self) -> float:
        return float(self.dist.max()) if self.n else 0.0

    def ball_matrix(self, r: float) -> np.ndarray:
        """Boolean ``n x n`` matrix with ``[x, y] = d(x, y) < r``."""
        return self.dist < r - config.get_tol()

    def set_distance(self, A: Iterable[int]) -> np.ndarray:
        """Per-point distance to the set ``A`` (``inf`` when ``A`` is empty)."""
        idx = sorted(A)
        if not idx:
            return np.full(self.n, INF)
        return self.dist[:, idx].min(axis=1)


def ball(X: FiniteMetricSpace, x: int, r: float) -> frozenset[int]:
    x = X.check_point(x)
    if r < 0:
        raise ValueError(f"radius must be nonnegative, got {r}")
    return frozenset(np.flatnonzero(X.dist[x] < r - config.get_tol()).tolist())


def neighborhood(X: FiniteMetricSpace, A: Iterable[int], r: float) -> frozenset[int]:
    """``B(A, r) ∪ A``: points within distance < r of A, plus A itself."""
    A = X.check_subset(A)
    near = X.set_distance(A) < r - config.get_tol()
    return frozenset(np.flatnonzero(near).tolist()) | A


class Cover:
    """A labeled family of nonempty point subsets whose union is the space.

    ``elements`` is a list of ``(label, points)`` pairs or a ``{label: points}``
    dict; use :meth:`from_sets` to label plain subsets by position.
    """

    def __init__(self, space: FiniteMetricSpace, elements, validate: bool = True):
        self.space = space
        if isinstance(elements, dict):
            elements = list(elements.items())
        self.elements: list[tuple[Hashable, frozenset[int]]] = [
            (label, frozenset(int(p) for p in pts)) for label, pts in elements
        ]
        self._membership = None
        if validate:
            self.validate()

    @classmethod
    def from_sets(cls, space: FiniteMetricSpace, sets: Iterable[Iterable[int]]) -> Cover:
        return cls(space, [(i, frozenset(s)) for i, s in enumerate(sets)])

    def validate(self) -> None:
        n = self.space.n
        labels = [lab for lab, _ in self.elements]
        if len(set(labels)) != len(labels):
            seen, dup = set(), None
            for lab in labels:
                if lab in seen:
                    dup = lab
                    break
                seen.add(lab)
            raise ValidationError(f"duplicate cover label {dup!r}")
        covered = set()
        for lab, pts in self.elements:
            if not pts:
                raise ValidationError(f"cover element {lab!r} is empty")
            bad = [p for p in pts if not 0 <= p < n]
            if bad:
                raise ValidationError(f"cover element {lab!r} has out-of-range points {sorted(bad)}")
            covered |= pts
        missing = sorted(set(range(n)) - covered)
        if missing:
            raise ValidationError(f"union != X, missing {missing}")

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __repr__(self) -> str:
        return f"Cover({len(self)} elements on {self.space.n} points)"

    @property
    def labels(self) -> list:
        return [lab for lab, _ in self.elements]

    @property
    def sets(self) -> list[frozenset[int]]:
        return [pts for _, pts in self.elements]

    def element(self, label) -> frozenset[int]:
        for lab, pts in self.elements:
            if lab == label:
                return pts
        raise KeyError(label)

    @property
    def membership(self) -> np.ndarray:
        """Boolean ``k x n`` incidence matrix of elements against points."""
        if self._membership is None:
            m = np.zeros((len(self.elements), self.space.n), dtype=bool)
            for i, (_, pts) in enumerate(self.elements):
                if pts:
                    m[i, list(pts)] = True
            self._membership = m
        return self._membership

    def diameter(self) -> float:
        return family_diameter(self.space, self.sets)


def family_diameter(X: FiniteMetricSpace, family) -> float:
    """Largest distance between two points sharing an element of ``family``."""
    sets = family.sets if isinstance(family, Cover) else [frozenset(s) for s in family]
    if not sets:
        raise ValueError("diameter of an empty family is undefined")
    best = 0.0
    for s in sets:
        if len(s) > 1:
            idx = sorted(s)
            best = max(best, float(X.dist[np.ix_(idx, idx)].max()))
    return best


def lebesgue_number(U: Cover) -> float:
    """Largest r such that every open r-ball lies inside a single element."""
    X = U.space
    # reach[e, x] = distance from x to the complement of element e
    best = np.zeros(X.n)
    for row in U.membership:
        outside = ~row
        if not outside.any():
            return INF
        reach = X.dist[:, outside].min(axis=1)
        np.maximum(best, reach, out=best)
    return float(best.min()) if X.n else INF


def horizon(X: FiniteMetricSpace, A: Iterable[int], U: Cover) -> frozenset:
    A = X.check_subset(A)
    return frozenset(lab for lab, pts in U.elements if pts & A)


def horizon_counts(U: Cover, r: float | None) -> np.ndarray:
    """Per-point ``|hor(B(x, r), U)|``; ``r=None`` means the point itself."""
    M = U.membership
    if r is None:
        return M.sum(axis=0)
    B = U.space.ball_matrix(r).astype(np.int64)
    return ((B @ M.T.astype(np.int64)) > 0).sum(axis=1)


def multiplicity(U: Cover) -> int:
    return int(U.membership.sum(axis=0).max())


def thicken(U: Cover, s: float) -> Cover:
    if s < 0:
        raise ValueError(f"thickening radius must be nonnegative, got {s}")
    X = U.space
    return Cover(X, [(lab, neighborhood(X, pts, s)) for lab, pts in U.elements])


def shrink(W: Cover, r: float) -> list[tuple[Hashable, frozenset[int]]]:
    """Replace each element A by ``X \\ B(X \\ A, r)``; empty results are kept."""
    if r < 0:
        raise ValueError(f"shrinking radius must be nonnegative, got {r}")
    X = W.space
    everything = frozenset(range(X.n))
    out = []
    for lab, pts in W.elements:
        rest = everything - pts
        near = X.set_distance(rest) < r - config.get_tol()
        out.append((lab, everything - frozenset(np.flatnonzero(near).tolist())))
    return out


def coarse_disjoint_union(spaces: Sequence[FiniteMetricSpace]) -> FiniteMetricSpace:
    """Block metric: cross-block distance is the sum of the two block diameters."""
    if not spaces:
        raise ValueError("coarse disjoint union of an empty list")
    sizes = [X.n for X in spaces]
    diams = [X.diameter() for X in spaces]
    offsets = np.concatenate([[0], np.cumsum(sizes)])
    D = np.zeros((offsets[-1], offsets[-1]))
    for i, Xi in enumerate(spaces):
        for j in range(len(spaces)):
            bi = slice(offsets[i], offsets[i + 1])
            bj = slice(offsets[j], offsets[j + 1])
            D[bi, bj] = Xi.dist if i == j else diams[i] + diams[j]
    labels = [f"{i}.{p}" for i, X in enumerate(spaces) for p in range(X.n)]
    return FiniteMetricSpace(D, labels=labels)


def block_offsets(spaces: Sequence[FiniteMetricSpace]) -> list[int]:
    return list(np.concatenate([[0], np.cumsum([X.n for X in spaces])]).astype(int))


def separated_net(X: FiniteMetricSpace, r: float) -> frozenset[int]:
    """Greedy maximal subset (in index order) with pairwise distances >= r."""
    if r <= 0:
        raise ValueError(f"net separation must be positive, got {r}")
    net: list[int] = []
    for p in range(X.n):
        if all(not config.lt(X.dist[p, q], r) for q in net):
            net.append(p)
    return frozenset(net)
