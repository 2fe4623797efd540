"""Subspace-valued paths: per-interval segments and their concatenation.

A segment produces, for every ``t`` in its interval, an orthonormal frame
(``n x m`` array) whose span is ``U(t)``.  ``SubspacePath`` glues segments
that agree (as subspaces) at shared endpoints.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from resinv.errors import DimensionMismatch, OutOfDomain
from resinv.linalg import Subspace, orthonormalize, subspace_distance

DOMAIN_TOL = 1e-12
JOIN_TOL = 1e-8


def _check_interval(start: float, end: float):
    if not (np.isfinite(start) and np.isfinite(end)) or not start < end:
        raise ValueError(f"segment needs start < end, got [{start}, {end}]")


def _unit_param(t: float, start: float, end: float) -> float:
    slack = DOMAIN_TOL * max(1.0, abs(start), abs(end))
    if t < start - slack or t > end + slack:
        raise OutOfDomain(f"t={t} outside [{start}, {end}]")
    return min(max((t - start) / (end - start), 0.0), 1.0)


class Segment:
    """Base class. Subclasses implement ``frame``."""

    kind = "abstract"
    start: float
    end: float

    @property
    def dim(self) -> int:
        return self.frame(self.start).shape[1]

    @property
    def ambient_dim(self) -> int:
        return self.frame(self.start).shape[0]

    def frame(self, t: float) -> np.ndarray:
        raise NotImplementedError

    def subspace(self, t: float) -> Subspace:
        return Subspace(self.frame(t))

    def describe(self) -> dict:
        return {"kind": self.kind, "start": self.start, "end": self.end}


@dataclass(frozen=True, eq=False)
class ConstantSegment(Segment):
    space: Subspace
    start: float
    end: float
    kind = "constant"

    def __post_init__(self):
        _check_interval(self.start, self.end)

    def frame(self, t):
        _unit_param(t, self.start, self.end)
        return self.space.basis

    def describe(self):
        d = super().describe()
        d["dim"] = self.space.dim
        return d


@dataclass(frozen=True, eq=False)
class TraversalSegment(Segment):
    """Straight-line interpolation of a biorthogonal basis pair.

    ``u_i(t) = (1 - s) x_i + s y_i`` with ``s = (t - start)/(end - start)``;
    parallel pairs are held at ``y_i``.  The interpolants are mutually
    orthogonal, so per-evaluation orthonormalization only normalizes.
    """

    x_basis: np.ndarray
    y_basis: np.ndarray
    start: float
    end: float
    dependent: np.ndarray = field(default=None)
    kind = "linear_traversal"

    def __post_init__(self):
        _check_interval(self.start, self.end)
        if self.x_basis.shape != self.y_basis.shape:
            raise DimensionMismatch("traversal endpoints need equal shapes")
        if self.dependent is None:
            object.__setattr__(
                self, "dependent", np.zeros(self.x_basis.shape[1], dtype=bool)
            )

    def frame(self, t):
        s = _unit_param(t, self.start, self.end)
        U = (1.0 - s) * self.x_basis + s * self.y_basis
        U[:, self.dependent] = self.y_basis[:, self.dependent]
        return orthonormalize(U).basis


@dataclass(frozen=True, eq=False)
class SwitchSegment(Segment):
    """Quadratic convex combination moving from ``U_sigma1`` to ``U_sigma2``.

    At parameter ``s`` the frame is ``u_k = (1-s)^{1/2} e_{i_k} + s^{1/2} e_{j_k}``,
    exactly orthonormal, with no re-orthonormalization.
    """

    sigma1: tuple
    sigma2: tuple
    ambient: int
    start: float
    end: float
    kind = "quadratic_switch"

    def __post_init__(self):
        _check_interval(self.start, self.end)
        if len(self.sigma1) != len(self.sigma2) or not self.sigma1:
            raise ValueError("switch needs two nonempty index sets of equal size")
        if set(self.sigma1) & set(self.sigma2):
            raise ValueError("switch index sets must be disjoint")

    def weight(self, t) -> float:
        """The ``lambda`` of the quadratic combination at ``t``."""
        return 1.0 - _unit_param(t, self.start, self.end)

    def frame(self, t):
        lam = self.weight(t)
        W = np.zeros((self.ambient, len(self.sigma1)))
        k = np.arange(len(self.sigma1))
        W[list(self.sigma1), k] = np.sqrt(lam)
        W[list(self.sigma2), k] = np.sqrt(1.0 - lam)
        return W

    def describe(self):
        d = super().describe()
        d["sigma1"] = list(self.sigma1)
        d["sigma2"] = list(self.sigma2)
        return d


@dataclass(frozen=True, eq=False)
class BasisPiece:
    """One piece of an explicit segment: ``raw(t) = fn(t) @ transform``."""

    start: float
    end: float
    fn: Callable[[float], np.ndarray]
    transform: np.ndarray

    def raw(self, t):
        return self.fn(t) @ self.transform


@dataclass(frozen=True, eq=False)
class ExplicitSegment(Segment):
    """Continuous (not necessarily orthonormal) basis functions, piecewise.

    Adjacent pieces agree at their shared breakpoint; the frame is the
    Gram-Schmidt orthonormalization of the raw basis at each ``t``.
    """

    pieces: tuple
    kind = "explicit"

    def __post_init__(self):
        if not self.pieces:
            raise ValueError("explicit segment needs at least one piece")
        for left, right in zip(self.pieces, self.pieces[1:]):
            if not np.isclose(left.end, right.start, rtol=0, atol=1e-12):
                raise ValueError("explicit pieces must be contiguous")

    @property
    def start(self):
        return self.pieces[0].start

    @property
    def end(self):
        return self.pieces[-1].end

    def piece_at(self, t) -> BasisPiece:
        _unit_param(t, self.start, self.end)
        starts = [p.start for p in self.pieces]
        k = bisect.bisect_right(starts, t) - 1
        # t exactly at a breakpoint belongs to the left piece
        if k > 0 and t <= self.pieces[k - 1].end:
            k -= 1
        return self.pieces[max(k, 0)]

    def raw_basis(self, t) -> np.ndarray:
        return self.piece_at(t).raw(t)

    def frame(self, t):
        return orthonormalize(self.raw_basis(t)).basis

    def describe(self):
        d = super().describe()
        d["pieces"] = len(self.pieces)
        return d


class SubspacePath:
    """Ordered segments covering ``[a, b]`` with matching endpoints."""

    def __init__(self, segments: Sequence[Segment], check: bool = True):
        if not segments:
            raise ValueError("a subspace path needs at least one segment")
        self.segments = tuple(segments)
        self.domain = (self.segments[0].start, self.segments[-1].end)
        self.dim = self.segments[0].dim
        self._starts = [s.start for s in self.segments]
        self._gauges = None
        if check:
            self.check_joins()

    def check_joins(self, tol: float = JOIN_TOL):
        for left, right in zip(self.segments, self.segments[1:]):
            if not np.isclose(left.end, right.start, rtol=0, atol=1e-12):
                raise ValueError(f"gap between segments at {left.end} / {right.start}")
            if left.dim != self.dim or right.dim != self.dim:
                raise DimensionMismatch("segment dimensions differ")
            gap = subspace_distance(left.subspace(left.end), right.subspace(right.start))
            if gap > tol:
                raise ValueError(f"segments disagree at t={left.end} (gap {gap:.3e})")

    @property
    def ambient_dim(self):
        return self.segments[0].ambient_dim

    def index_at(self, t: float) -> int:
        a, b = self.domain
        if t < a - DOMAIN_TOL * max(1, abs(a)) or t > b + DOMAIN_TOL * max(1, abs(b)):
            raise OutOfDomain(f"t={t} outside [{a}, {b}]")
        k = bisect.bisect_right(self._starts, t) - 1
        return min(max(k, 0), len(self.segments) - 1)

    def segment_at(self, t: float) -> Segment:
        return self.segments[self.index_at(t)]

    def frame(self, t: float) -> np.ndarray:
        return self.segment_at(t).frame(t)

    def subspace(self, t: float) -> Subspace:
        return Subspace(self.frame(t))

    def projection(self, t: float) -> np.ndarray:
        W = self.frame(t)
        return W @ W.T

    def _compute_gauges(self):
        # Orthogonal change-of-basis per segment so that frames line up at
        # every join; this is the two-chart stitching argument with
        # orthonormal charts, where the transition matrix is orthogonal.
        gauges = [np.eye(self.dim)]
        for k in range(1, len(self.segments)):
            tau = self.segments[k].start
            prev = self.segments[k - 1].frame(tau) @ gauges[-1]
            cur = self.segments[k].frame(tau)
            G = cur.T @ prev
            u, _, vt = np.linalg.svd(G)
            gauges.append(u @ vt)
        self._gauges = gauges

    def continuous_frame(self, t: float) -> np.ndarray:
        """Orthonormal frame ``W(t)`` spanning ``U(t)`` and continuous in ``t``."""
        if self._gauges is None:
            self._compute_gauges()
        k = self.index_at(t)
        return self.segments[k].frame(t) @ self._gauges[k]

    def describe(self) -> list:
        return [s.describe() for s in self.segments]
