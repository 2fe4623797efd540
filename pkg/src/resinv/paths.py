"""Continuous matrix functions on a compact interval.

A :class:`MatrixPath` is a deterministic evaluator ``t -> A(t)`` on
``[a, b]``, optionally with a vectorized form for many ``t`` at once.  This
module also builds the uniform-continuity grid used by the pipelines and
turns a continuous path of orthogonal projections into a continuous basis
of their ranges.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from resinv.errors import (
    NoOverlap,
    NotAProjection,
    OutOfDomain,
    RankChanged,
    RankMismatch,
    RefinementLimit,
    SpanMismatch,
)
from resinv.linalg import Subspace, as_matrix, orthonormalize, subspace_distance
from resinv.segments import BasisPiece, ConstantSegment, ExplicitSegment, SubspacePath

log = logging.getLogger(__name__)

MINOR_TOL = 1e-6
VALIDATE_DENSITY = 64
MAX_GRID = 10**6
PROJ_TOL = 1e-8
TRACE_TOL = 1e-6
DOMAIN_TOL = 1e-12
BATCH = 20000

# bisection probes fewer points than validation and aims at eps/2, so the
# validation pass almost never has to send work back
BUILD_DENSITY = 16


@dataclass(frozen=True, eq=False)
class MatrixPath:
    domain: tuple
    shape: tuple
    evaluator: Callable[[float], np.ndarray]
    kind: dict = field(default_factory=lambda: {"kind": "generator", "name": "custom"})
    batch: Callable[[np.ndarray], np.ndarray] | None = None

    def __post_init__(self):
        a, b = (float(x) for x in self.domain)
        if not (math.isfinite(a) and math.isfinite(b)) or not a < b:
            raise ValueError(f"domain must be a finite interval with a < b, got {self.domain}")
        object.__setattr__(self, "domain", (a, b))
        object.__setattr__(self, "shape", tuple(int(s) for s in self.shape))

    def _check_t(self, t):
        a, b = self.domain
        slack = DOMAIN_TOL * max(1.0, abs(a), abs(b))
        t = np.asarray(t, dtype=float)
        if np.any(t < a - slack) or np.any(t > b + slack) or not np.all(np.isfinite(t)):
            raise OutOfDomain(f"t outside [{a}, {b}]")
        return np.clip(t, a, b)

    def eval(self, t: float) -> np.ndarray:
        t = float(self._check_t(t))
        M = np.asarray(self.evaluator(t), dtype=float)
        if M.shape != self.shape:
            raise ValueError(f"evaluator returned shape {M.shape}, expected {self.shape}")
        return M

    __call__ = eval

    def eval_many(self, ts) -> np.ndarray:
        ts = self._check_t(np.atleast_1d(ts))
        if self.batch is not None:
            out = [self.batch(ts[i:i + BATCH]) for i in range(0, ts.size, BATCH)]
            return np.concatenate(out, axis=0) if out else np.zeros((0, *self.shape))
        return np.stack([self.eval(t) for t in ts]) if ts.size else np.zeros((0, *self.shape))

    def map(self, fn, batch_fn=None, shape=None, kind=None) -> "MatrixPath":
        """Pointwise transform ``t -> fn(A(t))``, keeping the domain."""
        shape = self.shape if shape is None else shape
        batch = None
        if batch_fn is not None:
            batch = lambda ts: batch_fn(self.eval_many(ts))  # noqa: E731
        return MatrixPath(
            self.domain,
            shape,
            lambda t: fn(self.eval(t)),
            kind or {"kind": "derived", "base": self.kind},
            batch,
        )


def constant_path(M, domain=(0.0, 1.0)) -> MatrixPath:
    M = as_matrix(M).copy()
    M.setflags(write=False)
    return MatrixPath(
        domain,
        M.shape,
        lambda t: M.copy(),
        {"kind": "generator", "name": "constant", "params": {"matrix": M.tolist()}},
        lambda ts: np.broadcast_to(M, (len(ts), *M.shape)).copy(),
    )


def samples_path(knots, matrices) -> MatrixPath:
    """Entrywise piecewise-linear interpolation through ``(t_k, M_k)``."""
    t = np.asarray(knots, dtype=float)
    Ms = np.asarray(matrices, dtype=float)
    if t.ndim != 1 or t.size < 2:
        raise ValueError("samples need at least two knots")
    if np.any(np.diff(t) <= 0):
        raise ValueError("knots must be strictly increasing")
    if Ms.ndim != 3 or Ms.shape[0] != t.size:
        raise ValueError(f"need one matrix per knot, got array of shape {Ms.shape}")
    if not np.all(np.isfinite(Ms)):
        raise ValueError("sample matrices have non-finite entries")

    def batch(ts):
        k = np.clip(np.searchsorted(t, ts, side="right") - 1, 0, t.size - 2)
        w = ((ts - t[k]) / (t[k + 1] - t[k]))[:, None, None]
        out = (1.0 - w) * Ms[k] + w * Ms[k + 1]
        # exact values at knots
        hit = ts == t[k + 1]
        out[hit] = Ms[k + 1][hit]
        return out

    return MatrixPath(
        (t[0], t[-1]),
        Ms.shape[1:],
        lambda s: batch(np.array([s]))[0],
        {"kind": "samples", "t": t.tolist(), "matrices": Ms.tolist()},
        batch,
    )


def batched_norm(D: np.ndarray) -> np.ndarray:
    """Operator norms of a stack of matrices."""
    if D.shape[0] == 0:
        return np.zeros(0)
    return np.linalg.svd(D, compute_uv=False)[:, 0]


def _probe_times(lo: np.ndarray, hi: np.ndarray, density: int) -> np.ndarray:
    w = np.linspace(0.0, 1.0, density + 1)
    return lo[:, None] + (hi - lo)[:, None] * w[None, :]


def interval_oscillation(path: MatrixPath, points, density: int) -> np.ndarray:
    """For each ``[t_j, t_{j+1}]``: max over probes of the distance to either endpoint."""
    p = np.asarray(points, dtype=float)
    return _oscillation_pairs(path, p[:-1], p[1:], density)


@dataclass(frozen=True)
class Grid:
    """Knots with ``||A(t_i) - A(t)|| <= epsilon`` on ``[t_{i-1}, t_{i+1}]`` (clamped)."""

    points: tuple
    epsilon: float

    def __post_init__(self):
        p = np.asarray(self.points, dtype=float)
        if p.size < 2 or np.any(np.diff(p) <= 0):
            raise ValueError("grid points must be strictly increasing, at least two")
        object.__setattr__(self, "points", tuple(float(x) for x in p))

    def __len__(self):
        return len(self.points)

    def validate(self, path: MatrixPath, density: int = VALIDATE_DENSITY) -> float:
        """Largest probed ``||A(t_i) - A(t)||`` over all two-neighborhood windows."""
        return float(interval_oscillation(path, self.points, density).max())

    def is_valid(self, path, density: int = VALIDATE_DENSITY) -> bool:
        return self.validate(path, density) <= self.epsilon


def discretize(
    path: MatrixPath,
    epsilon: float,
    density: int = VALIDATE_DENSITY,
    max_grid: int = MAX_GRID,
) -> Grid:
    """Knots by bisection until every subinterval oscillates by at most ``epsilon/2``.

    The result is then checked on ``density`` probes per subinterval at the
    full ``epsilon``; subintervals failing the check are split again.
    """
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    a, b = path.domain
    min_width = (b - a) * 1e-13
    done = []
    pending = [(a, b)]
    rounds = 0
    while pending:
        rounds += 1
        lo = np.array([p[0] for p in pending])
        hi = np.array([p[1] for p in pending])
        osc = _oscillation_pairs(path, lo, hi, min(BUILD_DENSITY, density))
        nxt = []
        for l, h, o in zip(lo, hi, osc):
            if o <= epsilon / 2:
                done.append((l, h))
            else:
                if h - l < min_width:
                    raise RefinementLimit(f"oscillation {o:.3g} persists at width {h - l:.3g}")
                m = 0.5 * (l + h)
                nxt += [(l, m), (m, h)]
        if len(done) + len(nxt) + 1 > max_grid:
            raise RefinementLimit(f"grid would exceed {max_grid} points")
        pending = nxt
        if not pending:
            pts = np.array(sorted({a, b} | {x for iv in done for x in iv}))
            osc = interval_oscillation(path, pts, density)
            bad = np.flatnonzero(osc > epsilon)
            if bad.size:
                log.debug("validation split %d subintervals", bad.size)
                done = [(pts[j], pts[j + 1]) for j in range(pts.size - 1) if j not in set(bad)]
                pending = []
                for j in bad:
                    m = 0.5 * (pts[j] + pts[j + 1])
                    pending += [(pts[j], m), (m, pts[j + 1])]
    pts = sorted({a, b} | {x for iv in done for x in iv})
    log.debug("grid with %d points after %d rounds", len(pts), rounds)
    return Grid(tuple(pts), float(epsilon))


def _oscillation_pairs(path, lo, hi, density):
    out = np.zeros(lo.size)
    per = max(1, BATCH // (density + 1))
    for s in range(0, lo.size, per):
        T = _probe_times(lo[s:s + per], hi[s:s + per], density)
        k, d1 = T.shape
        M = path.eval_many(T.ravel()).reshape(k, d1, *path.shape)
        left = batched_norm((M - M[:, :1]).reshape(-1, *path.shape)).reshape(k, d1)
        right = batched_norm((M - M[:, -1:]).reshape(-1, *path.shape)).reshape(k, d1)
        out[s:s + per] = np.maximum(left, right).max(axis=1)
    return out


# ---------------------------------------------------------------------------
# projection paths


def check_projection(P, tol: float = PROJ_TOL) -> int:
    """Validate an orthogonal projection and return its rank."""
    P = as_matrix(P)
    if P.shape[0] != P.shape[1]:
        raise NotAProjection(f"projection must be square, got {P.shape}")
    sym = np.abs(P - P.T).max()
    idem = np.abs(P @ P - P).max()
    if sym > tol or idem > tol:
        raise NotAProjection(f"symmetry residual {sym:.2e}, idempotence residual {idem:.2e}")
    tr = float(np.trace(P))
    k = int(round(tr))
    if abs(tr - k) > TRACE_TOL:
        raise NotAProjection(f"trace {tr} is not an integer")
    return k


def pivot_columns(P: np.ndarray, k: int) -> list:
    """Greedy pivoting on residual column norms, ties to the lowest index."""
    R = np.array(P, dtype=float)
    cols = []
    for _ in range(k):
        norms = np.linalg.norm(R, axis=0)
        norms[cols] = -1.0
        j = int(np.argmax(norms))
        cols.append(j)
        q = R[:, j] / np.linalg.norm(R[:, j])
        R = R - np.outer(q, q @ R)
    return sorted(cols)


def block_floor(P: np.ndarray, cols) -> float:
    """Smallest singular value of the selected columns of ``P``."""
    return float(np.linalg.svd(P[:, list(cols)], compute_uv=False)[-1])


def _column_frame(P_path: MatrixPath, cols):
    cols = list(cols)
    return lambda t: orthonormalize(P_path.eval(t)[:, cols]).basis


def local_basis(
    P_path: MatrixPath,
    t0: float,
    k: int | None = None,
    samples: int = 400,
    threshold: float = MINOR_TOL,
):
    """Columns of ``P(t0)`` spanning its range, valid on a window around ``t0``.

    Returns ``((lo, hi), segment)`` where ``[lo, hi]`` is the largest run of
    the ``samples``-point grid around ``t0`` on which the selected block keeps
    its smallest singular value above ``threshold``, and the segment's frame
    is the orthonormalized selected columns of ``P(t)``.
    """
    P0 = P_path.eval(t0)
    rank = check_projection(P0)
    if k is not None and rank != k:
        raise RankMismatch(f"P(t0) has rank {rank}, expected {k}")
    if rank == 0:
        raise RankMismatch("projection has rank 0")
    cols = pivot_columns(P0, rank)
    a, b = P_path.domain
    ts = np.unique(np.concatenate([np.linspace(a, b, samples + 1), [t0]]))
    i0 = int(np.searchsorted(ts, t0))
    Ps = P_path.eval_many(ts)
    ok = np.linalg.svd(Ps[:, :, cols], compute_uv=False)[:, -1] > threshold
    lo = i0
    while lo > 0 and ok[lo - 1]:
        lo -= 1
    hi = i0
    while hi < ts.size - 1 and ok[hi + 1]:
        hi += 1
    if lo == hi:
        # degenerate window; widen to the neighbors the block still spans
        lo, hi = max(i0 - 1, 0), min(i0 + 1, ts.size - 1)
    seg = ExplicitSegment((BasisPiece(ts[lo], ts[hi], _column_frame(P_path, cols), np.eye(rank)),))
    return (float(ts[lo]), float(ts[hi])), seg, tuple(cols)


def _truncate(seg: ExplicitSegment, lo: float, hi: float, transform=None) -> list:
    out = []
    for p in seg.pieces:
        s, e = max(p.start, lo), min(p.end, hi)
        if e - s > 0:
            T = p.transform if transform is None else p.transform @ transform
            out.append(BasisPiece(s, e, p.fn, T))
    return out


def stitch_bases(left: ExplicitSegment, right: ExplicitSegment, t0: float) -> ExplicitSegment:
    """Join two explicit bases at ``t0``, post-composing the right one with ``F``.

    ``F`` solves ``left(t0) = right(t0) F``, so the raw bases agree at
    ``t0`` and the joined basis is continuous.
    """
    if not (left.start <= t0 <= left.end and right.start <= t0 <= right.end):
        raise NoOverlap(
            f"t0={t0} not in both [{left.start}, {left.end}] and [{right.start}, {right.end}]"
        )
    L = left.raw_basis(t0)
    R = right.raw_basis(t0)
    if L.shape != R.shape:
        raise SpanMismatch(f"bases have shapes {L.shape} and {R.shape}")
    gap = subspace_distance(orthonormalize(L), orthonormalize(R))
    if gap > 1e-8:
        raise SpanMismatch(f"bases span different subspaces at t0 (gap {gap:.3e})")
    F = np.linalg.lstsq(R, L, rcond=None)[0]
    pieces = _truncate(left, left.start, t0) + _truncate(right, t0, right.end, F)
    return ExplicitSegment(tuple(pieces))


def _first_rank_change(ts, ranks):
    bad = np.flatnonzero(ranks != ranks[0])
    j = int(bad[0])
    return float(ts[j - 1]), float(ts[j])


def continuous_basis_from_projections(
    P_path: MatrixPath,
    samples: int = 400,
    handoff: float = 0.25,
) -> SubspacePath:
    """Continuous basis of ``range P(t)`` over the whole domain.

    Walks left to right on a ``samples``-point grid.  Each window uses a
    fixed set of columns of ``P(t)``; when the block's smallest singular
    value falls below ``handoff`` times its value at the window start, a
    new column set is chosen at the last good sample and stitched on.
    """
    a, b = P_path.domain
    ts = np.linspace(a, b, samples + 1)
    Ps = P_path.eval_many(ts)
    ranks = np.array([check_projection(P) for P in Ps])
    if np.any(ranks != ranks[0]):
        pair = _first_rank_change(ts, ranks)
        raise RankChanged(f"projection rank changes between t={pair[0]} and t={pair[1]}", pair)
    k = int(ranks[0])
    if k == 0:
        raise RankMismatch("projection path has rank 0")
    if np.abs(Ps - Ps[0]).max() == 0.0:
        cols = pivot_columns(Ps[0], k)
        return SubspacePath([ConstantSegment(orthonormalize(Ps[0][:, cols]), a, b)])

    pts = list(ts)
    mats = list(Ps)
    segment = None
    start = 0
    depth = 0
    while start < len(pts) - 1:
        cols = pivot_columns(mats[start], k)
        floor0 = block_floor(mats[start], cols)
        stop = start
        while stop + 1 < len(pts):
            f = block_floor(mats[stop + 1], cols)
            if f < max(handoff * floor0, MINOR_TOL):
                break
            stop += 1
        if stop == start:
            # no progress: refine the next gap
            depth += 1
            if depth > 40:
                raise RefinementLimit(f"cannot advance basis past t={pts[start]}")
            mid = 0.5 * (pts[start] + pts[start + 1])
            pts.insert(start + 1, mid)
            mats.insert(start + 1, P_path.eval(mid))
            continue
        depth = 0
        piece = BasisPiece(pts[start], pts[stop], _column_frame(P_path, cols), np.eye(k))
        new = ExplicitSegment((piece,))
        segment = new if segment is None else stitch_bases(segment, new, pts[start])
        start = stop
    return SubspacePath([segment])


def projection_path_roundtrip(P_path: MatrixPath, U_path: SubspacePath, samples: int = 200) -> float:
    """Largest ``||W(t) W(t)^T - P(t)||`` over evenly spaced samples."""
    a, b = P_path.domain
    worst = 0.0
    for t in np.linspace(a, b, samples):
        W = U_path.continuous_frame(t)
        worst = max(worst, float(np.linalg.norm(W @ W.T - P_path.eval(t), 2)))
    return worst


def subspace_of_projection(P) -> Subspace:
    k = check_projection(P)
    w, V = np.linalg.eigh(as_matrix(P))
    return Subspace(V[:, w.size - k:])
