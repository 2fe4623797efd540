"""Continuous restricted invertibility along a matrix path.

``method_one`` selects coordinate subspaces at grid nodes and stitches them
through orthogonal halves, trading a factor 4 in dimension for a clean
stitching argument.  ``method_two`` stays inside coordinate subspaces the
whole time and moves between them by quadratic column switches.
``factorize_identity`` turns a ``method_one`` path into continuous ``L``
and ``R`` with ``L A R = I``.

Every run ends with a sampled verification of the restricted stretch, so
best-effort targets are as trustworthy as the worst-case constants.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from resinv.errors import (
    CertificationFailed,
    DimensionMismatch,
    SelectionFailed,
    StretchViolation,
)
from resinv.geometry import column_switch_segment, half_reduction, is_quadratic_frame, linear_traversal
from resinv.linalg import RANK_TOL, Subspace, coordinate_subspace, orthonormalize
from resinv.paths import Grid, MatrixPath, batched_norm, discretize
from resinv.segments import ConstantSegment, SubspacePath, SwitchSegment
from resinv.selection import (
    D1,
    D2,
    D3,
    JOINT_TARGET,
    best_subset_search,
    column_stretch,
    refine_joint,
    select_disjoint,
    select_restricted_invertible,
)
from resinv.seeding import child_seed

log = logging.getLogger(__name__)

UNIT_PATH_TOL = 1e-6
LAMBDA_SAFETY = 1.05
CHECK_POINTS = 129
STRETCH_SLACK = 1e-9
METHOD_TWO_C = 1.0 / 33.0
DEFAULT_TARGET = 0.2


# ---------------------------------------------------------------------------
# verification


@dataclass(frozen=True)
class VerificationReport:
    t: np.ndarray
    stretch: np.ndarray
    adj_distance: np.ndarray
    target: float
    dim: int
    dim_constant: bool
    constants: dict = field(default_factory=dict)

    @property
    def min_stretch(self) -> float:
        return float(self.stretch.min())

    @property
    def argmin_t(self) -> float:
        return float(self.t[int(np.argmin(self.stretch))])

    @property
    def max_adj_distance(self) -> float:
        return float(self.adj_distance.max())

    @property
    def passed(self) -> bool:
        return self.dim_constant and self.min_stretch >= self.target - STRETCH_SLACK

    def summary(self) -> dict:
        return {
            "min_stretch": self.min_stretch,
            "argmin_t": self.argmin_t,
            "max_adj_distance": self.max_adj_distance,
            "dim": self.dim,
            "dim_constant": self.dim_constant,
            "target": self.target,
            "pass": self.passed,
            "constants": dict(self.constants),
        }

    def records(self) -> list:
        return [
            {"t": float(t), "stretch": float(s), "adj_distance": float(d)}
            for t, s, d in zip(self.t, self.stretch, self.adj_distance)
        ]


def _batched_min_stretch(B: np.ndarray) -> np.ndarray:
    s = np.linalg.svd(B, compute_uv=False)
    if B.shape[2] > B.shape[1]:
        return np.zeros(B.shape[0])
    low = s[:, -1].copy()
    low[low <= RANK_TOL * s[:, 0]] = 0.0
    return low


def verify_subspace_path(
    path: MatrixPath,
    U_path: SubspacePath,
    c: float,
    samples: int = 500,
    constants: dict | None = None,
) -> VerificationReport:
    """Restricted stretch of ``A(t)`` on ``U(t)`` at evenly spaced samples.

    ``adj_distance[k]`` is the projection gap between samples ``k-1`` and
    ``k`` (zero for the first sample).
    """
    if samples < 2:
        raise ValueError("need at least two samples")
    a, b = path.domain
    ua, ub = U_path.domain
    if abs(a - ua) > 1e-12 * max(1, abs(a)) or abs(b - ub) > 1e-12 * max(1, abs(b)):
        raise DimensionMismatch(f"path domain {path.domain} differs from {U_path.domain}")
    if path.shape[1] != U_path.ambient_dim:
        raise DimensionMismatch(
            f"matrix has {path.shape[1]} columns, subspaces live in R^{U_path.ambient_dim}"
        )
    ts = np.linspace(a, b, samples)
    frames = [U_path.frame(t) for t in ts]
    dims = {W.shape[1] for W in frames}
    dim = frames[0].shape[1]
    As = path.eval_many(ts)
    if len(dims) == 1:
        W = np.stack(frames)
        stretch = _batched_min_stretch(As @ W)
        P = W @ W.transpose(0, 2, 1)
        adj = np.concatenate([[0.0], batched_norm(P[1:] - P[:-1])])
    else:
        stretch = np.array([_batched_min_stretch((A @ W)[None])[0] for A, W in zip(As, frames)])
        adj = np.zeros(samples)
        for k in range(1, samples):
            if frames[k].shape == frames[k - 1].shape:
                D = frames[k] @ frames[k].T - frames[k - 1] @ frames[k - 1].T
                adj[k] = np.linalg.norm(D, 2)
            else:
                adj[k] = 1.0
    return VerificationReport(ts, stretch, adj, float(c), dim, len(dims) == 1, constants or {})


# ---------------------------------------------------------------------------
# shared helpers


def check_unit_path(path: MatrixPath, points: int = CHECK_POINTS, tol: float = UNIT_PATH_TOL):
    a, b = path.domain
    As = path.eval_many(np.linspace(a, b, points))
    dev = np.abs(np.linalg.norm(As, axis=1) - 1.0).max()
    if dev > tol:
        raise ValueError(f"path columns are not unit length (max deviation {dev:.3e})")
    return As


def estimate_lambda(path: MatrixPath, points: int = CHECK_POINTS) -> float:
    a, b = path.domain
    return float(batched_norm(path.eval_many(np.linspace(a, b, points))).max())


def method_one_epsilon(c0: float, gamma: float, lam: float) -> float:
    """``min{(1 - gamma) c0, c0^2 (1 - gamma^2) / (2 lam)}``."""
    return min((1.0 - gamma) * c0, c0**2 * (1.0 - gamma**2) / (2.0 * lam))


def _check_gamma(gamma):
    if not 0.0 < gamma < 1.0:
        raise ValueError(f"gamma must lie in (0, 1), got {gamma}")


def _node_subsets(As, size, target, seed, shrink: bool):
    """Equal-size subsets with stretch >= target at every node.

    The previous node's subset is kept whenever it still certifies.  With
    ``shrink`` the common size drops by one and the scan restarts if some
    node has no subset of the current size.
    """
    while size >= 1:
        subsets = []
        prev = None
        for i, A in enumerate(As):
            if prev is not None and column_stretch(A, prev) >= target:
                subsets.append(prev)
                continue
            sub, val, _ = best_subset_search(A, size, child_seed(seed, "node", i))
            if val < target:
                break
            subsets.append(sub)
            prev = sub
        else:
            return size, subsets
        if not shrink:
            raise CertificationFailed(
                f"no size-{size} subset reaches {target:.6g} at node {len(subsets)}"
            )
        size -= 1
    raise CertificationFailed(f"no column reaches {target:.6g} at some node")


def _pullback(M: np.ndarray, sigma, V: Subspace) -> Subspace:
    """Preimage of ``V`` under ``M`` restricted to the coordinate subspace ``U_sigma``."""
    cols = list(sigma)
    coef = np.linalg.lstsq(M[:, cols], V.basis, rcond=None)[0]
    X = np.zeros((M.shape[1], V.dim))
    X[cols] = coef
    return orthonormalize(X)


def _constant_e1(n, a, b):
    return SubspacePath([ConstantSegment(coordinate_subspace([0], n), a, b)])


# ---------------------------------------------------------------------------
# method I


@dataclass(frozen=True)
class MethodOneConfig:
    gamma: float = 0.9
    mode: str = "best-effort"
    target_c: float | None = None
    target_size: int | None = None
    epsilon: float | None = None
    select_epsilon: float = 0.5
    seed: int = 0
    samples: int = 500
    verify: bool = True


@dataclass(frozen=True, eq=False)
class MethodOneReport:
    grid: Grid
    subsets: list
    midpoints: list
    margins: list
    output: SubspacePath
    gamma: float
    c0: float
    d0: float
    Lambda: float
    achieved_dim: int
    m0: int
    epsilon: float
    mode: str
    image_residual: float = 0.0
    domain_residual: float = 0.0
    fallback: bool = False
    verification: VerificationReport | None = None

    @property
    def target(self) -> float:
        return self.gamma * self.c0

    def summary(self) -> dict:
        return {
            "grid_points": len(self.grid),
            "epsilon": self.epsilon,
            "c0": self.c0,
            "d0": self.d0,
            "gamma": self.gamma,
            "Lambda": self.Lambda,
            "m0": self.m0,
            "achieved_dim": self.achieved_dim,
            "image_residual": self.image_residual,
            "domain_residual": self.domain_residual,
            "fallback": self.fallback,
            "subsets": [list(s) for s in self.subsets],
        }


def _stitch_interval(M, sig_left, sig_right):
    """Orthogonal ``UL`` in ``U_left`` and ``UR`` in ``U_right`` with orthogonal images under ``M``."""
    VL = orthonormalize(M[:, list(sig_left)])
    VR = orthonormalize(M[:, list(sig_right)])
    VL2, VR2 = half_reduction(VL, VR)
    X = _pullback(M, sig_left, VL2)
    Y = _pullback(M, sig_right, VR2)
    UL, UR = half_reduction(X, Y)
    img = float(np.abs((M @ UL.basis).T @ (M @ UR.basis)).max())
    dom = float(np.abs(UL.basis.T @ UR.basis).max())
    return UL, UR, img, dom


def method_one(path: MatrixPath, config: MethodOneConfig | None = None, **overrides) -> MethodOneReport:
    """Continuous subspaces ``U(t)`` with ``||A(t) x|| >= gamma c0 ||x||`` on ``U(t)``.

    Certified mode uses ``c0 = eps^2``, ``d0 = (1 - eps)^2`` (``eps`` is
    ``select_epsilon``) and falls back to ``span(e_1)`` when the guaranteed
    dimension ``floor(m0 / 4)`` is zero.  Best-effort mode uses
    ``c0 = target_c`` and the largest common node size it can find (or
    ``target_size``).
    """
    cfg = config or MethodOneConfig()
    if overrides:
        cfg = MethodOneConfig(**{**cfg.__dict__, **overrides})
    _check_gamma(cfg.gamma)
    a, b = path.domain
    n = path.shape[1]
    check_unit_path(path)
    lam_raw = estimate_lambda(path)
    lam = LAMBDA_SAFETY * lam_raw

    if cfg.mode == "certified":
        e = cfg.select_epsilon
        c0, d0 = e**2, (1.0 - e) ** 2
        m0 = max(1, math.floor(d0 * n / lam_raw**2))
    elif cfg.mode == "best-effort":
        c0 = DEFAULT_TARGET if cfg.target_c is None else float(cfg.target_c)
        d0 = float("nan")
        m0 = cfg.target_size
    else:
        raise ValueError(f"unknown mode {cfg.mode!r}")
    eps = method_one_epsilon(c0, cfg.gamma, lam) if cfg.epsilon is None else float(cfg.epsilon)
    grid = discretize(path, eps)
    ts = np.array(grid.points)
    As = path.eval_many(ts)
    constants = {"c0": c0, "d0": d0, "gamma": cfg.gamma, "Lambda": lam_raw, "epsilon": eps}

    def finish(U, subsets, mids, margins, dim, m0_, img=0.0, dom=0.0, fallback=False):
        ver = None
        if cfg.verify:
            ver = verify_subspace_path(path, U, cfg.gamma * c0, cfg.samples, constants)
            if not ver.passed:
                raise StretchViolation(
                    f"restricted stretch {ver.min_stretch:.6g} < {cfg.gamma * c0:.6g} "
                    f"at t={ver.argmin_t:.6g}",
                    ver.argmin_t,
                    ver.min_stretch,
                )
        return MethodOneReport(grid, subsets, mids, margins, U, cfg.gamma, c0, d0, lam_raw,
                               dim, m0_, eps, cfg.mode, img, dom, fallback, ver)

    if cfg.mode == "certified" and m0 // 4 < 1 and len(ts) > 2:
        log.info("certified dimension floor(%d/4) is 0; using span(e_1)", m0)
        return finish(_constant_e1(n, a, b), [], [], [], 1, m0, fallback=True)

    if m0 is None:
        m0 = select_restricted_invertible(
            As[0], mode="best-effort", target_c=c0, rng_seed=cfg.seed
        ).size
    m0, subsets = _node_subsets(As, m0, c0, cfg.seed, shrink=cfg.target_size is None
                                and cfg.mode == "best-effort")

    if len(ts) == 2:
        # one interval: the node certificate already covers the whole domain
        U = SubspacePath([ConstantSegment(coordinate_subspace(subsets[0], n), a, b)])
        return finish(U, subsets, [], [], m0, m0)
    if m0 < 4:
        if cfg.mode == "certified":
            return finish(_constant_e1(n, a, b), subsets, [], [], 1, m0, fallback=True)
        raise SelectionFailed(f"common node size {m0} < 4 leaves no room to stitch")

    N = len(ts) - 1
    pairs, mids, margins = [], [], []
    img = dom = 0.0
    for i in range(N):
        s = 0.5 * (ts[i] + ts[i + 1])
        UL, UR, r1, r2 = _stitch_interval(path.eval(s), subsets[i], subsets[i + 1])
        pairs.append((UL, UR))
        mids.append(float(s))
        margins.append(float((ts[i + 1] - ts[i]) / 8.0))
        img, dom = max(img, r1), max(dom, r2)

    segments = []
    for i in range(N):
        UL, UR = pairs[i]
        s, eta = mids[i], margins[i]
        segments.append(ConstantSegment(UL, ts[i], s - eta))
        segments.append(linear_traversal(UL, UR, s - eta, s + eta))
        if i < N - 1:
            segments.append(ConstantSegment(UR, s + eta, ts[i + 1] - eta))
            segments.append(linear_traversal(UR, pairs[i + 1][0], ts[i + 1] - eta, ts[i + 1]))
        else:
            segments.append(ConstantSegment(UR, s + eta, ts[i + 1]))
    U = SubspacePath(segments)
    return finish(U, subsets, mids, margins, U.dim, m0, img, dom)


# ---------------------------------------------------------------------------
# method II


@dataclass(frozen=True)
class MethodTwoConfig:
    mode: str = "best-effort"
    target_c: float | None = None
    target_size: int | None = None
    node_size: int | None = None
    epsilon: float | None = None
    seed: int = 0
    samples: int = 500
    verify: bool = True


@dataclass(frozen=True, eq=False)
class MethodTwoReport:
    grid: Grid
    sigma: list
    tau: list
    arrival: list
    xi: list
    output: SubspacePath
    c: float
    node_target: float
    achieved_dim: int
    epsilon: float
    mode: str
    supports: list = field(default_factory=list)
    fallback: bool = False
    verification: VerificationReport | None = None

    def summary(self) -> dict:
        return {
            "grid_points": len(self.grid),
            "epsilon": self.epsilon,
            "c": self.c,
            "node_target": self.node_target,
            "achieved_dim": self.achieved_dim,
            "fallback": self.fallback,
            "sigma": [list(s) for s in self.sigma],
            "tau": [list(s) for s in self.tau],
            "arrival": [list(s) for s in self.arrival],
            "xi": [list(s) for s in self.xi],
        }


def _pick_xi(sigma, exclude, m):
    pool = [j for j in sigma if j not in set(exclude)]
    if len(pool) < m:
        raise SelectionFailed(f"only {len(pool)} spare columns for the middle switch, need {m}")
    return tuple(pool[:m])


def method_two(path: MatrixPath, config: MethodTwoConfig | None = None, **overrides) -> MethodTwoReport:
    """Continuous coordinate-type subspaces, moved by quadratic column switches.

    Anchored at the left endpoint and built left to right.  On
    ``[t_i, t_{i+1}]``: constant ``U_{tau_i}`` up to the midpoint, a switch
    ``tau_i -> arr_{i+1}`` until ``t_{i+1} - eta``, then ``arr_{i+1} -> xi_{i+1}``
    and ``xi_{i+1} -> tau_{i+1}`` over the last ``eta``.  Each set is certified
    at a node whose ``epsilon``-window covers the segment.
    """
    cfg = config or MethodTwoConfig()
    if overrides:
        cfg = MethodTwoConfig(**{**cfg.__dict__, **overrides})
    a, b = path.domain
    n = path.shape[1]
    check_unit_path(path)
    lam = estimate_lambda(path)

    if cfg.mode == "certified":
        c, node_target = METHOD_TWO_C, JOINT_TARGET
        eps = JOINT_TARGET - METHOD_TWO_C if cfg.epsilon is None else float(cfg.epsilon)
        m = max(1, math.ceil(D3 * n / lam**4))
        sel_mode = "certified"
        if D1 * D2 * n / lam**4 < 1:
            grid = Grid((a, b), eps)
            U = _constant_e1(n, a, b)
            ver = None
            if cfg.verify:
                ver = verify_subspace_path(path, U, c, cfg.samples, {"c": c})
                if not ver.passed:
                    raise StretchViolation("span(e_1) fails the stretch check",
                                           ver.argmin_t, ver.min_stretch)
            return MethodTwoReport(grid, [], [], [], [], U, c, node_target, 1, eps, cfg.mode,
                                   [((0,), None, 1.0)], True, ver)
    elif cfg.mode == "best-effort":
        c = DEFAULT_TARGET if cfg.target_c is None else float(cfg.target_c)
        eps = c / 8.0 if cfg.epsilon is None else float(cfg.epsilon)
        node_target = c + eps
        m = 1 if cfg.target_size is None else int(cfg.target_size)
        sel_mode = "best-effort"
    else:
        raise ValueError(f"unknown mode {cfg.mode!r}")
    node_size = 3 * m + 1 if cfg.node_size is None else int(cfg.node_size)
    if node_size < 3 * m:
        raise ValueError(f"node size {node_size} < 3 * {m} leaves no room for the middle switch")

    grid = discretize(path, eps)
    ts = np.array(grid.points)
    As = path.eval_many(ts)
    constants = {"c": c, "node_target": node_target, "epsilon": eps, "Lambda": lam}

    # nothing arrives at the first node, so sigma_0 only has to hold tau_0
    first = node_size - m
    sub, val, _ = best_subset_search(As[0], first, child_seed(cfg.seed, "sigma0"))
    if val < node_target:
        raise CertificationFailed(f"no size-{first} subset reaches {node_target:.6g} at t0")
    sigma = [sub]
    supports = []

    if len(ts) == 2:
        tau0 = tuple(sorted(best_subset_search(As[0], m, cfg.seed, pool=sub)[0]))
        U = SubspacePath([ConstantSegment(coordinate_subspace(tau0, n), a, b)])
        supports.append((sub, 0, column_stretch(As[0], sub)))
        return _finish_two(path, cfg, grid, sigma, [tau0], [()], [], U, c, node_target, m,
                           eps, supports, constants)

    N = len(ts) - 1
    tau, arrival, xi = [], [()], [()]
    for i in range(N):
        C = As[i + 1]
        eligible = tuple(j for j in sigma[i] if j not in set(arrival[i]))
        seed = child_seed(cfg.seed, "interval", i)
        sel = select_disjoint(C, eligible, seed, mode=sel_mode, target=node_target,
                              size=node_size if sel_mode == "best-effort" else None)
        ref = refine_joint(C, sel, seed, mode=sel_mode, target=node_target,
                           size=m if sel_mode == "best-effort" else None)
        tau.append(ref.tau1)
        arrival.append(ref.sigma2_tilde)
        sigma.append(sel.sigma2)
        supports.append((tuple(sorted(ref.tau1 + ref.sigma2_tilde)), i + 1, ref.joint_bound))
        if i >= 1:
            xi.append(_pick_xi(sigma[i], arrival[i] + tau[i], m))
    for j, s_ in enumerate(sigma):
        supports.append((s_, j, column_stretch(As[j], s_)))

    segments = []
    for i in range(N):
        s = 0.5 * (ts[i] + ts[i + 1])
        eta = (ts[i + 1] - ts[i]) / 8.0
        segments.append(ConstantSegment(coordinate_subspace(tau[i], n), ts[i], s))
        if i < N - 1:
            segments.append(column_switch_segment(tau[i], arrival[i + 1], n, s, ts[i + 1] - eta))
            nxt = xi[i + 1]
            segments.append(column_switch_segment(arrival[i + 1], nxt, n, ts[i + 1] - eta,
                                                  ts[i + 1] - eta / 2))
            segments.append(column_switch_segment(nxt, tau[i + 1], n, ts[i + 1] - eta / 2,
                                                  ts[i + 1]))
        else:
            segments.append(column_switch_segment(tau[i], arrival[i + 1], n, s, ts[i + 1]))
    U = SubspacePath(segments)
    return _finish_two(path, cfg, grid, sigma, tau, arrival, xi, U, c, node_target, m, eps,
                       supports, constants)


def _finish_two(path, cfg, grid, sigma, tau, arrival, xi, U, c, node_target, m, eps,
                supports, constants):
    ver = None
    if cfg.verify:
        ver = verify_subspace_path(path, U, c, cfg.samples, constants)
        if not ver.passed:
            raise StretchViolation(
                f"restricted stretch {ver.min_stretch:.6g} < {c:.6g} at t={ver.argmin_t:.6g}",
                ver.argmin_t,
                ver.min_stretch,
            )
    return MethodTwoReport(grid, sigma, tau, arrival, xi, U, c, node_target, m, eps, cfg.mode,
                           supports, False, ver)


def structural_check(U_path: SubspacePath, samples_per_segment: int = 5, tol: float = 1e-10):
    """Largest deviation from the quadratic-combination form and from containment.

    Returns ``(max_form_error, max_containment_residual)`` over all switch
    segments; constant segments must be coordinate subspaces.
    """
    form = contain = 0.0
    for seg in U_path.segments:
        if isinstance(seg, SwitchSegment):
            union = sorted(set(seg.sigma1) | set(seg.sigma2))
            for t in np.linspace(seg.start, seg.end, samples_per_segment):
                W = seg.frame(t)
                if not is_quadratic_frame(W, seg.sigma1, seg.sigma2, tol):
                    form = max(form, 1.0)
                outside = np.ones(W.shape[0], dtype=bool)
                outside[union] = False
                contain = max(contain, float(np.abs(W[outside]).max(initial=0.0)))
        elif isinstance(seg, ConstantSegment):
            W = seg.space.basis
            nz = np.abs(W) > tol
            if not (nz.sum(axis=0) == 1).all() or not np.allclose(np.abs(W[nz]), 1.0, atol=tol):
                form = max(form, 1.0)
        else:
            form = max(form, 1.0)
    return form, contain


# ---------------------------------------------------------------------------
# factorization of the identity


def left_inverse_path(B_path: MatrixPath, c: float, samples: int = 300) -> MatrixPath:
    """``L(t) = (B^T B)^{-1} B^T`` after checking ``min_stretch(B(t)) >= c`` at samples."""
    if not c > 0:
        raise ValueError("c must be positive")
    a, b = B_path.domain
    ts = np.linspace(a, b, samples)
    Bs = B_path.eval_many(ts)
    low = _batched_min_stretch(Bs)
    k = int(np.argmin(low))
    if low[k] < c - STRETCH_SLACK:
        raise StretchViolation(f"min stretch {low[k]:.6g} < {c:.6g} at t={ts[k]:.6g}",
                               float(ts[k]), float(low[k]))

    def left(B):
        return np.linalg.solve(B.T @ B, B.T)

    def batch(Bs):
        return np.linalg.solve(Bs.transpose(0, 2, 1) @ Bs, Bs.transpose(0, 2, 1))

    m, n = B_path.shape[1], B_path.shape[0]
    return B_path.map(left, batch, shape=(m, n), kind={"kind": "left_inverse"})


@dataclass(frozen=True, eq=False)
class FactorizationTriple:
    L_path: MatrixPath
    R_path: MatrixPath
    m: int
    theta: float
    norm_product_max: float
    residual_max: float
    bound: float
    method_one: MethodOneReport

    def summary(self) -> dict:
        return {
            "m": self.m,
            "theta": self.theta,
            "norm_product_max": self.norm_product_max,
            "residual_max": self.residual_max,
            "bound": self.bound,
        }


def factorize_identity(
    path: MatrixPath,
    theta: float = 0.5,
    gamma: float = 0.9,
    samples: int = 300,
    **method_one_args,
) -> FactorizationTriple:
    """Continuous ``L``, ``R`` with ``L(t) A(t) R(t) = I_m`` and ``||L|| ||R|| <= C / theta``.

    Requires ``||A(t)|| <= 1`` and column norms at least ``theta``.
    ``C = 1 / (gamma c0)``.
    """
    if not 0 < theta <= 1:
        raise ValueError(f"theta must lie in (0, 1], got {theta}")
    a, b = path.domain
    As = path.eval_many(np.linspace(a, b, CHECK_POINTS))
    if batched_norm(As).max() > 1.0 + UNIT_PATH_TOL:
        raise ValueError("operator norm of A(t) exceeds 1")
    if np.linalg.norm(As, axis=1).min() < theta - 1e-12:
        raise ValueError(f"some column norm falls below theta={theta}")

    def d_of(A):
        return 1.0 / np.linalg.norm(A, axis=-2)

    unit = path.map(lambda A: A * d_of(A)[None, :],
                    lambda As: As * d_of(As)[:, None, :], kind={"kind": "normalized",
                                                                "base": path.kind})
    rep = method_one(unit, gamma=gamma, **method_one_args)
    U = rep.output

    def R_of(t):
        return d_of(path.eval(t))[:, None] * U.continuous_frame(t)

    n = path.shape[1]
    R_path = MatrixPath(path.domain, (n, U.dim), R_of, {"kind": "right_factor"})
    AR = MatrixPath(path.domain, (path.shape[0], U.dim), lambda t: path.eval(t) @ R_of(t),
                    {"kind": "product"})
    c = gamma * rep.c0
    L_path = left_inverse_path(AR, c, samples)

    residual = prod = 0.0
    for t in np.linspace(a, b, samples):
        L, R = L_path.eval(t), R_path.eval(t)
        residual = max(residual, float(np.linalg.norm(L @ path.eval(t) @ R - np.eye(U.dim), 2)))
        prod = max(prod, float(np.linalg.norm(L, 2) * np.linalg.norm(R, 2)))
    bound = 1.0 / (c * theta)
    return FactorizationTriple(L_path, R_path, U.dim, theta, prod, residual, bound, rep)
