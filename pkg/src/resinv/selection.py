"""Column-subset selection for a single matrix.

Every routine returns subsets together with a bound that is recomputed from
singular values, so correctness never rests on the worst-case constants.

Two modes:

``"certified"``
    Worst-case constants: ``c0 = eps**2`` and
    ``d0 = (1 - eps)**2`` for plain selection, ``d1 = 1/320``,
    ``d2 = d1/4``, ``d3 = d2**2/2`` and the targets ``1/(16 sqrt 2)`` and
    ``1/32`` for the disjoint variants.  At desk-scale ``n`` these force
    subset sizes of 1.
``"best-effort"``
    Caller-specified size and/or target, reached by greedy and randomized
    search with the same certificate at the end.

Indices are 0-based throughout.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from resinv.errors import (
    CertificationFailed,
    RefinementFailed,
    SearchFailed,
    SelectionFailed,
    TooLarge,
)
from resinv.linalg import as_matrix, min_stretch, operator_norm
from resinv.seeding import child_seed, stream

log = logging.getLogger(__name__)

D1 = 1.0 / 320.0
D2 = D1 / 4.0
D3 = D2**2 / 2.0
DISJOINT_TARGET = 1.0 / (16.0 * math.sqrt(2.0))
JOINT_TARGET = 1.0 / 32.0
FILTER_THRESHOLD = 1.0 / math.sqrt(2.0)

MAX_ATTEMPTS = 64
BRUTE_LIMIT = 20
PATTERN_CAP = 2**20
UNIT_TOL = 1e-8
MODES = ("certified", "best-effort")


@dataclass(frozen=True)
class SelectionResult:
    subset: tuple
    certified_bound: float
    target_bound: float
    attempts: int
    mode: str = "certified"

    @property
    def size(self):
        return len(self.subset)


@dataclass(frozen=True)
class DisjointSelection:
    sigma1: tuple
    sigma2: tuple
    relative_bound: float
    target: float = DISJOINT_TARGET
    attempts: int = 1
    vacuous: bool = False


@dataclass(frozen=True)
class JointRefinement:
    tau1: tuple
    sigma2_tilde: tuple
    joint_bound: float
    target: float = JOINT_TARGET
    # the two one-sided bounds whose combination certifies joint_bound
    one_sided: tuple = field(default=(float("nan"), float("nan")))


def _check_mode(mode):
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


def check_unit_columns(A, tol: float = UNIT_TOL) -> np.ndarray:
    A = as_matrix(A)
    norms = np.linalg.norm(A, axis=0)
    bad = np.flatnonzero(np.abs(norms - 1.0) > tol)
    if bad.size:
        raise ValueError(
            f"columns {bad.tolist()} are not unit length (norms {norms[bad].round(6).tolist()})"
        )
    return A


def _indices(sigma, n=None) -> tuple:
    idx = tuple(sorted({int(i) for i in sigma}))
    if n is not None and idx and (idx[0] < 0 or idx[-1] >= n):
        raise ValueError(f"indices {idx} out of range for n={n}")
    return idx


def column_stretch(A, sigma) -> float:
    """Restricted minimal stretch of ``A`` on the coordinate subspace ``U_sigma``."""
    sigma = list(sigma)
    if not sigma:
        return float("inf")
    return min_stretch(np.asarray(A)[:, sigma])


def _range_basis(B: np.ndarray) -> np.ndarray:
    if B.shape[1] == 0:
        return B
    U, s, _ = np.linalg.svd(B, full_matrices=False)
    rank = int(np.sum(s > 1e-12 * max(s[0], 1.0)))
    return U[:, :rank]


def relative_bound(A, sigma1, sigma2) -> float:
    """``inf ||sum_{j in s1 u s2} a_j A e_j||`` over coefficients with ``||a|_{s2}|| = 1``.

    Minimizing over the ``sigma1`` coefficients first leaves the distance
    from ``A a_2`` to ``span(A e_j : j in sigma1)``, so the infimum is the
    smallest singular value of ``(I - P) A[:, sigma2]`` with ``P`` the
    projection onto that span.
    """
    A = as_matrix(A)
    s1 = _indices(sigma1, A.shape[1])
    s2 = _indices(sigma2, A.shape[1])
    if not s2:
        raise ValueError("sigma2 must be nonempty")
    if set(s1) & set(s2):
        raise ValueError("sigma1 and sigma2 overlap")
    B = A[:, list(s2)]
    if s1:
        Q = _range_basis(A[:, list(s1)])
        B = B - Q @ (Q.T @ B)
    return min_stretch(B)


def projection_norms(A, pool, background=()) -> np.ndarray:
    """``||P_{span(A e_j : j in (background u pool) minus {i})} A e_i||`` for ``i`` in ``pool``."""
    A = as_matrix(A)
    pool = list(pool)
    out = np.zeros(len(pool))
    for k, i in enumerate(pool):
        others = list(background) + [j for j in pool if j != i]
        if not others:
            continue
        Q = _range_basis(A[:, others])
        out[k] = np.linalg.norm(Q.T @ A[:, i])
    return out


# ---------------------------------------------------------------------------
# plain selection


def _greedy_forward(A, k, first=None, pool=None):
    n = A.shape[1]
    pool = list(range(n)) if pool is None else list(pool)
    chosen = [] if first is None else [first]
    while len(chosen) < k:
        best, best_val = None, -1.0
        for j in pool:
            if j in chosen:
                continue
            val = column_stretch(A, chosen + [j])
            if val > best_val:
                best, best_val = j, val
        if best is None:
            break
        chosen.append(best)
    return chosen


def _swap_improve(A, chosen, pool=None, max_rounds=50):
    n = A.shape[1]
    pool = list(range(n)) if pool is None else list(pool)
    chosen = list(chosen)
    val = column_stretch(A, chosen)
    for _ in range(max_rounds):
        best_gain, best_swap = 0.0, None
        outside = [j for j in pool if j not in chosen]
        for pos in range(len(chosen)):
            for j in outside:
                trial = chosen[:pos] + [j] + chosen[pos + 1:]
                v = column_stretch(A, trial)
                if v > val + best_gain + 1e-15:
                    best_gain, best_swap = v - val, (pos, j)
        if best_swap is None:
            break
        chosen[best_swap[0]] = best_swap[1]
        val += best_gain
    return chosen


def best_subset_search(A, k, rng_seed=0, restarts=8, pool=None):
    """Heuristic maximizer of the column stretch over size-``k`` subsets.

    Greedy forward selection followed by pairwise swaps, restarted from
    random first columns.  Returns ``(subset, value, attempts)``.
    """
    A = as_matrix(A)
    pool = list(range(A.shape[1])) if pool is None else list(pool)
    if not 1 <= k <= len(pool):
        raise ValueError(f"subset size {k} outside [1, {len(pool)}]")
    rng = stream(rng_seed, "best_subset_search")
    best, best_val, attempts = None, -1.0, 0
    starts = [None] + list(rng.permutation(pool)[: max(restarts - 1, 0)])
    for first in starts:
        attempts += 1
        chosen = _greedy_forward(A, k, None if first is None else int(first), pool)
        chosen = _swap_improve(A, chosen, pool)
        val = column_stretch(A, chosen)
        if val > best_val:
            best, best_val = tuple(sorted(chosen)), val
    return best, best_val, attempts


def certified_size(n: int, norm: float, epsilon: float) -> int:
    return max(1, math.floor((1.0 - epsilon) ** 2 * n / norm**2))


def select_restricted_invertible(
    A,
    epsilon: float = 0.5,
    mode: str = "certified",
    target_c: float | None = None,
    target_size: int | None = None,
    rng_seed: int = 0,
) -> SelectionResult:
    """Pick columns on which ``A`` is boundedly invertible.

    Certified mode asks for ``|sigma| >= max(1, floor((1-eps)^2 n / ||A||^2))``
    with restricted stretch ``>= eps^2``.  Best-effort mode either maximizes
    the stretch at ``target_size`` or, given only ``target_c``, returns the
    largest subset it can find that reaches ``target_c``.
    """
    _check_mode(mode)
    A = check_unit_columns(A)
    n = A.shape[1]
    if mode == "certified":
        if not 0.0 < epsilon < 1.0:
            raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
        k = certified_size(n, operator_norm(A), epsilon)
        target = epsilon**2
        attempts = 0
        for attempt in range(MAX_ATTEMPTS):
            seed = child_seed(rng_seed, "certified", attempt)
            subset, val, used = best_subset_search(A, k, seed, restarts=1 if attempt == 0 else 2)
            attempts += used
            if val >= target:
                subset = _grow(A, list(subset), target)
                return SelectionResult(subset, column_stretch(A, subset), target, attempts, mode)
        raise CertificationFailed(
            f"no size-{k} subset reached {target:.6g} after {MAX_ATTEMPTS} attempts"
        )

    if target_size is not None:
        subset, val, attempts = best_subset_search(A, int(target_size), rng_seed)
        target = 0.0 if target_c is None else float(target_c)
        if val < target:
            raise CertificationFailed(
                f"best size-{target_size} subset reaches {val:.6g} < target {target:.6g}"
            )
        return SelectionResult(subset, val, target, attempts, mode)

    if target_c is None:
        raise ValueError("best-effort selection needs target_c and/or target_size")
    target = float(target_c)
    # grow greedily while the target holds, then keep trying one size up
    chosen = []
    while len(chosen) < n:
        nxt = _greedy_forward(A, len(chosen) + 1, None, None) if not chosen else None
        if nxt is None:
            cand = [
                (column_stretch(A, chosen + [j]), -j) for j in range(n) if j not in chosen
            ]
            val, neg_j = max(cand)
            if val < target:
                break
            chosen.append(-neg_j)
        else:
            chosen = nxt
    if not chosen or column_stretch(A, chosen) < target:
        raise CertificationFailed(f"no column reaches target {target:.6g}")
    best = tuple(sorted(chosen))
    attempts = 1
    while len(best) < n:
        subset, val, used = best_subset_search(A, len(best) + 1, child_seed(rng_seed, len(best)))
        attempts += used
        if val < target:
            break
        best = subset
    return SelectionResult(best, column_stretch(A, best), target, attempts, mode)


def _grow(A, chosen, target):
    # the size guarantee is a floor; keep adding columns while the bound holds
    n = A.shape[1]
    while len(chosen) < n:
        cand = [(column_stretch(A, chosen + [j]), -j) for j in range(n) if j not in chosen]
        val, neg_j = max(cand)
        if val < target:
            break
        chosen.append(-neg_j)
    return tuple(sorted(chosen))


def brute_force_best_subset(A, k: int, chunk: int = 4096):
    """Exhaustive maximizer of the column stretch over all size-``k`` subsets.

    Ties go to the lexicographically smallest subset.
    """
    A = as_matrix(A)
    n = A.shape[1]
    if not 1 <= k <= n:
        raise ValueError(f"k={k} outside [1, {n}]")
    if n > 16 or math.comb(n, k) > 10**6:
        raise TooLarge(f"C({n}, {k}) subsets is beyond the brute-force limit")
    best, best_val = None, -1.0
    combos = itertools.combinations(range(n), k)
    while True:
        block = list(itertools.islice(combos, chunk))
        if not block:
            break
        idx = np.array(block)
        sub = A[:, idx].transpose(1, 0, 2)
        s = np.linalg.svd(sub, compute_uv=False)
        if k > A.shape[0]:
            vals = np.zeros(len(block))
        else:
            vals = s[:, -1].copy()
            vals[vals <= 1e-10 * s[:, 0]] = 0.0
        j = int(np.argmax(vals))
        if vals[j] > best_val:
            best, best_val = tuple(block[j]), float(vals[j])
    return best, best_val


# ---------------------------------------------------------------------------
# disjoint selection


def default_delta(norm: float) -> float:
    return 1.0 / (8.0 * norm**2)


def vacuous_regime(A) -> bool:
    """True when ``delta * n < 40``: the size guarantee reduces to a singleton."""
    A = as_matrix(A)
    return default_delta(operator_norm(A)) * A.shape[1] < 40


def random_select(
    A,
    sigma1=(),
    rng_seed: int = 0,
    min_size: int | None = None,
    delta: float | None = None,
    max_attempts: int = MAX_ATTEMPTS,
    certified: bool = False,
) -> tuple:
    """Random columns, each far from the span of the others.

    Samples every index outside ``sigma1`` independently with probability
    ``delta`` (default ``1/(8 ||A||^2)``) and keeps the sampled ``i`` with
    ``||P_{span(A e_j : j in (sigma1 u sample) minus {i})} A e_i|| < 1/sqrt 2``.
    Since the kept set is inside the sample, the same bound holds against
    the kept set.  Resamples until at least ``min_size`` indices survive.
    """
    A = check_unit_columns(A)
    n = A.shape[1]
    s1 = _indices(sigma1, n)
    norm = operator_norm(A)
    if certified and len(s1) > D1 * n / norm**2:
        log.warning("|sigma1| = %d exceeds d1 n/||A||^2 = %.4g", len(s1), D1 * n / norm**2)
    if min_size is None:
        min_size = max(1, math.ceil(D1 * n / norm**2))
    delta = default_delta(norm) if delta is None else float(delta)
    comp = np.array([j for j in range(n) if j not in s1], dtype=int)
    if comp.size < min_size:
        raise SelectionFailed(f"only {comp.size} columns outside sigma1")
    for attempt in range(max_attempts):
        rng = stream(rng_seed, "random_select", attempt)
        sample = comp[rng.random(comp.size) < delta]
        if sample.size < min_size:
            continue
        norms = projection_norms(A, sample, s1)
        kept = tuple(int(i) for i in sample[norms < FILTER_THRESHOLD])
        if len(kept) >= min_size:
            return kept
    raise SelectionFailed(
        f"random selection kept fewer than {min_size} columns in {max_attempts} attempts"
    )


def _sign_matrix(k: int, lo: int, hi: int) -> np.ndarray:
    codes = np.arange(lo, hi, dtype=np.int64)
    bits = (codes[:, None] >> np.arange(k)) & 1
    return 1.0 - 2.0 * bits


def admissible_signs(u_vectors, bound: float | None = None) -> np.ndarray:
    """Bit codes of sign vectors ``e`` with ``||sum e_i u_i|| <= bound`` (default ``2 sqrt k``)."""
    U = as_matrix(u_vectors)
    k = U.shape[1]
    if k > BRUTE_LIMIT:
        raise TooLarge(f"{k} vectors exceeds exhaustive limit {BRUTE_LIMIT}")
    G = U.T @ U
    bound = 2.0 * math.sqrt(k) if bound is None else bound
    kept = []
    step = 1 << 16
    for lo in range(0, 1 << k, step):
        hi = min(lo + step, 1 << k)
        S = _sign_matrix(k, lo, hi)
        q = np.einsum("ij,jk,ik->i", S, G, S)
        kept.append(np.arange(lo, hi, dtype=np.int64)[q <= bound**2 * (1 + 1e-12)])
    return np.concatenate(kept)


def shatters(codes: np.ndarray, subset) -> bool:
    """True if every sign pattern on ``subset`` occurs among the codes."""
    subset = list(subset)
    if not subset:
        return codes.size > 0
    bits = (codes[:, None] >> np.array(subset)) & 1
    patterns = bits @ (1 << np.arange(len(subset)))
    return np.unique(patterns).size == 1 << len(subset)


def greedy_extension(U: np.ndarray, fixed: dict) -> np.ndarray:
    """Extend fixed signs greedily, choosing each free sign to shrink the sum."""
    k = U.shape[1]
    eps = np.zeros(k)
    v = np.zeros(U.shape[0])
    for i, s in fixed.items():
        eps[i] = s
        v += s * U[:, i]
    for i in range(k):
        if i in fixed:
            continue
        eps[i] = -1.0 if v @ U[:, i] > 0 else 1.0
        v += eps[i] * U[:, i]
    return eps


def sign_extension_subset(u_vectors, rng_seed: int = 0, max_checks: int = 4000) -> tuple:
    """Subset of at least half the indices on which every sign pattern extends admissibly.

    Admissible means ``||sum_i e_i u_i|| <= 2 sqrt k``.  Up to ``BRUTE_LIMIT``
    vectors the admissible set is enumerated and subsets are checked for
    being shattered, largest size first.  Beyond that, candidate subsets are
    verified pattern by pattern with a greedy extension, checking at most
    ``PATTERN_CAP`` patterns.
    """
    U = as_matrix(u_vectors)
    k = U.shape[1]
    norms = np.linalg.norm(U, axis=0)
    if np.any(norms > 1.0 + 1e-9):
        raise ValueError("sign extension expects vectors of norm at most 1")
    half = math.ceil(k / 2)
    rng = stream(rng_seed, "sign_extension")
    if k <= BRUTE_LIMIT:
        codes = admissible_signs(U)
        for size in range(k, half - 1, -1):
            total = math.comb(k, size)
            if total <= max_checks:
                candidates = itertools.combinations(range(k), size)
            else:
                candidates = (
                    tuple(sorted(rng.choice(k, size, replace=False))) for _ in range(max_checks)
                )
            for S in candidates:
                if shatters(codes, S):
                    return tuple(int(i) for i in S)
        raise SearchFailed(f"no shattered subset of size >= {half} among {k} vectors")

    bound = 2.0 * math.sqrt(k)
    for _ in range(max_checks):
        S = sorted(int(i) for i in rng.choice(k, half, replace=False))
        n_pat = 1 << len(S)
        pats = range(n_pat) if n_pat <= PATTERN_CAP else rng.integers(0, n_pat, PATTERN_CAP)
        ok = True
        for code in pats:
            fixed = {i: (1.0 if (int(code) >> b) & 1 == 0 else -1.0) for b, i in enumerate(S)}
            eps = greedy_extension(U, fixed)
            if np.linalg.norm(U @ eps) > bound:
                ok = False
                break
        if ok:
            return tuple(S)
    raise SearchFailed(f"randomized search found no verified subset of size {half}")


def residual_directions(A, sigma1, sigma) -> np.ndarray:
    """Normalized residuals of ``A e_i`` against the other selected columns, ``i`` in ``sigma``."""
    A = as_matrix(A)
    sigma = list(sigma)
    U = np.zeros((A.shape[0], len(sigma)))
    for k, i in enumerate(sigma):
        others = list(sigma1) + [j for j in sigma if j != i]
        x = A[:, i]
        if others:
            Q = _range_basis(A[:, others])
            x = x - Q @ (Q.T @ x)
        U[:, k] = x / np.linalg.norm(x)
    return U


def _prune(A, sigma1, sigma2, target, min_size, max_size=None):
    s2 = list(sigma2)
    val = relative_bound(A, sigma1, s2) if s2 else 0.0
    while s2 and (val < target or (max_size is not None and len(s2) > max_size)):
        if len(s2) <= min_size and val < target:
            return s2, val
        if len(s2) == 1:
            break
        trials = [(relative_bound(A, sigma1, s2[:p] + s2[p + 1:]), -s2[p]) for p in range(len(s2))]
        val, neg = max(trials)
        s2.remove(-neg)
    return s2, val


def _augment(A, sigma1, sigma2, target, size, n):
    s2 = list(sigma2)
    pool = [j for j in range(n) if j not in set(sigma1) | set(s2)]
    while len(s2) < size and pool:
        trials = [(relative_bound(A, sigma1, s2 + [j]), -j) for j in pool]
        val, neg = max(trials)
        if val < target:
            break
        s2.append(-neg)
        pool.remove(-neg)
    return s2


def select_disjoint(
    A,
    sigma1=(),
    rng_seed: int = 0,
    mode: str = "certified",
    target: float | None = None,
    size: int | None = None,
    delta: float | None = None,
) -> DisjointSelection:
    """``sigma2`` disjoint from ``sigma1`` with ``relative_bound(A, sigma1, sigma2) >= target``.

    Runs random selection, sign extension and then greedy pruning of the
    columns whose removal raises the bound most.  In best-effort mode a
    short result is topped up greedily from the remaining columns.
    """
    _check_mode(mode)
    A = check_unit_columns(A)
    n = A.shape[1]
    s1 = _indices(sigma1, n)
    norm = operator_norm(A)
    vacuous = default_delta(norm) * n < 40
    comp = [j for j in range(n) if j not in s1]
    if mode == "certified":
        if len(s1) > D1 * n / norm**2:
            # outside the size regime the guarantee says nothing; still certify
            vacuous = True
        target = DISJOINT_TARGET
        min_size = max(1, math.floor(D2 * n / norm**2))
        max_size = None
    else:
        target = DISJOINT_TARGET if target is None else float(target)
        min_size = 1 if size is None else int(size)
        max_size = size
        if delta is None:
            delta = max(default_delta(norm), min(1.0, 3.0 * min_size / max(len(comp), 1)))
    if len(comp) < min_size:
        raise SelectionFailed(f"only {len(comp)} columns available outside sigma1")

    for attempt in range(MAX_ATTEMPTS):
        seed = child_seed(rng_seed, "select_disjoint", attempt)
        try:
            sample = random_select(
                A, s1, seed, min_size=1, delta=delta, max_attempts=8
            )
            keep = sign_extension_subset(residual_directions(A, s1, sample), seed)
        except SelectionFailed:
            sample, keep = (), ()
        s2 = [sample[k] for k in keep]
        s2, val = _prune(A, s1, s2, target, min_size, max_size)
        if (mode == "best-effort" or vacuous) and len(s2) < min_size:
            if not s2 or val < target:
                s2 = []
            s2 = _augment(A, s1, s2, target, min_size, n)
        if len(s2) >= min_size and s2:
            s2 = tuple(sorted(s2))
            val = relative_bound(A, s1, s2)
            if val >= target:
                return DisjointSelection(s1, s2, val, target, attempt + 1, vacuous)
    raise SelectionFailed(
        f"no disjoint subset of size >= {min_size} reached {target:.6g} "
        f"after {MAX_ATTEMPTS} attempts"
    )


def refine_joint(
    A,
    sel: DisjointSelection,
    rng_seed: int = 0,
    mode: str = "certified",
    target: float | None = None,
    size: int | None = None,
    avoid=(),
) -> JointRefinement:
    """Equal-size ``tau1 in sigma1`` and ``sigma2~ in sigma2`` with a joint lower bound.

    ``sigma2~`` is cut from ``sigma2`` (any subset keeps the relative bound);
    ``tau1`` is then chosen against ``sigma2~`` by the same disjoint-selection
    criterion on the submatrix.  The two one-sided bounds ``x`` and ``y``
    give ``||A a|| >= min(x, y) / sqrt 2 * ||a||`` via
    ``max(p, q) >= ((p^2 + q^2) / 2)^{1/2}``; the reported joint bound is the
    exact restricted stretch, which is at least that.  Indices in ``avoid``
    are used for ``tau1`` only if needed.
    """
    _check_mode(mode)
    A = check_unit_columns(A)
    n = A.shape[1]
    norm = operator_norm(A)
    s1, s2 = list(sel.sigma1), list(sel.sigma2)
    if not s1 or not s2:
        raise RefinementFailed("refinement needs nonempty sigma1 and sigma2")
    if mode == "certified":
        if len(s1) < D2 * n / norm**2:
            raise RefinementFailed(
                f"|sigma1| = {len(s1)} is below d2 n/||A||^2 = {D2 * n / norm**2:.4g}"
            )
        target = JOINT_TARGET
        k = max(1, math.ceil(D3 * n / norm**4))
    else:
        target = JOINT_TARGET if target is None else float(target)
        k = min(len(s1), len(s2)) if size is None else int(size)
    if k > min(len(s1), len(s2)):
        raise RefinementFailed(f"cannot cut {k} columns from sets of sizes {len(s1)}, {len(s2)}")

    # sigma2~: greedy on the relative bound against all of sigma1
    s2t = []
    while len(s2t) < k:
        trials = [(relative_bound(A, s1, s2t + [j]), -j) for j in s2 if j not in s2t]
        s2t.append(-max(trials)[1])

    avoid = set(avoid)
    preferred = [j for j in s1 if j not in avoid]
    pools = [preferred, s1] if len(preferred) >= k and len(preferred) < len(s1) else [s1]
    best = None
    for pool in pools:
        tau = []
        while len(tau) < k:
            trials = [(relative_bound(A, s2t, tau + [j]), -j) for j in pool if j not in tau]
            tau.append(-max(trials)[1])
        joint = column_stretch(A, tau + s2t)
        if joint < target:
            tau = _swap_improve(A, tau + s2t, pool=pool + s2t)
            tau = [j for j in tau if j in pool][:k] if len([j for j in tau if j in pool]) == k else None
            if tau is not None:
                joint = column_stretch(A, tau + s2t)
        if tau is not None and joint >= target:
            best = (tuple(sorted(tau)), joint)
            break
    if best is None:
        raise RefinementFailed(f"no size-{k} refinement reached target {target:.6g}")
    tau1, joint = best
    x = relative_bound(A, s2t, tau1)
    y = relative_bound(A, tau1, s2t)
    return JointRefinement(tau1, tuple(sorted(s2t)), joint, target, (x, y))
