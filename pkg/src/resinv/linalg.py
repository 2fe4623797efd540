"""Dense matrix and subspace primitives.

Matrices are plain 2-D float ``numpy`` arrays. A :class:`Subspace` wraps an
``n x m`` basis with orthonormal columns; its span is the subspace.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from resinv.errors import DependentColumns, DimensionMismatch

ORTHO_TOL = 1e-8
RANK_TOL = 1e-10


def as_matrix(M) -> np.ndarray:
    """Return ``M`` as a finite 2-D float array, raising ``ValueError`` otherwise."""
    A = np.asarray(M, dtype=float)
    if A.ndim == 1:
        A = A.reshape(-1, 1)
    if A.ndim != 2 or A.shape[0] < 1 or A.shape[1] < 1:
        raise ValueError(f"expected a nonempty 2-D matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    return A


def singular_values(M) -> np.ndarray:
    """Singular values of ``M`` in descending order, padded with zeros to ``cols``.

    Padding makes a wide matrix (more columns than rows) report the zeros
    that come from its nontrivial kernel.
    """
    A = as_matrix(M)
    s = np.linalg.svd(A, compute_uv=False)
    if A.shape[1] > s.size:
        s = np.concatenate([s, np.zeros(A.shape[1] - s.size)])
    return s


def operator_norm(M) -> float:
    A = as_matrix(M)
    return float(np.linalg.svd(A, compute_uv=False)[0])


def min_stretch(M) -> float:
    """Smallest singular value over the full column spectrum (``inf ||Mx||``).

    Values at or below ``RANK_TOL * ||M||`` are reported as exactly 0, the
    same threshold used for rank decisions.
    """
    s = singular_values(M)
    if s[-1] <= RANK_TOL * s[0]:
        return 0.0
    return float(s[-1])


def hs_norm(M) -> float:
    A = as_matrix(M)
    return float(np.sqrt(np.sum(A * A)))


@dataclass(frozen=True, eq=False)
class Subspace:
    """Span of an orthonormal ``n x m`` basis, ``m >= 1``."""

    basis: np.ndarray

    def __post_init__(self):
        W = as_matrix(self.basis).copy()
        n, m = W.shape
        if m > n:
            raise DimensionMismatch(f"{m} basis vectors cannot be orthonormal in R^{n}")
        gap = np.abs(W.T @ W - np.eye(m)).max()
        if gap > ORTHO_TOL:
            raise ValueError(f"basis is not orthonormal (max deviation {gap:.3e})")
        W.setflags(write=False)
        object.__setattr__(self, "basis", W)

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def projection(self) -> np.ndarray:
        return projection_of(self)

    def __repr__(self):
        return f"Subspace(ambient_dim={self.ambient_dim}, dim={self.dim})"


def coordinate_subspace(indices: Iterable[int], n: int) -> Subspace:
    """``span(e_i : i in indices)`` in ``R^n`` with 0-based, sorted indices."""
    idx = sorted(int(i) for i in indices)
    if not idx:
        raise ValueError("coordinate subspace needs at least one index")
    if len(set(idx)) != len(idx) or idx[0] < 0 or idx[-1] >= n:
        raise ValueError(f"invalid coordinate indices {idx} for n={n}")
    return Subspace(np.eye(n)[:, idx])


def restricted_min_stretch(M, U: Subspace) -> float:
    """``inf ||Mx||`` over unit ``x`` in ``U``."""
    A = as_matrix(M)
    if A.shape[1] != U.ambient_dim:
        raise DimensionMismatch(
            f"matrix has {A.shape[1]} columns but subspace lives in R^{U.ambient_dim}"
        )
    return min_stretch(A @ U.basis)


def orthonormalize(vectors) -> Subspace:
    """Classical Gram-Schmidt with one re-orthogonalization pass.

    Deterministic and continuous in its input, which is what makes frames
    built from continuous bases continuous.
    """
    V = as_matrix(vectors)
    s = np.linalg.svd(V, compute_uv=False)
    if V.shape[1] > V.shape[0] or s[-1] <= RANK_TOL * s[0]:
        raise DependentColumns(
            f"columns are numerically dependent (smallest singular value {s[-1]:.3e})"
        )
    n, m = V.shape
    Q = np.zeros((n, m))
    for k in range(m):
        v = V[:, k].copy()
        for _ in range(2):
            v -= Q[:, :k] @ (Q[:, :k].T @ v)
        Q[:, k] = v / np.linalg.norm(v)
    return Subspace(Q)


def projection_of(U: Subspace) -> np.ndarray:
    return U.basis @ U.basis.T


def subspace_distance(U: Subspace, V: Subspace) -> float:
    """Operator-norm gap between the orthogonal projections onto ``U`` and ``V``."""
    if U.ambient_dim != V.ambient_dim:
        raise DimensionMismatch(
            f"subspaces live in R^{U.ambient_dim} and R^{V.ambient_dim}"
        )
    return operator_norm(projection_of(U) - projection_of(V))


def containment_residual(inner: Subspace, outer: Subspace) -> float:
    """``||(I - P_outer) W_inner||``; zero iff ``inner`` is contained in ``outer``."""
    W = inner.basis
    R = W - outer.basis @ (outer.basis.T @ W)
    return operator_norm(R)


def span_sum(*spaces: Subspace, tol: float = 1e-10) -> Subspace:
    """Orthonormal basis for ``U_1 + ... + U_k`` (rank decided by SVD)."""
    stacked = np.hstack([S.basis for S in spaces])
    Uo, s, _ = np.linalg.svd(stacked, full_matrices=False)
    rank = int(np.sum(s > tol * max(s[0], 1.0)))
    return Subspace(Uo[:, :rank])


def canonical_sign(v: np.ndarray, tol: float = 1e-12) -> float:
    """Sign making the first non-negligible coordinate of ``v`` positive."""
    scale = np.abs(v).max() if v.size else 0.0
    for x in v:
        if abs(x) > tol * max(scale, 1.0):
            return 1.0 if x > 0 else -1.0
    return 1.0
