"""Subspace manipulations used for stitching.

Biorthogonal bases of two equal-dimensional subspaces, the half-reduction
to mutually orthogonal subspaces, straight-line traversal between
subspaces, and quadratic convex combinations of coordinate subspaces.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from resinv.errors import DimensionMismatch
from resinv.linalg import Subspace, canonical_sign, coordinate_subspace
from resinv.segments import SwitchSegment, TraversalSegment

log = logging.getLogger(__name__)

BIORTHO_TOL = 1e-8
IMG_TOL = 1e-9
PARALLEL_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class BasisPair:
    """Orthonormal bases ``x`` of X and ``y`` of Y with ``<x_i, y_j> = 0`` for i != j.

    ``cosines[i] = <x_i, y_i>`` are the cosines of the principal angles,
    in descending order and always nonnegative.
    """

    x_basis: np.ndarray
    y_basis: np.ndarray
    cosines: np.ndarray

    @property
    def dim(self):
        return self.x_basis.shape[1]

    def cross_gram(self):
        return self.x_basis.T @ self.y_basis

    def max_off_diagonal(self) -> float:
        G = self.cross_gram()
        off = G - np.diag(np.diag(G))
        return float(np.abs(off).max()) if off.size else 0.0


def _check_pair(X: Subspace, Y: Subspace):
    if X.ambient_dim != Y.ambient_dim:
        raise DimensionMismatch(f"ambient dims {X.ambient_dim} and {Y.ambient_dim} differ")
    if X.dim != Y.dim:
        raise DimensionMismatch(f"subspace dims {X.dim} and {Y.dim} differ")


def biorthogonal_bases(X: Subspace, Y: Subspace) -> BasisPair:
    """Orthonormal bases of X and Y that are mutually orthogonal off the diagonal.

    The x_i are eigenvectors of ``Pt* Pt`` where ``Pt`` is the orthogonal
    projection onto Y restricted to X; the y_i are the normalized images
    ``Pt x_i``, completed to a basis of Y.  Working in coordinates, with
    ``C = W_Y^T W_X`` the eigenproblem for ``C^T C`` and the normalized
    images are exactly the right and left singular vectors of ``C``, so one
    SVD yields both families, with the completion coming for free and
    orthonormality on both sides to machine precision.
    """
    _check_pair(X, Y)
    WX, WY = X.basis, Y.basis
    C = WY.T @ WX
    left, s, right_t = np.linalg.svd(C)
    x = WX @ right_t.T
    y = WY @ left
    s = s.copy()
    # images with ||Pt x_i|| <= IMG_TOL count as zero; their y_i is any
    # completion of Y, which the SVD already supplies
    s[s <= IMG_TOL] = 0.0
    for i in range(x.shape[1]):
        sign = canonical_sign(x[:, i])
        x[:, i] *= sign
        if s[i] > 0:
            y[:, i] *= sign
        else:
            y[:, i] *= canonical_sign(y[:, i])
    return BasisPair(x, y, s)


def half_reduction(X: Subspace, Y: Subspace) -> tuple[Subspace, Subspace]:
    """Mutually orthogonal ``X' in X`` and ``Y' in Y``, each of dimension ``m // 2``.

    X' takes the leading half of the biorthogonal x-basis and Y' the trailing
    ``m // 2`` vectors of the y-basis; for odd m the middle index is dropped.
    """
    _check_pair(X, Y)
    m = X.dim
    if m < 2:
        raise ValueError("half reduction needs dim >= 2")
    pair = biorthogonal_bases(X, Y)
    h = m // 2
    return Subspace(pair.x_basis[:, :h]), Subspace(pair.y_basis[:, m - h:])


def linear_traversal(X: Subspace, Y: Subspace, a: float, b: float) -> TraversalSegment:
    """Continuous path of subspaces from X at ``a`` to Y at ``b`` inside ``X + Y``."""
    if not a < b:
        raise ValueError(f"traversal needs a < b, got [{a}, {b}]")
    _check_pair(X, Y)
    pair = biorthogonal_bases(X, Y)
    # cosines are >= 0 by construction, so x_i = -y_i never occurs
    dependent = pair.cosines >= 1.0 - PARALLEL_TOL
    antiparallel = np.einsum("ij,ij->j", pair.x_basis, pair.y_basis) <= -1.0 + 1e-6
    if np.any(antiparallel):
        log.warning("antiparallel basis pair in traversal; holding y_i fixed")
        dependent = dependent | antiparallel
    return TraversalSegment(pair.x_basis, pair.y_basis, a, b, dependent)


@dataclass(frozen=True)
class QuadraticCombo:
    """``lam``-quadratic convex combination of ``U_sigma1`` and ``U_sigma2`` in R^n."""

    sigma1: tuple
    sigma2: tuple
    lam: float
    n: int

    def __post_init__(self):
        s1 = tuple(sorted(int(i) for i in self.sigma1))
        s2 = tuple(sorted(int(i) for i in self.sigma2))
        if len(s1) != len(s2) or not s1:
            raise ValueError("index sets must be nonempty and of equal size")
        if set(s1) & set(s2):
            raise ValueError("index sets must be disjoint")
        if min(s1 + s2) < 0 or max(s1 + s2) >= self.n:
            raise ValueError("index out of range")
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError(f"lambda must lie in [0, 1], got {self.lam}")
        object.__setattr__(self, "sigma1", s1)
        object.__setattr__(self, "sigma2", s2)

    def vectors(self) -> np.ndarray:
        W = np.zeros((self.n, len(self.sigma1)))
        k = np.arange(len(self.sigma1))
        W[list(self.sigma1), k] = np.sqrt(self.lam)
        W[list(self.sigma2), k] = np.sqrt(1.0 - self.lam)
        return W


def quadratic_combination(combo: QuadraticCombo) -> Subspace:
    return Subspace(combo.vectors())


def column_switch_segment(sigma1, sigma2, n: int, a: float, b: float) -> SwitchSegment:
    """Segment equal to the ``1 - (t-a)/(b-a)`` quadratic combination at each t."""
    s1 = tuple(sorted(int(i) for i in sigma1))
    s2 = tuple(sorted(int(i) for i in sigma2))
    QuadraticCombo(s1, s2, 1.0, n)  # validates the index sets
    return SwitchSegment(s1, s2, n, a, b)


def is_quadratic_frame(W: np.ndarray, sigma1, sigma2, tol: float = 1e-10) -> bool:
    """True if ``W`` is exactly a quadratic-combination frame for some lambda."""
    s1, s2 = sorted(sigma1), sorted(sigma2)
    n, m = W.shape
    if m != len(s1) or m != len(s2):
        return False
    outside = np.ones(n, dtype=bool)
    outside[s1 + s2] = False
    if np.abs(W[outside]).max(initial=0.0) > tol:
        return False
    a = W[s1, np.arange(m)]
    lam = float(a[0] ** 2)
    expected = QuadraticCombo(tuple(s1), tuple(s2), min(max(lam, 0.0), 1.0), n).vectors()
    return float(np.abs(W - expected).max()) <= tol


def coordinate_union(sigma1, sigma2, n: int) -> Subspace:
    return coordinate_subspace(set(sigma1) | set(sigma2), n)
