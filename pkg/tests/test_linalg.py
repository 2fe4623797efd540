import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from resinv import (
    DependentColumns,
    DimensionMismatch,
    Subspace,
    coordinate_subspace,
    hs_norm,
    min_stretch,
    operator_norm,
    orthonormalize,
    projection_of,
    restricted_min_stretch,
    subspace_distance,
)
from resinv.linalg import containment_residual, span_sum

seeds = st.integers(0, 2**31 - 1)


def test_operator_norm_identity_and_diagonal():
    assert operator_norm(np.eye(3)) == pytest.approx(1.0, abs=1e-15)
    assert operator_norm(np.diag([1.0, 2.0, 3.0])) == pytest.approx(3.0, abs=1e-15)
    assert operator_norm(np.zeros((2, 3))) == 0.0


def test_operator_norm_matches_power_iteration():
    M = oracles.random_matrix(5, 5)
    assert operator_norm(M) == pytest.approx(oracles.power_norm(M), abs=1e-9)


def test_min_stretch_examples():
    assert min_stretch(np.eye(4)) == pytest.approx(1.0)
    e1 = np.array([1.0, 0.0, 0.0])
    assert min_stretch(np.column_stack([e1, e1])) == 0.0


def test_min_stretch_matches_eigen_oracle_and_sampling():
    M = oracles.random_matrix(6, 6)
    val = min_stretch(M)
    assert val == pytest.approx(oracles.eig_min_stretch(M), abs=1e-9)
    assert val <= oracles.sampled_min_norm(M, 100_000, seed=1) + 1e-12


def test_min_stretch_wide_matrix_is_zero():
    assert min_stretch(oracles.random_matrix(1, 2, 5)) == 0.0


def test_hs_norm_examples():
    A = oracles.random_unit_columns(3, 7)
    assert hs_norm(A) == pytest.approx(np.sqrt(7), abs=1e-12)
    assert hs_norm(np.ones((2, 2))) == 2.0
    M = oracles.random_matrix(4, 4, 7)
    assert hs_norm(M) == pytest.approx(np.sqrt(sum(x * x for x in M.ravel())), rel=1e-14)


def test_restricted_min_stretch_examples():
    M = np.diag([5.0, 0.1])
    assert restricted_min_stretch(M, coordinate_subspace([0], 2)) == pytest.approx(5.0)
    R = oracles.random_matrix(8, 4)
    assert restricted_min_stretch(R, coordinate_subspace(range(4), 4)) == pytest.approx(
        min_stretch(R), abs=1e-14
    )


def test_restricted_min_stretch_random_subspace():
    M = oracles.random_matrix(9, 6)
    W = oracles.random_frame(10, 6, 3)
    val = restricted_min_stretch(M, Subspace(W))
    assert val == pytest.approx(oracles.eig_min_stretch(M @ W), abs=1e-9)
    assert val <= oracles.sampled_min_norm(M, 100_000, seed=2, W=W) + 1e-12


def test_restricted_min_stretch_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        restricted_min_stretch(np.eye(3), coordinate_subspace([0], 4))


def test_orthonormalize_examples():
    Q = orthonormalize(np.eye(3)[:, :2]).basis
    assert np.allclose(Q, np.eye(3)[:, :2])
    V = np.array([[2.0, 1.0], [0.0, 1.0], [0.0, 0.0]])
    assert np.allclose(orthonormalize(V).basis, np.eye(3)[:, :2], atol=1e-15)


def test_orthonormalize_preserves_span():
    V = oracles.random_matrix(12, 8, 4)
    Q = orthonormalize(V).basis
    assert np.abs(Q.T @ Q - np.eye(4)).max() < 1e-14
    assert oracles.projection_gap(Q @ Q.T, oracles.range_projector(V)) < 1e-9


def test_orthonormalize_rejects_dependent_columns():
    v = np.array([1.0, 2.0, 3.0])
    with pytest.raises(DependentColumns):
        orthonormalize(np.column_stack([v, 2 * v]))


def test_projection_examples():
    P = projection_of(coordinate_subspace([0], 2))
    assert np.array_equal(P, [[1.0, 0.0], [0.0, 0.0]])
    assert np.array_equal(projection_of(coordinate_subspace(range(3), 3)), np.eye(3))


@given(seeds, st.integers(2, 10), st.data())
def test_projection_residuals(seed, n, data):
    m = data.draw(st.integers(1, n))
    P = projection_of(Subspace(oracles.random_frame(seed, n, m)))
    assert np.abs(P @ P - P).max() < 1e-10
    assert np.abs(P - P.T).max() < 1e-10
    assert abs(np.trace(P) - m) < 1e-10


def test_subspace_distance_examples():
    e1 = coordinate_subspace([0], 2)
    e2 = coordinate_subspace([1], 2)
    assert subspace_distance(e1, e1) == 0.0
    assert subspace_distance(e1, e2) == pytest.approx(1.0)
    th = np.pi / 6
    line = Subspace(np.array([[np.cos(th)], [np.sin(th)]]))
    assert subspace_distance(e1, line) == pytest.approx(0.5, abs=1e-12)


def test_subspace_rejects_bad_bases():
    with pytest.raises(ValueError):
        Subspace(np.array([[1.0, 1.0], [0.0, 1.0]]))
    with pytest.raises(ValueError):
        Subspace(np.zeros((3, 0)))
    with pytest.raises(ValueError):
        Subspace(np.array([[np.nan], [0.0]]))


def test_subspace_basis_is_read_only():
    U = coordinate_subspace([0, 1], 3)
    with pytest.raises(ValueError):
        U.basis[0, 0] = 2.0


@given(seeds, st.integers(1, 8), st.integers(1, 8))
def test_norm_chain(seed, rows, cols):
    M = oracles.random_matrix(seed, rows, cols)
    r = np.linalg.matrix_rank(M)
    assert min_stretch(M) <= operator_norm(M) + 1e-9
    assert operator_norm(M) <= hs_norm(M) + 1e-9
    assert hs_norm(M) <= np.sqrt(r) * operator_norm(M) + 1e-9


@given(seeds, st.integers(2, 9), st.data())
def test_restriction_cannot_lower_stretch(seed, n, data):
    m = data.draw(st.integers(1, n))
    M = oracles.random_matrix(seed, n)
    U = Subspace(oracles.random_frame(seed + 1, n, m))
    assert restricted_min_stretch(M, U) >= min_stretch(M) - 1e-12


@given(seeds, st.integers(2, 9), st.data())
def test_restricted_stretch_basis_invariant(seed, n, data):
    m = data.draw(st.integers(1, n))
    M = oracles.random_matrix(seed, n)
    W = oracles.random_frame(seed + 1, n, m)
    Q = oracles.random_frame(seed + 2, m, m)
    assert restricted_min_stretch(M, Subspace(W)) == pytest.approx(
        restricted_min_stretch(M, Subspace(W @ Q)), abs=1e-9
    )


@given(seeds, st.integers(2, 8), st.data())
def test_distance_triangle_and_symmetry(seed, n, data):
    dims = [data.draw(st.integers(1, n)) for _ in range(3)]
    U, V, X = (Subspace(oracles.random_frame(seed + i, n, d)) for i, d in enumerate(dims))
    assert subspace_distance(U, V) == pytest.approx(subspace_distance(V, U), abs=1e-14)
    assert subspace_distance(U, X) <= subspace_distance(U, V) + subspace_distance(V, X) + 1e-9
    if dims[0] == dims[1]:
        assert subspace_distance(U, V) <= 1 + 1e-12


def test_containment_and_span_sum():
    U = coordinate_subspace([0], 3)
    V = coordinate_subspace([1], 3)
    S = span_sum(U, V)
    assert S.dim == 2
    assert containment_residual(U, S) < 1e-15
    assert containment_residual(coordinate_subspace([2], 3), S) == pytest.approx(1.0)
