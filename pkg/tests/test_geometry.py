import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from resinv import DimensionMismatch, Subspace, coordinate_subspace, restricted_min_stretch, subspace_distance
from resinv.geometry import (
    QuadraticCombo,
    biorthogonal_bases,
    column_switch_segment,
    half_reduction,
    is_quadratic_frame,
    linear_traversal,
    quadratic_combination,
)
from resinv.linalg import containment_residual, span_sum

seeds = st.integers(0, 2**31 - 1)


def random_pair(seed, n, m):
    return Subspace(oracles.random_frame(seed, n, m)), Subspace(oracles.random_frame(seed + 7, n, m))


def test_biorthogonal_equal_spaces():
    X = coordinate_subspace([0, 1], 4)
    pair = biorthogonal_bases(X, X)
    assert pair.max_off_diagonal() < 1e-8
    assert np.allclose(np.abs(np.diag(pair.cross_gram())), 1.0)


def test_biorthogonal_orthogonal_spaces():
    pair = biorthogonal_bases(coordinate_subspace([0, 1], 4), coordinate_subspace([2, 3], 4))
    assert np.abs(pair.cross_gram()).max() < 1e-8


def test_biorthogonal_random_case():
    X, Y = random_pair(1, 8, 3)
    pair = biorthogonal_bases(X, Y)
    assert pair.max_off_diagonal() < 1e-8
    for B, S in ((pair.x_basis, X), (pair.y_basis, Y)):
        assert np.abs(B.T @ B - np.eye(3)).max() < 1e-12
        assert subspace_distance(Subspace(B), S) < 1e-9


def test_biorthogonal_rejects_mismatch():
    with pytest.raises(DimensionMismatch):
        biorthogonal_bases(coordinate_subspace([0], 3), coordinate_subspace([0, 1], 3))
    with pytest.raises(DimensionMismatch):
        biorthogonal_bases(coordinate_subspace([0], 3), coordinate_subspace([0], 4))


def test_biorthogonal_cosines_nonnegative_and_sorted():
    X, Y = random_pair(5, 10, 4)
    pair = biorthogonal_bases(X, Y)
    d = np.diag(pair.cross_gram())
    assert np.all(d >= -1e-15)
    assert np.all(np.diff(pair.cosines) <= 1e-15)


@given(seeds, st.integers(4, 20), st.data())
def test_biorthogonal_property(seed, n, data):
    m = data.draw(st.integers(1, n // 2))
    X, Y = random_pair(seed, n, m)
    pair = biorthogonal_bases(X, Y)
    assert pair.max_off_diagonal() < 1e-8
    assert subspace_distance(Subspace(pair.x_basis), X) < 1e-9
    assert subspace_distance(Subspace(pair.y_basis), Y) < 1e-9


def test_half_reduction_orthogonal_inputs():
    X = coordinate_subspace([0, 1, 2, 3], 8)
    Y = coordinate_subspace([4, 5, 6, 7], 8)
    Xt, Yt = half_reduction(X, Y)
    assert np.abs(Xt.basis.T @ Yt.basis).max() < 1e-8


def test_half_reduction_equal_plane():
    X = coordinate_subspace([0, 1], 3)
    Xt, Yt = half_reduction(X, X)
    assert Xt.dim == Yt.dim == 1
    assert abs(float(Xt.basis[:, 0] @ Yt.basis[:, 0])) < 1e-12
    assert containment_residual(Xt, X) < 1e-12 and containment_residual(Yt, X) < 1e-12


def test_half_reduction_random():
    X, Y = random_pair(3, 16, 6)
    Xt, Yt = half_reduction(X, Y)
    assert Xt.dim == Yt.dim == 3
    assert containment_residual(Xt, X) < 1e-9
    assert containment_residual(Yt, Y) < 1e-9
    assert np.abs(Xt.basis.T @ Yt.basis).max() < 1e-8


def test_half_reduction_needs_two_dims():
    with pytest.raises(ValueError):
        half_reduction(coordinate_subspace([0], 3), coordinate_subspace([1], 3))


@given(seeds, st.integers(4, 20), st.data())
def test_half_reduction_property(seed, n, data):
    m = data.draw(st.integers(2, n // 2))
    X, Y = random_pair(seed, n, m)
    Xt, Yt = half_reduction(X, Y)
    assert Xt.dim == Yt.dim == m // 2
    assert containment_residual(Xt, X) < 1e-9
    assert containment_residual(Yt, Y) < 1e-9
    assert np.abs(Xt.basis.T @ Yt.basis).max() < 1e-8


def test_traversal_equal_spaces_is_constant():
    X = Subspace(oracles.random_frame(2, 5, 2))
    seg = linear_traversal(X, X, 0.0, 1.0)
    for t in np.linspace(0, 1, 50):
        assert subspace_distance(seg.subspace(t), X) < 1e-8


def test_traversal_lines_midpoint():
    seg = linear_traversal(coordinate_subspace([0], 2), coordinate_subspace([1], 2), 0.0, 1.0)
    v = seg.frame(0.5)[:, 0]
    assert np.allclose(np.abs(v), [2**-0.5, 2**-0.5])


def test_traversal_rejects_bad_interval():
    X = coordinate_subspace([0], 2)
    with pytest.raises(ValueError):
        linear_traversal(X, X, 1.0, 1.0)
    with pytest.raises(DimensionMismatch):
        linear_traversal(X, coordinate_subspace([0, 1], 2), 0.0, 1.0)


def test_traversal_random_endpoints_and_containment():
    X, Y = random_pair(4, 6, 2)
    seg = linear_traversal(X, Y, -1.0, 2.0)
    S = span_sum(X, Y)
    assert subspace_distance(seg.subspace(-1.0), X) < 1e-8
    assert subspace_distance(seg.subspace(2.0), Y) < 1e-8
    for t in np.linspace(-1, 2, 50):
        U = seg.subspace(t)
        assert U.dim == 2
        assert containment_residual(U, S) < 1e-9


@given(seeds, st.integers(3, 12), st.data())
def test_traversal_is_lipschitz(seed, n, data):
    m = data.draw(st.integers(1, n // 2))
    X, Y = random_pair(seed, n, m)
    seg = linear_traversal(X, Y, 0.0, 1.0)
    h = 1e-3
    ts = np.linspace(0, 1 - h, 40)
    jumps = [subspace_distance(seg.subspace(t), seg.subspace(t + h)) for t in ts]
    assert max(jumps) <= 0.02


def test_quadratic_combination_examples():
    s1, s2 = (0, 2), (1, 3)
    assert subspace_distance(quadratic_combination(QuadraticCombo(s1, s2, 1.0, 4)),
                             coordinate_subspace(s1, 4)) < 1e-15
    assert subspace_distance(quadratic_combination(QuadraticCombo(s1, s2, 0.0, 4)),
                             coordinate_subspace(s2, 4)) < 1e-15
    U = quadratic_combination(QuadraticCombo((0,), (1,), 0.5, 3))
    assert np.allclose(U.basis[:, 0], [2**-0.5, 2**-0.5, 0.0])


def test_quadratic_combo_validation():
    with pytest.raises(ValueError):
        QuadraticCombo((0, 1), (1, 2), 0.5, 3)
    with pytest.raises(ValueError):
        QuadraticCombo((0,), (1, 2), 0.5, 3)
    with pytest.raises(ValueError):
        QuadraticCombo((0,), (1,), 1.5, 3)


@given(st.integers(1, 5), st.floats(0, 1), st.integers(0, 1000))
def test_quadratic_vectors_orthonormal(m, lam, seed):
    idx = oracles.rng(seed).permutation(2 * m + 3)
    combo = QuadraticCombo(tuple(idx[:m]), tuple(idx[m:2 * m]), lam, 2 * m + 3)
    W = combo.vectors()
    assert np.abs(W.T @ W - np.eye(m)).max() < 1e-12


def test_column_switch_endpoints_and_midpoint():
    seg = column_switch_segment((0, 2), (1, 3), 5, 0.0, 2.0)
    assert subspace_distance(seg.subspace(0.0), coordinate_subspace((0, 2), 5)) < 1e-15
    assert subspace_distance(seg.subspace(2.0), coordinate_subspace((1, 3), 5)) < 1e-15
    W = seg.frame(1.0)
    r = 2**-0.5
    expected = np.array([[r, 0], [r, 0], [0, r], [0, r], [0, 0]])
    assert np.allclose(W, expected, atol=1e-15)
    assert is_quadratic_frame(W, (0, 2), (1, 3))


@given(seeds, st.integers(4, 10), st.data())
def test_switch_preserves_certified_bound(seed, n, data):
    m = data.draw(st.integers(1, n // 2))
    perm = oracles.rng(seed).permutation(n)
    s1, s2 = tuple(perm[:m]), tuple(perm[m:2 * m])
    A = oracles.random_unit_columns(seed, n)
    c = restricted_min_stretch(A, coordinate_subspace(s1 + s2, n))
    seg = column_switch_segment(s1, s2, n, 0.0, 1.0)
    for t in np.linspace(0, 1, 25):
        assert restricted_min_stretch(A, seg.subspace(t)) >= c - 1e-9
