import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from resinv import subspace_distance
from resinv.errors import (
    NoOverlap,
    NotAProjection,
    OutOfDomain,
    RankChanged,
    RankMismatch,
    RefinementLimit,
    SpanMismatch,
)
from resinv.generators import (
    gen_unit_column_path,
    lipschitz_constant,
    path_from_json,
    rank_step_projection,
    rotating_projection,
    rotation_path,
    spectral_path,
)
from resinv.linalg import Subspace, orthonormalize
from resinv.paths import (
    VALIDATE_DENSITY,
    Grid,
    MatrixPath,
    check_projection,
    constant_path,
    continuous_basis_from_projections,
    discretize,
    local_basis,
    pivot_columns,
    projection_path_roundtrip,
    samples_path,
    stitch_bases,
)
from resinv.segments import BasisPiece, ConstantSegment, ExplicitSegment


def _range(P):
    # range oracle from the SVD, independent of the pivoted-column bases
    U, s, _ = np.linalg.svd(P)
    return Subspace(U[:, : int(np.sum(s > 0.5))])


# evaluation


def test_constant_path_eval():
    M = oracles.random_matrix(1, 3, 4)
    P = constant_path(M, (0, 2))
    for t in (0.0, 0.7, 2.0):
        assert np.array_equal(P.eval(t), M)


def test_samples_path_exact_at_knots_and_linear_between():
    Ms = [oracles.random_matrix(s, 2, 3) for s in range(3)]
    P = samples_path([0.0, 1.0, 3.0], Ms)
    for t, M in zip((0.0, 1.0, 3.0), Ms):
        assert np.array_equal(P.eval(t), M)
    assert np.allclose(P.eval(2.0), 0.5 * (Ms[1] + Ms[2]), atol=1e-15)


def test_samples_path_validation():
    with pytest.raises(ValueError):
        samples_path([0.0, 0.0, 1.0], [np.eye(2)] * 3)
    with pytest.raises(ValueError):
        samples_path([0.0, 1.0], [np.eye(2), np.eye(3)])


def test_rotation_closed_form():
    R = rotation_path(2)
    assert np.allclose(R.eval(math.pi / 2), [[0.0, -1.0], [1.0, 0.0]], atol=1e-15)
    t = 0.3
    assert np.allclose(R.eval(t), [[math.cos(t), -math.sin(t)], [math.sin(t), math.cos(t)]], atol=1e-14)


def test_out_of_domain():
    P = constant_path(np.eye(2), (0, 1))
    with pytest.raises(OutOfDomain):
        P.eval(1.5)
    with pytest.raises(ValueError):
        MatrixPath((1.0, 1.0), (2, 2), lambda t: np.eye(2))


def test_eval_many_matches_eval():
    P = gen_unit_column_path(5, seed=3)
    ts = np.linspace(0, 1, 7)
    batch = P.eval_many(ts)
    for t, M in zip(ts, batch):
        assert np.allclose(P.eval(t), M, atol=1e-14)


def test_generator_columns_stay_unit():
    P = gen_unit_column_path(6, seed=1)
    norms = np.linalg.norm(P.eval_many(np.linspace(0, 1, 50)), axis=1)
    assert np.abs(norms - 1).max() < 1e-12


def test_json_samples_round_trip():
    obj = {"kind": "samples", "t": [0, 1], "matrices": [[[1, 0], [0, 1]], [[0, 1], [1, 0]]]}
    P = path_from_json(obj)
    assert np.allclose(P.eval(0.5), [[0.5, 0.5], [0.5, 0.5]])
    with pytest.raises(ValueError):
        path_from_json({"kind": "mystery"})


# grid


def test_discretize_constant_path():
    g = discretize(constant_path(np.eye(3), (0, 5)), 0.01)
    assert g.points == (0.0, 5.0)


def test_discretize_rotation_validates_densely():
    R = rotation_path(2, domain=(0, 2 * math.pi))
    g = discretize(R, 0.1)
    assert g.validate(R, 100) <= 0.1
    assert g.is_valid(R, 3 * VALIDATE_DENSITY)


def test_discretize_lipschitz_spacing_suffices():
    P = gen_unit_column_path(6, seed=2)
    L = lipschitz_constant(P)
    eps = 0.05
    a, b = P.domain
    N = math.ceil((b - a) / (eps / (2 * L)))
    assert Grid(tuple(np.linspace(a, b, N + 1)), eps).is_valid(P, 3 * VALIDATE_DENSITY)
    assert discretize(P, eps).is_valid(P, 3 * VALIDATE_DENSITY)


def test_discretize_errors():
    R = rotation_path(2)
    with pytest.raises(ValueError):
        discretize(R, 0.0)
    with pytest.raises(RefinementLimit):
        discretize(R, 1e-4, max_grid=50)


def test_discretize_rough_path_hits_limit():
    step = MatrixPath((0, 1), (1, 1), lambda t: np.array([[0.0 if t < 0.5 else 1.0]]))
    with pytest.raises(RefinementLimit):
        discretize(step, 0.1)


def test_grid_rejects_unsorted():
    with pytest.raises(ValueError):
        Grid((0.0, 0.5, 0.2), 0.1)


@given(st.integers(0, 10_000), st.sampled_from([0.05, 0.1, 0.3]))
@settings(max_examples=10)
def test_grid_soundness_property(seed, eps):
    P = gen_unit_column_path(4, seed=seed, speed=0.5)
    g = discretize(P, eps)
    assert g.validate(P, 3 * VALIDATE_DENSITY) <= eps


# projections and local bases


def test_check_projection():
    assert check_projection(np.diag([1.0, 1.0, 0.0])) == 2
    with pytest.raises(NotAProjection):
        check_projection(np.array([[1.0, 1.0], [0.0, 0.0]]))


def test_local_basis_constant_projection():
    P = constant_path(np.diag([1.0, 1.0, 0.0, 0.0]), (0, 1))
    (lo, hi), seg, cols = local_basis(P, 0.5, 2)
    assert cols == (0, 1)
    assert (lo, hi) == (0.0, 1.0)


def test_local_basis_rotating_line_excludes_degeneration():
    P = rotating_projection(2, 1)
    (lo, hi), seg, cols = local_basis(P, 0.0, 1)
    assert cols == (0,)
    assert lo == 0.0
    assert hi < math.pi / 2
    # column 1 of v v^T has norm |cos t|, which must stay above the threshold
    assert abs(math.cos(hi)) > 1e-6


def test_local_basis_rank_three_matches_range():
    P = rotating_projection(6, 3, seed=4)
    (lo, hi), seg, _ = local_basis(P, math.pi, 3)
    assert lo <= math.pi <= hi
    for t in np.linspace(lo, hi, 40):
        assert subspace_distance(seg.subspace(t), _range(P.eval(t))) < 1e-8


def test_local_basis_rank_mismatch():
    P = constant_path(np.diag([1.0, 0.0]), (0, 1))
    with pytest.raises(RankMismatch):
        local_basis(P, 0.5, 2)


def test_pivot_ties_go_low():
    assert pivot_columns(np.eye(4), 2) == [0, 1]


def _explicit(fn, lo, hi):
    return ExplicitSegment((BasisPiece(lo, hi, fn, np.eye(fn(lo).shape[1])),))


def test_stitch_identical_segments():
    fn = lambda t: np.array([[math.cos(t)], [math.sin(t)]])
    seg = _explicit(fn, 0.0, 1.0)
    out = stitch_bases(seg, seg, 0.5)
    for t in np.linspace(0, 1, 11):
        assert np.allclose(out.raw_basis(t), fn(t), atol=1e-14)


def test_stitch_permuted_columns_continuous():
    fn = lambda t: np.array([[math.cos(t), 0.0], [math.sin(t), 0.0], [0.0, 1.0]])
    perm = lambda t: fn(t)[:, ::-1]
    left, right = _explicit(fn, 0.0, 1.0), _explicit(perm, 0.5, 2.0)
    out = stitch_bases(left, right, 0.7)
    assert np.abs(out.raw_basis(0.7) - fn(0.7)).max() < 1e-8
    after = out.raw_basis(0.7 + 1e-9)
    assert np.abs(after - fn(0.7)).max() < 1e-8


def test_stitch_local_bases_of_rotating_line():
    P = rotating_projection(2, 1)
    (lo1, hi1), s1, _ = local_basis(P, 0.0, 1)
    t1 = 0.5 * (lo1 + hi1) + 0.3
    (lo2, hi2), s2, _ = local_basis(P, t1, 1)
    t0 = 0.5 * (max(lo1, lo2) + min(hi1, hi2))
    out = stitch_bases(s1, s2, t0)
    jump = np.abs(out.raw_basis(t0) - out.raw_basis(t0 + 1e-10)).max()
    assert jump < 1e-8
    for t in np.linspace(out.start, out.end, 60):
        assert subspace_distance(out.subspace(t), _range(P.eval(t))) < 1e-8


def test_stitch_errors():
    a = _explicit(lambda t: np.array([[1.0], [0.0]]), 0.0, 1.0)
    b = _explicit(lambda t: np.array([[0.0], [1.0]]), 0.5, 2.0)
    with pytest.raises(NoOverlap):
        stitch_bases(a, b, 1.5)
    with pytest.raises(SpanMismatch):
        stitch_bases(a, b, 0.7)


# continuous basis


def test_continuous_basis_constant_projection():
    U = continuous_basis_from_projections(constant_path(np.diag([0.0, 1.0, 1.0]), (0, 1)))
    assert len(U.segments) == 1 and isinstance(U.segments[0], ConstantSegment)


@pytest.mark.parametrize("n,k,seed", [(2, 1, None), (5, 3, 1)])
def test_continuous_basis_round_trip(n, k, seed):
    P = rotating_projection(n, k, seed)
    U = continuous_basis_from_projections(P)
    assert U.dim == k
    assert projection_path_roundtrip(P, U, 200) < 1e-7


def test_continuous_frame_has_no_jumps():
    P = rotating_projection(2, 1)
    U = continuous_basis_from_projections(P)
    ts = np.linspace(0, 2 * math.pi, 2001)
    W = np.array([U.continuous_frame(t)[:, 0] for t in ts])
    assert np.abs(np.diff(W, axis=0)).max() < 0.01


def test_rank_change_detected():
    with pytest.raises(RankChanged) as info:
        continuous_basis_from_projections(rank_step_projection(3, 0.5))
    lo, hi = info.value.t_pair
    assert lo < 0.5 <= hi


def test_trace_constant_on_accepted_path():
    P = rotating_projection(4, 2, seed=0)
    tr = [np.trace(M) for M in P.eval_many(np.linspace(*P.domain, 300))]
    assert max(tr) - min(tr) < 1e-6 and abs(tr[0] - 2) < 1e-6


def test_continuity_witness_scales_with_step():
    P = rotating_projection(4, 2, seed=5)
    U = continuous_basis_from_projections(P)
    ts = np.linspace(0.1, 6.0, 30)
    for h in (1e-2, 1e-3):
        worst = max(subspace_distance(U.subspace(t), U.subspace(t + h)) for t in ts)
        # the projection flow has speed 2, so distances grow at most like 2h
        assert worst <= 2 * h + 1e-9


def test_spectral_path_norms():
    P = spectral_path(6, theta=0.5, seed=2)
    for M in P.eval_many(np.linspace(0, 1, 20)):
        s = np.linalg.svd(M, compute_uv=False)
        assert s[0] <= 1 + 1e-12 and s[-1] >= 0.5 - 1e-12
        assert np.all(np.linalg.norm(M, axis=0) >= 0.5 - 1e-12)


def test_orthonormal_frame_of_explicit_segment():
    fn = lambda t: np.array([[1.0, t], [0.0, 1.0], [0.0, 0.0]])
    seg = _explicit(fn, 0.0, 1.0)
    W = seg.frame(0.5)
    assert np.allclose(W.T @ W, np.eye(2), atol=1e-14)
    assert subspace_distance(Subspace(W), orthonormalize(fn(0.5))) < 1e-14
