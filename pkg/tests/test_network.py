# Path from repo root: tests/test_network.py
from __future__ import annotations

import math

import numpy as np
import pytest

from app.core.errors import ConfigError, DimensionMismatchError
from app.core.numerics import ascending_sum
from app.data.dataset import sample_sphere_cap
from app.net.network import (
    ActiveSet,
    InitialSnapshot,
    NetworkParams,
    coupling_gap,
    count_indicator_flips,
    decompose_f,
    dense_grad_loss,
    exact_active_set,
    forward_dense,
    forward_sparse,
    grad_loss_sparse,
    init_params,
    input_gradient,
    output_scale,
    perturb_columns,
    preactivations,
    pseudo_forward,
    shifted_relu,
    shifted_relu_grad,
)
from app.net.norms import column_norms, norm_2inf, norm_21
from app.trainer.loss import AbsoluteLoss


def test_shifted_relu_is_strict_at_threshold():
    assert shifted_relu(0.5, 0.5) == 0.0
    assert shifted_relu(0.5000001, 0.5) == 0.5000001
    assert shifted_relu_grad(0.5, 0.5) == 0.0
    assert shifted_relu_grad(0.6, 0.5) == 1.0
    np.testing.assert_array_equal(shifted_relu(np.array([-1.0, 0.0, 2.0]), 0.0), [0.0, 0.0, 2.0])


def test_init_is_deterministic_and_scaled():
    p1, s1 = init_params(256, 5, 0.0, seed=7)
    p2, _ = init_params(256, 5, 0.0, seed=7)
    p3, _ = init_params(256, 5, 0.0, seed=8)
    np.testing.assert_array_equal(p1.W, p2.W)
    assert not np.array_equal(p1.W, p3.W)
    assert p1.W.shape == (5, 256)
    np.testing.assert_allclose(np.abs(p1.a), output_scale(256))
    np.testing.assert_array_equal(s1.W0, p1.W)
    assert not s1.W0.flags.writeable


def test_init_rejects_bad_arguments():
    with pytest.raises(ConfigError):
        init_params(0, 4, 0.0, seed=0)
    with pytest.raises(ConfigError):
        init_params(8, 1, 0.0, seed=0)
    with pytest.raises(ConfigError):
        init_params(8, 4, -0.1, seed=0)


def test_a_and_b_are_read_only(small_net):
    params, _ = small_net
    with pytest.raises(ValueError):
        params.a[0] = 1.0
    with pytest.raises(ValueError):
        params.b[0] = 1.0


def test_sparse_forward_matches_dense_bitwise(small_net, rng):
    params, _ = small_net
    for _ in range(20):
        x = sample_sphere_cap(params.d, rng)
        active = exact_active_set(params, x)
        assert forward_sparse(params, x, active) == forward_dense(params, x)


def test_forward_sums_terms_left_to_right(small_net, rng):
    params, _ = small_net
    x = sample_sphere_cap(params.d, rng)
    terms = params.a * shifted_relu(preactivations(params, x), params.tau)
    acc = 0.0
    for t in terms:
        acc = acc + float(t)
    assert forward_dense(params, x) == acc


def test_ascending_sum_ignores_zero_terms():
    assert ascending_sum([]) == 0.0
    vals = [0.1, 1e16, -1e16, 0.3]
    padded = [0.0, 0.1, -0.0, 1e16, 0.0, -1e16, -0.0, 0.3]
    assert ascending_sum(padded) == ascending_sum(vals)
    assert ascending_sum(vals) == ((0.1 + 1e16) - 1e16) + 0.3
    assert math.copysign(1.0, ascending_sum([-0.0])) == 1.0


def test_empty_active_set_gives_zero_output_and_gradient(small_net, rng):
    params, _ = small_net
    x = sample_sphere_cap(params.d, rng)
    assert forward_sparse(params, x, ActiveSet.empty()) == 0.0
    g = grad_loss_sparse(params, x, 1.0, ActiveSet.empty(), AbsoluteLoss())
    assert len(g) == 0
    assert not np.any(g.to_dense(params.m))


def test_huge_tau_has_empty_active_sets(rng):
    params, _ = init_params(32, 4, 100.0, seed=0)
    x = sample_sphere_cap(4, rng)
    assert len(exact_active_set(params, x)) == 0
    assert forward_dense(params, x) == 0.0


def test_sparse_gradient_matches_dense(small_net, rng):
    params, _ = small_net
    loss = AbsoluteLoss()
    for _ in range(10):
        x = sample_sphere_cap(params.d, rng)
        active = exact_active_set(params, x)
        sparse = grad_loss_sparse(params, x, 0.3, active, loss).to_dense(params.m)
        np.testing.assert_array_equal(sparse, dense_grad_loss(params, x, 0.3, loss))


def test_input_gradient_sparse_and_dense_agree(small_net, rng):
    params, _ = small_net
    x = sample_sphere_cap(params.d, rng)
    np.testing.assert_array_equal(input_gradient(params, x), input_gradient(params, x, exact_active_set(params, x)))


def test_dimension_mismatch(small_net):
    params, _ = small_net
    with pytest.raises(DimensionMismatchError):
        forward_dense(params, np.ones(params.d + 1))
    with pytest.raises(DimensionMismatchError):
        NetworkParams(4, 3, np.ones(4), np.ones((3, 5)), np.ones(4), 0.0)


def test_active_set_validation():
    with pytest.raises(ValueError):
        ActiveSet(np.array([3, 1]))
    s = ActiveSet.from_iterable([5, 1, 5, 2])
    assert list(s) == [1, 2, 5]
    assert 2 in s and 3 not in s
    assert s == ActiveSet(np.array([1, 2, 5]))


def test_decomposition_sums_to_f_at_tau_zero(small_net, rng):
    params, snapshot = small_net
    perturb_columns(params, snapshot, 0.05, rng)
    for _ in range(10):
        x = sample_sphere_cap(params.d, rng)
        A, B, C = decompose_f(params, snapshot, x)
        assert math.isclose(A + B + C, forward_dense(params, x), rel_tol=1e-12, abs_tol=1e-12)


def test_pseudo_network_equals_f_minus_init_part_without_flips(small_net, rng):
    params, snapshot = small_net
    x = sample_sphere_cap(params.d, rng)
    assert pseudo_forward(params, snapshot, x) == 0.0
    assert count_indicator_flips(params, snapshot, x) == 0
    assert coupling_gap(params, snapshot, [x]) == pytest.approx(abs(forward_dense(params, x)), abs=1e-15)


def test_snapshot_delta(small_net):
    params, snapshot = small_net
    params.W[:, 3] += 1.0
    delta = snapshot.delta(params)
    assert np.count_nonzero(np.any(delta != 0.0, axis=0)) == 1
    assert isinstance(InitialSnapshot.of(params), InitialSnapshot)


def test_norms():
    M = np.array([[3.0, 0.0], [4.0, 1.0]])
    np.testing.assert_allclose(column_norms(M), [5.0, 1.0])
    assert norm_2inf(M) == 5.0
    assert norm_21(M) == 6.0
