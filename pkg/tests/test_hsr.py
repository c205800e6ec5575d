# Path from repo root: tests/test_hsr.py
from __future__ import annotations

import hypothesis.strategies as hys
import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings

from app.core.errors import (
    DimensionMismatchError,
    DuplicateIdError,
    LiveIdError,
    MissingIdError,
)
from app.data.dataset import sample_sphere_cap
from app.hsr.config import IndexConfig
from app.hsr.index import HsrIndex
from app.hsr.points import LiftedPoint, brute_force_query, lift_columns, lift_params, lift_query
from app.net.network import exact_active_set, init_params


def _random_points(rng, m, dim, scale=1.0):
    return [LiftedPoint(i, rng.normal(0.0, scale, size=dim)) for i in range(m)]


def test_query_matches_brute_force_on_network(small_net, rng):
    params, _ = small_net
    index = HsrIndex.build(lift_params(params), config=IndexConfig(leaf_size=4))
    for _ in range(25):
        x = sample_sphere_cap(params.d, rng)
        assert index.query(lift_query(x), params.tau) == exact_active_set(params, x)


def test_from_arrays_equals_build(rng):
    P = rng.normal(size=(50, 4))
    a = HsrIndex.from_arrays(np.arange(50), P, config=IndexConfig(leaf_size=3))
    b = HsrIndex.build([LiftedPoint(i, P[i]) for i in range(50)], config=IndexConfig(leaf_size=3))
    q = rng.normal(size=4)
    assert a.query(q, 0.1) == b.query(q, 0.1) == brute_force_query(P, q, 0.1)


def test_empty_index_and_threshold_extremes(rng):
    index = HsrIndex()
    assert len(index.query(np.ones(3), 0.0)) == 0
    pts = _random_points(rng, 40, 3)
    index = HsrIndex.build(pts)
    q = rng.normal(size=3)
    assert len(index.query(q, 1e9)) == 0
    assert list(index.query(q, -1e9)) == list(range(40))


def test_insert_remove_errors(rng):
    index = HsrIndex.build(_random_points(rng, 10, 3))
    with pytest.raises(LiveIdError):
        index.insert(LiftedPoint(3, np.zeros(3)))
    index.remove(3)
    with pytest.raises(MissingIdError):
        index.remove(3)
    index.insert(LiftedPoint(3, np.zeros(3)))
    assert 3 in index
    with pytest.raises(DimensionMismatchError):
        index.insert(LiftedPoint(99, np.zeros(4)))
    with pytest.raises(DuplicateIdError):
        HsrIndex.build([LiftedPoint(1, np.zeros(3)), LiftedPoint(1, np.ones(3))])


def test_remove_then_reinsert_same_id_is_queryable(rng):
    index = HsrIndex.build(_random_points(rng, 30, 3), config=IndexConfig(leaf_size=2))
    index.remove(7)
    index.insert(LiftedPoint(7, np.array([10.0, 0.0, 0.0])))
    assert 7 in index.query(np.array([1.0, 0.0, 0.0]), 5.0)
    index.check_invariants()


def test_update_moves_points_and_keeps_invariants(small_net, rng):
    params, _ = small_net
    index = HsrIndex.build(lift_params(params), config=IndexConfig(leaf_size=4))
    ids = np.array([0, 5, 9, 40])
    params.W[:, ids] += rng.normal(0.0, 0.5, size=(params.d, ids.size))
    index.update(ids, lift_columns(params.W, params.b, ids))
    index.check_invariants()
    for _ in range(10):
        x = sample_sphere_cap(params.d, rng)
        assert index.query(lift_query(x), params.tau) == exact_active_set(params, x)


def test_update_unknown_id_raises(rng):
    index = HsrIndex.build(_random_points(rng, 5, 3))
    with pytest.raises(MissingIdError):
        index.update([17], np.zeros((1, 3)))


def test_query_stats_are_recorded(rng):
    index = HsrIndex.build(_random_points(rng, 200, 4), config=IndexConfig(leaf_size=8))
    res = index.query_with_stats(rng.normal(size=4), 2.0)
    assert res.visits >= 1
    assert res.reported == len(res.active)
    s = index.stats()
    assert s["live"] == 200 and s["queries"] == 1 and s["visits_total"] == res.visits


def test_pruning_decisions_are_sound(rng):
    index = HsrIndex.build(_random_points(rng, 300, 5), config=IndexConfig(leaf_size=4))
    for _ in range(10):
        index.query(rng.normal(size=5), float(rng.normal()), check_pruning=True)


def test_rebuild_preserves_answers(rng):
    pts = _random_points(rng, 120, 3)
    index = HsrIndex.build(pts, config=IndexConfig(leaf_size=4))
    for pid in range(0, 120, 3):
        index.remove(pid)
    q = rng.normal(size=3)
    before = index.query(q, 0.2)
    index.rebuild()
    index.check_invariants()
    assert index.query(q, 0.2) == before


@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(
    seed=hys.integers(min_value=0, max_value=2**31 - 1),
    dim=hys.integers(min_value=2, max_value=8),
    leaf_size=hys.integers(min_value=1, max_value=16),
    ops=hys.lists(hys.tuples(hys.booleans(), hys.floats(min_value=-1.0, max_value=1.0)), max_size=60),
)
def test_interleaved_updates_match_brute_force(seed, dim, leaf_size, ops):
    rng = np.random.default_rng(seed)
    points = {i: rng.normal(size=dim) for i in range(20)}
    index = HsrIndex.build(
        [LiftedPoint(i, p) for i, p in points.items()],
        config=IndexConfig(leaf_size=leaf_size, rebuild_fraction=0.3, seed=seed),
    )
    next_id = 20
    for insert, tau in ops:
        if insert or not points:
            p = rng.normal(size=dim)
            index.insert(LiftedPoint(next_id, p))
            points[next_id] = p
            next_id += 1
        else:
            victim = sorted(points)[int(rng.integers(len(points)))]
            index.remove(victim)
            del points[victim]
        q = rng.normal(size=dim)
        expected = brute_force_query([LiftedPoint(i, p) for i, p in points.items()], q, tau)
        assert index.query(q, tau) == expected
    index.check_invariants()
    assert len(index) == len(points)


def test_zero_query_reports_nothing(rng):
    index = HsrIndex.build(_random_points(rng, 60, 4), config=IndexConfig(leaf_size=4))
    assert len(index.query(np.zeros(4), 0.0)) == 0


def test_tight_cluster_is_reported_in_bulk(rng):
    center = np.array([1.0, 0.0, 0.0, 0.0])
    pts = [LiftedPoint(i, center + rng.normal(0.0, 1e-3, size=4)) for i in range(30)]
    index = HsrIndex.build(pts, config=IndexConfig(leaf_size=4))
    res = index.query_with_stats(center, 0.5)
    assert list(res.active) == list(range(30))
    assert res.bulk_reported == 30
