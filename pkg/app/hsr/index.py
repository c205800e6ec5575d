# Path from repo root: app/hsr/index.py
"""
HsrIndex: exact dynamic half-space range reporting over lifted neuron points.

Layout
------
All node data lives in parallel numpy arrays (centers, radii, children, parent,
live counts, churn) so traversal works on whole tree levels at once. Points live
in a slot table; a leaf owns a small array of slots. Removal marks a slot dead
(tombstone); insertion appends a slot to the leaf whose center is nearest and
grows the balls on the way up. A subtree is rebuilt from its live points when its
churn exceeds `rebuild_fraction` of its size at build time, or when a leaf holds
more than `overflow_factor * leaf_size` slots.

Query
-----
A level-synchronous walk classifies each node ball against the half-space
<q, p> > tau:
  pruned  when <q, c> + r |q| <= tau
  bulk    when <q, c> - r |q| >  tau
with a relative safety margin so float rounding in the bound never decides a
point. Points in undecided leaves are tested with the same ordered kernel the
network uses, so reported sets agree bit-for-bit with dense evaluation.

Concurrency: any number of concurrent queries, or one writer. Writers take the
instance lock; readers do not.
"""
from __future__ import annotations

import logging
import threading
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from app.core.csv_io import write_csv
from app.core.errors import (
    DimensionMismatchError,
    DuplicateIdError,
    IndexCorruptionError,
    LiveIdError,
    MissingIdError,
    check_dim,
)
from app.core.rng import rng_for
from app.hsr.config import IndexConfig
from app.hsr.points import LiftedPoint, half_space_scores, stack_points
from app.net.network import ActiveSet


log = logging.getLogger("hsr")

_RADIUS_SLACK = 1e-12
_MARGIN_REL = 1e-9
_EMPTY = np.empty(0, dtype=np.int64)


@dataclass(frozen=True)
class QueryResult:
    active: ActiveSet
    visits: int
    bulk_reported: int = 0  # ids reported from subtrees classified whole, without a per-point test

    @property
    def reported(self) -> int:
        return len(self.active)


def _grow(arr: np.ndarray, size: int, fill) -> np.ndarray:
    out = np.full((size, *arr.shape[1:]), fill, dtype=arr.dtype)
    out[: arr.shape[0]] = arr
    return out


class HsrIndex:
    def __init__(self, dim: int | None = None, config: IndexConfig | None = None) -> None:
        self.config = config or IndexConfig()
        self._dim: int | None = None
        self._lock = threading.RLock()
        self._stats_lock = threading.Lock()
        self._split_rng = rng_for(self.config.seed, "index")

        # slot table
        self._pts = np.empty((0, 0), dtype=np.float64)
        self._slot_ids = np.empty(0, dtype=np.int64)
        self._live = np.empty(0, dtype=bool)
        self._leaf_of_slot = np.empty(0, dtype=np.int64)
        self._n_slots = 0
        self._free_slots: list[int] = []
        self._slot_of: dict[int, int] = {}

        # node table
        self._centers = np.empty((0, 0), dtype=np.float64)
        self._radii = np.empty(0, dtype=np.float64)
        self._left = np.empty(0, dtype=np.int64)
        self._right = np.empty(0, dtype=np.int64)
        self._parent = np.empty(0, dtype=np.int64)
        self._count = np.empty(0, dtype=np.int64)
        self._size_at_build = np.empty(0, dtype=np.int64)
        self._churn = np.empty(0, dtype=np.int64)
        self._bucket: list[np.ndarray] = []
        self._n_nodes = 0
        self._free_nodes: list[int] = []
        self._root = -1

        self._queries = 0
        self._visits_total = 0
        self._rebuilds = 0

        if dim is not None:
            self._ensure_dim(int(dim))

    # ---------------------------
    # Construction
    # ---------------------------
    @classmethod
    def build(
        cls,
        points: Sequence[LiftedPoint],
        *,
        dim: int | None = None,
        config: IndexConfig | None = None,
    ) -> HsrIndex:
        """Bulk-build from lifted points. Ids must be unique."""
        ids, P = stack_points(list(points))
        if ids.size == 0:
            return cls(dim=dim, config=config)
        return cls.from_arrays(ids, P, dim=dim, config=config)

    @classmethod
    def from_arrays(
        cls,
        ids: np.ndarray,
        P: np.ndarray,
        *,
        dim: int | None = None,
        config: IndexConfig | None = None,
    ) -> HsrIndex:
        ids = np.asarray(ids, dtype=np.int64).reshape(-1)
        P = np.asarray(P, dtype=np.float64)
        if ids.size == 0:
            return cls(dim=dim, config=config)
        if P.ndim != 2 or P.shape[0] != ids.size:
            raise DimensionMismatchError(f"expected {ids.size} lifted rows, got array of shape {P.shape}")
        if dim is not None:
            check_dim("lifted points", P.shape[1], dim)
        uniq, counts = np.unique(ids, return_counts=True)
        if uniq.size != ids.size:
            raise DuplicateIdError(f"duplicate ids in build: {uniq[counts > 1][:10].tolist()}")
        index = cls(dim=P.shape[1], config=config)
        with index._lock:
            slots = index._alloc_slots(ids, P)
            index._root = index._build_subtree(slots, parent=-1)
        log.debug("built index: %d points, %d nodes", ids.size, index._n_nodes)
        return index

    # ---------------------------
    # Introspection
    # ---------------------------
    @property
    def dim(self) -> int | None:
        return self._dim

    def __len__(self) -> int:
        return len(self._slot_of)

    def __contains__(self, pid: object) -> bool:
        return isinstance(pid, (int, np.integer)) and int(pid) in self._slot_of

    def ids(self) -> np.ndarray:
        return np.sort(np.fromiter(self._slot_of.keys(), dtype=np.int64, count=len(self._slot_of)))

    def point(self, pid: int) -> np.ndarray:
        try:
            return self._pts[self._slot_of[int(pid)]].copy()
        except KeyError:
            raise MissingIdError(f"id {pid} is not live in the index") from None

    def live_points(self) -> list[LiftedPoint]:
        return [LiftedPoint(pid, self._pts[slot]) for pid, slot in sorted(self._slot_of.items())]

    # ---------------------------
    # Query
    # ---------------------------
    def query(self, q, tau: float, *, check_pruning: bool = False) -> ActiveSet:
        """Exactly { id : <q, p_id> > tau }, sorted ascending."""
        return self.query_with_stats(q, tau, check_pruning=check_pruning).active

    def query_with_stats(self, q, tau: float, *, check_pruning: bool = False) -> QueryResult:
        qv = np.asarray(q, dtype=np.float64).reshape(-1)
        if self._dim is not None:
            check_dim("query", qv.shape[0], self._dim)
        root = self._root
        if root < 0 or self._count[root] == 0:
            self._record(0)
            return QueryResult(ActiveSet.empty(), 0)

        tau = float(tau)
        qn = float(np.linalg.norm(qv))
        visits = 0
        partial_leaves: list[np.ndarray] = []
        full_leaves: list[np.ndarray] = []
        full_inner: list[np.ndarray] = []
        pruned: list[np.ndarray] = []

        frontier = np.array([root], dtype=np.int64)
        while frontier.size:
            visits += int(frontier.size)
            nodes = frontier[self._count[frontier] > 0]
            c = self._centers[nodes]
            r = self._radii[nodes]
            s = c @ qv
            slack = r * qn + _MARGIN_REL * (np.linalg.norm(c, axis=1) + r) * qn
            is_full = (s - slack) > tau
            is_pruned = ~((s + slack) > tau)
            undecided = ~(is_full | is_pruned)
            if check_pruning:
                pruned.append(nodes[is_pruned])

            bulk = nodes[is_full]
            bulk_leaf = self._left[bulk] < 0
            full_leaves.append(bulk[bulk_leaf])
            full_inner.append(bulk[~bulk_leaf])

            und = nodes[undecided]
            und_leaf = self._left[und] < 0
            partial_leaves.append(und[und_leaf])
            inner = und[~und_leaf]
            frontier = np.concatenate([self._left[inner], self._right[inner]])

        # bulk subtrees: walk down to their leaves without further tests
        inner = np.concatenate(full_inner)
        frontier = np.concatenate([self._left[inner], self._right[inner]])
        while frontier.size:
            visits += int(frontier.size)
            nodes = frontier[self._count[frontier] > 0]
            leaf = self._left[nodes] < 0
            full_leaves.append(nodes[leaf])
            inner = nodes[~leaf]
            frontier = np.concatenate([self._left[inner], self._right[inner]])

        hits: list[np.ndarray] = []
        bulk_slots = self._live_slots_of(np.concatenate(full_leaves))
        if bulk_slots.size:
            hits.append(self._slot_ids[bulk_slots])
        test_slots = self._live_slots_of(np.concatenate(partial_leaves))
        if test_slots.size:
            scores = half_space_scores(self._pts[test_slots], qv)
            hits.append(self._slot_ids[test_slots[scores > tau]])

        if check_pruning:
            self._check_decisions(qv, tau, bulk_slots, np.concatenate(pruned) if pruned else _EMPTY)

        ids = np.sort(np.concatenate(hits)) if hits else _EMPTY
        self._record(visits)
        return QueryResult(ActiveSet(ids), visits, int(bulk_slots.size))

    def _live_slots_of(self, leaves: np.ndarray) -> np.ndarray:
        if leaves.size == 0:
            return _EMPTY
        slots = np.concatenate([self._bucket[i] for i in leaves.tolist()])
        return slots[self._live[slots]]

    def _check_decisions(self, qv: np.ndarray, tau: float, bulk_slots: np.ndarray, pruned: np.ndarray) -> None:
        if bulk_slots.size and not bool(np.all(half_space_scores(self._pts[bulk_slots], qv) > tau)):
            raise IndexCorruptionError("bulk-reported subtree contains a point outside the half-space")
        for node in pruned.tolist():
            slots = self._subtree_slots(node)
            slots = slots[self._live[slots]]
            if slots.size and bool(np.any(half_space_scores(self._pts[slots], qv) > tau)):
                raise IndexCorruptionError(f"pruned node {node} holds a point inside the half-space")

    def _record(self, visits: int) -> None:
        with self._stats_lock:
            self._queries += 1
            self._visits_total += visits

    # ---------------------------
    # Updates
    # ---------------------------
    def insert(self, point: LiftedPoint) -> None:
        """Add a point whose id is not live."""
        with self._lock:
            if point.id in self._slot_of:
                raise LiveIdError(f"id {point.id} is already live in the index")
            self._ensure_dim(point.dim)
            slot = self._alloc_slot(point.id, point.p)
            if self._root < 0:
                self._root = self._build_subtree(np.array([slot], dtype=np.int64), parent=-1)
                return
            leaf = self._descend(point.p)
            self._bucket[leaf] = np.append(self._bucket[leaf], slot)
            self._leaf_of_slot[slot] = leaf
            for node in self._path(leaf):
                self._cover(node, point.p)
                self._count[node] += 1
                self._churn[node] += 1
            self._maintain([leaf])

    def remove(self, pid: int) -> None:
        """Tombstone a live id."""
        with self._lock:
            slot = self._slot_of.pop(int(pid), None)
            if slot is None:
                raise MissingIdError(f"id {pid} is not live in the index")
            self._live[slot] = False
            leaf = int(self._leaf_of_slot[slot])
            for node in self._path(leaf):
                self._count[node] -= 1
                self._churn[node] += 1
            self._maintain([leaf])

    def update(self, ids: Iterable[int], points: np.ndarray) -> int:
        """
        Replace the coordinates of live ids (a remove followed by an insert of the same id).

        Each point stays in its leaf; enclosing balls grow as needed. A move that needed
        no ball growth leaves the tree exact as it is and adds no churn; one that did
        counts as a removal plus an insertion. Returns the number of such moves.
        """
        with self._lock:
            id_arr = np.asarray(list(ids) if not isinstance(ids, np.ndarray) else ids, dtype=np.int64).reshape(-1)
            if id_arr.size == 0:
                return 0
            P = np.asarray(points, dtype=np.float64).reshape(id_arr.size, -1)
            if self._dim is None:
                raise MissingIdError("index is empty")
            check_dim("lifted points", P.shape[1], self._dim)
            if np.unique(id_arr).size != id_arr.size:
                raise DuplicateIdError("duplicate ids in update")
            try:
                slots = np.fromiter((self._slot_of[i] for i in id_arr.tolist()), dtype=np.int64, count=id_arr.size)
            except KeyError as exc:
                raise MissingIdError(f"id {exc.args[0]} is not live in the index") from None

            self._pts[slots] = P
            leaves = self._leaf_of_slot[slots]
            grew = np.zeros(id_arr.size, dtype=bool)
            node = leaves.copy()
            rows = np.arange(id_arr.size)
            while rows.size:
                nd = node[rows]
                dist = np.linalg.norm(P[rows] - self._centers[nd], axis=1)
                out = dist > self._radii[nd]
                if out.any():
                    np.maximum.at(self._radii, nd[out], dist[out] * (1.0 + _RADIUS_SLACK))
                    grew[rows[out]] = True
                node[rows] = self._parent[nd]
                rows = rows[node[rows] >= 0]

            moved = np.flatnonzero(grew)
            if moved.size:
                node = leaves[moved].copy()
                rows = np.arange(moved.size)
                while rows.size:
                    np.add.at(self._churn, node[rows], 2)
                    node[rows] = self._parent[node[rows]]
                    rows = rows[node[rows] >= 0]
                self._maintain(np.unique(leaves[moved]).tolist())
            return int(moved.size)

    def rebuild(self) -> None:
        """Rebuild the whole tree from the live points."""
        with self._lock:
            if self._root >= 0:
                self._rebuild(self._root)

    # ---------------------------
    # Maintenance
    # ---------------------------
    def _path(self, node: int) -> list[int]:
        out = []
        while node >= 0:
            out.append(node)
            node = int(self._parent[node])
        return out

    def _cover(self, node: int, p: np.ndarray) -> None:
        dist = float(np.linalg.norm(p - self._centers[node]))
        if dist > self._radii[node]:
            self._radii[node] = dist * (1.0 + _RADIUS_SLACK)

    def _descend(self, p: np.ndarray) -> int:
        node = self._root
        while self._left[node] >= 0:
            lo, hi = int(self._left[node]), int(self._right[node])
            d_lo = np.linalg.norm(p - self._centers[lo])
            d_hi = np.linalg.norm(p - self._centers[hi])
            node = lo if d_lo <= d_hi else hi
        return node

    def _maintain(self, leaves: Iterable[int]) -> None:
        frac = self.config.rebuild_fraction
        overflow = self.config.overflow_factor * self.config.leaf_size
        targets: set[int] = set()
        for leaf in leaves:
            target = -1
            for node in self._path(int(leaf)):
                if self._churn[node] > frac * max(int(self._size_at_build[node]), 1):
                    target = node
            if target < 0 and self._bucket[leaf].size > overflow:
                target = int(leaf)
            if target >= 0:
                targets.add(target)
        # targets are pairwise disjoint subtrees: each is the top-most qualifying node on its path
        for node in sorted(targets):
            self._rebuild(node)

    def _rebuild(self, node: int) -> None:
        slots = self._subtree_slots(node)
        live = self._live[slots]
        self._free_slots.extend(slots[~live].tolist())
        keep = slots[live]
        parent = int(self._parent[node])
        self._free_subtree(node)
        new = self._build_subtree(keep, parent=parent)
        if parent < 0:
            self._root = new
        elif self._left[parent] == node:
            self._left[parent] = new
        else:
            self._right[parent] = new
        self._rebuilds += 1
        log.debug("rebuilt subtree at node %d: %d live points", node, keep.size)

    def _subtree_slots(self, node: int) -> np.ndarray:
        out: list[np.ndarray] = []
        stack = [node]
        while stack:
            nd = stack.pop()
            if self._left[nd] < 0:
                out.append(self._bucket[nd])
            else:
                stack.extend((int(self._left[nd]), int(self._right[nd])))
        return np.concatenate(out) if out else _EMPTY

    def _free_subtree(self, node: int) -> None:
        stack = [node]
        while stack:
            nd = stack.pop()
            if self._left[nd] >= 0:
                stack.extend((int(self._left[nd]), int(self._right[nd])))
            self._bucket[nd] = _EMPTY
            self._left[nd] = self._right[nd] = -1
            self._free_nodes.append(nd)

    def _build_subtree(self, slots: np.ndarray, parent: int) -> int:
        node = self._alloc_node()
        self._parent[node] = parent
        self._left[node] = self._right[node] = -1
        self._churn[node] = 0
        k = int(slots.size)
        self._count[node] = k
        self._size_at_build[node] = k
        if k == 0:
            self._centers[node] = 0.0
            self._radii[node] = 0.0
            self._bucket[node] = _EMPTY
            return node

        pts = self._pts[slots]
        center = pts.mean(axis=0)
        radius = float(np.linalg.norm(pts - center, axis=1).max())
        self._centers[node] = center
        self._radii[node] = radius * (1.0 + _RADIUS_SLACK)

        if k <= self.config.leaf_size:
            self._bucket[node] = slots[np.argsort(self._slot_ids[slots], kind="stable")]
            self._leaf_of_slot[slots] = node
            return node

        if self.config.split_rule == "random":
            direction = self._split_rng.standard_normal(pts.shape[1])
            proj = pts @ direction
        else:
            spread = pts.max(axis=0) - pts.min(axis=0)
            proj = pts[:, int(np.argmax(spread))]
        # lower median, ties broken by id
        order = np.lexsort((self._slot_ids[slots], proj))
        mid = (k - 1) // 2 + 1
        lo = self._build_subtree(slots[order[:mid]], parent=node)
        hi = self._build_subtree(slots[order[mid:]], parent=node)
        self._left[node] = lo
        self._right[node] = hi
        self._bucket[node] = _EMPTY
        return node

    # ---------------------------
    # Storage
    # ---------------------------
    def _ensure_dim(self, dim: int) -> None:
        if self._dim is None:
            self._dim = dim
            self._pts = np.empty((0, dim), dtype=np.float64)
            self._centers = np.empty((0, dim), dtype=np.float64)
        else:
            check_dim("lifted point", dim, self._dim)

    def _reserve_slots(self, needed: int) -> None:
        cap = self._pts.shape[0]
        if needed <= cap:
            return
        size = max(needed, 2 * cap, 16)
        self._pts = _grow(self._pts, size, 0.0)
        self._slot_ids = _grow(self._slot_ids, size, -1)
        self._live = _grow(self._live, size, False)
        self._leaf_of_slot = _grow(self._leaf_of_slot, size, -1)

    def _alloc_slots(self, ids: np.ndarray, P: np.ndarray) -> np.ndarray:
        start = self._n_slots
        self._reserve_slots(start + ids.size)
        slots = np.arange(start, start + ids.size, dtype=np.int64)
        self._pts[slots] = P
        self._slot_ids[slots] = ids
        self._live[slots] = True
        self._n_slots += ids.size
        self._slot_of.update(zip(ids.tolist(), slots.tolist()))
        return slots

    def _alloc_slot(self, pid: int, p: np.ndarray) -> int:
        if self._free_slots:
            slot = self._free_slots.pop()
        else:
            self._reserve_slots(self._n_slots + 1)
            slot = self._n_slots
            self._n_slots += 1
        self._pts[slot] = p
        self._slot_ids[slot] = pid
        self._live[slot] = True
        self._slot_of[int(pid)] = slot
        return slot

    def _alloc_node(self) -> int:
        if self._free_nodes:
            return self._free_nodes.pop()
        cap = self._radii.shape[0]
        if self._n_nodes >= cap:
            size = max(2 * cap, 16)
            self._centers = _grow(self._centers, size, 0.0)
            self._radii = _grow(self._radii, size, 0.0)
            self._left = _grow(self._left, size, -1)
            self._right = _grow(self._right, size, -1)
            self._parent = _grow(self._parent, size, -1)
            self._count = _grow(self._count, size, 0)
            self._size_at_build = _grow(self._size_at_build, size, 0)
            self._churn = _grow(self._churn, size, 0)
        self._bucket.append(_EMPTY)
        node = self._n_nodes
        self._n_nodes += 1
        return node

    # ---------------------------
    # Diagnostics
    # ---------------------------
    def check_invariants(self) -> None:
        """Raise IndexCorruptionError unless ball containment, counts and id bookkeeping all hold."""
        seen: list[np.ndarray] = []
        if self._root >= 0:
            stack = [self._root]
            while stack:
                node = stack.pop()
                slots = self._subtree_slots(node)
                live = slots[self._live[slots]]
                if int(self._count[node]) != live.size:
                    raise IndexCorruptionError(
                        f"node {node}: count {int(self._count[node])} != live points {live.size}"
                    )
                if live.size:
                    dist = np.linalg.norm(self._pts[live] - self._centers[node], axis=1)
                    if float(dist.max()) > self._radii[node] * (1.0 + _RADIUS_SLACK):
                        raise IndexCorruptionError(f"node {node}: point outside bounding ball")
                if self._left[node] < 0:
                    if np.any(self._leaf_of_slot[self._bucket[node]] != node):
                        raise IndexCorruptionError(f"leaf {node}: slot/leaf mapping out of sync")
                    seen.append(live)
                else:
                    stack.extend((int(self._left[node]), int(self._right[node])))
        reached = np.sort(np.concatenate(seen)) if seen else _EMPTY
        expected = np.sort(np.fromiter(self._slot_of.values(), dtype=np.int64, count=len(self._slot_of)))
        if not np.array_equal(reached, expected):
            raise IndexCorruptionError("live slots reachable from the root differ from the id table")

    def stats(self) -> dict:
        nodes = self._n_nodes - len(self._free_nodes)
        leaves = 0
        depth = 0
        if self._root >= 0:
            stack = [(self._root, 1)]
            while stack:
                node, level = stack.pop()
                depth = max(depth, level)
                if self._left[node] < 0:
                    leaves += 1
                else:
                    stack.append((int(self._left[node]), level + 1))
                    stack.append((int(self._right[node]), level + 1))
        live = len(self._slot_of)
        with self._stats_lock:
            queries, visits = self._queries, self._visits_total
        return {
            "dim": self._dim or 0,
            "live": live,
            "tombstones": self._n_slots - len(self._free_slots) - live,
            "nodes": nodes,
            "leaves": leaves,
            "depth": depth,
            "queries": queries,
            "visits_total": visits,
            "mean_visits": visits / queries if queries else 0.0,
            "rebuilds": self._rebuilds,
        }

    def dump_stats_csv(self, path: Path | str) -> Path:
        s = self.stats()
        return write_csv(path, list(s.keys()), [list(s.values())])
