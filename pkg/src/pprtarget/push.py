"""Reverse push: personalized PageRank from every source to one target.

Scores flow backwards from the target along in-edges. Each node keeps a
score ``s(u)`` (a lower bound on ``pi(u, target)``) and an unpropagated
remainder ``p(u)``. The node with the largest remainder is popped and its
remainder is pushed to its in-neighbours, until no remainder exceeds
``alpha * epsilon``. At that point every score is within
``(1 - alpha) * epsilon`` of the true value.
"""
from __future__ import annotations

import math
import threading
import time
import weakref
from dataclasses import dataclass, field
from functools import cached_property
from typing import TextIO

import numpy as np

from .graph import DirectedGraph
from .heap import FifoWorkSet, IndexedMaxHeap

VARIANTS = ("priority_queue", "work_set")


class InvariantViolation(AssertionError):
    """An audited run found a broken push invariant."""


@dataclass
class PushStats:
    pops: int = 0
    steps: int = 0
    distinct_touched: int = 0
    wall_time: float = 0.0

    def work(self, n: int) -> float:
        """Sum over pops of ``|in(u)| + log2(n)``, the cost model of the step bound."""
        return self.steps + self.pops * math.log2(n) if n > 1 else float(self.steps)


@dataclass
class ScoreVector:
    """Sparse scores ``s(u)`` for one target; absent nodes score 0."""

    target: int
    alpha: float
    nodes: np.ndarray
    values: np.ndarray
    epsilon: float | None = None
    variant: str | None = None

    @classmethod
    def from_dict(cls, target: int, alpha: float, entries: dict[int, float], **kw) -> "ScoreVector":
        nodes = np.fromiter(entries.keys(), dtype=np.int64, count=len(entries))
        values = np.fromiter(entries.values(), dtype=np.float64, count=len(entries))
        return cls(target, alpha, nodes, values, **kw)

    @cached_property
    def entries(self) -> dict[int, float]:
        return dict(zip(self.nodes.tolist(), self.values.tolist()))

    def __getitem__(self, u: int) -> float:
        return self.entries.get(u, 0.0)

    def __len__(self) -> int:
        return len(self.nodes)

    def to_array(self, size: int) -> np.ndarray:
        out = np.zeros(size)
        out[self.nodes] = self.values
        return out

    def sorted_items(self) -> list[tuple[int, float]]:
        order = np.lexsort((self.nodes, -self.values))
        return list(zip(self.nodes[order].tolist(), self.values[order].tolist()))

    def header(self) -> str:
        return (
            f"# target={self.target} alpha={self.alpha!r} "
            f"epsilon={self.epsilon!r} variant={self.variant}"
        )

    def write_tsv(self, stream: TextIO) -> None:
        stream.write(self.header() + "\n")
        write_score_lines(self.sorted_items(), stream)


def write_score_lines(items, stream: TextIO) -> None:
    for u, val in items:
        stream.write(f"{u}\t{val!r}\n")


def read_score_tsv(stream: TextIO) -> tuple[dict[str, str], dict[int, float]]:
    """Parse a score TSV into ``(header fields, {node: score})``."""
    meta: dict[str, str] = {}
    scores: dict[int, float] = {}
    for line in stream:
        line = line.rstrip("\n")
        if not line:
            continue
        if line.startswith("#"):
            for tok in line[1:].split():
                key, _, val = tok.partition("=")
                meta[key] = val
            continue
        node, val = line.split("\t")
        scores[int(node)] = float(val)
    return meta, scores


@dataclass
class PushState:
    s: dict[int, float] = field(default_factory=dict)
    p: dict[int, float] = field(default_factory=dict)
    queue: IndexedMaxHeap | FifoWorkSet = field(default_factory=IndexedMaxHeap)
    stats: PushStats = field(default_factory=PushStats)


def propagate(state: PushState, graph: DirectedGraph, w: int, alpha: float) -> PushState:
    """Push ``p(w)`` to every in-neighbour of ``w`` and zero ``p(w)``.

    ``w`` must already be out of the queue. The remainder is cleared before
    distributing so a self-loop feeds back into ``p(w)``.
    """
    s, p, queue = state.s, state.p, state.queue
    pw = p.pop(w)
    a, b = graph.in_ptr[w], graph.in_ptr[w + 1]
    scale = (1.0 - alpha) * pw
    for u, coef in zip(graph.in_idx[a:b].tolist(), graph.in_coef[a:b].tolist()):
        if coef == 0.0:
            continue
        ds = scale * coef
        s[u] = s.get(u, 0.0) + ds
        pu = p.get(u, 0.0) + ds
        p[u] = pu
        queue.increase(u, pu)
    state.stats.steps += b - a
    return state


def _check_args(graph: DirectedGraph, target: int, alpha: float, epsilon: float) -> None:
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    if target == graph.sink:
        raise ValueError("the synthetic sink cannot be a target")
    if not 0 <= target < graph.n:
        raise ValueError(f"target {target} out of range [0, {graph.n})")


def audit_state(
    state: PushState,
    graph: DirectedGraph,
    target: int,
    alpha: float,
    nodes=None,
    tol: float = 1e-9,
) -> None:
    """Check remainder bounds, queue membership and the conservation identity.

    Conservation: ``s(u) = alpha*[u == target] + (1 - alpha) * sum_w P(u, w) * (s(w) - p(w))``.
    ``nodes`` restricts the check to the given nodes (all touched nodes by
    default). Popping ``w`` only changes the identity at the in-neighbours of
    ``w``, so checking those after each step keeps it true everywhere.
    """
    s, p, queue = state.s, state.p, state.queue
    heap_queue = isinstance(queue, IndexedMaxHeap)
    check = s.keys() if nodes is None else nodes
    for u in check:
        su = s.get(u, 0.0)
        pu = p.get(u, 0.0)
        if pu > su + tol:
            raise InvariantViolation(f"p({u})={pu} exceeds s({u})={su}")
        queued = u in queue
        should = pu > 0 if heap_queue else pu > queue.threshold
        if queued != should:
            raise InvariantViolation(f"queue membership of {u} is {queued}, p({u})={pu}")
        a, b = graph.out_ptr[u], graph.out_ptr[u + 1]
        total = 0.0
        for w, wt in zip(graph.out_idx[a:b].tolist(), graph.out_w[a:b].tolist()):
            total += wt * (s.get(w, 0.0) - p.get(w, 0.0))
        rhs = (1.0 - alpha) * total / graph.weighted_out_degree[u]
        if u == target:
            rhs += alpha
        if abs(su - rhs) > tol:
            raise InvariantViolation(f"conservation broken at {u}: {su} != {rhs}")


class _Scratch:
    """Per-graph work arrays reused across queries; only touched slots are reset."""

    def __init__(self, size: int):
        self.s = np.zeros(size)
        self.p = np.zeros(size)
        self.pos = np.full(size, -1, dtype=np.int64)
        self.seen = np.zeros(size, dtype=np.bool_)
        self.buf = np.zeros(size, dtype=np.int64)
        self.touched = np.zeros(size, dtype=np.int64)


_local = threading.local()


def _scratch_for(graph: DirectedGraph) -> _Scratch:
    pool = getattr(_local, "pool", None)
    if pool is None:
        pool = _local.pool = weakref.WeakKeyDictionary()
    scratch = pool.get(graph)
    if scratch is None:
        scratch = pool[graph] = _Scratch(graph.num_slots)
    return scratch


_compiled = False


def _warm_up() -> None:
    """Compile (or load from cache) both kernels outside any timed region."""
    global _compiled
    if _compiled:
        return
    from .graph import from_edge_list

    tiny = from_edge_list([(0, 0)])
    _compiled = True
    for variant in VARIANTS:
        _run_compiled(tiny, 0, 0.5, 0.25, variant)


def _run_compiled(graph, target, alpha, threshold, variant):
    from . import _kernels

    sc = _scratch_for(graph)
    kernel = _kernels.push_heap if variant == "priority_queue" else _kernels.push_fifo
    n_touched, pops, steps = kernel(
        graph.in_ptr, graph.in_idx, graph.in_coef, target, alpha, threshold,
        sc.s, sc.p, sc.pos, sc.seen, sc.buf, sc.touched,
    )
    nodes = sc.touched[:n_touched].copy()
    values = sc.s[nodes]
    sc.s[nodes] = 0.0
    sc.p[nodes] = 0.0
    sc.seen[nodes] = False
    return nodes, values, int(pops), int(steps)


def ppr_to_target(
    graph: DirectedGraph,
    target: int,
    alpha: float,
    epsilon: float,
    variant: str = "priority_queue",
    *,
    engine: str = "auto",
    audit: bool = False,
    _stop_threshold: float | None = None,
) -> tuple[ScoreVector, PushStats]:
    """Estimate ``pi(u, target)`` for all ``u`` to additive error below ``epsilon``.

    Returns the sparse scores and run counters. ``engine`` picks the compiled
    loop (``"numba"``) or the pure-Python one built on :func:`propagate`
    (``"python"``); both produce identical output. ``audit=True`` re-checks
    the push invariants after every step (Python engine only) and raises
    :class:`InvariantViolation`. ``_stop_threshold`` replaces
    ``alpha * epsilon`` and exists only so tests can show that a looser
    threshold breaks the error guarantee.
    """
    _check_args(graph, target, alpha, epsilon)
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    if engine == "auto":
        engine = "python" if audit else "numba"
    if engine not in ("numba", "python"):
        raise ValueError(f"unknown engine {engine!r}")
    if audit and engine != "python":
        raise ValueError("audit requires the python engine")
    threshold = alpha * epsilon if _stop_threshold is None else _stop_threshold
    target = int(target)

    if engine == "numba":
        _warm_up()
        start = time.perf_counter()
        nodes, values, pops, steps = _run_compiled(graph, target, alpha, threshold, variant)
        stats = PushStats(pops, steps, len(nodes), time.perf_counter() - start)
        return ScoreVector(target, alpha, nodes, values, epsilon=epsilon, variant=variant), stats

    start = time.perf_counter()
    queue = IndexedMaxHeap() if variant == "priority_queue" else FifoWorkSet(threshold)
    state = PushState(queue=queue)
    state.s[target] = alpha
    state.p[target] = alpha
    queue.increase(target, alpha)
    stats = state.stats

    use_heap = variant == "priority_queue"
    while queue:
        # every work-set member is above the threshold by construction
        if use_heap and queue.max_priority() <= threshold:
            break
        if audit and use_heap:
            top = max(state.p.values())
            if queue.max_priority() != top or state.p[queue.peek()] != top:
                raise InvariantViolation(f"popped {queue.peek()} but max priority is {top}")
        w, _ = queue.pop()
        stats.pops += 1
        propagate(state, graph, w, alpha)
        if audit:
            a, b = graph.in_ptr[w], graph.in_ptr[w + 1]
            audit_state(state, graph, target, alpha, nodes={w, *graph.in_idx[a:b].tolist()})

    if audit:
        audit_state(state, graph, target, alpha)

    stats.steps = int(stats.steps)
    stats.distinct_touched = len(state.s)
    stats.wall_time = time.perf_counter() - start
    scores = ScoreVector.from_dict(target, alpha, state.s, epsilon=epsilon, variant=variant)
    return scores, stats
