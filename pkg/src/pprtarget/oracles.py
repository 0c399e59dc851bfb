"""Reference computations for checking reverse push.

All of these work on the full ``(n+1)``-slot state space (sink included) and
share nothing with the push code beyond the graph arrays.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import TextIO

import numpy as np

from .graph import DirectedGraph
from .push import write_score_lines

DENSE_CAP = 500
WALK_CONSTANT = 3.0


def _check_alpha(alpha: float) -> None:
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")


def _check_unit(name: str, x: float) -> None:
    if not 0.0 < x < 1.0:
        raise ValueError(f"{name} must lie in (0, 1), got {x}")


def _check_node(graph: DirectedGraph, u: int, what: str) -> None:
    if not 0 <= u < graph.n:
        raise ValueError(f"{what} {u} out of range [0, {graph.n})")


@dataclass
class DenseScoreVector:
    """Values for every slot, sink last. ``target`` is None for global PageRank."""

    target: int | None
    alpha: float
    values: np.ndarray
    oracle: str = "power"
    meta: dict = field(default_factory=dict)

    @property
    def real(self) -> np.ndarray:
        return self.values[:-1]

    def __getitem__(self, u: int) -> float:
        return float(self.values[u])

    def write_tsv(self, stream: TextIO) -> None:
        extra = "".join(f" {k}={v!r}" for k, v in self.meta.items())
        stream.write(f"# oracle={self.oracle}\n")
        stream.write(f"# target={self.target} alpha={self.alpha!r}{extra}\n")
        real = self.real
        nodes = np.flatnonzero(real > 0)
        order = np.lexsort((nodes, -real[nodes]))
        write_score_lines(zip(nodes[order].tolist(), real[nodes][order].tolist()), stream)


def iterations_for(alpha: float, epsilon: float) -> int:
    """Sweeps of the recurrence needed for additive error ``epsilon``."""
    return max(1, math.ceil(math.log(epsilon) / math.log(1.0 - alpha)))


def power_iteration_to_target(
    graph: DirectedGraph, target: int, alpha: float, epsilon: float, *, matrix=None
) -> DenseScoreVector:
    """Iterate ``x <- alpha*e_target + (1-alpha) P x`` from zero.

    After ``k`` sweeps the iterate is a lower bound with error at most
    ``(1-alpha)**k``, so ``iterations_for(alpha, epsilon)`` sweeps suffice.
    """
    _check_alpha(alpha)
    _check_unit("epsilon", epsilon)
    _check_node(graph, target, "target")
    P = graph.transition_matrix() if matrix is None else matrix
    x = np.zeros(graph.num_slots)
    iters = iterations_for(alpha, epsilon)
    keep = 1.0 - alpha
    for _ in range(iters):
        x = keep * (P @ x)
        x[target] += alpha
    return DenseScoreVector(target, alpha, x, "power", {"epsilon": epsilon, "iterations": iters})


def power_iteration_from_source(graph: DirectedGraph, source: int, alpha: float, epsilon: float) -> np.ndarray:
    """Forward vector ``pi(source, .)`` over all slots, to additive error ``epsilon``."""
    _check_alpha(alpha)
    _check_unit("epsilon", epsilon)
    _check_node(graph, source, "source")
    PT = graph.transition_matrix().T.tocsr()
    x = np.zeros(graph.num_slots)
    keep = 1.0 - alpha
    for _ in range(iterations_for(alpha, epsilon)):
        x = keep * (PT @ x)
        x[source] += alpha
    return x


def time_power_sweep(graph: DirectedGraph, target: int, alpha: float, sweeps: int = 5, *, matrix=None) -> float:
    """Mean wall time of one sweep of the recurrence."""
    P = graph.transition_matrix() if matrix is None else matrix
    x = np.zeros(graph.num_slots)
    x[target] = alpha
    keep = 1.0 - alpha
    start = time.perf_counter()
    for _ in range(sweeps):
        x = keep * (P @ x)
        x[target] += alpha
    return (time.perf_counter() - start) / sweeps


def dense_solve_all_pairs(graph: DirectedGraph, alpha: float, *, cap: int = DENSE_CAP, tol: float = 1e-13) -> np.ndarray:
    """``pi(u, v)`` for all slot pairs; rows are sources, columns targets.

    Iterates ``X <- alpha*I + (1-alpha) P X`` from zero until the remaining
    error bound ``diff * (1-alpha)/alpha`` drops below ``tol``.
    """
    _check_alpha(alpha)
    if graph.n > cap:
        raise ValueError(f"dense solve limited to n <= {cap}, got n={graph.n}")
    P = graph.transition_matrix()
    size = graph.num_slots
    X = np.zeros((size, size))
    keep = 1.0 - alpha
    ratio = keep / alpha
    while True:
        nxt = keep * (P @ X)
        nxt[np.diag_indices(size)] += alpha
        diff = np.abs(nxt - X).max()
        X = nxt
        if diff * ratio < tol:
            return X


def dense_column(graph: DirectedGraph, target: int, alpha: float, *, cap: int = DENSE_CAP) -> DenseScoreVector:
    _check_node(graph, target, "target")
    X = dense_solve_all_pairs(graph, alpha, cap=cap)
    return DenseScoreVector(target, alpha, X[:, target].copy(), "dense")


@dataclass
class WalkConfig:
    num_walks: int
    seed: int = 0
    max_steps_per_walk: int | None = None
    chunk_size: int = 1 << 16

    def __post_init__(self):
        if self.num_walks < 1:
            raise ValueError("num_walks must be >= 1")
        if self.max_steps_per_walk is not None and self.max_steps_per_walk < 1:
            raise ValueError("max_steps_per_walk must be >= 1")

    def cap_for(self, alpha: float) -> int:
        if self.max_steps_per_walk is not None:
            return self.max_steps_per_walk
        return math.ceil(50.0 / alpha)


@dataclass
class MonteCarloEstimate:
    source: int
    alpha: float
    num_walks: int
    estimate: dict[int, float]
    stderr: dict[int, float]
    truncated: int

    def __getitem__(self, v: int) -> float:
        return self.estimate.get(v, 0.0)

    def write_tsv(self, stream: TextIO) -> None:
        stream.write("# oracle=monte-carlo\n")
        stream.write(
            f"# source={self.source} alpha={self.alpha!r} walks={self.num_walks} "
            f"truncated={self.truncated}\n"
        )
        items = sorted(self.estimate.items(), key=lambda kv: (-kv[1], kv[0]))
        write_score_lines(items, stream)


def monte_carlo_from_source(graph: DirectedGraph, source: int, alpha: float, config: WalkConfig) -> MonteCarloEstimate:
    """Estimate ``pi(source, .)`` as ``alpha * visits / walks``.

    Each walk visits its start, then halts with probability ``alpha`` or
    moves to a weight-proportional out-neighbour. Walks are simulated in
    vectorized chunks; the standard error of every entry comes from the
    per-walk visit counts. The sink is never reported.
    """
    _check_alpha(alpha)
    _check_node(graph, source, "source")
    rng = np.random.default_rng(config.seed)
    cap = config.cap_for(alpha)
    size = graph.num_slots
    row_start = graph.out_ptr[:-1]
    row_end = graph.out_ptr[1:]
    cum = np.cumsum(graph.out_w)
    base = np.concatenate([[0.0], cum])[row_start]

    total = np.zeros(size)
    total_sq = np.zeros(size)
    truncated = 0
    done = 0
    while done < config.num_walks:
        batch = min(config.chunk_size, config.num_walks - done)
        walker = np.arange(batch)
        node = np.full(batch, source, dtype=np.int64)
        keys = [walker * size + node]
        steps = 1
        while len(walker):
            alive = rng.random(len(walker)) >= alpha
            walker, node = walker[alive], node[alive]
            if not len(walker):
                break
            if steps >= cap:
                truncated += len(walker)
                break
            r = base[node] + rng.random(len(node)) * graph.weighted_out_degree[node]
            k = np.searchsorted(cum, r, side="right")
            k = np.clip(k, row_start[node], row_end[node] - 1)
            node = graph.out_idx[k]
            keys.append(walker * size + node)
            steps += 1
        flat = np.concatenate(keys)
        pairs, counts = np.unique(flat, return_counts=True)
        nodes = pairs % size
        counts = counts.astype(np.float64)
        total += np.bincount(nodes, weights=counts, minlength=size)
        total_sq += np.bincount(nodes, weights=counts * counts, minlength=size)
        done += batch

    N = config.num_walks
    mean = total / N
    var = np.maximum(total_sq / N - mean * mean, 0.0) * N / max(N - 1, 1)
    se = alpha * np.sqrt(var / N)
    est, err = {}, {}
    for v in np.flatnonzero(total[: graph.n] > 0).tolist():
        est[v] = float(alpha * mean[v])
        err[v] = float(se[v])
    return MonteCarloEstimate(source, alpha, N, est, err, truncated)


def walk_count_for(epsilon: float, delta: float, c: float = WALK_CONSTANT) -> int:
    """Walks for an ``epsilon``-accurate estimate with failure probability ``delta``."""
    _check_unit("epsilon", epsilon)
    _check_unit("delta", delta)
    return math.ceil(c * (1.0 / epsilon**2) * math.log(2.0 / delta))


def global_pagerank(graph: DirectedGraph, alpha: float, tolerance: float = 1e-10) -> DenseScoreVector:
    """PageRank with uniform teleport over the real nodes; sink mass kept in the last slot."""
    _check_alpha(alpha)
    _check_unit("tolerance", tolerance)
    PT = graph.transition_matrix().T.tocsr()
    teleport = np.zeros(graph.num_slots)
    teleport[: graph.n] = 1.0 / graph.n
    x = teleport.copy()
    keep = 1.0 - alpha
    while True:
        nxt = alpha * teleport + keep * (PT @ x)
        diff = np.abs(nxt - x).max()
        x = nxt
        if diff < tolerance:
            break
    return DenseScoreVector(None, alpha, x, "global", {"tolerance": tolerance})
