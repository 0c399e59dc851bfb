"""Immutable directed graphs with out- and in-adjacency in CSR form.

Node ids are dense integers ``0..n-1``. Every dead end (a node with no
out-edges) receives one synthetic weight-1 edge to an extra sink node with
id ``n``; the sink carries a weight-1 self-loop. The sink lives in the
adjacency arrays but is excluded from ``n`` and ``m``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, TextIO

import numpy as np


class GraphFormatError(ValueError):
    """Raised for malformed edge lists or invalid edge weights."""


@dataclass(frozen=True, eq=False)
class DirectedGraph:
    n: int
    m: int
    out_ptr: np.ndarray
    out_idx: np.ndarray
    out_w: np.ndarray
    in_ptr: np.ndarray
    in_idx: np.ndarray
    in_w: np.ndarray
    weighted_out_degree: np.ndarray
    # weight(u, w) / weighted_out_degree(u), aligned with in_idx
    in_coef: np.ndarray

    @property
    def sink(self) -> int:
        return self.n

    @property
    def num_slots(self) -> int:
        """Number of node slots in the adjacency arrays (real nodes + sink)."""
        return self.n + 1

    def out_neighbors(self, u: int) -> np.ndarray:
        return self.out_idx[self.out_ptr[u]:self.out_ptr[u + 1]]

    def out_weights(self, u: int) -> np.ndarray:
        return self.out_w[self.out_ptr[u]:self.out_ptr[u + 1]]

    def in_neighbors(self, u: int) -> np.ndarray:
        return self.in_idx[self.in_ptr[u]:self.in_ptr[u + 1]]

    def in_weights(self, u: int) -> np.ndarray:
        return self.in_w[self.in_ptr[u]:self.in_ptr[u + 1]]

    def in_degree(self, u: int) -> int:
        return int(self.in_ptr[u + 1] - self.in_ptr[u])

    def out_degree(self, u: int) -> int:
        return int(self.out_ptr[u + 1] - self.out_ptr[u])

    @property
    def in_degrees(self) -> np.ndarray:
        """In-degrees of the real nodes (parallel edges counted)."""
        return np.diff(self.in_ptr)[: self.n]

    @property
    def is_weighted(self) -> bool:
        return bool(np.any(self.out_w[: self.out_ptr[self.n]] != 1.0))

    def transition_matrix(self):
        """Row-stochastic ``(n+1) x (n+1)`` scipy CSR matrix, sink included."""
        import scipy.sparse as sp

        rows = np.repeat(np.arange(self.num_slots), np.diff(self.out_ptr))
        data = self.out_w / self.weighted_out_degree[rows]
        shape = (self.num_slots, self.num_slots)
        # duplicate (u, w) entries are summed, which is the parallel-edge rule
        return sp.csr_matrix((data, (rows, self.out_idx)), shape=shape)

    def edges(self) -> list[tuple[int, int, float]]:
        """Real edges as ``(source, target, weight)``, synthetic sink edges omitted."""
        out = []
        for u in range(self.n):
            for w, wt in zip(self.out_neighbors(u).tolist(), self.out_weights(u).tolist()):
                if w != self.n:
                    out.append((u, w, wt))
        return out

    def __repr__(self) -> str:
        return f"DirectedGraph(n={self.n}, m={self.m})"


def _csr(keys: np.ndarray, vals: np.ndarray, wts: np.ndarray, size: int):
    # neighbours sorted by id so the layout does not depend on input edge order
    order = np.lexsort((vals, keys))
    ptr = np.zeros(size + 1, dtype=np.int64)
    np.cumsum(np.bincount(keys, minlength=size), out=ptr[1:])
    return ptr, vals[order].astype(np.int64), wts[order].astype(np.float64), order


def _build(src: np.ndarray, dst: np.ndarray, wts: np.ndarray, n: int) -> DirectedGraph:
    m = len(src)
    out_counts = np.bincount(src, minlength=n)[:n] if m else np.zeros(n, dtype=np.int64)
    dead = np.flatnonzero(out_counts == 0)
    sink = n
    all_src = np.concatenate([src, dead, [sink]]).astype(np.int64)
    all_dst = np.concatenate([dst, np.full(len(dead), sink), [sink]]).astype(np.int64)
    all_w = np.concatenate([wts, np.ones(len(dead) + 1)]).astype(np.float64)

    size = n + 1
    out_ptr, out_idx, out_w, _ = _csr(all_src, all_dst, all_w, size)
    in_ptr, in_idx, in_w, _ = _csr(all_dst, all_src, all_w, size)
    wdeg = np.bincount(np.repeat(np.arange(size), np.diff(out_ptr)), weights=out_w, minlength=size)
    if np.any(wdeg <= 0):
        bad = int(np.flatnonzero(wdeg <= 0)[0])
        raise GraphFormatError(f"node {bad} has only zero-weight out-edges")
    in_coef = in_w / wdeg[in_idx]
    arrays = (out_ptr, out_idx, out_w, in_ptr, in_idx, in_w, wdeg, in_coef)
    for a in arrays:
        a.setflags(write=False)
    return DirectedGraph(n, m, *arrays)


def from_edge_list(edges: Iterable[tuple], n_hint: int | None = None) -> DirectedGraph:
    """Build a graph from ``(source, target)`` or ``(source, target, weight)`` tuples.

    ``n`` is one more than the largest endpoint, or ``n_hint`` if larger.
    Parallel edges are kept and their weights add up in the transition
    probability.
    """
    src, dst, wts = [], [], []
    for i, e in enumerate(edges):
        if len(e) == 2:
            u, v = e
            w = 1.0
        elif len(e) == 3:
            u, v, w = e
        else:
            raise GraphFormatError(f"edge {i} has {len(e)} fields: {e!r}")
        u, v = int(u), int(v)
        w = float(w)
        if u < 0 or v < 0:
            raise GraphFormatError(f"edge {i} ({u}, {v}) has a negative endpoint")
        if not math.isfinite(w):
            raise GraphFormatError(f"edge {i} ({u}, {v}) has non-finite weight {w}")
        if w < 0:
            raise GraphFormatError(f"edge {i} ({u}, {v}) has negative weight {w}")
        src.append(u)
        dst.append(v)
        wts.append(w)
    n = max(max(src, default=-1), max(dst, default=-1)) + 1
    if n_hint is not None:
        n = max(n, int(n_hint))
    return _build(
        np.asarray(src, dtype=np.int64),
        np.asarray(dst, dtype=np.int64),
        np.asarray(wts, dtype=np.float64),
        n,
    )


def from_arrays(src, dst, weights=None, n: int | None = None) -> DirectedGraph:
    """Vectorized constructor used by the generators. Same semantics as
    :func:`from_edge_list`."""
    src = np.asarray(src, dtype=np.int64)
    dst = np.asarray(dst, dtype=np.int64)
    if weights is None:
        weights = np.ones(len(src))
    weights = np.asarray(weights, dtype=np.float64)
    if len(src) and (src.min() < 0 or dst.min() < 0):
        raise GraphFormatError("negative endpoint")
    if not np.all(np.isfinite(weights)) or np.any(weights < 0):
        raise GraphFormatError("weights must be finite and non-negative")
    n_edges = int(max(src.max(initial=-1), dst.max(initial=-1)) + 1)
    n = n_edges if n is None else max(n, n_edges)
    return _build(src, dst, weights, n)


def load_edge_list_file(stream: TextIO) -> DirectedGraph:
    """Parse ``u v`` or ``u v w`` lines; ``#`` comments and blank lines skipped."""
    edges = []
    for lineno, line in enumerate(stream, start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        parts = text.split()
        if len(parts) not in (2, 3):
            raise GraphFormatError(f"line {lineno}: expected 2 or 3 fields, got {len(parts)}")
        try:
            u, v = int(parts[0]), int(parts[1])
            w = float(parts[2]) if len(parts) == 3 else 1.0
        except ValueError:
            raise GraphFormatError(f"line {lineno}: malformed token in {text!r}") from None
        if u < 0 or v < 0:
            raise GraphFormatError(f"line {lineno}: negative node id")
        if not math.isfinite(w) or w < 0:
            raise GraphFormatError(f"line {lineno}: invalid weight {parts[2]!r}")
        edges.append((u, v, w))
    if not edges:
        raise GraphFormatError("edge list is empty")
    return from_edge_list(edges)


def write_edge_list(graph: DirectedGraph, stream: TextIO) -> None:
    weighted = graph.is_weighted
    for u, v, w in graph.edges():
        stream.write(f"{u} {v} {w!r}\n" if weighted else f"{u} {v}\n")


def generate_uniform_random(n: int, d: float, seed: int) -> DirectedGraph:
    """Each node draws Binomial(n, d/n) distinct out-neighbours uniformly."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if d < 0:
        raise ValueError("d must be >= 0")
    if d > n:
        raise ValueError(f"average degree {d} exceeds n={n}")
    rng = np.random.default_rng(seed)
    degrees = rng.binomial(n, d / n, size=n)
    src = np.repeat(np.arange(n), degrees)
    dst = rng.integers(0, n, size=len(src))
    # resample rows that drew a duplicate neighbour
    starts = np.concatenate([[0], np.cumsum(degrees)])
    for u in range(n):
        a, b = starts[u], starts[u + 1]
        if b - a > 1 and len(np.unique(dst[a:b])) < b - a:
            dst[a:b] = rng.choice(n, size=b - a, replace=False)
    return from_arrays(src, dst, n=n)


def generate_power_law_in_degree(n: int, d: float, exponent: float, seed: int) -> DirectedGraph:
    """Random graph whose in-degrees follow ``P(k) ~ k**-exponent``.

    Raw in-degrees come from a Pareto law with the given exponent, are
    rescaled so that they total about ``n*d`` and capped at ``n``. Each node
    then picks that many distinct sources uniformly at random.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if exponent <= 1:
        raise ValueError(f"exponent must be > 1, got {exponent}")
    if d < 0:
        raise ValueError("d must be >= 0")
    rng = np.random.default_rng(seed)
    raw = rng.pareto(exponent - 1.0, size=n) + 1.0
    if d == 0:
        k = np.zeros(n, dtype=np.int64)
    else:
        k = np.floor(raw * (n * d / raw.sum()) + rng.random(n)).astype(np.int64)
        k = np.minimum(k, n)
    dst = np.repeat(np.arange(n), k)
    src = np.empty(len(dst), dtype=np.int64)
    pos = 0
    for v in range(n):
        kv = int(k[v])
        if kv:
            if kv * kv < n:
                picks = rng.integers(0, n, size=kv)
                while len(np.unique(picks)) < kv:
                    picks = rng.integers(0, n, size=kv)
            else:
                picks = rng.choice(n, size=kv, replace=False)
            src[pos:pos + kv] = picks
            pos += kv
    return from_arrays(src, dst, n=n)


def fit_degree_exponent(degrees, k_min: int | None = None) -> float:
    """Least-squares log-log fit of the degree CCDF tail.

    Returns ``gamma`` for ``P(k) ~ k**-gamma`` (the CCDF slope is ``1 - gamma``).
    """
    deg = np.sort(np.asarray(degrees, dtype=np.float64))
    deg = deg[deg > 0]
    if k_min is None:
        k_min = max(1.0, float(np.median(deg)))
    vals = np.unique(deg[deg >= k_min])
    ccdf = (len(deg) - np.searchsorted(deg, vals, side="left")) / len(deg)
    slope = np.polyfit(np.log(vals), np.log(ccdf), 1)[0]
    return 1.0 - slope
