"""Difficulty parameter, error metrics, theorem allowances and the benchmark runner."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .graph import DirectedGraph
from .oracles import (
    DenseScoreVector,
    global_pagerank,
    iterations_for,
    power_iteration_to_target,
    time_power_sweep,
)
from .push import VARIANTS, ScoreVector, ppr_to_target

REPORT_VERSION = 1
# ratio between step count and D_v quoted for alpha=0.1, epsilon=1e-5
QUOTED_ALLOWANCE_RATIO = 200.0
ERROR_BUCKETS = 20
# power-iteration reference is run to this fraction of alpha*epsilon
REFERENCE_FACTOR = 0.01


@dataclass(frozen=True)
class DifficultyParams:
    x: float
    d_v: float
    contributors: int
    log_base: int = 2


def _log2n(n: int) -> float:
    return math.log2(n) if n > 1 else 0.0


def compute_d_v(graph: DirectedGraph, exact_scores: DenseScoreVector | np.ndarray, x: float) -> DifficultyParams:
    """Sum of ``in_degree(u) + log2(n)`` over real nodes with ``pi(u, v) > x``.

    ``exact_scores`` should come from an oracle accurate to ``x / 10`` or better.
    """
    if x <= 0:
        raise ValueError(f"threshold must be positive, got {x}")
    values = exact_scores.values if isinstance(exact_scores, DenseScoreVector) else np.asarray(exact_scores)
    mask = values[: graph.n] > x
    count = int(mask.sum())
    d_v = float(graph.in_degrees[mask].sum()) + count * _log2n(graph.n)
    return DifficultyParams(x, d_v, count)


def max_additive_error(estimate: ScoreVector, exact: DenseScoreVector) -> float:
    """L-infinity distance over the real nodes; nodes missing from ``estimate`` count as 0."""
    if exact.target is not None and estimate.target != exact.target:
        raise ValueError(f"target mismatch: {estimate.target} vs {exact.target}")
    if estimate.alpha != exact.alpha:
        raise ValueError(f"alpha mismatch: {estimate.alpha} vs {exact.alpha}")
    real = exact.real
    s = estimate.to_array(len(exact.values))[: len(real)]
    return float(np.abs(s - real).max()) if len(real) else 0.0


def sample_targets(graph: DirectedGraph, k: int, mode: str = "uniform", alpha: float = 0.15, seed: int = 0) -> list[int]:
    """Draw ``k`` targets with replacement, uniformly or by global PageRank."""
    if k < 1:
        raise ValueError("k must be >= 1")
    rng = np.random.default_rng(seed)
    if mode == "uniform":
        return rng.integers(0, graph.n, size=k).tolist()
    if mode == "pagerank":
        pr = global_pagerank(graph, alpha, 1e-12).real
        return rng.choice(graph.n, size=k, p=pr / pr.sum()).tolist()
    raise ValueError(f"unknown sampling mode {mode!r}")


class Theorem2Allowance(NamedTuple):
    priority_queue: float
    work_set: float


def theorem2_allowance(graph: DirectedGraph, alpha: float, epsilon: float) -> Theorem2Allowance:
    """Average-case step allowance with constant 1, with and without the log term."""
    scale = 1.0 / (alpha * epsilon)
    avg_deg = graph.m / graph.n
    return Theorem2Allowance(scale * (avg_deg + _log2n(graph.n)), scale * avg_deg)


def theorem3_allowance(d_v: float, alpha: float, epsilon: float) -> float:
    """``(2/alpha) * log2(1/(alpha*epsilon)) * d_v``: at most 2/alpha pops per node per halving stage."""
    return (2.0 / alpha) * math.log2(1.0 / (alpha * epsilon)) * d_v


def power_law_constant(beta: float) -> float:
    return (1.0 - beta) ** (1.0 / beta - 1.0)


def power_law_bound(n: int, m: int, beta: float, alpha: float, epsilon: float) -> float:
    """Average running time when sorted PPR values decay like ``i**-beta``."""
    if not 0.0 < beta < 1.0:
        raise ValueError(f"beta must lie in (0, 1), got {beta}")
    return power_law_constant(beta) * (m / n ** (1.0 / beta)) * (1.0 / (alpha * epsilon)) ** (1.0 / beta)


def fit_power_law_exponent(exact_scores: DenseScoreVector | np.ndarray, floor: float = 1e-12) -> float:
    """Fit ``value(i) ~ i**-beta`` to the sorted positive scores; returns beta.

    Uses least squares on ``(log i, log value)`` for ranks ``2..k``, where
    ``k`` counts the values above ``floor``.
    """
    values = exact_scores.real if isinstance(exact_scores, DenseScoreVector) else np.asarray(exact_scores, dtype=float)
    positive = np.sort(values[values > 0])[::-1]
    if len(positive) < 10:
        raise ValueError(f"need at least 10 positive entries to fit, got {len(positive)}")
    k = int((positive > floor).sum())
    ranks = np.arange(2, k + 1)
    slope = np.polyfit(np.log(ranks), np.log(positive[1:k]), 1)[0]
    return float(-slope)


@dataclass
class BenchmarkConfig:
    alphas: Sequence[float] = (0.1, 0.2)
    epsilons: Sequence[float] = (1e-4,)
    targets_per_setting: int = 20
    sampling_mode: str = "uniform"
    variant: str = "priority_queue"
    seed: int = 0
    graph_source: str = "unspecified"
    jobs: int = 1

    def __post_init__(self):
        if not self.alphas or not self.epsilons:
            raise ValueError("need at least one alpha and one epsilon")
        for a in self.alphas:
            if not 0.0 < a < 1.0:
                raise ValueError(f"alpha must lie in (0, 1), got {a}")
        for e in self.epsilons:
            if not 0.0 < e < 1.0:
                raise ValueError(f"epsilon must lie in (0, 1), got {e}")
        if self.targets_per_setting < 1:
            raise ValueError("targets_per_setting must be >= 1")
        if self.sampling_mode not in ("uniform", "pagerank"):
            raise ValueError(f"unknown sampling mode {self.sampling_mode!r}")
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")


@dataclass
class TargetRecord:
    alpha: float
    epsilon: float
    target: int
    pops: int
    steps: int
    work: float
    max_error: float
    d_v: float
    contributors: int
    thm2_pq: float
    thm2_set: float
    thm3: float
    wall_time: float

    @property
    def error_ratio(self) -> float:
        return self.max_error / self.epsilon

    @property
    def steps_per_d_v(self) -> float | None:
        return self.steps / self.d_v if self.d_v > 0 else None

    @property
    def thm3_ok(self) -> bool:
        return self.work <= self.thm3


@dataclass
class SettingSummary:
    alpha: float
    epsilon: float
    mean_steps: float
    mean_pops: float
    mean_error_ratio: float
    max_error_ratio: float
    mean_steps_per_d_v: float | None
    thm2_pq: float
    thm2_set: float
    error_histogram: list[int]
    steps_histogram: dict[int, int]
    sweep_seconds: float
    iterations: int
    mean_push_seconds: float

    @property
    def baseline_seconds(self) -> float:
        return self.sweep_seconds * self.iterations


@dataclass
class BenchmarkReport:
    config: BenchmarkConfig
    n: int
    m: int
    records: list[TargetRecord] = field(default_factory=list)
    settings: list[SettingSummary] = field(default_factory=list)

    @property
    def failures(self) -> list[TargetRecord]:
        return [r for r in self.records if r.max_error >= r.epsilon]

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_text(self, include_timing: bool = True) -> str:
        c = self.config
        lines = [
            f"report-version: {REPORT_VERSION}",
            f"graph: {c.graph_source}",
            f"n: {self.n}",
            f"m: {self.m}",
            f"variant: {c.variant}",
            f"sampling-mode: {c.sampling_mode}",
            f"seed: {c.seed}",
            f"alphas: {' '.join(repr(a) for a in c.alphas)}",
            f"epsilons: {' '.join(repr(e) for e in c.epsilons)}",
            f"targets-per-setting: {c.targets_per_setting}",
            "log-base: 2",
            "sink: excluded from n, m and D_v",
            "theorem2-form: (1/(alpha*epsilon))*(m/n + log2 n) [pq], (1/(alpha*epsilon))*(m/n) [set], constant 1",
            "theorem3-form: (2/alpha)*log2(1/(alpha*epsilon))*D_v(alpha*epsilon)",
            f"quoted-allowance-ratio: {QUOTED_ALLOWANCE_RATIO!r} at alpha=0.1 epsilon=1e-05",
            f"reference: power iteration to {REFERENCE_FACTOR!r}*alpha*epsilon",
        ]
        if self.passed:
            lines.append("status: ok")
        else:
            bad = self.failures[0]
            lines.append(
                f"status: failed target={bad.target} alpha={bad.alpha!r} "
                f"epsilon={bad.epsilon!r} error={bad.max_error!r}"
            )
        lines.append("[records]")
        lines.append(
            "alpha\tepsilon\ttarget\tpops\tsteps\twork\tmax_error\terror_ratio\td_v"
            "\tcontributors\tsteps_per_d_v\tthm2_pq\tthm2_set\tthm3\tthm3_ok"
        )
        for r in self.records:
            ratio = "-" if r.steps_per_d_v is None else repr(r.steps_per_d_v)
            lines.append(
                f"{r.alpha!r}\t{r.epsilon!r}\t{r.target}\t{r.pops}\t{r.steps}\t{r.work!r}"
                f"\t{r.max_error!r}\t{r.error_ratio!r}\t{r.d_v!r}\t{r.contributors}\t{ratio}"
                f"\t{r.thm2_pq!r}\t{r.thm2_set!r}\t{r.thm3!r}\t{int(r.thm3_ok)}"
            )
        lines.append("[aggregates]")
        for s in self.settings:
            ratio = "-" if s.mean_steps_per_d_v is None else repr(s.mean_steps_per_d_v)
            key = f"alpha={s.alpha!r} epsilon={s.epsilon!r}"
            lines.append(
                f"setting {key} mean_steps={s.mean_steps!r} mean_pops={s.mean_pops!r}"
                f" mean_error_ratio={s.mean_error_ratio!r} max_error_ratio={s.max_error_ratio!r}"
                f" mean_steps_per_d_v={ratio} thm2_pq={s.thm2_pq!r} thm2_set={s.thm2_set!r}"
                f" thm2_set_fraction={s.mean_steps / s.thm2_set if s.thm2_set else float('nan')!r}"
            )
            lines.append(f"error-histogram {key} buckets={ERROR_BUCKETS} counts={','.join(map(str, s.error_histogram))}")
            steps = " ".join(f"{k}:{v}" for k, v in sorted(s.steps_histogram.items()))
            lines.append(f"steps-histogram {key} log2-buckets {steps}")
        if include_timing:
            lines.append("[timing]")
            for r in self.records:
                lines.append(f"target alpha={r.alpha!r} epsilon={r.epsilon!r} target={r.target} wall_time={r.wall_time!r}")
            for s in self.settings:
                speedup = s.baseline_seconds / s.mean_push_seconds if s.mean_push_seconds > 0 else float("inf")
                lines.append(
                    f"baseline alpha={s.alpha!r} epsilon={s.epsilon!r} sweep_seconds={s.sweep_seconds!r}"
                    f" iterations={s.iterations} power_seconds={s.baseline_seconds!r}"
                    f" mean_push_seconds={s.mean_push_seconds!r} speedup={speedup!r}"
                )
        return "\n".join(lines) + "\n"


def strip_timing(text: str) -> str:
    """Drop the ``[timing]`` section, leaving the deterministic part of a report."""
    head, sep, _ = text.partition("[timing]\n")
    return head


def error_histogram(ratios: Sequence[float], buckets: int = ERROR_BUCKETS) -> list[int]:
    """Counts of ``error/epsilon`` in equal-width buckets over [0, 1]; overflow lands in the last."""
    counts = [0] * buckets
    for r in ratios:
        counts[min(int(r * buckets), buckets - 1)] += 1
    return counts


def steps_histogram(steps: Sequence[int]) -> dict[int, int]:
    """Bucket ``k`` holds counts in ``[2**k, 2**(k+1))``; bucket -1 holds zero-step runs."""
    out: dict[int, int] = {}
    for s in steps:
        k = -1 if s <= 0 else int(s).bit_length() - 1
        out[k] = out.get(k, 0) + 1
    return out


def _one_target(graph, matrix, target, alpha, epsilon, variant) -> TargetRecord:
    scores, stats = ppr_to_target(graph, target, alpha, epsilon, variant)
    ref = power_iteration_to_target(graph, target, alpha, REFERENCE_FACTOR * alpha * epsilon, matrix=matrix)
    dp = compute_d_v(graph, ref, alpha * epsilon)
    thm2 = theorem2_allowance(graph, alpha, epsilon)
    return TargetRecord(
        alpha=alpha,
        epsilon=epsilon,
        target=target,
        pops=stats.pops,
        steps=stats.steps,
        work=stats.work(graph.n),
        max_error=max_additive_error(scores, ref),
        d_v=dp.d_v,
        contributors=dp.contributors,
        thm2_pq=thm2.priority_queue,
        thm2_set=thm2.work_set,
        thm3=theorem3_allowance(dp.d_v, alpha, epsilon),
        wall_time=stats.wall_time,
    )


def run_benchmark(graph: DirectedGraph, config: BenchmarkConfig) -> BenchmarkReport:
    """Run reverse push against a power-iteration reference for every setting and sampled target."""
    report = BenchmarkReport(config, graph.n, graph.m)
    matrix = graph.transition_matrix()
    seeds = np.random.SeedSequence(config.seed).spawn(len(config.alphas) * len(config.epsilons))
    setting = 0
    with ThreadPoolExecutor(max_workers=max(1, config.jobs)) as pool:
        for alpha in config.alphas:
            for epsilon in config.epsilons:
                seed = int(seeds[setting].generate_state(1)[0])
                setting += 1
                targets = sample_targets(graph, config.targets_per_setting, config.sampling_mode, alpha, seed)
                recs = list(pool.map(
                    lambda t: _one_target(graph, matrix, t, alpha, epsilon, config.variant), targets
                ))
                report.records.extend(recs)
                ratios = [r.steps_per_d_v for r in recs if r.steps_per_d_v is not None]
                report.settings.append(SettingSummary(
                    alpha=alpha,
                    epsilon=epsilon,
                    mean_steps=float(np.mean([r.steps for r in recs])),
                    mean_pops=float(np.mean([r.pops for r in recs])),
                    mean_error_ratio=float(np.mean([r.error_ratio for r in recs])),
                    max_error_ratio=max(r.error_ratio for r in recs),
                    mean_steps_per_d_v=float(np.mean(ratios)) if ratios else None,
                    thm2_pq=recs[0].thm2_pq,
                    thm2_set=recs[0].thm2_set,
                    error_histogram=error_histogram([r.error_ratio for r in recs]),
                    steps_histogram=steps_histogram([r.steps for r in recs]),
                    sweep_seconds=time_power_sweep(graph, targets[0], alpha, matrix=matrix),
                    iterations=iterations_for(alpha, epsilon),
                    mean_push_seconds=float(np.mean([r.wall_time for r in recs])),
                ))
    return report


def parse_report(text: str) -> tuple[dict[str, str], list[dict[str, str]]]:
    """Read back the header fields and per-target rows of a serialized report."""
    header: dict[str, str] = {}
    rows: list[dict[str, str]] = []
    section = None
    columns: list[str] = []
    for line in text.splitlines():
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1]
            continue
        if section is None:
            key, _, val = line.partition(": ")
            header[key] = val
        elif section == "records":
            if not columns:
                columns = line.split("\t")
            else:
                rows.append(dict(zip(columns, line.split("\t"))))
    return header, rows
