"""Exhaustive invariant checks for small graphs: every target, both variants."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .analysis import compute_d_v, theorem2_allowance, theorem3_allowance
from .graph import DirectedGraph
from .oracles import DENSE_CAP, DenseScoreVector, dense_solve_all_pairs, power_iteration_to_target
from .push import VARIANTS, InvariantViolation, ppr_to_target


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}  {self.detail}".rstrip()


def verify_graph(
    graph: DirectedGraph,
    alpha: float,
    epsilon: float,
    *,
    audit_targets: int | None = None,
    _stop_threshold: float | None = None,
) -> list[Check]:
    """Run reverse push to every target and check it against the dense oracle.

    ``audit_targets`` limits how many targets get the slow audited run
    (conservation identity, queue discipline, engine agreement); by default
    all targets when ``n <= 50`` and the first 10 otherwise.
    """
    if graph.n > DENSE_CAP:
        raise ValueError(f"verify needs n <= {DENSE_CAP}, got {graph.n}")
    n = graph.n
    exact = dense_solve_all_pairs(graph, alpha)
    checks: list[Check] = []

    row_err = float(np.abs(exact.sum(axis=1) - 1.0).max())
    checks.append(Check("normalization", row_err <= 1e-9, f"max |row sum - 1| = {row_err:.3e}"))

    P = graph.transition_matrix()
    resid = alpha * np.eye(graph.num_slots) + (1 - alpha) * (P @ exact) - exact
    r = float(np.abs(resid).max())
    checks.append(Check("recurrence-residual", r < 1e-9, f"max residual = {r:.3e}"))

    worst_oracle = 0.0
    for v in range(n):
        power = power_iteration_to_target(graph, v, alpha, epsilon, matrix=P)
        worst_oracle = max(worst_oracle, float(np.abs(power.values - exact[:, v]).max()))
    checks.append(Check("oracle-agreement", worst_oracle <= 2 * epsilon,
                        f"max |power - dense| = {worst_oracle:.3e} (limit {2 * epsilon:.3e})"))

    bound = (1 - alpha) * epsilon
    thm2 = theorem2_allowance(graph, alpha, epsilon)
    for variant in VARIANTS:
        worst, worst_target, lower_ok, steps, thm3_bad = 0.0, -1, True, [], []
        for v in range(n):
            scores, stats = ppr_to_target(graph, v, alpha, epsilon, variant, _stop_threshold=_stop_threshold)
            s = scores.to_array(graph.num_slots)[:n]
            col = exact[:n, v]
            err = float(np.abs(s - col).max())
            if err > worst:
                worst, worst_target = err, v
            lower_ok &= bool(np.all(s <= col + 1e-9))
            steps.append(stats.steps)
            if variant == "priority_queue":
                dp = compute_d_v(graph, DenseScoreVector(v, alpha, exact[:, v]), alpha * epsilon)
                if stats.work(n) > theorem3_allowance(dp.d_v, alpha, epsilon):
                    thm3_bad.append(v)
        checks.append(Check(f"theorem1[{variant}]", worst <= bound,
                            f"max error = {worst:.3e} at target {worst_target} (limit {bound:.3e})"))
        checks.append(Check(f"lower-bound[{variant}]", lower_ok, "s(u) <= pi(u, v) + 1e-9"))
        mean_steps = float(np.mean(steps))
        allowance = thm2.priority_queue if variant == "priority_queue" else thm2.work_set
        checks.append(Check(f"theorem2[{variant}]", mean_steps <= allowance,
                            f"mean steps = {mean_steps:.1f} (allowance {allowance:.1f})"))
        if variant == "priority_queue":
            checks.append(Check("theorem3", not thm3_bad,
                                f"{len(thm3_bad)} targets over allowance" if thm3_bad else "all targets within allowance"))

    limit = audit_targets if audit_targets is not None else (n if n <= 50 else 10)
    audit_fail = ""
    for v in range(min(limit, n)):
        for variant in VARIANTS:
            try:
                slow, st_slow = ppr_to_target(graph, v, alpha, epsilon, variant, audit=True,
                                              _stop_threshold=_stop_threshold)
            except InvariantViolation as exc:
                audit_fail = audit_fail or f"target {v} [{variant}]: {exc}"
                continue
            fast, st_fast = ppr_to_target(graph, v, alpha, epsilon, variant, engine="numba",
                                          _stop_threshold=_stop_threshold)
            same = (np.array_equal(slow.nodes, fast.nodes) and np.array_equal(slow.values, fast.values)
                    and (st_slow.pops, st_slow.steps) == (st_fast.pops, st_fast.steps))
            if not same:
                audit_fail = audit_fail or f"target {v} [{variant}]: engines disagree"
    checks.append(Check("audited-invariants", not audit_fail,
                        audit_fail or f"{min(limit, n)} targets audited"))
    return checks
