"""
What makes a target hard?
=========================

The cost of a query tracks D_v: the in-degrees of the nodes whose
contribution to v is above alpha*epsilon, plus a heap term per node.
"""
import numpy as np

from pprtarget import generate_power_law_in_degree, ppr_to_target
from pprtarget.analysis import compute_d_v, fit_power_law_exponent, theorem3_allowance
from pprtarget.oracles import power_iteration_from_source, power_iteration_to_target

alpha, eps = 0.1, 1e-3
g = generate_power_law_in_degree(10_000, 8, 2.5, seed=3)
hubs = np.argsort(g.in_degrees)[::-1][:3].tolist()
quiet = np.argsort(g.in_degrees)[:3].tolist()

for v in hubs + quiet:
    _, st = ppr_to_target(g, v, alpha, eps)
    ref = power_iteration_to_target(g, v, alpha, 0.01 * alpha * eps)
    dp = compute_d_v(g, ref, alpha * eps)
    print(f"target {v:5d} in-degree {g.in_degree(v):4d}  steps {st.steps:7d}  D_v {dp.d_v:9.1f}"
          f"  work/allowance {st.work(g.n) / theorem3_allowance(dp.d_v, alpha, eps):.3f}")

# Sorted forward PageRank values decay roughly like a power of the rank.
beta = fit_power_law_exponent(power_iteration_from_source(g, 0, alpha, 1e-10)[: g.n])
print(f"fitted decay exponent beta = {beta:.2f}")
