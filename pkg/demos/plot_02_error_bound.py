"""
How close is the estimate?
==========================

Stopping when the largest residual drops to alpha*epsilon leaves every
estimate within (1 - alpha)*epsilon of the true value, and never above it.
"""
import numpy as np

from pprtarget import fixtures, ppr_to_target
from pprtarget.oracles import dense_solve_all_pairs

alpha = 0.1
for name, g in fixtures.corpus().items():
    X = dense_solve_all_pairs(g, alpha)
    for eps in (1e-2, 1e-4):
        worst = 0.0
        for v in range(g.n):
            s = ppr_to_target(g, v, alpha, eps)[0].to_array(g.num_slots)[: g.n]
            worst = max(worst, float(np.abs(s - X[: g.n, v]).max()))
        print(f"{name:14s} eps={eps:g}  max error / ((1-alpha) eps) = {worst / ((1 - alpha) * eps):.3f}")

# A self-loop is the slowest case: the residual only shrinks by 1 - alpha per pop.
g = fixtures.self_loop()
_, st = ppr_to_target(g, 0, alpha, 1e-6)
print("self-loop pops at eps=1e-6:", st.pops)
