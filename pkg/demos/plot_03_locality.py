"""
Local work versus a global sweep
================================

Power iteration touches every edge on every sweep. Reverse push only
explores the neighbourhood that matters for one target.
"""
import numpy as np

from pprtarget import generate_uniform_random, ppr_to_target
from pprtarget.analysis import sample_targets, theorem2_allowance
from pprtarget.oracles import iterations_for, time_power_sweep

alpha, eps = 0.1, 1e-4
g = generate_uniform_random(20_000, 20, seed=1)
targets = sample_targets(g, 10, seed=1)

ppr_to_target(g, targets[0], alpha, eps)  # first call compiles the kernel
runs = [ppr_to_target(g, v, alpha, eps)[1] for v in targets]
push = np.mean([st.wall_time for st in runs])
steps = np.mean([st.steps for st in runs])

power = time_power_sweep(g, targets[0], alpha) * iterations_for(alpha, eps)
print(f"n={g.n} m={g.m}")
# the push cost hardly depends on n, the sweep cost is linear in it
print(f"power iteration {power * 1e3:.1f} ms, reverse push {push * 1e3:.2f} ms")
print(f"mean steps {steps:.0f}, average-case allowance {theorem2_allowance(g, alpha, eps).priority_queue:.0f}")
