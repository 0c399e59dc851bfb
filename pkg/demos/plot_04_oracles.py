"""
Three ways to the same number
=============================

Dense iteration, power iteration and random walks all estimate pi(u, v).
Agreement between them is what the tests lean on.
"""
from pprtarget import fixtures
from pprtarget.oracles import (
    WalkConfig,
    dense_solve_all_pairs,
    monte_carlo_from_source,
    power_iteration_to_target,
)

alpha = 0.2
g = fixtures.two_cycle()

# Closed form: pi(0, 0) = 1/(2 - alpha) and pi(0, 1) = (1 - alpha)/(2 - alpha).
print("closed form", 1 / (2 - alpha), (1 - alpha) / (2 - alpha))
print("dense      ", dense_solve_all_pairs(g, alpha)[0, :2])
print("power      ", power_iteration_to_target(g, 1, alpha, 1e-10)[0])

mc = monte_carlo_from_source(g, 0, alpha, WalkConfig(200_000, seed=0))
for v in (0, 1):
    print(f"walks       pi(0,{v}) = {mc[v]:.4f} +/- {mc.stderr[v]:.4f}")
