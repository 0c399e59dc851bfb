"""
Who contributes to a node's PageRank?
=====================================

Reverse push answers the question backwards: start at a target and spread
residual mass to in-neighbours until every node's residual is small.
"""
from pprtarget import fixtures, ppr_to_target
from pprtarget.oracles import dense_column

# A star: ten leaves all point at the hub, node 0. The hub has no out-edges,
# so its walks fall into the sink.
star = fixtures.star(10)

scores, stats = ppr_to_target(star, target=0, alpha=0.2, epsilon=1e-4)
print("pops", stats.pops, "steps", stats.steps)
for node, value in scores.sorted_items()[:4]:
    print(f"  pi({node} -> hub) = {value:.6f}")

# Every leaf reaches the hub in one step, so pi(leaf, hub) = (1 - alpha) * alpha.
exact = dense_column(star, 0, 0.2)
print("exact leaf value", exact[1], "=", 0.8 * 0.2)
