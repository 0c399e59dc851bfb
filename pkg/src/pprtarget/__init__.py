"""Personalized PageRank to a single target by priority-queue reverse push."""
from .analysis import (
    BenchmarkConfig,
    BenchmarkReport,
    DifficultyParams,
    compute_d_v,
    fit_power_law_exponent,
    max_additive_error,
    power_law_bound,
    run_benchmark,
    sample_targets,
    theorem2_allowance,
    theorem3_allowance,
)
from .graph import (
    DirectedGraph,
    GraphFormatError,
    from_edge_list,
    generate_power_law_in_degree,
    generate_uniform_random,
    load_edge_list_file,
)
from .oracles import (
    DenseScoreVector,
    WalkConfig,
    dense_solve_all_pairs,
    global_pagerank,
    monte_carlo_from_source,
    power_iteration_to_target,
    walk_count_for,
)
from .push import PushStats, ScoreVector, ppr_to_target, propagate

__version__ = "0.1.0"
