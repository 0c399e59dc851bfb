import io
import math

import numpy as np
import pytest

from pprtarget import fixtures
from pprtarget.graph import generate_uniform_random
from pprtarget.oracles import (
    WalkConfig,
    dense_solve_all_pairs,
    global_pagerank,
    iterations_for,
    monte_carlo_from_source,
    power_iteration_from_source,
    power_iteration_to_target,
    walk_count_for,
)


def test_power_self_loop_converges_to_one():
    x = power_iteration_to_target(fixtures.self_loop(), 0, 0.1, 1e-10)
    assert 1 - 1e-10 <= x[0] <= 1


def test_power_two_cycle_closed_form():
    alpha = 0.2
    x = power_iteration_to_target(fixtures.two_cycle(), 1, alpha, 1e-10)
    assert x[1] == pytest.approx(1 / (2 - alpha), abs=1e-10)
    assert x[0] == pytest.approx((1 - alpha) / (2 - alpha), abs=1e-10)


def test_power_dead_end_is_alpha_from_first_sweep():
    g = fixtures.dead_end()
    assert iterations_for(0.2, 0.9) == 1
    assert power_iteration_to_target(g, 0, 0.2, 0.9)[0] == 0.2
    assert power_iteration_to_target(g, 0, 0.2, 1e-8)[0] == 0.2


def test_power_parameter_checks():
    g = fixtures.two_cycle()
    with pytest.raises(ValueError):
        power_iteration_to_target(g, 0, 1.0, 0.1)
    with pytest.raises(ValueError):
        power_iteration_to_target(g, 0, 0.2, 0.0)
    with pytest.raises(ValueError):
        power_iteration_to_target(g, 2, 0.2, 0.1)


def test_dense_two_cycle_matrix():
    X = dense_solve_all_pairs(fixtures.two_cycle(), 0.2)
    np.testing.assert_allclose(X[:2, :2], [[5 / 9, 4 / 9], [4 / 9, 5 / 9]], atol=1e-12)


def test_dense_matches_power_columns(corpus):
    for name in ("star-10", "cycle-50", "uniform-200"):
        g = corpus[name]
        X = dense_solve_all_pairs(g, 0.15)
        P = g.transition_matrix()
        for v in (0, g.n // 2, g.n - 1):
            x = power_iteration_to_target(g, v, 0.15, 1e-12, matrix=P)
            np.testing.assert_allclose(x.values, X[:, v], atol=1e-10)


@pytest.mark.parametrize("alpha", [0.1, 0.2])
def test_dense_normalization_and_residual(corpus, dense, alpha):
    for name, g in corpus.items():
        X = dense(name, alpha)
        assert np.abs(X.sum(axis=1) - 1).max() <= 1e-9
        P = g.transition_matrix()
        resid = alpha * np.eye(g.num_slots) + (1 - alpha) * (P @ X) - X
        assert np.abs(resid).max() < 1e-9
        assert np.all(X[np.arange(g.n), np.arange(g.n)] >= alpha - 1e-12)


def test_dense_cap():
    with pytest.raises(ValueError, match="n <= 500"):
        dense_solve_all_pairs(generate_uniform_random(501, 2, seed=0), 0.2)


def test_forward_vector_is_a_dense_row(corpus):
    g = corpus["uniform-200"]
    X = dense_solve_all_pairs(g, 0.2)
    np.testing.assert_allclose(power_iteration_from_source(g, 5, 0.2, 1e-12), X[5], atol=1e-10)


def test_monte_carlo_dead_end_exact():
    mc = monte_carlo_from_source(fixtures.dead_end(), 0, 0.2, WalkConfig(5000, seed=1))
    assert mc.estimate == {0: pytest.approx(0.2, abs=1e-15)}
    assert mc.stderr[0] == pytest.approx(0.0, abs=1e-12)


def test_monte_carlo_self_loop_concentrates_near_one():
    alpha = 0.2
    ests = [monte_carlo_from_source(fixtures.self_loop(), 0, alpha, WalkConfig(20_000, seed=s))[0]
            for s in range(5)]
    # alpha * mean geometric length; sd of one walk length is sqrt(1-alpha)/alpha
    sd = alpha * math.sqrt(1 - alpha) / alpha / math.sqrt(20_000 * 5)
    assert abs(np.mean(ests) - 1.0) < 4 * sd


def test_monte_carlo_two_cycle_within_three_sigma():
    mc = monte_carlo_from_source(fixtures.two_cycle(), 0, 0.2, WalkConfig(10**6, seed=12))
    assert abs(mc[1] - 4 / 9) < 3 * mc.stderr[1]
    assert abs(mc[0] - 5 / 9) < 3 * mc.stderr[0]


def test_monte_carlo_deterministic_and_truncates():
    g = fixtures.self_loop()
    a = monte_carlo_from_source(g, 0, 0.1, WalkConfig(3000, seed=4))
    b = monte_carlo_from_source(g, 0, 0.1, WalkConfig(3000, seed=4))
    assert a.estimate == b.estimate
    capped = monte_carlo_from_source(g, 0, 0.1, WalkConfig(3000, seed=4, max_steps_per_walk=3))
    assert capped.truncated > 0
    assert WalkConfig(10).cap_for(0.1) == 500


def test_monte_carlo_weighted_transitions():
    from pprtarget.graph import from_edge_list

    g = from_edge_list([(0, 1, 3.0), (0, 2, 1.0), (1, 1), (2, 2)])
    X = dense_solve_all_pairs(g, 0.3)
    mc = monte_carlo_from_source(g, 0, 0.3, WalkConfig(200_000, seed=2))
    for v in (1, 2):
        assert abs(mc[v] - X[0, v]) < 4 * mc.stderr[v]


def test_monte_carlo_unbiased_over_seeds():
    g = generate_uniform_random(20, 3, seed=21)
    alpha = 0.2
    X = dense_solve_all_pairs(g, alpha)
    source = 0
    runs = [monte_carlo_from_source(g, source, alpha, WalkConfig(20_000, seed=s)) for s in range(30)]
    for v in range(g.n):
        if X[source, v] <= 0.01:
            continue
        mean = np.mean([r[v] for r in runs])
        se = math.sqrt(sum(r.stderr.get(v, 0.0) ** 2 for r in runs)) / len(runs)
        assert abs(mean - X[source, v]) < 4 * se


def test_monte_carlo_tsv():
    mc = monte_carlo_from_source(fixtures.two_cycle(), 0, 0.2, WalkConfig(1000, seed=1))
    buf = io.StringIO()
    mc.write_tsv(buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "# oracle=monte-carlo"
    assert all("np." not in line for line in lines)


def test_walk_count():
    assert walk_count_for(0.1, 0.1) == 899
    base = 3 * 100 * math.log(20)
    assert walk_count_for(0.05, 0.1) == math.ceil(4 * base)
    with pytest.raises(ValueError):
        walk_count_for(0.1, 1.0)


def test_global_pagerank_cycle_uniform():
    pr = global_pagerank(fixtures.n_cycle(50), 0.15, 1e-12)
    np.testing.assert_allclose(pr.real, 1 / 50, atol=1e-12)


def test_global_pagerank_is_mean_of_columns(corpus):
    tol = 1e-8
    for name in ("uniform-200", "power-law-200", "star-10"):
        g = corpus[name]
        pr = global_pagerank(g, 0.15, tol)
        X = dense_solve_all_pairs(g, 0.15)
        assert abs(pr.values.sum() - 1) <= 1e-9
        np.testing.assert_allclose(pr.values, X[: g.n].mean(axis=0), atol=10 * tol)


def test_global_pagerank_star_hub_dominates():
    pr = global_pagerank(fixtures.star(10), 0.15).real
    assert pr[0] > pr[1:].max()
