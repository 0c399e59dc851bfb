import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pprtarget.graph import (
    GraphFormatError,
    fit_degree_exponent,
    from_edge_list,
    generate_power_law_in_degree,
    generate_uniform_random,
    load_edge_list_file,
    write_edge_list,
)


def triples_out(g):
    rows = np.repeat(np.arange(g.num_slots), np.diff(g.out_ptr))
    return sorted(zip(rows.tolist(), g.out_idx.tolist(), g.out_w.tolist()))


def triples_in(g):
    cols = np.repeat(np.arange(g.num_slots), np.diff(g.in_ptr))
    return sorted(zip(g.in_idx.tolist(), cols.tolist(), g.in_w.tolist()))


def check_invariants(g):
    assert triples_out(g) == triples_in(g)
    sink = g.sink
    assert g.out_neighbors(sink).tolist() == [sink]
    assert g.out_weights(sink).tolist() == [1.0]
    for u in range(g.num_slots):
        w = g.out_weights(u)
        assert g.weighted_out_degree[u] > 0
        assert abs(w.sum() / g.weighted_out_degree[u] - 1.0) <= 1e-12
        targets = g.out_neighbors(u).tolist()
        if sink in targets and u != sink:
            # a dead end: exactly one synthetic edge and nothing else
            assert targets == [sink] and w.tolist() == [1.0]
    assert np.all(g.out_idx <= sink) and np.all(g.in_idx <= sink)


def test_two_cycle_has_no_sink_edges():
    g = from_edge_list([(0, 1), (1, 0)])
    assert (g.n, g.m) == (2, 2)
    assert g.in_degree(g.sink) == 1  # only the sink's own self-loop
    check_invariants(g)


def test_dead_end_gets_sink_edge():
    g = from_edge_list([(0, 1)])
    assert (g.n, g.m) == (2, 1)
    assert g.out_neighbors(1).tolist() == [2]
    assert g.out_neighbors(2).tolist() == [2]
    check_invariants(g)


def test_weighted_out_degree_sums_weights():
    g = from_edge_list([(0, 1, 2.0), (0, 2, 1.0)])
    assert g.weighted_out_degree[0] == 3.0


def test_parallel_edges_accumulate():
    g = from_edge_list([(0, 1), (0, 1), (0, 2)])
    P = g.transition_matrix().toarray()
    assert P[0, 1] == pytest.approx(2 / 3)
    assert g.m == 3


def test_n_hint_adds_isolated_nodes():
    g = from_edge_list([(0, 1)], n_hint=5)
    assert g.n == 5
    check_invariants(g)


@pytest.mark.parametrize("edge", [(0, 1, -1.0), (0, 1, float("nan")), (0, 1, float("inf"))])
def test_bad_weights_rejected(edge):
    with pytest.raises(GraphFormatError, match=r"\(0, 1\)"):
        from_edge_list([edge])


def test_load_edge_list():
    g = load_edge_list_file(io.StringIO("0 1\n1 0\n"))
    assert (g.n, g.m) == (2, 2)
    g = load_edge_list_file(io.StringIO("# comment\n\n0 1 0.5\n"))
    assert g.m == 1 and g.out_weights(0).tolist() == [0.5]


@pytest.mark.parametrize("text, match", [
    ("0 x\n", "line 1"),
    ("0 1\n2\n", "line 2"),
    ("0 1 -3\n", "line 1"),
    ("# nothing\n", "empty"),
])
def test_load_edge_list_errors(text, match):
    with pytest.raises(GraphFormatError, match=match):
        load_edge_list_file(io.StringIO(text))


def test_edge_list_round_trip():
    g = from_edge_list([(0, 1, 2.5), (1, 2, 1.0), (2, 0, 0.5)])
    buf = io.StringIO()
    write_edge_list(g, buf)
    h = load_edge_list_file(io.StringIO(buf.getvalue()))
    assert triples_out(g) == triples_out(h)


def test_uniform_random_single_node():
    g = generate_uniform_random(1, 0, seed=7)
    assert (g.n, g.m) == (1, 0)
    assert g.out_neighbors(0).tolist() == [g.sink]


def test_uniform_random_edge_count():
    g = generate_uniform_random(1000, 20, seed=1)
    # m ~ Binomial(n*n, d/n): mean 20000, sd sqrt(20000 * (1 - 0.02))
    sd = np.sqrt(1000 * 1000 * 0.02 * 0.98)
    assert abs(g.m - 20000) < 3 * sd
    for u in range(0, 1000, 37):
        nbrs = [w for w in g.out_neighbors(u).tolist() if w != g.sink]
        assert len(nbrs) == len(set(nbrs))
    check_invariants(g)


def test_uniform_random_deterministic():
    a = generate_uniform_random(300, 5, seed=3)
    b = generate_uniform_random(300, 5, seed=3)
    assert triples_out(a) == triples_out(b)
    c = generate_uniform_random(300, 5, seed=4)
    assert triples_out(a) != triples_out(c)


def test_uniform_random_rejects_dense():
    with pytest.raises(ValueError):
        generate_uniform_random(5, 6, seed=0)


def test_power_law_single_node():
    g = generate_power_law_in_degree(1, 0, 2.5, seed=3)
    assert (g.n, g.m) == (1, 0)
    check_invariants(g)


@pytest.mark.parametrize("exponent", [2.1, 2.5, 3.0])
def test_power_law_exponent_recovered(exponent):
    g = generate_power_law_in_degree(10_000, 10, exponent, seed=1)
    assert abs(fit_degree_exponent(g.in_degrees) - exponent) <= 0.3


def test_power_law_deterministic_and_validated():
    a = generate_power_law_in_degree(500, 4, 2.2, seed=9)
    b = generate_power_law_in_degree(500, 4, 2.2, seed=9)
    assert triples_out(a) == triples_out(b)
    with pytest.raises(ValueError):
        generate_power_law_in_degree(10, 2, 1.0, seed=0)


edge_lists = st.lists(
    st.tuples(st.integers(0, 12), st.integers(0, 12), st.sampled_from([0.5, 1.0, 2.0, 3.25])),
    max_size=40,
)


@settings(max_examples=60, deadline=None)
@given(edge_lists, st.integers(0, 15))
def test_constructor_invariants(edges, n_hint):
    g = from_edge_list(edges, n_hint=n_hint)
    assert g.m == len(edges)
    check_invariants(g)


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 60), st.integers(0, 6), st.integers(0, 2**16))
def test_generator_invariants(n, d, seed):
    d = min(d, n)
    check_invariants(generate_uniform_random(n, d, seed))
    check_invariants(generate_power_law_in_degree(n, d, 2.3, seed))


def test_layout_independent_of_edge_order():
    g = generate_power_law_in_degree(200, 8, 2.5, seed=7)
    edges = g.edges()
    rng = np.random.default_rng(0)
    shuffled = [edges[i] for i in rng.permutation(len(edges))]
    h = from_edge_list(shuffled, n_hint=g.n)
    for name in ("out_ptr", "out_idx", "in_ptr", "in_idx", "in_coef", "weighted_out_degree"):
        assert np.array_equal(getattr(g, name), getattr(h, name)), name
