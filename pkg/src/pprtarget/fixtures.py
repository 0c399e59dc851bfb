"""Small named graphs used by the tests, the demos and ``verify``."""
from __future__ import annotations

from .graph import DirectedGraph, from_edge_list, generate_power_law_in_degree, generate_uniform_random


def two_cycle() -> DirectedGraph:
    return from_edge_list([(0, 1), (1, 0)])


def self_loop() -> DirectedGraph:
    return from_edge_list([(0, 0)])


def dead_end() -> DirectedGraph:
    """One node whose only edge is the synthetic one to the sink."""
    return from_edge_list([], n_hint=1)


def star(k: int = 10) -> DirectedGraph:
    """Leaves ``1..k`` all point at hub ``0``; the hub is a dead end."""
    return from_edge_list([(i, 0) for i in range(1, k + 1)])


def n_cycle(n: int = 50) -> DirectedGraph:
    return from_edge_list([(i, (i + 1) % n) for i in range(n)])


def corpus(seed: int = 7) -> dict[str, DirectedGraph]:
    """The fixture set every exhaustive check runs over."""
    return {
        "two-cycle": two_cycle(),
        "self-loop": self_loop(),
        "star-10": star(10),
        "cycle-50": n_cycle(50),
        "uniform-200": generate_uniform_random(200, 8, seed),
        "power-law-200": generate_power_law_in_degree(200, 8, 2.5, seed),
    }
