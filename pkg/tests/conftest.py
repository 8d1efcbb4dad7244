"""Shared builders for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from odyn import WeightedGraph, normalize_rows


def make_ring(n, weight=1.0, directed=True):
    """Directed ring 0 -> 1 -> ... -> n-1 -> 0."""
    return WeightedGraph(n, [(i, (i + 1) % n, weight) for i in range(n)], directed=directed)


def random_digraph(seed, n_max=12, extra=2.0, self_loops=True):
    """Random directed graph: ring skeleton plus random arcs.

    The ring keeps it strongly connected; a random self loop (when enabled)
    makes it aperiodic. Weights are uniform in [0.2, 1.2).
    """
    rng = np.random.default_rng(seed)
    n = int(rng.integers(4, n_max + 1))
    arcs = {(i, (i + 1) % n) for i in range(n)}
    for _ in range(int(extra * n)):
        i, j = int(rng.integers(n)), int(rng.integers(n))
        if i != j:
            arcs.add((i, j))
    if self_loops:
        k = int(rng.integers(n))
        arcs.add((k, k))
    edges = [(i, j, float(0.2 + rng.random())) for (i, j) in sorted(arcs)]
    return WeightedGraph(n, edges, directed=True)


def random_row_stochastic(seed, n_max=12, lazy=0.5):
    """Strongly connected, aperiodic, row-stochastic random graph.

    Built by row-normalizing a random digraph and blending in a self-loop
    share `lazy`, which keeps the spectrum well away from the unit circle.
    """
    g = normalize_rows(random_digraph(seed, n_max=n_max))
    n = g.node_count
    merged = {}
    for s, d, w in zip(g.src.tolist(), g.dst.tolist(), g.weight.tolist()):
        merged[(s, d)] = merged.get((s, d), 0.0) + (1.0 - lazy) * w
    for i in range(n):
        merged[(i, i)] = merged.get((i, i), 0.0) + lazy
    edges = [(s, d, w) for (s, d), w in sorted(merged.items())]
    return WeightedGraph(n, edges, directed=True)


@pytest.fixture
def rng():
    return np.random.default_rng(0)
