"""Graph container, predicates, and generators.

Reference values for connectivity and periodicity come from small
independent oracles implemented below (boolean matrix powers, explicit
cycle enumeration) rather than from the library's own traversals.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from odyn import (
    EmptyGraph,
    Hypergraph,
    InvalidProbability,
    NodeLabels,
    NotStronglyConnected,
    TooLarge,
    WeightedGraph,
    generate_sbm,
    homophily_level,
    is_aperiodic,
    is_strongly_connected,
    normalize_rows,
    split_masks,
    validate_row_stochastic,
)

from conftest import make_ring, random_digraph


# ---------------------------------------------------------------- oracles


def reach_oracle(g):
    """All-pairs reachability via boolean matrix powers."""
    n = g.node_count
    a = np.eye(n, dtype=bool)
    for s, d in zip(g.src, g.dst):
        a[s, d] = True
    r = a.copy()
    for _ in range(n):
        r = r | (r @ a)
    return r


def cycle_gcd_oracle(g):
    """gcd of the lengths of all simple cycles in the graph.

    Every closed walk decomposes into simple cycles, so for a strongly
    connected graph this gcd is the common period of all nodes and the
    graph is aperiodic iff it equals 1. Exponential, keep graphs small.
    """
    n = g.node_count
    adj = [g.dst[g.out_slice(u)].tolist() for u in range(n)]
    lengths = set()

    def walk(root, u, depth, seen):
        for v in adj[u]:
            if v == root:
                lengths.add(depth + 1)
            elif v > root and v not in seen:
                walk(root, v, depth + 1, seen | {v})

    for root in range(n):
        walk(root, root, 0, frozenset({root}))
    return math.gcd(*lengths) if lengths else 0


# ------------------------------------------------------------- container


def test_undirected_edges_are_mirrored():
    g = WeightedGraph(3, [(0, 1, 2.0), (1, 2, 0.5)])
    pairs = set(zip(g.src.tolist(), g.dst.tolist()))
    assert pairs == {(0, 1), (1, 0), (1, 2), (2, 1)}
    assert g.arc_count == 4
    assert g.edge_count == 2
    assert [g.degree(i) for i in range(3)] == [1, 2, 1]
    assert g.weighted_out_degree().tolist() == [2.0, 2.5, 0.5]


def test_directed_edges_are_not_mirrored():
    g = WeightedGraph(3, [(0, 1, 1.0)], directed=True)
    assert g.arc_count == 1
    assert g.weighted_out_degree().tolist() == [1.0, 0.0, 0.0]


def test_self_loop_stored_once():
    g = WeightedGraph(2, [(0, 0, 3.0), (0, 1, 1.0)])
    assert g.arc_count == 3  # loop + mirrored pair
    assert g.edge_count == 2
    assert 0 not in g.neighbors(0)


def test_rejects_bad_edges():
    with pytest.raises(ValueError):
        WeightedGraph(2, [(0, 1, -1.0)])
    with pytest.raises(ValueError):
        WeightedGraph(2, [(0, 2, 1.0)])
    with pytest.raises(ValueError):
        WeightedGraph(3, [(0, 1, 1.0), (1, 0, 2.0)])  # duplicate after mirroring
    with pytest.raises(EmptyGraph):
        WeightedGraph(0, [])


def test_dense_weights_matches_arcs():
    g = WeightedGraph(3, [(0, 1, 2.0), (1, 2, 0.5), (0, 2, 1.0)])
    w = g.dense_weights()
    assert w[0, 1] == w[1, 0] == 2.0
    assert w[1, 2] == w[2, 1] == 0.5
    assert w.diagonal().tolist() == [0.0, 0.0, 0.0]


def test_dense_weights_refuses_large_graphs():
    g = WeightedGraph(2001, [(0, 1, 1.0)])
    with pytest.raises(TooLarge):
        g.dense_weights()


def test_undirected_pairs_canonical():
    g = WeightedGraph(3, [(2, 0, 1.0), (1, 2, 2.0), (1, 1, 5.0)])
    s, d, w = g.undirected_pairs()
    assert list(zip(s.tolist(), d.tolist(), w.tolist())) == [
        (0, 2, 1.0),
        (1, 1, 5.0),
        (1, 2, 2.0),
    ]


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_arc_arrays_sorted_by_source(seed):
    g = random_digraph(seed)
    src = g.src
    assert (np.diff(src) >= 0).all()
    for u in range(g.node_count):
        sl = g.out_slice(u)
        assert (src[sl] == u).all()


# ----------------------------------------------------------- hypergraph


def test_hypergraph_incidence_and_comembership():
    h = Hypergraph(4, [(0, 0, 1.0), (1, 0, 1.0), (2, 0, 1.0), (2, 1, 1.0), (3, 1, 1.0)])
    assert h.edge_count == 2
    assert h.members(0).tolist() == [0, 1, 2]
    c = h.co_membership()
    # C = H H^T with the diagonal kept
    expected = np.array(
        [[1, 1, 1, 0], [1, 1, 1, 0], [1, 1, 2, 1], [0, 0, 1, 1]], dtype=float
    )
    assert np.array_equal(c, expected)


def test_hypergraph_rejects_empty_hyperedge():
    with pytest.raises(ValueError):
        Hypergraph(3, [(0, 0, 1.0)], edge_count=2)


def test_clique_expansion_weights():
    h = Hypergraph(3, [(0, 0, 2.0), (1, 0, 3.0), (1, 1, 1.0), (2, 1, 1.0)])
    g = h.clique_expansion()
    w = {(s, d): v for s, d, v in zip(g.src.tolist(), g.dst.tolist(), g.weight.tolist())}
    assert w[(0, 1)] == 6.0  # 2 * 3 inside hyperedge 0
    assert w[(1, 2)] == 1.0
    assert (0, 2) not in w


# ------------------------------------------------------------ stochastic


def test_validate_row_stochastic():
    good = WeightedGraph(2, [(0, 0, 0.5), (0, 1, 0.5), (1, 0, 1.0)], directed=True)
    assert validate_row_stochastic(good)
    bad = WeightedGraph(2, [(0, 1, 0.7), (1, 0, 1.0)], directed=True)
    assert not validate_row_stochastic(bad)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_normalize_rows_row_sums(seed):
    g = normalize_rows(random_digraph(seed))
    sums = np.zeros(g.node_count)
    for s, w in zip(g.src.tolist(), g.weight.tolist()):
        sums[s] += w
    assert np.allclose(sums, 1.0, atol=1e-9)
    assert validate_row_stochastic(g)


def test_normalize_rows_repairs_sinks(caplog):
    g = WeightedGraph(3, [(0, 1, 2.0), (1, 2, 1.0)], directed=True)  # node 2 is a sink
    with caplog.at_level("INFO", logger="odyn"):
        h = normalize_rows(g)
    w = {(s, d): v for s, d, v in zip(h.src.tolist(), h.dst.tolist(), h.weight.tolist())}
    assert w[(2, 2)] == 1.0
    assert w[(0, 1)] == 1.0
    assert any("self loops" in r.getMessage() for r in caplog.records)


# ----------------------------------------------------------- reachability


def test_strong_connectivity_examples():
    assert is_strongly_connected(make_ring(3))
    chain = WeightedGraph(3, [(0, 1, 1.0), (1, 2, 1.0)], directed=True)
    assert not is_strongly_connected(chain)
    undirected_path = WeightedGraph(3, [(0, 1, 1.0), (1, 2, 1.0)])
    assert is_strongly_connected(undirected_path)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=60, deadline=None)
def test_strong_connectivity_matches_matrix_power_oracle(seed):
    g = random_digraph(seed, extra=0.8, self_loops=False)
    assert is_strongly_connected(g) == bool(reach_oracle(g).all())


def test_sparse_random_digraphs_cover_disconnected_case():
    rng = np.random.default_rng(5)
    seen = set()
    for _ in range(40):
        n = 6
        edges = []
        pairs = set()
        for _ in range(5):
            i, j = int(rng.integers(n)), int(rng.integers(n))
            if i != j and (i, j) not in pairs:
                pairs.add((i, j))
                edges.append((i, j, 1.0))
        if not edges:
            continue
        g = WeightedGraph(n, edges, directed=True)
        verdict = is_strongly_connected(g)
        assert verdict == bool(reach_oracle(g).all())
        seen.add(verdict)
    assert False in seen  # sparse draws must exercise the negative branch


# ------------------------------------------------------------ periodicity


def test_aperiodicity_examples():
    assert not is_aperiodic(make_ring(4))  # pure 4-cycle has period 4
    chord = WeightedGraph(
        3, [(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0), (0, 2, 1.0)], directed=True
    )
    assert is_aperiodic(chord)  # cycle lengths 3 and 2 are coprime
    looped = WeightedGraph(2, [(0, 1, 1.0), (1, 0, 1.0), (0, 0, 1.0)], directed=True)
    assert is_aperiodic(looped)


def test_aperiodicity_requires_strong_connectivity():
    chain = WeightedGraph(2, [(0, 1, 1.0)], directed=True)
    with pytest.raises(NotStronglyConnected):
        is_aperiodic(chain)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_aperiodicity_matches_cycle_enumeration_oracle(seed):
    g = random_digraph(seed, n_max=7, extra=0.7, self_loops=False)
    if not is_strongly_connected(g):
        return
    assert is_aperiodic(g) == (cycle_gcd_oracle(g) == 1)


def test_even_cycle_with_even_chord_stays_periodic():
    # cycle lengths 6 and 4, gcd 2
    edges = [(i, (i + 1) % 6, 1.0) for i in range(6)] + [(0, 3, 1.0)]
    g = WeightedGraph(6, edges, directed=True)
    assert cycle_gcd_oracle(g) == 2
    assert not is_aperiodic(g)


# -------------------------------------------------------------- homophily


def test_homophily_examples():
    tri = WeightedGraph(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)])
    assert homophily_level(tri, NodeLabels(np.array([1, 1, 1]), 2)) == 1.0
    assert homophily_level(tri, NodeLabels(np.array([0, 1, 2]), 3)) == 0.0
    # fractions per node: 1/2, 1/2, 0
    assert homophily_level(tri, NodeLabels(np.array([0, 0, 1]), 2)) == pytest.approx(
        1 / 3
    )


def test_homophily_skips_isolated_nodes(caplog):
    g = WeightedGraph(3, [(0, 1, 1.0)])
    with caplog.at_level("INFO", logger="odyn"):
        val = homophily_level(g, NodeLabels(np.array([1, 1, 0]), 2))
    assert val == 1.0
    assert any("isolated" in r.getMessage() for r in caplog.records)


def test_homophily_empty_graph():
    g = WeightedGraph(3, [])
    with pytest.raises(EmptyGraph):
        homophily_level(g, NodeLabels(np.array([0, 1, 2]), 3))


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=20, deadline=None)
def test_homophily_is_permutation_invariant(seed):
    rng = np.random.default_rng(seed)
    g = random_digraph(seed, n_max=10, self_loops=False)
    labels = rng.integers(0, 3, g.node_count)
    perm = rng.permutation(g.node_count)
    inv = np.argsort(perm)
    edges = [
        (int(perm[s]), int(perm[d]), w)
        for s, d, w in zip(g.src.tolist(), g.dst.tolist(), g.weight.tolist())
    ]
    gp = WeightedGraph(g.node_count, edges, directed=True)
    assert homophily_level(gp, NodeLabels(labels[inv], 3)) == pytest.approx(
        homophily_level(g, NodeLabels(labels, 3)), abs=1e-12
    )


def test_homophily_matches_dense_oracle():
    g, labels = generate_sbm([8, 8], 0.9, 0.1, seed=3)
    dense = g.dense_weights() > 0
    fractions = []
    for i in range(16):
        nbrs = [j for j in range(16) if dense[i, j] and j != i]
        if nbrs:
            fractions.append(
                np.mean([labels.labels[j] == labels.labels[i] for j in nbrs])
            )
    assert homophily_level(g, labels) == pytest.approx(np.mean(fractions), abs=1e-12)


# -------------------------------------------------------------------- sbm


def test_sbm_is_deterministic():
    a, la = generate_sbm([5, 5], 0.5, 0.1, seed=11)
    b, _ = generate_sbm([5, 5], 0.5, 0.1, seed=11)
    assert a == b
    assert la.labels.tolist() == [0] * 5 + [1] * 5
    c, _ = generate_sbm([5, 5], 0.5, 0.1, seed=12)
    assert a != c


def test_sbm_degenerate_probabilities():
    g, _ = generate_sbm([3, 3], 1.0, 0.0, seed=0)
    pairs = set(zip(g.src.tolist(), g.dst.tolist()))
    assert (0, 1) in pairs and (1, 2) in pairs and (3, 4) in pairs
    assert all((s < 3) == (d < 3) for s, d in pairs)
    full, _ = generate_sbm([2, 2], 1.0, 1.0, seed=0)
    assert full.edge_count == 6  # complete graph on 4 nodes


def test_sbm_rejects_bad_probability():
    with pytest.raises(InvalidProbability):
        generate_sbm([3, 3], 1.5, 0.1, seed=0)
    with pytest.raises(InvalidProbability):
        generate_sbm([3, 3], 0.5, -0.1, seed=0)


def test_sbm_homophily_tracks_block_structure():
    g, labels = generate_sbm([30, 30], 0.3, 0.02, seed=2)
    assert homophily_level(g, labels) > 0.75


# ------------------------------------------------------------------ labels


def test_node_labels_validation():
    labels = np.array([0, 1, 0, 1])
    nl = NodeLabels(labels, 2, train=np.array([0, 1]), test=np.array([2, 3]))
    assert nl.class_count == 2
    assert nl.node_count == 4
    with pytest.raises(ValueError):
        NodeLabels(labels, 2, train=np.array([0, 1]), test=np.array([1, 2]))
    with pytest.raises(ValueError):
        NodeLabels(labels, 1)  # label 1 outside [0, 1)
    with pytest.raises(ValueError):
        NodeLabels(labels, 2, train=np.array([9]))


def test_split_masks_stratified():
    base = NodeLabels(np.array([0] * 10 + [1] * 10 + [2] * 10), 3)
    nl = split_masks(base, train_frac=0.2, val_frac=0.2, seed=4)
    for c in range(3):
        assert (nl.labels[nl.train] == c).sum() >= 1
    assert nl.train.size == 6
    assert nl.val.size == 6
    assert nl.test.size == 18
    assert np.intersect1d(nl.train, nl.val).size == 0
    again = split_masks(base, train_frac=0.2, val_frac=0.2, seed=4)
    assert np.array_equal(nl.train, again.train)


def test_split_masks_keeps_rare_classes_in_train():
    base = NodeLabels(np.array([0] * 20 + [1]), 2)
    nl = split_masks(base, train_frac=0.1, val_frac=0.1, seed=0)
    assert (nl.labels[nl.train] == 1).sum() == 1
