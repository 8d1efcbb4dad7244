"""Weighted graphs, hypergraphs and node labels.

Graphs are stored sparsely as arc arrays keyed by source node; an undirected
graph keeps two mirrored arcs per edge so every per-node scan is a contiguous
slice. Dense matrix views are produced on demand for small graphs only.
All containers are immutable after construction and safe to share.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    EmptyGraph,
    InvalidProbability,
    NotStronglyConnected,
    TooLarge,
)

__all__ = [
    "DENSE_LIMIT",
    "WeightedGraph",
    "Hypergraph",
    "NodeLabels",
    "validate_row_stochastic",
    "is_strongly_connected",
    "is_aperiodic",
    "homophily_level",
    "generate_sbm",
    "normalize_rows",
    "split_masks",
]

log = logging.getLogger("odyn")

# Dense N x N views are only materialized below this node count.
DENSE_LIMIT = 2000


class WeightedGraph:
    """Directed or undirected graph with strictly positive edge weights.

    Parameters
    ----------
    node_count : int
        Number of nodes; indices run 0 .. node_count - 1.
    edges : iterable of (src, dst, weight)
        For undirected graphs each edge is listed once (self loops too);
        the constructor stores the mirrored arc automatically.
    directed : bool
        Arc semantics flag. Affects validation, edge counting and I/O.
    """

    __slots__ = ("node_count", "directed", "src", "dst", "weight", "_row_ptr", "_loops")

    def __init__(self, node_count, edges, directed=False):
        node_count = int(node_count)
        if node_count < 1:
            raise EmptyGraph("graph needs at least one node")
        rows = [(int(s), int(d), float(w)) for s, d, w in edges]
        if not directed:
            rows = rows + [(d, s, w) for s, d, w in rows if s != d]
        if rows:
            src = np.array([r[0] for r in rows], dtype=np.int64)
            dst = np.array([r[1] for r in rows], dtype=np.int64)
            w = np.array([r[2] for r in rows], dtype=np.float64)
        else:
            src = np.empty(0, dtype=np.int64)
            dst = np.empty(0, dtype=np.int64)
            w = np.empty(0, dtype=np.float64)
        if src.size:
            if src.min() < 0 or src.max() >= node_count:
                raise ValueError("edge source index out of range")
            if dst.min() < 0 or dst.max() >= node_count:
                raise ValueError("edge target index out of range")
            if not np.all(np.isfinite(w)) or np.any(w <= 0.0):
                raise ValueError("edge weights must be finite and strictly positive")
        order = np.lexsort((dst, src))
        src, dst, w = src[order], dst[order], w[order]
        if src.size > 1:
            dup = (src[1:] == src[:-1]) & (dst[1:] == dst[:-1])
            if dup.any():
                k = int(np.flatnonzero(dup)[0])
                raise ValueError(f"duplicate edge ({src[k]}, {dst[k]})")
        for a in (src, dst, w):
            a.setflags(write=False)
        self.node_count = node_count
        self.directed = bool(directed)
        self.src, self.dst, self.weight = src, dst, w
        self._row_ptr = np.searchsorted(src, np.arange(node_count + 1))
        self._loops = int(np.count_nonzero(src == dst))

    # -- basic queries -------------------------------------------------

    @property
    def arc_count(self):
        """Number of stored arcs (mirrored arcs count twice)."""
        return int(self.src.size)

    @property
    def edge_count(self):
        """Number of logical edges: pairs for undirected, arcs for directed."""
        if self.directed:
            return self.arc_count
        return self._loops + (self.arc_count - self._loops) // 2

    def out_slice(self, i):
        """Slice into the arc arrays covering arcs leaving node i."""
        return slice(self._row_ptr[i], self._row_ptr[i + 1])

    def neighbors(self, i):
        """Out-neighbor indices of node i, self loops excluded."""
        d = self.dst[self.out_slice(i)]
        return d[d != i]

    def degree(self, i):
        """Unweighted neighbor count of node i (self loops excluded)."""
        return int(self.neighbors(i).size)

    def weighted_out_degree(self):
        """Vector of outgoing weight sums, self loops included."""
        d = np.zeros(self.node_count)
        np.add.at(d, self.src, self.weight)
        return d

    def dense_weights(self):
        """Dense weight matrix view; guarded by the dense-path limit."""
        if self.node_count > DENSE_LIMIT:
            raise TooLarge(
                f"dense view refused for {self.node_count} nodes (limit {DENSE_LIMIT})"
            )
        m = np.zeros((self.node_count, self.node_count))
        m[self.src, self.dst] = self.weight
        return m

    def undirected_pairs(self):
        """Canonical (i, j, w) arrays with i <= j, each logical edge once."""
        if self.directed:
            return self.src, self.dst, self.weight
        keep = self.src <= self.dst
        return self.src[keep], self.dst[keep], self.weight[keep]

    def __eq__(self, other):
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return (
            self.node_count == other.node_count
            and self.directed == other.directed
            and np.array_equal(self.src, other.src)
            and np.array_equal(self.dst, other.dst)
            and np.array_equal(self.weight, other.weight)
        )

    def __repr__(self):
        kind = "directed" if self.directed else "undirected"
        return f"WeightedGraph({self.node_count} nodes, {self.edge_count} {kind} edges)"


class Hypergraph:
    """Hypergraph stored as node-hyperedge memberships with weights.

    Pair weights inside a hyperedge default to the product of the two
    membership weights, so they are nonzero exactly where both nodes
    belong to the hyperedge.
    """

    __slots__ = ("node_count", "edge_count", "incidence", "membership_weight", "_members")

    def __init__(self, node_count, memberships, edge_count=None):
        node_count = int(node_count)
        if node_count < 1:
            raise EmptyGraph("hypergraph needs at least one node")
        rows = [(int(n), int(e), float(w)) for n, e, w in memberships]
        if edge_count is None:
            edge_count = 1 + max((e for _, e, _ in rows), default=-1)
        edge_count = int(edge_count)
        if edge_count < 1:
            raise EmptyGraph("hypergraph needs at least one hyperedge")
        if node_count > DENSE_LIMIT:
            raise TooLarge(f"incidence refused for {node_count} nodes (limit {DENSE_LIMIT})")
        H = np.zeros((node_count, edge_count), dtype=bool)
        M = np.zeros((node_count, edge_count))
        for n, e, w in rows:
            if not (0 <= n < node_count):
                raise ValueError("membership node index out of range")
            if not (0 <= e < edge_count):
                raise ValueError("membership hyperedge index out of range")
            if not math.isfinite(w) or w <= 0.0:
                raise ValueError("membership weights must be finite and positive")
            if H[n, e]:
                raise ValueError(f"duplicate membership ({n}, {e})")
            H[n, e] = True
            M[n, e] = w
        empty = np.flatnonzero(~H.any(axis=0))
        if empty.size:
            raise ValueError(f"hyperedge {int(empty[0])} contains no node")
        H.setflags(write=False)
        M.setflags(write=False)
        self.node_count = node_count
        self.edge_count = edge_count
        self.incidence = H
        self.membership_weight = M
        self._members = tuple(np.flatnonzero(H[:, e]) for e in range(edge_count))

    def members(self, e):
        """Sorted node indices belonging to hyperedge e."""
        return self._members[e]

    def co_membership(self):
        """Dense count matrix C with C[i, j] = number of shared hyperedges."""
        H = self.incidence.astype(np.float64)
        return H @ H.T

    def clique_expansion(self):
        """Undirected graph over co-membered pairs.

        Edge weight is the sum over shared hyperedges of the product of the
        two membership weights.
        """
        W = self.membership_weight @ self.membership_weight.T
        iu, ju = np.triu_indices(self.node_count, k=1)
        keep = W[iu, ju] > 0.0
        edges = zip(iu[keep].tolist(), ju[keep].tolist(), W[iu, ju][keep].tolist())
        return WeightedGraph(self.node_count, edges, directed=False)

    def __repr__(self):
        return f"Hypergraph({self.node_count} nodes, {self.edge_count} hyperedges)"


@dataclass(frozen=True)
class NodeLabels:
    """Integer node labels in [0, class_count) with optional split masks."""

    labels: np.ndarray
    class_count: int
    train: np.ndarray | None = None
    val: np.ndarray | None = None
    test: np.ndarray | None = None

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.int64)
        object.__setattr__(self, "labels", labels)
        if self.class_count < 1:
            raise ValueError("class_count must be positive")
        if labels.size and (labels.min() < 0 or labels.max() >= self.class_count):
            raise ValueError("label outside [0, class_count)")
        masks = []
        for name in ("train", "val", "test"):
            m = getattr(self, name)
            if m is not None:
                m = np.unique(np.asarray(m, dtype=np.int64))
                if m.size and (m.min() < 0 or m.max() >= labels.size):
                    raise ValueError(f"{name} mask index out of range")
                object.__setattr__(self, name, m)
                masks.append(m)
        if len(masks) > 1:
            joined = np.concatenate(masks)
            if np.unique(joined).size != joined.size:
                raise ValueError("split masks must be disjoint")

    @property
    def node_count(self):
        return int(self.labels.size)


def split_masks(labels, train_frac=1 / 3, val_frac=1 / 3, seed=0):
    """Return a copy of `labels` with a stratified random train/val/test split.

    Sampling is per class so every class appears in the training set whenever
    it has at least one node. Fractions apply within each class; the
    remainder goes to the test set.
    """
    rng = np.random.default_rng(seed)
    train, val = [], []
    test = []
    for c in range(labels.class_count):
        idx = np.flatnonzero(labels.labels == c)
        idx = rng.permutation(idx)
        n_tr = max(1, int(round(train_frac * idx.size))) if idx.size else 0
        n_va = int(round(val_frac * idx.size))
        train.extend(idx[:n_tr].tolist())
        val.extend(idx[n_tr : n_tr + n_va].tolist())
        test.extend(idx[n_tr + n_va :].tolist())
    return NodeLabels(
        labels.labels,
        labels.class_count,
        train=np.array(sorted(train), dtype=np.int64),
        val=np.array(sorted(val), dtype=np.int64),
        test=np.array(sorted(test), dtype=np.int64),
    )


# -- predicates and generators ------------------------------------------


def validate_row_stochastic(g, tolerance=1e-9):
    """True when every node's outgoing weights sum to one within tolerance."""
    sums = g.weighted_out_degree()
    return bool(np.all(np.abs(sums - 1.0) <= tolerance))


def _bfs_reach(n, row_ptr, dst, start):
    """Boolean reach set and BFS levels from `start` over CSR-style arcs."""
    seen = np.zeros(n, dtype=bool)
    dist = np.full(n, -1, dtype=np.int64)
    seen[start] = True
    dist[start] = 0
    frontier = [start]
    while frontier:
        nxt = []
        for u in frontier:
            for v in dst[row_ptr[u] : row_ptr[u + 1]]:
                if not seen[v]:
                    seen[v] = True
                    dist[v] = dist[u] + 1
                    nxt.append(int(v))
        frontier = nxt
    return seen, dist


def is_strongly_connected(g):
    """Every node reaches every other along directed arcs.

    Checked with two sweeps from node 0: one over the arcs as stored and one
    over the reversed arcs.
    """
    n = g.node_count
    if n == 1:
        return True
    fwd, _ = _bfs_reach(n, g._row_ptr, g.dst, 0)
    if not fwd.all():
        return False
    order = np.lexsort((g.src, g.dst))
    rsrc, rdst = g.dst[order], g.src[order]
    row_ptr = np.searchsorted(rsrc, np.arange(n + 1))
    bwd, _ = _bfs_reach(n, row_ptr, rdst, 0)
    return bool(bwd.all())


def is_aperiodic(g):
    """True when the gcd of all directed cycle lengths is one.

    Requires strong connectivity. Computed from BFS levels: for every arc
    (u, v) the closing defect dist(u) + 1 - dist(v) is a combination of
    cycle lengths, and the gcd over all arcs equals the cycle gcd. Any
    self loop yields defect one, so a self loop alone settles the question.
    """
    if not is_strongly_connected(g):
        raise NotStronglyConnected("aperiodicity is defined for strongly connected graphs")
    _, dist = _bfs_reach(g.node_count, g._row_ptr, g.dst, 0)
    gcd = 0
    for u, v in zip(g.src, g.dst):
        gcd = math.gcd(gcd, abs(int(dist[u]) + 1 - int(dist[v])))
        if gcd == 1:
            return True
    return gcd == 1


def homophily_level(g, labels):
    """Mean over nodes of the fraction of neighbors sharing the node's label.

    Nodes without neighbors are skipped (and counted in a log line); if no
    node has a neighbor the mean is undefined and EmptyGraph is raised.
    """
    lab = labels.labels
    if lab.size != g.node_count:
        raise ValueError("labels length must match node count")
    fractions = []
    skipped = 0
    for i in range(g.node_count):
        nb = g.neighbors(i)
        if nb.size == 0:
            skipped += 1
            continue
        fractions.append(np.count_nonzero(lab[nb] == lab[i]) / nb.size)
    if skipped:
        log.info("homophily_level skipped %d isolated node(s)", skipped)
    if not fractions:
        raise EmptyGraph("no node has a neighbor")
    return float(np.mean(fractions))


def generate_sbm(block_sizes, p_in, p_out, seed=0):
    """Sample an undirected stochastic block model with unit weights.

    Returns (graph, labels) where labels are block indices. The draw is a
    pure function of the seed.
    """
    for p in (p_in, p_out):
        if not (0.0 <= p <= 1.0):
            raise InvalidProbability(f"edge probability {p} outside [0, 1]")
    sizes = [int(s) for s in block_sizes]
    if not sizes or any(s < 1 for s in sizes):
        raise ValueError("block sizes must be positive")
    labels = np.repeat(np.arange(len(sizes)), sizes)
    n = int(labels.size)
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    probs = np.where(labels[iu] == labels[ju], p_in, p_out)
    keep = rng.random(iu.size) < probs
    edges = zip(iu[keep].tolist(), ju[keep].tolist(), [1.0] * int(keep.sum()))
    g = WeightedGraph(n, edges, directed=False)
    return g, NodeLabels(labels, len(sizes))


def normalize_rows(g):
    """Rescale outgoing weights to sum to one per node.

    Nodes with no outgoing arc receive a self loop of weight one before
    normalization; the repair count is logged. The result is directed even
    when the input is not, since row scaling breaks weight symmetry.
    """
    sums = g.weighted_out_degree()
    dead = np.flatnonzero(sums == 0.0)
    if dead.size:
        log.info("normalize_rows added self loops on %d sink node(s)", dead.size)
    edges = list(zip(g.src.tolist(), g.dst.tolist(), (g.weight / sums[g.src]).tolist()))
    edges.extend((int(i), int(i), 1.0) for i in dead)
    return WeightedGraph(g.node_count, edges, directed=True)
