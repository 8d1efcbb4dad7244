"""State update rules: averaging consensus, bounded confidence, influence
message passing on graphs and hypergraphs, and hypergraph diffusion.

Discrete maps advance one step per call; *_rhs functions evaluate the
continuous-time right-hand side, so one unit Euler step of a rhs reproduces
the matching discrete map. make_* builders return closures that precompute
whatever the similarity choice allows (static similarities are computed once
at setup; dynamic similarities are recomputed at every evaluation).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._state import from_matrix, to_matrix
from .errors import KernelNotNormalized, NotRowStochastic
from .graphs import Hypergraph, WeightedGraph
from .influence import SimilaritySpec, control_term, phi, similarity_dynamic, similarity_static

__all__ = [
    "fd_step",
    "hk_step",
    "odnet_rhs",
    "odnet_discrete_step",
    "make_odnet_rhs",
    "hypergraph_odnet_rhs",
    "make_hypergraph_odnet_rhs",
    "diffusion_kernel",
    "hypergraph_diffusion_rhs",
    "make_hypergraph_diffusion_rhs",
    "DynamicSpec",
    "KINDS",
]

KINDS = (
    "fd",
    "hk",
    "odnet-discrete",
    "odnet-continuous",
    "hypergraph-odnet",
    "hypergraph-diffusion",
)


def fd_step(g, x, tolerance=1e-9):
    """Averaging consensus step x_i <- sum_j w_ij x_j for row-stochastic w."""
    from .graphs import validate_row_stochastic

    if not validate_row_stochastic(g, tolerance):
        raise NotRowStochastic("fd_step needs row sums equal to one")
    x, flat = to_matrix(x)
    out = np.zeros_like(x)
    np.add.at(out, g.src, g.weight[:, None] * x[g.dst])
    return from_matrix(out, flat)


def hk_step(x, eps):
    """Bounded-confidence step: mean of all opinions strictly within eps.

    Every node always hears itself, so the neighborhood is never empty.
    Distances are Euclidean over full state rows; the interaction is
    all-to-all, no graph is involved.
    """
    if eps <= 0.0:
        raise ValueError("confidence radius eps must be positive")
    x, flat = to_matrix(x)
    diff = x[:, None, :] - x[None, :, :]
    within = np.linalg.norm(diff, axis=2) < eps
    counts = within.sum(axis=1)
    return from_matrix((within.astype(np.float64) @ x) / counts[:, None], flat)


# -- influence message passing on graphs ---------------------------------


def _arc_phi(g, x, cfg, sim):
    """Influence weights per stored arc under the given similarity spec."""
    if sim.is_dynamic:
        s = similarity_dynamic(x, (g.src, g.dst), temperature=sim.temperature)
    else:
        s = similarity_static(g)
    return phi(cfg, s)


def _accumulate(g, x, coeff):
    """Sum_j coeff_ij (x_j - x_i) for each source node i over stored arcs."""
    out = np.zeros_like(x)
    np.add.at(out, g.src, coeff[:, None] * (x[g.dst] - x[g.src]))
    return out


def odnet_rhs(g, x, cfg, sim=SimilaritySpec()):
    """Continuous-time influence dynamics: coupling plus confining control."""
    x, flat = to_matrix(x)
    out = _accumulate(g, x, _arc_phi(g, x, cfg, sim)) + control_term(cfg, x)
    return from_matrix(out, flat)


def odnet_discrete_step(g, x, cfg, sim=SimilaritySpec()):
    """One discrete influence step; equals a unit Euler step of odnet_rhs."""
    x = np.asarray(x, dtype=np.float64)
    return x + odnet_rhs(g, x, cfg, sim)


def make_odnet_rhs(g, cfg, sim=SimilaritySpec()):
    """Closure for odnet_rhs; static similarities are frozen at build time."""
    if sim.is_dynamic:

        def rhs(x):
            x, flat = to_matrix(x)
            s = similarity_dynamic(x, (g.src, g.dst), temperature=sim.temperature)
            out = _accumulate(g, x, phi(cfg, s)) + control_term(cfg, x)
            return from_matrix(out, flat)

    else:
        coeff = phi(cfg, similarity_static(g))

        def rhs(x):
            x, flat = to_matrix(x)
            out = _accumulate(g, x, coeff) + control_term(cfg, x)
            return from_matrix(out, flat)

    return rhs


# -- influence message passing on hypergraphs ----------------------------


def _hyperedge_pairs(h):
    """Ordered co-membership pairs (i_idx, j_idx), i != j, per hyperedge."""
    src, dst = [], []
    for e in range(h.edge_count):
        m = h.members(e)
        if m.size < 2:
            continue
        ii, jj = np.meshgrid(m, m, indexing="ij")
        keep = ii != jj
        src.append(ii[keep])
        dst.append(jj[keep])
    if src:
        return np.concatenate(src), np.concatenate(dst)
    return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)


def _hypergraph_static_phi(h, cfg):
    """Static influence weights per ordered co-membership pair.

    Static similarity on a hypergraph is the normalized-adjacency similarity
    of its clique expansion, shared by every hyperedge containing the pair.
    """
    g = h.clique_expansion()
    s_arc = similarity_static(g)
    lookup = {}
    for a, b, s in zip(g.src.tolist(), g.dst.tolist(), s_arc.tolist()):
        lookup[(a, b)] = s
    src, dst = _hyperedge_pairs(h)
    s = np.array([lookup[(int(a), int(b))] for a, b in zip(src, dst)])
    return src, dst, phi(cfg, s)


def make_hypergraph_odnet_rhs(h, cfg, sim=SimilaritySpec()):
    """Closure for the hypergraph influence rhs.

    Each hyperedge contributes couplings over all its ordered node pairs, so
    a pair sharing several hyperedges is counted once per hyperedge.
    """
    if sim.is_dynamic:
        src, dst = _hyperedge_pairs(h)

        def rhs(x):
            x, flat = to_matrix(x)
            s = similarity_dynamic(x, (src, dst), temperature=sim.temperature)
            out = np.zeros_like(x)
            np.add.at(out, src, phi(cfg, s)[:, None] * (x[dst] - x[src]))
            return from_matrix(out + control_term(cfg, x), flat)

    else:
        src, dst, coeff = _hypergraph_static_phi(h, cfg)

        def rhs(x):
            x, flat = to_matrix(x)
            out = np.zeros_like(x)
            np.add.at(out, src, coeff[:, None] * (x[dst] - x[src]))
            return from_matrix(out + control_term(cfg, x), flat)

    return rhs


def hypergraph_odnet_rhs(h, x, cfg, sim=SimilaritySpec()):
    """One-shot evaluation of the hypergraph influence rhs."""
    return make_hypergraph_odnet_rhs(h, cfg, sim)(x)


# -- hypergraph diffusion -------------------------------------------------


def diffusion_kernel(h, kind="uniform"):
    """Dense diffusion kernel K with rows summing to one.

    "uniform" spreads each node's unit mass evenly over its co-memberships:
    K_ij = C_ij / sum_j C_ij with C the shared-hyperedge count matrix
    (diagonal included). "hgnn" is the degree-normalized incidence product
    Dv^-1/2 H W De^-1 H^T Dv^-1/2 with unit hyperedge weights; its rows only
    sum to one on node-regular hypergraphs, and callers enforce that. Nodes
    in no hyperedge keep their state via K_ii = 1.
    """
    H = h.incidence.astype(np.float64)
    covered = H.any(axis=1)
    if kind == "uniform":
        C = H @ H.T
        t = C.sum(axis=1)
        t[t == 0.0] = 1.0
        K = C / t[:, None]
    elif kind == "hgnn":
        dv = H.sum(axis=1)
        de = H.sum(axis=0)
        dv_isqrt = np.divide(1.0, np.sqrt(dv), out=np.zeros_like(dv), where=dv > 0.0)
        K = (dv_isqrt[:, None] * H) @ (H.T / de[:, None]) * dv_isqrt[None, :]
    else:
        raise ValueError(f"unknown kernel kind {kind!r}")
    idx = np.flatnonzero(~covered)
    K[idx, idx] = 1.0
    return K


def _check_kernel(K):
    rows = K.sum(axis=1)
    if np.any(K < -1e-12) or np.any(np.abs(rows - 1.0) > 1e-9):
        raise KernelNotNormalized("kernel rows must be nonnegative and sum to one")


def make_hypergraph_diffusion_rhs(h, kernel="uniform"):
    """Closure computing dx/dt = -(I - K) x for a normalized kernel K."""
    K = diffusion_kernel(h, kernel)
    _check_kernel(K)

    def rhs(x):
        x = np.asarray(x, dtype=np.float64)
        return K @ x - x

    return rhs


def hypergraph_diffusion_rhs(h, x, kernel="uniform"):
    """One-shot evaluation of the hypergraph diffusion rhs."""
    return make_hypergraph_diffusion_rhs(h, kernel)(x)


# -- declarative run description ------------------------------------------


@dataclass
class DynamicSpec:
    """Which update rule to run, on what structure, with which knobs.

    The structure handle (graph or hypergraph) is attached separately from
    JSON since files are referenced by path in run manifests. hk_radius only
    applies to kind "hk"; kernel only to "hypergraph-diffusion"; influence
    and similarity to the odnet kinds.
    """

    kind: str
    structure: WeightedGraph | Hypergraph | None = None
    influence: "InfluenceConfig | None" = None
    similarity: SimilaritySpec = field(default_factory=SimilaritySpec)
    hk_radius: float = 0.1
    kernel: str = "uniform"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}")

    @property
    def is_discrete(self):
        return self.kind in ("fd", "hk", "odnet-discrete")

    def _need(self, what):
        if what == "graph" and not isinstance(self.structure, WeightedGraph):
            raise ValueError(f"kind {self.kind!r} needs a graph")
        if what == "hypergraph" and not isinstance(self.structure, Hypergraph):
            raise ValueError(f"kind {self.kind!r} needs a hypergraph")
        if what == "influence" and self.influence is None:
            raise ValueError(f"kind {self.kind!r} needs an influence config")

    def step_fn(self):
        """Discrete one-step map for the discrete kinds."""
        if self.kind == "fd":
            self._need("graph")
            g = self.structure
            return lambda x: fd_step(g, x)
        if self.kind == "hk":
            eps = self.hk_radius
            return lambda x: hk_step(x, eps)
        if self.kind == "odnet-discrete":
            self._need("graph")
            self._need("influence")
            rhs = make_odnet_rhs(self.structure, self.influence, self.similarity)
            return lambda x: np.asarray(x, dtype=np.float64) + rhs(x)
        raise ValueError(f"kind {self.kind!r} has no discrete step")

    def rhs_fn(self):
        """Continuous right-hand side for the continuous kinds."""
        if self.kind == "odnet-continuous":
            self._need("graph")
            self._need("influence")
            return make_odnet_rhs(self.structure, self.influence, self.similarity)
        if self.kind == "hypergraph-odnet":
            self._need("hypergraph")
            self._need("influence")
            return make_hypergraph_odnet_rhs(self.structure, self.influence, self.similarity)
        if self.kind == "hypergraph-diffusion":
            self._need("hypergraph")
            return make_hypergraph_diffusion_rhs(self.structure, self.kernel)
        raise ValueError(f"kind {self.kind!r} has no continuous rhs")

    def to_json(self):
        out = {"kind": self.kind}
        if self.influence is not None:
            out.update(self.influence.to_json())
        if self.kind in ("odnet-discrete", "odnet-continuous", "hypergraph-odnet"):
            out["similarity"] = self.similarity.kind
            out["temperature"] = self.similarity.temperature
        if self.kind == "hk":
            out["hk_radius"] = self.hk_radius
        if self.kind == "hypergraph-diffusion":
            out["kernel"] = self.kernel
        return out

    @classmethod
    def from_json(cls, obj, structure=None):
        from .influence import InfluenceConfig

        kind = str(obj["kind"])
        influence = None
        if "eps1" in obj:
            influence = InfluenceConfig.from_json(obj)
        sim = SimilaritySpec(
            kind=str(obj.get("similarity", "static")),
            temperature=float(obj.get("temperature", 1.0)),
        )
        return cls(
            kind=kind,
            structure=structure,
            influence=influence,
            similarity=sim,
            hk_radius=float(obj.get("hk_radius", 0.1)),
            kernel=str(obj.get("kernel", "uniform")),
        )
