"""Bounded-confidence influence weights, similarity measures, state control.

The influence function maps a pairwise similarity s in [0, 1] to a coupling
weight. Below the lower confidence bound the coupling is zero (attract mode)
or repulsive (attract-repulse mode); inside the confidence band it is the
identity; above the upper bound it is amplified by mu.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import OutOfRangeSimilarity, ZeroDegree

__all__ = [
    "InfluenceConfig",
    "SimilaritySpec",
    "phi",
    "similarity_static",
    "similarity_dynamic",
    "control_term",
]

MODES = ("attract", "attract-repulse")

STATIC = "static-normalized-adjacency"
DYNAMIC = "dynamic-cosine"
_KIND_ALIASES = {"static": STATIC, "dynamic": DYNAMIC, STATIC: STATIC, DYNAMIC: DYNAMIC}


@dataclass(frozen=True)
class InfluenceConfig:
    """Piecewise influence profile plus the control strength lam.

    eps1 <= eps2 bound the confidence band. In attract mode nu is ignored
    (treated as zero); in attract-repulse mode mu must be positive and nu
    nonpositive (nu == 0 is allowed so ablations can switch repulsion off).
    """

    eps1: float
    eps2: float
    mu: float = 1.0
    nu: float = 0.0
    lam: float = 0.0
    mode: str = "attract"

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if not (0.0 <= self.eps1 <= self.eps2 <= 1.0):
            raise ValueError("need 0 <= eps1 <= eps2 <= 1")
        if self.lam < 0.0:
            raise ValueError("control strength lam must be >= 0")
        if self.mode == "attract-repulse":
            if self.mu <= 0.0:
                raise ValueError("attract-repulse mode needs mu > 0")
            if self.nu > 0.0:
                raise ValueError("attract-repulse mode needs nu <= 0")

    def to_json(self):
        return {
            "eps1": self.eps1,
            "eps2": self.eps2,
            "mu": self.mu,
            "nu": self.nu,
            "lambda": self.lam,
            "mode": self.mode,
        }

    @classmethod
    def from_json(cls, obj):
        return cls(
            eps1=float(obj["eps1"]),
            eps2=float(obj["eps2"]),
            mu=float(obj.get("mu", 1.0)),
            nu=float(obj.get("nu", 0.0)),
            lam=float(obj.get("lambda", 0.0)),
            mode=str(obj.get("mode", "attract")),
        )

    def with_nu(self, nu):
        """Copy with a different repulsion strength (ablation helper)."""
        return replace(self, nu=nu)


@dataclass(frozen=True)
class SimilaritySpec:
    """Choice of similarity measure driving the influence function.

    kind is the canonical name ("static-normalized-adjacency" or
    "dynamic-cosine"; the short aliases "static" and "dynamic" are accepted).
    temperature divides the cosine before the affine map to [0, 1] and only
    applies to the dynamic kind; values are clipped back into [0, 1].
    """

    kind: str = STATIC
    temperature: float = 1.0

    def __post_init__(self):
        kind = _KIND_ALIASES.get(self.kind)
        if kind is None:
            raise ValueError(f"unknown similarity kind {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        if self.temperature <= 0.0:
            raise ValueError("temperature must be positive")

    @property
    def is_dynamic(self):
        return self.kind == DYNAMIC


def phi(cfg, s):
    """Influence weight for similarity s (scalar or array), vectorized.

    attract:          mu * s  if s > eps2;  s  if eps1 <= s <= eps2;  0 else
    attract-repulse:  same upper branches;  nu * (1 - s) below the band
    """
    arr = np.asarray(s, dtype=np.float64)
    if arr.size and (np.min(arr) < 0.0 or np.max(arr) > 1.0 or not np.all(np.isfinite(arr))):
        raise OutOfRangeSimilarity("similarity outside [0, 1]")
    nu = cfg.nu if cfg.mode == "attract-repulse" else 0.0
    below = nu * (1.0 - arr)
    out = np.where(arr > cfg.eps2, cfg.mu * arr, np.where(arr >= cfg.eps1, arr, below))
    if np.isscalar(s) or arr.ndim == 0:
        return float(out)
    return out


def similarity_static(g):
    """Normalized-adjacency similarity per stored arc.

    s_ij = w_ij / sqrt(d_i * d_j) with weighted degrees d, clipped to [0, 1].
    Expects an undirected (or pre-symmetrized) graph; defined only on arcs
    that exist. Returned array is aligned with g.src / g.dst.
    """
    d = g.weighted_out_degree()
    touched = np.union1d(g.src, g.dst)
    if np.any(d[touched] <= 0.0):
        raise ZeroDegree("node with an arc has zero weighted degree")
    s = g.weight / np.sqrt(d[g.src] * d[g.dst])
    return np.clip(s, 0.0, 1.0)


def similarity_dynamic(x, pairs, temperature=1.0):
    """Cosine similarity of state rows mapped affinely into [0, 1].

    pairs is an (i_idx, j_idx) pair of index arrays. Zero rows have cosine
    zero by convention, i.e. similarity one half. A temperature below one
    sharpens the map; results are clipped to [0, 1].
    """
    i_idx, j_idx = pairs
    xi, xj = x[i_idx], x[j_idx]
    ni = np.linalg.norm(xi, axis=-1)
    nj = np.linalg.norm(xj, axis=-1)
    denom = ni * nj
    dot = np.einsum("...k,...k->...", xi, xj)
    cos = np.divide(dot, denom, out=np.zeros_like(dot), where=denom > 0.0)
    s = 0.5 * (cos / temperature + 1.0)
    return np.clip(s, 0.0, 1.0)


def control_term(cfg, x):
    """Confining control -lam * x, applied rowwise to the state."""
    return -cfg.lam * np.asarray(x, dtype=np.float64)
