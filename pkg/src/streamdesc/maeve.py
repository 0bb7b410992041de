"""MAEVE: moments of per-vertex features estimated in one pass.

Each vertex carries its exact degree and unbiased estimates of the number
of triangles it belongs to and of three-vertex paths it ends. All five
vertex features are affine in those two estimates.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Sequence, Tuple

import numpy as np

FEATURES = ("degree", "clustering", "avg_nbr_degree", "egonet_edges", "egonet_leaving")
MOMENTS = ("mean", "std", "skewness", "kurtosis")


@dataclass
class VertexAccumulators:
    degree: np.ndarray
    tri_est: np.ndarray
    path_est: np.ndarray

    @property
    def num_vertices(self) -> int:
        return len(self.degree)

    @classmethod
    def mean(cls, items: Sequence["VertexAccumulators"]) -> "VertexAccumulators":
        return cls(
            items[0].degree,
            np.mean([it.tri_est for it in items], axis=0),
            np.mean([it.path_est for it in items], axis=0),
        )


class MaeveEstimator:
    def __init__(self):
        self.degree: Dict[int, int] = {}
        self.tri: Dict[int, float] = {}
        self.path: Dict[int, float] = {}
        self.max_label = -1

    def observe(self, arrival) -> None:
        u, v = arrival.u, arrival.v
        deg = self.degree
        deg[u] = deg.get(u, 0) + 1
        deg[v] = deg.get(v, 0) + 1
        if u > self.max_label or v > self.max_label:
            self.max_label = max(self.max_label, u, v)

        wedges = arrival.wedges
        if not wedges:
            return
        path = self.path
        w2 = arrival.weight(2)
        for a, c, _ in wedges:
            path[a] = path.get(a, 0.0) + w2
            path[c] = path.get(c, 0.0) + w2
        tri_third = arrival.triangles
        if tri_third:
            w3 = arrival.weight(3)
            tri = self.tri
            tri[u] = tri.get(u, 0.0) + w3 * len(tri_third)
            tri[v] = tri.get(v, 0.0) + w3 * len(tri_third)
            for w in tri_third:
                tri[w] = tri.get(w, 0.0) + w3

    def result(self) -> VertexAccumulators:
        n = self.max_label + 1
        degree = np.zeros(n, dtype=np.int64)
        tri = np.zeros(n)
        path = np.zeros(n)
        for v, d in self.degree.items():
            degree[v] = d
        for v, x in self.tri.items():
            tri[v] = x
        for v, x in self.path.items():
            path[v] = x
        return VertexAccumulators(degree, tri, path)


def vertex_features(d, T, P) -> Tuple:
    """Degree, clustering coefficient, mean neighbor degree, egonet edges,
    and edges leaving the egonet, from ``(d, T, P)``.

    Works elementwise on numpy arrays as well as on scalars. Clustering is
    0 for ``d < 2`` and mean neighbor degree is 0 for ``d == 0``.
    """
    d = np.asarray(d, dtype=float)
    T = np.asarray(T, dtype=float)
    P = np.asarray(P, dtype=float)
    pairs = d * (d - 1) / 2
    with np.errstate(divide="ignore", invalid="ignore"):
        clustering = np.where(d >= 2, T / np.where(pairs > 0, pairs, 1), 0.0)
        avg_nbr = np.where(d > 0, 1 + P / np.where(d > 0, d, 1), 0.0)
    egonet_edges = np.where(d > 0, d + T, 0.0)
    leaving = np.where(d > 0, P - 2 * T, 0.0)
    out = (d, clustering, avg_nbr, egonet_edges, leaving)
    if d.ndim == 0:
        return tuple(float(x) for x in out)
    return out


def moments(values) -> Tuple[float, float, float, float]:
    """Population mean, standard deviation, skewness and (raw) kurtosis.

    Skewness and kurtosis are 0 when the standard deviation is 0.
    """
    x = np.asarray(values, dtype=float)
    if x.size == 0:
        return 0.0, 0.0, 0.0, 0.0
    mu = x.mean()
    dev = x - mu
    var = np.mean(dev ** 2)
    sigma = np.sqrt(var)
    if sigma == 0 or sigma <= 1e-12 * max(1.0, abs(mu)):
        return float(mu), 0.0, 0.0, 0.0
    skew = np.mean(dev ** 3) / sigma ** 3
    kurt = np.mean(dev ** 4) / var ** 2
    return float(mu), float(sigma), float(skew), float(kurt)


@dataclass
class MaeveDescriptor:
    values: np.ndarray
    budget_used: int = 0

    def __len__(self):
        return len(self.values)


def assemble_maeve(acc: VertexAccumulators, budget: int = 0) -> MaeveDescriptor:
    """Four moments of each of the five features, feature-major (20 values)."""
    feats = vertex_features(acc.degree, acc.tri_est, acc.path_est)
    values = np.array([m for f in feats for m in moments(np.atleast_1d(f))])
    return MaeveDescriptor(values, budget)
