"""Brute-force ground truth for small graphs.

Works on a dense boolean adjacency matrix and never touches the streaming
code paths, so agreement between the two is meaningful.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np

from .gabe import build_catalog, normalize_induced
from .maeve import VertexAccumulators, assemble_maeve, vertex_features
from .santa import SantaVariant, TraceEstimates, assemble_santa

SUBGRAPH_LIMIT = 14
FEATURE_LIMIT = 500
TRACE_LIMIT = 2000


class OracleSizeError(ValueError):
    pass


@dataclass(frozen=True)
class DenseGraph:
    adjacency: np.ndarray

    def __post_init__(self):
        a = self.adjacency
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("adjacency must be square")
        if np.any(np.diag(a)) or not np.array_equal(a, a.T):
            raise ValueError("adjacency must be symmetric with zero diagonal")

    @property
    def num_vertices(self) -> int:
        return self.adjacency.shape[0]

    @classmethod
    def from_edges(cls, edges: Iterable[Tuple[int, int]], num_vertices: int | None = None) -> "DenseGraph":
        edges = list(edges)
        n = num_vertices if num_vertices is not None else 1 + max((max(e) for e in edges), default=-1)
        a = np.zeros((n, n), dtype=bool)
        for u, v in edges:
            a[u, v] = a[v, u] = True
        return cls(a)


def _guard(graph: DenseGraph, limit: int, what: str) -> None:
    if graph.num_vertices > limit:
        raise OracleSizeError(f"{what} oracle limited to {limit} vertices, got {graph.num_vertices}")


_POSITION_PAIRS = {k: list(combinations(range(k), 2)) for k in (2, 3, 4)}
_pattern_cache: Dict[Tuple[int, int], np.ndarray] = {}


def _subgraph_counts_of_pattern(k: int, mask: int) -> np.ndarray:
    """Subgraph counts (per catalog class) of all edge subsets of the
    ``k``-vertex pattern encoded by ``mask`` over position pairs."""
    key = (k, mask)
    hit = _pattern_cache.get(key)
    if hit is None:
        catalog = build_catalog()
        present = [p for bit, p in enumerate(_POSITION_PAIRS[k]) if mask >> bit & 1]
        hit = np.zeros(len(catalog), dtype=np.int64)
        for r in range(len(present) + 1):
            for subset in combinations(present, r):
                hit[catalog.classify(k, subset)] += 1
        _pattern_cache[key] = hit
    return hit


def _pattern_mask(adj: np.ndarray, verts: Sequence[int]) -> int:
    mask = 0
    for bit, (a, b) in enumerate(_POSITION_PAIRS[len(verts)]):
        if adj[verts[a], verts[b]]:
            mask |= 1 << bit
    return mask


def _pattern_histogram(graph: DenseGraph) -> Dict[Tuple[int, int], int]:
    adj = graph.adjacency
    hist: Dict[Tuple[int, int], int] = {}
    for k in (2, 3, 4):
        for verts in combinations(range(graph.num_vertices), k):
            key = (k, _pattern_mask(adj, verts))
            hist[key] = hist.get(key, 0) + 1
    return hist


def exact_subgraph_counts(graph: DenseGraph, limit: int = SUBGRAPH_LIMIT) -> np.ndarray:
    """Number of (vertex set, edge subset) pairs isomorphic to each catalog
    graph, by enumerating every vertex subset of size 2-4 and every subset
    of its induced edges."""
    _guard(graph, limit, "subgraph")
    total = np.zeros(len(build_catalog()), dtype=np.int64)
    for (k, mask), count in _pattern_histogram(graph).items():
        total += count * _subgraph_counts_of_pattern(k, mask)
    return total


def exact_induced_counts(graph: DenseGraph, limit: int = SUBGRAPH_LIMIT) -> np.ndarray:
    _guard(graph, limit, "subgraph")
    catalog = build_catalog()
    total = np.zeros(len(catalog), dtype=np.int64)
    for (k, mask), count in _pattern_histogram(graph).items():
        edges = [p for bit, p in enumerate(_POSITION_PAIRS[k]) if mask >> bit & 1]
        total[catalog.classify(k, edges)] += count
    return total


def exact_vertex_counts(graph: DenseGraph, limit: int = FEATURE_LIMIT) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-vertex degree, triangle count, and three-path endpoint count."""
    _guard(graph, limit, "vertex feature")
    adj = graph.adjacency
    n = graph.num_vertices
    nbrs = [np.flatnonzero(adj[v]).tolist() for v in range(n)]
    degree = np.array([len(x) for x in nbrs], dtype=np.int64)
    tri = np.zeros(n, dtype=np.int64)
    path = np.zeros(n, dtype=np.int64)
    for v in range(n):
        for a, b in combinations(nbrs[v], 2):
            if adj[a, b]:
                tri[v] += 1
        for u in nbrs[v]:
            for w in nbrs[u]:
                if w != v:
                    path[v] += 1
    return degree, tri, path


def exact_vertex_features(graph: DenseGraph, limit: int = FEATURE_LIMIT):
    d, t, p = exact_vertex_counts(graph, limit)
    return (d, t, p), vertex_features(d, t, p)


def normalized_laplacian(graph: DenseGraph) -> np.ndarray:
    a = graph.adjacency.astype(float)
    d = a.sum(axis=1)
    inv_sqrt = np.zeros_like(d)
    inv_sqrt[d > 0] = 1 / np.sqrt(d[d > 0])
    lap = -a * inv_sqrt[:, None] * inv_sqrt[None, :]
    lap[np.diag_indices_from(lap)] = (d > 0).astype(float)
    return lap


def exact_traces(graph: DenseGraph, limit: int = TRACE_LIMIT) -> Tuple[float, float, float, float]:
    """``tr(L^n)`` for ``n = 1..4`` by repeated dense matrix products."""
    _guard(graph, limit, "trace")
    lap = normalized_laplacian(graph)
    out = []
    power = np.eye(graph.num_vertices)
    for _ in range(4):
        power = power @ lap
        out.append(float(np.trace(power)))
    return tuple(out)


def closed_form_heat_wave(eigenvalues: Sequence[float], j: float, kernel: str = "heat",
                          normalization: str = "none") -> float:
    lam = np.asarray(eigenvalues, dtype=float)
    n = len(lam)
    if kernel == "heat":
        s = float(np.sum(np.exp(-j * lam)))
        complete = 1 + (n - 1) * np.exp(-j)
    elif kernel == "wave":
        s = float(np.sum(np.cos(j * lam)))
        complete = 1 + (n - 1) * np.cos(j)
    else:
        raise ValueError(f"unknown kernel {kernel!r}")
    if normalization == "none":
        return s
    if normalization == "empty":
        return s / n
    if normalization == "complete":
        return float(s / complete)
    raise ValueError(f"unknown normalization {normalization!r}")


def cycle_eigenvalues(n: int) -> np.ndarray:
    """Normalized Laplacian spectrum of the cycle C_n."""
    return 1 - np.cos(2 * np.pi * np.arange(n) / n)


def golden_record(graph_id, graph: DenseGraph) -> dict:
    (d, t, p), _ = exact_vertex_features(graph)
    return {
        "graph_id": graph_id,
        "H": exact_subgraph_counts(graph).tolist(),
        "H_induced": exact_induced_counts(graph).tolist(),
        "vertex_features": {"degree": d.tolist(), "triangles": t.tolist(), "paths": p.tolist()},
        "traces": list(exact_traces(graph)),
    }


def write_golden(records: List[dict], path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(records, f, indent=1, sort_keys=True)
        f.write("\n")


def exact_descriptor(graph: DenseGraph, descriptor: str) -> np.ndarray:
    """Descriptor vector computed from exact counts and traces."""
    n = graph.num_vertices
    kind = descriptor.split("-")[0]
    if kind == "gabe":
        if n < 2:
            return np.zeros(len(build_catalog()))
        return normalize_induced(exact_induced_counts(graph).astype(float), n)[0]
    if kind == "maeve":
        d, t, p = exact_vertex_counts(graph)
        return assemble_maeve(VertexAccumulators(d, t.astype(float), p.astype(float))).values
    if kind == "santa":
        if n == 0:
            return np.zeros(60)
        _, tr2, tr3, tr4 = exact_traces(graph)
        positive = int(np.count_nonzero(graph.adjacency.any(axis=1)))
        traces = TraceEstimates(n, positive, tr2, tr3, tr4)
        return assemble_santa(traces, SantaVariant.from_code(descriptor.split("-")[1]), n).values
    raise ValueError(f"unknown descriptor {descriptor!r}")
