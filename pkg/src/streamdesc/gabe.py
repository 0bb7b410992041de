"""GABE: normalized graphlet counts for all graphs on at most four vertices.

Connected subgraph counts are estimated on the stream, star counts come
from exact degrees, and disconnected counts follow from closed-form
combinatorics. Induced counts are recovered with the inverse overlap matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, permutations
from math import comb
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .enumeration import CLASS_EDGES, FOUR_CLASSES

STREAMED = ("triangle",) + FOUR_CLASSES

# (order, edge count, sorted degree sequence) -> symbolic name
_NAMES = {
    (2, 0, (0, 0)): "empty2",
    (2, 1, (1, 1)): "edge",
    (3, 0, (0, 0, 0)): "empty3",
    (3, 1, (0, 1, 1)): "edge_iso",
    (3, 2, (1, 1, 2)): "wedge",
    (3, 3, (2, 2, 2)): "triangle",
    (4, 0, (0, 0, 0, 0)): "empty4",
    (4, 1, (0, 0, 1, 1)): "edge_2iso",
    (4, 2, (1, 1, 1, 1)): "two_edges",
    (4, 2, (0, 1, 1, 2)): "wedge_iso",
    (4, 3, (0, 2, 2, 2)): "triangle_iso",
    (4, 3, (1, 1, 2, 2)): "path4",
    (4, 3, (1, 1, 1, 3)): "claw",
    (4, 4, (2, 2, 2, 2)): "cycle4",
    (4, 4, (1, 2, 2, 3)): "paw",
    (4, 5, (2, 2, 3, 3)): "diamond",
    (4, 6, (3, 3, 3, 3)): "clique4",
}


def canonical_form(order: int, edges) -> Tuple[Tuple[int, int], ...]:
    """Lexicographically smallest sorted edge tuple over all relabelings."""
    best = None
    for perm in permutations(range(order)):
        relabeled = tuple(sorted(
            (min(perm[a], perm[b]), max(perm[a], perm[b])) for a, b in edges
        ))
        if best is None or relabeled < best:
            best = relabeled
    return best


@dataclass(frozen=True)
class Graphlet:
    name: str
    order: int
    edges: Tuple[Tuple[int, int], ...]

    @property
    def num_edges(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class GraphletCatalog:
    graphs: Tuple[Graphlet, ...]
    order_blocks: Dict[int, range] = field(hash=False)

    def __len__(self):
        return len(self.graphs)

    @property
    def names(self) -> List[str]:
        return [g.name for g in self.graphs]

    def index(self, name: str) -> int:
        return self.names.index(name)

    def classify(self, order: int, edges) -> int:
        """Catalog index of the graph ``(order, edges)``."""
        return self._by_form[(order, canonical_form(order, edges))]

    @property
    def _by_form(self):
        return _form_index(self)


@lru_cache(maxsize=None)
def _form_index(catalog: GraphletCatalog):
    return {(g.order, g.edges): i for i, g in enumerate(catalog.graphs)}


@lru_cache(maxsize=None)
def build_catalog() -> GraphletCatalog:
    """All non-isomorphic graphs on 2, 3 and 4 vertices.

    Ordered by vertex count, then edge count, then canonical form.
    """
    graphs: List[Graphlet] = []
    blocks: Dict[int, range] = {}
    for k in (2, 3, 4):
        pairs = list(combinations(range(k), 2))
        forms = set()
        for r in range(len(pairs) + 1):
            for subset in combinations(pairs, r):
                forms.add(canonical_form(k, subset))
        start = len(graphs)
        for form in sorted(forms, key=lambda f: (len(f), f)):
            deg = [0] * k
            for a, b in form:
                deg[a] += 1
                deg[b] += 1
            name = _NAMES[(k, len(form), tuple(sorted(deg)))]
            graphs.append(Graphlet(name, k, form))
        blocks[k] = range(start, len(graphs))
    return GraphletCatalog(tuple(graphs), blocks)


@lru_cache(maxsize=None)
def build_overlap_matrix(catalog: GraphletCatalog | None = None) -> np.ndarray:
    """``O[i, j]`` = number of edge subsets of ``F_j`` isomorphic to ``F_i``
    (zero across different orders)."""
    catalog = catalog or build_catalog()
    n = len(catalog)
    overlap = np.zeros((n, n), dtype=np.int64)
    for j, fj in enumerate(catalog.graphs):
        for r in range(fj.num_edges + 1):
            for subset in combinations(fj.edges, r):
                overlap[catalog.classify(fj.order, subset), j] += 1
    if not np.array_equal(overlap, np.triu(overlap)) or not np.all(np.diag(overlap) == 1):
        raise AssertionError("overlap matrix must be unit upper triangular")
    return overlap


@lru_cache(maxsize=None)
def overlap_inverse() -> np.ndarray:
    """Exact integer inverse of the unit upper-triangular overlap matrix."""
    overlap = build_overlap_matrix()
    n = overlap.shape[0]
    inv = np.zeros_like(overlap)
    for col in range(n):
        # Back-substitution for O x = e_col.
        x = [0] * n
        for i in range(n - 1, -1, -1):
            s = int(i == col)
            for k in range(i + 1, n):
                s -= int(overlap[i, k]) * x[k]
            x[i] = s
        inv[:, col] = x
    return inv


def _binom(n, k: int):
    if n < k or n < 0:
        return 0
    return comb(int(n), k)


def exact_star_and_wedge_counts(degrees: Sequence[int]) -> Tuple[int, int]:
    """Wedge and claw counts from a degree table."""
    wedge = sum(d * (d - 1) // 2 for d in degrees)
    claw = sum(d * (d - 1) * (d - 2) // 6 for d in degrees)
    return wedge, claw


def disconnected_counts(num_vertices: int, num_edges: int, wedge: float,
                        triangle: float) -> Dict[str, float]:
    """Subgraph counts of the classes that are empty or disconnected."""
    n, m = num_vertices, num_edges
    return {
        "empty2": _binom(n, 2),
        "empty3": _binom(n, 3),
        "empty4": _binom(n, 4),
        "edge_iso": m * max(n - 2, 0),
        "edge_2iso": m * _binom(n - 2, 2),
        "two_edges": _binom(m, 2) - wedge,
        "wedge_iso": wedge * max(n - 3, 0),
        "triangle_iso": triangle * max(n - 3, 0),
    }


@dataclass
class GabeCounts:
    """Raw single-pass output: exact counters plus streamed estimates."""

    num_vertices: int
    num_edges: int
    degrees: np.ndarray
    estimates: Dict[str, float]

    def subgraph_vector(self) -> np.ndarray:
        """The 17 subgraph counts in catalog order."""
        catalog = build_catalog()
        wedge, claw = exact_star_and_wedge_counts(self.degrees.tolist())
        values = dict(self.estimates)
        values.update(disconnected_counts(
            self.num_vertices, self.num_edges, wedge, self.estimates["triangle"]
        ))
        values.update(edge=self.num_edges, wedge=wedge, claw=claw)
        return np.array([float(values[name]) for name in catalog.names])

    @classmethod
    def mean(cls, items: Sequence["GabeCounts"]) -> "GabeCounts":
        first = items[0]
        return cls(
            first.num_vertices,
            first.num_edges,
            first.degrees,
            {k: float(np.mean([it.estimates[k] for it in items])) for k in first.estimates},
        )


class GabeEstimator:
    """Streaming estimator of connected subgraph counts plus exact degrees."""

    def __init__(self):
        self.estimates = dict.fromkeys(STREAMED, 0.0)
        self.degree: Dict[int, int] = {}
        self.num_edges = 0
        self.max_label = -1

    def observe(self, arrival) -> None:
        u, v = arrival.u, arrival.v
        deg = self.degree
        deg[u] = deg.get(u, 0) + 1
        deg[v] = deg.get(v, 0) + 1
        self.num_edges += 1
        if u > self.max_label or v > self.max_label:
            self.max_label = max(self.max_label, u, v)

        sample = arrival.sample
        if not (sample.neighbors(u) or sample.neighbors(v)):
            return
        tri = arrival.triangles
        if tri:
            self.estimates["triangle"] += len(tri) * arrival.weight(3)
        for cls, count in arrival.four_vertex_totals.items():
            if count:
                self.estimates[cls] += count * arrival.weight(CLASS_EDGES[cls])

    def result(self) -> GabeCounts:
        n = self.max_label + 1
        degrees = np.zeros(n, dtype=np.int64)
        for v, d in self.degree.items():
            degrees[v] = d
        return GabeCounts(n, self.num_edges, degrees, dict(self.estimates))


@dataclass
class GabeDescriptor:
    values: np.ndarray
    budget_used: int = 0
    degenerate_orders: Tuple[int, ...] = ()

    def __len__(self):
        return len(self.values)


def induced_from_subgraph(h: np.ndarray) -> np.ndarray:
    return overlap_inverse() @ h


def normalize_induced(induced: np.ndarray, num_vertices: int) -> Tuple[np.ndarray, Tuple[int, ...]]:
    """Divide each order-k block by C(|V|, k); blocks with |V| < k become zeros."""
    catalog = build_catalog()
    phi = np.zeros(len(catalog))
    degenerate = []
    for k, block in catalog.order_blocks.items():
        total = _binom(num_vertices, k)
        if total == 0:
            degenerate.append(k)
            continue
        sl = slice(block.start, block.stop)
        phi[sl] = induced[sl] / total
    return phi, tuple(degenerate)


def assemble_gabe(counts: GabeCounts, budget: int = 0) -> GabeDescriptor:
    if counts.num_vertices < 2:
        return GabeDescriptor(np.zeros(len(build_catalog())), budget, (2, 3, 4))
    induced = induced_from_subgraph(counts.subgraph_vector())
    phi, degenerate = normalize_induced(induced, counts.num_vertices)
    return GabeDescriptor(phi, budget, degenerate)
