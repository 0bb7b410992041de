"""SANTA: Taylor-approximated heat and wave trace signatures.

Pass one records exact degrees. Pass two accumulates ``tr(L^n)`` for
``n = 2, 3, 4`` of the normalized Laplacian as weighted sums over closed
walks, grouped by the subgraph (edge, wedge, triangle, 4-cycle) each walk
covers. Vertex and edge terms are exact; the rest are sampled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .graph_io import Edge, GraphFormatError, PreparedStream
from .sampling import stream_drive

NUM_POINTS = 60
J_GRID = np.logspace(-3, 0, NUM_POINTS)
J_GRID[0], J_GRID[-1] = 0.001, 1.0

VARIANT_CODES = ("hn", "he", "hc", "wn", "we", "wc")


class SantaVariant(NamedTuple):
    kernel: str         # "heat" | "wave"
    normalization: str  # "none" | "empty" | "complete"

    @property
    def code(self) -> str:
        return self.kernel[0] + self.normalization[0]

    @classmethod
    def from_code(cls, code: str) -> "SantaVariant":
        kernels = {"h": "heat", "w": "wave"}
        norms = {"n": "none", "e": "empty", "c": "complete"}
        if len(code) != 2 or code[0] not in kernels or code[1] not in norms:
            raise ValueError(f"unknown SANTA variant {code!r}")
        return cls(kernels[code[0]], norms[code[1]])


ALL_VARIANTS = tuple(SantaVariant.from_code(c) for c in VARIANT_CODES)


@dataclass
class DegreeTable:
    degree: np.ndarray

    @property
    def num_positive(self) -> int:
        return int(np.count_nonzero(self.degree))

    @property
    def num_vertices(self) -> int:
        return len(self.degree)


def degree_pass(stream: PreparedStream | Iterable[Edge], num_vertices: int | None = None) -> DegreeTable:
    if num_vertices is None:
        num_vertices = getattr(stream, "num_vertices", None)
    edges = list(stream)
    if num_vertices is None:
        num_vertices = 1 + max((max(e) for e in edges), default=-1)
    degree = np.zeros(num_vertices, dtype=np.int64)
    for u, v in edges:
        degree[u] += 1
        degree[v] += 1
    return DegreeTable(degree)


@dataclass
class TraceEstimates:
    tr_identity: int
    tr_l1: int
    tau2: float
    tau3: float
    tau4: float

    @classmethod
    def mean(cls, items: Sequence["TraceEstimates"]) -> "TraceEstimates":
        first = items[0]
        return cls(
            first.tr_identity,
            first.tr_l1,
            float(np.mean([it.tau2 for it in items])),
            float(np.mean([it.tau3 for it in items])),
            float(np.mean([it.tau4 for it in items])),
        )


class TraceEstimator:
    """Second-pass estimator; needs the exact degree table from pass one."""

    def __init__(self, degrees: DegreeTable):
        self.deg = [float(d) for d in degrees.degree]
        self.table = degrees
        self.tau2 = 0.0
        self.tau3 = 0.0
        self.tau4 = 0.0

    def observe(self, arrival) -> None:
        u, v = arrival.u, arrival.v
        deg = self.deg
        if u >= len(deg) or v >= len(deg) or deg[u] == 0 or deg[v] == 0:
            raise GraphFormatError(f"edge ({u}, {v}) not covered by the degree table")
        du, dv = deg[u], deg[v]
        inv = 1.0 / (du * dv)
        self.tau2 += 2 * inv
        self.tau3 += 6 * inv
        self.tau4 += 12 * inv + 2 * inv * inv

        sample = arrival.sample
        if not (sample.neighbors(u) or sample.neighbors(v)):
            return

        wedge_sum = 0.0
        for a, c, center in arrival.wedges:
            dc = deg[center]
            wedge_sum += 1.0 / (deg[a] * dc * dc * deg[c])
        if wedge_sum:
            self.tau4 += 4 * wedge_sum * arrival.weight(2)

        tri = arrival.triangles
        if tri:
            s = sum(1.0 / deg[w] for w in tri) * inv
            w3 = arrival.weight(3)
            self.tau3 -= 6 * s * w3
            self.tau4 -= 24 * s * w3

        if len(sample) >= 3:
            cyc = arrival.cycle4_weight(deg)
            if cyc:
                self.tau4 += 8 * cyc * inv * arrival.weight(4)

    def result(self) -> TraceEstimates:
        n_pos = self.table.num_positive
        return TraceEstimates(
            self.table.num_vertices,
            n_pos,
            n_pos + self.tau2,
            n_pos + self.tau3,
            n_pos + self.tau4,
        )


def trace_estimates(stream: PreparedStream, degrees: DegreeTable, budget: int,
                    seed: int = 0) -> TraceEstimates:
    (traces,) = stream_drive(stream, [TraceEstimator(degrees)], budget, seed)
    return traces


def taylor_psi(traces: TraceEstimates, j: float, variant: SantaVariant,
               num_vertices: int | None = None, terms: int = 5) -> float:
    """Truncated Taylor series of the heat or wave trace at scale ``j``.

    ``terms`` counts series terms starting from ``tr(I)``. The wave kernel
    keeps only the real (even) terms.
    """
    if j <= 0:
        raise ValueError("j must be positive")
    n = traces.tr_identity if num_vertices is None else num_vertices
    if n <= 0:
        raise ValueError("descriptor undefined for an empty graph")
    tr = (traces.tr_identity, traces.tr_l1, traces.tau2, traces.tau3, traces.tau4)
    s = 0.0
    for k in range(min(terms, 5)):
        if variant.kernel == "heat":
            s += (-j) ** k / math.factorial(k) * tr[k]
        elif k % 2 == 0:
            # (−ij)^k is real only for even k: (−1)^(k/2) j^k
            s += (-1) ** (k // 2) * j ** k / math.factorial(k) * tr[k]
    return s * _normalization(variant, j, n)


def _normalization(variant: SantaVariant, j: float, n: int) -> float:
    if variant.normalization == "none":
        return 1.0
    if variant.normalization == "empty":
        return 1.0 / n
    if variant.kernel == "heat":
        return 1.0 / (1 + (n - 1) * math.exp(-j))
    return 1.0 / (1 + (n - 1) * math.cos(j))


@dataclass
class SantaDescriptor:
    values: np.ndarray
    variant: SantaVariant
    budget_used: int = 0

    def __len__(self):
        return len(self.values)


def assemble_santa(traces: TraceEstimates, variant: SantaVariant,
                   num_vertices: int | None = None, budget: int = 0) -> SantaDescriptor:
    values = np.array([taylor_psi(traces, j, variant, num_vertices) for j in J_GRID])
    return SantaDescriptor(values, variant, budget)
