"""Master/worker averaging of raw streaming estimates.

Each worker owns a reservoir and RNG and replays the same edge order.
Raw estimates are averaged first; descriptors are assembled afterwards.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Sequence

import numpy as np

from .gabe import GabeCounts, GabeEstimator, assemble_gabe
from .graph_io import PreparedStream
from .maeve import MaeveEstimator, VertexAccumulators, assemble_maeve
from .sampling import stream_drive
from .santa import SantaVariant, TraceEstimates, TraceEstimator, assemble_santa, degree_pass
from .seeding import mix_seed

KINDS = ("gabe", "maeve", "santa")
DESCRIPTORS = ("gabe", "maeve", "santa-hn", "santa-he", "santa-hc",
               "santa-wn", "santa-we", "santa-wc")
DIMENSIONS = {"gabe": 17, "maeve": 20, "santa": 60}


@dataclass(frozen=True)
class EnsembleConfig:
    workers: int = 1
    base_seed: int = 0
    budget_per_worker: int = 1

    def __post_init__(self):
        if self.workers < 1:
            raise ValueError("need at least one worker")
        if self.budget_per_worker < 1:
            raise ValueError("budget must be positive")

    def worker_seed(self, index: int) -> int:
        return mix_seed(self.base_seed, index)


def _averagers():
    return {"gabe": GabeCounts.mean, "maeve": VertexAccumulators.mean,
            "santa": TraceEstimates.mean}


def _pad(values: np.ndarray, n: int) -> np.ndarray:
    """Extend per-vertex arrays with zeros for isolated trailing vertices."""
    out = np.zeros(n, dtype=values.dtype)
    out[: len(values)] = values
    return out


def run_workers(stream: PreparedStream, kinds: Sequence[str], config: EnsembleConfig) -> Dict[str, object]:
    """Run every worker once with all requested estimators attached.

    Returns the averaged raw estimates per kind.
    """
    for kind in kinds:
        if kind not in KINDS:
            raise ValueError(f"unknown estimator kind {kind!r}")
    degrees = degree_pass(stream) if "santa" in kinds else None

    per_kind: Dict[str, list] = {k: [] for k in kinds}
    for w in range(config.workers):
        estimators = []
        for kind in kinds:
            if kind == "gabe":
                estimators.append(GabeEstimator())
            elif kind == "maeve":
                estimators.append(MaeveEstimator())
            else:
                estimators.append(TraceEstimator(degrees))
        results = stream_drive(stream, estimators, config.budget_per_worker,
                               config.worker_seed(w))
        for kind, res in zip(kinds, results):
            per_kind[kind].append(res)

    avg = _averagers()
    out = {}
    for kind, items in per_kind.items():
        out[kind] = items[0] if len(items) == 1 else avg[kind](items)
    n = stream.num_vertices
    if "gabe" in out and out["gabe"].num_vertices < n:
        g = out["gabe"]
        out["gabe"] = GabeCounts(n, g.num_edges, _pad(g.degrees, n), g.estimates)
    if "maeve" in out and out["maeve"].num_vertices < n:
        a = out["maeve"]
        out["maeve"] = VertexAccumulators(_pad(a.degree, n), _pad(a.tri_est, n), _pad(a.path_est, n))
    return out


def run_ensemble(stream: PreparedStream, kind: str, config: EnsembleConfig):
    return run_workers(stream, [kind], config)[kind]


def descriptor_kind(descriptor: str) -> str:
    if descriptor not in DESCRIPTORS:
        raise ValueError(f"unknown descriptor {descriptor!r}; choose from {', '.join(DESCRIPTORS)}")
    return descriptor.split("-")[0]


def assemble(descriptor: str, raw, num_vertices: int, budget: int = 0) -> np.ndarray:
    """Turn averaged raw estimates into the named descriptor's vector."""
    kind = descriptor_kind(descriptor)
    if kind == "gabe":
        return assemble_gabe(raw, budget).values
    if kind == "maeve":
        return assemble_maeve(raw, budget).values
    variant = SantaVariant.from_code(descriptor.split("-")[1])
    if num_vertices == 0:
        return np.zeros(DIMENSIONS["santa"])
    return assemble_santa(raw, variant, num_vertices, budget).values


def compute_descriptor(stream: PreparedStream, descriptor: str, budget: int,
                       workers: int = 1, seed: int = 0) -> np.ndarray:
    kind = descriptor_kind(descriptor)
    config = EnsembleConfig(workers, seed, budget)
    raw = run_ensemble(stream, kind, config)
    return assemble(descriptor, raw, stream.num_vertices, budget)
