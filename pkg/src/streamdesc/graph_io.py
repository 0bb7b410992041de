"""Edge-list and TUDataset ingestion, preprocessing, and stream persistence."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from .seeding import mix_seed

Edge = Tuple[int, int]

STREAM_MAGIC = "streamdesc-v1"

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK64 = 0xFFFFFFFFFFFFFFFF


class GraphFormatError(ValueError):
    """Raised for malformed edge lists, corpora, or persisted streams."""


@dataclass(frozen=True)
class RawEdgeList:
    edges: List[Edge]
    source_name: str = ""


@dataclass(frozen=True)
class PreparedStream:
    """Cleaned, relabeled and shuffled edge sequence.

    Edges are stored canonically as ``(min, max)`` with vertex ids in
    ``[0, num_vertices - 1]``. Instances are immutable and safe to share.
    """

    edges: Tuple[Edge, ...]
    num_vertices: int
    num_edges: int
    shuffle_seed: int = 0
    name: str = field(default="", compare=False)

    def __iter__(self):
        return iter(self.edges)

    def __len__(self):
        return self.num_edges


@dataclass(frozen=True)
class LabeledCorpus:
    graphs: List[PreparedStream]
    labels: List[int]
    name: str = ""

    def __post_init__(self):
        if len(self.graphs) != len(self.labels):
            raise GraphFormatError(
                f"{len(self.graphs)} graphs but {len(self.labels)} labels"
            )

    def __len__(self):
        return len(self.graphs)


def fnv1a64(data: bytes) -> int:
    h = _FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * _FNV_PRIME) & _MASK64
    return h


def parse_edge_list(text: str, source_name: str = "") -> RawEdgeList:
    """Parse whitespace-separated vertex pairs, one per line.

    Blank lines and lines starting with ``#`` are skipped. Duplicates and
    self-loops are kept; cleaning happens in :func:`preprocess`.
    """
    edges: List[Edge] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphFormatError(f"line {lineno}: expected 2 fields, got {len(parts)}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"line {lineno}: non-integer vertex id in {line!r}") from None
        if u < 0 or v < 0:
            raise GraphFormatError(f"line {lineno}: negative vertex id in {line!r}")
        edges.append((u, v))
    return RawEdgeList(edges, source_name)


def read_edge_list(path: str | os.PathLike) -> RawEdgeList:
    with open(path, "r", encoding="ascii") as f:
        return parse_edge_list(f.read(), source_name=os.fspath(path))


def preprocess(raw: RawEdgeList | Iterable[Edge], seed: int) -> PreparedStream:
    """Drop self-loops and duplicates, relabel densely, and shuffle.

    Vertex labels are assigned in order of first appearance; the edge
    order is a uniform permutation drawn from ``seed``.
    """
    if isinstance(raw, RawEdgeList):
        edges, name = raw.edges, raw.source_name
    else:
        edges, name = list(raw), ""

    relabel: dict = {}
    seen = set()
    clean: List[Edge] = []
    for u, v in edges:
        if u == v:
            continue
        key = (u, v) if u < v else (v, u)
        if key in seen:
            continue
        seen.add(key)
        for x in (u, v):
            if x not in relabel:
                relabel[x] = len(relabel)
        a, b = relabel[u], relabel[v]
        clean.append((a, b) if a < b else (b, a))

    rng = np.random.Generator(np.random.PCG64(seed & _MASK64))
    order = rng.permutation(len(clean))
    shuffled = tuple(clean[i] for i in order)
    return PreparedStream(shuffled, len(relabel), len(shuffled), seed & _MASK64, name)


def stream_from_edges(edges: Sequence[Edge], num_vertices: int | None = None,
                      name: str = "") -> PreparedStream:
    """Wrap an already-clean edge sequence without relabeling or shuffling."""
    canon = tuple((u, v) if u < v else (v, u) for u, v in edges)
    if len(set(canon)) != len(canon) or any(u == v for u, v in canon):
        raise GraphFormatError("edge sequence has duplicates or self-loops")
    n = num_vertices
    if n is None:
        n = 1 + max((v for _, v in canon), default=-1)
    return PreparedStream(canon, n, len(canon), 0, name)


def _read_ints(path: str, delimiter: str | None = None) -> List[List[int]]:
    if not os.path.exists(path):
        raise GraphFormatError(f"missing file: {path}")
    rows = []
    with open(path, "r", encoding="ascii") as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                rows.append([int(x) for x in line.split(delimiter)])
            except ValueError:
                raise GraphFormatError(f"{path}:{lineno}: malformed line {line!r}") from None
    return rows


def _tudataset_prefix(directory: str) -> str:
    for entry in sorted(os.listdir(directory)):
        if entry.endswith("_A.txt"):
            return entry[: -len("_A.txt")]
    raise GraphFormatError(f"missing file: no *_A.txt in {directory}")


def is_tudataset(directory: str | os.PathLike) -> bool:
    directory = os.fspath(directory)
    return os.path.isdir(directory) and any(
        e.endswith("_A.txt") for e in os.listdir(directory)
    )


def load_tudataset(directory: str | os.PathLike, seed: int = 0) -> LabeledCorpus:
    """Load a TUDataset-format directory into prepared streams.

    Node ids in ``DS_A.txt`` and graph ids in ``DS_graph_indicator.txt``
    are 1-indexed. Graph ``i`` is shuffled with ``mix_seed(seed, i)``.
    """
    directory = os.fspath(directory)
    ds = _tudataset_prefix(directory)
    base = os.path.join(directory, ds)

    indicator = [row[0] for row in _read_ints(base + "_graph_indicator.txt")]
    labels = [row[0] for row in _read_ints(base + "_graph_labels.txt")]
    pairs = _read_ints(base + "_A.txt", delimiter=",")

    num_graphs = len(labels)
    for node, g in enumerate(indicator, start=1):
        if g < 1 or g > num_graphs:
            raise GraphFormatError(
                f"node {node} assigned to graph {g}, but only graphs 1..{num_graphs} are labeled"
            )
    if indicator and max(indicator) != num_graphs:
        raise GraphFormatError(
            f"{num_graphs} graph labels but graph indicator references {max(indicator)} graphs"
        )

    per_graph: List[List[Edge]] = [[] for _ in range(num_graphs)]
    for lineno, row in enumerate(pairs, start=1):
        if len(row) != 2:
            raise GraphFormatError(f"{base}_A.txt:{lineno}: expected 2 fields")
        u, v = row
        if not (1 <= u <= len(indicator) and 1 <= v <= len(indicator)):
            raise GraphFormatError(f"{base}_A.txt:{lineno}: node id out of range")
        g = indicator[u - 1]
        if indicator[v - 1] != g:
            raise GraphFormatError(f"{base}_A.txt:{lineno}: edge spans graphs")
        per_graph[g - 1].append((u, v))

    graphs = [
        preprocess(RawEdgeList(edges, f"{ds}:{i}"), mix_seed(seed, i))
        for i, edges in enumerate(per_graph)
    ]
    return LabeledCorpus(graphs, labels, ds)


def _format_stream(stream: PreparedStream) -> bytes:
    lines = [f"{STREAM_MAGIC} {stream.num_vertices} {stream.num_edges} {stream.shuffle_seed}"]
    lines.extend(f"{u} {v}" for u, v in stream.edges)
    return ("\n".join(lines) + "\n").encode("ascii")


def persist_stream(stream: PreparedStream, path: str | os.PathLike) -> None:
    body = _format_stream(stream)
    with open(path, "wb") as f:
        f.write(body)
        f.write(f"fnv1a64 {fnv1a64(body):016x}\n".encode("ascii"))


def reload_stream(path: str | os.PathLike) -> PreparedStream:
    with open(path, "rb") as f:
        data = f.read()
    body, sep, trailer = data.rstrip(b"\n").rpartition(b"\n")
    if not sep or not trailer.startswith(b"fnv1a64 "):
        raise GraphFormatError(f"{path}: missing checksum line")
    body += b"\n"
    if f"{fnv1a64(body):016x}".encode("ascii") != trailer.split()[1]:
        raise GraphFormatError(f"{path}: checksum mismatch")

    lines = body.decode("ascii").splitlines()
    header = lines[0].split()
    if len(header) != 4 or header[0] != STREAM_MAGIC:
        raise GraphFormatError(f"{path}: bad header {lines[0]!r}")
    n, m, seed = int(header[1]), int(header[2]), int(header[3])
    edges = tuple(tuple(map(int, line.split())) for line in lines[1:])
    if len(edges) != m:
        raise GraphFormatError(f"{path}: header says {m} edges, found {len(edges)}")
    return PreparedStream(edges, n, m, seed, os.fspath(path))
