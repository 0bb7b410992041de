"""Command-line entry point: ``streamdesc {compute,oracle,compare,classify}``."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from . import __version__
from .ensemble import DESCRIPTORS, compute_descriptor
from .evaluation import METRICS, approximation_report, default_metric, knn_cross_validate
from .graph_io import (GraphFormatError, LabeledCorpus, PreparedStream, fnv1a64, is_tudataset,
                       load_tudataset, preprocess, read_edge_list)
from .oracle import DenseGraph, OracleSizeError, exact_descriptor, golden_record, write_golden
from .seeding import default_seed, mix_seed

log = logging.getLogger("streamdesc")

EXIT_USAGE = 2
EXIT_DATA = 3


class UsageError(Exception):
    pass


@dataclass
class Corpus:
    ids: List[str]
    corpus: LabeledCorpus

    @property
    def graphs(self) -> List[PreparedStream]:
        return self.corpus.graphs

    @property
    def labels(self) -> List[int]:
        return self.corpus.labels

    def checksum(self) -> str:
        h = fnv1a64(b"".join(
            f"{g.num_vertices} {g.num_edges} {g.edges}\n".encode() for g in self.graphs
        ) + repr(self.labels).encode())
        return f"{h:016x}"


def load_corpus(path: str, seed: int) -> Corpus:
    """Load a TUDataset directory, a single edge-list file, or a directory
    of edge-list files (``*.txt`` / ``*.edges``, optional ``labels.csv``)."""
    if not os.path.exists(path):
        raise GraphFormatError(f"corpus not found: {path}")
    if is_tudataset(path):
        corpus = load_tudataset(path, seed)
        return Corpus([str(i) for i in range(len(corpus))], corpus)
    if os.path.isfile(path):
        files = [path]
    else:
        files = sorted(
            os.path.join(path, f) for f in os.listdir(path)
            if f.endswith((".txt", ".edges")) and f != "labels.csv"
        )
    labels_path = os.path.join(path if os.path.isdir(path) else os.path.dirname(path), "labels.csv")
    label_map: Dict[str, int] = {}
    if os.path.isfile(labels_path):
        with open(labels_path, newline="") as f:
            for row in csv.reader(f):
                if row and not row[0].startswith("#") and row[0] != "graph_id":
                    label_map[row[0]] = int(row[1])
    ids, graphs, labels = [], [], []
    for i, fpath in enumerate(files):
        gid = os.path.splitext(os.path.basename(fpath))[0]
        ids.append(gid)
        graphs.append(preprocess(read_edge_list(fpath), mix_seed(seed, i)))
        labels.append(label_map.get(gid, 0))
    return Corpus(ids, LabeledCorpus(graphs, labels, os.path.basename(path)))


def parse_budget(text: str):
    """``"100000"`` is an absolute edge count; ``"0.25"`` a fraction of |E|."""
    try:
        if "." in text or "e" in text.lower():
            value = float(text)
            if not (0 < value <= 1) and not value.is_integer():
                raise UsageError(f"fractional budget must be in (0, 1], got {text}")
            if value <= 0:
                raise UsageError(f"budget must be positive, got {text}")
            return ("fraction", value) if value <= 1 else ("absolute", int(value))
        value = int(text)
    except ValueError:
        raise UsageError(f"invalid budget {text!r}") from None
    if value <= 0:
        raise UsageError(f"budget must be positive, got {text}")
    return ("absolute", value)


def resolve_budget(spec, num_edges: int) -> int:
    kind, value = spec
    if kind == "absolute":
        return value
    return max(1, math.ceil(value * num_edges))


def write_descriptor_csv(path: str, ids: Sequence[str], labels: Sequence[int],
                         rows: Sequence[np.ndarray]) -> None:
    dim = len(rows[0]) if rows else 0
    with open(path, "w", newline="", encoding="ascii") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["graph_id", "label"] + [f"v{i}" for i in range(dim)])
        for gid, label, row in zip(ids, labels, rows):
            w.writerow([gid, label] + ["%.17g" % x for x in row])


def read_descriptor_csv(path: str) -> Tuple[List[str], List[int], np.ndarray]:
    if not os.path.isfile(path):
        raise GraphFormatError(f"missing descriptor file: {path}")
    ids, labels, rows = [], [], []
    with open(path, newline="", encoding="ascii") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if not header or header[:2] != ["graph_id", "label"]:
            raise GraphFormatError(f"{path}: bad header")
        dim = len(header) - 2
        for lineno, row in enumerate(reader, start=2):
            if len(row) != dim + 2:
                raise GraphFormatError(f"{path}:{lineno}: expected {dim + 2} columns")
            ids.append(row[0])
            labels.append(int(row[1]))
            rows.append([float(x) for x in row[2:]])
    return ids, labels, np.array(rows, dtype=float).reshape(len(rows), dim)


def _compute_one(job):
    stream, descriptor, budget, workers, seed = job
    start = time.perf_counter()
    values = compute_descriptor(stream, descriptor, budget, workers, seed)
    return values, time.perf_counter() - start


def _manifest_path(out: str) -> str:
    return os.path.splitext(out)[0] + ".manifest.json"


def cmd_compute(corpus_path: str, descriptor: str, budget: str, workers: int = 1,
                seed: int = 0, out: str = "descriptors.csv", threads: int = 1) -> List[np.ndarray]:
    if descriptor not in DESCRIPTORS:
        raise UsageError(f"unknown descriptor {descriptor!r}")
    if workers < 1:
        raise UsageError("--workers must be >= 1")
    budget_spec = parse_budget(budget)
    corpus = load_corpus(corpus_path, seed)

    jobs = []
    for i, stream in enumerate(corpus.graphs):
        b = resolve_budget(budget_spec, stream.num_edges)
        jobs.append((stream, descriptor, b, workers, mix_seed(seed, i, 1)))
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_compute_one, jobs, chunksize=max(1, len(jobs) // (4 * threads))))
    else:
        results = [_compute_one(job) for job in jobs]

    rows = [r[0] for r in results]
    write_descriptor_csv(out, corpus.ids, corpus.labels, rows)
    manifest = {
        "command": "compute",
        "args": {"corpus": corpus_path, "descriptor": descriptor, "budget": budget,
                 "workers": workers, "seed": seed, "threads": threads, "out": out},
        "version": __version__,
        "corpus_checksum": corpus.checksum(),
        "budgets": [job[2] for job in jobs],
        "timings": [{"graph_id": gid, "seconds": r[1]} for gid, r in zip(corpus.ids, results)],
    }
    with open(_manifest_path(out), "w", encoding="utf-8") as f:
        json.dump(manifest, f, indent=1)
        f.write("\n")
    return rows


def _dense(stream: PreparedStream) -> DenseGraph:
    return DenseGraph.from_edges(stream.edges, stream.num_vertices)


def cmd_oracle(corpus_path: str, out: str, seed: int = 0, descriptor: str | None = None,
               csv_out: str | None = None) -> List[dict]:
    corpus = load_corpus(corpus_path, seed)
    records = []
    for gid, stream in zip(corpus.ids, corpus.graphs):
        try:
            records.append(golden_record(gid, _dense(stream)))
        except OracleSizeError as exc:
            raise OracleSizeError(f"graph {gid}: {exc}") from None
    write_golden(records, out)
    if descriptor is not None:
        if descriptor not in DESCRIPTORS:
            raise UsageError(f"unknown descriptor {descriptor!r}")
        rows = [exact_descriptor(_dense(s), descriptor) for s in corpus.graphs]
        write_descriptor_csv(csv_out or os.path.splitext(out)[0] + f".{descriptor}.csv",
                             corpus.ids, corpus.labels, rows)
    return records


def cmd_compare(estimated_path: str, exact_path: str, metric: str = "canberra",
                out: str | None = None):
    est_ids, _, est = read_descriptor_csv(estimated_path)
    ex_ids, _, ex = read_descriptor_csv(exact_path)
    if est.shape[1] != ex.shape[1] and len(est) and len(ex):
        raise GraphFormatError(f"dimension mismatch: {est.shape[1]} vs {ex.shape[1]}")
    if est_ids != ex_ids:
        raise GraphFormatError("graph ids do not align between the two files")
    report = approximation_report(dict(zip(est_ids, est)), dict(zip(ex_ids, ex)), metric)
    if out:
        with open(out, "w", newline="", encoding="ascii") as f:
            w = csv.writer(f, lineterminator="\n")
            w.writerow(["graph_id", "distance"])
            for gid, d in zip(report.graph_ids, report.distances):
                w.writerow([gid, "%.17g" % d])
        with open(os.path.splitext(out)[0] + ".json", "w", encoding="utf-8") as f:
            json.dump({"metric": metric, "mean_distance": report.mean,
                       "num_graphs": len(report.graph_ids)}, f, indent=1)
            f.write("\n")
    return report


def cmd_classify(descriptors_path: str, folds: int = 10, splits: int = 10,
                 metric: str = "canberra", seed: int = 0, out: str | None = None):
    ids, labels, x = read_descriptor_csv(descriptors_path)
    report = knn_cross_validate(x, labels, folds, splits, metric, seed, ids=ids)
    if out:
        with open(out, "w", newline="", encoding="ascii") as f:
            w = csv.writer(f, lineterminator="\n")
            w.writerow(["split", "accuracy", "fold_accuracies"])
            for s, (acc, per_fold) in enumerate(zip(report.split_accuracies, report.fold_accuracies)):
                w.writerow([s, "%.17g" % acc, " ".join("%.17g" % a for a in per_fold)])
        with open(os.path.splitext(out)[0] + ".json", "w", encoding="utf-8") as f:
            json.dump({"mean_accuracy": report.mean_accuracy, "std_accuracy": report.std_accuracy,
                       "folds": report.folds, "splits": report.splits, "seed": report.seed,
                       "metric": report.metric, "warnings": report.warnings}, f, indent=1)
            f.write("\n")
    return report


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="streamdesc", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def seed_arg(p):
        p.add_argument("--seed", type=int, default=None,
                       help="base seed (default: $STREAMDESC_SEED or 0)")

    p = sub.add_parser("compute", help="compute descriptors for a corpus")
    p.add_argument("corpus")
    p.add_argument("--descriptor", required=True, choices=DESCRIPTORS)
    p.add_argument("--budget", required=True, help="edge count (100000) or fraction of |E| (0.25)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", required=True)
    seed_arg(p)

    p = sub.add_parser("oracle", help="exact brute-force values for small graphs")
    p.add_argument("corpus")
    p.add_argument("--out", required=True)
    p.add_argument("--descriptor", choices=DESCRIPTORS, default=None,
                   help="also write the exact descriptor CSV")
    p.add_argument("--csv", default=None)
    seed_arg(p)

    p = sub.add_parser("compare", help="distance between estimated and exact descriptors")
    p.add_argument("estimated")
    p.add_argument("exact")
    p.add_argument("--distance", choices=METRICS, default=None)
    p.add_argument("--descriptor", choices=DESCRIPTORS, default="gabe",
                   help="selects the default distance")
    p.add_argument("--out", default=None)

    p = sub.add_parser("classify", help="1-NN repeated k-fold cross-validation")
    p.add_argument("descriptors")
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--splits", type=int, default=10)
    p.add_argument("--distance", choices=METRICS, default=None)
    p.add_argument("--descriptor", choices=DESCRIPTORS, default="gabe",
                   help="selects the default distance")
    p.add_argument("--out", default=None)
    seed_arg(p)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    seed = getattr(args, "seed", None)
    if seed is None:
        seed = default_seed()
    try:
        if args.command == "compute":
            cmd_compute(args.corpus, args.descriptor, args.budget, args.workers, seed,
                        args.out, args.threads)
        elif args.command == "oracle":
            cmd_oracle(args.corpus, args.out, seed, args.descriptor, args.csv)
        elif args.command == "compare":
            metric = args.distance or default_metric(args.descriptor)
            report = cmd_compare(args.estimated, args.exact, metric, args.out)
            print(f"mean {metric} distance: {report.mean:.6g} over {len(report.graph_ids)} graphs")
        elif args.command == "classify":
            metric = args.distance or default_metric(args.descriptor)
            report = cmd_classify(args.descriptors, args.folds, args.splits, metric, seed, args.out)
            print(f"accuracy: {100 * report.mean_accuracy:.2f} +- {100 * report.std_accuracy:.2f} "
                  f"({report.folds} folds x {report.splits} splits)")
    except UsageError as exc:
        parser.error(str(exc))
    except (GraphFormatError, OracleSizeError, ValueError, OSError) as exc:
        print(f"streamdesc: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return 0


if __name__ == "__main__":
    sys.exit(main())
