"""Distances, approximation-error reports, and 1-NN cross-validation."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Sequence

import numpy as np
from scipy.spatial.distance import cdist

from .seeding import mix_seed

log = logging.getLogger(__name__)

METRICS = ("canberra", "euclidean")


def default_metric(descriptor: str) -> str:
    return "euclidean" if descriptor.startswith("santa") else "canberra"


def _check_dims(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {y.shape}")
    return x, y


def canberra(x, y) -> float:
    """Sum of ``|x_i - y_i| / (|x_i| + |y_i|)``; 0/0 terms count as 0."""
    x, y = _check_dims(x, y)
    num = np.abs(x - y)
    den = np.abs(x) + np.abs(y)
    safe = np.where(den > 0, den, 1.0)
    return float(np.sum(np.where(den > 0, num / safe, 0.0)))


def euclidean(x, y) -> float:
    x, y = _check_dims(x, y)
    return float(np.sqrt(np.sum((x - y) ** 2)))


def distance(x, y, metric: str) -> float:
    if metric == "canberra":
        return canberra(x, y)
    if metric == "euclidean":
        return euclidean(x, y)
    raise ValueError(f"unknown metric {metric!r}")


def distance_matrix(a: np.ndarray, b: np.ndarray, metric: str) -> np.ndarray:
    if metric not in METRICS:
        raise ValueError(f"unknown metric {metric!r}")
    return cdist(np.asarray(a, dtype=float), np.asarray(b, dtype=float), metric=metric)


def relative_error(exact, estimate) -> np.ndarray:
    """Coordinatewise ``|x - x_hat| / |x|``."""
    exact, estimate = _check_dims(exact, estimate)
    return np.abs(exact - estimate) / np.abs(exact)


@dataclass
class ApproximationReport:
    graph_ids: List[str]
    distances: np.ndarray
    metric: str

    @property
    def mean(self) -> float:
        return float(np.mean(self.distances)) if len(self.distances) else 0.0


def approximation_report(estimated: Dict[str, np.ndarray], exact: Dict[str, np.ndarray],
                         metric: str) -> ApproximationReport:
    """Per-graph distance between estimated and exact descriptors."""
    if set(estimated) != set(exact):
        missing = sorted(set(estimated) ^ set(exact))
        raise ValueError(f"graph ids do not align: {missing[:5]}")
    ids = list(estimated)
    dists = np.array([distance(estimated[g], exact[g], metric) for g in ids])
    return ApproximationReport(ids, dists, metric)


@dataclass
class EvalReport:
    split_accuracies: List[float]
    fold_accuracies: List[List[float]]
    folds: int
    splits: int
    seed: int
    metric: str
    warnings: List[str] = field(default_factory=list)

    @property
    def mean_accuracy(self) -> float:
        return float(np.mean(self.split_accuracies))

    @property
    def std_accuracy(self) -> float:
        return float(np.std(self.split_accuracies))


def stratified_folds(labels: np.ndarray, folds: int, rng: np.random.Generator) -> np.ndarray:
    """Fold id per item; each class is shuffled and dealt round-robin.

    Dealing continues where the previous class stopped so fold sizes stay
    balanced.
    """
    assignment = np.empty(len(labels), dtype=np.int64)
    offset = 0
    for cls in np.unique(labels):
        members = np.flatnonzero(labels == cls)
        members = members[rng.permutation(len(members))]
        assignment[members] = (offset + np.arange(len(members))) % folds
        offset = (offset + len(members)) % folds
    return assignment


def nearest_neighbor_predict(dist: np.ndarray, train_labels: np.ndarray) -> np.ndarray:
    """1-NN labels; ties go to the lowest training index (``argmin``)."""
    return train_labels[np.argmin(dist, axis=1)]


def knn_cross_validate(descriptors, labels, folds: int = 10, splits: int = 10,
                       metric: str = "canberra", seed: int = 0,
                       ids: Sequence | None = None) -> EvalReport:
    """Repeated stratified k-fold evaluation of a 1-nearest-neighbor classifier.

    Rows are put in ``ids`` order first, so results do not depend on the
    order descriptors were supplied in. Accuracy is averaged over folds,
    then over splits.
    """
    x = np.asarray(descriptors, dtype=float)
    y = np.asarray(labels)
    if len(x) != len(y):
        raise ValueError("descriptor and label counts differ")
    if ids is None:
        ids = list(range(len(x)))
    order = sorted(range(len(x)), key=lambda i: ids[i])
    x, y = x[order], y[order]

    classes, counts = np.unique(y, return_counts=True)
    if len(classes) < 2:
        raise ValueError("need at least two classes")
    warnings = []
    k = folds
    if counts.min() < k:
        k = max(2, int(counts.min()))
        msg = f"smallest class has {counts.min()} members; using {k} folds instead of {folds}"
        log.warning(msg)
        warnings.append(msg)
    if len(x) < k:
        raise ValueError(f"need at least {k} items for {k}-fold cross-validation")

    full = distance_matrix(x, x, metric)
    split_acc, fold_acc = [], []
    for s in range(splits):
        rng = np.random.Generator(np.random.PCG64(mix_seed(seed, s)))
        assignment = stratified_folds(y, k, rng)
        accs = []
        for f in range(k):
            test = np.flatnonzero(assignment == f)
            train = np.flatnonzero(assignment != f)
            if len(test) == 0:
                continue
            pred = nearest_neighbor_predict(full[np.ix_(test, train)], y[train])
            accs.append(float(np.mean(pred == y[test])))
        fold_acc.append(accs)
        split_acc.append(float(np.mean(accs)))
    return EvalReport(split_acc, fold_acc, k, splits, seed, metric, warnings)
