"""Reservoir sample over an edge stream and the streaming driver.

Every estimator sees edge ``e_t`` against the sample as it stood *before*
``e_t`` was offered to the reservoir, so a subgraph is only ever counted at
the arrival of its last edge.
"""

from __future__ import annotations

import random
from typing import Dict, List, Optional, Protocol, Sequence, Set, Tuple

from .graph_io import Edge, PreparedStream

MAX_PATTERN_EDGES = 6


class BudgetError(ValueError):
    """Raised when the budget cannot hold the subgraph being estimated."""


def detection_probability(m: int, t: int, b: int) -> float:
    """Probability that the other ``m - 1`` edges of a subgraph with ``m``
    edges are all in a size-``b`` reservoir when its last edge arrives at
    time ``t``."""
    if m < 1 or t < 1:
        raise ValueError(f"need m >= 1 and t >= 1, got m={m}, t={t}")
    if t - 1 <= b:
        return 1.0
    if b < m - 1:
        raise BudgetError(f"budget {b} cannot hold a {m}-edge subgraph")
    p = 1.0
    for i in range(m - 1):
        p *= (b - i) / (t - 1 - i)
    return min(1.0, p)


class ReservoirSample:
    """Budget-capped uniform edge sample (Vitter's Algorithm R).

    ``adjacency`` always mirrors ``edges`` symmetrically; evicted edges
    disappear from it immediately.
    """

    def __init__(self, budget: int, seed: int = 0):
        if budget < 1:
            raise BudgetError(f"budget must be positive, got {budget}")
        self.budget = budget
        self.edges_seen = 0
        self.adjacency: Dict[int, Set[int]] = {}
        self._slots: List[Edge] = []
        self._rng = random.Random(seed)

    def __len__(self):
        return len(self._slots)

    @property
    def edges(self) -> Set[Edge]:
        return set(self._slots)

    def neighbors(self, v: int) -> Set[int]:
        return self.adjacency.get(v, _EMPTY)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency.get(u, _EMPTY)

    def _link(self, u: int, v: int) -> None:
        self.adjacency.setdefault(u, set()).add(v)
        self.adjacency.setdefault(v, set()).add(u)

    def _unlink(self, u: int, v: int) -> None:
        for a, b in ((u, v), (v, u)):
            nbrs = self.adjacency[a]
            nbrs.discard(b)
            if not nbrs:
                del self.adjacency[a]

    def offer(self, edge: Edge) -> Tuple[bool, Optional[Edge]]:
        """Offer the next stream edge; returns ``(kept, evicted)``."""
        self.edges_seen += 1
        t = self.edges_seen
        if t <= self.budget:
            self._slots.append(edge)
            self._link(*edge)
            return True, None
        j = self._rng.randrange(t)
        if j >= self.budget:
            return False, None
        evicted = self._slots[j]
        self._unlink(*evicted)
        self._slots[j] = edge
        self._link(*edge)
        return True, evicted


_EMPTY: Set[int] = frozenset()  # type: ignore[assignment]


class Estimator(Protocol):
    def observe(self, arrival) -> None: ...

    def result(self): ...


def stream_drive(stream: PreparedStream | Sequence[Edge], estimators: Sequence[Estimator],
                 budget: int, seed: int = 0) -> list:
    """Run ``estimators`` over the stream with one shared reservoir.

    For each ``e_t``: every estimator observes an :class:`~.enumeration.Arrival`
    bound to the current sample, then the reservoir is offered ``e_t``.
    Returns each estimator's ``result()``, in order.
    """
    from .enumeration import Arrival

    sample = ReservoirSample(budget, seed)
    for t, (u, v) in enumerate(stream, start=1):
        arrival = Arrival(sample, u, v, t, budget)
        for est in estimators:
            est.observe(arrival)
        sample.offer((u, v))
    return [est.result() for est in estimators]
