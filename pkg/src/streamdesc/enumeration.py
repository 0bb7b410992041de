"""Edge-centric enumeration of small connected subgraphs containing ``e_t``.

All queries run against ``sample ∪ {e_t}``; instances are *subgraph*
(not induced) instances, so a K4 in the sample also yields its diamonds,
4-cycles, paws and 4-paths that contain ``e_t``.
"""

from __future__ import annotations

from functools import cached_property
from itertools import combinations
from typing import Dict, List, Tuple

from .sampling import ReservoirSample, detection_probability

# Streamed connected 4-vertex classes and their edge counts.
FOUR_CLASSES = ("path4", "paw", "cycle4", "diamond", "clique4")
CLASS_EDGES = {"wedge": 2, "triangle": 3, "path4": 3, "paw": 4, "cycle4": 4,
               "diamond": 5, "clique4": 6}

# Vertex positions inside a candidate set: u=0, v=1, x=2, y=3.
# Mask bits: 0 u~x, 1 u~y, 2 v~x, 3 v~y, 4 x~y. The pair u~v is e_t itself.
_MASK_PAIRS = ((0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


def _classify_connected4(edges) -> str | None:
    deg = [0, 0, 0, 0]
    for a, b in edges:
        deg[a] += 1
        deg[b] += 1
    if len(edges) < 3 or 0 in deg:
        return None
    deg.sort()
    return {
        (3, (1, 1, 2, 2)): "path4",
        (3, (1, 1, 1, 3)): "claw",
        (4, (2, 2, 2, 2)): "cycle4",
        (4, (1, 2, 2, 3)): "paw",
        (5, (2, 2, 3, 3)): "diamond",
        (6, (3, 3, 3, 3)): "clique4",
    }[(len(edges), tuple(deg))]


def _build_pattern_table() -> List[Tuple[int, ...]]:
    """For each 5-bit mask, count the edge subsets containing (0, 1) that
    span all four vertices, per streamed class."""
    table = []
    for mask in range(32):
        present = [p for bit, p in enumerate(_MASK_PAIRS) if mask >> bit & 1]
        counts = dict.fromkeys(FOUR_CLASSES, 0)
        for r in range(len(present) + 1):
            for subset in combinations(present, r):
                cls = _classify_connected4(((0, 1),) + subset)
                if cls in counts:
                    counts[cls] += 1
        table.append(tuple(counts[c] for c in FOUR_CLASSES))
    return table


PATTERN_TABLE = _build_pattern_table()


class Arrival:
    """Lazy view of the subgraphs completed by ``e_t = (u, v)`` at time ``t``.

    Properties are computed on first access and shared by every estimator
    observing this arrival.
    """

    def __init__(self, sample: ReservoirSample, u: int, v: int, t: int, budget: int):
        self.sample = sample
        self.u = u
        self.v = v
        self.t = t
        self.budget = budget

    def weight(self, m: int) -> float:
        """Inverse detection probability for an ``m``-edge subgraph."""
        cache = self.__dict__.setdefault("_weights", {})
        w = cache.get(m)
        if w is None:
            w = cache[m] = 1.0 / detection_probability(m, self.t, self.budget)
        return w

    @cached_property
    def triangles(self) -> List[int]:
        """Third vertices ``w`` closing a triangle with ``e_t``."""
        nu = self.sample.neighbors(self.u)
        nv = self.sample.neighbors(self.v)
        if len(nu) > len(nv):
            nu, nv = nv, nu
        return sorted(w for w in nu if w in nv)

    @cached_property
    def wedges(self) -> List[Tuple[int, int, int]]:
        """Three-vertex paths through ``e_t`` as ``(end, end, center)``."""
        u, v = self.u, self.v
        out = [(v, z, u) for z in sorted(self.sample.neighbors(u))]
        out.extend((u, z, v) for z in sorted(self.sample.neighbors(v)))
        return out

    @cached_property
    def candidate_masks(self) -> Dict[Tuple[int, int], int]:
        adj = self.sample.adjacency
        empty = frozenset()
        u, v = self.u, self.v
        nu = adj.get(u, empty)
        nv = adj.get(v, empty)

        pairs = set()
        add = pairs.add
        for x in nu:
            for y in nv:
                if x < y:
                    add((x, y))
                elif y < x:
                    add((y, x))
        for x in nu | nv:
            for y in adj[x]:
                if y != u and y != v:
                    add((x, y) if x < y else (y, x))

        out = {}
        for pair in pairs:
            x, y = pair
            out[pair] = ((x in nu) | (y in nu) << 1 | (x in nv) << 2 | (y in nv) << 3
                         | (y in adj[x]) << 4)
        return out

    @property
    def four_vertex(self) -> List[Tuple[int, int, int]]:
        """Candidate sets ``{u, v, x, y}`` as ``(x, y, mask)`` with ``x < y``.

        Only sets holding at least one streamed class are produced; pure
        stars centered on an endpoint are skipped.
        """
        return [(x, y, mask) for (x, y), mask in sorted(self.candidate_masks.items())]

    @cached_property
    def four_vertex_totals(self) -> Dict[str, int]:
        """Per-class instance counts from neighborhood intersections.

        With ``A = N(u)``, ``B = N(v)`` and ``T = A ∩ B`` in the sample:
        paths are split by the position of ``e_t`` (middle or end), paws by
        whether ``e_t`` is the pendant, a triangle edge at the hub, or the
        triangle edge opposite the hub, and diamonds by whether ``e_t`` is
        the chord.
        """
        adj = self.sample.adjacency
        empty = frozenset()
        A = adj.get(self.u, empty)
        B = adj.get(self.v, empty)
        if not A and not B:
            return dict.fromkeys(FOUR_CLASSES, 0)
        T = A & B
        a, b, t = len(A), len(B), len(T)

        deg_sum_a = deg_sum_b = deg_sum_t = 0
        cross = within_a2 = within_b2 = within_t2 = hub_sides = 0
        for x in A:
            nx = adj[x]
            deg_sum_a += len(nx)
            cross += len(nx & B)
            in_a = len(nx & A)
            within_a2 += in_a
            if x in T:
                hub_sides += in_a
                deg_sum_t += len(nx)
                within_t2 += len(nx & T)
        for x in B:
            nx = adj[x]
            deg_sum_b += len(nx)
            in_b = len(nx & B)
            within_b2 += in_b
            if x in T:
                hub_sides += in_b

        path4 = (a * b - t) + (deg_sum_a - a - t) + (deg_sum_b - b - t)
        paw = ((within_a2 + within_b2) // 2 + t * (a - 1) + t * (b - 1)
               + deg_sum_t - 2 * t) if t else (within_a2 + within_b2) // 2
        diamond = t * (t - 1) // 2 + hub_sides
        return {"path4": path4, "paw": paw, "cycle4": cross,
                "diamond": diamond, "clique4": within_t2 // 2}

    def pattern_totals(self) -> Dict[str, int]:
        """Same counts as :attr:`four_vertex_totals`, via explicit candidate
        vertex sets and the brute-force pattern table."""
        hist = [0] * 32
        for mask in self.candidate_masks.values():
            hist[mask] += 1
        totals = [0] * len(FOUR_CLASSES)
        for mask, count in enumerate(hist):
            if count:
                row = PATTERN_TABLE[mask]
                for i in range(len(totals)):
                    totals[i] += count * row[i]
        return dict(zip(FOUR_CLASSES, totals))

    def cycle4_weight(self, deg) -> float:
        """Sum of ``1 / (deg[x] * deg[y])`` over 4-cycles ``u-v-y-x-u``."""
        adj = self.sample.adjacency
        empty = frozenset()
        B = adj.get(self.v, empty)
        total = 0.0
        for x in adj.get(self.u, empty):
            common = adj[x] & B
            if common:
                total += sum(1.0 / deg[y] for y in common) / deg[x]
        return total

    def four_vertex_instances(self) -> Dict[str, List[Tuple[int, int, int, int]]]:
        """Per-class instance lists keyed by sorted vertex tuple.

        A vertex set holding ``k`` instances of a class appears ``k`` times.
        """
        out: Dict[str, List[Tuple[int, int, int, int]]] = {c: [] for c in FOUR_CLASSES}
        for x, y, mask in self.four_vertex:
            verts = tuple(sorted((self.u, self.v, x, y)))
            for cls, k in zip(FOUR_CLASSES, PATTERN_TABLE[mask]):
                out[cls].extend([verts] * k)
        return out


def triangles_containing(sample: ReservoirSample, u: int, v: int) -> List[int]:
    return Arrival(sample, u, v, sample.edges_seen + 1, sample.budget).triangles


def wedges_containing(sample: ReservoirSample, u: int, v: int) -> List[Tuple[int, int, int]]:
    return Arrival(sample, u, v, sample.edges_seen + 1, sample.budget).wedges


def connected4_containing(sample: ReservoirSample, u: int, v: int):
    return Arrival(sample, u, v, sample.edges_seen + 1, sample.budget).four_vertex_instances()
