import itertools

import numpy as np
import pytest

from streamdesc.graph_io import stream_from_edges
from streamdesc.oracle import DenseGraph

# criterion number -> (passed, detail); filled by test_acceptance
ACCEPTANCE_RESULTS = {}


def er_edges(n, p, seed):
    """Erdős–Rényi G(n, p) edge list from a seeded generator."""
    rng = np.random.default_rng(seed)
    return [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < p]


def er_stream(n, p, seed, shuffle_seed=0):
    """Shuffled G(n, p) stream; isolated vertices stay in the vertex count."""
    edges = er_edges(n, p, seed)
    order = np.random.default_rng(shuffle_seed).permutation(len(edges))
    return stream_from_edges([edges[i] for i in order], n)


def dense(edges, n=None):
    return DenseGraph.from_edges(edges, n)


K4_EDGES = list(itertools.combinations(range(4), 2))
TRIANGLE = [(0, 1), (1, 2), (0, 2)]
C4_EDGES = [(0, 1), (1, 2), (2, 3), (0, 3)]
STAR3 = [(0, 1), (0, 2), (0, 3)]


@pytest.fixture
def k4_edges():
    return list(K4_EDGES)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE_RESULTS):
        status, detail = ACCEPTANCE_RESULTS[num]
        terminalreporter.write_line(f"criterion {num}: {status}  {detail}")
