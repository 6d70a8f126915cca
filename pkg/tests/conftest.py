"""Shared fixtures: small reference instances with known exact answers, and
random-structure builders used across the suite."""

from __future__ import annotations

import heapq

import numpy as np
import pytest

from episource import Graph


def pad_to_degree(edges, n, degree_of) -> Graph:
    """Underlying graph for a snapshot: the snapshot's edges plus pendant
    dummies bringing vertex v up to degree_of(v)."""
    degs = [0] * n
    for a, b in edges:
        degs[a] += 1
        degs[b] += 1
    out = list(edges)
    nxt = n
    for v in range(n):
        want = degree_of(v)
        if degs[v] > want:
            raise ValueError(f"vertex {v} already exceeds degree {want}")
        for _ in range(want - degs[v]):
            out.append((v, nxt))
            nxt += 1
    return Graph(nxt, out)


# -- reference instances ------------------------------------------------------

IRREGULAR_LEAF_EDGES = [(0, 1), (1, 2), (1, 3), (0, 4), (4, 5)]
# six infected vertices in a 3-regular network, vertex 4 irregular (degree 2)


@pytest.fixture
def irregular_leaf_instance():
    g = pad_to_degree(IRREGULAR_LEAF_EDGES, 6, lambda v: 2 if v == 4 else 3)
    return g, list(range(6))


@pytest.fixture
def irregular_leaf_tree():
    return Graph(6, IRREGULAR_LEAF_EDGES)


TRIANGLE_TAIL_EDGES = [(0, 1), (1, 2), (2, 0), (0, 3), (3, 5), (1, 4)]
# triangle 0-1-2 with a 2-chain at 0, a leaf at 1, inside a 3-regular network


@pytest.fixture
def triangle_tail_instance():
    g = pad_to_degree(TRIANGLE_TAIL_EDGES, 6, lambda v: 3)
    return g, list(range(6))


@pytest.fixture
def triangle_tail_snapshot():
    return Graph(6, TRIANGLE_TAIL_EDGES)


TWO_CYCLE_EDGES = [
    (0, 1), (0, 2), (1, 2),          # triangle
    (3, 4), (4, 5), (5, 6), (6, 3),  # square
    (2, 7), (7, 3),                  # bridge vertex 7
    (0, 8), (4, 9),                  # pendants
]
# ten-vertex snapshot with two cycles; vertices 7 and 3 tie in spreading-order
# count while 7 sits nearer the triangle


@pytest.fixture
def two_cycle_snapshot():
    return Graph(10, TWO_CYCLE_EDGES)


@pytest.fixture
def two_cycle_instance():
    return pad_to_degree(TWO_CYCLE_EDGES, 10, lambda v: 3), list(range(10))


# -- random-structure builders ------------------------------------------------


def pruefer_tree(seq) -> Graph:
    n = len(seq) + 2
    deg = [1] * n
    for x in seq:
        deg[x] += 1
    edges = []
    heap = [v for v in range(n) if deg[v] == 1]
    heapq.heapify(heap)
    for x in seq:
        leaf = heapq.heappop(heap)
        edges.append((leaf, x))
        deg[leaf] -= 1
        deg[x] -= 1
        if deg[x] == 1:
            heapq.heappush(heap, x)
    edges.append((heapq.heappop(heap), heapq.heappop(heap)))
    return Graph(n, edges)


def random_tree(rng: np.random.Generator, n: int) -> Graph:
    if n == 1:
        return Graph(1, [])
    if n == 2:
        return Graph(2, [(0, 1)])
    return pruefer_tree(rng.integers(0, n, size=n - 2).tolist())


def random_unicyclic(rng: np.random.Generator, n: int, h: int) -> Graph:
    """Cycle of length h with n-h extra vertices attached at random."""
    assert 3 <= h <= n
    edges = [(i, (i + 1) % h) for i in range(h)]
    for v in range(h, n):
        edges.append((int(rng.integers(0, v)), v))
    return Graph(n, edges)


def line_instance(d: int, n: int, d_end: int = 1) -> Graph:
    """Path snapshot 0..n-1 inside a d-regular network, far end degree d_end."""
    edges = [(i, i + 1) for i in range(n - 1)]
    return pad_to_degree(edges, n, lambda v: d_end if v == n - 1 else d)


def broom_instance(d: int, t: int, k: int) -> Graph:
    from episource import broom_graph

    gb = broom_graph(t, k)
    return pad_to_degree(list(gb.edges()), gb.n, lambda v: 1 if v >= 2 * t else d)


def count_sequences_masked(g: Graph, source: int) -> int:
    """Spreading-order count of a small general graph by subset DP."""
    n = g.n
    full = (1 << n) - 1
    states = {1 << source: 1}
    total = 0
    while states:
        nxt: dict[int, int] = {}
        for mask, cnt in states.items():
            if mask == full:
                total += cnt
                continue
            for u in range(n):
                b = 1 << u
                if mask & b:
                    continue
                if any((mask >> w) & 1 for w in g.adj[u]):
                    nxt[mask | b] = nxt.get(mask | b, 0) + cnt
        states = nxt
    return total
