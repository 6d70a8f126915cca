"""Network centralities: spreading-order (epidemic) centrality with its
message-passing computation, the BFS-tree heuristic variant for general
graphs, distance and Jordan centralities, and the cycle-weighted statistical
distance centrality.

Order counts are exact big integers (n! overflows 64 bits already at n=21);
weighted distance scores are exact rationals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .graph import (
    CycleInfo,
    Graph,
    GraphError,
    all_pairs_distance,
    bfs_levels,
    bfs_rooted,
    minimum_cycle_sizes,
    unicyclic_spanning_trees,
)

_MINIMIZING = {"distance", "jordan", "sdc"}


@dataclass(frozen=True)
class CentralityScores:
    """Per-vertex scores with the extremal tie group.

    Epidemic-style kinds maximize; distance-style kinds minimize.  `argbest`
    lists every vertex achieving the extremum, ascending.
    """

    kind: str
    scores: tuple
    argbest: tuple[int, ...]

    @classmethod
    def build(cls, kind: str, scores) -> "CentralityScores":
        scores = tuple(scores)
        best = min(scores) if kind in _MINIMIZING else max(scores)
        arg = tuple(v for v, s in enumerate(scores) if s == best)
        return cls(kind, scores, arg)

    def top(self, k: int) -> list[int]:
        """Best k vertices; ties broken by ascending vertex id, boundary ties
        cut deterministically."""
        sign = 1 if self.kind in _MINIMIZING else -1
        ranked = sorted(range(len(self.scores)), key=lambda v: (self.scores[v] * sign, v))
        return ranked[: max(1, min(k, len(self.scores)))]

    def to_csv(self, labels=None) -> str:
        best = set(self.argbest)
        lines = ["vertex,score,is_argbest"]
        for v, s in enumerate(self.scores):
            name = labels[v] if labels is not None else str(v)
            lines.append(f"{name},{s},{str(v in best).lower()}")
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# spreading-order centrality on trees


def epidemic_centrality_tree(g: Graph) -> CentralityScores:
    """Number of spreading orders from every vertex of a tree.

    Root value is n!/prod(subtree sizes); neighbors follow from the root
    shift M(child) = M(parent) * s_child / (n - s_child), all exact.
    """
    if g.m != g.n - 1 or not g.is_connected():
        raise GraphError("epidemic centrality via message passing needs a tree")
    view = bfs_rooted(g, 0)
    n = g.n
    scores = [0] * n
    scores[0] = math.factorial(n) // math.prod(view.subtree_size)
    for v in view.order[1:]:
        p = view.parent[v]
        s = view.subtree_size[v]
        num = scores[p] * s
        scores[v] = num // (n - s)
        assert scores[v] * (n - s) == num
    return CentralityScores.build("epidemic", scores)


def epidemic_centrality_unicyclic(g: Graph) -> CentralityScores:
    """Spreading-order centrality of a unicyclic graph: the sum of tree
    centralities over its h cycle-edge-deleted spanning trees.

    Each admissible order is valid on exactly two of the spanning trees, so
    the sum is twice the raw order count; argmax and ratios are unaffected.
    """
    trees = unicyclic_spanning_trees(g)
    totals = [0] * g.n
    for t, _ in trees:
        s = epidemic_centrality_tree(t).scores
        for v in range(g.n):
            totals[v] += s[v]
    return CentralityScores.build("epidemic", totals)


def _hang_forest(g: Graph, cycle):
    """Parents/sizes of the subtrees hanging off the cycle, plus per-cycle-
    vertex hanging-tree sizes t_i (cycle vertex included)."""
    n = g.n
    on = [False] * n
    for c in cycle:
        on[c] = True
    lvl = [0 if on[v] else -1 for v in range(n)]
    order = list(cycle)
    parent = [-1] * n
    head = 0
    while head < len(order):
        v = order[head]
        head += 1
        for w in g.adj[v]:
            if lvl[w] == -1:
                lvl[w] = lvl[v] + 1
                parent[w] = v
                order.append(w)
    hang = [1] * n
    for v in reversed(order):
        if parent[v] >= 0:
            hang[parent[v]] += hang[v]
    return parent, hang, on


def locate_epidemic_center_unicyclic(g: Graph) -> tuple[int, str]:
    """Epidemic center of a unicyclic graph with a certificate.

    First an O(n) scan for a vertex whose removal leaves components of size
    at most n/2 (sufficient even off the cycle); failing that, the center is
    a cycle vertex found by comparing order counts across spanning trees via
    subtree-size ratio products anchored at one message-passing run.
    """
    if g.m != g.n or not g.is_connected():
        raise GraphError("not a unicyclic graph")
    info = minimum_cycle_sizes(g)
    cycle = list(info.cycle)
    h = len(cycle)
    n = g.n
    parent, hang, on = _hang_forest(g, cycle)

    children_sizes = [[] for _ in range(n)]
    for v in range(n):
        if parent[v] >= 0:
            children_sizes[parent[v]].append(hang[v])
    for v in range(n):
        # removing v leaves its hanging child subtrees plus, either way, one
        # component holding everything beyond the hanging tree (the rest of
        # the cycle stays connected when v is a cycle vertex)
        comps = list(children_sizes[v])
        comps.append(n - hang[v])
        if 2 * max(comps) <= n:
            return v, "component-condition"

    # cycle table: M(c_a, T_j) = M(c_a, T_1) * prod(sub sizes in T_1) /
    # prod(sub sizes in T_j), products over cycle vertices
    trees = unicyclic_spanning_trees(g)
    t_sizes = [hang[c] for c in cycle]
    anchor = epidemic_centrality_tree(trees[0][0]).scores

    def cycle_subtree_products(a: int, j: int) -> int:
        # spanning tree j removes the cycle edge (cycle[j], cycle[j+1]);
        # rooted at cycle[a], branch sums run forward to j, backward to j+1
        prod = n  # the root's own subtree
        acc = 0
        b = j
        while b != a:
            acc += t_sizes[b]
            prod *= acc
            b = (b - 1) % h
        acc = 0
        b = (j + 1) % h
        while b != a:
            acc += t_sizes[b]
            prod *= acc
            b = (b + 1) % h
        return prod

    best_v = -1
    best_score = None
    for a in range(h):
        base = Fraction(anchor[cycle[a]]) * cycle_subtree_products(a, 0)
        total = sum(base / cycle_subtree_products(a, j) for j in range(h))
        if best_score is None or total > best_score:
            best_score, best_v = total, cycle[a]
    assert all(2 * t <= n for t in t_sizes), "cycle center violates size bound"
    return best_v, "cycle-ratio"


# ---------------------------------------------------------------------------
# BFS-tree heuristic for general graphs


def _bfs_tree_sizes(g: Graph, root: int):
    """Subtree sizes of the BFS tree rooted at `root` (min-id parents)."""
    level = bfs_levels(g, root)
    if min(level) < 0:
        raise GraphError("graph is disconnected")
    order = sorted(range(g.n), key=lambda v: (level[v], v))
    sizes = [1] * g.n
    for v in reversed(order):
        if v == root:
            continue
        p = min(u for u in g.adj[v] if level[u] == level[v] - 1)
        sizes[p] += sizes[v]
    return sizes


def bfs_rumor_centrality(g: Graph) -> CentralityScores:
    """Heuristic spreading-order centrality for general graphs: each vertex
    is scored by its order count on its own BFS tree."""
    g.require_connected()
    nf = math.factorial(g.n)
    scores = [nf // math.prod(_bfs_tree_sizes(g, v)) for v in range(g.n)]
    return CentralityScores.build("bfs-rc", scores)


def bfs_rc_rank_keys(g: Graph) -> list[tuple[int, int]]:
    """Ranking keys equivalent to `bfs_rumor_centrality` without the shared
    n! factor: (subtree-size product, id), ascending = best first."""
    return sorted((math.prod(_bfs_tree_sizes(g, v)), v) for v in range(g.n))


# ---------------------------------------------------------------------------
# distance-based centralities


def _distance_rows(g: Graph):
    """Iterate (vertex, distance-row) using a dense matrix when small."""
    if g.n <= 4096:
        d = all_pairs_distance(g, cap=4096)
        for v in range(g.n):
            yield v, d[v]
    else:
        g.require_connected()
        for v in range(g.n):
            yield v, bfs_levels(g, v)


def distance_centrality(g: Graph) -> CentralityScores:
    """Sum of hop distances to all other vertices; argbest is the distance
    center."""
    scores = [0] * g.n
    for v, row in _distance_rows(g):
        scores[v] = int(np.sum(row)) if isinstance(row, np.ndarray) else sum(row)
    return CentralityScores.build("distance", scores)


def jordan_centrality(g: Graph) -> CentralityScores:
    """Eccentricity of every vertex; argbest is the Jordan center."""
    scores = [0] * g.n
    for v, row in _distance_rows(g):
        scores[v] = int(np.max(row)) if isinstance(row, np.ndarray) else max(row)
    return CentralityScores.build("jordan", scores)


def sdc_weights(g: Graph, cycles: CycleInfo | None = None) -> tuple[Fraction, ...]:
    """Per-vertex weights c/(c+1) from minimum-cycle sizes: 1/2 for leaves,
    c/(c+1) on a smallest cycle of size c, and 1 for acyclic non-leaves."""
    if cycles is None:
        cycles = minimum_cycle_sizes(g)
    out = []
    for s in cycles.sizes:
        out.append(Fraction(1) if s is None else Fraction(s, s + 1))
    return tuple(out)


def statistical_distance_centrality(
    g: Graph, weights: tuple[Fraction, ...] | None = None
) -> CentralityScores:
    """Weighted distance sum SDC(v) = sum_u w_u * d(v,u), exact; argbest is
    the statistical distance center.

    Internally the weights are scaled to integers by their common
    denominator so the per-vertex accumulation stays in integer arithmetic.
    """
    if weights is None:
        weights = sdc_weights(g)
    if len(weights) != g.n or any(w <= 0 for w in weights):
        raise GraphError("need one positive weight per vertex")
    scale = math.lcm(*(w.denominator for w in weights))
    wint = [int(w * scale) for w in weights]
    scaled = [0] * g.n
    use_numpy = g.n <= 4096 and scale * max(wint) * g.n * g.n < 2**62
    if use_numpy:
        d = all_pairs_distance(g, cap=4096).astype(np.int64)
        scaled = (d @ np.array(wint, dtype=np.int64)).tolist()
    else:
        g.require_connected()
        for v in range(g.n):
            row = bfs_levels(g, v)
            scaled[v] = sum(wv * dv for wv, dv in zip(wint, row))
    scores = [Fraction(s, scale) for s in scaled]
    return CentralityScores.build("sdc", scores)


def epidemic_centrality(g: Graph) -> CentralityScores:
    """Exact spreading-order centrality where defined: trees and unicyclic
    graphs.  Denser graphs should use `bfs_rumor_centrality`."""
    if g.m == g.n - 1 and g.is_connected():
        return epidemic_centrality_tree(g)
    if g.m == g.n and g.is_connected():
        return epidemic_centrality_unicyclic(g)
    raise GraphError(
        "exact epidemic centrality covers trees and unicyclic graphs; "
        "use bfs_rumor_centrality for general graphs"
    )
