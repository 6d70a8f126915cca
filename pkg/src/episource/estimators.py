"""Source estimators: the irregular-count message-passing candidate set for
trees, the statistical-distance contact-tracing estimator (SCT), top-k
wrappers over any centrality, and the hop-error metric.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .centrality import (
    CentralityScores,
    epidemic_centrality_tree,
    sdc_weights,
    statistical_distance_centrality,
)
from .graph import Graph, GraphError, bfs_levels, bfs_rooted, minimum_cycle_sizes


@dataclass(frozen=True)
class EstimatorResult:
    """Ranked candidate set from one estimator run."""

    estimator: str
    candidates: tuple[int, ...]
    scores: dict | None = None
    metadata: dict = field(default_factory=dict)

    def to_jsonable(self, labels=None) -> dict:
        def name(v):
            return labels[v] if labels is not None else str(v)

        out = {
            "estimator": self.estimator,
            "candidates": [name(v) for v in self.candidates],
        }
        if self.scores is not None:
            out["scores"] = {name(v): str(s) for v, s in sorted(self.scores.items())}
        if self.metadata:
            out["metadata"] = {
                k: sorted(name(v) for v in v_) if isinstance(v_, (set, frozenset)) else v_
                for k, v_ in self.metadata.items()
            }
        return out


def algo1_kappa(g_n: Graph, irregular) -> EstimatorResult:
    """Candidate set for a tree snapshot with irregular vertices.

    Rooted at the epidemic center, upward messages count irregular vertices
    per branch; the walk back down follows every child of maximal count,
    carving the subtree t_ML.  Candidates are the parents of t_ML's leaves
    plus the center itself.
    """
    if g_n.m != g_n.n - 1 or not g_n.is_connected():
        raise GraphError("the message-passing estimator needs a tree snapshot")
    irregular = set(irregular)
    center = epidemic_centrality_tree(g_n).argbest[0]
    if not irregular:
        return EstimatorResult("algo1", (center,), metadata={"t_ml": {center}, "center": center})
    view = bfs_rooted(g_n, center)
    up = [1 if v in irregular else 0 for v in range(g_n.n)]
    for v in reversed(view.order):
        p = view.parent[v]
        if p >= 0:
            up[p] += up[v]

    children = [[] for _ in range(g_n.n)]
    for v in range(g_n.n):
        p = view.parent[v]
        if p >= 0:
            children[p].append(v)

    t_ml = {center}
    leaves = []
    frontier = [center]
    while frontier:
        nxt = []
        for v in frontier:
            best = max((up[c] for c in children[v]), default=0)
            if best == 0:
                leaves.append(v)
                continue
            for c in children[v]:
                if up[c] == best:
                    t_ml.add(c)
                    nxt.append(c)
        frontier = nxt

    kappa = sorted({view.parent[v] if v != center else center for v in leaves} | {center})
    return EstimatorResult(
        "algo1",
        tuple(kappa),
        metadata={"t_ml": t_ml, "center": center, "kappa_size": len(kappa)},
    )


def sct(g_n: Graph) -> EstimatorResult:
    """Statistical-distance contact tracing: weight each vertex by its
    minimum-cycle size (c/(c+1), leaves 1/2, acyclic interiors 1), then pick
    the vertex minimizing the weighted distance sum.

    Disconnected snapshots (common in real tracing data) yield the union of
    per-component winners, flagged in the metadata.
    """
    comps = g_n.components()
    if len(comps) == 1:
        scores = statistical_distance_centrality(g_n, sdc_weights(g_n))
        return EstimatorResult("sct", scores.argbest,
                               scores=dict(enumerate(scores.scores)))
    candidates = []
    scores: dict = {}
    for comp in comps:
        sub, old = g_n.induced(comp)
        s = statistical_distance_centrality(sub, sdc_weights(sub))
        candidates.extend(old[v] for v in s.argbest)
        scores.update({old[v]: sc for v, sc in enumerate(s.scores)})
    return EstimatorResult(
        "sct",
        tuple(sorted(candidates)),
        scores=scores,
        metadata={"components": len(comps), "warning": "disconnected input; per-component argmins"},
    )


def topk_wrapper(scores: CentralityScores, k: int) -> EstimatorResult:
    """Best k vertices of a centrality, ties broken by ascending id (boundary
    ties are cut, keeping the set size exactly k for fair comparisons);
    k above n clamps with a warning."""
    if k < 1:
        raise GraphError("k must be at least 1")
    n = len(scores.scores)
    meta = {}
    if k > n:
        meta["warning"] = f"k={k} clamped to n={n}"
        k = n
    cand = tuple(sorted(scores.top(k)))
    return EstimatorResult(
        f"top{k}-{scores.kind}",
        cand,
        scores={v: scores.scores[v] for v in cand},
        metadata=meta,
    )


def hop_error(candidates, true_source: int, g_n: Graph) -> int:
    """Smallest hop distance inside the snapshot from the true source to any
    candidate."""
    cand = set(candidates)
    if not cand:
        raise GraphError("candidate set is empty")
    if not 0 <= true_source < g_n.n:
        raise GraphError("true source is not in the snapshot")
    for v in cand:
        if not 0 <= v < g_n.n:
            raise GraphError(f"candidate {v} is not in the snapshot")
    if true_source in cand:
        return 0
    level = bfs_levels(g_n, true_source)
    err = min(level[v] for v in cand)
    if err < 0:
        raise GraphError("candidate unreachable from the true source")
    return err
