"""SI spreading simulation producing infection snapshots with a known true
source.

At every step the next infected vertex is drawn from the susceptible
boundary with probability proportional to its infection rate times the
summed spreading rates of its infected neighbors; with unit rates that is
simply its infected-neighbor count.  Randomness comes from a Philox
counter-based generator so trials are splittable and reproducible.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .generators import rng_from
from .graph import Graph, GraphError


@dataclass(frozen=True)
class NodeRates:
    """Per-vertex infection (R_i) and spreading (R_s) rates, all positive."""

    infect: tuple[float, ...]
    spread: tuple[float, ...]

    @classmethod
    def unit(cls, n: int) -> "NodeRates":
        return cls((1.0,) * n, (1.0,) * n)

    def __post_init__(self):
        if len(self.infect) != len(self.spread):
            raise GraphError("rate arrays must have equal length")
        if any(r <= 0 for r in self.infect) or any(r <= 0 for r in self.spread):
            raise GraphError("rates must be strictly positive")

    @property
    def is_unit(self) -> bool:
        return all(r == 1.0 for r in self.infect) and all(r == 1.0 for r in self.spread)


@dataclass(frozen=True)
class InfectionSnapshot:
    """One observed infection subgraph: the infected vertices in infection
    order (the source first), plus enough bookkeeping to replay it."""

    graph: Graph
    order: tuple[int, ...]
    seed: int | tuple
    params: dict = field(default_factory=dict)
    exhausted: bool = False
    frontier_history: tuple[tuple[float, float], ...] | None = None

    @property
    def source(self) -> int:
        return self.order[0]

    @property
    def n(self) -> int:
        return len(self.order)

    def infected_subgraph(self) -> tuple[Graph, list[int]]:
        return self.graph.induced(self.order)

    def to_json(self) -> str:
        g = self.graph
        return json.dumps(
            {
                "source": g.label_of(self.source),
                "order": [g.label_of(v) for v in self.order],
                "seed": self.seed,
                "params": self.params,
                "exhausted": self.exhausted,
            },
            indent=None,
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str, graph: Graph) -> "InfectionSnapshot":
        data = json.loads(text)
        order = tuple(graph.index_of(lab) for lab in data["order"])
        if graph.index_of(data["source"]) != order[0]:
            raise GraphError("snapshot source does not head the order")
        return cls(graph, order, data.get("seed", 0), data.get("params", {}),
                   data.get("exhausted", False))


def irregular_vertices(g: Graph, rule: str = "modal") -> set[int]:
    """Vertices counted as irregular.

    `modal`: degree differs from the graph's modal degree (the spreading
    cap's notion).  `leaf`: degree 1 (the estimator-facing notion; on
    boundary-truncated trees the modal degree can itself be 1, which would
    invert the intent).
    """
    if rule == "modal":
        d = g.modal_degree()
        return {v for v in range(g.n) if g.degree(v) != d}
    if rule == "leaf":
        return {v for v in range(g.n) if g.degree(v) == 1}
    raise GraphError(f"unknown irregular rule {rule!r}")


def simulate(
    g: Graph,
    source: int,
    n: int,
    rates: NodeRates | None = None,
    cap_k: int = 0,
    seed: int | tuple = 0,
    record_frontier: bool = False,
) -> InfectionSnapshot:
    """Simulate SI spreading from `source` until `n` vertices are infected.

    With cap_k > 0 the spread also stops once ceil(n / cap_k) irregular
    vertices (modal-degree rule) are infected.  If the susceptible boundary
    empties first the snapshot comes back flagged `exhausted`.
    """
    if not 0 <= source < g.n:
        raise GraphError(f"source {source} not in graph")
    if not 1 <= n <= g.n:
        raise GraphError(f"target size {n} out of range [1, {g.n}]")
    if rates is None:
        rates = NodeRates.unit(g.n)
    if len(rates.infect) != g.n:
        raise GraphError("rates must cover every vertex")
    rng = rng_from(seed)

    irregular = irregular_vertices(g, "modal") if cap_k > 0 else None
    irr_limit = -((-n) // cap_k) if cap_k > 0 else None  # ceil(n / cap_k)
    irr_seen = 0

    infected = np.zeros(g.n, dtype=bool)
    order = [source]
    infected[source] = True
    if irregular is not None and source in irregular:
        irr_seen += 1

    # compact boundary: vertex list, parallel weights, index lookup
    bverts: list[int] = []
    bweight: list[float] = []
    bpos: dict[int, int] = {}
    history: list[tuple[float, float]] = []

    def absorb(v: int):
        rs = rates.spread[v]
        for w in g.adj[v]:
            if infected[w]:
                continue
            i = bpos.get(w)
            if i is None:
                bpos[w] = len(bverts)
                bverts.append(w)
                bweight.append(rates.infect[w] * rs)
            else:
                bweight[i] += rates.infect[w] * rs
        i = bpos.pop(v, None)
        if i is not None:
            last = len(bverts) - 1
            if i != last:
                bverts[i] = bverts[last]
                bweight[i] = bweight[last]
                bpos[bverts[i]] = i
            bverts.pop()
            bweight.pop()

    absorb(source)
    exhausted = False
    while len(order) < n:
        if irr_limit is not None and irr_seen >= irr_limit:
            break
        if not bverts:
            exhausted = True
            break
        cum = np.cumsum(bweight)
        total = float(cum[-1])
        assert total > 0, "boundary weights must be positive"
        r = rng.random() * total
        idx = int(np.searchsorted(cum, r, side="right"))
        idx = min(idx, len(bverts) - 1)
        v = bverts[idx]
        if record_frontier:
            history.append((bweight[idx], total))
        order.append(v)
        infected[v] = True
        if irregular is not None and v in irregular:
            irr_seen += 1
        absorb(v)

    return InfectionSnapshot(
        g,
        tuple(order),
        seed,
        {"n": n, "cap_k": cap_k, "unit_rates": rates.is_unit},
        exhausted,
        tuple(history) if record_frontier else None,
    )


def realized_order_probability(snapshot: InfectionSnapshot) -> Fraction:
    """Exact probability of the snapshot's infection order under unit rates,
    recomputed from the graph (each step: infected-neighbor count over the
    total boundary weight)."""
    g = snapshot.graph
    infected = set()
    num = 1
    den = 1
    boundary = 0  # total infected->susceptible edge endpoints
    for step, v in enumerate(snapshot.order):
        if step > 0:
            w = sum(1 for u in g.adj[v] if u in infected)
            if w == 0:
                raise GraphError(
                    f"order violates connectivity at {g.label_of(v)} (step {step + 1})"
                )
            num *= w
            den *= boundary
            boundary -= 2 * w
        infected.add(v)
        boundary += g.degree(v)
    return Fraction(num, den)
