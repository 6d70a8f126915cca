"""Immutable undirected simple graphs and the structural queries the
estimators need: BFS rooted views, hop distances, minimum cycles through a
vertex, and spanning trees of unicyclic graphs.

Vertices are dense integer ids ``0..n-1``; external string labels, when
present, are kept alongside and never used internally.  All derived views
are plain tuples, safe to share across threads.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np


class GraphError(ValueError):
    """Invalid graph input (bad topology, unknown vertex, disconnected)."""


class Graph:
    """Undirected simple graph with sorted adjacency lists.

    Neighbor lists are kept sorted ascending so every traversal in the
    package is deterministic.
    """

    __slots__ = ("n", "adj", "labels", "_label_index", "_csr", "_modal")

    def __init__(self, n: int, edges, labels=None):
        if n < 1:
            raise GraphError("graph needs at least one vertex")
        nbrs = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if v in nbrs[u]:
                raise GraphError(f"duplicate edge ({u},{v})")
            nbrs[u].add(v)
            nbrs[v].add(u)
        self.n = n
        self.adj = tuple(tuple(sorted(s)) for s in nbrs)
        if labels is not None:
            labels = tuple(str(x) for x in labels)
            if len(labels) != n:
                raise GraphError("labels length must equal vertex count")
            if len(set(labels)) != n:
                raise GraphError("labels must be unique")
        self.labels = labels
        self._label_index = None
        self._csr = None
        self._modal = None

    # -- construction -----------------------------------------------------

    @classmethod
    def from_labeled_edges(cls, pairs) -> "Graph":
        """Build a graph from (label, label) pairs, assigning dense ids in
        first-seen order."""
        index: dict[str, int] = {}
        edges = []
        for a, b in pairs:
            ia = index.setdefault(str(a), len(index))
            ib = index.setdefault(str(b), len(index))
            edges.append((ia, ib))
        labels = sorted(index, key=index.get)
        return cls(len(index), edges, labels=labels)

    # -- basic queries ----------------------------------------------------

    @property
    def m(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adj]

    def edges(self):
        for u in range(self.n):
            for v in self.adj[u]:
                if u < v:
                    yield (u, v)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def label_of(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v)

    def index_of(self, label: str) -> int:
        if self.labels is None:
            try:
                v = int(label)
            except ValueError:
                raise GraphError(f"unknown vertex label {label!r}")
            if not 0 <= v < self.n:
                raise GraphError(f"unknown vertex label {label!r}")
            return v
        if self._label_index is None:
            self._label_index = {lab: i for i, lab in enumerate(self.labels)}
        try:
            return self._label_index[str(label)]
        except KeyError:
            raise GraphError(f"unknown vertex label {label!r}") from None

    def modal_degree(self) -> int:
        """Most common degree; ties broken toward the larger degree."""
        if self._modal is None:
            counts: dict[int, int] = {}
            for a in self.adj:
                counts[len(a)] = counts.get(len(a), 0) + 1
            self._modal = max(counts, key=lambda d: (counts[d], d))
        return self._modal

    def csr(self):
        """Adjacency as (indptr, indices) int32 arrays for scipy routines."""
        if self._csr is None:
            indptr = np.zeros(self.n + 1, dtype=np.int32)
            for v in range(self.n):
                indptr[v + 1] = indptr[v] + len(self.adj[v])
            indices = np.fromiter(
                (w for a in self.adj for w in a), dtype=np.int32, count=int(indptr[-1])
            )
            self._csr = (indptr, indices)
        return self._csr

    def scipy_csr(self):
        from scipy.sparse import csr_matrix

        indptr, indices = self.csr()
        data = np.ones(len(indices), dtype=np.int8)
        return csr_matrix((data, indices, indptr), shape=(self.n, self.n))

    # -- subgraphs ----------------------------------------------------------

    def induced(self, vertices) -> tuple["Graph", list[int]]:
        """Induced subgraph on `vertices`; returns (subgraph, old-ids) where
        old-ids[i] is the original id of new vertex i (sorted ascending)."""
        verts = sorted(set(vertices))
        pos = {v: i for i, v in enumerate(verts)}
        edges = []
        for v in verts:
            for w in self.adj[v]:
                if v < w and w in pos:
                    edges.append((pos[v], pos[w]))
        labels = [self.label_of(v) for v in verts] if self.labels else None
        return Graph(len(verts), edges, labels=labels), verts

    def remove_edge(self, u: int, v: int) -> "Graph":
        if not self.has_edge(u, v):
            raise GraphError(f"edge ({u},{v}) not present")
        edges = [(a, b) for a, b in self.edges() if {a, b} != {u, v}]
        return Graph(self.n, edges, labels=self.labels)

    # -- connectivity -------------------------------------------------------

    def components(self) -> list[list[int]]:
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            comp = [s]
            seen[s] = True
            q = deque([s])
            while q:
                v = q.popleft()
                for w in self.adj[v]:
                    if not seen[w]:
                        seen[w] = True
                        comp.append(w)
                        q.append(w)
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return len(self.components()) == 1

    def require_connected(self, what: str = "graph"):
        comps = self.components()
        if len(comps) > 1:
            v = comps[1][0]
            raise GraphError(
                f"{what} is disconnected: vertex {self.label_of(v)} unreachable "
                f"from {self.label_of(comps[0][0])}"
            )

    def is_tree(self) -> bool:
        return self.m == self.n - 1 and self.is_connected()

    def is_unicyclic(self) -> bool:
        return self.m == self.n and self.is_connected()


# -- edge-list file format ---------------------------------------------------
# One edge per line: `<label> <label>`; `#` starts a comment; an optional
# header line `%n <count>` pins the vertex count (allows isolated vertices
# only insofar as labels must still appear in some edge).


def parse_edge_list(text: str) -> Graph:
    declared = None
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("%n"):
            declared = int(line.split()[1])
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphError(f"line {lineno}: expected two labels, got {raw!r}")
        pairs.append((parts[0], parts[1]))
    if not pairs:
        raise GraphError("edge list is empty")
    g = Graph.from_labeled_edges(pairs)
    if declared is not None and declared != g.n:
        raise GraphError(f"header declares {declared} vertices, found {g.n}")
    return g


def format_edge_list(g: Graph) -> str:
    lines = [f"%n {g.n}"]
    for u, v in g.edges():
        lines.append(f"{g.label_of(u)} {g.label_of(v)}")
    return "\n".join(lines) + "\n"


# -- rooted BFS views ---------------------------------------------------------


@dataclass(frozen=True)
class RootedTreeView:
    """BFS tree of a connected graph: parent / level / subtree size per
    vertex, with parent ties broken by ascending vertex id."""

    root: int
    parent: tuple[int, ...]       # -1 at the root
    level: tuple[int, ...]
    subtree_size: tuple[int, ...]
    order: tuple[int, ...]        # BFS order, level by level, ids ascending

    def path_to_root(self, v: int) -> list[int]:
        path = [v]
        while path[-1] != self.root:
            path.append(self.parent[path[-1]])
        return path


def bfs_rooted(g: Graph, root: int) -> RootedTreeView:
    """Level-synchronized BFS from `root`; the parent of a vertex is its
    smallest-id neighbor in the previous level."""
    if not 0 <= root < g.n:
        raise GraphError(f"root {root} not in graph")
    level = [-1] * g.n
    parent = [-1] * g.n
    level[root] = 0
    order = [root]
    frontier = [root]
    while frontier:
        nxt = set()
        for v in frontier:
            for w in g.adj[v]:
                if level[w] == -1:
                    nxt.add(w)
        nxt = sorted(nxt)
        for w in nxt:
            level[w] = level[frontier[0]] + 1
            parent[w] = min(u for u in g.adj[w] if level[u] == level[w] - 1)
        order.extend(nxt)
        frontier = nxt
    if len(order) != g.n:
        missing = next(v for v in range(g.n) if level[v] == -1)
        raise GraphError(
            f"graph is disconnected: vertex {g.label_of(missing)} unreachable "
            f"from {g.label_of(root)}"
        )
    size = [1] * g.n
    for v in reversed(order):
        if parent[v] >= 0:
            size[parent[v]] += size[v]
    return RootedTreeView(root, tuple(parent), tuple(level), tuple(size), tuple(order))


def bfs_levels(g: Graph, source: int) -> list[int]:
    """Hop distance from `source` to every vertex (-1 if unreachable)."""
    level = [-1] * g.n
    level[source] = 0
    q = deque([source])
    while q:
        v = q.popleft()
        for w in g.adj[v]:
            if level[w] == -1:
                level[w] = level[v] + 1
                q.append(w)
    return level


def all_pairs_distance(g: Graph, cap: int = 20_000):
    """Dense symmetric hop-distance matrix (int32).

    Materialized only up to `cap` vertices; larger graphs should use
    `bfs_levels` per query (the estimators only ever need distances inside
    the infected subgraph).
    """
    g.require_connected()
    if g.n > cap:
        raise GraphError(
            f"distance matrix for n={g.n} exceeds cap {cap}; use bfs_levels"
        )
    from scipy.sparse.csgraph import shortest_path

    d = shortest_path(g.scipy_csr(), method="D", unweighted=True)
    return d.astype(np.int32)


# -- cycles -------------------------------------------------------------------


@dataclass(frozen=True)
class CycleInfo:
    """Per-vertex minimum-cycle size.

    `sizes[v]` is the length of the shortest cycle through v, 1 for vertices
    of degree <= 1, and None (the acyclic sentinel) for vertices of degree
    > 1 lying on no cycle.  For unicyclic graphs `cycle` holds the cycle's
    vertices in traversal order.
    """

    sizes: tuple[int | None, ...]
    cycle: tuple[int, ...] | None = None

    def on_cycle(self, v: int) -> bool:
        s = self.sizes[v]
        return s is not None and s >= 3


def two_core(g: Graph) -> list[bool]:
    """Membership flags of the 2-core (what remains after repeatedly
    stripping degree-<=1 vertices).  Every cycle lies inside the 2-core."""
    deg = [len(a) for a in g.adj]
    alive = [True] * g.n
    q = deque(v for v in range(g.n) if deg[v] <= 1)
    while q:
        v = q.popleft()
        if not alive[v]:
            continue
        alive[v] = False
        for w in g.adj[v]:
            if alive[w]:
                deg[w] -= 1
                if deg[w] <= 1:
                    q.append(w)
    return alive


def _shortest_cycle_through(adj, core, v) -> int | None:
    # BFS from v; each visited vertex remembers which neighbor-of-v branch
    # discovered it.  An edge joining two distinct branches closes a cycle
    # through v of length level(x)+level(y)+1; nothing deeper can beat the
    # best candidate once 2*level+1 reaches it.
    level = {v: 0}
    branch = {v: -1}
    frontier = [w for w in adj[v] if core[w]]
    for w in frontier:
        level[w] = 1
        branch[w] = w
    best = None
    depth = 1
    while frontier:
        nxt = []
        for x in frontier:
            for y in adj[x]:
                if not core[y] or y == v:
                    continue
                if y not in level:
                    level[y] = depth + 1
                    branch[y] = branch[x]
                    nxt.append(y)
                elif branch[y] != branch[x]:
                    cand = level[x] + level[y] + 1
                    if best is None or cand < best:
                        best = cand
        if best is not None and best <= 2 * depth + 1:
            break
        frontier = nxt
        depth += 1
    return best


def minimum_cycle_sizes(g: Graph) -> CycleInfo:
    """Minimum-cycle size for every vertex: shortest cycle through v when it
    lies on one, 1 for degree-<=1 vertices, acyclic sentinel otherwise."""
    core = two_core(g)
    sizes: list[int | None] = [None] * g.n
    for v in range(g.n):
        if g.degree(v) <= 1:
            sizes[v] = 1
        elif core[v]:
            # 2-core membership does not imply a cycle: bridges joining two
            # cycles survive the peel, so the BFS may come back empty
            sizes[v] = _shortest_cycle_through(g.adj, core, v)
    cycle = None
    if g.n >= 3 and g.m == g.n and g.is_connected():
        cycle = tuple(_unicyclic_cycle(g))
    return CycleInfo(tuple(sizes), cycle)


def _unicyclic_cycle(g: Graph) -> list[int]:
    """Ordered cycle vertices of a unicyclic graph, starting at the smallest
    id and moving toward its smaller cycle neighbor."""
    core = two_core(g)
    members = [v for v in range(g.n) if core[v]]
    if not members:
        raise GraphError("graph has no cycle")
    start = min(members)
    on = set(members)
    first = min(w for w in g.adj[start] if w in on)
    cycle = [start, first]
    while True:
        prev, cur = cycle[-2], cycle[-1]
        nxt = next(w for w in g.adj[cur] if w in on and w != prev)
        if nxt == start:
            break
        cycle.append(nxt)
    return cycle


def cycle_distance(g: Graph, v: int, cycle: CycleInfo) -> int:
    """Hops from v to the nearest cycle vertex of a unicyclic graph."""
    if cycle.cycle is None:
        raise GraphError("graph has no identified cycle")
    on = set(cycle.cycle)
    if v in on:
        return 0
    level = bfs_levels(g, v)
    return min(level[c] for c in on)


def unicyclic_spanning_trees(g: Graph) -> list[tuple[Graph, tuple[int, int]]]:
    """The h spanning trees of a unicyclic graph, each obtained by deleting
    one cycle edge, listed in cycle order."""
    if g.m != g.n or not g.is_connected():
        raise GraphError("graph is not unicyclic (need connected, edges == vertices)")
    cyc = _unicyclic_cycle(g)
    h = len(cyc)
    out = []
    for j in range(h):
        u, v = cyc[j], cyc[(j + 1) % h]
        out.append((g.remove_edge(u, v), (u, v)))
    return out
