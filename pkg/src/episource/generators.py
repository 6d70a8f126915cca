"""Synthetic graph generators used by the benchmarks.

All generators are deterministic for a fixed seed.  Randomized kinds draw
from a Philox counter-based generator so per-trial regeneration inside the
benchmark runner stays reproducible and splittable.

Spec strings (CLI and config files):

    grid:100x100
    circulant:6000:s=3          random connection set of size 3
    circulant:6:set=1           explicit connection set {1}
    rbt:dmax=5:n=1000           random branching tree, max degree 5
    rtree:d=4:n=1000            complete d-regular tree truncated at n
    rtree:d=3:depth=4           complete d-regular tree of given depth
    rrg:d=3:n=5000              random d-regular graph
    ba:n=5000:m=3               preferential attachment
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import Graph, GraphError


def rng_from(seed, *stream) -> np.random.Generator:
    """Philox generator keyed by (seed, *stream); splittable by stream ids.
    Tuple seeds are flattened so per-trial streams can nest."""
    parts = tuple(seed) if isinstance(seed, (tuple, list)) else (seed,)
    return np.random.Generator(np.random.Philox(np.random.SeedSequence((*parts, *stream))))


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    params: dict

    # randomized kinds need regeneration per benchmark trial
    @property
    def is_random(self) -> bool:
        if self.kind == "circulant":
            return "size" in self.params
        return self.kind in ("rbt", "rrg", "ba")

    def __str__(self) -> str:
        parts = [self.kind]
        for k, v in self.params.items():
            if self.kind == "grid" and k == "w":
                parts.append(f"{self.params['w']}x{self.params['h']}")
                break
            if self.kind == "circulant" and k == "n":
                parts.append(str(v))
                continue
            if k == "set":
                parts.append("set=" + ",".join(map(str, v)))
                continue
            if k == "size":
                parts.append(f"s={v}")
                continue
            parts.append(f"{k}={v}")
        return ":".join(parts)


def parse_generator_spec(text: str) -> GeneratorSpec:
    parts = text.strip().split(":")
    kind = parts[0].lower()
    args = parts[1:]
    kv = {}
    plain = []
    for a in args:
        if "=" in a:
            k, v = a.split("=", 1)
            kv[k.lower()] = v
        else:
            plain.append(a)
    try:
        if kind == "grid":
            w, h = plain[0].lower().split("x")
            return GeneratorSpec("grid", {"w": int(w), "h": int(h)})
        if kind == "circulant":
            n = int(plain[0])
            if "set" in kv:
                conn = tuple(sorted(int(x) for x in kv["set"].split(",")))
                return GeneratorSpec("circulant", {"n": n, "set": conn})
            return GeneratorSpec("circulant", {"n": n, "size": int(kv["s"])})
        if kind == "rbt":
            return GeneratorSpec("rbt", {"dmax": int(kv["dmax"]), "n": int(kv["n"])})
        if kind == "rtree":
            params = {"d": int(kv["d"])}
            if "n" in kv:
                params["n"] = int(kv["n"])
            else:
                params["depth"] = int(kv["depth"])
            return GeneratorSpec("rtree", params)
        if kind == "rrg":
            return GeneratorSpec("rrg", {"d": int(kv["d"]), "n": int(kv["n"])})
        if kind == "ba":
            return GeneratorSpec("ba", {"n": int(kv["n"]), "m": int(kv["m"])})
    except (KeyError, IndexError, ValueError) as exc:
        raise GraphError(f"bad generator spec {text!r}: {exc}") from exc
    raise GraphError(f"unknown generator kind {kind!r}")


def generate(spec: GeneratorSpec | str, seed: int = 0) -> Graph:
    if isinstance(spec, str):
        spec = parse_generator_spec(spec)
    fn = _KINDS.get(spec.kind)
    if fn is None:
        raise GraphError(f"unknown generator kind {spec.kind!r}")
    return fn(seed=seed, **spec.params)


def grid_graph(w: int, h: int, seed: int = 0) -> Graph:
    """w x h lattice with 4-neighbor adjacency.  Boundary vertices are the
    grid's irregular (degree < 4) vertices; there is no padding."""
    if w < 1 or h < 1:
        raise GraphError("grid dimensions must be positive")
    edges = []
    for r in range(h):
        for c in range(w):
            v = r * w + c
            if c + 1 < w:
                edges.append((v, v + 1))
            if r + 1 < h:
                edges.append((v, v + w))
    return Graph(w * h, edges)


def circulant_graph(n: int, connections=None, size: int | None = None, seed: int = 0) -> Graph:
    """Circulant graph on Z_n with edges i ~ i+s for s in the connection set.

    The connection set must lie in [1, n/2) and generate Z_n (connectivity);
    when `size` is given the set is drawn uniformly at random, resampling
    until it generates.  Such a set yields a 2|S|-regular graph.
    """
    if n < 3:
        raise GraphError("circulant graph needs n >= 3")
    half = (n - 1) // 2  # largest admissible offset, strictly below n/2
    if connections is not None:
        conn = sorted(set(int(s) for s in connections))
        if not conn or conn[0] < 1 or conn[-1] > half:
            raise GraphError(f"connection set must lie in [1, {half}]")
        if math.gcd(n, *conn) != 1:
            raise GraphError(f"connection set {conn} does not generate Z_{n}")
    else:
        if size is None or not 1 <= size <= half:
            raise GraphError("connection-set size out of range")
        rng = rng_from(seed, 0)
        while True:
            conn = sorted(rng.choice(np.arange(1, half + 1), size=size, replace=False).tolist())
            if math.gcd(n, *conn) == 1:
                break
    edges = set()
    for s in conn:
        for i in range(n):
            j = (i + s) % n
            edges.add((min(i, j), max(i, j)))
    return Graph(n, sorted(edges))


def regular_tree(d: int, n: int | None = None, depth: int | None = None, seed: int = 0) -> Graph:
    """Complete d-regular tree (root has d children, internals d-1), grown
    breadth-first to the given depth or truncated at n vertices."""
    if d < 2:
        raise GraphError("regular tree needs d >= 2")
    if (n is None) == (depth is None):
        raise GraphError("give exactly one of n, depth")
    edges = []
    levels = [0]
    frontier = [0]
    count = 1
    lvl = 0
    while frontier:
        if depth is not None and lvl >= depth:
            break
        nxt = []
        for v in frontier:
            kids = d if v == 0 else d - 1
            for _ in range(kids):
                if n is not None and count >= n:
                    return Graph(count, edges)
                edges.append((v, count))
                nxt.append(count)
                count += 1
        frontier = nxt
        lvl += 1
        levels.append(lvl)
    return Graph(count, edges)


def random_branching_tree(dmax: int, n: int, seed: int = 0) -> Graph:
    """Random tree grown from a single vertex; each vertex gets a uniform
    1..dmax-1 children, so no degree exceeds dmax.  Growth stops (children
    truncated) once n vertices exist."""
    if dmax < 2:
        raise GraphError("branching tree needs dmax >= 2")
    if n < 1:
        raise GraphError("n must be positive")
    rng = rng_from(seed, 0)
    edges = []
    count = 1
    queue = [0]
    head = 0
    while count < n and head < len(queue):
        v = queue[head]
        head += 1
        kids = int(rng.integers(1, dmax))  # 1..dmax-1 inclusive
        for _ in range(kids):
            if count >= n:
                break
            edges.append((v, count))
            queue.append(count)
            count += 1
    return Graph(count, edges)


def random_regular_graph(d: int, n: int, seed: int = 0) -> Graph:
    """Random simple d-regular graph (configuration model via networkx)."""
    if d * n % 2 != 0:
        raise GraphError(f"no {d}-regular graph on {n} vertices (odd d*n)")
    if d >= n:
        raise GraphError("need d < n")
    import networkx as nx

    seq = int(np.random.SeedSequence((seed, 0)).generate_state(1)[0])
    gx = nx.random_regular_graph(d, n, seed=seq)
    return Graph(n, gx.edges())


def barabasi_albert_graph(n: int, m: int, seed: int = 0) -> Graph:
    """Preferential-attachment graph (networkx implementation)."""
    import networkx as nx

    seq = int(np.random.SeedSequence((seed, 0)).generate_state(1)[0])
    gx = nx.barabasi_albert_graph(n, m, seed=seq)
    return Graph(n, gx.edges())


_KINDS = {
    "grid": lambda w, h, seed: grid_graph(w, h),
    "circulant": lambda n, seed, connections=None, size=None, **kw: circulant_graph(
        n, connections=kw.get("set", connections), size=size, seed=seed
    ),
    "rbt": lambda dmax, n, seed: random_branching_tree(dmax, n, seed),
    "rtree": lambda d, seed, n=None, depth=None: regular_tree(d, n=n, depth=depth),
    "rrg": lambda d, n, seed: random_regular_graph(d, n, seed),
    "ba": lambda n, m, seed: barabasi_albert_graph(n, m, seed),
}
