"""Exact likelihood computation for SI infection snapshots.

Ground truth comes from `oracle_enumerate`, which walks every admissible
spreading order of a small infected set and sums exact per-order
probabilities (degrees are taken in the underlying graph, so the boundary
beyond the snapshot matters).  On top of that sit closed forms for three
tractable snapshot shapes inside a degree-regular network:

  * a path ending at a single degree-1 irregular vertex,
  * a broom (path plus degree-1 leaves at the far end),
  * a unicyclic snapshot with no irregular vertices.

Everything here is exact rational arithmetic; floats appear only in
serialized reports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .graph import Graph, GraphError, bfs_levels, bfs_rooted, minimum_cycle_sizes

ENUMERATION_CAP = 10
CLOSURE_DP_CAP = 18


class OracleCapError(GraphError):
    """Infected set too large to enumerate."""


# ---------------------------------------------------------------------------
# step-probability building blocks
#
# With s vertices infected in a d-regular region the susceptible boundary
# carries d*s - 2*(s-1) edge endpoints; an infected vertex of degree d'
# shifts the total by d' - d, and a completed cycle inside the infected set
# removes two more endpoints.


def _growth(d: int, i: int) -> int:
    return (i - 1) * (d - 2)


def regular_tree_order_probability(d: int, n: int) -> Fraction:
    """Common probability of any single spreading order of n vertices in the
    interior of a d-regular tree."""
    if d < 2 or n < 1:
        raise GraphError("need d >= 2 and n >= 1")
    den = 1
    for k in range(1, n):
        den *= d * k - 2 * (k - 1)
    return Fraction(1, den)


def irregular_position_probability(d: int, d_prime: int, n: int, k: int) -> Fraction:
    """Probability of one spreading order in which the single irregular
    vertex (underlying degree d_prime) is the k-th infection.

    k = 1 covers the irregular vertex itself acting as source.
    """
    if not 1 <= k <= n:
        raise GraphError(f"position k={k} out of range [1, {n}]")
    if d_prime > d:
        raise GraphError("irregular degree must not exceed the regular degree")
    den = 1
    for i in range(1, k):
        den *= d + _growth(d, i)
    for i in range(k - 1, n - 1):
        den *= d + _growth(d, i) + (d_prime - 2)
    return Fraction(1, den)


def cyclic_position_probability(d: int, n: int, k: int) -> Fraction:
    """Probability of one spreading order of a unicyclic snapshot in a
    d-regular network whose last cycle vertex is the k-th infection.

    The closing vertex has two infected neighbors (hence the numerator 2);
    once the cycle is complete the boundary holds i*(d-2) endpoints with i
    infected.  Position bounds that depend on the actual graph are enforced
    by `unicyclic_likelihood`.
    """
    if d < 3:
        raise GraphError("need d >= 3 (a cycle fills a 2-regular network)")
    if not 3 <= k <= n:
        raise GraphError(f"closing position k={k} out of range [3, {n}]")
    den = 1
    for i in range(1, k):
        den *= d + _growth(d, i)
    for i in range(k, n):
        den *= i * (d - 2)
    return Fraction(2, den)


# ---------------------------------------------------------------------------
# likelihood profiles


@dataclass(frozen=True)
class LikelihoodProfile:
    """Per-vertex snapshot likelihoods with their positional decomposition.

    `probs[v]` is P(snapshot | source v), exact.  When present,
    `decomposition[v]` maps the decisive position k (the irregular vertex's
    position, the first leaf position for brooms, or the cycle-closing
    position) to a pair (order count, per-order probability); the terms
    reassemble `probs[v]` exactly.
    """

    probs: dict[int, Fraction]
    method: str
    decomposition: dict[int, dict[int, tuple[int, Fraction]]] | None = None

    def argmax(self) -> list[int]:
        best = max(self.probs.values())
        return sorted(v for v, p in self.probs.items() if p == best)

    def check_decomposition(self) -> bool:
        if self.decomposition is None:
            return True
        for v, terms in self.decomposition.items():
            total = sum((m * p for m, p in terms.values()), Fraction(0))
            if total != self.probs[v]:
                return False
        return True

    def to_jsonable(self, labels=None) -> dict:
        def name(v):
            return labels[v] if labels is not None else str(v)

        out = {
            "method": self.method,
            "likelihood": {
                name(v): {
                    "decimal": _sig_digits(p, 20),
                    "numerator": str(p.numerator),
                    "denominator": str(p.denominator),
                }
                for v, p in sorted(self.probs.items())
            },
        }
        if self.decomposition is not None:
            out["decomposition"] = {
                name(v): {
                    str(k): {"count": m, "per_order": str(p)}
                    for k, (m, p) in sorted(terms.items())
                }
                for v, terms in sorted(self.decomposition.items())
            }
        return out


def _sig_digits(x: Fraction, digits: int) -> str:
    """Decimal rendering of a rational with the given significant digits."""
    if x == 0:
        return "0"
    exp = len(str(abs(x.numerator))) - len(str(x.denominator))
    while 10**exp * x.denominator > abs(x.numerator):
        exp -= 1
    while 10 ** (exp + 1) * x.denominator <= abs(x.numerator):
        exp += 1
    scaled = abs(x) * Fraction(10) ** (digits - 1 - exp)
    q = round(scaled)
    if q >= 10**digits:
        q //= 10
        exp += 1
    s = str(q)
    sign = "-" if x < 0 else ""
    return f"{sign}{s[0]}.{s[1:]}e{exp}"


# ---------------------------------------------------------------------------
# enumeration oracle


@dataclass(frozen=True)
class OracleResult:
    prob: Fraction
    order_count: int
    orders: tuple[tuple[tuple[int, ...], Fraction], ...] | None = None


def _check_infected(g: Graph, infected, cap: int):
    verts = sorted(set(infected))
    if not verts:
        raise GraphError("infected set is empty")
    if len(verts) > cap:
        raise OracleCapError(
            f"infected set of {len(verts)} exceeds enumeration cap {cap} "
            f"(up to {math.factorial(len(verts))} orders); raise the cap explicitly"
        )
    sub, old = g.induced(verts)
    sub.require_connected("infected set")
    return verts, sub, old


def oracle_enumerate(
    g: Graph,
    infected,
    source: int,
    cap: int = ENUMERATION_CAP,
    collect_orders: bool = False,
) -> OracleResult:
    """Enumerate every spreading order of `infected` from `source` by DFS
    over susceptible frontiers and sum the exact per-order probabilities."""
    verts, _, old = _check_infected(g, infected, cap)
    if source not in verts:
        raise GraphError("source must be infected")
    pos = {v: i for i, v in enumerate(verts)}
    nloc = len(verts)
    deg_g = [g.degree(v) for v in verts]
    adj = [[pos[w] for w in g.adj[v] if w in pos] for v in verts]

    total = Fraction(0)
    orders: list[tuple[tuple[int, ...], Fraction]] = []
    count = 0

    s0 = pos[source]
    seq = [s0]
    status = [False] * nloc
    status[s0] = True
    nbr_count = [0] * nloc  # infected neighbors per vertex
    for w in adj[s0]:
        nbr_count[w] += 1

    def rec(k: int, boundary_weight: int, num: int, den: int):
        nonlocal total, count
        if k == nloc:
            p = Fraction(num, den)
            total += p
            count += 1
            if collect_orders:
                orders.append((tuple(old[i] for i in seq), p))
            return
        for u in range(nloc):
            if status[u] or nbr_count[u] == 0:
                continue
            w = nbr_count[u]
            status[u] = True
            seq.append(u)
            for x in adj[u]:
                nbr_count[x] += 1
            rec(k + 1, boundary_weight + deg_g[u] - 2 * w, num * w, den * boundary_weight)
            for x in adj[u]:
                nbr_count[x] -= 1
            seq.pop()
            status[u] = False

    rec(1, deg_g[s0], 1, 1)
    return OracleResult(total, count, tuple(orders) if collect_orders else None)


def oracle_profile(
    g: Graph,
    infected,
    marker: int | None = None,
    cap: int = ENUMERATION_CAP,
) -> LikelihoodProfile:
    """Likelihood of every infected vertex as source, by full enumeration.

    With `marker` set, each vertex's orders are grouped by the marker's
    position; the stored per-order probability is the exact group average,
    so the decomposition reassembles the totals regardless of topology.
    """
    verts, _, _ = _check_infected(g, infected, cap)
    probs: dict[int, Fraction] = {}
    decomp: dict[int, dict[int, tuple[int, Fraction]]] | None = None
    if marker is not None:
        if marker not in verts:
            raise GraphError("marker must be infected")
        decomp = {}
    for v in verts:
        res = oracle_enumerate(g, verts, v, cap=cap, collect_orders=marker is not None)
        probs[v] = res.prob
        if marker is not None:
            groups: dict[int, list[Fraction]] = {}
            for order, p in res.orders:
                k = order.index(marker) + 1
                groups.setdefault(k, []).append(p)
            decomp[v] = {
                k: (len(ps), sum(ps, Fraction(0)) / len(ps))
                for k, ps in sorted(groups.items())
            }
    return LikelihoodProfile(probs, "oracle", decomp)


# ---------------------------------------------------------------------------
# spreading-order counting on trees


def tree_extension_count(g: Graph, root: int) -> int:
    """Number of spreading orders of a tree from `root`:
    n! / product of rooted subtree sizes."""
    if g.m != g.n - 1:
        raise GraphError("extension count needs a tree")
    view = bfs_rooted(g, root)
    return math.factorial(g.n) // math.prod(view.subtree_size)


def marker_position_counts(g: Graph, root: int, marker: int) -> dict[int, int]:
    """Counts of spreading orders of a tree from `root` with `marker` at each
    possible position.

    Peels the root-to-marker path: orders with the marker at position k are
    a prefix of k-1 vertices from outside the marker's subtree (their own
    order placing the marker's parent within it), the marker, and a free
    interleave of the marker's subtree with the leftovers.
    """
    if g.m != g.n - 1:
        raise GraphError("position counts need a tree")
    view = bfs_rooted(g, root)
    if root == marker:
        return {1: tree_extension_count(g, root)}
    path = list(reversed(view.path_to_root(marker)))  # root .. marker
    depth = len(path) - 1

    # block l: subtree of path[l] minus subtree of path[l+1]
    block_of = {w: i for i, w in enumerate(path)}
    in_block = [-1] * g.n
    for v in view.order:  # parents precede children
        in_block[v] = block_of.get(v, in_block[view.parent[v]] if view.parent[v] >= 0 else 0)
    sizes = [0] * (depth + 1)
    for v in range(g.n):
        sizes[in_block[v]] += 1

    # spreading orders of each block rooted at its path vertex; inside a
    # block every non-path vertex keeps its full rooted subtree
    block_ext = []
    for l, w in enumerate(path):
        prod = sizes[l]
        for v in range(g.n):
            if in_block[v] == l and v != w:
                prod *= view.subtree_size[v]
        block_ext.append(math.factorial(sizes[l]) // prod)

    n_l = sizes[0]
    dist = {1: block_ext[0]}
    for l in range(1, depth + 1):
        s_l = sizes[l]
        n_l += s_l
        new: dict[int, int] = {}
        run = 0
        run_k = 0
        for k in range(l + 1, n_l - s_l + 2):
            while run_k < k - 1:
                run_k += 1
                run += dist.get(run_k, 0)
            c = math.comb(n_l - k, s_l - 1) * block_ext[l] * run
            if c:
                new[k] = c
        dist = new
    return dist


# ---------------------------------------------------------------------------
# closed form: path with one degree-1 irregular end


def line_likelihood(d: int, n: int) -> LikelihoodProfile:
    """Likelihood profile of a path snapshot v_1..v_n inside a d-regular
    network whose far end v_n is the sole irregular vertex (degree 1).

    Vertex id i (0-based) is v_{i+1}; the irregular end is id n-1.
    """
    if d <= 2:
        raise GraphError("need d > 2: a 2-regular network is itself a path")
    if n < 2:
        raise GraphError("need n >= 2")
    pk = {k: irregular_position_probability(d, 1, n, k) for k in range(1, n + 1)}
    probs: dict[int, Fraction] = {}
    decomp: dict[int, dict[int, tuple[int, Fraction]]] = {}
    for i in range(1, n + 1):
        terms: dict[int, tuple[int, Fraction]] = {}
        if i == n:
            terms[1] = (1, pk[1])
        else:
            for k in range(n - i + 1, n + 1):
                m = math.comb(k - 2, k - n + i - 1)
                if m:
                    terms[k] = (m, pk[k])
        probs[i - 1] = sum((m * p for m, p in terms.values()), Fraction(0))
        decomp[i - 1] = terms
    return LikelihoodProfile(probs, "line-closed-form", decomp)


# ---------------------------------------------------------------------------
# closed form: broom


def broom_graph(t: int, k_leaves: int) -> Graph:
    """Path 0..2t-1 with k_leaves degree-1 leaves attached at vertex 2t-1."""
    edges = [(i, i + 1) for i in range(2 * t - 1)]
    edges += [(2 * t - 1, 2 * t + j) for j in range(k_leaves)]
    return Graph(2 * t + k_leaves, edges)


def broom_likelihood(d: int, t: int, k_leaves: int) -> LikelihoodProfile:
    """Likelihood profile of a broom snapshot in a d-regular network: path
    v_1..v_2t (ids 0..2t-1) with `k_leaves` degree-1 irregular leaves at
    v_2t (ids 2t..2t+k_leaves-1).

    Orders sharing a leaf-position set share a probability, and the order
    count for a set depends only on its smallest position, so the profile is
    a sum over first-leaf positions weighted by a suffix mass accumulated by
    dynamic programming over (position, leaves placed).
    """
    k = k_leaves
    if k < 1:
        raise GraphError("need at least one leaf")
    if k >= d:
        raise GraphError(f"cannot attach {k} degree-1 leaves at a degree-{d} vertex")
    if t < 1:
        raise GraphError("need t >= 1")
    n = 2 * t + k

    def boundary(s: int, r: int) -> int:
        # s infected of which r are leaves
        return d * s - 2 * (s - 1) - r * (d - 1)

    # g[s][r]: mass of all ways to place the k-r remaining leaves at
    # positions > s, times the step factors from s onward, given r leaves
    # among the first s infected
    g = [[Fraction(0)] * (k + 1) for _ in range(n + 1)]
    g[n][k] = Fraction(1)
    for s in range(n - 1, 0, -1):
        for r in range(min(s - 1, k) + 1):
            # r = s is unreachable (leaves need the handle first), and with a
            # path vertex present the boundary stays positive
            acc = g[s + 1][r]
            if r < k:
                acc += g[s + 1][r + 1]
            if acc:
                g[s][r] = acc / boundary(s, r)

    prefix = [Fraction(1)] * (n + 2)  # step factors 1..h-1 with no leaf yet
    for s in range(1, n + 1):
        prefix[s + 1] = prefix[s] / boundary(s, 0)

    def path_term_count(i: int, j: int) -> int:
        # orders of the bare path from v_i with v_2t at position j
        if i == 2 * t:
            return 1 if j == 1 else 0
        if j < 2 * t - i + 1 or j > 2 * t:
            return 0
        return math.comb(j - 2, 2 * t - i - 1)

    probs: dict[int, Fraction] = {}
    decomp: dict[int, dict[int, tuple[int, Fraction]]] = {}

    kfac = math.factorial(k)
    for i in range(1, 2 * t + 1):  # path sources
        terms: dict[int, tuple[int, Fraction]] = {}
        total = Fraction(0)
        s_run = 0  # orders of the bare path with v_2t before position h1
        for h1 in range(2, n - k + 2):
            s_run += path_term_count(i, h1 - 1)
            if s_run == 0:
                continue
            mass = kfac * s_run * prefix[h1] * g[h1][1]
            if mass == 0:
                continue
            cnt = kfac * s_run * math.comb(n - h1, k - 1)
            terms[h1] = (cnt, mass / cnt)
            total += mass
        probs[i - 1] = total
        decomp[i - 1] = terms

    # leaf sources: the leaf starts, v_2t is forced second, the rest is the
    # reversed path chain interleaved with the remaining k-1 leaves
    leaf_total = (
        math.factorial(k - 1) * Fraction(1, boundary(1, 1)) * g[2][1]
        if n > 2
        else Fraction(1, boundary(1, 1))
    )
    leaf_count = math.factorial(k - 1) * math.comb(n - 2, k - 1)
    for j in range(k):
        v = 2 * t + j
        probs[v] = leaf_total
        decomp[v] = {1: (leaf_count, leaf_total / leaf_count)}
    return LikelihoodProfile(probs, "broom-closed-form", decomp)


# ---------------------------------------------------------------------------
# unicyclic snapshots


def closure_position_counts(
    g_n: Graph, cycle_vertices, source: int, cap: int = CLOSURE_DP_CAP
) -> dict[int, int]:
    """Counts of spreading orders of a unicyclic snapshot from `source`,
    grouped by the position at which the last cycle vertex is infected.

    Dynamic programming over the reachable infected sets (frontier ideals),
    pruned at cycle completion: once the cycle closes, the remainder is a
    hanging forest whose order count is a factorial-over-subtree-sizes
    product independent of the history.
    """
    n = g_n.n
    if n > cap:
        raise OracleCapError(f"closure DP needs n <= {cap} (got {n})")
    cyc = list(cycle_vertices)
    cyc_mask = 0
    for c in cyc:
        cyc_mask |= 1 << c

    # hanging-subtree sizes: root the forest at the cycle
    lvl = [0 if (cyc_mask >> v) & 1 else -1 for v in range(n)]
    order = [v for v in range(n) if lvl[v] == 0]
    head = 0
    parent = [-1] * n
    while head < len(order):
        v = order[head]
        head += 1
        for w in g_n.adj[v]:
            if lvl[w] == -1:
                lvl[w] = lvl[v] + 1
                parent[w] = v
                order.append(w)
    hang = [1] * n
    for v in reversed(order):
        if parent[v] >= 0:
            hang[parent[v]] += hang[v]

    fact = [math.factorial(i) for i in range(n + 1)]

    def suffix_orders(mask: int, size: int) -> int:
        prod = 1
        rest = ((1 << n) - 1) & ~mask
        v = 0
        m = rest
        while m:
            if m & 1:
                prod *= hang[v]
            m >>= 1
            v += 1
        return fact[n - size] // prod

    counts: dict[int, int] = {}
    states = {1 << source: 1}
    size = 1
    while states:
        nxt: dict[int, int] = {}
        for mask, cnt in states.items():
            for u in range(n):
                bit = 1 << u
                if mask & bit:
                    continue
                if not any((mask >> w) & 1 for w in g_n.adj[u]):
                    continue
                nm = mask | bit
                if nm & cyc_mask == cyc_mask:
                    k = size + 1
                    counts[k] = counts.get(k, 0) + cnt * suffix_orders(nm, k)
                else:
                    nxt[nm] = nxt.get(nm, 0) + cnt
        states = nxt
        size += 1
    return dict(sorted(counts.items()))


def unicyclic_likelihood(
    g: Graph, infected, cap: int = CLOSURE_DP_CAP
) -> LikelihoodProfile:
    """Likelihood profile of a unicyclic snapshot inside a degree-regular
    network: counts of orders grouped by cycle-closing position, each
    weighted by the closing-position probability."""
    verts = sorted(set(infected))
    if len(verts) > cap:
        raise OracleCapError(f"unicyclic decomposition needs n <= {cap}")
    sub, old = g.induced(verts)
    sub.require_connected("infected set")
    if sub.m != sub.n:
        raise GraphError("snapshot is not unicyclic")
    degs = {g.degree(v) for v in verts}
    if len(degs) != 1:
        raise GraphError(f"underlying degrees must be regular, saw {sorted(degs)}")
    d = degs.pop()
    info = minimum_cycle_sizes(sub)
    cyc = info.cycle
    n = sub.n
    probs: dict[int, Fraction] = {}
    decomp: dict[int, dict[int, tuple[int, Fraction]]] = {}
    for vloc in range(n):
        counts = closure_position_counts(sub, cyc, vloc, cap=cap)
        terms = {k: (m, cyclic_position_probability(d, n, k)) for k, m in counts.items()}
        probs[old[vloc]] = sum((m * p for m, p in terms.values()), Fraction(0))
        decomp[old[vloc]] = terms
    return LikelihoodProfile(probs, "cyclic-decomposition", decomp)
