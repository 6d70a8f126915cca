import math
from fractions import Fraction

import numpy as np
import pytest

from episource import (
    Graph,
    GraphError,
    OracleCapError,
    broom_graph,
    broom_likelihood,
    closure_position_counts,
    cyclic_position_probability,
    epidemic_centrality_tree,
    irregular_position_probability,
    line_likelihood,
    marker_position_counts,
    minimum_cycle_sizes,
    oracle_enumerate,
    oracle_profile,
    regular_tree_order_probability,
    tree_extension_count,
    unicyclic_likelihood,
)
from conftest import (
    broom_instance,
    count_sequences_masked,
    line_instance,
    pad_to_degree,
    random_tree,
    random_unicyclic,
)


# -- step-probability building blocks -----------------------------------------


def test_regular_tree_order_probability_values():
    assert regular_tree_order_probability(3, 2) == Fraction(1, 3)
    assert regular_tree_order_probability(3, 4) == Fraction(1, 60)
    assert regular_tree_order_probability(3, 1) == 1
    assert regular_tree_order_probability(5, 1) == 1


def test_irregular_position_probability_worked_example():
    # degree-2 irregular vertex third out of six in a 3-regular network
    want = Fraction(1, 3) * Fraction(1, 4) * Fraction(1, 4) * Fraction(1, 5) * Fraction(1, 6)
    assert irregular_position_probability(3, 2, 6, 3) == want


def test_irregular_position_probability_regular_reduction():
    # equal degrees wipe out the positional effect for every k
    for d in (3, 4, 5):
        for k in range(1, 7):
            assert irregular_position_probability(d, d, 6, k) == regular_tree_order_probability(d, 6)


def test_irregular_position_probability_range():
    with pytest.raises(GraphError):
        irregular_position_probability(3, 1, 5, 0)
    with pytest.raises(GraphError):
        irregular_position_probability(3, 1, 5, 6)


def test_cyclic_position_probability_values():
    assert cyclic_position_probability(3, 6, 4) == Fraction(2, 1200)
    assert cyclic_position_probability(3, 6, 5) == Fraction(2, 1800)
    assert cyclic_position_probability(3, 6, 6) == Fraction(2, 2520)
    with pytest.raises(GraphError):
        cyclic_position_probability(3, 6, 2)
    with pytest.raises(GraphError):
        cyclic_position_probability(2, 6, 4)


# -- enumeration oracle --------------------------------------------------------


def test_oracle_single_vertex():
    g = Graph(3, [(0, 1), (1, 2)])
    assert oracle_enumerate(g, [1], 1).prob == 1


def test_oracle_reference_instance(irregular_leaf_instance):
    g, infected = irregular_leaf_instance
    prof = oracle_profile(g, infected, marker=4)
    # frozen from the enumeration oracle, cross-checked against the
    # interleaving count m(k) = 2*(6-k) and the position probabilities
    assert prof.probs[0] == Fraction(53, 3600)
    assert prof.probs[1] == Fraction(41, 3600)
    assert prof.probs[2] == Fraction(11, 5400)
    assert prof.probs[3] == Fraction(11, 5400)
    assert prof.probs[4] == Fraction(1, 72)
    assert prof.probs[5] == Fraction(1, 540)
    row = [prof.decomposition[0].get(k, (0, None))[0] for k in range(1, 6)]
    assert row == [0, 8, 6, 4, 2]
    assert [prof.decomposition[4].get(k, (0, None))[0] for k in range(1, 6)] == [10, 0, 0, 0, 0]
    assert prof.check_decomposition()
    # ranking: the two tied order-count maxima split in favor of the vertex
    # adjacent to the irregular one
    assert prof.argmax() == [0]
    assert prof.probs[4] > prof.probs[1]


def test_oracle_cap():
    g = Graph(12, [(i, i + 1) for i in range(11)])
    with pytest.raises(OracleCapError, match="479001600"):
        oracle_enumerate(g, range(12), 0)
    assert oracle_enumerate(g, range(12), 0, cap=12).prob > 0


def test_oracle_rejects_disconnected_infected():
    g = Graph(4, [(0, 1), (1, 2), (2, 3)])
    with pytest.raises(GraphError):
        oracle_enumerate(g, [0, 3], 0)


def test_oracle_full_infection_degeneracy():
    # when the whole network is infected every source explains the snapshot
    # with total probability one, so the normalized posterior is uniform 1/n
    rng = np.random.default_rng(4)
    for _ in range(10):
        n = int(rng.integers(2, 8))
        g = random_tree(rng, n)
        prof = oracle_profile(g, range(n))
        assert all(p == 1 for p in prof.probs.values())
    g = Graph(4, [(0, 1), (1, 2), (2, 0), (0, 3)])
    prof = oracle_profile(g, range(4))
    assert all(p == 1 for p in prof.probs.values())


def test_oracle_orders_sum_and_count(irregular_leaf_instance):
    g, infected = irregular_leaf_instance
    res = oracle_enumerate(g, infected, 0, collect_orders=True)
    assert res.order_count == 20 == len(res.orders)
    assert sum((p for _, p in res.orders), Fraction(0)) == res.prob


# -- position counts on trees --------------------------------------------------


def test_marker_position_counts_examples():
    path = Graph(3, [(0, 1), (1, 2)])
    assert marker_position_counts(path, 0, 2) == {3: 1}
    star = Graph(4, [(0, 1), (0, 2), (0, 3)])
    assert marker_position_counts(star, 0, 1) == {2: 2, 3: 2, 4: 2}
    assert marker_position_counts(star, 0, 0) == {1: 6}


def test_marker_position_counts_match_enumeration():
    rng = np.random.default_rng(17)
    for _ in range(40):
        n = int(rng.integers(3, 9))
        g = random_tree(rng, n)
        root = int(rng.integers(n))
        marker = int(rng.integers(n))
        got = marker_position_counts(g, root, marker)
        res = oracle_enumerate(g, range(n), root, collect_orders=True)
        want = {}
        for order, _ in res.orders:
            k = order.index(marker) + 1
            want[k] = want.get(k, 0) + 1
        assert got == want


def test_position_counts_sum_to_order_count():
    rng = np.random.default_rng(23)
    for _ in range(60):
        n = int(rng.integers(2, 11))
        g = random_tree(rng, n)
        root = int(rng.integers(n))
        marker = int(rng.integers(n))
        counts = marker_position_counts(g, root, marker)
        assert sum(counts.values()) == tree_extension_count(g, root)
        assert sum(counts.values()) == epidemic_centrality_tree(g).scores[root]


# -- path snapshots -------------------------------------------------------------


def test_line_likelihood_matches_oracle():
    for d in (3, 4, 5):
        for n in (2, 3, 4, 6, 7):
            g = line_instance(d, n)
            cf = line_likelihood(d, n)
            oc = oracle_profile(g, range(n))
            assert all(cf.probs[v] == oc.probs[v] for v in range(n)), (d, n)
    assert line_likelihood(3, 5).check_decomposition()


def test_line_likelihood_rejects_degenerate_degree():
    with pytest.raises(GraphError):
        line_likelihood(2, 5)


def test_line_likelihood_transition_is_sharp():
    # the irregular end maximizes the likelihood on short paths; past the
    # crossover the maximizer moves to the interior for good (d=4: n=8)
    flips = []
    for n in range(2, 12):
        am = line_likelihood(4, n).argmax()
        flips.append(am == [n - 1])
    assert flips[:6] == [True] * 6          # n = 2..7
    assert not any(flips[6:])               # n = 8..11


def test_line_center_overtakes_irregular_end():
    for d in (3, 4, 5):
        crossed = False
        for n in range(3, 14):
            prof = line_likelihood(d, n)
            centers = [(n - 1) // 2] if n % 2 else [n // 2 - 1, n // 2]
            p_c = max(prof.probs[c] for c in centers)
            if crossed:
                assert p_c > prof.probs[n - 1], (d, n)
            elif p_c > prof.probs[n - 1]:
                crossed = True
        assert crossed, d


# -- broom snapshots -------------------------------------------------------------


def test_broom_graph_shape():
    g = broom_graph(2, 3)
    assert g.n == 7 and g.degree(3) == 4 and sum(1 for v in range(7) if g.degree(v) == 1) == 4


def test_broom_likelihood_matches_oracle():
    for d, t, k in [(4, 2, 2), (3, 1, 2), (4, 1, 3), (5, 2, 3), (3, 3, 1), (6, 1, 5)]:
        cf = broom_likelihood(d, t, k)
        oc = oracle_profile(broom_instance(d, t, k), range(2 * t + k))
        assert all(cf.probs[v] == oc.probs[v] for v in range(2 * t + k)), (d, t, k)
        assert cf.check_decomposition()


def test_broom_single_leaf_equals_line():
    for d, t in [(3, 2), (4, 3), (5, 1)]:
        b = broom_likelihood(d, t, 1)
        l = line_likelihood(d, 2 * t + 1)
        assert all(b.probs[v] == l.probs[v] for v in range(2 * t + 1))


def test_broom_leaves_symmetric():
    prof = broom_likelihood(5, 3, 4)
    leaf_ps = {prof.probs[v] for v in range(6, 10)}
    assert len(leaf_ps) == 1


def test_broom_infeasible_attachment():
    with pytest.raises(GraphError):
        broom_likelihood(4, 2, 4)


def test_broom_transition_window():
    # five leaves in a 6-regular network: the leaves still win at n=37 and
    # the interior has taken over by n=39
    for t, leaf_side in [(16, True), (17, False)]:
        n = 2 * t + 5
        prof = broom_likelihood(6, t, 5)
        vc = epidemic_centrality_tree(broom_graph(t, 5)).argbest[0]
        p_leaf = prof.probs[2 * t]
        p_c = prof.probs[vc]
        assert (p_leaf > p_c) is leaf_side, n
        leaves = set(range(2 * t, n))
        assert (set(prof.argmax()) <= leaves) is leaf_side


# -- unicyclic snapshots ----------------------------------------------------------


def test_unicyclic_likelihood_reference(triangle_tail_instance):
    g, infected = triangle_tail_instance
    cf = unicyclic_likelihood(g, infected)
    oc = oracle_profile(g, infected)
    assert all(cf.probs[v] == oc.probs[v] for v in infected)
    assert cf.check_decomposition()
    assert cf.method == "cyclic-decomposition"


def test_unicyclic_likelihood_random_instances():
    rng = np.random.default_rng(31)
    done = 0
    while done < 25:
        n = int(rng.integers(4, 9))
        h = int(rng.integers(3, n + 1))
        gn = random_unicyclic(rng, n, h)
        d = max(gn.degrees()) + int(rng.integers(0, 2))
        if d < 3:
            d = 3
        g = pad_to_degree(list(gn.edges()), n, lambda v: d)
        cf = unicyclic_likelihood(g, range(n))
        oc = oracle_profile(g, range(n))
        assert all(cf.probs[v] == oc.probs[v] for v in range(n)), (n, h, d)
        done += 1


def test_unicyclic_pure_cycle_ties():
    for h, d in [(3, 3), (4, 3), (5, 4), (6, 3)]:
        gn = Graph(h, [(i, (i + 1) % h) for i in range(h)])
        g = pad_to_degree(list(gn.edges()), h, lambda v: d)
        cf = unicyclic_likelihood(g, range(h))
        assert len(set(cf.probs.values())) == 1
        assert cf.argmax() == list(range(h))


def test_unicyclic_rejects_wrong_shapes(two_cycle_instance):
    tree = pad_to_degree([(0, 1), (1, 2)], 3, lambda v: 3)
    with pytest.raises(GraphError):
        unicyclic_likelihood(tree, range(3))
    g, infected = two_cycle_instance
    with pytest.raises(GraphError):
        unicyclic_likelihood(g, infected)


def test_closure_counts_match_sequence_total(triangle_tail_snapshot):
    info = minimum_cycle_sizes(triangle_tail_snapshot)
    for v in range(6):
        counts = closure_position_counts(triangle_tail_snapshot, info.cycle, v)
        assert sum(counts.values()) == count_sequences_masked(triangle_tail_snapshot, v)


def test_two_cycle_snapshot_likelihood(two_cycle_instance, two_cycle_snapshot):
    # two cycles of different sizes: the bridge vertex by the triangle and a
    # square vertex share the spreading-order count, yet the one nearer the
    # smaller cycle is the likelier source
    g, infected = two_cycle_instance
    assert count_sequences_masked(two_cycle_snapshot, 7) == count_sequences_masked(
        two_cycle_snapshot, 3
    )
    prof = oracle_profile(g, infected)
    assert prof.probs[7] > prof.probs[3]
    assert prof.argmax() == [7]


# -- dominance and ratio lemmas ----------------------------------------------------


def test_two_hop_count_ratio_implies_subtree_ratio():
    from episource import bfs_rooted

    rng = np.random.default_rng(41)
    checked = 0
    while checked < 200:
        n = int(rng.integers(4, 12))
        g = random_tree(rng, n)
        sc = epidemic_centrality_tree(g).scores
        for a in range(n):
            view = bfs_rooted(g, a)
            for b in range(n):
                if view.level[b] == 2 and sc[a] > sc[b]:
                    t_ab = bfs_rooted(g, b).subtree_size[a]
                    t_ba = view.subtree_size[b]
                    assert t_ab > t_ba
                    checked += 1


def test_partial_sum_dominance_small():
    # cumulative position counts of the marked vertex dominate pairwise when
    # the order count and the distance both favor one side
    rng = np.random.default_rng(43)
    from episource import bfs_levels

    for _ in range(120):
        n = int(rng.integers(3, 10))
        g = random_tree(rng, n)
        marker = int(rng.integers(n))
        sc = epidemic_centrality_tree(g).scores
        lv = bfs_levels(g, marker)
        counts = {v: marker_position_counts(g, v, marker) for v in range(n)}
        for a in range(n):
            for b in range(n):
                if a == b:
                    continue
                cond1 = sc[a] >= sc[b] and lv[a] < lv[b]
                cond2 = sc[a] > sc[b] and lv[a] <= lv[b]
                if not (cond1 or cond2):
                    continue
                run_a = run_b = 0
                for k in range(1, n + 1):
                    run_a += counts[a].get(k, 0)
                    run_b += counts[b].get(k, 0)
                    assert run_a >= run_b, (sorted(g.edges()), a, b, marker, k)


def test_profile_serialization(irregular_leaf_instance):
    g, infected = irregular_leaf_instance
    prof = oracle_profile(g, infected, marker=4)
    obj = prof.to_jsonable()
    assert obj["likelihood"]["0"]["numerator"] == "53"
    assert obj["likelihood"]["0"]["decimal"].startswith("1.47222222222222")
    assert obj["decomposition"]["0"]["2"]["count"] == 8
