import itertools
import math

import pytest

from gossip_age.network import (
    GossipNetwork,
    NetworkError,
    Protocol,
    ProtocolMode,
    restrict_protocol,
    superpose_to_push,
)
from gossip_age.solver import (
    AgeTable,
    ExactAgeSolver,
    age_bounds,
    solve_age,
    solve_all_singletons,
    solve_star_reduced,
    star_reduced_leaf_fed_classes,
)
from gossip_age.topologies import complete, star_center_fed, star_leaf_fed

from conftest import seeded_network

TOL = 1e-9


def all_nonempty_sets(n):
    nodes = range(1, n + 1)
    for k in range(1, n + 1):
        for combo in itertools.combinations(nodes, k):
            yield frozenset(combo)


class TestSolveAge:
    def test_single_node_base_case(self):
        net = GossipNetwork(n=1, lambda_e=1.0, source_rates=(4.0,))
        assert solve_age(net, {1}) == pytest.approx(0.25, abs=TOL)

    def test_two_node_chain(self, two_node_chain):
        assert solve_age(two_node_chain, {1}) == pytest.approx(0.5, abs=TOL)
        assert solve_age(two_node_chain, {1, 2}) == pytest.approx(0.5, abs=TOL)
        assert solve_age(two_node_chain, {2}) == pytest.approx(5 / 6, abs=TOL)

    @pytest.mark.parametrize("protocol,expected", [
        (Protocol.PULL, 2.0),
        (Protocol.PUSH, 3.0),
        (Protocol.PUSH_PULL, 5 / 3),
    ])
    def test_star3_leaf_by_protocol(self, protocol, expected):
        net = restrict_protocol(star_center_fed(3, 1.0, 1.0), ProtocolMode(protocol))
        assert solve_age(net, {1}) == pytest.approx(expected, abs=TOL)

    def test_leaf_fed_pushpull_fed_sets_are_base(self):
        net = star_leaf_fed(6, 1.0, 1.0)  # push-pull by construction
        for s in all_nonempty_sets(6):
            if 1 in s:
                assert solve_age(net, s) == pytest.approx(1.0, abs=TOL)

    def test_unreachable_set_is_infinite(self):
        net = GossipNetwork(n=3, lambda_e=1.0, source_rates=(1.0, 0.0, 0.0),
                            push_rates={(1, 2): 1.0})
        assert math.isinf(solve_age(net, {3}))
        assert math.isfinite(solve_age(net, {2}))
        # a set is only as old as its freshest member, so {2,3} stays finite
        assert solve_age(net, {2, 3}) == pytest.approx(2.0, abs=TOL)

    def test_empty_set_rejected(self, two_node_chain):
        with pytest.raises(NetworkError, match="non-empty"):
            solve_age(two_node_chain, set())

    def test_over_cap_rejected(self):
        net = GossipNetwork(n=65, lambda_e=1.0, source_rates=(1.0,) * 65)
        with pytest.raises(NetworkError, match="cap"):
            solve_age(net, {1})

    def test_monotone_under_inclusion(self):
        for seed in range(10):
            net = seeded_network(seed)
            solver = ExactAgeSolver(net)
            for s in all_nonempty_sets(net.n):
                for extra in range(1, net.n + 1):
                    if extra not in s:
                        assert solver.solve(s | {extra}) <= solver.solve(s) + TOL

    def test_full_set_base_value(self):
        for seed in range(10):
            net = seeded_network(seed)
            lam0 = sum(net.source_rates)
            full = frozenset(range(1, net.n + 1))
            assert solve_age(net, full) == pytest.approx(net.lambda_e / lam0, abs=TOL)

    def test_superposition_invariance_small(self):
        for seed in range(10):
            net = seeded_network(seed)
            sup = superpose_to_push(net)
            a, b = ExactAgeSolver(net), ExactAgeSolver(sup)
            for s in all_nonempty_sets(net.n):
                va, vb = a.solve(s), b.solve(s)
                if math.isinf(va) or math.isinf(vb):
                    assert math.isinf(va) and math.isinf(vb)
                else:
                    assert va == pytest.approx(vb, abs=TOL)

    def test_non_negativity(self):
        for seed in range(10):
            net = seeded_network(seed)
            solver = ExactAgeSolver(net)
            assert all(solver.solve(s) >= 0 for s in all_nonempty_sets(net.n))


class TestSolveAllSingletons:
    def test_complete_symmetry(self):
        table = solve_all_singletons(complete(5, 1.0, 1.0))
        vals = [table.singleton(i) for i in range(1, 6)]
        assert max(vals) - min(vals) < TOL

    def test_leaf_fed_star_symmetry(self):
        table = solve_all_singletons(star_leaf_fed(6, 1.0, 1.0))
        assert table.singleton(1) == pytest.approx(1.0, abs=TOL)
        leaves = [table.singleton(i) for i in range(2, 6)]
        assert max(leaves) - min(leaves) < TOL

    def test_isolated_node_reports_infinite_average(self):
        net = GossipNetwork(n=3, lambda_e=1.0, source_rates=(1.0, 0.0, 0.0),
                            push_rates={(1, 2): 1.0})
        table = solve_all_singletons(net)
        assert math.isinf(table.singleton(3))
        assert math.isinf(table.average(3))
        assert math.isfinite(table.singleton(1))


class TestAgeBounds:
    def _superset_table(self, net, s):
        solver = ExactAgeSolver(net)
        table = AgeTable()
        for i in range(1, net.n + 1):
            if i not in s:
                table.put(s | {i}, solver.solve(s | {i}))
        return table

    def test_symmetric_neighborhood_collapses(self):
        net = complete(4, 1.0, 1.0)
        s = frozenset({1})
        lo, hi = age_bounds(net, s, self._superset_table(net, s))
        v = solve_age(net, s)
        assert lo == pytest.approx(v, abs=TOL)
        assert hi == pytest.approx(v, abs=TOL)

    def test_star3_pushpull_brackets(self):
        net = star_center_fed(3, 1.0, 1.0)
        s = frozenset({1})
        lo, hi = age_bounds(net, s, self._superset_table(net, s))
        assert lo - TOL <= 5 / 3 <= hi + TOL

    def test_sandwich_on_seeded_networks(self):
        for seed in range(8):
            net = seeded_network(seed, 6)
            solver = ExactAgeSolver(net)
            for s in all_nonempty_sets(6):
                if len(s) == 6:
                    continue
                table = AgeTable()
                for i in range(1, 7):
                    if i not in s:
                        table.put(s | {i}, solver.solve(s | {i}))
                lo, hi = age_bounds(net, s, table)
                v = solver.solve(s)
                assert lo <= v + TOL
                assert v <= hi + TOL

    def test_no_neighbors_degenerates(self):
        net = GossipNetwork(n=2, lambda_e=3.0, source_rates=(1.5, 1.0))
        lo, hi = age_bounds(net, {1}, AgeTable())
        assert lo == hi == pytest.approx(2.0, abs=TOL)

    def test_missing_superset_entry(self):
        net = star_center_fed(3, 1.0, 1.0)
        with pytest.raises(KeyError, match="no age stored"):
            age_bounds(net, {1}, AgeTable())


class TestStarReduced:
    @pytest.mark.parametrize("variant,gen,fed,leaf_rep", [
        ("center-fed", star_center_fed, lambda n: n, 1),
        ("leaf-fed", star_leaf_fed, lambda n: 1, 2),
    ])
    @pytest.mark.parametrize("protocol", list(Protocol))
    def test_matches_exact(self, variant, gen, fed, leaf_rep, protocol):
        for n in range(3, 13):
            mode = ProtocolMode(protocol)
            net = restrict_protocol(gen(n, 1.0, 1.0), mode)
            solver = ExactAgeSolver(net)
            red = solve_star_reduced(variant, mode, n, 1.0, 1.0)
            assert red.fed == pytest.approx(solver.solve({fed(n)}), abs=TOL)
            assert red.center == pytest.approx(solver.solve({n}), abs=TOL)
            assert red.leaf == pytest.approx(solver.solve({leaf_rep}), abs=TOL)

    def test_center_fed_pull_n3(self):
        red = solve_star_reduced("center-fed", ProtocolMode(Protocol.PULL), 3, 1.0, 1.0)
        assert red.leaf == pytest.approx(2.0, abs=TOL)

    def test_center_fed_pull_bounded_for_all_n(self):
        for n in (10, 100, 500, 1000):
            red = solve_star_reduced("center-fed", ProtocolMode(Protocol.PULL),
                                     n, 1.0, 1.0)
            assert red.leaf <= 2.0 + 3.0 / n

    def test_leaf_fed_pushpull_constant_age(self):
        for n in (10, 100, 1000):
            red = solve_star_reduced("leaf-fed", ProtocolMode(Protocol.PUSH_PULL),
                                     n, 1.0, 1.0)
            assert red.leaf <= 3.0
            assert red.fed == pytest.approx(1.0, abs=TOL)

    def test_leaf_fed_pull_center_linear(self):
        for n in (5, 50, 500):
            red = solve_star_reduced("leaf-fed", ProtocolMode(Protocol.PULL),
                                     n, 1.0, 1.0)
            assert red.center >= n - 1

    def test_leaf_fed_pushpull_all_fed_classes_base(self):
        classes = star_reduced_leaf_fed_classes(
            ProtocolMode(Protocol.PUSH_PULL), 200, 1.0, 1.0)
        for (k, f, c), v in classes.items():
            if f == 1:
                assert v == pytest.approx(1.0, abs=TOL)

    def test_rejects_small_n(self):
        with pytest.raises(NetworkError):
            solve_star_reduced("center-fed", ProtocolMode(Protocol.PUSH), 2, 1.0, 1.0)


class TestDominance:
    def test_pushpull_beats_restrictions_small(self):
        for seed in range(10):
            net = seeded_network(seed)
            pp = ExactAgeSolver(restrict_protocol(net, ProtocolMode(Protocol.PUSH_PULL)))
            pu = ExactAgeSolver(restrict_protocol(net, ProtocolMode(Protocol.PUSH)))
            pl = ExactAgeSolver(restrict_protocol(net, ProtocolMode(Protocol.PULL)))
            for s in all_nonempty_sets(net.n):
                v = pp.solve(s)
                assert v <= pu.solve(s) + TOL
                assert v <= pl.solve(s) + TOL
