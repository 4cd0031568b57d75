import numpy as np
import pytest

from conftest import (
    cloud_from_points,
    random_geometric_instance,
    three_bridged_triangles_graph,
    triangle_bridge_graph,
)
from geocut.functionals import (
    CHEEGER,
    RATIO,
    ImproperPartitionError,
    ObjectiveKind,
    Partition,
    balance_two_way,
    cut_value,
    discrete_balance,
    graph_total_variation,
    multiway,
    normalized_indicator,
    objective,
)
from geocut.geometry import INDICATOR
from geocut.graph import build_graph


class TestPartition:
    def test_counts(self):
        p = Partition.from_labels([0, 1, 1, 0, 1])
        assert p.k == 2 and p.counts.tolist() == [2, 3]

    def test_proper_detection(self):
        assert Partition.from_labels([0, 1]).is_proper()
        assert not Partition.from_labels([0, 0], k=2).is_proper()

    def test_out_of_range_labels(self):
        with pytest.raises(ValueError):
            Partition.from_labels([0, 2], k=2)


class TestCutValue:
    def test_triangle_bridge_single_crossing(self):
        g = triangle_bridge_graph()
        p = Partition.from_labels([0, 0, 0, 1, 1, 1])
        assert cut_value(g, p, 0) == 1.0

    def test_single_label_zero_cut(self):
        g = triangle_bridge_graph()
        p = Partition.from_labels([0] * 6, k=2)
        assert cut_value(g, p, 0) == 0.0

    def test_complete_graph_star_cut(self):
        pts = [[0, 0], [0.1, 0], [0, 0.1], [0.1, 0.1]]
        g = build_graph(cloud_from_points(pts), 1.0, INDICATOR)
        p = Partition.from_labels([1, 0, 0, 0])
        assert cut_value(g, p, 1) == 3.0

    def test_label_out_of_range(self):
        g = triangle_bridge_graph()
        p = Partition.from_labels([0, 0, 0, 1, 1, 1])
        with pytest.raises(ValueError):
            cut_value(g, p, 2)

    def test_cut_additivity(self, rng):
        for _ in range(20):
            g = random_geometric_instance(rng)
            labels = rng.integers(0, 3, size=g.n)
            p = Partition.from_labels(labels, k=3)
            total = sum(cut_value(g, p, k) for k in range(3))
            li = labels[g.edges_i]
            lj = labels[g.edges_j]
            boundary = float(g.edge_weights[li != lj].sum())
            assert total == pytest.approx(2.0 * boundary, rel=1e-12)


class TestBalance:
    def test_ratio_example(self):
        p = Partition.from_labels([0] * 3 + [1] * 7)
        assert balance_two_way(p, RATIO) == pytest.approx(0.42)

    def test_cheeger_example(self):
        p = Partition.from_labels([0] * 3 + [1] * 7)
        assert balance_two_way(p, CHEEGER) == pytest.approx(0.3)

    def test_balanced_case(self):
        p = Partition.from_labels([0] * 5 + [1] * 5)
        assert balance_two_way(p, RATIO) == pytest.approx(0.5)
        assert balance_two_way(p, CHEEGER) == pytest.approx(0.5)

    def test_matches_function_space_balance(self, rng):
        # the class-count formulas agree with the empirical-balance definition
        # evaluated on the indicator function
        for _ in range(50):
            n = int(rng.integers(2, 40))
            labels = rng.integers(0, 2, size=n)
            if len(np.unique(labels)) < 2:
                continue
            p = Partition.from_labels(labels)
            u = labels.astype(float)
            for kind in (CHEEGER, RATIO):
                assert balance_two_way(p, kind) == pytest.approx(
                    discrete_balance(u, kind), rel=1e-12)


class TestObjective:
    def test_triangle_bridge_cheeger(self):
        g = triangle_bridge_graph()
        res = objective(g, Partition.from_labels([0, 0, 0, 1, 1, 1]), CHEEGER)
        assert res.raw_cut == 1.0
        assert res.balance == pytest.approx(0.5)
        assert res.objective == pytest.approx(2.0)

    def test_triangle_bridge_ratio(self):
        g = triangle_bridge_graph()
        res = objective(g, Partition.from_labels([0, 0, 0, 1, 1, 1]), RATIO)
        assert res.balance == pytest.approx(0.5)
        assert res.objective == pytest.approx(2.0)

    def test_improper_partition_rejected(self):
        g = triangle_bridge_graph()
        with pytest.raises(ImproperPartitionError):
            objective(g, Partition.from_labels([0] * 6, k=2), CHEEGER)

    def test_label_swap_symmetry(self, rng):
        for _ in range(25):
            g = random_geometric_instance(rng)
            labels = rng.integers(0, 2, size=g.n)
            if len(np.unique(labels)) < 2:
                continue
            p = Partition.from_labels(labels)
            q = Partition.from_labels(1 - labels)
            for kind in (CHEEGER, RATIO):
                assert objective(g, p, kind).objective == objective(g, q, kind).objective

    def test_rescaled_constant_definition(self):
        g = triangle_bridge_graph()
        res = objective(g, Partition.from_labels([0, 0, 0, 1, 1, 1]), CHEEGER)
        assert res.rescaled_constant == pytest.approx(2.0 / (36 * 1.05**3))

    def test_edge_removal_never_increases_cut(self, rng):
        for _ in range(10):
            g = random_geometric_instance(rng)
            if g.edge_count == 0:
                continue
            labels = rng.integers(0, 2, size=g.n)
            li = labels[g.edges_i]
            lj = labels[g.edges_j]
            full = float(g.edge_weights[li != lj].sum())
            for e in range(g.edge_count):
                mask = np.ones(g.edge_count, bool)
                mask[e] = False
                reduced = float(g.edge_weights[mask][(li != lj)[mask]].sum())
                assert reduced <= full + 1e-15


class TestMultiway:
    def test_three_triangles_pairwise_bridged(self):
        g = three_bridged_triangles_graph()
        p = Partition.from_labels([0, 0, 0, 1, 1, 1, 2, 2, 2], k=3)
        for k in range(3):
            assert cut_value(g, p, k) == 2.0
        res = objective(g, p, multiway(3))
        assert res.objective == pytest.approx(18.0)
        assert res.raw_cut == pytest.approx(3.0)

    def test_kind_validation(self):
        with pytest.raises(ValueError):
            ObjectiveKind("cheeger", k=3)
        with pytest.raises(ValueError):
            ObjectiveKind("multiway", k=1)


class TestGraphTV:
    def test_constant_function_zero(self, rng):
        g = random_geometric_instance(rng)
        assert graph_total_variation(g, np.full(g.n, 3.7), g.n, g.epsilon, 2) == 0.0

    def test_indicator_identity(self, rng):
        # GTV(1_Y) = 2 Cut(Y, Y^c) / (n^2 eps^3), exact to machine precision
        for _ in range(50):
            g = random_geometric_instance(rng)
            labels = rng.integers(0, 2, size=g.n)
            u = labels.astype(float)
            li = labels[g.edges_i]
            lj = labels[g.edges_j]
            boundary = float(g.edge_weights[li != lj].sum())
            got = graph_total_variation(g, u, g.n, g.epsilon, 2)
            want = 2.0 * boundary / (g.n**2 * g.epsilon**3)
            assert got == pytest.approx(want, rel=1e-12)

    def test_one_homogeneity(self, rng):
        g = random_geometric_instance(rng)
        u = rng.normal(size=g.n)
        base = graph_total_variation(g, u, g.n, g.epsilon, 2)
        scaled = graph_total_variation(g, -3.0 * u, g.n, g.epsilon, 2)
        assert scaled == pytest.approx(3.0 * base, rel=1e-12)


class TestNormalizedIndicator:
    def test_balanced_cheeger_values(self):
        p = Partition.from_labels([0] * 5 + [1] * 5)
        u = normalized_indicator(p, CHEEGER)
        assert sorted(set(u.tolist())) == [0.0, 2.0]

    def test_unbalanced_cheeger_values(self):
        p = Partition.from_labels([0] * 7 + [1] * 3)
        u = normalized_indicator(p, CHEEGER)
        assert sorted(set(u.tolist())) == [0.0, pytest.approx(10.0 / 3.0)]

    def test_zero_balance_rejected(self):
        p = Partition.from_labels([0, 0, 0], k=2)
        with pytest.raises(ImproperPartitionError):
            normalized_indicator(p, CHEEGER)

    def test_gtv_of_normalized_indicator_matches_objective(self, rng):
        # GTV(u / B(u)) = 2 * (Cut/Bal) / (n^2 eps^3)
        for _ in range(25):
            g = random_geometric_instance(rng)
            labels = rng.integers(0, 2, size=g.n)
            if len(np.unique(labels)) < 2:
                continue
            p = Partition.from_labels(labels)
            for kind in (CHEEGER, RATIO):
                u = normalized_indicator(p, kind)
                res = objective(g, p, kind)
                got = graph_total_variation(g, u, g.n, g.epsilon, 2)
                want = 2.0 * res.objective / (g.n**2 * g.epsilon**3)
                assert got == pytest.approx(want, rel=1e-10)

    def test_cheeger_median_minimizes(self, rng):
        # the lower-median evaluation attains the minimum over a dense c grid
        for _ in range(20):
            u = rng.normal(size=int(rng.integers(2, 30)))
            val = discrete_balance(u, CHEEGER)
            grid = np.linspace(u.min(), u.max(), 201)
            brute = min(float(np.abs(u - c).mean()) for c in grid)
            assert val <= brute + 1e-12
