import itertools

import numpy as np
import pytest

from sbmfit import (
    Graph,
    Labeling,
    block_counters,
    confusion,
    disagreement_fraction,
    hamming_distance,
    meets_min_size,
    misclassification,
)
from sbmfit.graphs import confusion_counts, min_feasible_size

from conftest import random_graph, random_labeling


def brute_force_counters(g, z):
    k = z.k
    o = np.zeros((k, k), dtype=np.int64)
    for i in range(g.n):
        for j in range(g.n):
            if i != j and g.adj[i, j]:
                o[z.labels[i], z.labels[j]] += 1
    return o


def brute_force_misclassification(e, z):
    best = e.n
    for sigma in itertools.permutations(range(z.k)):
        sigma = np.array(sigma)
        best = min(best, int(np.count_nonzero(e.labels != sigma[z.labels])))
    return best


class TestGraph:
    def test_rejects_self_loop(self):
        with pytest.raises(ValueError):
            Graph.from_edges(3, [(0, 0)])

    def test_rejects_asymmetric(self):
        adj = np.zeros((3, 3), dtype=bool)
        adj[0, 1] = True
        with pytest.raises(ValueError):
            Graph(3, adj)

    def test_immutable(self, rng):
        g = random_graph(rng, 6)
        with pytest.raises(ValueError):
            g.adj[0, 1] = True

    def test_edges_sorted(self):
        g = Graph.from_edges(4, [(2, 3), (0, 1)])
        assert g.edges() == [(0, 1), (2, 3)]
        assert g.edge_count == 2


class TestBlockCounters:
    def test_empty_graph(self, rng):
        g = Graph(5, np.zeros((5, 5), dtype=bool))
        z = random_labeling(rng, 5, 3)
        assert block_counters(g, z).edge_counts.sum() == 0

    def test_single_edge_one_block(self):
        g = Graph.from_edges(3, [(0, 1)])
        z = Labeling([0, 0, 0], 1)
        c = block_counters(g, z)
        assert c.pair_counts[0, 0] == 6
        assert c.edge_counts[0, 0] == 2

    def test_matches_double_loop_oracle(self, rng):
        for _ in range(50):
            n = int(rng.integers(2, 33))
            k = int(rng.integers(1, 5))
            g = random_graph(rng, n)
            z = random_labeling(rng, n, k)
            c = block_counters(g, z)
            assert np.array_equal(c.edge_counts, brute_force_counters(g, z))
            sizes = z.sizes()
            expected_pairs = np.outer(sizes, sizes)
            np.fill_diagonal(expected_pairs, sizes * (sizes - 1))
            assert np.array_equal(c.pair_counts, expected_pairs)
            assert c.edge_counts.sum() == 2 * g.edge_count

    def test_tilde_accessors_halve_diagonal(self, rng):
        g = random_graph(rng, 10)
        z = random_labeling(rng, 10, 2)
        c = block_counters(g, z)
        assert np.array_equal(np.diagonal(c.tilde_edge_counts()) * 2, np.diagonal(c.edge_counts))
        off = ~np.eye(2, dtype=bool)
        assert np.array_equal(c.tilde_edge_counts()[off], c.edge_counts[off])

    def test_dimension_mismatch(self, rng):
        g = random_graph(rng, 5)
        with pytest.raises(ValueError):
            block_counters(g, random_labeling(rng, 6, 2))


class TestConfusion:
    def test_identical_labelings_diagonal(self, rng):
        z = random_labeling(rng, 20, 3)
        r = confusion(z, z)
        assert np.allclose(r.r, np.diag(z.sizes() / 20))

    def test_label_swap_antidiagonal(self, rng):
        z = random_labeling(rng, 12, 2)
        e = z.permuted([1, 0])
        r = confusion(e, z)
        assert r.r[0, 0] == 0 and r.r[1, 1] == 0

    def test_hand_example(self):
        e = Labeling([0, 0, 1, 1, 1, 0], 2)
        z = Labeling([0, 0, 0, 1, 1, 1], 2)
        r = confusion(e, z)
        assert np.allclose(r.r, [[2 / 6, 1 / 6], [1 / 6, 2 / 6]])

    def test_marginals(self, rng):
        e = random_labeling(rng, 30, 4)
        z = random_labeling(rng, 30, 4)
        r = confusion(e, z)
        assert np.allclose(r.row_marginals(), e.sizes() / 30)
        assert np.allclose(r.col_marginals(), z.sizes() / 30)
        assert r.r.sum() == pytest.approx(1.0, abs=1e-12)

    def test_mismatched_k(self, rng):
        with pytest.raises(ValueError):
            confusion(random_labeling(rng, 10, 2), random_labeling(rng, 10, 3))

    def test_diag_col_marginals_is_self_confusion(self, rng):
        e = random_labeling(rng, 25, 3)
        z = random_labeling(rng, 25, 3)
        lhs = np.diag(confusion(e, z).col_marginals())
        assert np.allclose(lhs, confusion(z, z).r, atol=1e-15)


class TestMisclassification:
    def test_identical(self, rng):
        z = random_labeling(rng, 15, 3)
        assert misclassification(z, z) == 0

    def test_any_relabeling_is_zero(self, rng):
        z = random_labeling(rng, 15, 3)
        assert misclassification(z.permuted([2, 0, 1]), z) == 0

    def test_matches_permutation_oracle(self, rng):
        for _ in range(100):
            e = random_labeling(rng, 10, 3)
            z = random_labeling(rng, 10, 3)
            assert misclassification(e, z) == brute_force_misclassification(e, z)

    def test_symmetry(self, rng):
        for _ in range(50):
            e = random_labeling(rng, 12, 4)
            z = random_labeling(rng, 12, 4)
            assert misclassification(e, z) == misclassification(z, e)

    def test_assignment_route_agrees_with_permutations(self, rng):
        from scipy.optimize import linear_sum_assignment

        for _ in range(50):
            e = random_labeling(rng, 20, 4)
            z = random_labeling(rng, 20, 4)
            counts = confusion_counts(e, z)
            row, col = linear_sum_assignment(counts, maximize=True)
            assert misclassification(e, z) == 20 - counts[row, col].sum()

    def test_zero_iff_permutation(self, rng):
        for _ in range(50):
            e = random_labeling(rng, 10, 3)
            z = random_labeling(rng, 10, 3)
            m = misclassification(e, z)
            is_perm = any(
                np.array_equal(e.labels, np.array(sigma)[z.labels])
                for sigma in itertools.permutations(range(3))
            )
            assert (m == 0) == is_perm


class TestDisagreementFraction:
    def test_identical(self, rng):
        z = random_labeling(rng, 9, 2)
        assert disagreement_fraction(z, z) == 0.0

    def test_single_disagreement(self):
        e = Labeling([0, 1, 1, 1], 2)
        z = Labeling([0, 0, 1, 1], 2)
        assert disagreement_fraction(e, z) == 1 / 4

    def test_exact_hamming_identity(self, rng):
        for _ in range(1000):
            n = int(rng.integers(2, 40))
            k = int(rng.integers(1, 6))
            e = random_labeling(rng, n, k)
            z = random_labeling(rng, n, k)
            assert disagreement_fraction(e, z) == hamming_distance(e, z) / n


class TestMinSize:
    def test_balanced_at_one_over_k(self):
        z = Labeling([0, 0, 1, 1, 2, 2], 3)
        assert meets_min_size(z, 1 / 3)

    def test_empty_community_fails(self):
        z = Labeling([0, 0, 0, 0], 2)
        assert not meets_min_size(z, 0.01)

    def test_tie_counts_as_satisfied(self):
        z = Labeling([0] * 3 + [1] * 7, 2)
        assert meets_min_size(z, 0.3)
        assert not meets_min_size(z, 0.31)

    def test_alpha_range_validated(self):
        z = Labeling([0, 1], 2)
        for bad in (0.0, 1.0, -0.5, 2.0):
            with pytest.raises(ValueError):
                meets_min_size(z, bad)

    def test_min_feasible_size(self):
        assert min_feasible_size(10, 0.2) == 2
        assert min_feasible_size(10, 0.25) == 3
        assert min_feasible_size(10, 0.3) == 3


class TestLabeling:
    def test_canonical_first_occurrence(self):
        z = Labeling([2, 0, 2, 1], 3)
        assert z.canonical().labels.tolist() == [0, 1, 0, 2]

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            Labeling([0, 3], 2)

    def test_immutable(self, rng):
        z = random_labeling(rng, 5, 2)
        with pytest.raises(ValueError):
            z.labels[0] = 1
