import numpy as np
import pytest

from sbmfit import (
    Graph,
    InfeasibleError,
    Labeling,
    SearchConfig,
    SearchSpaceError,
    exact_argmax,
    greedy_argmax,
    meets_min_size,
    misclassification,
    sample,
)
from sbmfit.experiments import balanced_params
from sbmfit.modularity import icl_from_counters, ml_from_counters
from sbmfit.graphs import block_counters
from sbmfit.search import _GreedyState

from conftest import random_graph, random_labeling


def two_cliques(size=4):
    edges = [(i, j) for i in range(size) for j in range(i + 1, size)]
    edges += [(i, j) for i in range(size, 2 * size) for j in range(i + 1, 2 * size)]
    return Graph.from_edges(2 * size, edges)


class TestExact:
    def test_recovers_planted_cliques(self):
        g = two_cliques()
        cfg = SearchConfig(objective="ml", alpha=0.25, restarts=1, seed=0)
        fit = exact_argmax(g, 2, cfg)
        planted = Labeling([0] * 4 + [1] * 4, 2)
        assert misclassification(fit.labeling, planted) == 0
        assert fit.objective_value == 0.0

    def test_complete_graph_lexicographic_tie(self):
        g = Graph(4, ~np.eye(4, dtype=bool))
        cfg = SearchConfig(objective="ml", alpha=0.25, restarts=1, seed=0)
        fit = exact_argmax(g, 2, cfg)
        assert fit.objective_value == 0.0
        assert fit.labeling.labels.tolist() == [0, 0, 0, 1]

    def test_recovery_rate_on_sampled_instances(self):
        # Planted labelings outside F(n, alpha) cannot be recovered by a
        # constrained argmax, so only feasible draws count.
        params = balanced_params(2, 18.0, 1.0, 0.05)  # P = [[.9,.05],[.05,.9]]
        cfg = SearchConfig(objective="ml", alpha=0.2, restarts=1, seed=0)
        exact_hits = 0
        kept = 0
        seed = 50_000
        while kept < 100:
            seed += 1
            z, g = sample(params, 8, seed=seed)
            if not meets_min_size(z, cfg.alpha):
                continue
            kept += 1
            fit = exact_argmax(g, 2, cfg)
            if misclassification(fit.labeling, z) == 0:
                exact_hits += 1
        assert exact_hits >= 90

    def test_guard(self):
        g = Graph(40, np.zeros((40, 40), dtype=bool))
        cfg = SearchConfig(objective="ml", alpha=0.1, restarts=1, seed=0)
        with pytest.raises(SearchSpaceError):
            exact_argmax(g, 3, cfg)

    def test_infeasible_alpha(self):
        g = two_cliques()
        with pytest.raises(InfeasibleError):
            SearchConfig(objective="ml", alpha=0.6, restarts=1, seed=0).check_feasible(2)
        cfg = SearchConfig(objective="ml", alpha=0.45, restarts=1, seed=0)
        with pytest.raises(InfeasibleError):
            exact_argmax(Graph(5, np.zeros((5, 5), dtype=bool)), 2, cfg)

    def test_objective_value_matches_reevaluation(self, rng):
        g = random_graph(rng, 9)
        for objective in ("ml", "icl"):
            cfg = SearchConfig(objective=objective, alpha=0.1, restarts=1, seed=0)
            fit = exact_argmax(g, 2, cfg)
            counters = block_counters(g, fit.labeling)
            want = ml_from_counters(counters) if objective == "ml" else icl_from_counters(counters)
            assert fit.objective_value == want


class TestGreedy:
    def test_attains_exact_on_small_instances(self):
        params = balanced_params(2, 18.0, 1.0, 0.05)
        hits = {"ml": 0, "icl": 0}
        for inst in range(20):
            z, g = sample(params, 10, seed=777 + inst)
            for objective in ("ml", "icl"):
                cfg = SearchConfig(objective=objective, alpha=0.2, restarts=20, seed=inst)
                ex = exact_argmax(g, 2, cfg)
                gr = greedy_argmax(g, 2, cfg)
                assert gr.objective_value <= ex.objective_value + 1e-12
                if abs(gr.objective_value - ex.objective_value) <= 1e-12:
                    hits[objective] += 1
        assert hits["ml"] >= 19 and hits["icl"] >= 19

    def test_planted_cliques(self):
        g = two_cliques()
        cfg = SearchConfig(objective="icl", alpha=0.25, restarts=5, seed=3)
        fit = greedy_argmax(g, 2, cfg)
        planted = Labeling([0] * 4 + [1] * 4, 2)
        assert misclassification(fit.labeling, planted) == 0

    def test_optimal_initialization_is_fixed_point(self):
        g = two_cliques()
        state = _GreedyState(g, 2, np.array([0] * 4 + [1] * 4), "ml")
        for i in range(g.n):
            a = int(state.z[i])
            d = state.neighbor_counts(i)
            for b in range(2):
                if b != a:
                    assert state.move_delta(a, b, d) <= 0.0

    def test_deterministic(self, rng):
        g = random_graph(rng, 30)
        cfg = SearchConfig(objective="ml", alpha=0.1, restarts=4, seed=5)
        f1 = greedy_argmax(g, 3, cfg)
        f2 = greedy_argmax(g, 3, cfg)
        assert np.array_equal(f1.labeling.labels, f2.labeling.labels)
        assert f1.objective_value == f2.objective_value
        assert f1.restart_index == f2.restart_index

    def test_always_feasible(self, rng):
        for _ in range(20):
            n = int(rng.integers(12, 40))
            g = random_graph(rng, n, p=float(rng.uniform(0.1, 0.7)))
            alpha = float(rng.uniform(0.05, 0.3))
            cfg = SearchConfig(objective="ml", alpha=alpha, restarts=2, seed=1)
            fit = greedy_argmax(g, 3, cfg)
            assert fit.feasible
            assert meets_min_size(fit.labeling, alpha)

    def test_canonical_output(self, rng):
        g = random_graph(rng, 20)
        cfg = SearchConfig(objective="ml", alpha=0.1, restarts=3, seed=8)
        fit = greedy_argmax(g, 3, cfg)
        labels = fit.labeling.labels
        assert labels[0] == 0
        seen_max = 0
        for lab in labels:
            assert lab <= seen_max + 1
            seen_max = max(seen_max, lab)

    def test_incremental_matches_recompute(self, rng):
        worst = 0.0
        for case in range(100):
            n = int(rng.integers(10, 26))
            k = int(rng.integers(2, 4))
            g = random_graph(rng, n, p=0.4)
            z = random_labeling(rng, n, k)
            objective = "ml" if case % 2 == 0 else "icl"
            state = _GreedyState(g, k, z.labels, objective)
            scale = 2.0 * n * n if objective == "ml" else float(n * n)
            for i in rng.permutation(n):
                a = int(state.z[i])
                d = state.neighbor_counts(i)
                for b in range(k):
                    if b == a:
                        continue
                    delta = state.move_delta(a, b, d)
                    if delta > 0:
                        before = state.full_potential()
                        state.apply_move(int(i), b, d, delta)
                        after = state.full_potential()
                        worst = max(worst, abs(state.potential - after) / scale)
                        assert after > before  # accepted moves strictly improve
                        break
        assert worst < 1e-9

    def test_exact_at_least_greedy(self, rng):
        for objective in ("ml", "icl"):
            for _ in range(10):
                g = random_graph(rng, 9, p=0.5)
                cfg = SearchConfig(objective=objective, alpha=0.2, restarts=5, seed=2)
                ex = exact_argmax(g, 2, cfg)
                gr = greedy_argmax(g, 2, cfg)
                assert ex.objective_value >= gr.objective_value - 1e-12
