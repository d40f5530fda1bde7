import itertools

import numpy as np
import pytest

from cpdetect import (
    AnnealSchedule,
    Graph,
    degree_scores,
    eigenvector_centrality,
    h_index_coreness,
    product_quality,
    ramp_scores,
    simulated_annealing_scores,
    smooth_max_objective,
)
from cpdetect.baselines import _anneal_point, _metropolis_level
from conftest import (
    complete_graph,
    path_graph,
    peel_core_numbers,
    random_connected_graph,
    star_graph,
)


def ideal_block_graph(n, core_size):
    """Complete core, complete core-periphery block, empty periphery."""
    edges = [
        (i, j)
        for i in range(n)
        for j in range(i + 1, n)
        if i < core_size or j < core_size
    ]
    return Graph.from_edges(n, [e[0] for e in edges], [e[1] for e in edges])


class TestDegreeScores:
    def test_star(self):
        assert degree_scores(star_graph(3)) == pytest.approx([1.0, 1 / 3, 1 / 3, 1 / 3])

    def test_complete(self):
        assert np.all(degree_scores(complete_graph(4)) == 1.0)

    def test_weighted_single_edge(self):
        g = Graph.from_edges(2, [0], [1], [2.5])
        assert np.all(degree_scores(g) == 1.0)

    def test_maximizes_linear_objective_among_candidates(self, rng):
        # the alpha -> 1 objective is linear, so on the 2-sphere its maximizer
        # is the normalized degree direction; check against assorted candidates
        for _ in range(5):
            n = int(rng.integers(4, 12))
            g = random_connected_graph(rng, n, 0.5, weighted=True)
            d = degree_scores(g)
            best = smooth_max_objective(g, d / np.linalg.norm(d), 1.0 + 1e-9)
            candidates = [np.ones(n)] + [rng.uniform(0, 1, n) for _ in range(20)]
            for c in candidates:
                val = smooth_max_objective(g, c / np.linalg.norm(c), 1.0 + 1e-9)
                assert val <= best * (1 + 1e-6)


class TestEigenvectorCentrality:
    def test_complete_graph(self):
        res = eigenvector_centrality(complete_graph(5))
        assert res.converged
        assert res.scores == pytest.approx(np.full(5, 5**-0.5), abs=1e-10)
        assert res.eigenvalue == pytest.approx(4.0, rel=1e-12)

    @pytest.mark.parametrize("m", [3, 9])
    def test_star_against_reduced_eigenproblem(self, m):
        # exact dominant pair: eigenvalue sqrt(m), center/leaf ratio sqrt(m)
        res = eigenvector_centrality(star_graph(m))
        assert res.converged
        assert res.eigenvalue == pytest.approx(np.sqrt(m), rel=1e-8)
        assert res.scores[0] / res.scores[1] == pytest.approx(np.sqrt(m), rel=1e-8)

    def test_positive_and_small_residual(self, rng):
        for _ in range(5):
            g = random_connected_graph(rng, 15, 0.3, weighted=True)
            res = eigenvector_centrality(g)
            assert np.all(res.scores > 0)
            a = g.adjacency
            resid = np.linalg.norm(a @ res.scores - res.eigenvalue * res.scores)
            assert resid <= 1e-6 * res.eigenvalue

    def test_argmax_invariant_under_weight_rescaling(self, rng):
        g = random_connected_graph(rng, 12, 0.4, weighted=True)
        scaled = Graph.from_edges(
            12, g.edge_index[:, 0], g.edge_index[:, 1], 3.25 * g.edge_weight
        )
        r1 = eigenvector_centrality(g)
        r2 = eigenvector_centrality(scaled)
        assert np.argmax(r1.scores) == np.argmax(r2.scores)
        assert r2.eigenvalue == pytest.approx(3.25 * r1.eigenvalue, rel=1e-8)

    def test_budget_exhaustion_flagged(self):
        res = eigenvector_centrality(star_graph(5), tolerance=1e-14, max_iterations=3)
        assert not res.converged
        assert res.iterations == 3


class TestHIndexCoreness:
    def test_complete_graph(self):
        assert np.all(h_index_coreness(complete_graph(4)) == 3)

    def test_path_is_one_degenerate(self):
        assert np.all(h_index_coreness(path_graph(4)) == 1)

    def test_equals_peeling_oracle_on_random_graphs(self, rng):
        for _ in range(100):
            n = int(rng.integers(4, 30))
            iu, ju = np.triu_indices(n, k=1)
            keep = rng.random(iu.size) < rng.uniform(0.1, 0.6)
            if not keep.any():
                keep[0] = True
            g = Graph.from_edges(n, iu[keep], ju[keep])
            assert np.array_equal(h_index_coreness(g), peel_core_numbers(g))

    def test_weights_are_binarized(self):
        heavy = Graph.from_edges(4, [0, 1, 2, 0], [1, 2, 3, 3], [9.0, 0.1, 5.0, 2.0])
        light = Graph.from_edges(4, [0, 1, 2, 0], [1, 2, 3, 3])
        assert np.array_equal(h_index_coreness(heavy), h_index_coreness(light))


class TestRampScores:
    def test_alpha_one_is_binary(self):
        x = ramp_scores(6, 1.0, 0.5)
        assert np.all(x[:3] == 0.0)
        assert np.all(x[3:] == 1.0)

    def test_quarter_points(self):
        # direct evaluation of the two-branch formula
        assert ramp_scores(4, 0.0, 0.5) == pytest.approx([0.25, 0.5, 0.75, 1.0])

    def test_nondecreasing_everywhere(self, rng):
        for _ in range(50):
            n = int(rng.integers(1, 30))
            a, b = rng.uniform(0, 1, 2)
            x = ramp_scores(n, a, b)
            assert np.all(np.diff(x) >= -1e-15)

    def test_beta_edge_cases(self):
        # floor(beta*n) = 0: every position on the core ramp
        x = ramp_scores(4, 0.5, 0.1)
        assert np.all(x >= 0.75 - 1e-12)
        # floor(beta*n) = n: every position on the peripheral ramp
        y = ramp_scores(4, 0.5, 1.0)
        assert y == pytest.approx(np.arange(1, 5) * 0.5 / 8)

    def test_validation(self):
        with pytest.raises(ValueError):
            ramp_scores(4, -0.1, 0.5)
        with pytest.raises(ValueError):
            ramp_scores(0, 0.5, 0.5)


class TestProductQuality:
    def test_single_edge(self):
        assert product_quality(Graph.from_edges(2, [0], [1]), [1.0, 1.0]) == 2.0

    def test_zero_scores(self):
        assert product_quality(complete_graph(3), np.zeros(3)) == 0.0

    def test_k3_brute_force(self):
        assert product_quality(complete_graph(3), [1.0, 2.0, 3.0]) == 22.0

    def test_mismatch(self):
        with pytest.raises(ValueError):
            product_quality(complete_graph(3), [1.0])


class TestAnnealing:
    def test_single_point_reaches_exhaustive_optimum(self):
        # n=8 ideal block graph: compare against brute force over all 8! assignments
        g = ideal_block_graph(8, 4)
        a = g.adjacency

        for alpha in (1.0, 0.5):
            x = ramp_scores(8, alpha, 0.5)
            best_q = -np.inf
            optimal_tops = set()
            for perm in itertools.permutations(range(8)):
                q = product_quality(g, x[np.array(perm)])
                if q > best_q + 1e-9:
                    best_q = q
                    optimal_tops = {frozenset(i for i in range(8) if perm[i] >= 4)}
                elif q > best_q - 1e-9:
                    optimal_tops.add(frozenset(i for i in range(8) if perm[i] >= 4))

            sigma, q = _anneal_point(
                a.indptr, a.indices, a.data, 8, x, [7, 0], None, 0.95, 800, None
            )
            assert q == pytest.approx(best_q, rel=1e-12)
            assert frozenset(i for i in range(8) if sigma[i] >= 4) in optimal_tops
            if alpha == 0.5:
                # strictly increasing ramp: the optimal top half is unique
                assert optimal_tops == {frozenset(range(4))}

    def test_aggregate_identifies_planted_core(self):
        g = ideal_block_graph(8, 4)
        cs = simulated_annealing_scores(g, lattice_h=4, schedule=AnnealSchedule(seed=7))
        assert set(np.argsort(-cs)[:4]) == {0, 1, 2, 3}

    def test_quality_never_below_identity_assignment(self, rng):
        g = random_connected_graph(rng, 12, 0.4, weighted=True)
        a = g.adjacency
        for idx in range(6):
            x = ramp_scores(12, rng.uniform(0, 1), rng.uniform(0, 1))
            sigma, q = _anneal_point(
                a.indptr, a.indices, a.data, 12, x, [3, idx], None, 0.9, 200, None
            )
            assert q >= product_quality(g, x) - 1e-9  # identity assignment
            assert q == pytest.approx(product_quality(g, x[sigma]), rel=1e-9)

    def test_complete_graph_scores_all_equal_up_to_relabeling(self):
        g = complete_graph(6)
        sched = AnnealSchedule(seed=11, sweeps_per_temperature=120, cooling_factor=0.8)
        s1 = simulated_annealing_scores(g, lattice_h=3, schedule=sched)
        s2 = simulated_annealing_scores(g, lattice_h=3, schedule=sched)
        assert np.array_equal(np.sort(s1), np.sort(s2))

    def test_bit_reproducible_and_thread_invariant(self, rng):
        g = random_connected_graph(rng, 10, 0.5)
        sched = AnnealSchedule(seed=42, sweeps_per_temperature=100, cooling_factor=0.85)
        s1 = simulated_annealing_scores(g, lattice_h=3, schedule=sched)
        s2 = simulated_annealing_scores(g, lattice_h=3, schedule=sched)
        s3 = simulated_annealing_scores(g, lattice_h=3, schedule=sched, threads=2)
        assert np.array_equal(s1, s2)
        assert np.array_equal(s1, s3)

    def test_python_and_compiled_paths_agree(self, rng):
        if not hasattr(_metropolis_level, "py_func"):
            pytest.skip("numba not installed; only one code path exists")
        g = random_connected_graph(rng, 9, 0.5, weighted=True)
        a = g.adjacency
        x = ramp_scores(9, 0.3, 0.5)
        state = {}
        for name, fn in [("jit", _metropolis_level), ("py", _metropolis_level.py_func)]:
            r = np.random.default_rng(5)
            y = x.copy()
            s = np.asarray(a @ y)
            sigma = np.arange(9)
            sigma_best = sigma.copy()
            us = r.integers(0, 9, 500)
            vs = (us + 1 + r.integers(0, 8, 500)) % 9
            logr = np.log(r.random(500))
            q = float(y @ s)
            out = fn(a.indptr, a.indices, a.data, x, y, s, sigma, us, vs, logr, 0.5, q, q, sigma_best)
            state[name] = (out, y.copy(), sigma.copy(), sigma_best.copy())
        assert state["jit"][0] == state["py"][0]
        for k in range(1, 4):
            assert np.array_equal(state["jit"][k], state["py"][k])

    def test_schedule_validation(self):
        with pytest.raises(ValueError):
            AnnealSchedule(cooling_factor=1.0)
        with pytest.raises(ValueError):
            AnnealSchedule(initial_temperature=-1.0)
        with pytest.raises(ValueError):
            AnnealSchedule(sweeps_per_temperature=0)
