import unittest

import numpy as np

from egocluster.clustering import from_partition, recompute_stats, singleton_clustering, write_clustering
from egocluster.ego_design import DesignError, apply_reassignment, build_design, build_design_restarts, \
    reassign_alters, reassignment_delta, select_egos, target_lambda
from egocluster.graph import load_edge_list
from egocluster.test.helpers import er_graph, path3


def admissible_moves(g, c):
    moves = []
    for m in range(g.n):
        if c.is_ego(m):
            continue
        for k2 in g.neighbor_lists[m]:
            if c.is_ego(k2) and k2 != c.ego_of(m):
                moves.append((m, c.ego_of(m), k2))
    return moves


class TestReassignment(unittest.TestCase):
    def test_path_move(self):
        g = path3()
        c = from_partition(g, [0, 2, 2])
        self.assertAlmostEqual(c.r_bar, 0.5, places=12)
        self.assertAlmostEqual(c.b, 7.0 / 12.0, places=12)
        r_bar, b = reassignment_delta(g, c, 1, 2, 0)
        self.assertAlmostEqual(r_bar, 0.5, places=12)
        self.assertAlmostEqual(b, 7.0 / 12.0, places=12)
        self.assertEqual(c.assignment.tolist(), [0, 2, 2])

        apply_reassignment(g, c, 1, 0)
        self.assertEqual(c.assignment.tolist(), [0, 0, 2])
        self.assertEqual(c.size(0), 2)
        self.assertEqual(c.size(2), 1)
        self.assertEqual(c.loss.tolist(), [0.0, 0.5, 1.0])

    def test_invalid_moves(self):
        g = path3()
        c = from_partition(g, [0, 2, 2])
        with self.assertRaises(DesignError):
            reassignment_delta(g, c, 0, 0, 2)
        with self.assertRaises(DesignError):
            reassignment_delta(g, c, 1, 2, 2)
        with self.assertRaises(DesignError):
            reassignment_delta(g, c, 1, 0, 2)
        g = load_edge_list(b"0 1\n1 2\n2 3\n")
        c = from_partition(g, [0, 0, 3, 3])
        with self.assertRaises(DesignError):
            reassignment_delta(g, c, 1, 0, 3)

    def test_oracle_equivalence(self):
        rng = np.random.default_rng(5)
        for seed in range(5):
            g = er_graph(120, 0.06, seed)
            c = build_design(g, 1.0, seed)
            for _ in range(60):
                moves = admissible_moves(g, c)
                if not moves:
                    break
                m, k1, k2 = moves[int(rng.integers(len(moves)))]
                r_bar, b = reassignment_delta(g, c, m, k1, k2)
                apply_reassignment(g, c, m, k2)
                loss, r_bar_oracle, b_oracle = recompute_stats(g, c)
                self.assertAlmostEqual(r_bar, r_bar_oracle, delta=1e-9)
                self.assertAlmostEqual(b, b_oracle, delta=1e-9)
                self.assertAlmostEqual(c.r_bar, r_bar_oracle, delta=1e-9)
                self.assertAlmostEqual(c.b, b_oracle, delta=1e-9)
                self.assertTrue(np.allclose(c.loss, loss, atol=1e-9))
                c.validate(g)

    def test_move_and_back(self):
        g = er_graph(80, 0.1, 11)
        c = build_design(g, 1.0, 3)
        moves = admissible_moves(g, c)
        self.assertTrue(moves)
        m, k1, k2 = moves[0]
        r_bar, b = c.r_bar, c.b
        apply_reassignment(g, c, m, k2)
        apply_reassignment(g, c, m, k1)
        self.assertAlmostEqual(c.r_bar, r_bar, delta=1e-12)
        self.assertAlmostEqual(c.b, b, delta=1e-12)


class TestGreedy(unittest.TestCase):
    def test_path_design(self):
        g = path3()
        for seed in range(10):
            c = build_design(g, 1.0, seed)
            self.assertEqual(c.num_clusters, 2)
            self.assertAlmostEqual(c.obj, 3.0 / 7.0, places=12)
            self.assertNotEqual(c.ego_of(0), c.ego_of(2))

    def test_edgeless(self):
        g = load_edge_list(b"nodes: 3\n")
        with self.assertRaises(DesignError) as context:
            build_design(g, 1.0, 0)
        self.assertIn("no interference structure to optimize", str(context.exception))

    def test_monotone_and_bounded(self):
        for seed in range(8):
            g = er_graph(150, 0.05, 100 + seed)
            c = build_design(g, 1.0, seed)
            self.assertEqual(c.trace[0], singleton_clustering(g).obj)
            for before, after in zip(c.trace, c.trace[1:]):
                self.assertLess(after, before)
            self.assertLessEqual(c.b, 2.0 * c.r_bar + 1e-12)
            self.assertLessEqual(c.b, c.r_bar * (2.0 - c.r_bar) + 1e-12)
            self.assertLessEqual(c.obj, singleton_clustering(g).obj)
            c.validate(g)
            _, r_bar, b = recompute_stats(g, c)
            self.assertAlmostEqual(r_bar, c.r_bar, delta=1e-9)
            self.assertAlmostEqual(b, c.b, delta=1e-9)

    def test_reassign_alters_improves(self):
        for seed in range(10):
            g = er_graph(200, 0.05, 200 + seed)
            rng = np.random.default_rng(seed)
            c = select_egos(g, singleton_clustering(g), 1.0, rng)
            selected = c.obj
            single_ego = [m for m in range(g.n) if not c.is_ego(m) and
                          sum(1 for h in g.neighbor_lists[m] if c.is_ego(h)) == 1]
            before = {m: c.ego_of(m) for m in single_ego}
            reassign_alters(g, c, 1.0, rng)
            self.assertLessEqual(c.obj, selected)
            for m, ego in before.items():
                self.assertEqual(c.ego_of(m), ego)

    def test_determinism(self):
        g = er_graph(150, 0.05, 7)
        first = build_design(g, 1.0, 42)
        second = build_design(g, 1.0, 42)
        self.assertEqual(write_clustering(g, first), write_clustering(g, second))
        self.assertEqual(first.trace, second.trace)

    def test_weighted_objective(self):
        g = er_graph(150, 0.05, 8)
        c = build_design(g, 0.0, 1)
        self.assertAlmostEqual(c.obj, 1.0 / c.b, places=9)
        c = build_design(g, 0.5, 1)
        self.assertAlmostEqual(c.obj, 0.5 * c.r_bar ** 2 / c.b + 0.5 / c.b, places=9)

    def test_predetermined_egos(self):
        g = er_graph(100, 0.08, 9)
        ego = int(np.argmax(g.degrees))
        c = build_design(g, 1.0, 0, predetermined_egos=[ego])
        self.assertTrue(c.is_ego(ego))
        c.validate(g)
        with self.assertRaises(IndexError):
            build_design(g, 1.0, 0, predetermined_egos=[g.n])

    def test_restarts(self):
        g = er_graph(120, 0.06, 10)
        seeds = [0, 1, 2, 3]
        best = build_design_restarts(g, 1.0, seeds)
        objectives = [build_design(g, 1.0, seed).obj for seed in seeds]
        self.assertEqual(best.obj, min(objectives))
        self.assertEqual(best.seed, seeds[objectives.index(min(objectives))])
        with self.assertRaises(ValueError):
            build_design_restarts(g, 1.0, [])

    def test_target_lambda(self):
        self.assertEqual(target_lambda("tau"), 1.0)
        self.assertEqual(target_lambda("gamma"), 0.0)
        self.assertEqual(target_lambda("weighted", 0.3), 0.3)
        with self.assertRaises(ValueError):
            target_lambda("weighted", 1.0)
        with self.assertRaises(ValueError):
            target_lambda("other")


if __name__ == '__main__':
    unittest.main()
