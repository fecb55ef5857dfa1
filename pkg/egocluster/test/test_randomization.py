import unittest

import numpy as np

from egocluster.baselines import random_ego_clusters
from egocluster.clustering import from_partition, singleton_clustering
from egocluster.graph import Graph, InputMismatchError, load_edge_list
from egocluster.randomization import assign, assignment_balance, exposures, read_assignment, \
    read_exposures, read_unit_table, write_assignment, write_exposures
from egocluster.test.helpers import er_graph, path3, two_triangles


class TestAssign(unittest.TestCase):
    def test_single_cluster(self):
        g = load_edge_list(b"0 1\n0 2\n0 3\n")
        c = from_partition(g, [0, 0, 0, 0])
        for seed in range(20):
            a = assign(c, np.random.default_rng(seed))
            self.assertEqual(len(set(a.T.tolist())), 1)
            self.assertEqual(a.n1 + a.n0, 4)

    def test_shared_draw(self):
        c = from_partition(path3(), [0, 0, 2])
        for seed in range(20):
            a = assign(c, np.random.default_rng(seed))
            self.assertEqual(a.T[0], a.T[1])
            self.assertEqual(a.T[2], a.cluster_draws[2])

    def test_cluster_frequency(self):
        g = Graph(50, [(i, i + 1) for i in range(49)])
        c = singleton_clustering(g)
        rng = np.random.default_rng(2024)
        treated = np.zeros(g.n)
        draws = 10000
        for _ in range(draws):
            treated += assign(c, rng).T
        frequency = treated / draws
        self.assertTrue(np.all((frequency >= 0.47) & (frequency <= 0.53)))

    def test_reproducible(self):
        g = er_graph(100, 0.05, 1)
        c = random_ego_clusters(g, 3)
        first = assign(c, np.random.default_rng(77))
        second = assign(c, np.random.default_rng(77))
        self.assertEqual(first.T.tolist(), second.T.tolist())
        self.assertEqual(first.cluster_draws, second.cluster_draws)

    def test_balance(self):
        c = from_partition(path3(), [0, 0, 2])
        a = assign(c, np.random.default_rng(0))
        n1, n0, share = assignment_balance(a)
        self.assertEqual(n1 + n0, 3)
        self.assertAlmostEqual(share, n1 / 3.0)


class TestExposures(unittest.TestCase):
    def test_path(self):
        rho = exposures(path3(), np.array([1, 1, 0]))
        self.assertEqual(rho.tolist(), [1.0, 0.5, 1.0])

    def test_all_treated(self):
        g = load_edge_list(b"nodes: 4\n0 1\n1 2\n")
        self.assertEqual(exposures(g, np.ones(4)).tolist(), [1.0, 1.0, 1.0, 0.0])

    def test_zero_loss_clustering(self):
        g = two_triangles()
        c = from_partition(g, [0, 0, 0, 3, 3, 3])
        self.assertEqual(c.r_bar, 0.0)
        for seed in range(8):
            a = assign(c, np.random.default_rng(seed))
            self.assertEqual(exposures(g, a.T).tolist(), a.T.astype(float).tolist())

    def test_matches_interference_matrix(self):
        for seed in range(5):
            g = er_graph(80, 0.08, seed)
            c = random_ego_clusters(g, seed)
            a = assign(c, np.random.default_rng(seed))
            expected = np.zeros(g.n)
            for i, counts in enumerate(c.neighbor_counts):
                if g.degrees[i]:
                    expected[i] = sum(count * a.cluster_draws[k] for k, count in counts.items()) / g.degrees[i]
            self.assertTrue(np.allclose(exposures(g, a.T), expected, atol=1e-12, rtol=0.0))

    def test_length_mismatch(self):
        with self.assertRaises(ValueError):
            exposures(path3(), np.array([1, 0]))


class TestUnitTables(unittest.TestCase):
    def test_assignment_file(self):
        g = load_edge_list(b"10 20\n20 30\n")
        c = from_partition(g, [0, 0, 2])
        a = assign(c, np.random.default_rng(1))
        text = write_assignment(g, a)
        self.assertTrue(text.startswith("unit\ttreatment\n10\t"))
        loaded = read_assignment(g, c, text.split("\n"))
        self.assertEqual(loaded.T.tolist(), a.T.tolist())
        self.assertEqual(loaded.cluster_draws, a.cluster_draws)

    def test_inconsistent_assignment(self):
        g = path3()
        c = from_partition(g, [0, 0, 2])
        with self.assertRaises(InputMismatchError) as context:
            read_assignment(g, c, ["unit\ttreatment", "0\t1", "1\t0", "2\t1"])
        self.assertEqual(context.exception.unit, 1)
        with self.assertRaises(ValueError):
            read_assignment(g, c, ["unit\ttreatment", "0\t1", "1\t1", "2\t2"])

    def test_exposure_file(self):
        g = er_graph(30, 0.2, 4)
        rho = exposures(g, np.random.default_rng(0).integers(0, 2, size=g.n))
        self.assertEqual(read_exposures(g, write_exposures(g, rho).split("\n")).tolist(), rho.tolist())

    def test_unit_mismatch(self):
        g = path3()
        with self.assertRaises(InputMismatchError) as context:
            read_unit_table(g, ["unit\toutcome", "0\t1.0", "2\t3.0"], "outcome")
        self.assertEqual(context.exception.unit, 1)
        self.assertIn("unit 1", str(context.exception))
        with self.assertRaises(InputMismatchError) as context:
            read_unit_table(g, ["unit\toutcome", "0\t1.0", "5\t3.0"], "outcome")
        self.assertEqual(context.exception.unit, 5)
        with self.assertRaises(InputMismatchError):
            read_unit_table(g, ["unit\toutcome", "0\t1.0", "0\t3.0"], "outcome")


if __name__ == '__main__':
    unittest.main()
