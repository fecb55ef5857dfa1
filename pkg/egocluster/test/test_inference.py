import json
import math
import unittest

import numpy as np

from egocluster.baselines import random_ego_clusters, three_net
from egocluster.clustering import from_partition, singleton_clustering
from egocluster.inference import CollinearDesignError, OlsFit, UndefinedVarianceError, assumption_report, \
    dependency_diagnostics, effect_inference, fit_ols, format_table, normal_cdf, normal_quantile, \
    two_sided_p_value
from egocluster.test.helpers import er_graph, path3


def erf_quantile(p: float) -> float:
    low, high = -10.0, 10.0
    for _ in range(200):
        middle = (low + high) / 2.0
        if 0.5 * (1.0 + math.erf(middle / math.sqrt(2.0))) < p:
            low = middle
        else:
            high = middle
    return (low + high) / 2.0


def brute_diagnostics(g, c):
    n = g.n
    closed = [set([i]) | set(g.neighbor_lists[i]) for i in range(n)]
    touched = [set(int(c.assignment[j]) for j in closed[i]) for i in range(n)]
    dependency = np.array([[1 if touched[i] & touched[j] else 0 for j in range(n)] for i in range(n)],
                          dtype=np.int64)
    sizes = dependency.sum(axis=1)
    cube = dependency @ dependency @ dependency
    return dependency, {
        "mean_N": int(sizes.sum()) / n,
        "mean_N2": int((sizes ** 2).sum()) / n,
        "mean_N3": int((sizes ** 3).sum()) / n,
        "mean_L3": int(cube.sum()) / n,
        "max_N": int(sizes.max()),
    }


class TestOls(unittest.TestCase):
    def test_noiseless(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            n = 30
            treatment = rng.integers(0, 2, size=n)
            treatment[:2] = [0, 1]
            rho = rng.random(n)
            fit = fit_ols(treatment, rho, 2.0 + 2.5 * treatment + 5.0 * rho)
            self.assertAlmostEqual(fit.alpha_hat, 2.0, delta=1e-10)
            self.assertAlmostEqual(fit.beta_hat, 2.5, delta=1e-10)
            self.assertAlmostEqual(fit.gamma_hat, 5.0, delta=1e-10)
            self.assertAlmostEqual(fit.sigma2_eps_hat, 0.0, delta=1e-18)

    def test_collinear(self):
        treatment = np.array([0, 1, 0, 1, 1, 0])
        with self.assertRaises(CollinearDesignError) as context:
            fit_ols(treatment, treatment.astype(float), np.arange(6.0))
        self.assertIn("collinear", str(context.exception))

    def test_oracle(self):
        rng = np.random.default_rng(2)
        for _ in range(1000):
            n = 20
            treatment = rng.integers(0, 2, size=n)
            treatment[:2] = [0, 1]
            rho = rng.random(n)
            y = rng.normal(size=n) + 3.0 * rho
            x = np.column_stack([np.ones(n), treatment, rho])
            oracle = np.linalg.solve(x.T @ x, x.T @ y)
            fit = fit_ols(treatment, rho, y)
            self.assertTrue(np.allclose([fit.alpha_hat, fit.beta_hat, fit.gamma_hat], oracle, atol=1e-8, rtol=0))
            residuals = y - x @ oracle
            self.assertAlmostEqual(fit.sigma2_eps_hat, residuals @ residuals / (n - 3), delta=1e-8)

    def test_small_or_mismatched(self):
        with self.assertRaises(ValueError):
            fit_ols([0, 1, 0], [0.1, 0.2, 0.3], [1.0, 2.0, 3.0])
        with self.assertRaises(ValueError):
            fit_ols([0, 1, 0, 1], [0.1, 0.2, 0.3], [1.0, 2.0, 3.0, 4.0])


class TestInference(unittest.TestCase):
    def test_standard_errors(self):
        result = effect_inference(OlsFit(2.0, 2.5, 5.0, 1.0), 1.0, 1.0, 400)
        self.assertAlmostEqual(result.se_tau, 2.0 * math.sqrt(2.0) / 20.0, places=12)
        self.assertAlmostEqual(result.se_gamma, 0.1, places=12)
        self.assertEqual(result.tau_hat, 7.5)
        self.assertAlmostEqual((result.ci_tau[1] - result.ci_tau[0]) / 2.0, 1.959964 * result.se_tau, delta=1e-5)
        self.assertAlmostEqual((result.ci_gamma[1] - result.ci_gamma[0]) / 2.0, 1.959964 * 0.1, delta=1e-5)
        self.assertAlmostEqual(result.ci_tau[0] + result.ci_tau[1], 2.0 * result.tau_hat, places=12)

    def test_variance_relations(self):
        for r_bar, b, sigma2, n in ((0.3, 0.2, 1.7, 500), (0.9, 0.05, 0.4, 1000)):
            result = effect_inference(OlsFit(0.0, 1.0, 1.0, sigma2), r_bar, b, n)
            self.assertAlmostEqual(result.se_tau ** 2, result.se_gamma ** 2 * r_bar ** 2 + 4.0 * sigma2 / n,
                                   delta=1e-12)
            self.assertGreaterEqual(result.se_tau, 2.0 * math.sqrt(sigma2 / n))

    def test_null_point(self):
        result = effect_inference(OlsFit(2.0, 1.0, -1.0, 1.0), 0.5, 0.5, 100)
        self.assertEqual(result.t_tau, 0.0)
        self.assertEqual(result.p_tau, 1.0)

    def test_undefined_variance(self):
        with self.assertRaises(UndefinedVarianceError) as context:
            effect_inference(OlsFit(0.0, 1.0, 1.0, 1.0), 0.0, 0.0, 100)
        self.assertIn("variance formula undefined", str(context.exception))

    def test_p_values_monotone(self):
        values = [two_sided_p_value(t) for t in np.linspace(0.0, 6.0, 61)]
        for before, after in zip(values, values[1:]):
            self.assertLess(after, before)
        self.assertEqual(two_sided_p_value(0.0), 1.0)

    def test_output(self):
        result = effect_inference(OlsFit(2.0, 2.5, 5.0, 1.0), 0.4, 0.3, 400, num_clusters=120)
        document = json.loads(result.to_json())
        self.assertEqual(document["K_n"], 120)
        self.assertEqual(document["tau_hat"], 7.5)
        self.assertEqual(len(document["ci_gamma"]), 2)
        table = format_table(result).splitlines()
        self.assertEqual(len(table), 3)
        self.assertTrue(table[1].startswith("tau"))
        self.assertTrue(table[2].startswith("gamma"))


class TestNormal(unittest.TestCase):
    def test_values(self):
        self.assertEqual(normal_cdf(0.0), 0.5)
        self.assertAlmostEqual(normal_quantile(0.975), 1.959964, delta=1e-6)

    def test_grid(self):
        for p in np.linspace(0.01, 0.99, 99):
            self.assertAlmostEqual(normal_quantile(p), erf_quantile(p), delta=1e-6)
            self.assertAlmostEqual(normal_cdf(normal_quantile(p)), p, delta=1e-6)
            x = normal_quantile(p)
            self.assertAlmostEqual(normal_cdf(x), 0.5 * (1.0 + math.erf(x / math.sqrt(2.0))), delta=1e-7)

    def test_domain(self):
        for p in (0.0, 1.0, -0.5, 2.0):
            with self.assertRaises(ValueError):
                normal_quantile(p)


class TestDependency(unittest.TestCase):
    def test_path_complete_randomization(self):
        diag = dependency_diagnostics(path3(), singleton_clustering(path3()))
        self.assertEqual(diag.mean_N, 3.0)
        self.assertEqual(diag.max_N, 3)
        self.assertEqual(diag.mean_two_hop, 2.0)

    def test_single_cluster(self):
        g = er_graph(20, 0.3, 1)
        c = from_partition(g, [0] * g.n, relaxed=True)
        diag = dependency_diagnostics(g, c)
        self.assertEqual(diag.mean_N, 20.0)
        self.assertEqual(diag.max_N, 20)
        self.assertEqual(diag.mean_L3, 20.0 ** 3)

    def test_brute_force(self):
        rng = np.random.default_rng(3)
        for index in range(50):
            n = int(rng.integers(5, 51))
            g = er_graph(n, float(rng.uniform(0.03, 0.3)), index)
            for c in (singleton_clustering(g), random_ego_clusters(g, index), three_net(g, index)):
                dependency, expected = brute_diagnostics(g, c)
                self.assertTrue(np.array_equal(dependency, dependency.T))
                self.assertTrue(np.all(np.diag(dependency) == 1))
                diag = dependency_diagnostics(g, c)
                for name, value in expected.items():
                    self.assertEqual(getattr(diag, name), value, name)
                self.assertGreaterEqual(diag.mean_N, 1.0)
                self.assertLessEqual(diag.mean_N2, diag.max_N * diag.mean_N + 1e-9)

    def test_complete_randomization_closed_form(self):
        g = er_graph(30, 0.15, 4)
        dependency, _ = brute_diagnostics(g, singleton_clustering(g))
        adjacency = g.adjacency_matrix().toarray().astype(np.int64)
        two_step = (adjacency @ adjacency) > 0
        closed_form = (adjacency > 0) | two_step | np.eye(g.n, dtype=bool)
        self.assertTrue(np.array_equal(dependency > 0, closed_form))

    def test_report(self):
        g = er_graph(100, 0.05, 5)
        diag = dependency_diagnostics(g, random_ego_clusters(g, 1))
        report = assumption_report(diag, g.n)
        self.assertAlmostEqual(report["mean_N_over_n"], diag.mean_N / 100.0)
        self.assertAlmostEqual(report["max_N_over_n_quarter"], diag.max_N / 100.0 ** 0.25)
        self.assertEqual(len(report), 5)
        self.assertIn("mean_two_hop", json.loads(diag.to_json()))


if __name__ == '__main__':
    unittest.main()
