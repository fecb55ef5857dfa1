# -*- coding: utf-8 -*-
# Описание: МНК-оценки эффектов, асимптотические стандартные ошибки, тесты и диагностика графа зависимостей.

import math
from typing import Dict, NamedTuple, Optional

import jsonpickle
import numpy as np
from scipy import linalg, sparse, special

from egocluster.clustering import EgoClustering
from egocluster.graph import Graph
from egocluster.util.timeit import timeit

CONDITION_LIMIT = 1e12
DEFAULT_LEVEL = 0.05


class CollinearDesignError(ValueError):
    def __init__(self):
        super().__init__("collinear design: spillover exposure indistinguishable from treatment")


class UndefinedVarianceError(ValueError):
    def __init__(self):
        super().__init__("variance formula undefined")


class OlsFit(NamedTuple):
    alpha_hat: float
    beta_hat: float
    gamma_hat: float
    sigma2_eps_hat: float


class EstimationResult(object):
    """
    Оценки τ = β + γ и γ со стандартными ошибками, доверительными интервалами и p-значениями.
    """
    def __init__(self):
        self.alpha_hat = 0.0
        self.beta_hat = 0.0
        self.gamma_hat = 0.0
        self.tau_hat = 0.0
        self.sigma2_eps_hat = 0.0
        self.se_tau = 0.0
        self.se_gamma = 0.0
        self.ci_tau = (0.0, 0.0)
        self.ci_gamma = (0.0, 0.0)
        self.t_tau = 0.0
        self.t_gamma = 0.0
        self.p_tau = 1.0
        self.p_gamma = 1.0
        self.level = DEFAULT_LEVEL
        self.n = 0
        self.K_n = None  # type: Optional[int]
        self.r_bar = 0.0
        self.b = 0.0
        self.n1 = None  # type: Optional[int]
        self.n0 = None  # type: Optional[int]

    def to_json(self) -> str:
        return jsonpickle.encode(self, unpicklable=False, indent=4)

    def __repr__(self):
        return "<EstimationResult tau_hat={:.4f} (se {:.4f}); gamma_hat={:.4f} (se {:.4f})>".format(
            self.tau_hat, self.se_tau, self.gamma_hat, self.se_gamma)


def normal_cdf(x: float) -> float:
    return float(special.ndtr(x))


def normal_quantile(p: float) -> float:
    if not 0.0 < p < 1.0:
        raise ValueError("quantile defined only for p in (0, 1), got {}".format(p))
    return float(special.ndtri(p))


def two_sided_p_value(t: float) -> float:
    return float(2.0 * special.ndtr(-abs(t)))


def fit_ols(treatment: np.ndarray, rho: np.ndarray, y: np.ndarray) -> OlsFit:
    """
    МНК по матрице X = [1, T, ρ] через нормальные уравнения 3x3 (разложение Холецкого).

    :param treatment: T.
    :param rho: доли обработанных соседей.
    :param y: отклики.
    :return: (α̂, β̂, γ̂, σ̂²_ε), σ̂²_ε = RSS / (n - 3).
    """
    treatment = np.asarray(treatment, dtype=np.float64)
    rho = np.asarray(rho, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    n = len(y)
    if len(treatment) != n or len(rho) != n:
        raise ValueError("T, rho and Y must have equal lengths, got {}, {}, {}".format(
            len(treatment), len(rho), n))
    if n <= 3:
        raise ValueError("at least 4 units are required for residual variance, got {}".format(n))
    x = np.column_stack([np.ones(n), treatment, rho])
    gram = x.T @ x
    condition = np.linalg.cond(gram)
    if not np.isfinite(condition) or condition > CONDITION_LIMIT:
        raise CollinearDesignError()
    coefficients = linalg.cho_solve(linalg.cho_factor(gram), x.T @ y)
    residuals = y - x @ coefficients
    sigma2 = math.fsum(residuals * residuals) / (n - 3)
    alpha, beta, gamma = (float(value) for value in coefficients)
    return OlsFit(alpha, beta, gamma, sigma2)


def _t_statistic(estimate: float, se: float) -> float:
    if se > 0.0:
        return estimate / se
    return 0.0 if estimate == 0.0 else math.copysign(math.inf, estimate)


def effect_inference(fit: OlsFit, r_bar: float, b: float, n: int, level: float = DEFAULT_LEVEL,
                     num_clusters: int = None) -> EstimationResult:
    """
    Стандартные ошибки по асимптотическим дисперсиям:
    se_tau = 2σ̂·sqrt(r̄²/b + 1)/sqrt(n), se_gamma = 2σ̂·sqrt(1/b)/sqrt(n).

    :param fit: результат fit_ols.
    :param r_bar: средняя доля потерянных соседей.
    :param b: статистика b_n дизайна.
    :param n: число вершин.
    :param level: уровень значимости α.
    :param num_clusters: K_n, только для отчёта.
    :return: результат оценивания.
    """
    if b <= 0.0:
        raise UndefinedVarianceError()
    if not 0.0 < level < 1.0:
        raise ValueError("level must lie in (0, 1), got {}".format(level))
    sigma = math.sqrt(fit.sigma2_eps_hat)
    z = normal_quantile(1.0 - level / 2.0)

    result = EstimationResult()
    result.alpha_hat = fit.alpha_hat
    result.beta_hat = fit.beta_hat
    result.gamma_hat = fit.gamma_hat
    result.tau_hat = fit.beta_hat + fit.gamma_hat
    result.sigma2_eps_hat = fit.sigma2_eps_hat
    result.se_tau = 2.0 * sigma * math.sqrt(r_bar * r_bar / b + 1.0) / math.sqrt(n)
    result.se_gamma = 2.0 * sigma * math.sqrt(1.0 / b) / math.sqrt(n)
    result.ci_tau = (result.tau_hat - z * result.se_tau, result.tau_hat + z * result.se_tau)
    result.ci_gamma = (result.gamma_hat - z * result.se_gamma, result.gamma_hat + z * result.se_gamma)
    result.t_tau = _t_statistic(result.tau_hat, result.se_tau)
    result.t_gamma = _t_statistic(result.gamma_hat, result.se_gamma)
    result.p_tau = two_sided_p_value(result.t_tau)
    result.p_gamma = two_sided_p_value(result.t_gamma)
    result.level = level
    result.n = n
    result.K_n = num_clusters
    result.r_bar = r_bar
    result.b = b
    return result


def format_table(result: EstimationResult) -> str:
    """
    Таблица из двух строк (tau, gamma): оценка, SE, доверительный интервал, t, p.
    """
    header = "{:<8}{:>12}{:>12}{:>26}{:>10}{:>10}".format(
        "effect", "estimate", "SE", "CI {:g}%".format(100 * (1 - result.level)), "t", "p")
    rows = [header]
    for name, estimate, se, ci, t, p in (
            ("tau", result.tau_hat, result.se_tau, result.ci_tau, result.t_tau, result.p_tau),
            ("gamma", result.gamma_hat, result.se_gamma, result.ci_gamma, result.t_gamma, result.p_gamma)):
        interval = "[{:.4f}, {:.4f}]".format(ci[0], ci[1])
        rows.append("{:<8}{:>12.4f}{:>12.4f}{:>26}{:>10.3f}{:>10.4f}".format(name, estimate, se, interval, t, p))
    return "\n".join(rows) + "\n"


class DependencyDiagnostics(object):
    """
    Размеры окрестностей графа зависимостей Λ: Λ_ij = 1, если K_i ∩ K_j ≠ ∅,
    где K_i - кластеры, которых касается N(i; 1).
    """
    def __init__(self):
        self.mean_N = 0.0
        self.mean_N2 = 0.0
        self.mean_N3 = 0.0
        self.mean_L3 = 0.0
        self.max_N = 0
        self.mean_two_hop = 0.0

    def to_json(self) -> str:
        return jsonpickle.encode(self, unpicklable=False, indent=4)

    def __repr__(self):
        return "<DependencyDiagnostics mean_N={:.3f}; max_N={}; mean_L3={:.3f}>".format(
            self.mean_N, self.max_N, self.mean_L3)


def touched_clusters(g: Graph, c: EgoClustering) -> sparse.csr_matrix:
    """
    Разреженная матрица M (n x n): M[i, k] = 1, если N(i; 1) пересекает кластер k.
    Её транспонирование - инвертированный индекс кластер -> касающиеся вершины.
    """
    rows = []
    cols = []
    assignment = c.assignment.tolist()
    for i, neighbors in enumerate(g.neighbor_lists):
        clusters = {assignment[i]}
        clusters.update(assignment[j] for j in neighbors)
        rows.extend([i] * len(clusters))
        cols.extend(clusters)
    data = np.ones(len(rows), dtype=np.float64)
    return sparse.csr_matrix((data, (rows, cols)), shape=(g.n, g.n))


def dependency_matrix(g: Graph, c: EgoClustering) -> sparse.csr_matrix:
    """
    Разреженная 0/1 матрица Λ.
    """
    touched = touched_clusters(g, c)
    overlap = (touched @ touched.T).tocsr()
    overlap.data = np.ones_like(overlap.data)
    return overlap


@timeit
def dependency_diagnostics(g: Graph, c: EgoClustering) -> DependencyDiagnostics:
    """
    Средние |N_i|, |N_i|², |N_i|³, (1/n)Σ(Λ³)_ij через три умножения на вектор из единиц,
    max |N_i| и средний размер двухшаговой окрестности без самой вершины.
    """
    n = g.n
    dependency = dependency_matrix(g, c)
    sizes = np.diff(dependency.indptr).astype(np.float64)
    ones = np.ones(n, dtype=np.float64)
    walks = dependency @ (dependency @ (dependency @ ones))

    two_hop = sparse.identity(n, format="csr") + g.adjacency_matrix()
    two_hop = (two_hop @ two_hop).tocsr()

    diag = DependencyDiagnostics()
    diag.mean_N = math.fsum(sizes) / n
    diag.mean_N2 = math.fsum(sizes ** 2) / n
    diag.mean_N3 = math.fsum(sizes ** 3) / n
    diag.mean_L3 = math.fsum(walks) / n
    diag.max_N = int(sizes.max())
    diag.mean_two_hop = math.fsum(np.diff(two_hop.indptr) - 1) / n
    return diag


def assumption_report(diag: DependencyDiagnostics, n: int) -> Dict[str, float]:
    """
    Нормированные величины условий на граф зависимостей; пороги не проверяются.
    """
    return {
        "mean_N_over_n": diag.mean_N / n,
        "mean_N2_over_sqrt_n": diag.mean_N2 / math.sqrt(n),
        "mean_N3_over_n": diag.mean_N3 / n,
        "mean_L3_over_n": diag.mean_L3 / n,
        "max_N_over_n_quarter": diag.max_N / n ** 0.25,
    }


def estimate(g: Graph, c: EgoClustering, treatment: np.ndarray, rho: np.ndarray, y: np.ndarray,
             level: float = DEFAULT_LEVEL) -> EstimationResult:
    """
    Полный шаг оценивания по разбиению: МНК и стандартные ошибки по (r̄, b) разбиения.
    """
    result = effect_inference(fit_ols(treatment, rho, y), c.r_bar, c.b, g.n, level, c.num_clusters)
    treatment = np.asarray(treatment)
    result.n1 = int(treatment.sum())
    result.n0 = g.n - result.n1
    return result

