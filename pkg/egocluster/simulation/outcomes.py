# -*- coding: utf-8 -*-
# Описание: Отклики линейной модели интерференции Y = α + βT + γρ (+ ηZ) + ε.

import csv
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from egocluster.graph import Graph
from egocluster.randomization import read_unit_table


def simulate_outcomes(g: Graph, treatment: np.ndarray, rho: np.ndarray, alpha: float, beta: float,
                      gamma: float, error_model: str, rng: np.random.Generator, sigma: float = 1.0,
                      eta: Union[float, Sequence[float]] = 0.0, z: Optional[np.ndarray] = None) -> np.ndarray:
    """
    Сгенерировать отклики.

    :param g: граф.
    :param treatment: T.
    :param rho: доли обработанных соседей.
    :param alpha: свободный член.
    :param beta: прямой эффект.
    :param gamma: эффект перетока.
    :param error_model: iid_normal (ε ~ N(0, σ²)), correlated (ε = Aε', ε' ~ N(0, 1))
        или confounded (ηZ + N(0, σ²)).
    :param rng: генератор случайных чисел.
    :param sigma: стандартное отклонение шума.
    :param eta: коэффициент при Z (число или по одному на столбец Z).
    :param z: конфаундер длины n или матрица n x len(eta).
    :return: Y.
    """
    treatment = np.asarray(treatment, dtype=np.float64)
    rho = np.asarray(rho, dtype=np.float64)
    if len(treatment) != g.n or len(rho) != g.n:
        raise ValueError("T and rho must have length {}".format(g.n))
    y = alpha + beta * treatment + gamma * rho
    if error_model == "iid_normal":
        return y + sigma * rng.standard_normal(g.n)
    if error_model == "correlated":
        return y + g.adjacency_matrix() @ rng.standard_normal(g.n)
    if error_model == "confounded":
        if z is None:
            raise ValueError("confounded outcome model requires Z")
        return y + confounder_shift(z, eta, g.n) + sigma * rng.standard_normal(g.n)
    raise ValueError("unknown error model '{}'".format(error_model))


def confounder_shift(z: np.ndarray, eta: Union[float, Sequence[float]], n: int) -> np.ndarray:
    z = np.asarray(z, dtype=np.float64)
    if z.ndim == 1:
        z = z[:, None]
    eta = np.atleast_1d(np.asarray(eta, dtype=np.float64))
    if z.shape[0] != n:
        raise ValueError("Z has {} rows, expected {}".format(z.shape[0], n))
    if z.shape[1] != len(eta):
        raise ValueError("Z has {} columns but eta has {} entries".format(z.shape[1], len(eta)))
    return z @ eta


def read_covariates(g: Graph, lines: Iterable[str]) -> np.ndarray:
    """
    TSV с колонкой unit и одной или несколькими колонками ковариат; строки в порядке вершин графа.
    """
    lines = list(lines)
    header = next(csv.reader(lines[:1], delimiter="\t"), [])
    columns = [name for name in header if name != "unit"]
    if not columns:
        raise ValueError("covariate file must have a unit column and at least one covariate")
    return np.column_stack([
        np.array([float(value) for value in read_unit_table(g, lines, column)]) for column in columns])


def read_outcomes(g: Graph, lines: Iterable[str]) -> np.ndarray:
    return np.array([float(value) for value in read_unit_table(g, lines, "outcome")], dtype=np.float64)
