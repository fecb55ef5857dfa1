# -*- coding: utf-8 -*-
# Описание: Рандомизация на уровне кластеров и доли обработанных соседей.

import csv
import io
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from egocluster.clustering import EgoClustering
from egocluster.graph import Graph, InputMismatchError


class TreatmentAssignment(object):
    """
    Бернулли(1/2) по кластерам и индуцированный вектор T по вершинам.
    """
    def __init__(self, cluster_draws: Dict[int, int], treatment: np.ndarray):
        self.cluster_draws = cluster_draws  # type: Dict[int, int]
        self.T = treatment  # type: np.ndarray
        self.n1 = int(treatment.sum())
        self.n0 = len(treatment) - self.n1

    def __repr__(self):
        return "<TreatmentAssignment K_n={}; n1={}; n0={}>".format(len(self.cluster_draws), self.n1, self.n0)


def assign(c: EgoClustering, rng: np.random.Generator) -> TreatmentAssignment:
    """
    По одной честной монете на живой кластер, в порядке возрастания id кластера.

    :param c: разбиение.
    :param rng: генератор случайных чисел.
    :return: назначение.
    """
    cluster_ids = sorted(c.members)
    bits = rng.integers(0, 2, size=len(cluster_ids)).tolist()
    cluster_draws = dict(zip(cluster_ids, bits))
    lookup = np.zeros(c.n, dtype=np.int64)
    for k, bit in cluster_draws.items():
        lookup[k] = bit
    return TreatmentAssignment(cluster_draws, lookup[c.assignment])


def exposures(g: Graph, treatment: np.ndarray) -> np.ndarray:
    """
    ρ_i = Σ_j A_ij T_j / D_i; для изолированных вершин ρ_i = 0.
    """
    treatment = np.asarray(treatment, dtype=np.float64)
    if treatment.shape != (g.n,):
        raise ValueError("treatment has length {}, expected {}".format(len(treatment), g.n))
    treated = g.adjacency_matrix() @ treatment
    return treated / np.maximum(g.degrees, 1)


def assignment_balance(a: TreatmentAssignment) -> Tuple[int, int, float]:
    return a.n1, a.n0, a.n1 / float(a.n1 + a.n0)


def write_unit_table(g: Graph, column: str, values: Iterable) -> str:
    output = io.StringIO()
    writer = csv.writer(output, delimiter="\t", lineterminator="\n")
    writer.writerow(["unit", column])
    for unit, value in zip(g.ids, values):
        writer.writerow([unit, value])
    return output.getvalue()


def write_assignment(g: Graph, a: TreatmentAssignment) -> str:
    return write_unit_table(g, "treatment", a.T.tolist())


def write_exposures(g: Graph, rho: np.ndarray) -> str:
    return write_unit_table(g, "rho", [repr(float(value)) for value in rho])


def read_unit_table(g: Graph, lines: Iterable[str], column: str) -> List[str]:
    """
    Прочитать TSV с колонками unit и column; вершины должны совпадать с вершинами графа.

    :param g: граф.
    :param lines: строки TSV.
    :param column: имя колонки значений.
    :return: значения во внутренней нумерации вершин.
    """
    reader = csv.DictReader(lines, delimiter="\t")
    if reader.fieldnames is None or not {"unit", column} <= set(reader.fieldnames):
        raise ValueError("file must have header unit, {}".format(column))
    values = [None] * g.n
    for row in reader:
        unit = int(row["unit"])
        if unit not in g.index_of:
            raise InputMismatchError(unit, "not present in graph")
        index = g.index_of[unit]
        if values[index] is not None:
            raise InputMismatchError(unit, "listed twice")
        values[index] = row[column]
    for index, value in enumerate(values):
        if value is None:
            raise InputMismatchError(g.ids[index], "missing from {} file".format(column))
    return values


def read_assignment(g: Graph, c: Optional[EgoClustering], lines: Iterable[str]) -> TreatmentAssignment:
    """
    Прочитать назначение. Если задано разбиение, T должно быть постоянно внутри каждого кластера.
    """
    values = read_unit_table(g, lines, "treatment")
    treatment = np.zeros(g.n, dtype=np.int64)
    for index, value in enumerate(values):
        value = value.strip()
        if value not in ("0", "1"):
            raise ValueError("unit {}: treatment must be 0 or 1, got '{}'".format(g.ids[index], value))
        treatment[index] = int(value)
    cluster_draws = dict()
    if c is None:
        return TreatmentAssignment(cluster_draws, treatment)
    for k in sorted(c.members):
        cluster_draws[k] = int(treatment[k])
    for i in range(g.n):
        if treatment[i] != cluster_draws[int(c.assignment[i])]:
            raise InputMismatchError(g.ids[i], "treatment differs from the rest of its cluster")
    return TreatmentAssignment(cluster_draws, treatment)


def read_exposures(g: Graph, lines: Iterable[str]) -> np.ndarray:
    return np.array([float(value) for value in read_unit_table(g, lines, "rho")], dtype=np.float64)
