# -*- coding: utf-8 -*-
# Описание: Разбиение на эго-кластеры с кэшированной статистикой интерференции.

import copy
import csv
import io
import math
from collections import defaultdict
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np

from egocluster.graph import Graph, InputMismatchError

INFINITE_OBJECTIVE = math.inf


class EgoClustering(object):
    """
    Разбиение вершин на кластеры. Идентификатор кластера совпадает с внутренним номером его эго.

    neighbor_counts[i][k] = |N_i ∩ E_k| (ненулевые элементы строки A·C),
    loss[i] = r_i, r_bar = среднее r_i, b = статистика b_n, obj = значение целевой функции.
    """
    def __init__(self, n: int, degrees: np.ndarray):
        self.n = n  # type: int
        self.degrees = degrees  # type: np.ndarray
        self.assignment = np.zeros(n, dtype=np.int64)  # type: np.ndarray
        self.members = dict()  # type: Dict[int, Set[int]]
        self.neighbor_counts = [dict() for _ in range(n)]  # type: List[Dict[int, int]]
        self.loss = np.zeros(n, dtype=np.float64)  # type: np.ndarray
        self.q = 0.0  # среднее по i от суммы R_ik^2.
        self.r_bar = 0.0
        self.b = 0.0
        self.lambda_ = 1.0
        self.obj = INFINITE_OBJECTIVE
        self.active_share = float(np.count_nonzero(degrees)) / n  # доля неизолированных вершин.
        self.design = "ego_cr"
        self.seed = None  # type: Optional[int]
        self.relaxed = False  # кластеры 3-net могут нарушать смежность альтеров с эго.
        self.trace = []  # type: List[float]

    @property
    def num_clusters(self) -> int:
        return len(self.members)

    @property
    def clusters(self) -> Dict[int, Tuple[int, int]]:
        """
        Реестр живых кластеров: id -> (эго, число членов).
        """
        return {k: (k, len(units)) for k, units in self.members.items()}

    def ego_of(self, i: int) -> int:
        return int(self.assignment[i])

    def is_ego(self, i: int) -> bool:
        return i in self.members

    def size(self, k: int) -> int:
        return len(self.members[k])

    def max_cluster_size(self) -> int:
        return max(len(units) for units in self.members.values())

    def copy(self) -> 'EgoClustering':
        clone = copy.copy(self)
        clone.assignment = self.assignment.copy()
        clone.members = {k: set(units) for k, units in self.members.items()}
        clone.neighbor_counts = [dict(row) for row in self.neighbor_counts]
        clone.loss = self.loss.copy()
        clone.trace = list(self.trace)
        return clone

    def refresh_objective(self) -> None:
        self.b = b_statistic(self.q, self.r_bar, self.active_share)
        self.obj = objective(self.r_bar, self.b, self.lambda_)

    def validate(self, g: Graph) -> None:
        """
        Проверить структурные инварианты разбиения.
        """
        if g.n != self.n:
            raise ValueError("clustering has {} units, graph has {}".format(self.n, g.n))
        seen = 0
        for k, units in self.members.items():
            if k not in units:
                raise ValueError("ego {} is not a member of its cluster".format(k))
            for i in units:
                if self.assignment[i] != k:
                    raise ValueError("unit {} listed in cluster {} but assigned to {}".format(
                        i, k, self.assignment[i]))
                if not self.relaxed and i != k and not g.has_edge(i, k):
                    raise ValueError("alter {} is not adjacent to its ego {}".format(i, k))
            seen += len(units)
        if seen != self.n:
            raise ValueError("clusters cover {} of {} units".format(seen, self.n))

    def __repr__(self):
        return "<EgoClustering design={}; K_n={}; r_bar={:.4f}; b={:.4f}; obj={:.4f}>".format(
            self.design, self.num_clusters, self.r_bar, self.b, self.obj)


def objective(r_bar: float, b: float, lambda_: float) -> float:
    """
    Целевая функция λ·r̄²/b + (1-λ)/b; при b = 0 возвращается +inf.
    """
    if not 0.0 <= lambda_ <= 1.0:
        raise ValueError("lambda must lie in [0, 1], got {}".format(lambda_))
    if b <= 0.0:
        return INFINITE_OBJECTIVE
    return lambda_ * r_bar * r_bar / b + (1.0 - lambda_) / b


def b_statistic(q: float, r_bar: float, active_share: float) -> float:
    """
    b_n через Q = (1/n) Σ_i Σ_k R_ik^2.
    Без изолированных вершин это b = Q - (1 - r̄)^2; в общем случае
    b = Q - ω(1 - r̄/ω)^2, где ω - доля вершин с D_i > 0.
    """
    if active_share <= 0.0:
        return 0.0
    active_mean = r_bar / active_share
    return max(q - active_share * (1.0 - active_mean) ** 2, 0.0)


def from_partition(g: Graph, assignment: Sequence[int], lambda_: float = 1.0,
                   design: str = "ego_cr", seed: int = None, relaxed: bool = False) -> EgoClustering:
    """
    Построить разбиение со всеми кэшами по вектору e(i) (id кластера = номер его эго).

    :param g: граф.
    :param assignment: e(i) для каждой вершины.
    :param lambda_: вес целевой функции.
    :param design: название дизайна.
    :param seed: зерно, с которым получен дизайн.
    :param relaxed: не требовать смежности альтеров с эго.
    :return: разбиение.
    """
    c = EgoClustering(g.n, g.degrees)
    c.assignment = np.asarray(assignment, dtype=np.int64).copy()
    if len(c.assignment) != g.n:
        raise ValueError("assignment has length {}, expected {}".format(len(c.assignment), g.n))
    members = defaultdict(set)
    for i, k in enumerate(c.assignment.tolist()):
        members[k].add(i)
    c.members = dict(members)
    c.lambda_ = lambda_
    c.design = design
    c.seed = seed
    c.relaxed = relaxed
    c.validate(g)

    assignment_list = c.assignment.tolist()
    q_sum = 0.0
    for i, row in enumerate(g.neighbor_lists):
        counts = defaultdict(int)
        for j in row:
            counts[assignment_list[j]] += 1
        c.neighbor_counts[i] = dict(counts)
        degree = len(row)
        if degree:
            c.loss[i] = 1.0 - counts.get(assignment_list[i], 0) / degree
            q_sum += sum(count * count for count in counts.values()) / float(degree * degree)
    c.q = q_sum / g.n
    c.r_bar = math.fsum(c.loss) / g.n
    c.refresh_objective()
    c.trace = [c.obj]
    return c


def singleton_clustering(g: Graph, lambda_: float = 1.0) -> EgoClustering:
    """
    Полная рандомизация: каждая вершина - отдельный эго-кластер (K_n = n).
    """
    return from_partition(g, np.arange(g.n), lambda_=lambda_, design="cr")


def recompute_stats(g: Graph, c: EgoClustering) -> Tuple[np.ndarray, float, float]:
    """
    Пересчитать r_i, r̄ и b_n по определениям, не используя кэши.
    Второе слагаемое b_n центрируется по средней потере неизолированных вершин.

    :return: (потери, r̄, b).
    """
    n = g.n
    loss = np.zeros(n, dtype=np.float64)
    cross = []
    for i in range(n):
        degree = int(g.degrees[i])
        if degree == 0:
            continue
        own = int(c.assignment[i])
        clusters, counts = np.unique(c.assignment[g.adjacency[i]], return_counts=True)
        shares = counts / float(degree)
        loss[i] = 1.0 - float(shares[clusters == own].sum())
        cross.append(float(np.sum(shares[clusters != own] ** 2)))
    r_bar = math.fsum(loss) / n
    active = g.degrees > 0
    if not active.any():
        return loss, r_bar, 0.0
    active_mean = loss[active].mean()
    dispersion = math.fsum((loss[active] - active_mean) ** 2)
    b = (math.fsum(cross) + dispersion) / n
    return loss, r_bar, b


def b_terms(g: Graph, c: EgoClustering) -> Tuple[float, float]:
    """
    Два слагаемых b_n: разброс потерянных соседей по чужим кластерам и разброс потерь.
    """
    cross = 0.0
    for i, counts in enumerate(c.neighbor_counts):
        degree = int(g.degrees[i])
        if degree == 0:
            continue
        own = int(c.assignment[i])
        cross += sum(count * count for k, count in counts.items() if k != own) / float(degree * degree)
    cross /= g.n
    return cross, c.b - cross


def write_clustering(g: Graph, c: EgoClustering) -> str:
    """
    TSV с заголовком unit, cluster, ego во внешних идентификаторах.
    """
    output = io.StringIO()
    writer = csv.writer(output, delimiter="\t", lineterminator="\n")
    writer.writerow(["unit", "cluster", "ego"])
    for i in range(g.n):
        k = int(c.assignment[i])
        writer.writerow([g.ids[i], g.ids[k], 1 if i == k else 0])
    return output.getvalue()


def read_clustering(g: Graph, lines: Iterable[str], lambda_: float = 1.0,
                    design: str = "loaded") -> EgoClustering:
    """
    Прочитать TSV разбиения. Набор вершин должен совпадать с вершинами графа.

    :param g: граф.
    :param lines: строки TSV.
    :param lambda_: вес целевой функции.
    :param design: название дизайна.
    :return: разбиение с пересчитанными кэшами.
    """
    reader = csv.DictReader(lines, delimiter="\t")
    if reader.fieldnames is None or not {"unit", "cluster", "ego"} <= set(reader.fieldnames):
        raise ValueError("clustering file must have header unit, cluster, ego")
    assignment = np.full(g.n, -1, dtype=np.int64)
    flagged_egos = set()
    for row in reader:
        if any(row[field] is None or not row[field].strip() for field in ("unit", "cluster", "ego")):
            raise InputMismatchError(_external(row["unit"]), "row has missing fields")
        unit = _internal(g, row["unit"])
        cluster = _internal(g, row["cluster"])
        if assignment[unit] != -1:
            raise InputMismatchError(int(row["unit"]), "listed twice")
        assignment[unit] = cluster
        if row["ego"].strip() == "1":
            flagged_egos.add(unit)
    missing = np.flatnonzero(assignment == -1)
    if len(missing):
        raise InputMismatchError(g.ids[missing[0]], "missing from clustering")
    clusters = set(assignment.tolist())
    if flagged_egos != clusters:
        raise ValueError("ego flags do not match cluster ids")
    relaxed = any(i != k and not g.has_edge(i, k) for i, k in enumerate(assignment.tolist()))
    return from_partition(g, assignment, lambda_=lambda_, design=design, relaxed=relaxed)


def _internal(g: Graph, token: str) -> int:
    external = int(token)
    if external not in g.index_of:
        raise InputMismatchError(external, "not present in graph")
    return g.index_of[external]


class DesignSummary(object):
    """
    Сводка дизайна для файла статистик.
    """
    FIELDS = ("design", "K_n", "r_bar", "b_n", "objective", "lambda", "cross_term", "dispersion_term",
              "max_cluster_size", "max_cluster_share", "egos", "alters", "seed")

    def __init__(self, g: Graph, c: EgoClustering):
        cross, dispersion = b_terms(g, c)
        largest = c.max_cluster_size()
        self.design = c.design
        self.K_n = c.num_clusters
        self.r_bar = c.r_bar
        self.b_n = c.b
        self.objective = c.obj
        self.lambda_ = c.lambda_
        self.cross_term = cross
        self.dispersion_term = dispersion
        self.max_cluster_size = largest
        self.max_cluster_share = largest / float(g.n)
        self.egos = c.num_clusters
        self.alters = g.n - c.num_clusters
        self.seed = c.seed

    def as_dict(self) -> Dict[str, object]:
        values = dict(self.__dict__)
        values["lambda"] = values.pop("lambda_")
        return {field: values[field] for field in self.FIELDS}


def design_summary(g: Graph, c: EgoClustering) -> DesignSummary:
    return DesignSummary(g, c)


def write_design_stats(summary: DesignSummary) -> str:
    """
    Двухстрочный TSV: заголовок и значения полей сводки (числа в полной точности).
    """
    values = summary.as_dict()
    output = io.StringIO()
    writer = csv.writer(output, delimiter="\t", lineterminator="\n")
    writer.writerow(DesignSummary.FIELDS)
    writer.writerow(["" if values[field] is None else
                     repr(values[field]) if isinstance(values[field], float) else values[field]
                     for field in DesignSummary.FIELDS])
    return output.getvalue()


def read_design_stats(lines: Iterable[str]) -> Dict[str, str]:
    rows = list(csv.DictReader(lines, delimiter="\t"))
    if len(rows) != 1:
        raise ValueError("design stats file must contain exactly one row, got {}".format(len(rows)))
    return rows[0]


def _external(token: Optional[str]) -> Optional[int]:
    if token is None or not token.strip().isdigit():
        return None
    return int(token)
