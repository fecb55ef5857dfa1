# -*- coding: utf-8 -*-
# Описание: Жадное построение эго-кластеров: отбор эго и переназначение альтеров.

import logging
from multiprocessing import Pool
from typing import Dict, List, Sequence, Tuple

import numpy as np

from egocluster.clustering import EgoClustering, b_statistic, objective, singleton_clustering
from egocluster.graph import Graph
from egocluster.util.timeit import timeit

TARGETS = ("tau", "gamma", "weighted")


class DesignError(ValueError):
    pass


def acceptance_tolerance(obj: float) -> float:
    return max(1e-12, 1e-12 * abs(obj))


def improves(obj_new: float, obj: float) -> bool:
    """
    Строгое уменьшение целевой функции с запасом tol.
    """
    return obj_new < obj - acceptance_tolerance(obj)


def target_lambda(target: str, lambda_: float = 1.0) -> float:
    """
    Вес λ по целевой оценке: tau -> 1 (r̄²/b), gamma -> 0 (1/b), weighted -> λ из (0, 1).
    """
    if target == "tau":
        return 1.0
    if target == "gamma":
        return 0.0
    if target == "weighted":
        if not 0.0 < lambda_ < 1.0:
            raise ValueError("weighted target needs lambda in (0, 1), got {}".format(lambda_))
        return lambda_
    raise ValueError("unknown target '{}', expected one of {}".format(target, TARGETS))


def _check_move(g: Graph, c: EgoClustering, m: int, k1: int, k2: int) -> None:
    if c.relaxed:
        raise DesignError("reassignment is defined only for ego-clusterings")
    if c.is_ego(m):
        raise DesignError("unit {} is an ego and cannot be reassigned".format(m))
    if int(c.assignment[m]) != k1:
        raise DesignError("unit {} is not a member of cluster {}".format(m, k1))
    if k1 == k2:
        raise DesignError("source and target clusters coincide")
    if k2 not in c.members or not g.has_edge(m, k2):
        raise DesignError("cluster {} has no ego adjacent to unit {}".format(k2, m))


def reassignment_delta(g: Graph, c: EgoClustering, m: int, k1: int, k2: int) -> Tuple[float, float]:
    """
    Статистики (r̄*, b*) после переноса альтера m из кластера k1 в k2, без изменения c.
    Стоимость O(D_m).

    :param g: граф.
    :param c: разбиение.
    :param m: переносимый альтер.
    :param k1: текущий кластер m.
    :param k2: кластер, эго которого смежно с m.
    :return: (r̄*, b*).
    """
    _check_move(g, c, m, k1, k2)
    r_bar, b, _ = _delta(g, c, m, k1, k2)
    return r_bar, b


def _delta(g: Graph, c: EgoClustering, m: int, k1: int, k2: int) -> Tuple[float, float, float]:
    n = c.n
    assignment = c.assignment
    degrees = g.degrees
    loss_shift = 0.0
    q_shift = 0.0
    in_k1 = 0
    in_k2 = 0
    for h in g.neighbor_lists[m]:
        degree = float(degrees[h])
        counts = c.neighbor_counts[h]
        cluster = assignment[h]
        if cluster == k1:
            loss_shift += 1.0 / degree
            in_k1 += 1
        elif cluster == k2:
            loss_shift -= 1.0 / degree
            in_k2 += 1
        q_shift += 2.0 * (1.0 - counts.get(k1, 0) + counts.get(k2, 0)) / (degree * degree)
    loss_shift += (in_k1 - in_k2) / float(degrees[m])
    r_bar = c.r_bar + loss_shift / n
    q = c.q + q_shift / n
    return r_bar, b_statistic(q, r_bar, c.active_share), q


def apply_reassignment(g: Graph, c: EgoClustering, m: int, k2: int) -> EgoClustering:
    """
    Перенести альтера m в кластер k2 с обновлением всех кэшей на месте.
    """
    k1 = int(c.assignment[m])
    _check_move(g, c, m, k1, k2)
    r_bar, b, q = _delta(g, c, m, k1, k2)
    for h in g.neighbor_lists[m]:
        counts = c.neighbor_counts[h]
        left = counts[k1] - 1
        if left:
            counts[k1] = left
        else:
            del counts[k1]
        counts[k2] = counts.get(k2, 0) + 1
        cluster = c.assignment[h]
        if cluster == k1 or cluster == k2:
            c.loss[h] = 1.0 - counts.get(cluster, 0) / float(g.degrees[h])
    c.assignment[m] = k2
    c.members[k1].discard(m)
    c.members[k2].add(m)
    c.loss[m] = 1.0 - c.neighbor_counts[m].get(k2, 0) / float(g.degrees[m])
    c.r_bar = r_bar
    c.q = q
    c.b = b
    c.obj = objective(r_bar, b, c.lambda_)
    c.trace.append(c.obj)
    return c


def _merge_effect(g: Graph, cluster: List[int]) -> Tuple[Dict[int, int], float, float]:
    """
    Эффект слияния одиночных кластеров cluster в кластер ego.

    :return: (h -> |N_h ∩ cluster|, приращение Σ r_i, приращение n·Q).
    """
    touched = dict()
    for x in cluster:
        for h in g.neighbor_lists[x]:
            touched[h] = touched.get(h, 0) + 1
    q_shift = 0.0
    for h, inside in touched.items():
        degree = float(g.degrees[h])
        q_shift += (inside * inside - inside) / (degree * degree)
    loss_shift = 0.0
    for x in cluster:
        inside = touched.get(x, 0)
        if inside:
            loss_shift -= inside / float(g.degrees[x])
    return touched, loss_shift, q_shift


def _merge(g: Graph, c: EgoClustering, ego: int, cluster: List[int], touched: Dict[int, int],
           loss_shift: float, q_shift: float) -> None:
    members = set(cluster)
    for x in cluster:
        for h in g.neighbor_lists[x]:
            del c.neighbor_counts[h][x]
    for h, inside in touched.items():
        c.neighbor_counts[h][ego] = inside
    for x in cluster:
        c.assignment[x] = ego
        if x != ego:
            del c.members[x]
        if g.degrees[x]:
            c.loss[x] = 1.0 - touched.get(x, 0) / float(g.degrees[x])
    c.members[ego] = members
    c.r_bar += loss_shift / c.n
    c.q += q_shift / c.n
    c.refresh_objective()


def _candidate_cluster(g: Graph, ego: int, unassigned: Dict[int, int]) -> List[int]:
    return [ego] + [h for h in g.neighbor_lists[ego] if h in unassigned]


class _Pool(object):
    """
    Множество с равновероятным выбором и удалением за O(1).
    """
    def __init__(self, items: Sequence[int]):
        self.items = list(items)
        self.position = {item: index for index, item in enumerate(self.items)}

    def __len__(self):
        return len(self.items)

    def __contains__(self, item):
        return item in self.position

    def copy(self) -> '_Pool':
        return _Pool(self.items)

    def draw(self, rng: np.random.Generator) -> int:
        return self.items[int(rng.integers(len(self.items)))]

    def remove(self, item: int) -> None:
        index = self.position.pop(item)
        last = self.items.pop()
        if index < len(self.items):
            self.items[index] = last
            self.position[last] = index


def seed_predetermined(g: Graph, c: EgoClustering, egos: Sequence[int]) -> _Pool:
    """
    Сформировать кластеры заранее заданных эго (каждый забирает ещё не занятых соседей).

    :return: пул незанятых вершин.
    """
    candidates = _Pool(range(g.n))
    for ego in egos:
        if not 0 <= ego < g.n:
            raise IndexError("predetermined ego {} out of range".format(ego))
        if ego not in candidates:
            raise DesignError("predetermined ego {} already belongs to another cluster".format(ego))
        cluster = _candidate_cluster(g, ego, candidates.position)
        touched, loss_shift, q_shift = _merge_effect(g, cluster)
        _merge(g, c, ego, cluster, touched, loss_shift, q_shift)
        for x in cluster:
            candidates.remove(x)
    c.trace = [c.obj]
    return candidates


def select_egos(g: Graph, c: EgoClustering, lambda_: float, rng: np.random.Generator,
                predetermined_egos: Sequence[int] = ()) -> EgoClustering:
    """
    Обратный отбор эго: случайный кандидат из node_pool вместе с незанятыми соседями
    образует кластер, который принимается при строгом уменьшении целевой функции.

    :param g: граф.
    :param c: одиночное разбиение (мутируется).
    :param lambda_: вес целевой функции.
    :param rng: генератор случайных чисел.
    :param predetermined_egos: эго, формирующие кластеры до начала отбора.
    :return: c.
    """
    if g.num_edges == 0:
        raise DesignError("no interference structure to optimize")
    c.lambda_ = lambda_
    c.refresh_objective()
    candidates = seed_predetermined(g, c, predetermined_egos)

    rounds = 0
    while True:
        node_pool = candidates.copy()
        selected = False
        while len(node_pool) > 0:
            ego = node_pool.draw(rng)
            cluster = _candidate_cluster(g, ego, candidates.position)
            touched, loss_shift, q_shift = _merge_effect(g, cluster)
            r_bar = c.r_bar + loss_shift / c.n
            b = b_statistic(c.q + q_shift / c.n, r_bar, c.active_share)
            obj_new = objective(r_bar, b, lambda_)
            if improves(obj_new, c.obj):
                _merge(g, c, ego, cluster, touched, loss_shift, q_shift)
                c.trace.append(c.obj)
                for x in cluster:
                    candidates.remove(x)
                selected = True
                break
            node_pool.remove(ego)
        rounds += 1
        if not selected:
            break
    logging.debug("ego selection: %d rounds, K_n=%d, obj=%.6f", rounds, c.num_clusters, c.obj)
    return c


def reassign_alters(g: Graph, c: EgoClustering, lambda_: float, rng: np.random.Generator) -> EgoClustering:
    """
    Переназначение альтеров, смежных с двумя и более эго, пока проход что-то меняет.
    """
    c.lambda_ = lambda_
    c.refresh_objective()
    considered = []
    for m in range(g.n):
        if c.is_ego(m):
            continue
        egos = [h for h in g.neighbor_lists[m] if c.is_ego(h)]
        if len(egos) >= 2:
            considered.append((m, egos))
    order = rng.permutation(len(considered)).tolist()
    considered = [considered[index] for index in order]

    passes = 0
    moves = 0
    changed = True
    while changed:
        changed = False
        passes += 1
        for m, egos in considered:
            for k2 in egos:
                k1 = int(c.assignment[m])
                if k2 == k1:
                    continue
                r_bar, b, _ = _delta(g, c, m, k1, k2)
                if improves(objective(r_bar, b, lambda_), c.obj):
                    apply_reassignment(g, c, m, k2)
                    changed = True
                    moves += 1
    logging.debug("alter reassignment: %d alters, %d passes, %d moves, obj=%.6f",
                  len(considered), passes, moves, c.obj)
    return c


@timeit
def build_design(g: Graph, lambda_: float = 1.0, seed: int = 0,
                 predetermined_egos: Sequence[int] = ()) -> EgoClustering:
    """
    Двухшаговый жадный дизайн: одиночное разбиение -> отбор эго -> переназначение альтеров.
    Детерминирован при фиксированных (g, λ, seed).
    """
    rng = np.random.default_rng(seed)
    c = singleton_clustering(g, lambda_=lambda_)
    select_egos(g, c, lambda_, rng, predetermined_egos)
    reassign_alters(g, c, lambda_, rng)
    c.design = "ego_cr"
    c.seed = seed
    return c


def _build_task(arguments):
    g, lambda_, seed, predetermined_egos = arguments
    return build_design(g, lambda_, seed, predetermined_egos)


def build_design_restarts(g: Graph, lambda_: float, seeds: Sequence[int], workers: int = 1,
                          predetermined_egos: Sequence[int] = ()) -> EgoClustering:
    """
    Несколько независимых запусков с разными зёрнами; возвращается разбиение
    с наименьшей целевой функцией (при равенстве - с меньшим зерном).
    """
    if not seeds:
        raise ValueError("at least one seed is required")
    tasks = [(g, lambda_, seed, tuple(predetermined_egos)) for seed in seeds]
    if workers > 1:
        with Pool(processes=workers) as pool:
            designs = pool.map(_build_task, tasks)
    else:
        designs = [_build_task(task) for task in tasks]
    best = min(zip(designs, seeds), key=lambda pair: (pair[0].obj, pair[1]))[0]
    logging.info("best of %d restarts: seed=%s, obj=%.6f", len(seeds), best.seed, best.obj)
    return best
