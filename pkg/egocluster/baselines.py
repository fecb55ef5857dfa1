# -*- coding: utf-8 -*-
# Описание: Базовые дизайны для сравнения: полная рандомизация, случайные эго-кластеры, 3-net.

from typing import Dict, List

import numpy as np

from egocluster.clustering import EgoClustering, from_partition, singleton_clustering
from egocluster.graph import Graph, neighborhood_within

DESIGNS = ("ego_cr", "cr", "three_net", "random_ego")


def complete_randomization(g: Graph, lambda_: float = 1.0) -> EgoClustering:
    return singleton_clustering(g, lambda_=lambda_)


def random_ego_clusters(g: Graph, seed: int, lambda_: float = 1.0) -> EgoClustering:
    """
    Эго выбираются в случайном порядке; каждое забирает всех ещё не занятых соседей.
    """
    rng = np.random.default_rng(seed)
    assignment = np.full(g.n, -1, dtype=np.int64)
    for ego in rng.permutation(g.n).tolist():
        if assignment[ego] != -1:
            continue
        assignment[ego] = ego
        for h in g.neighbor_lists[ego]:
            if assignment[h] == -1:
                assignment[h] = ego
    return from_partition(g, assignment, lambda_=lambda_, design="random_ego", seed=seed)


def three_net_seeds(g: Graph, rng: np.random.Generator) -> List[int]:
    """
    Жадное максимальное множество центров, попарно удалённых не менее чем на 3.
    """
    blocked = np.zeros(g.n, dtype=bool)
    seeds = []
    for unit in rng.permutation(g.n).tolist():
        if blocked[unit]:
            continue
        seeds.append(unit)
        for h in neighborhood_within(g, unit, 2):
            blocked[h] = True
    return seeds


def nearest_seed(g: Graph, seeds: List[int]) -> np.ndarray:
    """
    BFS из всех центров сразу; каждая вершина уходит к ближайшему центру,
    при равенстве расстояний - к центру с меньшим номером.
    """
    owner = np.full(g.n, -1, dtype=np.int64)
    frontier = dict()  # type: Dict[int, int]
    for seed in seeds:
        owner[seed] = seed
        frontier[seed] = seed
    while frontier:
        reached = dict()  # type: Dict[int, int]
        for unit, seed in frontier.items():
            for h in g.neighbor_lists[unit]:
                if owner[h] != -1:
                    continue
                if h not in reached or seed < reached[h]:
                    reached[h] = seed
        for h, seed in reached.items():
            owner[h] = seed
        frontier = reached
    return owner


def three_net(g: Graph, seed: int, lambda_: float = 1.0) -> EgoClustering:
    """
    Кластеризация 3-net: центры на попарном расстоянии >= 3, вершины - к ближайшему центру.
    Кластеры могут нарушать смежность альтеров с эго, поэтому разбиение помечается relaxed.
    """
    rng = np.random.default_rng(seed)
    seeds = three_net_seeds(g, rng)
    return from_partition(g, nearest_seed(g, seeds), lambda_=lambda_, design="three_net",
                          seed=seed, relaxed=True)
