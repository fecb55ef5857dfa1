# -*- coding: utf-8 -*-
# Описание: Генераторы случайных сетей: Эрдёш-Реньи, Барабаши-Альберт, сообщества малого мира.

import logging
from typing import Tuple

import networkx as nx
import numpy as np

from egocluster.graph import Graph

REWIRE_PROBABILITY = 0.1
SEED_BOUND = 2 ** 32


def _nx_seed(rng: np.random.Generator) -> int:
    return int(rng.integers(SEED_BOUND))


def gen_er(n: int, p: float, rng: np.random.Generator) -> Graph:
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie in (0, 1), got {}".format(p))
    return Graph.from_networkx(nx.fast_gnp_random_graph(n, p, seed=_nx_seed(rng)))


def gen_ba(n: int, m: int, rng: np.random.Generator) -> Graph:
    """
    Предпочтительное присоединение от затравочной клики из m + 1 вершин.
    Число рёбер m·(n - m - 1) + m(m + 1)/2.
    """
    if m < 1 or n <= m:
        raise ValueError("ba requires m >= 1 and n > m, got n={}, m={}".format(n, m))
    graph = nx.barabasi_albert_graph(n, m, seed=_nx_seed(rng), initial_graph=nx.complete_graph(m + 1))
    return Graph.from_networkx(graph)


def lattice_degree(n: int, communities: int, ratio: float, target_avg_degree: float) -> int:
    """
    Чётная степень кольцевой решётки внутри сообщества, при которой
    k + k/(s - 1)/ratio·(n - s) ≈ target_avg_degree (s - размер сообщества).
    """
    size = n // communities
    if size < 3:
        raise ValueError("communities of {} units are too small".format(size))
    exact = target_avg_degree / (1.0 + (n - size) / ((size - 1) * ratio))
    k = max(2, 2 * int(round(exact / 2.0)))
    return min(k, size - 1 - (size - 1) % 2)


def gen_community(n: int, communities: int = 4, ratio: float = 8.0, target_avg_degree: float = 11.0,
                  rng: np.random.Generator = None) -> Tuple[Graph, np.ndarray]:
    """
    Сообщества Уоттса-Строгаца (перемонтаж 0.1) и независимые рёбра между сообществами.
    Вероятность ребра внутри сообщества k/(s - 1), между сообществами - в ratio раз меньше.

    :param n: число вершин; размеры сообществ отличаются не больше чем на 1.
    :param communities: число сообществ.
    :param ratio: отношение вероятностей ребра внутри и между сообществами.
    :param target_avg_degree: целевая средняя степень.
    :param rng: генератор случайных чисел.
    :return: граф и Z - центрированный и нормированный номер сообщества.
    """
    if communities < 2:
        raise ValueError("communities must be at least 2")
    if ratio <= 0.0:
        raise ValueError("ratio must be positive")
    if rng is None:
        rng = np.random.default_rng()
    blocks = np.array_split(np.arange(n), communities)
    k = lattice_degree(n, communities, ratio, target_avg_degree)
    within = k / float(len(blocks[0]) - 1)
    cross = within / ratio

    edges = []
    for block in blocks:
        lattice = nx.watts_strogatz_graph(len(block), k, REWIRE_PROBABILITY, seed=_nx_seed(rng))
        edges.extend((int(block[u]), int(block[v])) for u, v in lattice.edges())
    for a in range(communities):
        for b in range(a + 1, communities):
            hits = np.argwhere(rng.random((len(blocks[a]), len(blocks[b]))) < cross)
            edges.extend((int(blocks[a][u]), int(blocks[b][v])) for u, v in hits)
    logging.debug("community graph: k=%d, within p=%.5f, cross p=%.5f", k, within, cross)

    labels = np.concatenate([np.full(len(block), index, dtype=np.float64) for index, block in enumerate(blocks)])
    z = (labels - labels.mean()) / labels.std()
    return Graph(n, edges), z
