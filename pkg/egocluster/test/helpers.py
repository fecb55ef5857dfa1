# -*- coding: utf-8 -*-
# Описание: Общие графы и стратегии hypothesis для тестов.

import numpy as np
from hypothesis import strategies as st

from egocluster.graph import Graph, load_edge_list


def path3() -> Graph:
    return load_edge_list(b"0 1\n1 2\n")


def triangle() -> Graph:
    return load_edge_list(b"0 1\n1 2\n0 2\n")


def star3() -> Graph:
    return load_edge_list(b"0 1\n0 2\n0 3\n")


def two_triangles() -> Graph:
    return load_edge_list(b"0 1\n1 2\n0 2\n3 4\n4 5\n3 5\n")


def er_graph(n: int, p: float, seed: int) -> Graph:
    rng = np.random.default_rng(seed)
    upper = np.triu(rng.random((n, n)) < p, k=1)
    return Graph(n, [(int(u), int(v)) for u, v in zip(*np.nonzero(upper))])


@st.composite
def graphs(draw, min_n: int = 1, max_n: int = 12):
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    pairs = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=3 * n))
    return Graph(n, [(u, v) for u, v in pairs if u != v])
