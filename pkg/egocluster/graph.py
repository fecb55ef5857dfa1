# -*- coding: utf-8 -*-
# Описание: Неизменяемый неориентированный граф, чтение/запись списка рёбер, BFS-окрестности.

import re
from collections import deque
from typing import Iterable, List, Sequence, Set, Tuple, Union

import numpy as np
import networkx as nx
from scipy import sparse

from egocluster.util.tqdm_open import tqdm_open

HEADER_PATTERN = re.compile(r"^nodes:\s*(\S+)\s*$")


class EdgeListError(ValueError):
    """
    Ошибка разбора списка рёбер с номером строки.
    """
    def __init__(self, line_number: int, message: str):
        self.line_number = line_number
        super().__init__("line {}: {}".format(line_number, message))


class InputMismatchError(ValueError):
    """
    Набор вершин во входном файле не совпадает с вершинами графа.
    """
    def __init__(self, unit: int, message: str):
        self.unit = unit
        super().__init__("unit {}: {}".format(unit, message))


class Graph(object):
    """
    Простой неориентированный граф с плотной нумерацией вершин 0..n-1.
    Внешние идентификаторы хранятся в ids (ids[i] - внешний id вершины i).
    """
    def __init__(self, n: int, edges: Iterable[Tuple[int, int]], ids: Sequence[int] = None):
        """
        :param n: число вершин.
        :param edges: пары (u, v) во внутренней нумерации; повторы схлопываются.
        :param ids: внешние идентификаторы; по умолчанию 0..n-1.
        """
        if n <= 0:
            raise ValueError("graph must have at least one unit")
        rows = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise ValueError("self-loop at unit {}".format(u))
            if not (0 <= u < n and 0 <= v < n):
                raise IndexError("edge ({}, {}) out of range for n={}".format(u, v, n))
            rows[u].add(v)
            rows[v].add(u)
        adjacency = []
        for row in rows:
            array = np.array(sorted(row), dtype=np.int64)
            array.flags.writeable = False
            adjacency.append(array)
        self.n = n  # type: int
        self.adjacency = tuple(adjacency)  # type: Tuple[np.ndarray]
        self.degrees = np.array([len(row) for row in adjacency], dtype=np.int64)
        self.degrees.flags.writeable = False
        self.ids = tuple(int(i) for i in ids) if ids is not None else tuple(range(n))  # type: Tuple[int]
        if len(self.ids) != n:
            raise ValueError("ids length {} does not match n={}".format(len(self.ids), n))
        self.index_of = {external: index for index, external in enumerate(self.ids)}
        self._neighbor_lists = None
        self._adjacency_matrix = None

    @property
    def neighbor_lists(self) -> List[List[int]]:
        """
        Строки смежности в виде списков python int (для горячих циклов).
        """
        if self._neighbor_lists is None:
            self._neighbor_lists = [row.tolist() for row in self.adjacency]
        return self._neighbor_lists

    @property
    def num_edges(self) -> int:
        return int(self.degrees.sum()) // 2

    def edges(self) -> List[Tuple[int, int]]:
        """
        Рёбра (u, v), u < v, во внутренней нумерации, в лексикографическом порядке.
        """
        return [(u, int(v)) for u in range(self.n) for v in self.adjacency[u] if u < v]

    def has_edge(self, u: int, v: int) -> bool:
        row = self.adjacency[u]
        position = np.searchsorted(row, v)
        return position < len(row) and row[position] == v

    def isolated(self) -> np.ndarray:
        return np.flatnonzero(self.degrees == 0)

    def adjacency_matrix(self) -> sparse.csr_matrix:
        if self._adjacency_matrix is not None:
            return self._adjacency_matrix
        indptr = np.concatenate([[0], np.cumsum(self.degrees)])
        indices = np.concatenate(self.adjacency) if self.num_edges else np.zeros(0, dtype=np.int64)
        data = np.ones(len(indices), dtype=np.float64)
        self._adjacency_matrix = sparse.csr_matrix((data, indices, indptr), shape=(self.n, self.n))
        return self._adjacency_matrix

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.edges())
        return graph

    @classmethod
    def from_networkx(cls, graph: nx.Graph) -> 'Graph':
        """
        Построить граф по networkx-графу с вершинами 0..n-1.
        """
        return cls(graph.number_of_nodes(), graph.edges())

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.ids == other.ids and \
            all(np.array_equal(a, b) for a, b in zip(self.adjacency, other.adjacency))

    def __hash__(self):
        return hash((self.n, self.ids, tuple(self.degrees)))

    def __repr__(self):
        return "<Graph n={}; edges={}>".format(self.n, self.num_edges)


def neighborhood_within(g: Graph, i: int, d: int) -> Set[int]:
    """
    Множество вершин на расстоянии не больше d от i (включая саму i).

    :param g: граф.
    :param i: вершина.
    :param d: радиус.
    :return: множество вершин.
    """
    if not 0 <= i < g.n:
        raise IndexError("unit {} out of range for n={}".format(i, g.n))
    if d < 0:
        raise ValueError("radius must be nonnegative")
    seen = {i}
    frontier = deque([(i, 0)])
    while frontier:
        u, distance = frontier.popleft()
        if distance == d:
            continue
        for v in g.adjacency[u]:
            v = int(v)
            if v not in seen:
                seen.add(v)
                frontier.append((v, distance + 1))
    return seen


def _split_lines(stream: Union[bytes, str, Iterable]) -> Iterable[Union[bytes, str]]:
    if isinstance(stream, bytes):
        return stream.split(b"\n")
    if isinstance(stream, str):
        return stream.split("\n")
    return stream


def _decode_line(line: Union[bytes, str], line_number: int) -> str:
    if isinstance(line, str):
        return line
    try:
        return line.decode("utf-8")
    except UnicodeDecodeError:
        raise EdgeListError(line_number, "invalid UTF-8")


def _parse_id(token: str, line_number: int) -> int:
    if not (token.isascii() and token.isdigit()):
        raise EdgeListError(line_number, "malformed unit id '{}'".format(token))
    return int(token)


def load_edge_list(stream: Union[bytes, str, Iterable]) -> Graph:
    """
    Загрузить граф из списка рёбер "u v" (по одному на строку).
    Строки, начинающиеся с '#', и пустые строки пропускаются.
    Заголовок "nodes: N" объявляет вершины 0..N-1, в том числе изолированные.

    :param stream: байты, строка или итератор по строкам.
    :return: граф.
    """
    declared = None
    pairs = []
    for line_number, raw in enumerate(_split_lines(stream), start=1):
        line = _decode_line(raw, line_number).strip()
        if not line or line.startswith("#"):
            continue
        header = HEADER_PATTERN.match(line)
        if header is not None:
            if declared is not None:
                raise EdgeListError(line_number, "duplicate nodes header")
            declared = _parse_id(header.group(1), line_number)
            if declared <= 0:
                raise EdgeListError(line_number, "declared node count must be positive")
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise EdgeListError(line_number, "expected two unit ids, got {}".format(len(tokens)))
        u, v = _parse_id(tokens[0], line_number), _parse_id(tokens[1], line_number)
        if u == v:
            raise EdgeListError(line_number, "self-loop on unit {}".format(u))
        pairs.append((u, v, line_number))

    if declared is not None:
        for u, v, line_number in pairs:
            if u >= declared or v >= declared:
                raise EdgeListError(line_number, "unit id exceeds declared node count {}".format(declared))
        return Graph(declared, [(u, v) for u, v, _ in pairs])

    ids = sorted({u for u, _, _ in pairs} | {v for _, v, _ in pairs})
    if not ids:
        raise EdgeListError(0, "edge list names no units")
    index = {external: position for position, external in enumerate(ids)}
    return Graph(len(ids), [(index[u], index[v]) for u, v, _ in pairs], ids=ids)


def load_edge_list_file(filename: str, progress: bool = False) -> Graph:
    with tqdm_open(filename, disable=not progress) as f:
        return load_edge_list(f)


def dump_edge_list(g: Graph) -> bytes:
    """
    Записать граф как список рёбер во внешних идентификаторах, каждое ребро один раз, u < v.
    Если есть изолированные вершины, добавляется заголовок "nodes: N".
    """
    lines = []
    if len(g.isolated()) > 0:
        if g.ids != tuple(range(g.n)):
            raise ValueError("isolated units require dense external ids 0..n-1")
        lines.append("nodes: {}".format(g.n))
    edges = sorted(tuple(sorted((g.ids[u], g.ids[v]))) for u, v in g.edges())
    lines.extend("{} {}".format(u, v) for u, v in edges)
    return "".join(line + "\n" for line in lines).encode("utf-8")
