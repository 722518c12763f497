"""Small deterministic graph/signal generators shared by the verification
command and the test suite."""

from __future__ import annotations

import numpy as np

from .complexes import CliqueComplex, Graph, build_clique_complex
from .ranking import SimplicialSignal

__all__ = [
    "path_graph",
    "complete_graph",
    "random_er_graph",
    "random_signal",
    "triangle_complex",
    "hollow_triangle_complex",
    "path_complex",
]


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def random_er_graph(n: int, p: float, seed) -> Graph:
    rng = np.random.default_rng(seed)
    edges = [
        (i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p
    ]
    return Graph.from_edges(n, edges)


def random_signal(k: int, size: int, seed) -> SimplicialSignal:
    rng = np.random.default_rng(seed)
    return SimplicialSignal(k=k, values=rng.standard_normal(size))


def triangle_complex() -> CliqueComplex:
    return build_clique_complex(complete_graph(3), 2)


def hollow_triangle_complex() -> CliqueComplex:
    return build_clique_complex(complete_graph(3), 1)


def path_complex(n: int = 3, max_dim: int = 2) -> CliqueComplex:
    g = path_graph(n)
    return build_clique_complex(g, min(max_dim, n - 1))
