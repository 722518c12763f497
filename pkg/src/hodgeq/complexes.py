"""Clique complexes, boundary matrices, Hodge Laplacians, and projectors.

Simplices are kept in canonical positive orientation (strictly increasing
vertex ids) and indexed lexicographically, so every matrix built here is
deterministic for a given graph.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt
import scipy.sparse as sps

__all__ = [
    "Graph",
    "OrientedSimplex",
    "CliqueComplex",
    "BoundaryMatrix",
    "build_clique_complex",
    "boundary_matrix",
    "hodge_laplacian",
    "hodge_projectors",
    "betti_number",
    "read_edge_list",
    "complex_summary_json",
]

# Eigenvalues below KERNEL_RTOL * max(lambda_max, 1) count as zero when
# computing kernels/Betti numbers. Integer-entried Gram matrices at this
# scale have well-separated spectra, so the floor is safe.
KERNEL_RTOL = 1e-9


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..n-1."""

    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("graph needs at least one vertex")
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop on vertex {u}")
            if not (0 <= u < v < self.n):
                raise ValueError(f"edge ({u}, {v}) not in canonical 0 <= u < v < n form")

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        canon = frozenset((min(u, v), max(u, v)) for u, v in edges)
        return cls(n=n, edges=canon)

    def adjacency_sets(self) -> list[set[int]]:
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj


@dataclass(frozen=True)
class OrientedSimplex:
    """A k-simplex in canonical (strictly increasing) vertex order."""

    vertices: tuple[int, ...]

    def __post_init__(self) -> None:
        vs = self.vertices
        if any(vs[i] >= vs[i + 1] for i in range(len(vs) - 1)):
            raise ValueError(f"vertices {vs} not strictly increasing")
        if vs and vs[0] < 0:
            raise ValueError("negative vertex id")

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    def faces(self):
        """(k-1)-faces with the sign of the removed-vertex position."""
        vs = self.vertices
        for pos in range(len(vs)):
            yield (-1) ** pos, OrientedSimplex(vs[:pos] + vs[pos + 1 :])


@dataclass(frozen=True)
class CliqueComplex:
    """Clique complex of a graph up to dimension ``max_dim``.

    ``simplices[k]`` lists the k-simplices lexicographically and
    ``index[k]`` maps vertex tuples back to their column position.
    """

    graph: Graph
    max_dim: int
    simplices: tuple[tuple[OrientedSimplex, ...], ...]
    index: tuple[dict[tuple[int, ...], int], ...] = field(repr=False)

    @property
    def n(self) -> int:
        return self.graph.n

    def n_simplices(self, k: int) -> int:
        if not (0 <= k <= self.max_dim):
            return 0
        return len(self.simplices[k])

    @property
    def counts(self) -> list[int]:
        return [len(s) for s in self.simplices]


@dataclass(frozen=True)
class BoundaryMatrix:
    """Sparse signed incidence matrix mapping k-chains to (k-1)-chains."""

    k: int
    rows: int
    cols: int
    row_idx: npt.NDArray[np.int64] = field(repr=False)
    col_idx: npt.NDArray[np.int64] = field(repr=False)
    values: npt.NDArray[np.int64] = field(repr=False)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def tocsr(self) -> sps.csr_matrix:
        return sps.csr_matrix(
            (self.values, (self.row_idx, self.col_idx)), shape=self.shape, dtype=np.int64
        )

    def toarray(self) -> npt.NDArray[np.float64]:
        arr = np.zeros(self.shape)
        arr[self.row_idx, self.col_idx] = self.values
        return arr


def _enumerate_cliques(graph: Graph, max_size: int) -> list[list[tuple[int, ...]]]:
    """Cliques of size 1..max_size, grouped by size, in lexicographic order.

    Recursive extension over higher-numbered common neighbours; the visit
    order is lexicographic by construction.
    """
    adj = graph.adjacency_sets()
    by_size: list[list[tuple[int, ...]]] = [[] for _ in range(max_size)]

    def extend(clique: tuple[int, ...], candidates: set[int]) -> None:
        by_size[len(clique) - 1].append(clique)
        if len(clique) == max_size:
            return
        for w in sorted(candidates):
            extend(clique + (w,), {x for x in candidates if x > w and x in adj[w]})

    for v in range(graph.n):
        extend((v,), {x for x in adj[v] if x > v})
    return by_size


def build_clique_complex(graph: Graph, max_dim: int) -> CliqueComplex:
    """Enumerate the (k+1)-cliques of ``graph`` for every k <= max_dim."""
    if not (0 <= max_dim <= graph.n - 1):
        raise ValueError(f"max_dim={max_dim} out of range [0, {graph.n - 1}]")
    by_size = _enumerate_cliques(graph, max_dim + 1)
    simplices = tuple(
        tuple(OrientedSimplex(vs) for vs in sorted(level)) for level in by_size
    )
    index = tuple(
        {s.vertices: i for i, s in enumerate(level)} for level in simplices
    )
    return CliqueComplex(graph=graph, max_dim=max_dim, simplices=simplices, index=index)


def boundary_matrix(complex: CliqueComplex, k: int) -> BoundaryMatrix:
    """Signed incidence matrix B_k; column j holds the faces of simplex j
    with alternating signs per removed-vertex position."""
    if k < 1:
        raise ValueError("no boundary below dimension 1")
    if k > complex.max_dim:
        raise ValueError(f"k={k} exceeds max_dim={complex.max_dim}")
    face_index = complex.index[k - 1]
    rows, cols, vals = [], [], []
    for j, simplex in enumerate(complex.simplices[k]):
        for sign, face in simplex.faces():
            rows.append(face_index[face.vertices])
            cols.append(j)
            vals.append(sign)
    return BoundaryMatrix(
        k=k,
        rows=complex.n_simplices(k - 1),
        cols=complex.n_simplices(k),
        row_idx=np.asarray(rows, dtype=np.int64),
        col_idx=np.asarray(cols, dtype=np.int64),
        values=np.asarray(vals, dtype=np.int64),
    )


def _lower_gram(complex: CliqueComplex, k: int) -> npt.NDArray[np.float64]:
    if k == 0:
        nk = complex.n_simplices(0)
        return np.zeros((nk, nk))
    b = boundary_matrix(complex, k).toarray()
    return b.T @ b


def _upper_gram(complex: CliqueComplex, k: int) -> npt.NDArray[np.float64]:
    nk = complex.n_simplices(k)
    if k == complex.max_dim or complex.n_simplices(k + 1) == 0:
        return np.zeros((nk, nk))
    b = boundary_matrix(complex, k + 1).toarray()
    return b @ b.T


def hodge_laplacian(complex: CliqueComplex, k: int):
    """Return (L_k, L_k_lower, L_k_upper) as dense symmetric matrices."""
    if not (0 <= k <= complex.max_dim):
        raise ValueError(f"k={k} out of range [0, {complex.max_dim}]")
    lower = _lower_gram(complex, k)
    upper = _upper_gram(complex, k)
    return lower + upper, lower, upper


def _kernel_tol(eigvals: npt.NDArray[np.float64]) -> float:
    scale = max(float(eigvals.max(initial=0.0)), 1.0)
    return KERNEL_RTOL * scale


def hodge_projectors(complex: CliqueComplex, k: int):
    """Orthogonal projectors onto the gradient, curl, and harmonic parts
    of the k-chain space; they sum to the identity."""
    if not (0 <= k <= complex.max_dim):
        raise ValueError(f"k={k} out of range [0, {complex.max_dim}]")
    nk = complex.n_simplices(k)
    lower = _lower_gram(complex, k)
    upper = _upper_gram(complex, k)

    def _range_projector(gram: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
        w, v = np.linalg.eigh(gram)
        keep = w > _kernel_tol(w)
        basis = v[:, keep]
        return basis @ basis.T

    p_grad = _range_projector(lower)
    p_curl = _range_projector(upper)
    p_harm = np.eye(nk) - p_grad - p_curl
    return p_grad, p_curl, p_harm


def betti_number(complex: CliqueComplex, k: int) -> int:
    """dim ker(L_k), counted as eigenvalues below the kernel tolerance."""
    lap, _, _ = hodge_laplacian(complex, k)
    w = np.linalg.eigvalsh(lap)
    return int(np.count_nonzero(w <= _kernel_tol(w)))


def read_edge_list(path) -> Graph:
    """Parse an edge-list text file: one "u v" pair per line, 0-indexed,
    '#' starts a comment. Vertex count is 1 + max id unless a leading
    "n <count>" line overrides it."""
    edges = []
    n_override = None
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if parts[0] == "n" and len(parts) == 2:
                n_override = int(parts[1])
                continue
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected 'u v', got {line!r}")
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: non-integer vertex id") from exc
            if u == v:
                raise ValueError(f"{path}:{lineno}: self-loop on vertex {u}")
            edges.append((u, v))
    if not edges and n_override is None:
        raise ValueError(f"{path}: empty edge list")
    n = n_override if n_override is not None else 1 + max(max(e) for e in edges)
    return Graph.from_edges(n, edges)


def complex_summary_json(complex: CliqueComplex) -> str:
    return json.dumps(
        {"n": complex.n, "max_dim": complex.max_dim, "counts": complex.counts},
        sort_keys=True,
    )
