"""Classical k-HodgeRank: least-squares scores, consistency measures, and
the condition parameters used by the quantum-side filters.

Everything here is exact (up to dense SVD) and serves as the oracle for
the simulated quantum pipeline.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt

from .complexes import CliqueComplex, Graph, boundary_matrix, hodge_projectors

__all__ = [
    "PairwiseData",
    "SimplicialSignal",
    "RankResult",
    "assemble_edge_signal",
    "hodgerank_solve",
    "consistency_measures",
    "effective_condition_params",
    "read_pairwise_csv",
]

# Singular values below PINV_RTOL * sigma_max are treated as exact zeros.
PINV_RTOL = 1e-10

# Default effective-condition-number headroom over the open lower bound
# sqrt(n)/zeta_min.
KAPPA_HEADROOM = 1.1


@dataclass(frozen=True)
class PairwiseData:
    """Balanced pairwise-comparison records: (voter, i, j, value), i < j,
    positive value meaning j is preferred over i."""

    n: int
    records: tuple[tuple[str, int, int, float], ...]

    def __post_init__(self) -> None:
        for voter, i, j, _ in self.records:
            if not (0 <= i < j < self.n):
                raise ValueError(
                    f"record ({voter!r}, {i}, {j}): need 0 <= i < j < n={self.n}"
                )


@dataclass(frozen=True)
class SimplicialSignal:
    """Real vector indexed by the canonical k-simplex order."""

    k: int
    values: npt.NDArray[np.float64] = field(repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.values))

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class RankResult:
    """Scores on (k-1)-simplices plus the induced ranking and the
    gradient/curl consistency ratios."""

    scores: SimplicialSignal
    ranking: tuple[int, ...]
    consistency: float
    local_inconsistency: float

    def to_json(self) -> str:
        return json.dumps(
            {
                "scores": [float(x) for x in self.scores.values],
                "ranking": list(self.ranking),
                "R": self.consistency,
                "R_C": self.local_inconsistency,
                "R_squared": self.consistency**2,
                "R_C_squared": self.local_inconsistency**2,
            },
            sort_keys=True,
        )


def assemble_edge_signal(data: PairwiseData) -> tuple[Graph, SimplicialSignal]:
    """Collapse balanced pairwise records into a graph and an edge signal.

    The signal value on edge [i, j] is the mean of the voters' values.
    Data where compared pairs have unequal voter multiplicity is rejected:
    the pipeline downstream assumes unit edge weights.
    """
    if not data.records:
        raise ValueError("empty data: no comparison records")
    sums: dict[tuple[int, int], float] = {}
    counts: dict[tuple[int, int], int] = {}
    for _, i, j, value in data.records:
        sums[(i, j)] = sums.get((i, j), 0.0) + value
        counts[(i, j)] = counts.get((i, j), 0) + 1
    multiplicities = set(counts.values())
    if len(multiplicities) > 1:
        detail = ", ".join(
            f"[{i},{j}]x{c}" for (i, j), c in sorted(counts.items())
        )
        raise ValueError(f"unbalanced comparison data (multiplicities {detail})")
    graph = Graph.from_edges(data.n, sums.keys())
    edge_order = sorted(sums.keys())
    values = np.array([sums[e] / counts[e] for e in edge_order])
    return graph, SimplicialSignal(k=1, values=values)


def _ranking_of(scores: npt.NDArray[np.float64]) -> tuple[int, ...]:
    # Descending score, ties broken by ascending simplex index.
    order = sorted(range(len(scores)), key=lambda i: (-scores[i], i))
    return tuple(order)


def solve_scores(
    complex: CliqueComplex, k: int, values: npt.NDArray[np.float64]
) -> npt.NDArray[np.float64]:
    """Minimum-norm least-squares scores (B_k B_k^T)^+ B_k s."""
    if k < 1:
        raise ValueError("HodgeRank needs k >= 1")
    b = boundary_matrix(complex, k).toarray()
    if b.size == 0:
        raise ValueError(f"no {k}-simplices to rank over")
    gram = b @ b.T
    rhs = b @ np.asarray(values, dtype=float)
    return np.linalg.pinv(gram, rcond=PINV_RTOL) @ rhs


def hodgerank_solve(
    complex: CliqueComplex, k: int, signal: SimplicialSignal
) -> RankResult:
    """Rank (k-1)-simplices from a k-signal by the l2-minimizing potential."""
    if len(signal) != complex.n_simplices(k):
        raise ValueError(
            f"signal length {len(signal)} != n_{k} = {complex.n_simplices(k)}"
        )
    scores = solve_scores(complex, k, signal.values)
    r, r_c = consistency_measures(complex, k, signal)
    return RankResult(
        scores=SimplicialSignal(k=k - 1, values=scores),
        ranking=_ranking_of(scores),
        consistency=r,
        local_inconsistency=r_c,
    )


def consistency_measures(
    complex: CliqueComplex, k: int, signal: SimplicialSignal
) -> tuple[float, float]:
    """Relative norms of the gradient and curl components of the signal."""
    norm = signal.norm
    if norm == 0.0:
        raise ValueError("zero signal has no consistency measure")
    p_grad, p_curl, _ = hodge_projectors(complex, k)
    r = float(np.linalg.norm(p_grad @ signal.values) / norm)
    r_c = float(np.linalg.norm(p_curl @ signal.values) / norm)
    return r, r_c


def effective_condition_params(
    complex: CliqueComplex, k: int, kappa: float | None = None
) -> tuple[float, float]:
    """Smallest nonzero singular value of B_k and the effective condition
    number kappa_k, which must exceed sqrt(n)/zeta_min (open interval)."""
    b = boundary_matrix(complex, k).toarray()
    if b.size == 0 or not np.any(b):
        raise ValueError(f"B_{k} is zero; no condition parameters")
    svals = np.linalg.svd(b, compute_uv=False)
    cutoff = PINV_RTOL * svals.max()
    nonzero = svals[svals > cutoff]
    zeta_min = float(nonzero.min())
    lower = np.sqrt(complex.n) / zeta_min
    if kappa is None:
        kappa = KAPPA_HEADROOM * lower
    elif kappa <= lower:
        raise ValueError(
            f"kappa={kappa} must exceed sqrt(n)/zeta_min = {lower:.6g}"
        )
    return zeta_min, float(kappa)


def read_pairwise_csv(path, n: int | None = None) -> PairwiseData:
    """Read comparison records from a CSV with header voter,i,j,value."""
    records = []
    max_id = -1
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty data") from None
        expected = ["voter", "i", "j", "value"]
        if [h.strip().lower() for h in header] != expected:
            raise ValueError(f"{path}:1: expected header {','.join(expected)}")
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 4:
                raise ValueError(f"{path}:{lineno}: expected 4 fields, got {len(row)}")
            try:
                voter = row[0].strip()
                i, j = int(row[1]), int(row[2])
                value = float(row[3])
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: malformed row: {exc}") from exc
            records.append((voter, i, j, value))
            max_id = max(max_id, i, j)
    if not records:
        raise ValueError(f"{path}: empty data")
    if n is None:
        n = max_id + 1
    return PairwiseData(n=n, records=tuple(records))
