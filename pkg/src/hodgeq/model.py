"""Estimator-style front end so the ranking pipeline composes with
scikit-learn tooling (pipelines, parameter search, cloning).

Both estimators consume pairwise-comparison rows and expose scores and a
ranking as fitted attributes; the quantum variant runs the simulated
filter pipeline and carries its certification data along.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .complexes import build_clique_complex
from .qtsp import quantum_hodgerank
from .ranking import PairwiseData, assemble_edge_signal, hodgerank_solve

__all__ = ["HodgeRankEstimator", "QuantumHodgeRankEstimator"]


def _as_records(X) -> tuple[tuple[str, int, int, float], ...]:
    """Accept rows of (i, j, value) or (voter, i, j, value)."""
    records = []
    for rownum, row in enumerate(X):
        row = list(row)
        if len(row) == 3:
            voter, i, j, value = "0", row[0], row[1], row[2]
        elif len(row) == 4:
            voter, i, j, value = row
        else:
            raise ValueError(
                f"row {rownum}: expected (i, j, value) or (voter, i, j, value), "
                f"got {len(row)} fields"
            )
        records.append((str(voter), int(i), int(j), float(value)))
    if not records:
        raise ValueError("empty comparison data")
    return tuple(records)


class HodgeRankEstimator(BaseEstimator):
    """Least-squares global scores from pairwise comparisons (k = 1).

    Parameters
    ----------
    n_alternatives : explicit alternative count, else inferred from data.
    max_dim : top simplex dimension of the clique complex; 2 gives the
        triangle (curl) space used by the local-inconsistency measure.
    """

    def __init__(self, n_alternatives: int | None = None, max_dim: int = 2):
        self.n_alternatives = n_alternatives
        self.max_dim = max_dim

    def _ingest(self, X):
        records = _as_records(X)
        n = self.n_alternatives
        if n is None:
            n = 1 + max(max(r[1], r[2]) for r in records)
        data = PairwiseData(n=n, records=records)
        graph, signal = assemble_edge_signal(data)
        max_dim = min(self.max_dim, graph.n - 1)
        complex = build_clique_complex(graph, max_dim)
        return complex, signal

    def fit(self, X, y=None):
        complex, signal = self._ingest(X)
        result = hodgerank_solve(complex, 1, signal)
        self.complex_ = complex
        self.signal_ = signal
        self.result_ = result
        self.scores_ = np.asarray(result.scores.values)
        self.ranking_ = np.asarray(result.ranking)
        self.consistency_ = result.consistency
        self.local_inconsistency_ = result.local_inconsistency
        return self

    def predict(self, X):
        """Predicted comparison value for each (i, j) row: score_j - score_i."""
        check_is_fitted(self, "scores_")
        pairs = np.asarray(X, dtype=int)
        if pairs.ndim != 2 or pairs.shape[1] != 2:
            raise ValueError("expected an (m, 2) array of (i, j) pairs")
        if pairs.min() < 0 or pairs.max() >= len(self.scores_):
            raise ValueError("pair index out of range")
        return self.scores_[pairs[:, 1]] - self.scores_[pairs[:, 0]]


class QuantumHodgeRankEstimator(HodgeRankEstimator):
    """Same contract as HodgeRankEstimator, but scores come from the
    simulated filter pipeline; certification data lands in outcome_."""

    def __init__(
        self,
        n_alternatives: int | None = None,
        max_dim: int = 2,
        epsilon: float = 1e-3,
        kappa: float | None = None,
    ):
        super().__init__(n_alternatives=n_alternatives, max_dim=max_dim)
        self.epsilon = epsilon
        self.kappa = kappa

    def fit(self, X, y=None):
        complex, signal = self._ingest(X)
        outcome = quantum_hodgerank(complex, 1, signal, self.epsilon, kappa=self.kappa)
        self.complex_ = complex
        self.signal_ = signal
        self.outcome_ = outcome
        if outcome.output_state is None:
            self.scores_ = np.zeros(complex.n_simplices(0))
        else:
            self.scores_ = (
                outcome.output_state * outcome.N_star * signal.norm
            )
        self.ranking_ = np.asarray(
            sorted(range(len(self.scores_)), key=lambda i: (-self.scores_[i], i))
        )
        return self
