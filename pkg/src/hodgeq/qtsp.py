"""Matrix-level simulation of the filtering circuit: state preparation,
singular-value-transform application, postselection statistics with the
certified error bounds, the dense Dirac-operator cross-check of the
projected unitary encoding, and the symbolic gate-cost model.

The simulator works in the n_k-dimensional simplex basis; the full
2^n-dimensional space appears only in ``dirac_encoding``, which exists to
verify the encoding identity Pi_{k-1} D Pi_k = B_k / sqrt(n) entrywise.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt

from .complexes import CliqueComplex, boundary_matrix
from .filters import FilterSpec, apply_filter_sv, build_inverse_poly, pseudoinverse_filter
from .ranking import SimplicialSignal, effective_condition_params, solve_scores

__all__ = [
    "QuantumSignalState",
    "FilterOutcome",
    "DiracEncoding",
    "CostReport",
    "PostselectionError",
    "CertificationError",
    "prepare_signal_state",
    "qtsp_apply",
    "quantum_hodgerank",
    "dirac_encoding",
    "cost_model",
]

POSTSELECT_FLOOR = 1e-14
DIRAC_MAX_QUBITS = 14
PUE_TOL = 1e-12


class PostselectionError(RuntimeError):
    """Filtered state has (numerically) vanished; postselection impossible."""

    def __init__(self, postselect_prob: float):
        super().__init__(
            f"filtered norm below {POSTSELECT_FLOOR}; postselection probability "
            f"{postselect_prob:.3e} signals a vanishing target component"
        )
        self.postselect_prob = postselect_prob


class CertificationError(RuntimeError):
    """Simulated output violated its certified distance bound."""


@dataclass(frozen=True)
class QuantumSignalState:
    """Unit-norm amplitude vector over the canonical k-simplex basis."""

    k: int
    amplitudes: npt.NDArray[np.float64] = field(repr=False)
    source_norm: float = 1.0

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=float)
        object.__setattr__(self, "amplitudes", amps)
        if abs(np.linalg.norm(amps) - 1.0) > 1e-12:
            raise ValueError("amplitudes must have unit norm")


def prepare_signal_state(signal: SimplicialSignal) -> QuantumSignalState:
    """Exact normalization stands in for the state-preparation oracle."""
    norm = signal.norm
    if norm == 0.0:
        raise ValueError("cannot prepare a state from the zero signal")
    return QuantumSignalState(k=signal.k, amplitudes=signal.values / norm, source_norm=norm)


@dataclass(frozen=True)
class FilterOutcome:
    """Filtered vector with postselection statistics and, for the
    pseudoinverse filter, the certified Theorem-style bounds."""

    filtered: npt.NDArray[np.float64] = field(repr=False)
    postselect_prob: float
    output_state: npt.NDArray[np.float64] | None = field(repr=False, default=None)
    N_star: float | None = None
    distance_bound: float | None = None
    prob_bounds: tuple[float, float] | None = None
    bounds_valid: bool = False
    oracle_distance: float | None = None
    kappa: float | None = None
    epsilon: float | None = None

    def to_dict(self) -> dict:
        return {
            "filtered": [float(x) for x in self.filtered],
            "postselect_prob": self.postselect_prob,
            "output_state": None
            if self.output_state is None
            else [float(x) for x in self.output_state],
            "N_star": self.N_star,
            "distance_bound": self.distance_bound,
            "prob_bounds": None if self.prob_bounds is None else list(self.prob_bounds),
            "bounds_valid": self.bounds_valid,
            "status": "ok" if self.bounds_valid else "bounds-invalid",
            "oracle_distance": self.oracle_distance,
            "kappa": self.kappa,
            "epsilon": self.epsilon,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _pseudoinverse_stats(
    complex: CliqueComplex,
    k: int,
    amplitudes: npt.NDArray[np.float64],
    kappa_sq: float,
    epsilon: float,
):
    """Exact N_* plus the postselection-probability interval and the
    output-distance bound implied by the operator approximation."""
    n = complex.n
    oracle_scores = solve_scores(complex, k, amplitudes)
    n_star = float(np.linalg.norm(oracle_scores))
    valid = n_star > epsilon
    if valid:
        bound = 2.0 * epsilon / (n_star - epsilon)
        lo = n * (n_star - epsilon) ** 2 / (4.0 * kappa_sq**2)
        hi = n * (n_star + epsilon) ** 2 / (4.0 * kappa_sq**2)
        prob_bounds = (lo, hi)
    else:
        bound = None
        prob_bounds = None
    return oracle_scores, n_star, bound, prob_bounds, valid


def qtsp_apply(
    spec: FilterSpec,
    complex: CliqueComplex,
    k: int,
    state: QuantumSignalState,
) -> FilterOutcome:
    """Apply the filter to the signal state and collect postselection
    statistics. The discarded branch carries the remaining weight, so
    its squared norm is 1 - postselect_prob by construction."""
    b_k = boundary_matrix(complex, k) if k >= 1 else None
    b_k1 = boundary_matrix(complex, k + 1) if k + 1 <= complex.max_dim else None
    filtered = apply_filter_sv(spec, b_k, b_k1, complex.n, state.amplitudes)
    fnorm = float(np.linalg.norm(filtered))
    prob = fnorm**2
    if fnorm < POSTSELECT_FLOOR:
        raise PostselectionError(prob)
    output = filtered / fnorm
    if spec.kind == "pseudoinverse" and spec.kappa is not None and spec.epsilon is not None:
        _, n_star, bound, prob_bounds, valid = _pseudoinverse_stats(
            complex, k, state.amplitudes, spec.kappa, spec.epsilon
        )
        return FilterOutcome(
            filtered=filtered,
            postselect_prob=prob,
            output_state=output,
            N_star=n_star,
            distance_bound=bound,
            prob_bounds=prob_bounds,
            bounds_valid=valid,
            kappa=math.sqrt(spec.kappa),
            epsilon=spec.epsilon,
        )
    return FilterOutcome(filtered=filtered, postselect_prob=prob, output_state=output)


def quantum_hodgerank(
    complex: CliqueComplex,
    k: int,
    signal: SimplicialSignal,
    epsilon: float,
    kappa: float | None = None,
) -> FilterOutcome:
    """End-to-end pipeline: build the inverse polynomial at the squared
    effective condition number, filter the prepared state, and check the
    output against the exact solver. Raises CertificationError if the
    certified distance bound is violated; degenerate inputs (vanishing
    target component) come back flagged rather than failing."""
    _, kap = effective_condition_params(complex, k, kappa)
    poly = build_inverse_poly(kap**2, epsilon)
    spec = pseudoinverse_filter(poly)
    state = prepare_signal_state(signal)
    oracle_scores, n_star, bound, prob_bounds, valid = _pseudoinverse_stats(
        complex, k, state.amplitudes, kap**2, epsilon
    )
    try:
        outcome = qtsp_apply(spec, complex, k, state)
    except PostselectionError as exc:
        warnings.warn(
            f"target component vanishes (N_* = {n_star:.3e}); bounds invalid",
            RuntimeWarning,
            stacklevel=2,
        )
        return FilterOutcome(
            filtered=np.zeros(complex.n_simplices(k - 1)),
            postselect_prob=exc.postselect_prob,
            output_state=None,
            N_star=n_star,
            bounds_valid=False,
            kappa=kap,
            epsilon=epsilon,
        )
    oracle_distance = None
    if n_star > 0:
        oracle_state = oracle_scores / n_star
        oracle_distance = float(np.linalg.norm(outcome.output_state - oracle_state))
    outcome = FilterOutcome(
        filtered=outcome.filtered,
        postselect_prob=outcome.postselect_prob,
        output_state=outcome.output_state,
        N_star=n_star,
        distance_bound=bound,
        prob_bounds=prob_bounds,
        bounds_valid=valid,
        oracle_distance=oracle_distance,
        kappa=kap,
        epsilon=epsilon,
    )
    if not valid:
        warnings.warn(
            f"epsilon={epsilon} is not below N_* = {n_star:.3e}; "
            "distance/probability bounds are not certified",
            RuntimeWarning,
            stacklevel=2,
        )
        return outcome
    if oracle_distance is not None and oracle_distance > bound:
        raise CertificationError(
            f"output state distance {oracle_distance:.3e} exceeds certified bound {bound:.3e}"
        )
    return outcome


def _popcounts(values: npt.NDArray[np.int64]) -> npt.NDArray[np.int64]:
    counts = np.zeros_like(values)
    v = values.copy()
    while np.any(v):
        counts += v & 1
        v >>= 1
    return counts


@dataclass(frozen=True)
class DiracEncoding:
    """Dense symmetric single-flip operator on n qubits together with the
    diagonal simplex-identifying projectors of the complex."""

    n: int
    D: npt.NDArray[np.float64] = field(repr=False)
    projectors: dict[int, npt.NDArray[np.bool_]] = field(repr=False)
    simplex_codes: dict[int, npt.NDArray[np.int64]] = field(repr=False)

    def restricted_block(self, k: int) -> npt.NDArray[np.float64]:
        """Pi_{k-1} D Pi_k restricted to the canonical simplex bases."""
        rows = self.simplex_codes[k - 1]
        cols = self.simplex_codes[k]
        return self.D[np.ix_(rows, cols)]


def dirac_encoding(
    complex: CliqueComplex, _flip_sign_vertex: int | None = None
) -> DiracEncoding:
    """Build the fermionic single-flip operator densely and verify the
    encoding identity against the sparse boundary matrices.

    Flipping qubit i carries the sign (-1)^(number of occupied qubits
    below i); this is the convention that reproduces the alternating
    boundary signs under increasing-vertex orientation. The
    ``_flip_sign_vertex`` hook deliberately corrupts one vertex's sign so
    the verification can be exercised as a mutation test.
    """
    n = complex.n
    if n > DIRAC_MAX_QUBITS:
        raise ValueError(f"dense encoding limited to n <= {DIRAC_MAX_QUBITS}, got {n}")
    dim = 1 << n
    states = np.arange(dim, dtype=np.int64)
    d = np.zeros((dim, dim))
    scale = 1.0 / math.sqrt(n)
    for i in range(n):
        flipped = states ^ (1 << i)
        signs = np.where(_popcounts(states & ((1 << i) - 1)) % 2 == 0, 1.0, -1.0)
        if i == _flip_sign_vertex:
            signs = -signs
        d[flipped, states] += signs * scale

    projectors: dict[int, npt.NDArray[np.bool_]] = {}
    codes: dict[int, npt.NDArray[np.int64]] = {}
    for k in range(complex.max_dim + 1):
        mask = np.zeros(dim, dtype=bool)
        level_codes = np.array(
            [sum(1 << v for v in s.vertices) for s in complex.simplices[k]],
            dtype=np.int64,
        )
        mask[level_codes] = True
        projectors[k] = mask
        codes[k] = level_codes

    enc = DiracEncoding(n=n, D=d, projectors=projectors, simplex_codes=codes)
    for k in range(1, complex.max_dim + 1):
        if complex.n_simplices(k) == 0:
            continue
        expected = boundary_matrix(complex, k).toarray() * scale
        err = np.max(np.abs(enc.restricted_block(k) - expected))
        if err > PUE_TOL:
            raise RuntimeError(
                f"encoding identity violated at k={k}: max entry error {err:.3e} "
                "(sign-convention bug)"
            )
    return enc


@dataclass(frozen=True)
class CostReport:
    """Big-O cost surrogates with unit constants; not gate counts."""

    depth: float
    amplification_rounds: int
    total_depth: float
    ancilla_qubits: int

    def to_dict(self) -> dict:
        return {
            "depth": self.depth,
            "amplification_rounds": self.amplification_rounds,
            "total_depth": self.total_depth,
            "ancilla_qubits": self.ancilla_qubits,
            "note": "big-O surrogates with unit constants",
        }


def cost_model(n: int, degree: int, kappa: float, gamma_star: float) -> CostReport:
    """Symbolic depth degree*n*log2(n), amplification round count
    ceil(kappa^2/(sqrt(n)*gamma_star)), and the n+6 ancilla budget."""
    if n < 1 or degree < 0 or kappa <= 0 or gamma_star <= 0:
        raise ValueError("cost model needs n >= 1, degree >= 0, kappa > 0, gamma_star > 0")
    depth = degree * n * math.log2(n) if n > 1 else 0.0
    rounds = math.ceil(kappa**2 / (math.sqrt(n) * gamma_star))
    return CostReport(
        depth=depth,
        amplification_rounds=rounds,
        total_depth=depth * rounds,
        ancilla_qubits=n + 6,
    )
