"""Command-line front end: rank, qsim, estimate, verify.

All randomness flows from one master seed recorded in every output, and
JSON is emitted with sorted keys so repeated runs are byte-identical.
A config file of key=value lines can preload any flag; explicit flags win.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from numpy.polynomial import chebyshev as C

from .complexes import (
    boundary_matrix,
    build_clique_complex,
    complex_summary_json,
    read_edge_list,
)
from .filters import build_inverse_poly, pseudoinverse_filter
from .fixtures import path_graph, random_er_graph, random_signal
from .qtsp import CertificationError, cost_model, dirac_encoding, quantum_hodgerank
from .ranking import (
    SimplicialSignal,
    consistency_measures,
    effective_condition_params,
    hodgerank_solve,
    read_pairwise_csv,
    assemble_edge_signal,
    solve_scores,
)
from .sampling import (
    EstimatorConfig,
    estimate_consistency,
    relative_ranking,
    tomography_ranking,
)

__all__ = ["main"]


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("HODGEQ_THREADS", "1")))
    except ValueError:
        return 1


def _pool_map(fn, items):
    items = list(items)
    w = _workers()
    if w <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=w) as ex:
        return list(ex.map(fn, items))  # ordered regardless of completion


def _read_config(path) -> dict[str, str]:
    conf = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, value = line.split("=", 1)
            conf[key.strip().replace("-", "_")] = value.strip()
    return conf


_CONFIG_TYPES = {
    "k": int,
    "epsilon": float,
    "delta": float,
    "kappa": float,
    "gamma_g": float,
    "seed": int,
    "n": int,
    "trials": int,
    "pairwise": str,
    "edges": str,
    "signal": str,
    "out": str,
    "estimator": str,
    "mode": str,
    "subset": str,
    "sweep_epsilons": str,
}


def _merge_config(args: argparse.Namespace) -> argparse.Namespace:
    if getattr(args, "config", None):
        conf = _read_config(args.config)
        for key, raw in conf.items():
            if key not in _CONFIG_TYPES:
                raise ValueError(f"unknown config key {key!r}")
            if getattr(args, key, None) is None:
                setattr(args, key, _CONFIG_TYPES[key](raw))
    return args


def _default(args, name, value):
    if getattr(args, name, None) is None:
        setattr(args, name, value)


def _read_signal_file(path) -> list[float]:
    values = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                values.append(float(line))
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: not a number: {line!r}") from exc
    if not values:
        raise ValueError(f"{path}: empty signal file")
    return values


def _load_problem(args):
    """Build (complex, k, signal) from either a pairwise CSV or an
    edge-list plus signal-vector file."""
    k = args.k
    if args.pairwise:
        if k != 1:
            raise ValueError("pairwise CSV input implies k=1")
        data = read_pairwise_csv(args.pairwise)
        graph, signal = assemble_edge_signal(data)
    elif args.edges:
        graph = read_edge_list(args.edges)
        if not args.signal:
            raise ValueError("edge-list input needs --signal")
        values = _read_signal_file(args.signal)
        signal = None
    else:
        raise ValueError("need --pairwise or --edges input")
    max_dim = min(k + 1, graph.n - 1)
    complex = build_clique_complex(graph, max_dim)
    if signal is None:
        n_k = complex.n_simplices(k)
        if len(values) != n_k:
            raise ValueError(
                f"signal length {len(values)} != number of {k}-simplices {n_k}"
            )
        signal = SimplicialSignal(k=k, values=np.asarray(values))
    return complex, k, signal


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        print(text)


def _parse_epsilons(spec: str) -> list[float]:
    return [float(tok) for tok in spec.split(",") if tok.strip()]


def cmd_rank(args) -> int:
    _default(args, "k", 1)
    _default(args, "seed", 0)
    complex, k, signal = _load_problem(args)
    result = hodgerank_solve(complex, k, signal)
    payload = {
        "command": "rank",
        "seed": args.seed,
        "k": k,
        "complex": json.loads(complex_summary_json(complex)),
        **json.loads(result.to_json()),
    }
    _emit(json.dumps(payload, sort_keys=True), args.out)
    print(f"# top alternatives (R={result.consistency:.4f}, R_C={result.local_inconsistency:.4f})")
    print(f"{'rank':>4}  {'simplex':>7}  {'score':>12}")
    for pos, idx in enumerate(result.ranking[:10], start=1):
        print(f"{pos:>4}  {idx:>7}  {result.scores.values[idx]:>12.6f}")
    return 0


def _qsim_row(complex, k, signal, epsilon, kappa):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        outcome = quantum_hodgerank(complex, k, signal, epsilon, kappa=kappa)
    degree = 2 * build_inverse_poly(outcome.kappa**2, epsilon).degree + 1
    return outcome, degree


def cmd_qsim(args) -> int:
    _default(args, "k", 1)
    _default(args, "seed", 0)
    _default(args, "epsilon", 1e-3)
    complex, k, signal = _load_problem(args)

    if args.sweep_epsilons:
        epsilons = _parse_epsilons(args.sweep_epsilons)
        rows = _pool_map(
            lambda eps: _qsim_row(complex, k, signal, eps, args.kappa), epsilons
        )
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(
            ["n", "k", "kappa", "epsilon", "degree", "N_star", "prob", "distance", "bound"]
        )
        for eps, (outcome, degree) in zip(epsilons, rows):
            writer.writerow(
                [
                    complex.n,
                    k,
                    f"{outcome.kappa:.12g}",
                    f"{eps:.12g}",
                    degree,
                    f"{outcome.N_star:.12g}",
                    f"{outcome.postselect_prob:.12g}",
                    "" if outcome.oracle_distance is None else f"{outcome.oracle_distance:.12g}",
                    "" if outcome.distance_bound is None else f"{outcome.distance_bound:.12g}",
                ]
            )
        _emit(buf.getvalue(), args.out)
        return 0

    outcome, degree = _qsim_row(complex, k, signal, args.epsilon, args.kappa)
    gamma = args.gamma_g if args.gamma_g is not None else 0.1
    payload = {
        "command": "qsim",
        "seed": args.seed,
        "k": k,
        "degree": degree,
        "complex": json.loads(complex_summary_json(complex)),
        "cost": cost_model(complex.n, degree, outcome.kappa, gamma).to_dict(),
        **outcome.to_dict(),
    }
    _emit(json.dumps(payload, sort_keys=True), args.out)
    if outcome.bounds_valid and outcome.oracle_distance > outcome.distance_bound:
        return 1
    return 0


_ESTIMATORS = ("consistency-g", "consistency-c", "relative", "tomography")


def _run_estimator(name, complex, k, signal, config, subset):
    if name == "consistency-g":
        return estimate_consistency(complex, k, signal, "G", config)
    if name == "consistency-c":
        return estimate_consistency(complex, k, signal, "C", config)
    if name == "relative":
        if subset is None:
            subset = list(range(complex.n_simplices(k - 1)))
        return relative_ranking(complex, k, signal, subset, config)
    if name == "tomography":
        return tomography_ranking(complex, k, signal, config)
    raise ValueError(f"unknown estimator {name!r}")


def _estimate_error(report) -> float:
    if isinstance(report.estimate, float):
        return abs(report.details.get("estimate_squared", report.estimate) - report.details.get("exact_squared", report.exact))
    return float(report.details["max_error"])


def cmd_estimate(args) -> int:
    _default(args, "k", 1)
    _default(args, "seed", 0)
    _default(args, "epsilon", 0.05)
    _default(args, "delta", 0.05)
    _default(args, "mode", "hadamard_sampling")
    _default(args, "estimator", "consistency-g")
    if args.estimator not in _ESTIMATORS:
        raise ValueError(f"--estimator must be one of {', '.join(_ESTIMATORS)}")
    complex, k, signal = _load_problem(args)
    subset = None
    if args.subset:
        subset = [int(tok) for tok in args.subset.split(",") if tok.strip()]

    if args.sweep_epsilons:
        epsilons = _parse_epsilons(args.sweep_epsilons)

        def run(eps):
            config = EstimatorConfig(
                epsilon=eps, delta=args.delta, seed=args.seed, mode=args.mode
            )
            return _run_estimator(args.estimator, complex, k, signal, config, subset)

        reports = _pool_map(run, epsilons)
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["estimator", "epsilon", "delta", "shots", "error", "pass"])
        for eps, report in zip(epsilons, reports):
            writer.writerow(
                [
                    args.estimator,
                    f"{eps:.12g}",
                    f"{args.delta:.12g}",
                    report.shots_used,
                    f"{_estimate_error(report):.12g}",
                    report.within_tolerance,
                ]
            )
        _emit(buf.getvalue(), args.out)
        return 0

    config = EstimatorConfig(
        epsilon=args.epsilon, delta=args.delta, seed=args.seed, mode=args.mode
    )
    report = _run_estimator(args.estimator, complex, k, signal, config, subset)
    payload = {
        "command": "estimate",
        "estimator": args.estimator,
        "seed": args.seed,
        "k": k,
        **report.to_dict(),
    }
    _emit(json.dumps(payload, sort_keys=True), args.out)
    return 0


def _check_boundary_squared(n_max: int, seed: int):
    worst = 0
    for trial in range(12):
        n = 4 + trial % max(1, n_max - 3)
        g = random_er_graph(n, [0.3, 0.5, 0.8][trial % 3], seed + trial)
        cx = build_clique_complex(g, min(3, n - 1))
        for k in range(2, cx.max_dim + 1):
            if cx.n_simplices(k) == 0:
                continue
            prod = boundary_matrix(cx, k - 1).tocsr() @ boundary_matrix(cx, k).tocsr()
            if prod.nnz:
                worst = max(worst, int(abs(prod).max()))
    return worst == 0, f"max |B_(k-1) B_k| = {worst}"


def _check_orthogonality(seed: int):
    from .complexes import hodge_projectors

    worst = 0.0
    for trial in range(10):
        g = random_er_graph(7, 0.5, seed + 100 + trial)
        cx = build_clique_complex(g, 2)
        if cx.n_simplices(1) == 0:
            continue
        pg, pc, ph = hodge_projectors(cx, 1)
        rng = np.random.default_rng(seed + trial)
        s = rng.standard_normal(cx.n_simplices(1))
        total = (
            np.linalg.norm(pg @ s) ** 2
            + np.linalg.norm(pc @ s) ** 2
            + np.linalg.norm(ph @ s) ** 2
        )
        worst = max(worst, abs(total - np.linalg.norm(s) ** 2) / np.linalg.norm(s) ** 2)
    return worst <= 1e-10, f"max relative norm defect = {worst:.2e}"


def _check_spectral_bound(seed: int):
    worst = -np.inf
    for trial in range(10):
        g = random_er_graph(8, 0.6, seed + 200 + trial)
        cx = build_clique_complex(g, min(3, g.n - 1))
        for k in range(1, cx.max_dim + 1):
            b = boundary_matrix(cx, k).toarray()
            if b.size == 0:
                continue
            worst = max(worst, np.linalg.svd(b, compute_uv=False).max() - np.sqrt(g.n))
    return worst <= 1e-9, f"max (sigma_max - sqrt(n)) = {worst:.2e}"


def _check_polynomials(_seed: int):
    worst = 0.0
    for kappa in (2.0, 4.0, 8.0):
        for eps in (1e-2, 1e-3):
            g = build_inverse_poly(kappa, eps)
            xs = np.linspace(1.0 / kappa, 1.0, 10001)
            dev = np.max(np.abs(1.0 / xs - 2.0 * kappa * g(xs))) / eps
            sup = np.max(np.abs(g(np.linspace(-1, 1, 20001))))
            worst = max(worst, dev, sup)
    return worst <= 1.0, f"worst normalized certificate value = {worst:.4f}"


def _check_theorem1(seed: int):
    worst = 0.0
    for trial in range(6):
        g = random_er_graph(6, 0.7, seed + 300 + trial)
        cx = build_clique_complex(g, 2)
        if cx.n_simplices(1) < 2:
            continue
        b = boundary_matrix(cx, 1).toarray()
        _, kap = effective_condition_params(cx, 1)
        for eps in (1e-2,):
            poly = build_inverse_poly(kap**2, eps)
            spec = pseudoinverse_filter(poly)
            target = np.linalg.pinv(b @ b.T, rcond=1e-10) @ b
            u, s, vt = np.linalg.svd(b / np.sqrt(g.n), full_matrices=False)
            approx = (2 * kap**2 / np.sqrt(g.n)) * (
                u @ np.diag(C.chebval(s, spec.p_coeffs)) @ vt
            )
            worst = max(worst, np.linalg.norm(target - approx, 2) / eps)
    return worst <= 1.0, f"worst |op error|/epsilon = {worst:.4f}"


def _check_end_to_end(seed: int):
    count = 0
    for trial in range(5):
        g = random_er_graph(6, 0.7, seed + 400 + trial)
        cx = build_clique_complex(g, 2)
        if cx.n_simplices(1) < 2:
            continue
        sig = random_signal(1, cx.n_simplices(1), seed + 500 + trial)
        r, _ = consistency_measures(cx, 1, sig)
        if r < 0.1:
            continue
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", RuntimeWarning)
                outcome = quantum_hodgerank(cx, 1, sig, 1e-3)
        except CertificationError as exc:
            return False, str(exc)
        if outcome.bounds_valid:
            lo, hi = outcome.prob_bounds
            if not (lo - 1e-12 <= outcome.postselect_prob <= hi + 1e-12):
                return False, f"postselection probability outside [{lo:.3e}, {hi:.3e}]"
            perp = 1.0 - outcome.postselect_prob
            if abs(outcome.postselect_prob + perp - 1.0) > 1e-12:
                return False, "garbage accounting defect"
        count += 1
    return count > 0, f"{count} end-to-end trials certified"


def _check_pue(seed: int, n_max: int, inject: bool):
    graphs = [path_graph(3), random_er_graph(min(6, n_max), 0.6, seed + 600)]
    if n_max >= 8:
        graphs.append(random_er_graph(min(n_max, 12), 0.4, seed + 601))
    for g in graphs:
        cx = build_clique_complex(g, min(2, g.n - 1))
        try:
            dirac_encoding(cx, _flip_sign_vertex=0 if inject else None)
        except RuntimeError as exc:
            return False, str(exc)
    return True, f"encoding identity exact on {len(graphs)} complexes"


def cmd_verify(args) -> int:
    _default(args, "seed", 0)
    _default(args, "n", 10)
    inject = bool(getattr(args, "inject_sign_flip", False))
    checks = [
        ("boundary_squared_zero", lambda: _check_boundary_squared(args.n, args.seed)),
        ("hodge_orthogonality", lambda: _check_orthogonality(args.seed)),
        ("spectral_bound", lambda: _check_spectral_bound(args.seed)),
        ("polynomial_certificates", lambda: _check_polynomials(args.seed)),
        ("theorem1_operator_bound", lambda: _check_theorem1(args.seed)),
        ("end_to_end_state_bound", lambda: _check_end_to_end(args.seed)),
        ("pue_identity", lambda: _check_pue(args.seed, args.n, inject)),
    ]
    results = _pool_map(lambda item: (item[0], *item[1]()), checks)
    failures = 0
    print(f"{'check':<28} {'status':<6} detail")
    for name, ok, detail in results:
        print(f"{name:<28} {'PASS' if ok else 'FAIL':<6} {detail}")
        failures += 0 if ok else 1
    return 0 if failures == 0 else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hodgeq",
        description="HodgeRank on clique complexes and its simulated quantum pipeline",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="key=value config file; flags override it")
        p.add_argument("--pairwise", help="pairwise CSV (voter,i,j,value)")
        p.add_argument("--edges", help="edge-list text file")
        p.add_argument("--signal", help="signal vector file, one value per simplex")
        p.add_argument("--k", type=int, help="signal dimension (default 1)")
        p.add_argument("--epsilon", type=float)
        p.add_argument("--delta", type=float)
        p.add_argument("--kappa", type=float, help="condition-number override")
        p.add_argument("--gamma-g", dest="gamma_g", type=float, help="consistency floor (default 0.1)")
        p.add_argument("--seed", type=int)
        p.add_argument("--out", help="output path (default stdout)")
        p.add_argument("--sweep-epsilons", dest="sweep_epsilons", help="comma-separated epsilon grid")

    p_rank = sub.add_parser("rank", help="classical HodgeRank")
    common(p_rank)
    p_rank.set_defaults(func=cmd_rank)

    p_qsim = sub.add_parser("qsim", help="simulated quantum pipeline")
    common(p_qsim)
    p_qsim.set_defaults(func=cmd_qsim)

    p_est = sub.add_parser("estimate", help="sampling-based readout estimators")
    common(p_est)
    p_est.add_argument("--estimator", choices=_ESTIMATORS)
    p_est.add_argument("--mode", choices=["hadamard_sampling", "amplitude_estimation_model"])
    p_est.add_argument("--subset", help="comma-separated (k-1)-simplex indices")
    p_est.set_defaults(func=cmd_estimate)

    p_ver = sub.add_parser("verify", help="run the property suite")
    common(p_ver)
    p_ver.add_argument("--n", type=int, help="max random-graph size (default 10)")
    p_ver.add_argument(
        "--inject-sign-flip",
        action="store_true",
        help="mutation hook: corrupt one encoding sign; the identity check must fail",
    )
    p_ver.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        args = _merge_config(args)
        return args.func(args)
    except CertificationError as exc:
        print(f"certification failure: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
