"""Command-line surface for reproducible detection experiments.

Commands
--------
detect    score a graph with one of the five methods, write scores CSV
generate  draw a synthetic graph (logistic or block model) with ground truth
evaluate  compare score files against each other / ground truth, emit JSON
reorder   emit the adjacency coordinates permuted by descending score
profile   emit the edge-retention profile of a score vector

Every command writes a JSON manifest next to its outputs recording the
full parameter set, input digests, library version, and wall time;
re-running a command with the same inputs and parameters reproduces the
output files byte for byte.  Exit codes: 0 success, 2 validation error,
3 non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .baselines import (
    AnnealSchedule,
    degree_scores,
    eigenvector_centrality,
    h_index_coreness,
    simulated_annealing_scores,
)
from .graph import (
    Graph,
    GraphFormatError,
    NotConnectedError,
    is_connected,
    largest_component,
    load_edge_list,
    load_matrix_market,
    write_edge_list,
)
from .kernel import KernelParams
from .metrics import (
    core_periphery_profile,
    kendall_tau,
    normalized_quality,
    rank_from_scores,
    recovery_fraction,
)
from .models import (
    BlockSetting,
    LogisticParams,
    SbmParams,
    block_model_graph,
    logistic_graph,
    ordering_log_likelihood,
)
from .nsm import NsmParams, apriori_error_bound, nsm_detect

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NO_CONVERGENCE = 3

RANK_NOTE = (
    "CSV ranks are descending-coreness (rank 1 = most core); "
    "ascending ranks (1 = most peripheral) are used internally"
)


class _CliError(Exception):
    def __init__(self, message, code=EXIT_VALIDATION):
        super().__init__(message)
        self.code = code


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _load_graph(path: Path) -> Graph:
    if not path.exists():
        raise _CliError(f"no such file: {path}")
    head = path.read_text(encoding="utf-8", errors="replace").lstrip()[:64]
    if path.suffix == ".mtx" or head.startswith("%%MatrixMarket"):
        return load_matrix_market(path)
    return load_edge_list(path)


def _load_scores(path: Path, graph: Graph) -> np.ndarray:
    """Read a label,score CSV and align it to the graph's node order."""
    if not path.exists():
        raise _CliError(f"no such file: {path}")
    values: dict[str, float] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.reader(fh):
            if not row:
                continue
            try:
                score = float(row[1])
            except (ValueError, IndexError):
                if not values:
                    continue  # header row
                raise _CliError(f"{path}: malformed row {row!r}") from None
            values[row[0]] = score
    if set(values) != set(graph.labels):
        raise _CliError(f"{path}: node labels do not match the graph")
    return np.array([values[lab] for lab in graph.labels])


def _descending_ranks(scores: np.ndarray) -> np.ndarray:
    order = np.lexsort((np.arange(scores.size), -scores))
    ranks = np.empty(scores.size, dtype=np.int64)
    ranks[order] = np.arange(1, scores.size + 1)
    return ranks


def _write_scores_csv(path: Path, graph: Graph, scores: np.ndarray) -> None:
    ranks = _descending_ranks(scores)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        out = csv.writer(fh)
        out.writerow(["label", "score", "rank"])
        for lab, s, r in zip(graph.labels, scores, ranks):
            out.writerow([lab, f"{s:.17g}", int(r)])


def _write_manifest(prefix: Path, command, params, inputs, outputs, started, extra=None):
    manifest = {
        "command": command,
        "parameters": params,
        "seed": params.get("seed"),
        "version": __version__,
        "inputs": {str(p): _sha256(Path(p)) for p in inputs},
        "outputs": [str(p) for p in outputs],
        "wall_time_s": round(time.perf_counter() - started, 6),
    }
    if extra:
        manifest.update(extra)
    path = prefix.with_suffix(prefix.suffix + ".manifest.json")
    path.write_text(json.dumps(manifest, indent=2, default=str) + "\n", encoding="utf-8")


def _params_dict(args, skip=("func", "command")) -> dict:
    return {
        k: (str(v) if isinstance(v, Path) else v)
        for k, v in vars(args).items()
        if k not in skip
    }


def _cmd_detect(args) -> int:
    started = time.perf_counter()
    path = Path(args.graph)
    graph = _load_graph(path)

    extra: dict = {"rank_convention": RANK_NOTE}
    if args.largest_component:
        before = graph.node_count
        graph, _ = largest_component(graph)
        extra["largest_component"] = {"kept": graph.node_count, "dropped": before - graph.node_count}
    if not is_connected(graph):
        raise _CliError("graph is disconnected; pass --largest-component to restrict")

    exit_code = EXIT_OK
    if args.method == "nsm":
        params = NsmParams(
            kernel=KernelParams(alpha=args.alpha, p=args.p),
            tolerance=args.tol,
            max_iterations=args.max_iter,
        )
        result = nsm_detect(graph, params)
        scores = result.core_score
        bounds = [
            apriori_error_bound(result.gamma0, result.contraction_ratio, args.p, args.alpha, k)
            for k in range(result.iterations)
        ]
        extra.update(
            eigenvalue=result.eigenvalue,
            iterations=result.iterations,
            converged=result.converged,
            gamma0=result.gamma0,
            contraction_ratio=result.contraction_ratio,
            residual_history=[float(r) for r in result.residual_history],
            apriori_step_bounds=[float(b[0]) for b in bounds],
            apriori_distance_bounds=[float(b[1]) for b in bounds],
        )
        if not result.converged:
            exit_code = EXIT_NO_CONVERGENCE
    elif args.method == "degree":
        scores = degree_scores(graph)
    elif args.method == "eig":
        result = eigenvector_centrality(graph, tolerance=args.tol, max_iterations=args.max_iter)
        scores = result.scores / result.scores.max()
        extra.update(
            eigenvalue=result.eigenvalue,
            iterations=result.iterations,
            converged=result.converged,
        )
        if not result.converged:
            exit_code = EXIT_NO_CONVERGENCE
    elif args.method == "coreness":
        raw = h_index_coreness(graph).astype(np.float64)
        scores = raw / raw.max() if raw.max() > 0 else raw
    elif args.method == "simann":
        schedule = AnnealSchedule(
            initial_temperature=args.t0,
            cooling_factor=args.cooling,
            sweeps_per_temperature=args.sweeps,
            min_temperature=args.tmin,
            seed=args.seed,
        )
        scores = simulated_annealing_scores(
            graph, lattice_h=args.lattice, schedule=schedule, threads=args.threads
        )
    else:  # pragma: no cover - argparse restricts choices
        raise _CliError(f"unknown method: {args.method}")

    prefix = Path(args.out) if args.out else path.with_suffix(f".{args.method}")
    out_csv = prefix.with_suffix(prefix.suffix + ".csv")
    _write_scores_csv(out_csv, graph, scores)
    _write_manifest(prefix, "detect", _params_dict(args), [path], [out_csv], started, extra)
    return exit_code


def _cmd_generate(args) -> int:
    started = time.perf_counter()
    prefix = Path(args.out) if args.out else Path(f"{args.model}-{args.seed}")
    edges_path = prefix.with_suffix(prefix.suffix + ".edges")
    truth_path = prefix.with_suffix(prefix.suffix + ".truth.csv")

    if args.model == "lcp":
        sample = logistic_graph(LogisticParams(n=args.n, s=args.s, t=args.t, seed=args.seed))
        truth_rows = [
            (lab, int(rank)) for lab, rank in zip(sample.graph.labels, sample.true_ranks)
        ]
        truth_header = ["label", "rank"]
        extra = {"connected": sample.connected, "truth_convention": "rank n = most core"}
    else:
        sample = block_model_graph(
            SbmParams(
                n=args.n,
                delta=args.delta,
                p_base=args.p,
                k=args.k,
                setting=BlockSetting(args.setting),
                seed=args.seed,
            )
        )
        in_core = np.zeros(sample.graph.node_count, dtype=bool)
        in_core[sample.core_nodes] = True
        truth_rows = [(lab, int(flag)) for lab, flag in zip(sample.graph.labels, in_core)]
        truth_header = ["label", "core"]
        extra = {"connected": sample.connected, "truth_convention": "core flag 1 = planted core"}

    write_edge_list(sample.graph, edges_path)
    with open(truth_path, "w", newline="", encoding="utf-8") as fh:
        out = csv.writer(fh)
        out.writerow(truth_header)
        out.writerows(truth_rows)
    _write_manifest(
        prefix, "generate", _params_dict(args), [], [edges_path, truth_path], started, extra
    )
    return EXIT_OK


def _cmd_evaluate(args) -> int:
    started = time.perf_counter()
    path = Path(args.graph)
    graph = _load_graph(path)
    scores = _load_scores(Path(args.scores), graph)
    inputs = [path, Path(args.scores)]

    report: dict = {
        "normalized_quality_scores": normalized_quality(graph, scores),
        "normalized_quality_ranks": normalized_quality(
            graph, rank_from_scores(scores).astype(float)
        ),
    }
    if is_connected(graph) and graph.node_count >= 2:
        gamma = core_periphery_profile(graph, scores)
        report["profile_area"] = float(gamma.sum() / gamma.size)

    if args.lcp_s is not None:
        t = args.lcp_t if args.lcp_t is not None else 2.0 / 3.0
        report["log_likelihood"] = ordering_log_likelihood(
            graph, rank_from_scores(scores), args.lcp_s, t
        )

    if args.scores2:
        other = _load_scores(Path(args.scores2), graph)
        inputs.append(Path(args.scores2))
        report["kendall_tau_b"] = kendall_tau(scores, other)

    if args.truth:
        truth_path = Path(args.truth)
        inputs.append(truth_path)
        truth = _load_scores(truth_path, graph)
        distinct = set(np.unique(truth))
        if distinct <= {0.0, 1.0}:
            core_size = int(truth.sum())
            core_nodes = np.flatnonzero(truth > 0)
            report["recovery_fraction"] = recovery_fraction(scores, core_nodes, core_size)
        else:
            report["kendall_tau_truth"] = kendall_tau(scores, truth)

    prefix = Path(args.out) if args.out else Path(args.scores).with_suffix(".metrics")
    out_json = prefix.with_suffix(prefix.suffix + ".json")
    out_json.write_text(json.dumps(report, indent=2) + "\n", encoding="utf-8")
    print(json.dumps(report, indent=2))
    _write_manifest(prefix, "evaluate", _params_dict(args), inputs, [out_json], started)
    return EXIT_OK


def _cmd_reorder(args) -> int:
    started = time.perf_counter()
    path = Path(args.graph)
    graph = _load_graph(path)
    scores = _load_scores(Path(args.scores), graph)

    # position[i] = 1-based row/column of node i after descending-score reordering
    order = np.lexsort((np.arange(graph.node_count), -scores))
    position = np.empty(graph.node_count, dtype=np.int64)
    position[order] = np.arange(1, graph.node_count + 1)

    prefix = Path(args.out) if args.out else Path(args.scores).with_suffix(".reordered")
    out_csv = prefix.with_suffix(prefix.suffix + ".csv")
    i = graph.edge_index[:, 0]
    j = graph.edge_index[:, 1]
    rows = np.concatenate([position[i], position[j]])
    cols = np.concatenate([position[j], position[i]])
    weights = np.concatenate([graph.edge_weight, graph.edge_weight])
    order2 = np.lexsort((cols, rows))
    with open(out_csv, "w", newline="", encoding="utf-8") as fh:
        out = csv.writer(fh)
        out.writerow(["row", "col", "weight"])
        for r, c, w in zip(rows[order2], cols[order2], weights[order2]):
            out.writerow([int(r), int(c), f"{w:.17g}"])
    _write_manifest(prefix, "reorder", _params_dict(args), [path, Path(args.scores)], [out_csv], started)
    return EXIT_OK


def _cmd_profile(args) -> int:
    started = time.perf_counter()
    path = Path(args.graph)
    graph = _load_graph(path)
    scores = _load_scores(Path(args.scores), graph)
    gamma = core_periphery_profile(graph, scores)

    prefix = Path(args.out) if args.out else Path(args.scores).with_suffix(".profile")
    out_csv = prefix.with_suffix(prefix.suffix + ".csv")
    with open(out_csv, "w", newline="", encoding="utf-8") as fh:
        out = csv.writer(fh)
        out.writerow(["k", "gamma"])
        for k, g in enumerate(gamma, start=1):
            out.writerow([k, f"{g:.17g}"])
    _write_manifest(prefix, "profile", _params_dict(args), [path, Path(args.scores)], [out_csv], started)
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cpdetect",
        description="Core-periphery detection, synthetic benchmarks, and comparison metrics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    det = sub.add_parser("detect", help="score a graph with one detection method")
    det.add_argument("graph", help="edge list or Matrix Market file (duplicate edges are summed)")
    det.add_argument("--method", required=True, choices=["nsm", "degree", "eig", "coreness", "simann"])
    det.add_argument("--alpha", type=float, default=10.0, help="smoothing exponent (nsm)")
    det.add_argument("--p", type=float, default=20.0, help="constraint norm (nsm)")
    det.add_argument("--tol", type=float, default=1e-8, help="stopping tolerance (nsm, eig)")
    det.add_argument("--max-iter", type=int, default=10_000, help="iteration budget (nsm, eig)")
    det.add_argument("--lattice", type=int, default=50, help="parameter lattice resolution (simann)")
    det.add_argument("--seed", type=int, default=0, help="RNG seed (simann)")
    det.add_argument("--sweeps", type=int, default=None, help="proposals per temperature (simann)")
    det.add_argument("--cooling", type=float, default=0.95, help="cooling factor (simann)")
    det.add_argument("--t0", type=float, default=None, help="initial temperature (simann)")
    det.add_argument("--tmin", type=float, default=None, help="final temperature (simann)")
    det.add_argument("--largest-component", action="store_true", help="restrict to the largest component")
    det.add_argument("--threads", type=int, default=1, help="worker cap (simann lattice)")
    det.add_argument("--out", default=None, help="output prefix")
    det.set_defaults(func=_cmd_detect)

    gen = sub.add_parser("generate", help="draw a synthetic benchmark graph")
    gen.add_argument("model", choices=["lcp", "sbm"])
    gen.add_argument("--n", type=int, default=100)
    gen.add_argument("--s", type=float, default=7.0, help="steepness (lcp)")
    gen.add_argument("--t", type=float, default=0.667, help="threshold (lcp)")
    gen.add_argument("--delta", type=float, default=0.5, help="core fraction (sbm)")
    gen.add_argument("--p", type=float, default=0.25, help="base probability (sbm)")
    gen.add_argument("--k", type=float, default=1.0, help="amplification (sbm)")
    gen.add_argument("--setting", choices=["either", "both"], default="either")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", default=None, help="output prefix")
    gen.set_defaults(func=_cmd_generate)

    ev = sub.add_parser("evaluate", help="compute comparison metrics for score files")
    ev.add_argument("graph")
    ev.add_argument("scores")
    ev.add_argument("--scores2", default=None, help="second score file for rank correlation")
    ev.add_argument("--truth", default=None, help="ground-truth CSV (core flags or ranks)")
    ev.add_argument("--lcp-s", type=float, default=None, help="steepness for log-likelihood")
    ev.add_argument("--lcp-t", type=float, default=None, help="threshold for log-likelihood")
    ev.add_argument("--out", default=None, help="output prefix")
    ev.set_defaults(func=_cmd_evaluate)

    re_ = sub.add_parser("reorder", help="adjacency coordinates permuted by descending score")
    re_.add_argument("graph")
    re_.add_argument("scores")
    re_.add_argument("--out", default=None)
    re_.set_defaults(func=_cmd_reorder)

    pr = sub.add_parser("profile", help="edge-retention profile of a score vector")
    pr.add_argument("graph")
    pr.add_argument("scores")
    pr.add_argument("--out", default=None)
    pr.set_defaults(func=_cmd_profile)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (GraphFormatError, NotConnectedError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
