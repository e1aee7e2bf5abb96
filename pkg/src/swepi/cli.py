"""Batch command-line interface.

Subcommands: generate, stats, tune-apl, tune-cc, tune-joint, simulate,
sweep. Every command is a pure function of its input files and flags:
identical invocations produce byte-identical declared outputs. Each
command also writes a ``<out>.prov.json`` provenance sidecar carrying the
full configuration, seeds, achieved metrics and wall time (the sidecar is
the one output that may differ between reruns, by its wall-time field).

Exit codes: 0 success, 1 declared failure (tuning made no progress or the
targets are infeasible; partial outputs are preserved), 2 usage error,
3 missing input file.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import coarse, epidemic, generate, graph, tuner
from .errors import SwepiError, TargetsInfeasibleError
from .rng import make_rng

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_NO_FILE = 3


def _add_schedule_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--t0", type=float, default=None, help="initial temperature (default: 10x initial objective)")
    p.add_argument("--cooling", type=float, default=0.95)
    p.add_argument("--epoch-len", type=int, default=50)
    p.add_argument("--max-iters", type=int, default=200_000)
    p.add_argument("--stall-limit", type=int, default=20_000)
    p.add_argument("--sample-sources", type=int, default=64)
    p.add_argument("--sample-threshold", type=int, default=600)


def _schedule_from(ns: argparse.Namespace, tol: float | None = None) -> tuner.AnnealSchedule:
    return tuner.AnnealSchedule(
        t0=ns.t0,
        cooling=ns.cooling,
        epoch_len=ns.epoch_len,
        max_iters=ns.max_iters,
        tol=tol,
        stall_limit=ns.stall_limit,
        apl_sample_sources=ns.sample_sources,
        apl_sample_threshold=ns.sample_threshold,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="swepi",
        description="Small-world tuning and SIRS epidemic analysis toolbox",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="Watts-Strogatz small-world graph")
    p.add_argument("--nodes", type=int, required=True)
    p.add_argument("--degree", type=int, required=True, help="even neighbor count per node")
    p.add_argument("--p", type=float, required=True, help="rewiring probability")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("stats", help="connectivity, APL and CC of an edge list")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", default=None, help="default: <in>.stats.json")

    for name, metric in (("tune-apl", "apl"), ("tune-cc", "cc")):
        p = sub.add_parser(name, help=f"anneal the {metric.upper()} to a target")
        p.add_argument("--in", dest="infile", required=True)
        p.add_argument("--target", type=float, required=True)
        p.add_argument("--seed", type=int, required=True)
        p.add_argument("--out", required=True)
        p.add_argument("--tol", type=float, default=None)
        _add_schedule_args(p)

    p = sub.add_parser("tune-joint", help="tune CC and APL simultaneously")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--cc", type=float, required=True)
    p.add_argument("--apl", type=float, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--tol-cc", type=float, default=tuner.DEFAULT_TOL_CC)
    p.add_argument("--tol-apl", type=float, default=tuner.DEFAULT_TOL_APL)
    p.add_argument("--max-rounds", type=int, default=10)
    _add_schedule_args(p)

    p = sub.add_parser("simulate", help="SIRS time series on a graph")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--tau-i", type=int, default=epidemic.DEFAULT_TAU_I)
    p.add_argument("--tau-r", type=int, default=epidemic.DEFAULT_TAU_R)
    p.add_argument("--init-infected", type=float, default=epidemic.DEFAULT_INIT_INFECTED)
    p.add_argument("--init-recovered", type=float, default=0.0)

    p = sub.add_parser("sweep", help="bifurcation sweep along the APL or CC axis")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--axis", choices=["apl", "cc"], required=True)
    p.add_argument("--fixed", type=float, required=True, help="held value of the other metric")
    p.add_argument("--targets", required=True, help="comma-separated target values")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--steps", type=int, default=2000)
    p.add_argument("--ensemble", type=int, default=3)
    p.add_argument("--burn-in", type=int, default=None)
    p.add_argument("--window", type=int, default=coarse.DEFAULT_WINDOW)
    p.add_argument("--hop", type=int, default=coarse.DEFAULT_HOP)
    p.add_argument("--peak-ratio", type=float, default=coarse.DEFAULT_PEAK_RATIO)
    p.add_argument("--tol-cc", type=float, default=tuner.DEFAULT_TOL_CC)
    p.add_argument("--tol-apl", type=float, default=tuner.DEFAULT_TOL_APL)
    p.add_argument("--tau-i", type=int, default=epidemic.DEFAULT_TAU_I)
    p.add_argument("--tau-r", type=int, default=epidemic.DEFAULT_TAU_R)
    p.add_argument("--init-infected", type=float, default=epidemic.DEFAULT_INIT_INFECTED)
    p.add_argument("--init-recovered", type=float, default=0.0)
    p.add_argument("--horizon", type=int, default=20)
    p.add_argument("--replicas", type=int, default=32)
    p.add_argument("--no-fixed-point", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    _add_schedule_args(p)

    return parser


def parse_and_validate(argv) -> argparse.Namespace:
    parser = build_parser()
    ns = parser.parse_args(argv)
    if ns.command == "generate" and (ns.degree % 2 != 0 or not 2 <= ns.degree < ns.nodes):
        parser.error("--degree must be even with 2 <= degree < nodes")
    if getattr(ns, "workers", 1) < 1:
        parser.error("--workers must be >= 1")
    return ns


def _require_input(ns) -> Path | None:
    path = Path(ns.infile)
    if not path.is_file():
        print(f"error: input file not found: {path}", file=sys.stderr)
        return None
    return path


def _write_json(path, payload) -> None:
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _write_provenance(ns, out_path, achieved, wall) -> None:
    options = {k: v for k, v in vars(ns).items()}
    _write_json(
        str(out_path) + ".prov.json",
        {"command": ns.command, "options": options, "achieved": achieved,
         "wall_time_s": round(wall, 3)},
    )


def _round6(x: float) -> float:
    return round(float(x), 6)


def _graph_metrics(g: graph.Graph) -> dict:
    connected = graph.is_connected(g)
    out = {"n": g.n, "m": g.m, "connected": connected}
    if connected:
        out["apl"] = _round6(graph.average_path_length(g).apl)
    else:
        out["apl"] = None
    out["cc"] = _round6(graph.transitivity(g).cc)
    return out


def _write_trace(res: tuner.TuneResult, out) -> None:
    payload = {
        "iterations": [
            {"iter": int(i), "metric": _round6(m), "temperature": _round6(t), "accepted": True}
            for i, m, t in res.objective_trace
        ],
        "final": {
            "apl": _round6(res.achieved_apl) if res.achieved_apl is not None else None,
            "cc": _round6(res.achieved_cc) if res.achieved_cc is not None else None,
        },
        "status": res.status,
        "accepted": res.accepted,
        "rejected_by_reason": res.rejected_by_reason,
    }
    _write_json(str(out) + ".trace.json", payload)


def execute(ns: argparse.Namespace) -> int:
    started = time.perf_counter()

    if ns.command == "generate":
        g = generate.watts_strogatz(
            generate.WsParams(n=ns.nodes, k=ns.degree, p=ns.p, seed=ns.seed)
        )
        graph.write_edge_list(g, ns.out)
        metrics = _graph_metrics(g)
        sidecar = {
            "n": g.n, "m": g.m, "apl": metrics["apl"], "cc": metrics["cc"],
            "seed": ns.seed, "p": ns.p, "k": ns.degree,
        }
        _write_json(str(ns.out) + ".json", sidecar)
        _write_provenance(ns, ns.out, metrics, time.perf_counter() - started)
        return EXIT_OK

    path = _require_input(ns)
    if path is None:
        return EXIT_NO_FILE
    g = graph.read_edge_list(path)

    if ns.command == "stats":
        metrics = _graph_metrics(g)
        print(json.dumps(metrics, sort_keys=True))
        out = ns.out if ns.out else str(path) + ".stats.json"
        _write_json(out, metrics)
        _write_provenance(ns, out, metrics, time.perf_counter() - started)
        return EXIT_OK

    if ns.command in ("tune-apl", "tune-cc"):
        metric = tuner.Metric.APL if ns.command == "tune-apl" else tuner.Metric.CC
        schedule = _schedule_from(ns, tol=ns.tol)
        res = tuner.tune(
            g, tuner.Objective(metric, ns.target), schedule, make_rng(ns.seed, ns.command)
        )
        graph.write_edge_list(res.graph, ns.out)
        if res.achieved_apl is None:
            res.achieved_apl = graph.average_path_length(res.graph).apl
        if res.achieved_cc is None:
            res.achieved_cc = graph.transitivity(res.graph).cc
        _write_trace(res, ns.out)
        achieved = {"apl": _round6(res.achieved_apl), "cc": _round6(res.achieved_cc),
                    "status": res.status}
        _write_provenance(ns, ns.out, achieved, time.perf_counter() - started)
        return EXIT_OK if res.converged else EXIT_FAILED

    if ns.command == "tune-joint":
        schedule = _schedule_from(ns)
        status = EXIT_OK
        try:
            res = tuner.tune_joint(
                g, ns.cc, ns.apl,
                schedule=schedule,
                rng=make_rng(ns.seed, ns.command),
                tol_cc=ns.tol_cc,
                tol_apl=ns.tol_apl,
                max_rounds=ns.max_rounds,
            )
        except TargetsInfeasibleError as exc:
            res = exc.result
            status = EXIT_FAILED
        if not res.converged:
            status = EXIT_FAILED
        graph.write_edge_list(res.graph, ns.out)
        _write_trace(res, ns.out)
        achieved = {"apl": _round6(res.achieved_apl), "cc": _round6(res.achieved_cc),
                    "status": res.status}
        _write_provenance(ns, ns.out, achieved, time.perf_counter() - started)
        return status

    if ns.command == "simulate":
        params = epidemic.EpidemicParams(
            tau_i=ns.tau_i, tau_r=ns.tau_r,
            init_infected_frac=ns.init_infected,
            init_recovered_frac=ns.init_recovered,
        )
        series = epidemic.run(g, params, ns.steps, make_rng(ns.seed, "simulate"))
        series.to_csv(ns.out)
        achieved = {"final_rho_i": _round6(series.rho_i[-1])}
        _write_provenance(ns, ns.out, achieved, time.perf_counter() - started)
        return EXIT_OK

    if ns.command == "sweep":
        targets = [float(x) for x in ns.targets.split(",") if x.strip()]
        params = epidemic.EpidemicParams(
            tau_i=ns.tau_i, tau_r=ns.tau_r,
            init_infected_frac=ns.init_infected,
            init_recovered_frac=ns.init_recovered,
        )
        cfg = coarse.SweepSettings(
            sim_steps=ns.steps,
            ensemble=ns.ensemble,
            burn_in=ns.burn_in,
            window_len=ns.window,
            hop=ns.hop,
            peak_ratio=ns.peak_ratio,
            schedule=_schedule_from(ns),
            tol_cc=ns.tol_cc,
            tol_apl=ns.tol_apl,
            newton=coarse.SolverSettings(horizon=ns.horizon, replicas=ns.replicas),
            compute_fixed_point=not ns.no_fixed_point,
            workers=ns.workers,
        )
        axis = tuner.Metric.APL if ns.axis == "apl" else tuner.Metric.CC
        points = coarse.bifurcation_sweep(
            g, axis, ns.fixed, targets, params, cfg, master_seed=ns.seed
        )
        coarse.write_sweep_csv(points, ns.out)
        failed = [p.target for p in points if p.regime.startswith(("tune_", "targets_"))]
        achieved = {"points": len(points), "tuning_failures": failed}
        _write_provenance(ns, ns.out, achieved, time.perf_counter() - started)
        return EXIT_FAILED if failed else EXIT_OK

    raise AssertionError(f"unhandled command {ns.command}")


def main(argv=None) -> int:
    try:
        ns = parse_and_validate(argv if argv is not None else sys.argv[1:])
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    try:
        return execute(ns)
    except SwepiError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
