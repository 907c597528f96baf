"""Command-line front end.

Exit codes: 0 solution found, 2 no path or infeasible path, 3 saturation
violation (astar-k with the check on), 64 usage error, 1 anything else.
"""
from __future__ import annotations

import argparse
import csv
import io as _io
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import io as basp_io
from .errors import BaspError, NoPathError, NotAPathError, SaturationViolation, SearchTimeout
from .graph import concat_bounds
from .instances import GeneratorParams, random_instance, random_query
from .oracles import brute_force, partition_instance, partition_target_time, pseudo_poly_dp
from .profile import EXACT, Grid, SpeedProfile, plan_speed
from .search import adaptive_astar, astar_k, dijkstra_extended, solve_one_basp

SOLVE_SCHEMA = "basp-solve/1"
ORACLE_SCHEMA = "basp-oracle/1"
GRID_ENV = "BASP_GRID_STEP"
DEFAULT_GRID_STEP = 0.01
SELF_CHECK_TOL = 1e-6

EXIT_OK, EXIT_ERROR, EXIT_NO_PATH, EXIT_SATURATION, EXIT_USAGE = 0, 1, 2, 3, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _grid_step(args):
    if getattr(args, "grid_step", None) is not None:
        return args.grid_step
    env = os.environ.get(GRID_ENV)
    if env:
        try:
            return float(env)
        except ValueError:
            raise UsageError(f"{GRID_ENV} must be a number, got {env!r}") from None
    return None


def _labels(g, path):
    return [g.label(v) for v in path]


def _emit(text, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# solve

def _run_solver(g, args):
    algo = args.algo
    if algo in ("astar-k", "dijkstra-k") and args.k is None:
        raise UsageError(f"--k is required with --algo {algo}")
    if algo == "adaptive":
        return adaptive_astar(g, k_max=args.k, timeout=args.timeout), g
    if algo == "astar-k":
        return astar_k(g, args.k, check_saturation=not args.no_check, timeout=args.timeout), g
    if algo == "dijkstra-k":
        return dijkstra_extended(g, args.k, timeout=args.timeout), g
    if algo == "one-basp":
        return solve_one_basp(g), g.relaxed()
    if algo == "brute":
        res = brute_force(g, args.max_len)
        return res, g
    raise UsageError(f"unknown algorithm {algo}")


def cmd_solve(args):
    g = basp_io.load(args.instance)
    if g.source is None:
        raise UsageError("instance file has no query")
    t0 = time.perf_counter()
    try:
        sol, model_graph = _run_solver(g, args)
    except SaturationViolation as exc:
        report = {"schema": SOLVE_SCHEMA, "status": "saturation_violation", "algo": args.algo,
                  "k": exc.k, "state": _labels(g, exc.word), "message": str(exc)}
        _print_report(report, args, f"saturation violation at state {' '.join(report['state'])} "
                                    f"with k={exc.k}\n")
        return EXIT_SATURATION
    except NoPathError as exc:
        report = {"schema": SOLVE_SCHEMA, "status": "no_path", "algo": args.algo,
                  "message": str(exc)}
        _print_report(report, args, f"no path: {exc}\n")
        return EXIT_NO_PATH
    wall = time.perf_counter() - t0

    replanned = plan_speed(concat_bounds(model_graph, sol.path), g.w_source, g.w_target).time
    if not abs(replanned - sol.time) <= SELF_CHECK_TOL * max(1.0, abs(sol.time)):
        print(f"internal error: solver time {sol.time} differs from replanned time {replanned}",
              file=sys.stderr)
        return EXIT_ERROR
    stats = getattr(sol, "stats", None)
    report = {
        "schema": SOLVE_SCHEMA,
        "status": "ok",
        "algo": args.algo,
        "path": _labels(g, sol.path),
        "path_ids": list(sol.path),
        "time": sol.time,
        "replanned_time": replanned,
        "final_k": getattr(stats, "final_k", None),
        "expanded": getattr(stats, "expanded", None),
        "generated": getattr(stats, "generated", sol.states if hasattr(sol, "states") else None),
        "wall_time_s": wall,
    }
    if args.algo == "one-basp":
        report["time_with_acceleration_bounds"] = plan_speed(
            concat_bounds(g, sol.path), g.w_source, g.w_target).time
    step = _grid_step(args)
    if step is not None:
        res = plan_speed(concat_bounds(model_graph, sol.path), g.w_source, g.w_target,
                         Grid(step=step))
        report["grid"] = {"step": step, "time": res.time}
    text = "".join(f"{k}: {' '.join(v) if k == 'path' else v}\n"
                   for k, v in report.items() if k not in ("schema", "path_ids", "status"))
    _print_report(report, args, text)
    return EXIT_OK


def _print_report(report, args, text):
    if args.json:
        sys.stdout.write(json.dumps(report, indent=1, default=_json_default) + "\n")
    else:
        sys.stdout.write(text)


def _json_default(x):
    if isinstance(x, float) and math.isinf(x):
        return "inf" if x > 0 else "-inf"
    raise TypeError(type(x))


# ---------------------------------------------------------------------------
# generate

def cmd_generate(args):
    if args.n < 2:
        raise UsageError("--n must be >= 2")
    params = GeneratorParams(n=args.n, seed=args.seed, accel=args.accel,
                             curvature_bounds=args.curvature_bounds,
                             radius_rule=args.radius_rule)
    g = random_instance(params)
    rng = np.random.default_rng(args.seed)
    g = random_query(g, rng)
    text = basp_io.dumps(g) + "\n"
    _emit(text, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# bench

BENCH_COLUMNS = ["n", "instance_seed", "query", "source", "target", "time_s", "final_k", "solved"]


def _bench_task(task):
    n, inst_seed, q, timeout, accel = task
    g = random_instance(GeneratorParams(n=n, seed=inst_seed, accel=accel))
    rng = np.random.default_rng([inst_seed, q])
    gq = random_query(g, rng)
    target = min(gq.targets) // 2
    t0 = time.perf_counter()
    try:
        sol = adaptive_astar(gq, timeout=timeout)
        return [n, inst_seed, q, gq.label(gq.source), target,
                round(time.perf_counter() - t0, 6), sol.final_k, "true"]
    except SearchTimeout:
        return [n, inst_seed, q, gq.label(gq.source), target, timeout, "", "timeout"]


def bench_rows(n_list, instances, queries, seed, timeout=100.0, accel=0.1, workers=1):
    tasks = [(n, seed * 1000 + i, q, timeout, accel)
             for n in n_list for i in range(instances) for q in range(queries)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            rows = list(pool.map(_bench_task, tasks))
    else:
        rows = [_bench_task(t) for t in tasks]
    rows.sort(key=lambda r: (r[0], r[1], r[2]))
    return rows


def cmd_bench(args):
    try:
        n_list = [int(x) for x in args.n_list.split(",") if x.strip()]
    except ValueError:
        raise UsageError("--n-list must be a comma-separated list of integers") from None
    if not n_list or min(n_list) < 2 or args.queries < 1 or args.instances < 1:
        raise UsageError("need n >= 2 and at least one instance and query")
    rows = bench_rows(n_list, args.instances, args.queries, args.seed, args.timeout,
                      args.accel, args.workers)
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(BENCH_COLUMNS)
    w.writerows(rows)
    _emit(buf.getvalue(), args.csv)
    return EXIT_OK


# ---------------------------------------------------------------------------
# export-profile

def profile_rows(profile, samples=None):
    """(lambda, w, v, t) per stored point, plus uniform samples if requested."""
    pts = profile.points()
    if samples and samples > 1 and pts:
        have = {p[0] for p in pts}
        extra = [(x, float(profile(x))) for x in
                 np.linspace(pts[0][0], pts[-1][0], samples).tolist() if x not in have]
        # stable sort keeps the two values of a jump in order
        pts = sorted(pts + extra, key=lambda p: p[0])
    prof = SpeedProfile.from_points(pts, profile.engine)
    t = prof.cumulative_time()
    return [(lam, w, math.sqrt(max(w, 0.0)), float(tt)) for (lam, w), tt in zip(pts, t)]


def cmd_export_profile(args):
    g = basp_io.load(args.instance)
    if bool(args.path) == bool(args.solve):
        raise UsageError("give exactly one of --path or --solve")
    if args.path:
        try:
            word = tuple(g.node_id(tok) for tok in args.path.split())
        except KeyError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_ERROR
        if not word:
            raise UsageError("--path must name at least one node")
        bounds = concat_bounds(g, word)
    else:
        if g.source is None:
            raise UsageError("instance file has no query")
        try:
            sol = adaptive_astar(g)
        except NoPathError as exc:
            print(f"no path: {exc}", file=sys.stderr)
            return EXIT_NO_PATH
        bounds = concat_bounds(g, sol.path)
    step = _grid_step(args)
    engine = EXACT if step is None else Grid(step=step)
    w0 = g.w_source if g.source is not None else 0.0
    w_end = g.w_target if g.source is not None else 0.0
    res = plan_speed(bounds, w0, w_end, engine)
    if not res.feasible:
        where = "" if res.violation is None else \
            f" on [{res.violation[0]:.9g}, {res.violation[1]:.9g}]"
        print(f"infeasible path: {res.reason}{where}", file=sys.stderr)
        return EXIT_NO_PATH
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["lambda", "w", "v", "t"])
    for row in profile_rows(res.profile, args.samples):
        w.writerow([repr(x) for x in row])
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# oracle

def cmd_oracle(args):
    if args.partition:
        g = partition_instance(args.partition)
        sol = adaptive_astar(g)
        target = partition_target_time(args.partition)
        report = {"schema": ORACLE_SCHEMA, "method": "partition", "weights": args.partition,
                  "time": sol.time, "target_time": target,
                  "even_split": abs(sol.time - target) <= 1e-9,
                  "path": _labels(g, sol.path)}
    else:
        if not args.instance:
            raise UsageError("give an instance file or --partition")
        g = basp_io.load(args.instance)
        if g.source is None:
            raise UsageError("instance file has no query")
        try:
            if args.method == "dp":
                res = pseudo_poly_dp(g)
            else:
                res = brute_force(g, args.max_len)
        except NoPathError as exc:
            print(f"no path: {exc}", file=sys.stderr)
            return EXIT_NO_PATH
        report = {"schema": ORACLE_SCHEMA, "method": args.method, "path": _labels(g, res.path),
                  "time": res.time, "states": res.states}
    if args.json:
        sys.stdout.write(json.dumps(report, indent=1) + "\n")
    else:
        sys.stdout.write("".join(f"{k}: {v}\n" for k, v in report.items() if k != "schema"))
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser():
    p = _Parser(prog="basp", description="Fastest paths under speed and acceleration bounds.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="solve the query stored in an instance file")
    s.add_argument("instance")
    s.add_argument("--algo", default="adaptive",
                   choices=["adaptive", "astar-k", "dijkstra-k", "one-basp", "brute"])
    s.add_argument("--k", type=int, help="suffix length (upper limit for adaptive)")
    s.add_argument("--max-len", type=int, default=8, help="walk length limit for brute")
    s.add_argument("--no-check", action="store_true", help="astar-k: skip the saturation check")
    s.add_argument("--grid-step", type=float, help="also report the grid-engine time")
    s.add_argument("--timeout", type=float)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_solve)

    gen = sub.add_parser("generate", help="write a random geometric instance")
    gen.add_argument("--n", type=int, required=True, help="number of positions")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--accel", type=float, default=0.1)
    gen.add_argument("--curvature-bounds", action="store_true")
    gen.add_argument("--radius-rule", choices=["distance", "fixed_point"], default="distance")
    gen.add_argument("--out")
    gen.set_defaults(func=cmd_generate)

    b = sub.add_parser("bench", help="time the adaptive search on random instances")
    b.add_argument("--n-list", default="100")
    b.add_argument("--instances", type=int, default=1, help="instances per n")
    b.add_argument("--queries", type=int, default=10, help="queries per instance")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--timeout", type=float, default=100.0)
    b.add_argument("--accel", type=float, default=0.1)
    b.add_argument("--workers", type=int, default=1)
    b.add_argument("--csv")
    b.set_defaults(func=cmd_bench)

    e = sub.add_parser("export-profile", help="write the optimal speed profile as CSV")
    e.add_argument("instance")
    e.add_argument("--path", help='node sequence, e.g. "s 1 f"')
    e.add_argument("--solve", action="store_true", help="use the optimal path")
    e.add_argument("--out")
    e.add_argument("--samples", type=int)
    e.add_argument("--grid-step", type=float)
    e.set_defaults(func=cmd_export_profile)

    o = sub.add_parser("oracle", help="run a reference solver")
    o.add_argument("instance", nargs="?")
    o.add_argument("--method", choices=["brute", "dp"], default="brute")
    o.add_argument("--max-len", type=int, default=8)
    o.add_argument("--partition", type=int, nargs="+", metavar="W")
    o.add_argument("--json", action="store_true")
    o.set_defaults(func=cmd_oracle)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"basp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NotAPathError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_PATH
    except (BaspError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
