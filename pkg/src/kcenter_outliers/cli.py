"""Command-line front end (``kco``).

Every subcommand prints a one-line summary and, with ``--out``, writes a JSON
run report (``schema: 1``).  All output files are produced only after the
computation succeeded, each through an atomic rename.

Exit codes: 0 success, 1 usage error, 2 contract violation, 3 guard refusal.
"""

from __future__ import annotations

import argparse
import math
import sys
import time

import numpy as np

from . import io
from .baselines import brute_force_opt, charikar, gonzalez
from .core import EuclideanPoints, OutlierParams, center_ids, evaluate
from .coreset import build_coreset, composable_build, random_partition
from .datagen import synth
from .exceptions import ContractViolation, DegenerateGeometry, GuardRefusal, UnsupportedVariant
from .greedy import bicriteria, doubling_bicriteria, two_approx, with_restarts
from .sampling import uniform_reduce

SCHEMA = 1
EXIT_OK, EXIT_USAGE, EXIT_CONTRACT, EXIT_GUARD = 0, 1, 2, 3
ALGOS = ("bicriteria", "two-approx", "restarts", "doubling", "gonzalez", "charikar", "bruteforce")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise _UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="kco", description="k-center clustering with outliers")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="generate a planted instance")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--D", type=int, required=True)
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--z", type=int, required=True)
    g.add_argument("--side", type=float, default=200.0)
    g.add_argument("--variance", type=float, default=10.0)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--points", help="point CSV to write")
    g.add_argument("--truth", help="ground-truth JSON to write")
    g.add_argument("--out", help="run report JSON")

    c = sub.add_parser("cluster", help="run a clustering algorithm")
    c.add_argument("--algo", choices=ALGOS, required=True)
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--z", type=int, default=0)
    c.add_argument("--eps", type=float, default=1.0)
    c.add_argument("--eval-eps", type=float, default=None, help="slack of the reported radius (default: --eps)")
    c.add_argument("--eta", type=float, default=0.1)
    c.add_argument("--rho", type=float, default=None)
    c.add_argument("--t", type=int, default=None, help="round count for bicriteria")
    c.add_argument("--trials", type=int, default=None, help="restart count")
    c.add_argument("--seed", type=int, default=0)
    _add_input(c)
    c.add_argument("--coreset", help="coreset CSV built from --in; cluster its weighted points")
    c.add_argument("--truth", help="ground-truth JSON holding r_opt")
    c.add_argument("--out", help="run report JSON")

    s = sub.add_parser("coreset", help="build a weighted coreset")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--z", type=int, default=0)
    s.add_argument("--mu", type=float, default=None)
    s.add_argument("--rho", type=float, default=None)
    s.add_argument("--l", type=int, default=None, help="override l = ceil((2/mu)^rho k)")
    s.add_argument("--eta", type=float, default=0.1)
    s.add_argument("--eps", type=float, default=1.0)
    s.add_argument("--parts", type=int, default=1)
    s.add_argument("--seed", type=int, default=0)
    _add_input(s)
    s.add_argument("--coreset", help="coreset CSV to write (metadata goes to a .meta.json sidecar)")
    s.add_argument("--rep-out", help="CSV mapping every point to its representative")
    s.add_argument("--out", help="run report JSON")

    u = sub.add_parser("sample", help="uniform-sample reduction")
    u.add_argument("--k", type=int, required=True)
    u.add_argument("--eps", type=float, required=True)
    grp = u.add_mutually_exclusive_group(required=True)
    grp.add_argument("--gamma", type=float)
    grp.add_argument("--z", type=int)
    u.add_argument("--lambda", dest="lam", type=float, default=0.1)
    u.add_argument("--c", type=float, default=1.0)
    u.add_argument("--seed", type=int, default=0)
    _add_input(u)
    u.add_argument("--sample", help="CSV of the sampled points")
    u.add_argument("--out", help="run report JSON")

    e = sub.add_parser("eval", help="recompute the cost of a center set")
    e.add_argument("--centers", required=True, help="report JSON with 'centers' or ids one per line")
    e.add_argument("--z", type=int, default=0)
    e.add_argument("--eps", type=float, default=0.0)
    _add_input(e)
    e.add_argument("--truth", help="ground-truth JSON holding r_opt")
    e.add_argument("--out", help="run report JSON")
    return p


def _add_input(p):
    p.add_argument("--in", dest="inp", required=True, help="input dataset")
    p.add_argument("--format", choices=("csv", "metric"), default="csv")


# ---------------------------------------------------------------------------
# helpers


def _r_opt(args, ds, k: int, z: int):
    """Truth r_opt when supplied, else the brute-force optimum when within guard."""
    if getattr(args, "truth", None):
        return float(io.read_truth(args.truth)["r_opt"]), "truth"
    try:
        return brute_force_opt(ds, k, z).r_opt, "bruteforce"
    except GuardRefusal:
        return None, None


def _report(command: str, **fields) -> dict:
    out = {"schema": SCHEMA, "command": command}
    out.update(fields)
    return out


def _cost_fields(result, r_opt, source) -> dict:
    fields = {
        "radius": result.radius,
        "budget": result.budget,
        "excluded_count": int(result.excluded.shape[0]),
        "n_centers": len(result.centers),
        "centers": [int(c) for c in result.centers.ids],
    }
    if result.ratio is not None:
        fields["ratio"] = result.ratio
        fields["r_opt"] = r_opt
        fields["r_opt_source"] = source
    return fields


def _fmt(x) -> str:
    return "n/a" if x is None else f"{x:.6g}"


# ---------------------------------------------------------------------------
# subcommands


def cmd_gen(args):
    inst = synth(args.n, args.D, args.k, args.z, side=args.side, variance=args.variance, seed=args.seed)
    files = []
    if args.points:
        files.append((args.points, io.format_points(inst.dataset.coords)))
    if args.truth:
        files.append((args.truth, io.dump_json(inst.truth_dict())))
    report = _report("gen", algorithm="synth", params=dict(inst.params), seed=args.seed, r_opt=inst.r_opt)
    summary = f"gen: n={args.n} D={args.D} k={args.k} z={args.z} r_opt={_fmt(inst.r_opt)}"
    return report, files, summary


def _run_algorithm(args, ds, params, weights):
    algo = args.algo
    trace = None
    if algo == "bicriteria":
        E, trace = bicriteria(ds, params, t=args.t, weights=weights)
    elif algo == "doubling":
        E, trace = doubling_bicriteria(ds, params, weights=weights)
    elif algo == "two-approx":
        E, trace = two_approx(ds, params, weights=weights)
    elif algo == "restarts":
        best, _ = with_restarts(ds, params, trials=args.trials, weights=weights, eval_eps=args.eval_eps)
        E, trace = best.centers, best.trace
    elif algo == "gonzalez":
        E = gonzalez(ds, params.k, first=int(np.random.default_rng(params.seed).integers(ds.n)))
    elif algo == "charikar":
        E = charikar(ds, params.k, params.z, sample_weight=weights)
    else:
        if weights is not None:
            raise ContractViolation("bruteforce cannot run on a weighted coreset")
        E = brute_force_opt(ds, params.k, params.z).opt_centers
    return E, trace


def cmd_cluster(args):
    if args.eval_eps is None:
        args.eval_eps = args.eps
    ds = io.read_dataset(args.inp, args.format)
    params = OutlierParams(k=args.k, z=args.z, eps=args.eps, eta=args.eta, rho=args.rho, seed=args.seed)
    params.check_against(ds.n)

    t0 = time.perf_counter()
    if args.coreset:
        ids, weights = io.read_coreset(args.coreset)
        if ids.size and (ids.min() < 0 or ids.max() >= ds.n):
            raise ContractViolation(f"{args.coreset}: ids out of range for n={ds.n}")
        E, trace = _run_algorithm(args, ds.subset(ids), params, weights.astype(np.float64))
        E = ids[center_ids(E, ids.size)]
    else:
        E, trace = _run_algorithm(args, ds, params, None)
    wall = (time.perf_counter() - t0) * 1000.0

    r_opt, source = _r_opt(args, ds, args.k, args.z)
    result = evaluate(ds, E, args.z, args.eval_eps, r_opt=r_opt, rounds=len(trace or ()))
    pdict = params.to_dict()
    pdict.update(algo=args.algo, t=args.t, trials=args.trials, eval_eps=args.eval_eps, coreset=args.coreset)
    report = _report(
        "cluster",
        algorithm=args.algo,
        params=pdict,
        seed=args.seed,
        wall_time_ms=wall,
        rounds=result.rounds,
        **_cost_fields(result, r_opt, source),
    )
    summary = (
        f"cluster[{args.algo}]: |E|={len(result.centers)} radius={_fmt(result.radius)} "
        f"excluded={result.excluded.shape[0]} ratio={_fmt(result.ratio)} ({wall:.1f} ms)"
    )
    return report, [], summary


def cmd_coreset(args):
    ds = io.read_dataset(args.inp, args.format)
    params = OutlierParams(k=args.k, z=args.z, eta=args.eta, mu=args.mu, rho=args.rho, seed=args.seed)
    params.check_against(ds.n)
    t0 = time.perf_counter()
    if args.parts == 1:
        cs = build_coreset(ds, params, l=args.l, eps=args.eps)
    else:
        cs = composable_build(ds, random_partition(ds.n, args.parts, args.seed), params, l=args.l, eps=args.eps)
    wall = (time.perf_counter() - t0) * 1000.0

    files = []
    if args.coreset:
        files.append((args.coreset, io.format_coreset(cs)))
        files.append((io.sidecar_path(args.coreset), io.dump_json(cs.metadata())))
    if args.rep_out:
        files.append((args.rep_out, io.format_rep_map(cs)))
    pdict = params.to_dict()
    pdict.update(l=cs.l, eps=args.eps, parts=args.parts)
    report = _report(
        "coreset",
        algorithm="coreset",
        params=pdict,
        seed=args.seed,
        wall_time_ms=wall,
        radius=cs.r_tilde,
        size=len(cs),
        total_weight=cs.total_weight,
        n_centers=cs.n_centers,
        rounds=cs.t,
        full=cs.full,
    )
    summary = f"coreset: size={len(cs)} of n={ds.n} r_tilde={_fmt(cs.r_tilde)} l={cs.l} ({wall:.1f} ms)"
    return report, files, summary


def cmd_sample(args):
    ds = io.read_dataset(args.inp, args.format)
    z = args.z if args.z is not None else int(round(args.gamma * ds.n))
    if z < 1:
        raise ContractViolation(f"outlier fraction gives z={z}; sampling needs z >= 1")
    params = OutlierParams(k=args.k, z=z, eps=args.eps, seed=args.seed)
    params.check_against(ds.n)
    t0 = time.perf_counter()
    sample, ids, plan = uniform_reduce(ds, params, args.lam, args.c)
    wall = (time.perf_counter() - t0) * 1000.0

    files = []
    if args.sample:
        if isinstance(sample, EuclideanPoints):
            files.append((args.sample, io.format_points(sample.coords)))
        else:
            files.append((args.sample, io.format_metric(sample.pairwise())))
    report = _report(
        "sample",
        algorithm="uniform",
        params=params.to_dict(),
        seed=args.seed,
        wall_time_ms=wall,
        plan=plan.to_dict(),
        sample_ids=[int(i) for i in ids],
    )
    flag = " (vacuous: whole dataset)" if plan.vacuous else ""
    summary = f"sample: |S|={plan.sample_size} of n={ds.n} z'={plan.z_prime}{flag}"
    return report, files, summary


def cmd_eval(args):
    ds = io.read_dataset(args.inp, args.format)
    E = io.read_centers(args.centers)
    if args.z >= ds.n or args.z < 0:
        raise ContractViolation(f"z must satisfy 0 <= z < n={ds.n}, got {args.z}")
    k = len(np.unique(E))
    r_opt, source = (None, None)
    if args.truth:
        r_opt, source = _r_opt(args, ds, k, args.z)
    t0 = time.perf_counter()
    result = evaluate(ds, E, args.z, args.eps, r_opt=r_opt)
    wall = (time.perf_counter() - t0) * 1000.0
    report = _report(
        "eval",
        algorithm="eval",
        params={"z": args.z, "eps": args.eps},
        seed=None,
        wall_time_ms=wall,
        **_cost_fields(result, r_opt, source),
    )
    summary = f"eval: |E|={len(result.centers)} radius={_fmt(result.radius)} ratio={_fmt(result.ratio)}"
    return report, [], summary


COMMANDS = {"gen": cmd_gen, "cluster": cmd_cluster, "coreset": cmd_coreset, "sample": cmd_sample, "eval": cmd_eval}


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else str(x)
    return obj


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError:
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE

    try:
        report, files, summary = COMMANDS[args.command](args)
        if args.out:
            files.append((args.out, io.dump_json(_jsonable(report))))
        for path, text in files:
            io.atomic_write(path, text)
    except GuardRefusal as exc:
        print(f"kco: refused: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (ContractViolation, UnsupportedVariant, DegenerateGeometry, IndexError, OSError, KeyError) as exc:
        print(f"kco: error: {exc}", file=sys.stderr)
        return EXIT_CONTRACT
    print(summary)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
