"""Command line entry point: ``sepmatch {bench,train,compare,eval,assign}``.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.
"""
import argparse
import sys

import numpy as np

from . import output
from .assignment import exhaustive_best_permutation, hungarian, sinkhorn, winners, assignment_cost
from .bench import PHASES, bench_losses, fit_loglog_slope, relative_epoch_times
from .evaluation import eval_directories, load_scene
from .losses import LossKind
from .synth import KINDS, SynthSpec, gen_sources
from .trainer import INITS, OPTIMIZERS, TrainConfig, TrainingDiverged, train_direct

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _global_options(default):
    p = _Parser(add_help=False)
    kw = {} if default else {"default": argparse.SUPPRESS}
    p.add_argument("--seed", type=int, **({"default": 0} if default else kw))
    p.add_argument("--json", action="store_true", **({"default": False} if default else kw))
    p.add_argument("--csv", metavar="PATH", **({"default": None} if default else kw))
    p.add_argument("--svg", metavar="PATH", **({"default": None} if default else kw))
    p.add_argument("--zero-mean", action="store_true",
                   help="mean-center signals before SI-SDR",
                   **({"default": False} if default else kw))
    return p


def _train_options(p):
    p.add_argument("--steps", type=int, default=2000)
    p.add_argument("--lr", type=float, default=0.02)
    p.add_argument("--optimizer", choices=OPTIMIZERS, default="adaptive_moment")
    p.add_argument("--init", choices=INITS, default="mixture")
    p.add_argument("--init-scale", type=float, default=0.1)
    p.add_argument("--epsilon", type=float, default=0.05)
    p.add_argument("--log-every", type=int, default=100)
    p.add_argument("--length", type=int, default=1024)
    p.add_argument("--kind", choices=KINDS, default="sinusoid")


def build_parser():
    parser = _Parser(prog="sepmatch", parents=[_global_options(True)],
                     description="PIT / SinkPIT / MCL separation-loss toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = [_global_options(False)]

    p = sub.add_parser("bench", parents=common, help="time the losses against n")
    p.add_argument("--n", type=int, nargs="+", default=[2, 4, 8, 16, 32, 64, 128, 256])
    p.add_argument("--length", type=int, default=256)
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--methods", nargs="+", default=[k.value for k in LossKind])
    p.add_argument("--phases", nargs="+", choices=PHASES, default=list(PHASES))
    p.add_argument("--epsilon", type=float, default=0.05)

    p = sub.add_parser("train", parents=common, help="fit free predictions to one scene")
    p.add_argument("--loss", default="PIT_HUNGARIAN", choices=[k.value for k in LossKind])
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--targets-dir", metavar="DIR", help="read targets from mono WAVs")
    _train_options(p)

    p = sub.add_parser("compare", parents=common,
                       help="train PIT, SinkPIT and MCL on the same scenes")
    p.add_argument("--n", type=int, nargs="+", default=[2, 4])
    _train_options(p)

    p = sub.add_parser("eval", parents=common, help="score estimate WAVs against references")
    p.add_argument("ref_dir")
    p.add_argument("est_dir")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("assign", parents=common, help="solve one cost matrix read from CSV")
    p.add_argument("matrix", help="CSV file, n rows x n columns, no header")
    p.add_argument("--solver", choices=("hungarian", "exhaustive", "sinkhorn", "mcl"),
                   default="hungarian")
    p.add_argument("--epsilon", type=float, default=0.05)
    p.add_argument("--max-iters", type=int, default=500)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--require-convergence", action="store_true")
    return parser


def _table(rows, cols):
    lines = ["  ".join(f"{c:>14}" for c in cols)]
    for row in rows:
        lines.append("  ".join(f"{output.fmt_value(row[c]):>14}" for c in cols))
    return "\n".join(lines)


def _config(args, loss):
    return TrainConfig(loss_kind=loss, steps=args.steps, learning_rate=args.lr,
                       optimizer=args.optimizer, init=args.init, init_scale=args.init_scale,
                       seed=args.seed, epsilon=args.epsilon, log_every=args.log_every,
                       zero_mean=args.zero_mean)


def cmd_bench(args):
    rows = bench_losses(args.n, args.length, args.trials, args.seed, args.methods,
                        args.phases, args.epsilon)
    dicts = [vars_row(r) for r in rows]
    slopes = {}
    if len(set(args.n)) >= 4 and "assignment" in args.phases:
        for m in {r.method for r in rows}:
            try:
                slopes[m.value] = fit_loglog_slope(rows, m, "assignment")
            except ValueError:
                pass
    if args.svg:
        phase = "assignment" if "assignment" in args.phases else args.phases[0]
        series = {}
        for m in dict.fromkeys(r.method for r in rows):
            pts = [(r.n, r.mean_time) for r in rows if r.method is m and r.phase == phase]
            series[m.value] = tuple(zip(*pts))
        output.write_svg(args.svg, series, "number of sources n",
                         f"seconds per sample ({phase})", loglog=True)
    return "bench", dicts, {"rows": dicts, "loglog_slopes": slopes}, \
        _table(dicts, output.COLUMNS["bench"]) + "".join(
            f"\nslope[{k}] = {v:.3f}" for k, v in sorted(slopes.items()))


def vars_row(obj):
    return dict(obj.__dict__)


def cmd_train(args):
    if args.targets_dir:
        targets = load_scene(args.targets_dir)
    else:
        targets = gen_sources(SynthSpec(args.n, args.length, args.kind, seed=args.seed))
    traj = train_direct(targets, _config(args, args.loss))
    dicts = [vars_row(r) for r in traj.records]
    if args.svg:
        output.write_svg(args.svg, {"optimal-permutation SI-SDR": (
            [r.step for r in traj.records], [r.si_sdr for r in traj.records])},
            "step", "dB")
    payload = {
        "config": vars_row(traj.config),
        "records": dicts,
        "final_permutation": list(traj.final_permutation),
        "persistent_collapse": traj.persistent_collapse,
        "wall_time": traj.wall_time,
        "sinkhorn_unconverged_steps": traj.sinkhorn_unconverged_steps,
    }
    text = _table(dicts, output.COLUMNS["train"])
    text += f"\nfinal permutation {traj.final_permutation}, wall time {traj.wall_time:.2f} s"
    return "train", dicts, payload, text


def cmd_compare(args):
    rows = relative_epoch_times(args.n, args.length, _config(args, LossKind.PIT_HUNGARIAN))
    dicts = [vars_row(r) for r in rows]
    if args.svg:
        series = {}
        for m in dict.fromkeys(r.method for r in rows):
            pts = [(r.n, r.relative_time) for r in rows if r.method is m]
            series[m.value] = tuple(zip(*pts))
        output.write_svg(args.svg, series, "number of sources n", "wall time relative to PIT")
    return "compare", dicts, {"rows": dicts}, _table(dicts, output.COLUMNS["compare"])


def cmd_eval(args):
    report = eval_directories(args.ref_dir, args.est_dir, args.zero_mean, args.workers)
    dicts = [vars_row(s) for s in report.scenes]
    payload = {"scenes": dicts, "mean_si_sdr": report.mean_si_sdr,
               "mean_auc_sdr": report.mean_auc_sdr}
    text = _table(dicts, output.COLUMNS["eval"])
    text += f"\nmean SI-SDR {report.mean_si_sdr:.3f} dB, mean AUC-SDR {report.mean_auc_sdr:.4f}"
    return "eval", dicts, payload, text


def cmd_assign(args):
    C = np.loadtxt(args.matrix, delimiter=",", ndmin=2)
    payload = {"solver": args.solver, "n": int(C.shape[0])}
    if args.solver == "sinkhorn":
        plan = sinkhorn(C, args.epsilon, args.max_iters, args.tol)
        sigma = hungarian(-plan.entries).permutation
        payload.update(plan=plan.entries, epsilon=plan.epsilon, converged=plan.converged,
                       iterations_used=plan.iterations_used,
                       transport_cost=float(np.sum(plan.entries * C)))
        if args.require_convergence and not plan.converged:
            raise _NumericalFailure(f"sinkhorn did not converge in {args.max_iters} iterations")
    elif args.solver == "mcl":
        sigma = winners(C)
    elif args.solver == "exhaustive":
        sigma = exhaustive_best_permutation(C).permutation
    else:
        sigma = hungarian(C).permutation
    cost = assignment_cost(C, sigma)
    payload.update(permutation=list(sigma), total_cost=cost)
    dicts = [{"target": i, "prediction": j, "cost": float(C[i, j])} for i, j in enumerate(sigma)]
    text = _table(dicts, output.COLUMNS["assign"]) + f"\ntotal cost {cost:.9g}"
    return "assign", dicts, payload, text


class _NumericalFailure(RuntimeError):
    pass


COMMANDS = {"bench": cmd_bench, "train": cmd_train, "compare": cmd_compare,
            "eval": cmd_eval, "assign": cmd_assign}


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # --help exits 0, parse errors exit EXIT_USAGE via _Parser.error
        return exc.code
    try:
        kind, rows, payload, text = COMMANDS[args.command](args)
    except (TrainingDiverged, _NumericalFailure) as exc:
        print(f"sepmatch: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, OSError) as exc:
        print(f"sepmatch: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    if args.csv:
        output.write_csv(args.csv, kind, rows)
    if args.json:
        print(output.json_text(kind, **payload))
    else:
        print(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
