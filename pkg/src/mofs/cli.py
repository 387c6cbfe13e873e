"""Command-line entry point: ``mofs run | datagen | baseline | sweep``.

Exit codes: 0 success, 2 configuration error, 3 data error.
"""

import argparse
import sys

import numpy as np

from .baselines import relief_rank, relief_select, sfs_auc
from .config import Config, ConfigError
from .dataset import DataError, generate_synthetic, load_csv, stratified_folds, write_csv
from .evaluator import MaskEvaluator
from .pipeline import METRIC_KEYS, aggregate, dumps, make_run_id, run_repeats, sweep

EXIT_CONFIG = 2
EXIT_DATA = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _seed(text):
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def build_parser():
    parser = _Parser(prog="mofs", description="Multi-objective wrapper feature selection.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="evolve, select one Pareto solution, write a JSON report")
    run.add_argument("--data", required=True)
    run.add_argument("--label-col", required=True)
    run.add_argument("--test")
    run.add_argument("--group-col")
    run.add_argument("--config")
    run.add_argument("--seed", type=_seed)
    run.add_argument("--repeats", type=int, default=1)
    run.add_argument("--out", required=True)

    gen = sub.add_parser("datagen", help="write a synthetic Gaussian dataset as CSV")
    gen.add_argument("--samples", type=int, required=True)
    gen.add_argument("--informative", type=int, required=True)
    gen.add_argument("--redundant", type=int, required=True)
    gen.add_argument("--noise", type=int, required=True)
    gen.add_argument("--delta", type=float, required=True)
    gen.add_argument("--rho", type=float, required=True)
    gen.add_argument("--seed", type=_seed, required=True)
    gen.add_argument("--out", required=True)

    base = sub.add_parser("baseline", help="run a reference selector (sfs or relief)")
    base.add_argument("--method", choices=("sfs", "relief"), required=True)
    base.add_argument("--data", required=True)
    base.add_argument("--label-col", required=True)
    base.add_argument("--seed", type=_seed, default=0)
    base.add_argument("--out", required=True)

    sw = sub.add_parser("sweep", help="selector sensitivity to weights or reference count")
    sw.add_argument("--param", choices=("weights", "refpoints"), required=True)
    sw.add_argument("--data", required=True)
    sw.add_argument("--label-col", required=True)
    sw.add_argument("--seed", type=_seed, default=0)
    sw.add_argument("--out", required=True)
    return parser


def _write(path, text):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _cmd_run(args):
    cfg = Config.from_json(args.config) if args.config else Config()
    if args.seed is not None:
        cfg = cfg.replace(seed=args.seed)
    if args.repeats < 1:
        raise ConfigError("--repeats must be at least 1")
    data = load_csv(args.data, args.label_col, args.group_col)
    test = load_csv(args.test, args.label_col, args.group_col) if args.test else None
    results = run_repeats(data, test, cfg, args.repeats)
    if args.repeats == 1:
        doc = results[0].to_dict()
    else:
        doc = {"runs": [r.to_dict() for r in results], "aggregate": aggregate(results)}
    _write(args.out, dumps(doc))


def _cmd_datagen(args):
    data = generate_synthetic(
        args.samples, args.informative, args.redundant, args.noise, args.delta, args.rho, args.seed
    )
    write_csv(data, args.out)


def _cmd_baseline(args):
    cfg = Config(seed=args.seed)
    data = load_csv(args.data, args.label_col)
    folds = stratified_folds(data, cfg.cv_folds, cfg.effective_fold_seed)
    evaluator = MaskEvaluator(data, folds, cfg.gamma, cfg.ridge)
    extra = {}
    if args.method == "sfs":
        trajectory = []
        mask = sfs_auc(data, folds, evaluator=evaluator, trace=trajectory)
        extra["auc_trajectory"] = trajectory
    else:
        ranking = relief_rank(data, seed=args.seed)
        mask = relief_select(ranking)
        extra["weights"] = ranking.weights.tolist()
        extra["order"] = ranking.order.tolist()
    fit = evaluator(mask)
    cm = evaluator.confusion(mask)
    doc = {
        "run_id": make_run_id(data, None, cfg),
        "seed": args.seed,
        "config": cfg.to_dict(),
        "method": args.method,
        "selected": {
            "feature_indices": [int(i) for i in np.flatnonzero(mask)],
            "metrics": {k: getattr(fit, k) for k in METRIC_KEYS},
            "evaluated_on": "cv",
        },
        "confusion": {"tp": cm.tp, "fp": cm.fp, "tn": cm.tn, "fn": cm.fn},
        **extra,
    }
    _write(args.out, dumps(doc))


def _cmd_sweep(args):
    cfg = Config(seed=args.seed)
    data = load_csv(args.data, args.label_col)
    rows = sweep(data, cfg, args.param)
    doc = {"run_id": make_run_id(data, None, cfg), "seed": args.seed, "param": args.param, "rows": rows}
    _write(args.out, dumps(doc))


COMMANDS = {"run": _cmd_run, "datagen": _cmd_datagen, "baseline": _cmd_baseline, "sweep": _cmd_sweep}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"mofs: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DataError as exc:
        print(f"mofs: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return 0


if __name__ == "__main__":
    sys.exit(main())
