"""Command-line benchmark runner and one-shot suggester."""

from __future__ import annotations

import argparse
import json
import sys

from .harness import (
    LAYOUTS,
    STRATEGIES,
    ExperimentConfig,
    _make_optimizer,
    emit_outputs,
    make_layout,
    read_records,
    run_experiment,
    summarize,
)
from .space import load_space


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mixedbo",
        description="Bayesian-optimization benchmarks over mixed search spaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a benchmark experiment and write its outputs")
    src = run.add_mutually_exclusive_group(required=True)
    src.add_argument("--layout", choices=sorted(LAYOUTS), help="named synthetic benchmark space")
    src.add_argument("--space", help="path to a JSON search-space definition")
    run.add_argument(
        "--objective-cmd",
        help="external objective: reads one JSON config line on stdin, prints one float",
    )
    run.add_argument(
        "--strategies", nargs="+", choices=STRATEGIES, default=["proposed"], metavar="STRATEGY"
    )
    run.add_argument("--iterations", type=int, default=50)
    run.add_argument("--repetitions", type=int, default=100)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--outdir", required=True)
    run.add_argument("--noise-variance", type=float, default=0.0)
    run.add_argument("--n-init", type=int, default=3)
    run.add_argument("--hyper-samples", type=int, default=10)
    run.add_argument("--burn-in", type=int, default=50)
    run.add_argument("--kernel", choices=("matern32", "squared_exponential"), default="matern32")
    run.add_argument("--bootstrap-samples", type=int, default=200)
    run.add_argument("--grid-density", type=int, default=None, help="defaults to the layout's density")
    run.add_argument("--recommend", choices=("posterior_mean", "best_observed"), default=None)

    suggest = sub.add_parser("suggest", help="print the next configuration to evaluate")
    suggest.add_argument("--space", required=True, help="path to a JSON search-space definition")
    suggest.add_argument("--history", help="records.csv with past evaluations")
    suggest.add_argument("--strategy", choices=STRATEGIES, default="proposed")
    suggest.add_argument("--seed", type=int, default=0)
    suggest.add_argument("--n-init", type=int, default=3)
    suggest.add_argument("--hyper-samples", type=int, default=10)
    suggest.add_argument("--burn-in", type=int, default=50)
    suggest.add_argument("--noiseless", action="store_true", help="pin the model noise at 1e-6")
    return parser


def _cmd_run(args) -> int:
    if args.layout:
        space, layout_density = make_layout(args.layout)
    else:
        space, layout_density = load_space(args.space), 200
        if args.objective_cmd is None and space.width > 2:
            layout_density = 50
    cfg = ExperimentConfig(
        space=space,
        strategies=tuple(args.strategies),
        iterations=args.iterations,
        repetitions=args.repetitions,
        seed=args.seed,
        noise_variance=args.noise_variance,
        n_init=args.n_init,
        hyper_samples=args.hyper_samples,
        burn_in=args.burn_in,
        kernel_family=args.kernel,
        bootstrap_samples=args.bootstrap_samples,
        grid_density=args.grid_density if args.grid_density else layout_density,
        objective_cmd=args.objective_cmd,
        recommend=args.recommend,
    )
    records = run_experiment(cfg)
    summary = summarize(
        records,
        bootstrap_samples=cfg.bootstrap_samples,
        seed=cfg.seed,
        regret_floor=cfg.regret_floor,
    )
    paths = emit_outputs(records, summary, args.outdir)
    for key in ("records", "summary", "plot"):
        print(paths[key])
    return 0


def _cmd_suggest(args) -> int:
    space = load_space(args.space)
    cfg = ExperimentConfig(
        space=space,
        strategies=(args.strategy,),
        seed=args.seed,
        n_init=args.n_init,
        hyper_samples=args.hyper_samples,
        burn_in=args.burn_in,
        noise_variance=0.0 if args.noiseless else 0.01,
    )
    opt = _make_optimizer(args.strategy, cfg, seed=args.seed)
    if args.history:
        for rec in read_records(args.history):
            opt.observe(rec.config, rec.observed_y)
    print(json.dumps(list(opt.ask().config)))
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        return _cmd_suggest(args)
    except Exception as exc:  # surface as a clean message, not a traceback
        print(f"mixedbo: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
