"""Paired synthetic experiments, their summaries, and file outputs.

Every repetition draws one objective (seed = base seed + repetition),
enumerates its true minimum before any optimizer runs, then plays every
requested strategy against that same function from an identical initial
design.  Records carry one row per post-initialization iteration; summaries
report the mean of log10(regret + floor) across repetitions with a bootstrap
standard deviation obtained by resampling repetitions.
"""

from __future__ import annotations

import csv
import json
import math
import os
import shlex
import subprocess
from dataclasses import dataclass, field, replace

import numpy as np

from .baselines import RandomOptimizer, TpeConfig, TpeOptimizer
from .engine import GP_STRATEGIES, BayesOptimizer
from .exceptions import ExternalObjectiveError, IncompleteGridError
from .space import Categorical, Config, Integer, Real, SearchSpace
from .synthetic import GpSampleObjective

STRATEGIES = GP_STRATEGIES + ("tpe", "random")

RECORD_COLUMNS = (
    "strategy",
    "repetition",
    "iteration",
    "eval_config_json",
    "observed_y",
    "recommendation_json",
    "regret",
)
SUMMARY_COLUMNS = ("strategy", "iteration", "mean_log10_regret", "bootstrap_std")

LAYOUTS = {
    "2d-int": (lambda: SearchSpace([Real(0.0, 1.0), Integer(0, 4)]), 200),
    "2d-cat": (
        lambda: SearchSpace([Real(0.0, 1.0), Categorical([f"c{i}" for i in range(5)])]),
        200,
    ),
    "4d-int": (
        lambda: SearchSpace([Real(0.0, 1.0), Real(0.0, 1.0), Integer(0, 4), Integer(0, 4)]),
        50,
    ),
    "4d-cat": (
        lambda: SearchSpace(
            [
                Real(0.0, 1.0),
                Real(0.0, 1.0),
                Categorical(["c0", "c1", "c2"]),
                Categorical(["c0", "c1", "c2"]),
            ]
        ),
        50,
    ),
}


def make_layout(name: str) -> tuple[SearchSpace, int]:
    """Named benchmark space and its default grid density."""
    try:
        factory, density = LAYOUTS[name]
    except KeyError:
        raise ValueError(f"unknown layout {name!r}, expected one of {sorted(LAYOUTS)}") from None
    return factory(), density


@dataclass
class ExperimentConfig:
    space: SearchSpace
    strategies: tuple = ("proposed",)
    iterations: int = 50
    repetitions: int = 100
    seed: int = 0
    noise_variance: float = 0.0
    n_init: int = 3
    hyper_samples: int = 10
    burn_in: int = 50
    kernel_family: str = "matern32"
    bootstrap_samples: int = 200
    grid_density: int = 200
    regret_floor: float = 1e-8
    objective_amplitude: float = 1.0
    objective_lengthscale: float = 0.3
    objective_family: str = "squared_exponential"
    objective_cmd: str | None = None
    recommend: str | None = None
    tpe: TpeConfig = field(default_factory=TpeConfig)

    def __post_init__(self):
        self.strategies = tuple(self.strategies)
        for s in self.strategies:
            if s not in STRATEGIES:
                raise ValueError(f"unknown strategy {s!r}, expected one of {STRATEGIES}")
        if not (isinstance(self.seed, (int, np.integer)) and self.seed >= 0):
            raise ValueError("seed must be a nonnegative integer")
        if self.iterations < 1 or self.repetitions < 1:
            raise ValueError("iterations and repetitions must be positive")
        if self.objective_cmd is not None and self.recommend == "posterior_mean":
            raise ValueError("external objectives only support best-observed recommendations")


@dataclass
class RunRecord:
    strategy: str
    repetition: int
    iteration: int
    config: Config
    observed_y: float
    recommendation: Config
    regret: float
    point: np.ndarray | None = None
    recommendation_value: float | None = None


@dataclass(frozen=True)
class SummaryRow:
    strategy: str
    iteration: int
    mean_log10_regret: float
    bootstrap_std: float


class SubprocessObjective:
    """One evaluation per child process: a JSON configuration line on stdin,
    one float on stdout."""

    def __init__(self, cmd: str):
        self.argv = shlex.split(cmd)
        if not self.argv:
            raise ValueError("empty objective command")

    def query(self, config, noise_variance: float = 0.0, rng=None) -> float:
        del noise_variance, rng  # noise belongs to the external program
        line = json.dumps(list(config)) + "\n"
        proc = subprocess.run(self.argv, input=line, capture_output=True, text=True)
        if proc.returncode != 0:
            raise ExternalObjectiveError(
                f"objective command failed with code {proc.returncode}: {proc.stderr.strip()}"
            )
        try:
            return float(proc.stdout.strip())
        except ValueError:
            raise ExternalObjectiveError(
                f"objective command printed {proc.stdout!r}, expected one float"
            ) from None


def _make_optimizer(strategy: str, cfg: ExperimentConfig, seed):
    if strategy in GP_STRATEGIES:
        return BayesOptimizer(
            cfg.space,
            strategy=strategy,
            kernel_family=cfg.kernel_family,
            n_init=cfg.n_init,
            n_hyper_samples=cfg.hyper_samples,
            burn_in=cfg.burn_in,
            noiseless=cfg.noise_variance == 0.0,
            seed=seed,
        )
    if strategy == "tpe":
        return TpeOptimizer(cfg.space, tpe=cfg.tpe, n_init=cfg.n_init, seed=seed)
    return RandomOptimizer(cfg.space, n_init=cfg.n_init, seed=seed)


def _recommend_mode(strategy: str, cfg: ExperimentConfig) -> str:
    if strategy not in GP_STRATEGIES:
        return "best_observed"
    if cfg.recommend is not None:
        return cfg.recommend
    return "best_observed" if cfg.objective_cmd else "posterior_mean"


def run_experiment(cfg: ExperimentConfig) -> list:
    records: list[RunRecord] = []
    for rep in range(cfg.repetitions):
        if cfg.objective_cmd:
            objective = SubprocessObjective(cfg.objective_cmd)
            f_star = None
        else:
            objective = GpSampleObjective(
                cfg.space,
                seed=cfg.seed + rep,
                amplitude=cfg.objective_amplitude,
                lengthscale=cfg.objective_lengthscale,
                family=cfg.objective_family,
            )
            _, f_star = objective.true_minimum(cfg.grid_density)
        for strategy in cfg.strategies:
            records.extend(_run_one(cfg, rep, strategy, objective, f_star))
    return records


def _run_one(cfg, rep, strategy, objective, f_star):
    opt = _make_optimizer(strategy, cfg, seed=(cfg.seed, rep))
    noise_rng = np.random.default_rng(np.random.SeedSequence((cfg.seed, rep)).spawn(4)[3])
    mode = _recommend_mode(strategy, cfg)
    for _ in range(cfg.n_init):
        s = opt.ask()
        opt.tell(s, objective.query(s.config, cfg.noise_variance, noise_rng))
    rows = []
    best_seen = math.inf
    for it in range(1, cfg.iterations + 1):
        s = opt.ask()
        y = objective.query(s.config, cfg.noise_variance, noise_rng)
        opt.tell(s, y)
        best_seen = min(best_seen, y)
        rec = opt.recommend(mode)
        if f_star is None:
            # external objective: regret against the run's final best is
            # filled in below, the recommendation value is the best so far
            rec_value = best_seen
            regret = math.nan
        else:
            rec_value = objective.latent(rec)
            regret = abs(rec_value - f_star)
        rows.append(
            RunRecord(
                strategy=strategy,
                repetition=rep,
                iteration=it,
                config=s.config,
                observed_y=y,
                recommendation=rec,
                regret=regret,
                point=s.point,
                recommendation_value=rec_value,
            )
        )
    if f_star is None:
        final_best = min(row.recommendation_value for row in rows)
        rows = [replace(row, regret=row.recommendation_value - final_best) for row in rows]
    return rows


def summarize(
    records,
    bootstrap_samples: int = 200,
    seed: int = 0,
    regret_floor: float = 1e-8,
) -> list:
    """Mean log10(regret + floor) per strategy and iteration, with the
    bootstrap (over repetitions) standard deviation of that mean."""
    strategies, reps, iters = [], set(), set()
    for r in records:
        if r.strategy not in strategies:
            strategies.append(r.strategy)
        reps.add(r.repetition)
        iters.add(r.iteration)
    reps = sorted(reps)
    iters = sorted(iters)
    rep_pos = {r: i for i, r in enumerate(reps)}
    it_pos = {t: i for i, t in enumerate(iters)}
    rng = np.random.default_rng(np.random.SeedSequence((seed, 0xB0)))
    rows = []
    for strategy in strategies:
        grid = np.full((len(reps), len(iters)), np.nan)
        for r in records:
            if r.strategy == strategy:
                grid[rep_pos[r.repetition], it_pos[r.iteration]] = r.regret
        if np.isnan(grid).any():
            missing = int(np.isnan(grid).sum())
            raise IncompleteGridError(
                f"strategy {strategy!r} is missing {missing} (repetition, iteration) cells"
            )
        logs = np.log10(grid + regret_floor)
        means = logs.mean(axis=0)
        idx = rng.integers(0, len(reps), size=(bootstrap_samples, len(reps)))
        boot = logs[idx].mean(axis=1)
        stds = boot.std(axis=0)
        for t, m, s in zip(iters, means, stds):
            rows.append(SummaryRow(strategy, t, float(m), float(s)))
    return rows


# -- files -------------------------------------------------------------------


def _fmt(x: float) -> str:
    return repr(float(x))


def write_records(records, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RECORD_COLUMNS)
        for r in records:
            w.writerow(
                [
                    r.strategy,
                    r.repetition,
                    r.iteration,
                    json.dumps(list(r.config)),
                    _fmt(r.observed_y),
                    json.dumps(list(r.recommendation)),
                    _fmt(r.regret),
                ]
            )


def read_records(path) -> list:
    records = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != RECORD_COLUMNS:
            raise ValueError(f"unexpected records header {reader.fieldnames}")
        for row in reader:
            records.append(
                RunRecord(
                    strategy=row["strategy"],
                    repetition=int(row["repetition"]),
                    iteration=int(row["iteration"]),
                    config=tuple(json.loads(row["eval_config_json"])),
                    observed_y=float(row["observed_y"]),
                    recommendation=tuple(json.loads(row["recommendation_json"])),
                    regret=float(row["regret"]),
                )
            )
    return records


def write_summary(rows, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SUMMARY_COLUMNS)
        for r in rows:
            w.writerow([r.strategy, r.iteration, _fmt(r.mean_log10_regret), _fmt(r.bootstrap_std)])


def plot_summary(rows, path) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 4.5))
    strategies = []
    for r in rows:
        if r.strategy not in strategies:
            strategies.append(r.strategy)
    for strategy in strategies:
        xs = [r.iteration for r in rows if r.strategy == strategy]
        ms = np.array([r.mean_log10_regret for r in rows if r.strategy == strategy])
        ss = np.array([r.bootstrap_std for r in rows if r.strategy == strategy])
        (line,) = ax.plot(xs, ms, label=strategy)
        ax.fill_between(xs, ms - ss, ms + ss, alpha=0.2, color=line.get_color())
    ax.set_xlabel("iteration")
    ax.set_ylabel("mean log10(regret)")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def emit_outputs(records, summary, outdir) -> dict:
    """Write records.csv, summary.csv and regret.svg; returns the paths."""
    os.makedirs(outdir, exist_ok=True)
    paths = {
        "records": os.path.join(outdir, "records.csv"),
        "summary": os.path.join(outdir, "summary.csv"),
        "plot": os.path.join(outdir, "regret.svg"),
    }
    write_records(records, paths["records"])
    write_summary(summary, paths["summary"])
    plot_summary(summary, paths["plot"])
    return paths
