#!/usr/bin/env python3
"""
RegCut - Banc d'essai max-cut sur graphes d-reguliers
=====================================================
Point d'entree principal.

Usage :
  python main.py gen --n 100 --d 3 --count 10 --out graphs/
  python main.py solve --method eo --graph data/c5.txt
  python main.py bench --config configs/table2.json --out outputs/table2.csv
  python main.py oracle --graph data/c5.txt
  python main.py train --n 50 --d 3 --loss relaxation --out outputs/relax.ckpt
  python main.py study --n 100 --d 3 --graphs 10 --runs 20

Codes de sortie : 0 succes, 1 erreur de parametre, 2 echec d'execution.
"""

import argparse
import logging
import os
import sys
from dataclasses import replace
from pathlib import Path
from typing import List, Optional

# Ajouter le repertoire courant au path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from rich.panel import Panel
from rich.table import Table

from config import (
    DEFAULT_GRAPH_COUNT, DEFAULT_MASTER_SEED, EO_STUDY_RUNS, LOG_LEVEL, OUTPUT_DIR, REGCUT_THREADS,
)
from evaluation import exact_maxcut, p_value
from gnn import POLICY_GRADIENT, RELAXATION, infer_cut, load_checkpoint, save_checkpoint
from graphs import (
    GraphParameterError, atomic_write_text, cut_value, generate_regular, read_edge_list, write_edge_list,
)
from harness import (
    METHODS,
    ExperimentConfig,
    ExperimentConfigError,
    ExperimentFile,
    ResultsStore,
    compare_methods,
    configure_logging,
    console,
    emit_table,
    execute,
    load_experiment_file,
    study_csv,
    train_for,
)
from harness.results_file import to_csv
from seeding import derive_seed
from solvers import eo_initialization_study, eo_run, gw_solve, sdp_upper_bound_p

logger = logging.getLogger("regcut")

EXIT_OK = 0
EXIT_PARAMETER = 1
EXIT_RUNTIME = 2

SOLVE_HEADER = ["method", "n", "d", "graph_seed", "seed", "cut_value", "P", "relax_P", "spins"]
LOSS_ALIASES = {
    "relaxation": RELAXATION,
    "gnn-relax": RELAXATION,
    "policyGradient": POLICY_GRADIENT,
    "pg": POLICY_GRADIENT,
    "gnn-pg": POLICY_GRADIENT,
}
LOSS_METHOD = {RELAXATION: "gnn-relax", POLICY_GRADIENT: "gnn-pg"}

# Subcommands that read an experiment file
CONFIG_COMMANDS = ("solve", "bench", "train", "study")


class UsageExit(SystemExit):
    pass


class CliParser(argparse.ArgumentParser):
    """argparse with usage errors mapped to the parameter-error exit code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise UsageExit(EXIT_PARAMETER)


def print_banner():
    """Affiche la banniere RegCut."""
    console.print(Panel.fit(
        "[bold]REGCUT[/bold]  max-cut on random d-regular graphs\n"
        "EO  |  SDP  |  LGNN",
        border_style="cyan",
    ))


def stage(title: str) -> None:
    console.rule(f"[bold]{title}")


def emit(text: str, out: Optional[str]) -> None:
    """Machine-readable output: stdout, or an atomically written file."""
    if out:
        atomic_write_text(out, text)
        logger.info("Wrote %s", out)
    else:
        sys.stdout.write(text)


def spins_text(x) -> str:
    return "".join("+" if v > 0 else "-" for v in x)


def experiment_file_from_args(args, methods: List[str]) -> ExperimentFile:
    """Load --config, or build the same schema from the command-line flags."""
    if args.config:
        exp_file = load_experiment_file(args.config)
    else:
        if args.n is None or args.d is None:
            raise ExperimentConfigError("either --config or both --n and --d are required")
        exp_file = ExperimentFile.model_validate({
            "methods": methods,
            "n": args.n,
            "d": args.d,
            "graph_count": getattr(args, "graphs", None) or DEFAULT_GRAPH_COUNT,
        })
    if args.seed is not None:
        exp_file = exp_file.model_copy(update={"master_seed": args.seed})
    if getattr(args, "steps", None):
        exp_file = exp_file.model_copy(update={"eo": exp_file.eo.model_copy(update={"t_max": args.steps})})
    return exp_file


# ── gen ──

def cmd_gen(args) -> int:
    seed = args.seed if args.seed is not None else DEFAULT_MASTER_SEED
    out_dir = Path(args.out or os.path.join(OUTPUT_DIR, "graphs"))
    stage(f"Generating {args.count} graph(s), n={args.n} d={args.d}")
    for i in range(args.count):
        g = generate_regular(args.n, args.d, derive_seed(seed, i))
        path = out_dir / f"graph_n{args.n}_d{args.d}_{i:04d}.txt"
        write_edge_list(g, path)
        print(path)
    return EXIT_OK


# ── solve ──

def solver_cell(args, g) -> ExperimentConfig:
    """Solver settings for one graph: the --config blocks, or the defaults."""
    method = getattr(args, "method", None) or "eo"
    if args.config:
        return load_experiment_file(args.config).cell(method, g.n, g.d)
    return ExperimentConfig(method=method, n=g.n, d=g.d)


def cmd_solve(args) -> int:
    g = read_edge_list(args.graph)
    if g.d < 1:
        raise GraphParameterError(f"{args.graph}: P is undefined for d={g.d}")
    cfg = solver_cell(args, g)
    seed = args.seed if args.seed is not None else derive_seed(g.seed or 0, 1)
    relax_p = ""

    if args.method == "eo":
        params = replace(cfg.eo, seed=seed, trace=bool(args.trace))
        if args.steps:
            params.t_max = args.steps
        result = eo_run(g, params)
        x = result.best
        if args.trace:
            atomic_write_text(args.trace, to_csv(["step", "cut"], result.trace or []))
    elif args.method == "sdp":
        result = gw_solve(g, replace(cfg.sdp, seed=seed))
        x = result.best_config
        relax_p = f"{sdp_upper_bound_p(result.relax_value, g.n, g.d):.4f}"
        logger.info("Relaxation value %.6f after %d sweeps (converged=%s)",
                    result.relax_value, result.sweeps_used, result.converged)
    else:
        if not args.checkpoint:
            raise ExperimentConfigError(f"--method {args.method} needs --checkpoint")
        model = load_checkpoint(args.checkpoint)
        if LOSS_METHOD[model.loss_kind] != args.method:
            raise ExperimentConfigError(f"Checkpoint holds a {model.loss_kind} model, not {args.method}")
        x = infer_cut(model, g, samples=cfg.train.pg_samples, seed=seed)

    cut = cut_value(g, x)

    row = [args.method, g.n, g.d, g.seed or 0, seed, cut, f"{p_value(cut, g.n, g.d):.4f}", relax_p, spins_text(x)]
    emit(to_csv(SOLVE_HEADER, [row]), args.out)
    return EXIT_OK


# ── bench ──

def cmd_bench(args) -> int:
    exp_file = experiment_file_from_args(args, args.method or ["eo"])
    out = args.out or exp_file.output or os.path.join(OUTPUT_DIR, "bench.csv")
    threads = args.threads or REGCUT_THREADS
    model = load_checkpoint(args.checkpoint) if args.checkpoint else None

    records = []
    for cfg in exp_file.expand():
        cfg.output = None
        stage(f"{cfg.label()}  ({cfg.graph_count} graphs)")
        cell_model = model if model is not None and LOSS_METHOD[model.loss_kind] == cfg.method else None
        state = execute(cfg, threads=threads, model=cell_model)
        for line in state.workflow_log:
            console.print(f"  {line}")
        records.extend(state.records)

    store = ResultsStore(out)
    store.save(records)
    table = emit_table(records)
    summary_path = store.save_summary(table.summaries)
    if table.text:
        console.print(table.text, markup=False, highlight=False)
    console.print(f"  Records: {store.records_path}\n  Summary: {summary_path}")

    if args.overlap:
        overlap_path = store.save_overlap(compare_methods(records))
        console.print(f"  Overlap: {overlap_path}")

    failed = sum(1 for r in records if r.error)
    if failed:
        logger.warning("%d of %d trials failed; see the error column", failed, len(records))
    return EXIT_OK


# ── oracle ──

def cmd_oracle(args) -> int:
    g = read_edge_list(args.graph)
    value, x = exact_maxcut(g)
    logger.info("Optimal configuration %s", spins_text(x))
    print(int(value) if float(value).is_integer() else value)
    return EXIT_OK


# ── train ──

def cmd_train(args) -> int:
    loss = LOSS_ALIASES[args.loss]
    exp_file = experiment_file_from_args(args, [LOSS_METHOD[loss]])
    if args.graphs:
        exp_file = exp_file.model_copy(update={"gnn": exp_file.gnn.model_copy(update={"train_graphs": args.graphs})})
    if args.epochs:
        exp_file = exp_file.model_copy(update={"gnn": exp_file.gnn.model_copy(update={"epochs": args.epochs})})
    cfg = exp_file.cell(LOSS_METHOD[loss], exp_file.sizes()[0], exp_file.degrees()[0])
    cfg.validate()

    stage(f"Training {loss} LGNN on {cfg.train.train_graphs} graphs, n={cfg.n} d={cfg.d}")
    model, curve = train_for(cfg)

    table = Table(title="Training curve")
    for col in ("epoch", "objective", "3-epoch mean", "mean cut", "P"):
        table.add_column(col, justify="right")
    rows = zip(curve.objective, curve.smoothed_objective(), curve.mean_cut, curve.mean_P)
    for e, (obj, smooth, cut, p) in enumerate(rows, start=1):
        table.add_row(str(e), f"{obj:.4f}", f"{smooth:.4f}", f"{cut:.2f}", f"{p:.4f}")
    console.print(table)
    if curve.clamped_logs:
        logger.warning("%d log-probabilities were clamped during training", curve.clamped_logs)

    out = args.out or os.path.join(OUTPUT_DIR, f"lgnn_{LOSS_METHOD[loss]}_n{cfg.n}_d{cfg.d}.ckpt")
    save_checkpoint(model, out)
    print(out)
    return EXIT_OK


# ── study ──

def cmd_study(args) -> int:
    if args.runs < 1:
        raise ExperimentConfigError(f"--runs must be >= 1 (got {args.runs})")
    if args.graph:
        graphs = [(0, read_edge_list(args.graph))]
    else:
        exp_file = experiment_file_from_args(args, ["eo"])
        n, d = exp_file.sizes()[0], exp_file.degrees()[0]
        stage(f"EO initialization study on {exp_file.graph_count} graph(s), n={n} d={d}")
        graphs = [(i, generate_regular(n, d, derive_seed(exp_file.master_seed, i))) for i in range(exp_file.graph_count)]

    rows = []
    for i, g in graphs:
        params = replace(solver_cell(args, g).eo, seed=derive_seed(g.seed or 0, 1))
        if args.steps:
            params.t_max = args.steps
        res = eo_initialization_study(g, params, runs=args.runs)
        rows.append((i, g.seed or 0, args.runs, res.max_P, res.min_P, res.overlap_mean, res.overlap_std))
        logger.info("Graph %d: P in [%.4f, %.4f], overlap %.4f +/- %.4f",
                    i, res.min_P, res.max_P, res.overlap_mean, res.overlap_std)
    emit(study_csv(rows), args.out)
    return EXIT_OK


def build_parser() -> CliParser:
    common = CliParser(add_help=False)
    common.add_argument("--config", type=str, help="Fichier d'experience JSON")
    common.add_argument("--seed", type=int, help="Graine maitresse (ou graine du solveur pour solve)")
    common.add_argument("--out", type=str, help="Fichier ou repertoire de sortie")
    common.add_argument("--log-level", type=str, default=None, help="DEBUG, INFO, WARNING, ...")

    parser = CliParser(description="RegCut - max-cut solvers and benchmarks on random d-regular graphs")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=CliParser)

    p = sub.add_parser("gen", parents=[common], help="Write random d-regular graph files")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--count", type=int, default=1)
    p.set_defaults(handler=cmd_gen)

    p = sub.add_parser("solve", parents=[common], help="Run one method on one graph file")
    p.add_argument("--method", choices=METHODS, required=True)
    p.add_argument("--graph", type=str, required=True)
    p.add_argument("--checkpoint", type=str, help="Trained LGNN for gnn-* methods")
    p.add_argument("--trace", type=str, help="CSV path for the EO (step, cut) trace")
    p.add_argument("--steps", type=int, help="EO step budget t_max")
    p.set_defaults(handler=cmd_solve)

    p = sub.add_parser("bench", parents=[common], help="Run a benchmark experiment")
    p.add_argument("--method", choices=METHODS, action="append")
    p.add_argument("--n", type=int, action="append")
    p.add_argument("--d", type=int, action="append")
    p.add_argument("--graphs", type=int, help="Number of benchmark graphs per cell")
    p.add_argument("--steps", type=int, help="EO step budget t_max")
    p.add_argument("--threads", type=int, help="Worker pool size (default REGCUT_THREADS)")
    p.add_argument("--checkpoint", type=str, help="Skip training and evaluate this LGNN")
    p.add_argument("--overlap", action="store_true", help="Also write the cross-method overlap CSV")
    p.set_defaults(handler=cmd_bench)

    p = sub.add_parser("oracle", parents=[common], help="Exact max-cut by enumeration (n <= 24)")
    p.add_argument("--graph", type=str, required=True)
    p.set_defaults(handler=cmd_oracle)

    p = sub.add_parser("train", parents=[common], help="Train an LGNN and save a checkpoint")
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--loss", choices=sorted(LOSS_ALIASES), default="relaxation")
    p.add_argument("--graphs", type=int, help="Training graphs")
    p.add_argument("--epochs", type=int)
    p.set_defaults(handler=cmd_train)

    p = sub.add_parser("study", parents=[common], help="Compare independent EO initializations")
    p.add_argument("--graph", type=str, help="Study one graph file instead of generated graphs")
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--graphs", type=int)
    p.add_argument("--runs", type=int, default=EO_STUDY_RUNS)
    p.add_argument("--steps", type=int, help="EO step budget t_max")
    p.set_defaults(handler=cmd_study)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageExit as e:
        return e.code
    configure_logging(args.log_level or LOG_LEVEL)
    print_banner()

    try:
        if args.config and args.command not in CONFIG_COMMANDS:
            raise ExperimentConfigError(f"--config is not used by {args.command}")
        return args.handler(args)
    except (ValueError, FileNotFoundError) as e:
        logger.error("%s: %s", type(e).__name__, e)
        return EXIT_PARAMETER
    except Exception as e:
        logger.error("%s: %s", type(e).__name__, e)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
