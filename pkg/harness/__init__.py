"""
Benchmark Harness
Experiment orchestration, result files, tables and console logging
"""

from .experiment import (
    METHODS,
    ExperimentConfig,
    ExperimentConfigError,
    ExperimentState,
    GnnArchitecture,
    OverlapRow,
    TrialRecord,
    benchmark_graph_seeds,
    compare_methods,
    execute,
    run_experiment,
    run_trial,
    train_for,
)
from .results_file import ResultsStore, records_csv, summary_csv, overlap_csv, study_csv
from .tables import TableOutput, emit_table
from .config_file import ExperimentFile, load_experiment_file
from .logging_setup import configure_logging, console

__all__ = [
    "METHODS",
    "ExperimentConfig",
    "ExperimentConfigError",
    "ExperimentState",
    "GnnArchitecture",
    "OverlapRow",
    "TrialRecord",
    "benchmark_graph_seeds",
    "compare_methods",
    "execute",
    "run_experiment",
    "run_trial",
    "train_for",
    "ResultsStore",
    "records_csv",
    "summary_csv",
    "overlap_csv",
    "study_csv",
    "TableOutput",
    "emit_table",
    "ExperimentFile",
    "load_experiment_file",
    "configure_logging",
    "console",
]
