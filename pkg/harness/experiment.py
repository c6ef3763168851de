"""
Experiment Orchestrator
Generates the benchmark graphs of one (method, n, d) cell, runs the method
on each under a bounded worker pool and collects one TrialRecord per graph
"""

import logging
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field, replace
from datetime import datetime
from itertools import combinations
from typing import Callable, Dict, List, Optional

import numpy as np

from config import (
    DEFAULT_GRAPH_COUNT, DEFAULT_MASTER_SEED, GNN_DEGREE_TERM, GNN_HOPS, GNN_LAYERS, GNN_NORMALIZE,
    GNN_WIDTH, REGCUT_THREADS,
)
from evaluation import overlap, p_value
from gnn import (
    POLICY_GRADIENT, RELAXATION, GnnModel, TrainConfig, TrainingCurve, infer_cut, init_model, train,
)
from graphs import Graph, cut_value, generate_regular
from seeding import derive_seed, training_seed
from solvers import EoParams, SdpParams, eo_run, gw_solve

from .logging_setup import configure_logging

logger = logging.getLogger(__name__)

METHODS = ("eo", "sdp", "gnn-relax", "gnn-pg")
GNN_LOSS = {"gnn-relax": RELAXATION, "gnn-pg": POLICY_GRADIENT}

# Seed-stream indices far above any graph index
MODEL_INIT_INDEX = 1 << 40
TRAIN_STEP_INDEX = (1 << 40) + 1


class ExperimentConfigError(ValueError):
    """Raised on an invalid experiment configuration."""
    pass


@dataclass
class GnnArchitecture:
    layers: int = GNN_LAYERS
    hops: int = GNN_HOPS
    width: int = GNN_WIDTH
    use_degree_term: bool = GNN_DEGREE_TERM
    normalize: bool = GNN_NORMALIZE


@dataclass
class ExperimentConfig:
    method: str
    n: int
    d: int
    graph_count: int = DEFAULT_GRAPH_COUNT
    master_seed: int = DEFAULT_MASTER_SEED
    eo: EoParams = field(default_factory=EoParams)
    sdp: SdpParams = field(default_factory=SdpParams)
    train: TrainConfig = field(default_factory=TrainConfig)
    architecture: GnnArchitecture = field(default_factory=GnnArchitecture)
    output: Optional[str] = None

    def validate(self) -> None:
        if self.method not in METHODS:
            raise ExperimentConfigError(f"Unknown method '{self.method}' (expected one of {list(METHODS)})")
        if self.graph_count < 1:
            raise ExperimentConfigError(f"graph_count must be >= 1 (got {self.graph_count})")
        if self.n < 2 or self.d < 1 or self.d >= self.n or (self.n * self.d) % 2:
            raise ExperimentConfigError(f"No simple {self.d}-regular graph on {self.n} vertices")
        if self.method == "eo":
            self.eo.validate()
        elif self.method == "sdp":
            self.sdp.validate()
        else:
            self.train.validate()

    def label(self) -> str:
        return f"{self.method} n={self.n} d={self.d}"


@dataclass
class TrialRecord:
    """One solver run on one benchmark graph; error is empty on success."""
    method: str
    n: int
    d: int
    graph_index: int
    graph_seed: int
    trial_seed: int
    cut_value: Optional[float]
    P: Optional[float]
    wall_time_ms: float = 0.0
    error: str = ""
    config: Optional[np.ndarray] = field(default=None, repr=False, compare=False)

    def sort_key(self) -> tuple:
        return (self.method, self.n, self.d, self.graph_index)


@dataclass
class ExperimentState:
    """Everything one run_experiment call produced."""
    config: ExperimentConfig
    records: List[TrialRecord] = field(default_factory=list)
    workflow_log: List[str] = field(default_factory=list)
    model: Optional[GnnModel] = None
    curve: Optional[TrainingCurve] = None

    def log_stage(self, message: str) -> None:
        line = f"[{datetime.now().strftime('%H:%M:%S')}] {message}"
        self.workflow_log.append(line)
        logger.info("%s: %s", self.config.label(), message)

    @property
    def failures(self) -> List[TrialRecord]:
        return [r for r in self.records if r.error]


def benchmark_graph_seeds(master_seed: int, count: int) -> List[int]:
    return [derive_seed(master_seed, i) for i in range(count)]


def training_stream(cfg: ExperimentConfig):
    """Training graphs, seeded from a stream disjoint from the benchmark seeds."""
    for t in range(cfg.train.train_graphs):
        yield generate_regular(cfg.n, cfg.d, training_seed(cfg.master_seed, t))


def train_for(cfg: ExperimentConfig,
              progress: Optional[Callable[[int, TrainingCurve], None]] = None) -> tuple:
    """Initialize and train the LGNN a gnn-* cell evaluates with."""
    arch = cfg.architecture
    model = init_model(
        layers=arch.layers,
        hops=arch.hops,
        width=arch.width,
        loss_kind=GNN_LOSS[cfg.method],
        seed=derive_seed(cfg.master_seed, MODEL_INIT_INDEX),
        use_degree_term=arch.use_degree_term,
        normalize=arch.normalize,
    )
    train_cfg = replace(cfg.train, seed=derive_seed(cfg.master_seed, TRAIN_STEP_INDEX))
    return train(model, train_cfg, training_stream(cfg), progress=progress)


def _solve(cfg: ExperimentConfig, g: Graph, trial_seed: int, model: Optional[GnnModel]) -> np.ndarray:
    if cfg.method == "eo":
        return eo_run(g, replace(cfg.eo, seed=trial_seed, trace=False)).best
    if cfg.method == "sdp":
        return gw_solve(g, replace(cfg.sdp, seed=trial_seed)).best_config
    return infer_cut(model, g, samples=cfg.train.pg_samples, seed=trial_seed)


def run_trial(cfg: ExperimentConfig, index: int, graph_seed: int,
              model: Optional[GnnModel] = None) -> TrialRecord:
    """Generate benchmark graph `index` and solve it; failures become error records."""
    trial_seed = derive_seed(graph_seed, 1)
    record = TrialRecord(method=cfg.method, n=cfg.n, d=cfg.d, graph_index=index,
                         graph_seed=graph_seed, trial_seed=trial_seed, cut_value=None, P=None)
    start = time.perf_counter()
    try:
        g = generate_regular(cfg.n, cfg.d, graph_seed)
        x = _solve(cfg, g, trial_seed, model)
        record.cut_value = cut_value(g, x)
        record.P = p_value(record.cut_value, cfg.n, cfg.d)
        record.config = np.asarray(x, dtype=np.int64)
    except Exception as e:
        record.error = f"{type(e).__name__}: {e}".encode("ascii", "replace").decode("ascii")
        logger.warning("Trial %s graph %d failed: %s", cfg.label(), index, record.error)
    record.wall_time_ms = (time.perf_counter() - start) * 1000.0
    return record


def execute(cfg: ExperimentConfig, threads: int = REGCUT_THREADS,
            model: Optional[GnnModel] = None,
            progress: Optional[Callable[[int, TrainingCurve], None]] = None) -> ExperimentState:
    """
    Run one experiment cell.

    gnn-* methods train once on the training stream unless a trained
    `model` is supplied. With threads > 1 the trials run in that many
    worker processes; threads == 1 solves them in this process. Records
    come back stable-sorted by (method, n, d, graph_index) whatever the
    completion order, and are written atomically when cfg.output is set.
    """
    cfg.validate()
    if threads < 1:
        raise ExperimentConfigError(f"threads must be >= 1 (got {threads})")
    state = ExperimentState(config=cfg)

    state.log_stage("STAGE 1: Graph seeds")
    seeds = benchmark_graph_seeds(cfg.master_seed, cfg.graph_count)

    if cfg.method in GNN_LOSS:
        if model is None:
            state.log_stage(f"STAGE 2: Training on {cfg.train.train_graphs} graphs")
            model, state.curve = train_for(cfg, progress)
        elif model.loss_kind != GNN_LOSS[cfg.method]:
            raise ExperimentConfigError(
                f"Checkpoint was trained with {model.loss_kind}, method {cfg.method} needs {GNN_LOSS[cfg.method]}"
            )
        state.model = model

    state.log_stage(f"STAGE 3: Solving {cfg.graph_count} graphs on {threads} worker(s)")
    if threads == 1:
        records = [run_trial(cfg, i, s, model) for i, s in enumerate(seeds)]
    else:
        records = []
        with ProcessPoolExecutor(max_workers=threads, initializer=configure_logging,
                                 initargs=(logging.getLevelName(logging.getLogger().level),)) as pool:
            futures = [pool.submit(run_trial, cfg, i, s, model) for i, s in enumerate(seeds)]
            for future in as_completed(futures):
                records.append(future.result())
    state.records = sorted(records, key=TrialRecord.sort_key)

    failed = len(state.failures)
    state.log_stage(f"Done: {len(records) - failed} ok, {failed} failed")

    if cfg.output:
        from .results_file import ResultsStore
        ResultsStore(cfg.output).save(state.records)
    return state


def run_experiment(cfg: ExperimentConfig, threads: int = REGCUT_THREADS,
                   model: Optional[GnnModel] = None) -> List[TrialRecord]:
    return execute(cfg, threads=threads, model=model).records


@dataclass(frozen=True)
class OverlapRow:
    method_a: str
    method_b: str
    count: int
    mean_nu: float
    std_nu: float


def compare_methods(records: List[TrialRecord]) -> List[OverlapRow]:
    """
    Mean and population std of the overlap between every pair of methods,
    over the graphs (same n, d, graph_index) both solved successfully.
    """
    by_method: Dict[str, Dict[tuple, np.ndarray]] = {}
    for r in records:
        if r.error or r.config is None:
            continue
        by_method.setdefault(r.method, {})[(r.n, r.d, r.graph_index)] = r.config

    rows = []
    for a, b in combinations(sorted(by_method), 2):
        shared = sorted(set(by_method[a]) & set(by_method[b]))
        if not shared:
            logger.warning("No common graphs for %s vs %s; pair skipped", a, b)
            continue
        nus = np.array([overlap(by_method[a][k], by_method[b][k]).nu for k in shared])
        rows.append(OverlapRow(method_a=a, method_b=b, count=len(shared),
                               mean_nu=float(nus.mean()), std_nu=float(nus.std())))
    return rows
