"""
LGNN Training
Stochastic gradient ascent on either unsupervised objective, Adam updates,
and test-time decoding of a cut
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional

import numpy as np

from config import (
    GNN_BATCH_SIZE, GNN_DECAY_EVERY, GNN_EPOCHS, GNN_LEARNING_RATE, GNN_LR_DECAY,
    GNN_PG_BASELINE, GNN_PG_SAMPLES, GNN_TRAIN_GRAPHS,
)
from evaluation.scoring import p_value
from graphs import Graph, Operators, build_line_graph_operators, cut_value
from seeding import derive_seed

from .losses import loss_policy_gradient, loss_relaxation, sample_configs
from .model import (
    PLUS, POLICY_GRADIENT, RELAXATION, GnnConfigurationError, GnnModel,
    as_tensors, forward, forward_tensors, inference_noise_seed, input_signals,
)

logger = logging.getLogger(__name__)


class NonFiniteLossError(RuntimeError):
    """Training produced a NaN or infinite objective."""

    def __init__(self, message: str, snapshot: Dict):
        super().__init__(message)
        self.snapshot = snapshot


@dataclass
class TrainConfig:
    train_graphs: int = GNN_TRAIN_GRAPHS
    pg_samples: int = GNN_PG_SAMPLES
    learning_rate: float = GNN_LEARNING_RATE
    lr_decay: float = GNN_LR_DECAY
    decay_every: int = GNN_DECAY_EVERY
    batch_size: int = GNN_BATCH_SIZE
    epochs: int = GNN_EPOCHS
    seed: int = 0
    baseline: bool = GNN_PG_BASELINE
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    def validate(self) -> None:
        if self.pg_samples < 1:
            raise GnnConfigurationError(f"pg_samples must be >= 1 (got {self.pg_samples})")
        if self.batch_size < 1 or self.epochs < 1 or self.train_graphs < 1:
            raise GnnConfigurationError("batch_size, epochs and train_graphs must be >= 1")
        if self.learning_rate < 0:
            raise GnnConfigurationError(f"learning_rate must be >= 0 (got {self.learning_rate})")
        if self.decay_every < 1:
            raise GnnConfigurationError(f"decay_every must be >= 1 (got {self.decay_every})")


class Adam:
    """Per-parameter adaptive steps with bias-corrected moments."""

    def __init__(self, shapes: Dict[str, tuple], cfg: TrainConfig):
        self.cfg = cfg
        self.m = {k: np.zeros(s) for k, s in shapes.items()}
        self.v = {k: np.zeros(s) for k, s in shapes.items()}
        self.t = 0

    def learning_rate(self) -> float:
        return self.cfg.learning_rate * self.cfg.lr_decay ** (self.t // self.cfg.decay_every)

    def ascend(self, params: Dict[str, np.ndarray], grads: Dict[str, np.ndarray]) -> None:
        """In-place ascent step along grads."""
        lr = self.learning_rate()
        self.t += 1
        b1, b2 = self.cfg.beta1, self.cfg.beta2
        for name, g in grads.items():
            self.m[name] = b1 * self.m[name] + (1 - b1) * g
            self.v[name] = b2 * self.v[name] + (1 - b2) * g * g
            m_hat = self.m[name] / (1 - b1 ** self.t)
            v_hat = self.v[name] / (1 - b2 ** self.t)
            params[name] += lr * m_hat / (np.sqrt(v_hat) + self.cfg.eps)


@dataclass
class TrainingCurve:
    """Per-epoch means of the objective, the decoded cut and its P."""
    objective: List[float] = field(default_factory=list)
    mean_cut: List[float] = field(default_factory=list)
    mean_P: List[float] = field(default_factory=list)
    clamped_logs: int = 0

    def smoothed_objective(self, window: int = 3) -> List[float]:
        out = []
        for i in range(len(self.objective)):
            chunk = self.objective[max(0, i - window + 1):i + 1]
            out.append(sum(chunk) / len(chunk))
        return out


def objective_and_grads(model: GnnModel, g: Graph, ops: Operators, noise_seed: int,
                        sample_seed: int, cfg: TrainConfig) -> tuple:
    """
    Objective value, parameter gradients (zeros for unused blocks), the
    probability matrix and the number of clamped log-probabilities.
    """
    params = as_tensors(model, trainable=True)
    x0, y0 = input_signals(g, ops, noise_seed)
    pi = forward_tensors(model, ops, params, x0, y0)
    clamped = 0
    if model.loss_kind == RELAXATION:
        objective = loss_relaxation(pi, g)
    else:
        samples = sample_configs(pi, cfg.pg_samples, sample_seed)
        objective, stats = loss_policy_gradient(pi, samples, g, baseline=cfg.baseline)
        clamped = stats.clamped_logs
    objective.backward()
    grads = {
        name: (t.grad if t.grad is not None else np.zeros_like(t.data))
        for name, t in params.items()
    }
    return float(objective.data), grads, pi.data, clamped


def decode_threshold(pi: np.ndarray) -> np.ndarray:
    """x_i = +1 iff P(x_i = +1) >= 0.5."""
    return np.where(np.asarray(pi)[:, PLUS] >= 0.5, 1, -1).astype(np.int64)


def train(model: GnnModel, cfg: TrainConfig, graph_stream: Iterable[Graph],
          progress: Optional[Callable[[int, "TrainingCurve"], None]] = None) -> tuple:
    """
    Train a copy of `model` by gradient ascent over the stream.

    Mini-batch gradients are averaged in stream order. The stream is
    materialized once so it can be replayed for every epoch.

    Returns:
        (trained model, TrainingCurve)

    Raises:
        NonFiniteLossError: on a NaN/inf objective, with a diagnostic snapshot
    """
    cfg.validate()
    model.validate()
    trained = model.copy()
    graphs = list(graph_stream)
    if not graphs:
        raise GnnConfigurationError("Training stream is empty")
    n, d = graphs[0].n, graphs[0].d
    if any(g.n != n or g.d != d for g in graphs):
        raise GnnConfigurationError("Training graphs must share (n, d)")

    optimizer = Adam(trained.param_shapes(), cfg)
    curve = TrainingCurve()
    ops_cache: Dict[int, Operators] = {}

    for epoch in range(cfg.epochs):
        objectives, cuts = [], []
        for start in range(0, len(graphs), cfg.batch_size):
            batch = range(start, min(start + cfg.batch_size, len(graphs)))
            summed: Dict[str, np.ndarray] = {}
            for idx in batch:
                g = graphs[idx]
                if idx not in ops_cache:
                    ops_cache[idx] = build_line_graph_operators(g, trained.hops)
                step_seed = derive_seed(cfg.seed, epoch * len(graphs) + idx)
                value, grads, pi, clamped = objective_and_grads(
                    trained, g, ops_cache[idx], derive_seed(step_seed, 0),
                    derive_seed(step_seed, 1), cfg,
                )
                if not math.isfinite(value):
                    raise NonFiniteLossError(
                        f"Non-finite objective at epoch {epoch}, graph {idx}",
                        snapshot={
                            "epoch": epoch,
                            "graph_index": idx,
                            "graph_seed": g.seed,
                            "objective": value,
                            "step": optimizer.t,
                            "param_norms": {k: float(np.linalg.norm(v)) for k, v in trained.params.items()},
                        },
                    )
                curve.clamped_logs += clamped
                objectives.append(value)
                cuts.append(cut_value(g, decode_threshold(pi)))
                for name, g_arr in grads.items():
                    summed[name] = g_arr if name not in summed else summed[name] + g_arr

            optimizer.ascend(trained.params, {k: v / len(batch) for k, v in summed.items()})

        curve.objective.append(float(np.mean(objectives)))
        curve.mean_cut.append(float(np.mean(cuts)))
        curve.mean_P.append(p_value(curve.mean_cut[-1], n, d))
        logger.info("Epoch %d: objective %.4f (3-epoch mean %.4f), mean cut %.2f, P %.4f",
                    epoch + 1, curve.objective[-1], curve.smoothed_objective()[-1],
                    curve.mean_cut[-1], curve.mean_P[-1])
        if progress is not None:
            progress(epoch, curve)

    return trained, curve


def infer_cut(model: GnnModel, g: Graph, ops: Optional[Operators] = None,
              samples: int = GNN_PG_SAMPLES, seed: Optional[int] = None) -> np.ndarray:
    """
    Decode a cut: threshold P(x_i = +1) at 0.5 (ties to +1). Policy-gradient
    models also draw `samples` configurations and keep the best cut, the
    threshold configuration winning ties.
    """
    if ops is None:
        ops = build_line_graph_operators(g, model.hops)
    pi = forward(model, g, ops)
    best = decode_threshold(pi)
    if model.loss_kind != POLICY_GRADIENT:
        return best

    sample_seed = seed if seed is not None else derive_seed(inference_noise_seed(g), 1)
    best_cut = cut_value(g, best)
    for x in sample_configs(pi, samples, sample_seed):
        c = cut_value(g, x)
        if c > best_cut:
            best, best_cut = x, c
    return best
