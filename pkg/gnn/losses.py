"""
Unsupervised Cut Objectives
Relaxed quadratic cut and the REINFORCE surrogate over sampled configurations
"""

from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from graphs import Graph

from . import autodiff as ad
from .model import PLUS

# log-probabilities are floored at log(LOG_FLOOR)
LOG_FLOOR = 1e-12


@dataclass
class LossStats:
    value: float
    clamped_logs: int = 0
    mean_sample_cut: float = float("nan")


def _as_tensor(pi) -> ad.Tensor:
    return pi if isinstance(pi, ad.Tensor) else ad.constant(pi)


def loss_relaxation(pi, g: Graph) -> ad.Tensor:
    """1/4 (2p - 1)^T L (2p - 1) with p = P(x = +1); maximized in training."""
    p = ad.column(_as_tensor(pi), PLUS)
    return ad.affine(ad.quadratic_form(g.laplacian(), ad.affine(p, 2.0, -1.0)), 0.25)


def sample_configs(pi, count: int, seed: int) -> List[np.ndarray]:
    """`count` independent configurations with x_i = +1 w.p. pi[i, PLUS]."""
    if count < 1:
        raise ValueError(f"Sample count must be >= 1 (got {count})")
    probs = np.asarray(pi.data if isinstance(pi, ad.Tensor) else pi)[:, PLUS]
    rng = np.random.default_rng(seed)
    draws = rng.random((count, probs.size))
    # strict < keeps p = 0 at -1 and p = 1 at +1 for every draw in [0, 1)
    return [np.where(row < probs, 1, -1).astype(np.int64) for row in draws]


def sample_cut_values(g: Graph, samples: Sequence[np.ndarray]) -> np.ndarray:
    """f(x_k) = 1/4 x_k^T L x_k for each sample."""
    if not g.edges:
        return np.zeros(len(samples))
    e = g.edge_array()
    x = np.asarray(samples)
    return (x[:, e[:, 0]] != x[:, e[:, 1]]) @ g.weight_array()


def loss_policy_gradient(pi, samples: Sequence[np.ndarray], g: Graph,
                         baseline: bool = False) -> tuple:
    """
    Surrogate (1/K) sum_k f(x_k) sum_i log pi(x_{k,i}); f is a constant
    weight, so the surrogate's gradient is the REINFORCE estimate.

    With baseline=True the weights are f(x_k) - mean_k f.

    Returns:
        (surrogate tensor, LossStats)
    """
    pi_t = _as_tensor(pi)
    x = np.asarray(samples, dtype=np.int64)
    cuts = sample_cut_values(g, samples)
    weights = cuts - cuts.mean() if baseline else cuts

    # column index of the sampled side: +1 -> PLUS, -1 -> the other column
    cols = np.where(x == 1, PLUS, 1 - PLUS)
    logs, clamped = ad.clamped_log(ad.gather_rows(pi_t, cols), LOG_FLOOR)
    weighted = ad.scale_by(logs, weights.reshape(-1, 1) / len(samples))
    surrogate = ad.total(weighted)
    return surrogate, LossStats(value=float(surrogate.data), clamped_logs=clamped,
                                mean_sample_cut=float(cuts.mean()))
