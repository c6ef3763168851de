"""
Cut Scoring
Normalized P statistic and overlap between spin configurations
"""

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

# Asymptotic optimum of P on random d-regular graphs (n -> inf, then d -> inf)
P_STAR = 0.7632

# Goemans-Williamson expected-cut ratio
ALPHA_GW = 0.878


class ScoringError(ValueError):
    """Raised on inconsistent scoring inputs."""
    pass


@dataclass(frozen=True)
class PScore:
    """Cut value z on a (n, d) instance and its normalized score."""
    z: float
    n: int
    d: int

    @property
    def P(self) -> float:
        return (self.z / self.n - self.d / 4.0) / math.sqrt(self.d / 4.0)

    @property
    def gap_to_optimum(self) -> float:
        return P_STAR - self.P

    def __str__(self) -> str:
        return f"{self.P:.4f}"


@dataclass(frozen=True)
class OverlapScore:
    nu: float

    def __str__(self) -> str:
        return f"{self.nu:.4f}"


def p_score(z: float, n: int, d: int) -> PScore:
    """
    Score a cut value; P = (z/n - d/4) / sqrt(d/4), not clamped.

    Raises:
        ScoringError: if n < 1 or d < 1
    """
    if n < 1 or d < 1:
        raise ScoringError(f"n and d must be >= 1 (got n={n}, d={d})")
    return PScore(z=z, n=n, d=d)


def p_value(z: float, n: int, d: int) -> float:
    return p_score(z, n, d).P


def overlap(x1: Sequence[int], x2: Sequence[int]) -> OverlapScore:
    """nu = |<x1, x2>| / n, invariant under a global flip of either argument."""
    a = np.asarray(x1, dtype=np.int64)
    b = np.asarray(x2, dtype=np.int64)
    if a.shape != b.shape or a.ndim != 1:
        raise ScoringError(f"Overlap needs equal-length vectors (got {a.shape} and {b.shape})")
    if a.size == 0:
        raise ScoringError("Overlap of empty configurations is undefined")
    return OverlapScore(nu=abs(int(a @ b)) / a.size)


def overlap_matrix(configs: Sequence[Sequence[int]]) -> np.ndarray:
    """Symmetric matrix of pairwise overlaps, ones on the diagonal."""
    x = np.asarray(configs, dtype=np.int64)
    if x.ndim != 2 or x.shape[1] == 0:
        raise ScoringError("Expected a non-empty (runs, n) array of configurations")
    return np.abs(x @ x.T) / x.shape[1]


def pairwise_overlap_stats(configs: Sequence[Sequence[int]]) -> tuple:
    """(mean, population std) of nu over all unordered pairs; (nan, nan) below two runs."""
    m = overlap_matrix(configs)
    iu = np.triu_indices(m.shape[0], k=1)
    if iu[0].size == 0:
        return float("nan"), float("nan")
    values = m[iu]
    return float(values.mean()), float(values.std())
