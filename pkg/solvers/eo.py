"""
Extremal Optimization
tau-EO local search for max-cut: rank vertices by fitness, pick a rank from a
power law, flip that vertex, keep the best configuration seen
"""

import bisect
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from config import EO_RESTARTS, EO_STUDY_RUNS, EO_TAU, EO_TMAX_FACTOR
from evaluation.scoring import p_value, pairwise_overlap_stats
from graphs import Graph, as_spins
from seeding import derive_seed

logger = logging.getLogger(__name__)

# Number of ranks drawn from the generator per batch
RANK_BATCH = 1 << 14


class SolverParameterError(ValueError):
    """Raised on invalid solver parameters."""
    pass


@dataclass
class EoParams:
    """tau-EO settings; t_max None means EO_TMAX_FACTOR * n."""
    tau: float = EO_TAU
    t_max: Optional[int] = None
    restarts: int = EO_RESTARTS
    seed: int = 0
    gated: bool = False
    trace: bool = False

    def validate(self) -> None:
        if not self.tau > 0:
            raise SolverParameterError(f"tau must be > 0 (got {self.tau})")
        if self.t_max is not None and self.t_max < 1:
            raise SolverParameterError(f"t_max must be >= 1 (got {self.t_max})")
        if self.restarts < 1:
            raise SolverParameterError(f"restarts must be >= 1 (got {self.restarts})")

    def steps_for(self, n: int) -> int:
        return self.t_max if self.t_max is not None else EO_TMAX_FACTOR * n


@dataclass
class FitnessState:
    """Per-vertex crossing (bad) and non-crossing (good) edge counts."""
    bad: np.ndarray
    good: np.ndarray

    @property
    def lam(self) -> np.ndarray:
        deg = self.bad + self.good
        return np.divide(self.bad, deg, out=np.ones(len(deg)), where=deg > 0)

    def ranking(self) -> np.ndarray:
        """Vertices sorted by ascending fitness, ties by vertex index; rank 1 first."""
        return np.lexsort((np.arange(len(self.bad)), self.lam))


@dataclass
class EoResult:
    best: np.ndarray
    best_cut: int
    restart_cuts: List[int] = field(default_factory=list)
    trace: Optional[List[Tuple[int, int]]] = None


def fitness(g: Graph, x) -> FitnessState:
    """Fitness lambda_i = b_i / deg(i); high is good for max-cut."""
    spins = as_spins(x, g.n)
    bad = np.zeros(g.n, dtype=np.int64)
    if g.edges:
        e = g.edge_array()
        crossing = spins[e[:, 0]] != spins[e[:, 1]]
        np.add.at(bad, e[crossing, 0], 1)
        np.add.at(bad, e[crossing, 1], 1)
    return FitnessState(bad=bad, good=g.degrees() - bad)


def rank_distribution(n: int, tau: float) -> np.ndarray:
    """P_k proportional to k^-tau over ranks k = 1..n."""
    if n < 1:
        raise SolverParameterError(f"n must be >= 1 (got {n})")
    if tau < 0:
        raise SolverParameterError(f"tau must be >= 0 (got {tau})")
    weights = np.arange(1, n + 1, dtype=np.float64) ** (-tau)
    return weights / weights.sum()


class _RankedSpins:
    """
    Spin state with vertices bucketed by fitness level. Levels are the
    distinct values of b/deg, so a d-regular graph has d + 1 buckets, each
    kept sorted by vertex index.
    """

    def __init__(self, g: Graph, spins: List[int]):
        self.x = spins
        self.adj = [g.neighbors(i) for i in range(g.n)]
        self.deg = [len(a) for a in self.adj]

        values = sorted({(b / k if k else 1.0) for k in set(self.deg) for b in range(k + 1)})
        by_degree = {
            k: [values.index(b / k if k else 1.0) for b in range(k + 1)] for k in set(self.deg)
        }
        # level_row[v][b]: bucket of v when b of its edges cross the cut
        self.level_row = [by_degree[k] for k in self.deg]
        self.buckets: List[List[int]] = [[] for _ in values]

        self.bad = [0] * g.n
        for i, j in g.edges:
            if spins[i] != spins[j]:
                self.bad[i] += 1
                self.bad[j] += 1
        self.cut = sum(self.bad) // 2
        for v in range(g.n):
            self.buckets[self.level_row[v][self.bad[v]]].append(v)

    def vertex_at(self, rank: int) -> int:
        """0-based rank in the ascending fitness order."""
        for bucket in self.buckets:
            if rank < len(bucket):
                return bucket[rank]
            rank -= len(bucket)
        raise IndexError(rank)

    def flip(self, v: int) -> None:
        x, bad, buckets, level_row = self.x, self.bad, self.buckets, self.level_row
        bisect_left, insort = bisect.bisect_left, bisect.insort

        x[v] = xv = -x[v]
        old_bad = bad[v]
        bad[v] = new_bad = self.deg[v] - old_bad
        self.cut += new_bad - old_bad
        row = level_row[v]
        old = buckets[row[old_bad]]
        del old[bisect_left(old, v)]
        insort(buckets[row[new_bad]], v)

        for u in self.adj[v]:
            before = bad[u]
            after = before + 1 if x[u] != xv else before - 1
            bad[u] = after
            row = level_row[u]
            old = buckets[row[before]]
            del old[bisect_left(old, u)]
            insort(buckets[row[after]], u)


def _single_run(g: Graph, p: EoParams, seed: int) -> Tuple[np.ndarray, int, List[Tuple[int, int]]]:
    rng = np.random.default_rng(seed)
    spins = (rng.integers(0, 2, size=g.n) * 2 - 1).tolist()
    state = _RankedSpins(g, spins)

    best_cut = state.cut
    best = list(state.x)
    trace = [(0, state.cut)] if p.trace else []

    cdf = np.cumsum(rank_distribution(g.n, p.tau))
    cdf[-1] = 1.0
    t_max = p.steps_for(g.n)
    step = 0
    while step < t_max:
        batch = min(RANK_BATCH, t_max - step)
        ranks = np.searchsorted(cdf, rng.random(batch), side="right").tolist()
        for k in ranks:
            step += 1
            v = state.vertex_at(k)
            # gated variant: flip only when it raises the vertex's own fitness
            if not p.gated or state.deg[v] - state.bad[v] > state.bad[v]:
                state.flip(v)
                if state.cut > best_cut:
                    best_cut = state.cut
                    best = list(state.x)
            if p.trace and step % g.n == 0:
                trace.append((step, state.cut))

    return np.asarray(best, dtype=np.int64), best_cut, trace


def eo_run(g: Graph, p: EoParams) -> EoResult:
    """
    Run tau-EO from `restarts` independent random initializations.

    Each restart gets the full t_max budget and its own seed derived from
    p.seed; the best cut over restarts wins, ties to the lowest restart index.
    """
    p.validate()
    if g.n == 0:
        return EoResult(best=np.zeros(0, dtype=np.int64), best_cut=0, restart_cuts=[0])

    winner = None
    restart_cuts = []
    for r in range(p.restarts):
        best, best_cut, trace = _single_run(g, p, derive_seed(p.seed, r))
        logger.debug("EO restart %d on n=%d: best cut %d", r, g.n, best_cut)
        restart_cuts.append(best_cut)
        if winner is None or best_cut > winner[1]:
            winner = (best, best_cut, trace)

    best, best_cut, trace = winner
    return EoResult(best=best, best_cut=best_cut, restart_cuts=restart_cuts,
                    trace=trace if p.trace else None)


@dataclass
class EoStudy:
    """Spread of EO outcomes over independent initializations of one graph."""
    cuts: List[int]
    configs: List[np.ndarray]
    max_P: float
    min_P: float
    overlap_mean: float
    overlap_std: float


def eo_initialization_study(g: Graph, p: EoParams, runs: int = EO_STUDY_RUNS) -> EoStudy:
    """Run `runs` single-restart EO searches and compare their cuts and overlaps."""
    if runs < 1:
        raise SolverParameterError(f"runs must be >= 1 (got {runs})")
    single = EoParams(tau=p.tau, t_max=p.t_max, restarts=1, seed=p.seed, gated=p.gated)
    cuts, configs = [], []
    for r in range(runs):
        single.seed = derive_seed(p.seed, 1_000_000 + r)
        res = eo_run(g, single)
        cuts.append(res.best_cut)
        configs.append(res.best)

    scores = [p_value(c, g.n, g.d) for c in cuts]
    nu_mean, nu_std = pairwise_overlap_stats(configs)
    return EoStudy(
        cuts=cuts,
        configs=configs,
        max_P=max(scores),
        min_P=min(scores),
        overlap_mean=nu_mean,
        overlap_std=nu_std,
    )
