"""
Goemans-Williamson Relaxation
Low-rank vector program solved by block-coordinate ascent (mixing method),
followed by randomized hyperplane rounding
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from config import SDP_MAX_SWEEPS, SDP_RANK, SDP_ROUNDING_TRIALS, SDP_TOLERANCE
from evaluation.scoring import ALPHA_GW, p_value
from graphs import Graph
from seeding import derive_seed

from .eo import SolverParameterError

logger = logging.getLogger(__name__)


class GuaranteeViolationError(AssertionError):
    """Rounded cut fell below the alpha_GW fraction of the relaxation value."""
    pass


def default_rank(n: int) -> int:
    return max(2, min(n, math.ceil(math.sqrt(2 * n))))


@dataclass
class SdpParams:
    rank: Optional[int] = SDP_RANK or None
    max_sweeps: int = SDP_MAX_SWEEPS
    tolerance: float = SDP_TOLERANCE
    rounding_trials: int = SDP_ROUNDING_TRIALS
    seed: int = 0
    check_guarantee: bool = True

    def validate(self) -> None:
        if self.rank is not None and self.rank < 2:
            raise SolverParameterError(f"Embedding rank must be >= 2 (got {self.rank})")
        if self.rounding_trials < 1:
            raise SolverParameterError(f"rounding_trials must be >= 1 (got {self.rounding_trials})")
        if self.max_sweeps < 1:
            raise SolverParameterError(f"max_sweeps must be >= 1 (got {self.max_sweeps})")
        if not self.tolerance > 0:
            raise SolverParameterError(f"tolerance must be > 0 (got {self.tolerance})")

    def rank_for(self, n: int) -> int:
        return self.rank if self.rank is not None else default_rank(n)


@dataclass
class EmbeddingMatrix:
    """Unit row vectors u_i; the Gram matrix U U^T is the SDP variable X."""
    U: np.ndarray
    objective: float
    sweeps: int
    converged: bool


@dataclass
class SdpResult:
    relax_value: float
    best_cut: float
    best_config: np.ndarray
    sweeps_used: int
    converged: bool
    U: np.ndarray


def relaxation_objective(g: Graph, U: np.ndarray) -> float:
    """1/2 sum_{ij in E} w_ij (1 - u_i . u_j)."""
    if not g.edges:
        return 0.0
    e = g.edge_array()
    dots = np.einsum("ij,ij->i", U[e[:, 0]], U[e[:, 1]])
    return 0.5 * float(g.weight_array() @ (1.0 - dots))


def solve_vector_program(g: Graph, p: SdpParams) -> EmbeddingMatrix:
    """
    Maximize the vector relaxation by sweeping u_i <- -g_i / |g_i| with
    g_i = sum_j w_ij u_j, until the relative objective gain of a sweep drops
    below p.tolerance or p.max_sweeps is reached.

    Each update is the exact maximizer over u_i, so the objective never
    decreases. A zero g_i leaves u_i unchanged.
    """
    p.validate()
    k = p.rank_for(g.n)
    rng = np.random.default_rng(p.seed)
    U = rng.standard_normal((g.n, k))
    U /= np.linalg.norm(U, axis=1, keepdims=True)

    adjacency = g.adjacency()
    indptr, indices, data = adjacency.indptr, adjacency.indices, adjacency.data

    objective = relaxation_objective(g, U)
    converged = False
    sweeps = 0
    for sweeps in range(1, p.max_sweeps + 1):
        for i in range(g.n):
            lo, hi = indptr[i], indptr[i + 1]
            if lo == hi:
                continue
            grad = data[lo:hi] @ U[indices[lo:hi]]
            norm = np.linalg.norm(grad)
            if norm > 0.0:
                U[i] = -grad / norm

        updated = relaxation_objective(g, U)
        gain = (updated - objective) / max(1.0, abs(objective))
        objective = updated
        if gain < p.tolerance:
            converged = True
            break

    if not converged:
        logger.warning("Vector program did not converge in %d sweeps (n=%d, objective %.6f)",
                       p.max_sweeps, g.n, objective)
    return EmbeddingMatrix(U=U, objective=objective, sweeps=sweeps, converged=converged)


def round_hyperplane(U: np.ndarray, g: Graph, trials: int, seed: int) -> Tuple[np.ndarray, float]:
    """
    Best of `trials` random hyperplane cuts: x_i = +1 iff r . u_i >= 0.

    r is a normalized standard Gaussian of the embedding dimension; the
    first trial reaching the maximum cut wins.
    """
    if trials < 1:
        raise SolverParameterError(f"trials must be >= 1 (got {trials})")
    rng = np.random.default_rng(seed)
    r = rng.standard_normal((trials, U.shape[1]))
    r /= np.linalg.norm(r, axis=1, keepdims=True)

    spins = np.where(U @ r.T >= 0.0, 1, -1).astype(np.int64)
    if not g.edges:
        return spins[:, 0].copy(), 0

    e = g.edge_array()
    crossing = spins[e[:, 0]] != spins[e[:, 1]]
    cuts = g.weight_array() @ crossing
    best = int(np.argmax(cuts))
    value = cuts[best]
    return spins[:, best].copy(), (int(round(value)) if g.weights is None else float(value))


def sdp_upper_bound_p(relax_value: float, n: int, d: int) -> float:
    """P of the fractional (relaxed) solution."""
    return p_value(relax_value, n, d)


def gw_solve(g: Graph, p: SdpParams) -> SdpResult:
    """
    Solve the relaxation, round it, and check the alpha_GW guarantee.

    Raises:
        GuaranteeViolationError: if best_cut < ALPHA_GW * relax_value - 0.5
    """
    p.validate()
    embed_params = SdpParams(rank=p.rank, max_sweeps=p.max_sweeps, tolerance=p.tolerance,
                             rounding_trials=p.rounding_trials, seed=derive_seed(p.seed, 0))
    embedding = solve_vector_program(g, embed_params)
    config, best_cut = round_hyperplane(embedding.U, g, p.rounding_trials, derive_seed(p.seed, 1))

    if best_cut > embedding.objective + 1e-6 and embedding.converged:
        logger.warning("Rounded cut %s exceeds relaxation value %.6f", best_cut, embedding.objective)
    if p.check_guarantee and best_cut < ALPHA_GW * embedding.objective - 0.5:
        raise GuaranteeViolationError(
            f"Rounded cut {best_cut} < {ALPHA_GW} * {embedding.objective:.6f} - 0.5 (n={g.n})"
        )

    return SdpResult(
        relax_value=embedding.objective,
        best_cut=best_cut,
        best_config=config,
        sweeps_used=embedding.sweeps,
        converged=embedding.converged,
        U=embedding.U,
    )
