"""
Evaluation Module
P statistic, overlap, exact oracle and aggregation
"""

from .scoring import (
    P_STAR,
    ALPHA_GW,
    PScore,
    OverlapScore,
    ScoringError,
    p_score,
    p_value,
    overlap,
    overlap_matrix,
    pairwise_overlap_stats,
)
from .oracle import ORACLE_MAX_VERTICES, OracleSizeError, exact_maxcut, exact_maxcut_gray
from .aggregate import GroupSummary, aggregate

__all__ = [
    "P_STAR",
    "ALPHA_GW",
    "PScore",
    "OverlapScore",
    "ScoringError",
    "p_score",
    "p_value",
    "overlap",
    "overlap_matrix",
    "pairwise_overlap_stats",
    "ORACLE_MAX_VERTICES",
    "OracleSizeError",
    "exact_maxcut",
    "exact_maxcut_gray",
    "GroupSummary",
    "aggregate",
]
