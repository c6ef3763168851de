"""
Result Aggregation
Per-(method, n, d) statistics of P over trial records
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, Iterable, List, Tuple

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GroupSummary:
    """P statistics for one (method, n, d) cell; std is the population std."""
    method: str
    n: int
    d: int
    count: int
    mean_P: float
    std_P: float
    min_P: float
    max_P: float

    def key(self) -> Tuple[str, int, int]:
        return (self.method, self.n, self.d)


def aggregate(records: Iterable, expected_groups: Iterable[Tuple[str, int, int]] = ()) -> List[GroupSummary]:
    """
    Summarize records (any objects with method, n, d, P and error attributes).

    Failed records (error set or P missing) are skipped. A group listed in
    expected_groups that ends up with no usable record is omitted and logged.

    Returns:
        Summaries sorted by (method, n, d)
    """
    groups: Dict[Tuple[str, int, int], List[float]] = {}
    for key in expected_groups:
        groups.setdefault(tuple(key), [])

    for r in records:
        key = (r.method, int(r.n), int(r.d))
        values = groups.setdefault(key, [])
        if getattr(r, "error", "") or r.P is None:
            continue
        values.append(float(r.P))

    summaries = []
    for key in sorted(groups):
        values = groups[key]
        if not values:
            logger.warning("No successful trials for method=%s n=%d d=%d; group omitted", *key)
            continue
        mean = math.fsum(values) / len(values)
        var = math.fsum((v - mean) ** 2 for v in values) / len(values)
        summaries.append(GroupSummary(
            method=key[0],
            n=key[1],
            d=key[2],
            count=len(values),
            mean_P=mean,
            std_P=math.sqrt(var),
            min_P=min(values),
            max_P=max(values),
        ))
    return summaries
