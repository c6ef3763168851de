"""
Results Files - CSV persistence for trial records
Records, timings, summaries and overlap reports share one output stem
"""

import csv
import io
import logging
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Union

from evaluation import GroupSummary
from graphs import atomic_write_text

from .experiment import OverlapRow, TrialRecord

logger = logging.getLogger(__name__)

RECORD_HEADER = ["method", "n", "d", "graph_index", "graph_seed", "trial_seed", "cut_value", "P", "error"]
TIMING_HEADER = ["method", "n", "d", "graph_index", "wall_time_ms"]
SUMMARY_HEADER = ["method", "n", "d", "count", "mean_P", "std_P", "min_P", "max_P"]
OVERLAP_HEADER = ["method_a", "method_b", "count", "mean_nu", "std_nu"]
STUDY_HEADER = ["graph_index", "graph_seed", "runs", "max_P", "min_P", "mean_nu", "std_nu"]


def _cut(value: Optional[float]) -> str:
    if value is None:
        return ""
    return str(int(value)) if float(value).is_integer() else repr(float(value))


def _float(value: Optional[float]) -> str:
    return "" if value is None else repr(float(value))


def _fixed(value: float) -> str:
    return f"{value:.4f}"


def to_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def records_csv(records: Iterable[TrialRecord]) -> str:
    rows = [
        [r.method, r.n, r.d, r.graph_index, r.graph_seed, r.trial_seed,
         _cut(r.cut_value), _float(r.P), r.error]
        for r in sorted(records, key=TrialRecord.sort_key)
    ]
    return to_csv(RECORD_HEADER, rows)


def timings_csv(records: Iterable[TrialRecord]) -> str:
    rows = [
        [r.method, r.n, r.d, r.graph_index, f"{r.wall_time_ms:.3f}"]
        for r in sorted(records, key=TrialRecord.sort_key)
    ]
    return to_csv(TIMING_HEADER, rows)


def summary_csv(summaries: Iterable[GroupSummary]) -> str:
    rows = [
        [s.method, s.n, s.d, s.count, _fixed(s.mean_P), _fixed(s.std_P), _fixed(s.min_P), _fixed(s.max_P)]
        for s in sorted(summaries, key=GroupSummary.key)
    ]
    return to_csv(SUMMARY_HEADER, rows)


def overlap_csv(rows: Iterable[OverlapRow]) -> str:
    return to_csv(OVERLAP_HEADER, [
        [r.method_a, r.method_b, r.count, _fixed(r.mean_nu), _fixed(r.std_nu)] for r in rows
    ])


class ResultsStore:
    """
    Files under one stem: `<stem>.csv` (records), `<stem>_timings.csv`,
    `<stem>_summary.csv` and `<stem>_overlap.csv`. Every write is atomic.
    """

    def __init__(self, records_path: Union[str, Path]):
        self.records_path = Path(records_path)
        if self.records_path.suffix != ".csv":
            self.records_path = self.records_path.with_suffix(".csv")

    def sibling(self, suffix: str) -> Path:
        return self.records_path.with_name(f"{self.records_path.stem}_{suffix}.csv")

    def save(self, records: List[TrialRecord]) -> None:
        atomic_write_text(self.records_path, records_csv(records))
        atomic_write_text(self.sibling("timings"), timings_csv(records))
        logger.info("Saved %d records to %s", len(records), self.records_path)

    def save_summary(self, summaries: Iterable[GroupSummary]) -> Path:
        path = self.sibling("summary")
        atomic_write_text(path, summary_csv(summaries))
        return path

    def save_overlap(self, rows: Iterable[OverlapRow]) -> Path:
        path = self.sibling("overlap")
        atomic_write_text(path, overlap_csv(rows))
        return path

    def load(self) -> List[TrialRecord]:
        """Read records back; configs and wall times are not stored in the records file."""
        if not self.records_path.exists():
            raise FileNotFoundError(f"Records file not found: {self.records_path}")
        with open(self.records_path, "r", encoding="ascii", newline="") as f:
            reader = csv.DictReader(f)
            if reader.fieldnames != RECORD_HEADER:
                raise ValueError(f"Unexpected records header in {self.records_path}: {reader.fieldnames}")
            return [
                TrialRecord(
                    method=row["method"],
                    n=int(row["n"]),
                    d=int(row["d"]),
                    graph_index=int(row["graph_index"]),
                    graph_seed=int(row["graph_seed"]),
                    trial_seed=int(row["trial_seed"]),
                    cut_value=float(row["cut_value"]) if row["cut_value"] else None,
                    P=float(row["P"]) if row["P"] else None,
                    error=row["error"],
                )
                for row in reader
            ]


def study_csv(rows: Iterable[Sequence]) -> str:
    """Rows of (graph_index, graph_seed, runs, max_P, min_P, mean_nu, std_nu)."""
    return to_csv(STUDY_HEADER, [
        [idx, seed, runs, _fixed(hi), _fixed(lo), _fixed(mu), _fixed(sd)]
        for idx, seed, runs, hi, lo, mu, sd in rows
    ])
