"""
Result Tables
Mean-P pivot tables (rows n or d, columns methods) in text and CSV form
"""

import io
from dataclasses import dataclass
from typing import Iterable, List

from rich.console import Console
from rich.table import Table

from evaluation import GroupSummary, aggregate

from .experiment import METHODS
from .results_file import summary_csv


@dataclass
class TableOutput:
    summaries: List[GroupSummary]
    text: str
    csv: str


def _method_order(methods: Iterable[str]) -> List[str]:
    known = [m for m in METHODS if m in methods]
    return known + sorted(set(methods) - set(METHODS))


def render_table(summaries: List[GroupSummary], title: str = "Mean P") -> Table:
    methods = _method_order({s.method for s in summaries})
    sizes = sorted({s.n for s in summaries})
    degrees = sorted({s.d for s in summaries})
    cells = {(s.n, s.d, s.method): s for s in summaries}

    table = Table(title=title)
    if len(sizes) == 1 and len(degrees) > 1:
        table.add_column(f"d (n={sizes[0]})", justify="right")
        keys = [(sizes[0], d, str(d)) for d in reversed(degrees)]
    elif len(degrees) == 1:
        table.add_column(f"n (d={degrees[0]})", justify="right")
        keys = [(n, degrees[0], str(n)) for n in sizes]
    else:
        table.add_column("n, d", justify="right")
        keys = [(n, d, f"{n}, {d}") for n in sizes for d in degrees]
    for m in methods:
        table.add_column(m, justify="right")

    for n, d, label in keys:
        row = [label]
        for m in methods:
            s = cells.get((n, d, m))
            row.append(f"{s.mean_P:.4f}" if s else "-")
        table.add_row(*row)
    return table


def table_text(table: Table, width: int = 100) -> str:
    buf = io.StringIO()
    Console(file=buf, width=width, color_system=None, force_terminal=False).print(table)
    return buf.getvalue()


def emit_table(records: Iterable, title: str = "Mean P") -> TableOutput:
    """Aggregate records into per-(method, n, d) summaries and lay them out."""
    summaries = aggregate(records)
    text = table_text(render_table(summaries, title)) if summaries else ""
    return TableOutput(summaries=summaries, text=text, csv=summary_csv(summaries))
