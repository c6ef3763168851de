"""
Edge-List Files
Header line `n d seed`, then one `i j` pair per line (0-indexed, i < j)
"""

import os
import tempfile
from pathlib import Path
from typing import Union

from .regular import Graph, GraphParameterError

PathLike = Union[str, Path]


def format_edge_list(g: Graph) -> str:
    seed = g.seed if g.seed is not None else 0
    lines = [f"{g.n} {g.d} {seed}"]
    lines.extend(f"{i} {j}" for i, j in g.edges)
    return "\n".join(lines) + "\n"


def atomic_write_text(path: PathLike, text: str) -> None:
    """Write text to a temp file in the target directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=str(path.parent))
    try:
        with os.fdopen(fd, "w", encoding="ascii", newline="\n") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_edge_list(g: Graph, path: PathLike) -> None:
    atomic_write_text(path, format_edge_list(g))


def read_edge_list(path: PathLike) -> Graph:
    """
    Parse an edge-list file.

    Raises:
        FileNotFoundError: if the file does not exist
        GraphParameterError: on a malformed header, bad pairs, or when the
            edges do not form a d-regular graph for the header's d
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"File not found: {path}")

    lines = [ln.strip() for ln in path.read_text(encoding="ascii").splitlines() if ln.strip()]
    if not lines:
        raise GraphParameterError(f"Empty edge-list file: {path}")

    header = lines[0].split()
    if len(header) != 3:
        raise GraphParameterError(f"Header must be `n d seed`, got: {lines[0]!r}")
    try:
        n, d, seed = (int(tok) for tok in header)
        edges = [tuple(int(tok) for tok in ln.split()) for ln in lines[1:]]
    except ValueError as e:
        raise GraphParameterError(f"Non-integer token in {path}: {e}") from e

    if any(len(e) != 2 for e in edges):
        raise GraphParameterError(f"Every edge line must hold exactly two vertices ({path})")

    g = Graph.from_edges(n, edges, d=d, seed=seed)
    if not g.is_regular():
        raise GraphParameterError(f"Graph in {path} is not {d}-regular")
    return g
