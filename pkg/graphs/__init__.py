"""
Graph Module
Random d-regular graphs, cut evaluation and line-graph operators
"""

from .regular import (
    Graph,
    GraphParameterError,
    GraphGenerationError,
    generate_regular,
    cut_value,
    as_spins,
)
from .operators import (
    DirectedEdgeIndex,
    Operators,
    build_line_graph_operators,
)
from .io import read_edge_list, write_edge_list, format_edge_list, atomic_write_text

__all__ = [
    "Graph",
    "GraphParameterError",
    "GraphGenerationError",
    "generate_regular",
    "cut_value",
    "as_spins",
    "DirectedEdgeIndex",
    "Operators",
    "build_line_graph_operators",
    "read_edge_list",
    "write_edge_list",
    "format_edge_list",
    "atomic_write_text",
]
