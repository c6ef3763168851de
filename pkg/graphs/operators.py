"""
Line Graph Operators
Directed-edge indexing, non-backtracking operator, incidence matrices and
power adjacencies consumed by the LGNN layers
"""

from dataclasses import dataclass
from typing import Dict, List, Tuple

import numpy as np
import scipy.sparse as sp

from .regular import Graph, GraphParameterError


@dataclass(frozen=True)
class DirectedEdgeIndex:
    """Both orientations of every edge; row r of the line graph is pairs[r]."""
    pairs: Tuple[Tuple[int, int], ...]
    lookup: Dict[Tuple[int, int], int]

    @classmethod
    def from_graph(cls, g: Graph) -> "DirectedEdgeIndex":
        pairs = []
        for i, j in g.edges:
            pairs.append((i, j))
            pairs.append((j, i))
        return cls(pairs=tuple(pairs), lookup={p: r for r, p in enumerate(pairs)})

    def __len__(self) -> int:
        return len(self.pairs)

    def reversal(self) -> np.ndarray:
        """Index map r -> row of the reversed edge."""
        return np.array([self.lookup[(j, i)] for i, j in self.pairs], dtype=np.int64)


@dataclass(frozen=True)
class Operators:
    """Operators of G and of its line graph L(G), all scipy CSR."""
    index: DirectedEdgeIndex
    adjacency: sp.csr_matrix
    degree: sp.csr_matrix
    laplacian: sp.csr_matrix
    nonbacktracking: sp.csr_matrix
    deg_b: sp.csr_matrix
    pm: sp.csr_matrix
    pd: sp.csr_matrix
    power_adj: Tuple[sp.csr_matrix, ...]
    power_b: Tuple[sp.csr_matrix, ...]

    @property
    def hops(self) -> int:
        return len(self.power_adj)

    @property
    def n(self) -> int:
        return self.adjacency.shape[0]

    @property
    def num_directed(self) -> int:
        return len(self.index)


def _saturated_powers(base: sp.csr_matrix, hops: int) -> Tuple[sp.csr_matrix, ...]:
    """[min(1, M^(2^j)) for j < hops] by repeated boolean squaring."""
    current = (base != 0).astype(np.float64).tocsr()
    powers: List[sp.csr_matrix] = [current]
    for _ in range(1, hops):
        squared = current @ current
        squared.data[:] = 1.0
        squared.eliminate_zeros()
        current = squared.tocsr()
        powers.append(current)
    return tuple(powers)


def nonbacktracking_matrix(g: Graph, index: DirectedEdgeIndex) -> sp.csr_matrix:
    """B[(i->j), (j->k)] = 1 for every k != i."""
    rows, cols = [], []
    for r, (i, j) in enumerate(index.pairs):
        for k in g.neighbors(j):
            if k != i:
                rows.append(r)
                cols.append(index.lookup[(j, k)])
    size = len(index)
    return sp.csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(size, size))


def incidence_matrices(g: Graph, index: DirectedEdgeIndex) -> Tuple[sp.csr_matrix, sp.csr_matrix]:
    """Pm (two +1 per column) and Pd (+1 at the source, -1 at the target)."""
    size = len(index)
    src = np.array([p[0] for p in index.pairs], dtype=np.int64)
    dst = np.array([p[1] for p in index.pairs], dtype=np.int64)
    cols = np.concatenate([np.arange(size), np.arange(size)])
    rows = np.concatenate([src, dst])
    pm = sp.csr_matrix((np.ones(2 * size), (rows, cols)), shape=(g.n, size))
    pd = sp.csr_matrix(
        (np.concatenate([np.ones(size), -np.ones(size)]), (rows, cols)), shape=(g.n, size)
    )
    return pm, pd


def build_line_graph_operators(g: Graph, hops: int) -> Operators:
    """
    Build every operator of G and L(G) used by the LGNN.

    Args:
        g: Input graph
        hops: J, the number of power-graph scales 2^0 .. 2^(J-1)
    """
    if hops < 1:
        raise GraphParameterError(f"Hop count J must be >= 1 (got {hops})")

    index = DirectedEdgeIndex.from_graph(g)
    adjacency = (g.adjacency() != 0).astype(np.float64).tocsr()
    degree = sp.diags(np.asarray(adjacency.sum(axis=1)).ravel()).tocsr()
    b = nonbacktracking_matrix(g, index)
    deg_b = sp.diags(np.asarray(b.sum(axis=1)).ravel()).tocsr()
    pm, pd = incidence_matrices(g, index)

    return Operators(
        index=index,
        adjacency=adjacency,
        degree=degree,
        laplacian=(degree - adjacency).tocsr(),
        nonbacktracking=b,
        deg_b=deg_b,
        pm=pm,
        pd=pd,
        power_adj=_saturated_powers(adjacency, hops),
        power_b=_saturated_powers(b, hops),
    )
