"""
Reverse-Mode Gradient Engine
Dense numpy tensors recorded on an implicit graph; backward() walks it in
reverse topological order. Covers exactly what the LGNN layers and the two
training objectives need.
"""

from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sp

BackwardFn = Callable[[np.ndarray], Sequence[Optional[np.ndarray]]]


class Tensor:
    """A float64 array with an optional gradient and its producing operation."""

    __slots__ = ("data", "grad", "requires_grad", "_parents", "_backward", "name")

    def __init__(self, data, requires_grad: bool = False, name: str = ""):
        self.data = np.asarray(data, dtype=np.float64)
        self.grad: Optional[np.ndarray] = None
        self.requires_grad = requires_grad
        self._parents: Tuple["Tensor", ...] = ()
        self._backward: Optional[BackwardFn] = None
        self.name = name

    @property
    def shape(self) -> tuple:
        return self.data.shape

    def __repr__(self) -> str:
        return f"Tensor(shape={self.shape}, requires_grad={self.requires_grad}, name='{self.name}')"

    def backward(self) -> None:
        """Accumulate d(self)/d(leaf) into every leaf with requires_grad; self must be scalar."""
        if self.data.size != 1:
            raise ValueError(f"backward() needs a scalar output, got shape {self.shape}")

        order: List[Tensor] = []
        visited = set()
        stack = [(self, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded:
                order.append(node)
                continue
            if id(node) in visited:
                continue
            visited.add(id(node))
            stack.append((node, True))
            for parent in node._parents:
                if parent.requires_grad and id(parent) not in visited:
                    stack.append((parent, False))

        grads = {id(self): np.ones_like(self.data)}
        for node in reversed(order):
            grad_out = grads.pop(id(node), None)
            if grad_out is None:
                continue
            if node._backward is None:
                node.grad = grad_out if node.grad is None else node.grad + grad_out
                continue
            for parent, g in zip(node._parents, node._backward(grad_out)):
                if g is None or not parent.requires_grad:
                    continue
                key = id(parent)
                grads[key] = g if key not in grads else grads[key] + g


def constant(data) -> Tensor:
    return Tensor(data, requires_grad=False)


def parameter(data, name: str = "") -> Tensor:
    return Tensor(np.array(data, dtype=np.float64), requires_grad=True, name=name)


def _result(data: np.ndarray, parents: Sequence[Tensor], backward: BackwardFn) -> Tensor:
    out = Tensor(data, requires_grad=any(p.requires_grad for p in parents))
    if out.requires_grad:
        out._parents = tuple(parents)
        out._backward = backward
    return out


# ════════════════════════════════════════════════════════════
# LINEAR ALGEBRA
# ════════════════════════════════════════════════════════════

def matmul(a: Tensor, b: Tensor) -> Tensor:
    def backward(g):
        return (g @ b.data.T if a.requires_grad else None,
                a.data.T @ g if b.requires_grad else None)
    return _result(a.data @ b.data, (a, b), backward)


def spmm(s: sp.spmatrix, a: Tensor) -> Tensor:
    """Constant sparse matrix times a dense tensor."""
    def backward(g):
        return (np.asarray(s.T @ g),)
    return _result(np.asarray(s @ a.data), (a,), backward)


def add(*terms: Tensor) -> Tensor:
    def backward(g):
        return tuple(g for _ in terms)
    data = terms[0].data.copy()
    for t in terms[1:]:
        data = data + t.data
    return _result(data, terms, backward)


def concat_columns(parts: Sequence[Tensor]) -> Tensor:
    widths = [p.shape[1] for p in parts]
    bounds = np.cumsum([0] + widths)

    def backward(g):
        return tuple(g[:, bounds[i]:bounds[i + 1]] for i in range(len(parts)))
    return _result(np.concatenate([p.data for p in parts], axis=1), parts, backward)


def column(a: Tensor, j: int) -> Tensor:
    """Column j as a 1-D tensor."""
    def backward(g):
        full = np.zeros_like(a.data)
        full[:, j] = g
        return (full,)
    return _result(a.data[:, j].copy(), (a,), backward)


def gather_rows(a: Tensor, cols: np.ndarray) -> Tensor:
    """out[k, i] = a[i, cols[k, i]] for an index array of shape (K, n)."""
    cols = np.asarray(cols, dtype=np.int64)
    rows = np.broadcast_to(np.arange(a.shape[0]), cols.shape)

    def backward(g):
        full = np.zeros_like(a.data)
        np.add.at(full, (rows, cols), g)
        return (full,)
    return _result(a.data[rows, cols], (a,), backward)


# ════════════════════════════════════════════════════════════
# POINTWISE
# ════════════════════════════════════════════════════════════

def affine(a: Tensor, scale: float, shift: float = 0.0) -> Tensor:
    def backward(g):
        return (g * scale,)
    return _result(a.data * scale + shift, (a,), backward)


def partial_relu(a: Tensor, active: int) -> Tensor:
    """ReLU on the first `active` columns, identity on the rest."""
    mask = np.ones_like(a.data, dtype=bool)
    mask[:, :active] = a.data[:, :active] > 0

    def backward(g):
        return (g * mask,)
    return _result(a.data * mask, (a,), backward)


def clamped_log(a: Tensor, floor: float) -> Tuple[Tensor, int]:
    """log(max(a, floor)); also returns how many entries were clamped."""
    clipped = a.data < floor
    safe = np.where(clipped, floor, a.data)

    def backward(g):
        return (np.where(clipped, 0.0, g / safe),)
    return _result(np.log(safe), (a,), backward), int(np.count_nonzero(clipped))


def scale_by(a: Tensor, weights: np.ndarray) -> Tensor:
    """Elementwise product with a constant array broadcastable to a's shape."""
    w = np.asarray(weights, dtype=np.float64)
    if np.broadcast_shapes(a.shape, w.shape) != a.shape:
        raise ValueError(f"Weights of shape {w.shape} do not broadcast to {a.shape}")

    def backward(g):
        return (g * w,)
    return _result(a.data * w, (a,), backward)


# ════════════════════════════════════════════════════════════
# ROW / COLUMN OPERATIONS
# ════════════════════════════════════════════════════════════

def softmax_rows(a: Tensor) -> Tensor:
    shifted = a.data - a.data.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    s = e / e.sum(axis=1, keepdims=True)

    def backward(g):
        return (s * (g - (g * s).sum(axis=1, keepdims=True)),)
    return _result(s, (a,), backward)


def normalize_columns(a: Tensor, eps: float = 1e-5) -> Tensor:
    """Zero mean, unit variance per column over the rows (instance normalization)."""
    m = a.shape[0]
    mean = a.data.mean(axis=0, keepdims=True)
    centered = a.data - mean
    inv = 1.0 / np.sqrt((centered ** 2).mean(axis=0, keepdims=True) + eps)
    y = centered * inv

    def backward(g):
        return (inv / m * (m * g - g.sum(axis=0, keepdims=True)
                           - y * (g * y).sum(axis=0, keepdims=True)),)
    return _result(y, (a,), backward)


def total(a: Tensor) -> Tensor:
    def backward(g):
        return (np.full_like(a.data, float(g)),)
    return _result(np.array(a.data.sum()), (a,), backward)


def quadratic_form(q: sp.spmatrix, v: Tensor) -> Tensor:
    """v^T Q v for a symmetric constant Q and a 1-D tensor v."""
    qv = np.asarray(q @ v.data).ravel()

    def backward(g):
        return (2.0 * float(g) * qv,)
    return _result(np.array(v.data @ qv), (v,), backward)
