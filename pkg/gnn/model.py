"""
Line Graph Neural Network
Coupled node/edge feature updates on G and on its non-backtracking line
graph, mapped to a per-vertex probability of each side of the cut
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from config import GNN_DEGREE_TERM, GNN_HOPS, GNN_LAYERS, GNN_NORMALIZE, GNN_WIDTH
from graphs import Graph, Operators, build_line_graph_operators
from seeding import derive_seed

from . import autodiff as ad

logger = logging.getLogger(__name__)

RELAXATION = "relaxation"
POLICY_GRADIENT = "policyGradient"
LOSS_KINDS = (RELAXATION, POLICY_GRADIENT)

# Column of the probability matrix holding P(x_i = +1)
PLUS = 0

# Std of the seeded perturbation added to the degree input; degree signals
# alone are constant on a regular graph and every layer preserves that
INPUT_NOISE = 1.0

# Sentinel: derive the perturbation seed from the graph seed
DERIVED_NOISE = -1


class GnnConfigurationError(ValueError):
    """Model widths, hop count or loss kind inconsistent with the inputs."""
    pass


def layer_widths(layers: int, width: int) -> List[int]:
    """b_0 = 1, interior widths `width`, b_K = 2."""
    return [1] + [width] * (layers - 1) + [2]


@dataclass
class GnnModel:
    """
    Parameters theta^(k)_s and gamma^(k)_s, s = 1..J+3, for k = 0..K-1.

    theta_{J+3} acts on [Pm v | Pd v] and is (2 b_k) x b_{k+1}; gamma_{J+3}
    acts on [Pm^T u | Pd^T u] and is (2 b_{k+1}) x b_{k+1}. theta_2 scales
    D u and only enters when use_degree_term is set.
    """
    widths: List[int]
    hops: int = GNN_HOPS
    loss_kind: str = RELAXATION
    use_degree_term: bool = GNN_DEGREE_TERM
    normalize: bool = GNN_NORMALIZE
    params: Dict[str, np.ndarray] = field(default_factory=dict)

    @property
    def layers(self) -> int:
        return len(self.widths) - 1

    def validate(self) -> None:
        if len(self.widths) < 2:
            raise GnnConfigurationError("At least one layer is required")
        if self.widths[0] != 1 or self.widths[-1] != 2:
            raise GnnConfigurationError(f"Widths must start at 1 and end at 2 (got {self.widths})")
        if any(w < 1 for w in self.widths):
            raise GnnConfigurationError(f"Widths must be positive (got {self.widths})")
        if self.hops < 1:
            raise GnnConfigurationError(f"Hop count must be >= 1 (got {self.hops})")
        if self.loss_kind not in LOSS_KINDS:
            raise GnnConfigurationError(f"Unknown loss kind: {self.loss_kind}")
        for name, shape in self.param_shapes().items():
            if name not in self.params:
                raise GnnConfigurationError(f"Missing parameter {name}")
            if self.params[name].shape != shape:
                raise GnnConfigurationError(
                    f"Parameter {name} has shape {self.params[name].shape}, expected {shape}"
                )

    def param_shapes(self) -> Dict[str, tuple]:
        shapes = {}
        top = self.hops + 3
        for k in range(self.layers):
            b_in, b_out = self.widths[k], self.widths[k + 1]
            for s in range(1, top + 1):
                shapes[f"theta{k}_{s}"] = (2 * b_in if s == top else b_in, b_out)
            if k < self.layers - 1:
                for s in range(1, top + 1):
                    shapes[f"gamma{k}_{s}"] = (2 * b_out if s == top else b_in, b_out)
        return shapes

    def parameter_count(self) -> int:
        return int(sum(np.prod(s) for s in self.param_shapes().values()))

    def copy(self) -> "GnnModel":
        return GnnModel(
            widths=list(self.widths),
            hops=self.hops,
            loss_kind=self.loss_kind,
            use_degree_term=self.use_degree_term,
            normalize=self.normalize,
            params={k: v.copy() for k, v in self.params.items()},
        )


def init_model(layers: int = GNN_LAYERS, hops: int = GNN_HOPS, width: int = GNN_WIDTH,
               loss_kind: str = RELAXATION, seed: int = 0,
               use_degree_term: bool = GNN_DEGREE_TERM,
               normalize: bool = GNN_NORMALIZE) -> GnnModel:
    """Fan-scaled uniform init: U[-s, s] with s = sqrt(6 / (rows + cols))."""
    model = GnnModel(widths=layer_widths(layers, width), hops=hops, loss_kind=loss_kind,
                     use_degree_term=use_degree_term, normalize=normalize)
    rng = np.random.default_rng(seed)
    for name, shape in model.param_shapes().items():
        bound = math.sqrt(6.0 / (shape[0] + shape[1]))
        model.params[name] = rng.uniform(-bound, bound, size=shape)
    model.validate()
    return model


def input_signals(g: Graph, ops: Operators, noise_seed: Optional[int]) -> tuple:
    """
    x0 = deg(G) plus a seeded Gaussian perturbation (n x 1), y0 = deg(L(G))
    (2|E| x 1). noise_seed None gives the unperturbed degree signal.
    """
    x0 = np.asarray(ops.degree.diagonal(), dtype=np.float64).reshape(-1, 1)
    if noise_seed is not None:
        x0 = x0 + INPUT_NOISE * np.random.default_rng(noise_seed).standard_normal(x0.shape)
    y0 = np.asarray(ops.deg_b.diagonal(), dtype=np.float64).reshape(-1, 1)
    return x0, y0


def inference_noise_seed(g: Graph) -> int:
    return derive_seed(g.seed if g.seed is not None else 0, 0x4C474E4E)


def _combine(model: GnnModel, terms: List[ad.Tensor], hidden: bool, out_width: int) -> ad.Tensor:
    z = ad.add(*terms)
    if not hidden:
        return z
    if model.normalize:
        z = ad.normalize_columns(z)
    return ad.partial_relu(z, out_width // 2)


def forward_tensors(model: GnnModel, ops: Operators, params: Dict[str, ad.Tensor],
                    x0: np.ndarray, y0: np.ndarray) -> ad.Tensor:
    """Run all layers on tensors; returns the n x 2 probability matrix."""
    if ops.hops != model.hops:
        raise GnnConfigurationError(f"Operators built with J={ops.hops}, model expects J={model.hops}")
    if x0.shape != (ops.n, model.widths[0]) or y0.shape != (ops.num_directed, model.widths[0]):
        raise GnnConfigurationError(
            f"Input signals {x0.shape}/{y0.shape} do not match the graph and b_0={model.widths[0]}"
        )

    J = model.hops
    top = J + 3
    u = ad.constant(x0)
    v = ad.constant(y0)
    for k in range(model.layers):
        hidden = k < model.layers - 1
        b_out = model.widths[k + 1]
        theta = [None] + [params[f"theta{k}_{s}"] for s in range(1, top + 1)]

        node_terms = [ad.matmul(u, theta[1])]
        if model.use_degree_term:
            node_terms.append(ad.matmul(ad.spmm(ops.degree, u), theta[2]))
        for j in range(J):
            node_terms.append(ad.matmul(ad.spmm(ops.power_adj[j], u), theta[3 + j]))
        lifted = ad.concat_columns([ad.spmm(ops.pm, v), ad.spmm(ops.pd, v)])
        node_terms.append(ad.matmul(lifted, theta[top]))
        u_next = _combine(model, node_terms, hidden, b_out)

        if hidden:
            gamma = [None] + [params[f"gamma{k}_{s}"] for s in range(1, top + 1)]
            edge_terms = [ad.matmul(v, gamma[1]), ad.matmul(ad.spmm(ops.deg_b, v), gamma[2])]
            for j in range(J):
                edge_terms.append(ad.matmul(ad.spmm(ops.power_b[j], v), gamma[3 + j]))
            lowered = ad.concat_columns([ad.spmm(ops.pm.T, u_next), ad.spmm(ops.pd.T, u_next)])
            edge_terms.append(ad.matmul(lowered, gamma[top]))
            v = _combine(model, edge_terms, hidden, b_out)
        u = u_next

    return ad.softmax_rows(u)


def as_tensors(model: GnnModel, trainable: bool = False) -> Dict[str, ad.Tensor]:
    make = ad.parameter if trainable else ad.constant
    return {name: make(value) for name, value in model.params.items()}


def forward(model: GnnModel, g: Graph, ops: Optional[Operators] = None,
            noise_seed: Optional[int] = DERIVED_NOISE) -> np.ndarray:
    """
    Probability matrix pi (n x 2): column PLUS is P(x_i = +1).

    DERIVED_NOISE derives the input perturbation from the graph seed; None
    disables it.
    """
    model.validate()
    if ops is None:
        ops = build_line_graph_operators(g, model.hops)
    if noise_seed == DERIVED_NOISE:
        noise_seed = inference_noise_seed(g)
    x0, y0 = input_signals(g, ops, noise_seed)
    return forward_tensors(model, ops, as_tensors(model), x0, y0).data
