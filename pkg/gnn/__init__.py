"""
Line Graph Neural Network for Max-Cut
Model, unsupervised objectives, training loop and checkpoints
"""

from .model import (
    RELAXATION,
    POLICY_GRADIENT,
    PLUS,
    GnnConfigurationError,
    GnnModel,
    init_model,
    layer_widths,
    forward,
    forward_tensors,
)
from .losses import LossStats, loss_relaxation, loss_policy_gradient, sample_configs
from .training import (
    NonFiniteLossError,
    TrainConfig,
    TrainingCurve,
    Adam,
    train,
    infer_cut,
    decode_threshold,
)
from .checkpoint import MAGIC, save_checkpoint, load_checkpoint

__all__ = [
    "RELAXATION",
    "POLICY_GRADIENT",
    "PLUS",
    "GnnConfigurationError",
    "GnnModel",
    "init_model",
    "layer_widths",
    "forward",
    "forward_tensors",
    "LossStats",
    "loss_relaxation",
    "loss_policy_gradient",
    "sample_configs",
    "NonFiniteLossError",
    "TrainConfig",
    "TrainingCurve",
    "Adam",
    "train",
    "infer_cut",
    "decode_threshold",
    "MAGIC",
    "save_checkpoint",
    "load_checkpoint",
]
