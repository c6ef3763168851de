"""
Experiment Files
JSON schema for `--config`, validated with pydantic and expanded into one
ExperimentConfig per (method, n, d) cell
"""

import json
from pathlib import Path
from typing import List, Optional, Union

from pydantic import BaseModel, Field, ValidationError, field_validator

import config
from gnn import TrainConfig
from solvers import EoParams, SdpParams

from .experiment import METHODS, ExperimentConfig, ExperimentConfigError, GnnArchitecture


class EoBlock(BaseModel):
    tau: float = Field(default=config.EO_TAU, gt=0)
    t_max: Optional[int] = Field(default=None, ge=1)
    tmax_factor: int = Field(default=config.EO_TMAX_FACTOR, ge=1)
    restarts: int = Field(default=config.EO_RESTARTS, ge=1)
    gated: bool = False


class SdpBlock(BaseModel):
    rank: Optional[int] = Field(default=None, ge=2)
    max_sweeps: int = Field(default=config.SDP_MAX_SWEEPS, ge=1)
    tolerance: float = Field(default=config.SDP_TOLERANCE, gt=0)
    rounding_trials: int = Field(default=config.SDP_ROUNDING_TRIALS, ge=1)


class GnnBlock(BaseModel):
    layers: int = Field(default=config.GNN_LAYERS, ge=1)
    hops: int = Field(default=config.GNN_HOPS, ge=1)
    width: int = Field(default=config.GNN_WIDTH, ge=1)
    train_graphs: int = Field(default=config.GNN_TRAIN_GRAPHS, ge=1)
    pg_samples: int = Field(default=config.GNN_PG_SAMPLES, ge=1)
    learning_rate: float = Field(default=config.GNN_LEARNING_RATE, ge=0)
    lr_decay: float = Field(default=config.GNN_LR_DECAY, gt=0)
    decay_every: int = Field(default=config.GNN_DECAY_EVERY, ge=1)
    batch_size: int = Field(default=config.GNN_BATCH_SIZE, ge=1)
    epochs: int = Field(default=config.GNN_EPOCHS, ge=1)
    baseline: bool = config.GNN_PG_BASELINE
    use_degree_term: bool = config.GNN_DEGREE_TERM
    normalize: bool = config.GNN_NORMALIZE


class ExperimentFile(BaseModel):
    """One bench file: every listed method runs on every (n, d) cell."""
    methods: List[str]
    n: Union[int, List[int]]
    d: Union[int, List[int]]
    graph_count: int = Field(default=config.DEFAULT_GRAPH_COUNT, ge=1)
    master_seed: int = Field(default=config.DEFAULT_MASTER_SEED, ge=0)
    output: Optional[str] = None
    eo: EoBlock = EoBlock()
    sdp: SdpBlock = SdpBlock()
    gnn: GnnBlock = GnnBlock()

    @field_validator("methods", mode="before")
    @classmethod
    def _listify_methods(cls, v):
        return [v] if isinstance(v, str) else v

    @field_validator("methods")
    @classmethod
    def _known_methods(cls, v):
        unknown = [m for m in v if m not in METHODS]
        if unknown or not v:
            raise ValueError(f"methods must be a non-empty subset of {list(METHODS)} (got {v})")
        return v

    def sizes(self) -> List[int]:
        return self.n if isinstance(self.n, list) else [self.n]

    def degrees(self) -> List[int]:
        return self.d if isinstance(self.d, list) else [self.d]

    def expand(self) -> List[ExperimentConfig]:
        """One config per cell; only a single-cell file carries its output path."""
        cells = [self.cell(m, n, d) for m in self.methods for n in self.sizes() for d in self.degrees()]
        if len(cells) > 1:
            for c in cells:
                c.output = None
        return cells

    def cell(self, method: str, n: int, d: int) -> ExperimentConfig:
        t_max = self.eo.t_max if self.eo.t_max is not None else self.eo.tmax_factor * n
        return ExperimentConfig(
            method=method,
            n=n,
            d=d,
            graph_count=self.graph_count,
            master_seed=self.master_seed,
            eo=EoParams(tau=self.eo.tau, t_max=t_max, restarts=self.eo.restarts, gated=self.eo.gated),
            sdp=SdpParams(rank=self.sdp.rank, max_sweeps=self.sdp.max_sweeps,
                          tolerance=self.sdp.tolerance, rounding_trials=self.sdp.rounding_trials),
            train=TrainConfig(
                train_graphs=self.gnn.train_graphs,
                pg_samples=self.gnn.pg_samples,
                learning_rate=self.gnn.learning_rate,
                lr_decay=self.gnn.lr_decay,
                decay_every=self.gnn.decay_every,
                batch_size=self.gnn.batch_size,
                epochs=self.gnn.epochs,
                baseline=self.gnn.baseline,
            ),
            architecture=GnnArchitecture(layers=self.gnn.layers, hops=self.gnn.hops,
                                         width=self.gnn.width,
                                         use_degree_term=self.gnn.use_degree_term,
                                         normalize=self.gnn.normalize),
            output=self.output,
        )


def load_experiment_file(path: Union[str, Path]) -> ExperimentFile:
    """
    Raises:
        FileNotFoundError: if the file is missing
        ExperimentConfigError: on malformed JSON or a schema violation
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Config file not found: {path}")
    try:
        return ExperimentFile.model_validate(json.loads(path.read_text(encoding="utf-8")))
    except json.JSONDecodeError as e:
        raise ExperimentConfigError(f"Invalid JSON in {path}: {e}") from e
    except ValidationError as e:
        raise ExperimentConfigError(f"Invalid experiment file {path}:\n{e}") from e
