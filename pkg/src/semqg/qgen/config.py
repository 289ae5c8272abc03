"""Hyperparameter dataclass mirrored one-to-one by the JSON config file."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields

from ..errors import ConfigError


@dataclass
class TrainConfig:
    # optimization
    learning_rate: float = 0.001
    batch_size: int = 32
    max_epochs: int = 30
    seed: int = 0
    lambda_coverage: float = 1.0
    lambda_content: float = 0.5
    lr_decay_patience: int = 2
    early_stop_patience: int = 5
    # regularization (training only; every gradient check runs without it)
    dropout_encoder: float = 0.3
    dropout_decoder: float = 0.3
    dropout_attention: float = 0.1
    # architecture
    K: int = 3
    word_dim: int = 32
    enc_hidden: int = 32
    dec_hidden: int = 64
    # data / decoding
    graph_format: str = "dp"
    min_freq: int = 1
    max_decode_len: int = 30
    val_fraction: float = 0.2
    # documented interpretation switches
    normalize_per_direction: bool = False
    coverage_in_attention: bool = True
    attention_score_mode: str = "decoder"  # or "final_layer" / "mean_layers"

    def __post_init__(self):
        positive = [
            ("learning_rate", self.learning_rate),
            ("batch_size", self.batch_size),
            ("max_epochs", self.max_epochs),
            ("word_dim", self.word_dim),
            ("enc_hidden", self.enc_hidden),
            ("dec_hidden", self.dec_hidden),
        ]
        for name, value in positive:
            if value <= 0:
                raise ConfigError(f"{name} must be positive, got {value}")
        if self.K < 0:
            raise ConfigError(f"K must be >= 0, got {self.K}")
        for name, value in [
            ("lambda_coverage", self.lambda_coverage),
            ("lambda_content", self.lambda_content),
            ("dropout_encoder", self.dropout_encoder),
            ("dropout_decoder", self.dropout_decoder),
            ("dropout_attention", self.dropout_attention),
        ]:
            if value < 0:
                raise ConfigError(f"{name} must be >= 0, got {value}")
        if self.graph_format not in ("srl", "dp"):
            raise ConfigError(f"graph_format must be 'srl' or 'dp', got {self.graph_format!r}")
        if self.attention_score_mode not in ("decoder", "final_layer", "mean_layers"):
            raise ConfigError(f"unknown attention_score_mode {self.attention_score_mode!r}")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, obj: dict) -> "TrainConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(obj) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        return cls(**obj)

    @classmethod
    def from_json_file(cls, path) -> "TrainConfig":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))
