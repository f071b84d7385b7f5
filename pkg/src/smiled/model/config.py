"""Model hyperparameters."""

from __future__ import annotations

from dataclasses import asdict, dataclass

from ..errors import OddHeadDim, ShapeMismatch


@dataclass(frozen=True)
class ModelConfig:
    vocab_size: int
    max_len: int = 202      # D: framed token positions
    hidden: int = 768       # L: embedding width
    heads: int = 12
    layers: int = 12
    dropout: float = 0.2
    feature_dim: int = 32   # random features per attention head

    def __post_init__(self):
        if self.hidden % self.heads != 0:
            raise ShapeMismatch(
                f"hidden {self.hidden} not divisible by heads {self.heads}"
            )
        if (self.hidden // self.heads) % 2 != 0:
            raise OddHeadDim(
                f"head dimension {self.hidden // self.heads} must be even"
            )
        if self.max_len < 4:
            raise ShapeMismatch(f"max_len {self.max_len} < 4")

    @property
    def head_dim(self) -> int:
        return self.hidden // self.heads

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "ModelConfig":
        return cls(**d)
