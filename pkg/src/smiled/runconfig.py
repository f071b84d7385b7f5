"""Run configuration: profiles, key=value config files, and provenance.

Config files are flat ``key = value`` lines (TOML-style scalars, ``#``
comments).  Unknown keys are rejected.  Two built-in profiles: "desk"
(small model, quick CPU runs) and "paper-fidelity" (full-size settings;
constructable, not trainable on a desk machine).
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from pathlib import Path

from .errors import SmiledError
from .model import ModelConfig


class ConfigError(SmiledError):
    pass


@dataclass(frozen=True)
class RunConfig:
    profile: str = "desk"
    # model
    max_len: int = 32
    hidden: int = 64
    heads: int = 4
    layers: int = 2
    dropout: float = 0.0
    feature_dim: int = 16
    # pre-training
    lr: float = 1e-3
    batch_size: int = 8
    phase1_epochs: int = 125
    phase2_epochs: int = 375
    max_steps: int = 0          # 0 = no cap
    # masking
    select_frac: float = 0.15
    mask_frac: float = 0.80
    random_frac: float = 0.10
    keep_frac: float = 0.10
    # fine-tuning
    finetune_lr: float = 3e-5
    finetune_batch: int = 32
    finetune_epochs: int = 500
    # execution
    seed: int = 0
    threads: int = 1

    def model_config(self, vocab_size: int) -> ModelConfig:
        return ModelConfig(
            vocab_size=vocab_size,
            max_len=self.max_len,
            hidden=self.hidden,
            heads=self.heads,
            layers=self.layers,
            dropout=self.dropout,
            feature_dim=self.feature_dim,
        )

    def to_text(self) -> str:
        lines = [f"{f.name} = {getattr(self, f.name)}" for f in fields(self)]
        return "\n".join(lines) + "\n"


PROFILES = {
    "desk": RunConfig(),
    "paper-fidelity": RunConfig(
        profile="paper-fidelity",
        max_len=202,
        hidden=768,
        heads=12,
        layers=12,
        dropout=0.2,
        feature_dim=32,
        lr=1.6e-4,
        batch_size=288,
        phase1_epochs=20,
        phase2_epochs=20,
        finetune_lr=3e-5,
        finetune_batch=32,
        finetune_epochs=500,
    ),
}

_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _coerce(name: str, raw: str):
    raw = raw.strip().strip('"').strip("'")
    kind = _FIELD_TYPES[name]
    if kind in ("int", int):
        return int(raw)
    if kind in ("float", float):
        return float(raw)
    return raw


def parse_config_text(text: str, base: RunConfig) -> RunConfig:
    """Apply ``key = value`` overrides to a base profile; unknown keys
    are an error."""
    updates = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected key = value, got {line!r}")
        key, _, value = stripped.partition("=")
        key = key.strip()
        if key not in _FIELD_TYPES:
            raise ConfigError(f"line {lineno}: unknown config key {key!r}")
        try:
            updates[key] = _coerce(key, value)
        except ValueError as err:
            raise ConfigError(f"line {lineno}: bad value for {key}: {err}") from None
    return replace(base, **updates)


def load_run_config(path: str | None, profile: str) -> RunConfig:
    if profile not in PROFILES:
        raise ConfigError(f"unknown profile {profile!r}; choose from {sorted(PROFILES)}")
    base = PROFILES[profile]
    if path is None:
        return base
    return parse_config_text(Path(path).read_text(), base)


def echo_config(cfg: RunConfig, out_dir: Path) -> None:
    """Write the full effective config into the output directory."""
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "effective_config.txt").write_text(cfg.to_text())
