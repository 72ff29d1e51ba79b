"""Run configuration for the experiment harness."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Tuple

from ..combine import MODE_LEVEL_EQUAL, MODE_POOLED

__all__ = ["ConfigError", "ExperimentConfig", "LoadConfig", "METHODS", "MODEL_FAMILIES"]

METHODS = ("standard", "multiple")
MODEL_FAMILIES = ("ets", "snaive")
_MODES = (MODE_POOLED, MODE_LEVEL_EQUAL)


class ConfigError(ValueError):
    """Invalid run configuration (maps to CLI exit code 1)."""


@dataclass(frozen=True)
class ExperimentConfig:
    """Settings for a standard-vs-multiple evaluation run.

    ``method="multiple"`` runs the comparison experiment (the standard
    baseline is always computed alongside, since classification, DM tests and
    plot data need it); ``method="standard"`` runs the baseline alone.
    """

    method: str = "multiple"
    model: str = "ets"
    combine_mode: str = MODE_POOLED
    pi_level: float = 0.95
    paths: int = 1000
    seed: int = 0
    workers: int = 1
    category: Optional[str] = None
    ids: Optional[frozenset] = None
    verbose: bool = False

    def validate(self) -> None:
        if self.method not in METHODS:
            raise ConfigError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.model not in MODEL_FAMILIES:
            raise ConfigError(f"model must be one of {MODEL_FAMILIES}, got {self.model!r}")
        if self.combine_mode not in _MODES:
            raise ConfigError(f"combine mode must be one of {_MODES}, got {self.combine_mode!r}")
        if not 0.0 < self.pi_level < 1.0:
            raise ConfigError(f"PI level must lie in (0, 1), got {self.pi_level}")
        if self.paths < 100:
            raise ConfigError(f"reported intervals need at least 100 sample paths, got {self.paths}")
        if self.workers < 1:
            raise ConfigError(f"worker count must be >= 1, got {self.workers}")


@dataclass(frozen=True)
class LoadConfig:
    """Settings for the rolling-origin load evaluation."""

    periods: Tuple[int, int] = (24, 168)
    train_length: int = 1344
    horizon: int = 24
    step: int = 24
    method: str = "multiple"
    combine_mode: str = MODE_POOLED
    use_ar: bool = False
    seed: int = 0
    workers: int = 1

    def validate(self) -> None:
        s1, s2 = self.periods
        if s1 < 2 or s2 != 7 * s1:
            raise ConfigError(f"periods must be (s, 7*s) with s >= 2, got {self.periods}")
        if self.horizon < 1 or self.horizon > s1:
            raise ConfigError(f"horizon must lie in 1..{s1}, got {self.horizon}")
        if self.step < 1:
            raise ConfigError(f"step must be >= 1, got {self.step}")
        if self.train_length < 2 * s2:
            raise ConfigError(
                f"initial training window must span two long cycles ({2 * s2}), got {self.train_length}"
            )
        if self.method not in METHODS:
            raise ConfigError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.combine_mode not in _MODES:
            raise ConfigError(f"combine mode must be one of {_MODES}, got {self.combine_mode!r}")
        if self.workers < 1:
            raise ConfigError(f"worker count must be >= 1, got {self.workers}")
