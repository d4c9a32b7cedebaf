"""Configuration schema of the command-line entry point."""

from typing import Literal

from omegaconf import OmegaConf
from omegaconf.dictconfig import DictConfig
from pydantic import ConfigDict, root_validator, validator
from pydantic.dataclasses import dataclass

# Commands reading an instance (a folder for measure and bench)
_NEEDS_INSTANCE = {"solve", "validate", "measure", "export", "oracle", "gantt", "bench"}
# Commands reading a solution
_NEEDS_SOLUTION = {"validate", "gantt"}


@dataclass(config=ConfigDict(extra="forbid"))
class ExportConfig:
    """Configuration for model export."""

    format: Literal["lp", "cp", "cpo"]
    warm_start: Literal["mst", "sol"]


@dataclass(config=ConfigDict(extra="forbid"))
class OracleConfig:
    """Configuration for the exhaustive search."""

    force: bool
    max_combinations: int
    time_limit: float | None
    workers: int

    @validator("max_combinations", "workers")
    def validate_positive(cls, value: int) -> int:
        """Check that the value is positive."""
        if value < 1:
            raise ValueError("must be positive")
        return value

    @validator("time_limit")
    def validate_time_limit(cls, value: float | None) -> float | None:
        """Check that the time limit is positive when set."""
        if value is not None and value <= 0:
            raise ValueError("time_limit must be positive")
        return value


@dataclass(config=ConfigDict(extra="forbid"))
class BenchConfig:
    """Configuration for the heuristic benchmark."""

    alphas: list[float]
    workers: int

    @validator("alphas")
    def validate_alphas(cls, value: list[float]) -> list[float]:
        """Check that learning rates are non-negative."""
        if not value:
            raise ValueError("at least one learning rate is needed")
        if min(value) < 0:
            raise ValueError("learning rates must be non-negative")
        return value

    @validator("workers")
    def validate_workers(cls, value: int) -> int:
        """Check that the number of workers is positive."""
        if value < 1:
            raise ValueError("workers must be positive")
        return value


@dataclass(config=ConfigDict(extra="forbid"))
class GenConfig:
    """Configuration for the random instance generator."""

    seed: int
    machines: int
    operations: int
    shape: Literal["chain", "Y", "dag"]
    density: float
    eligibility: float
    time_range: list[int]
    jobs: int

    @validator("machines", "operations", "jobs")
    def validate_count(cls, value: int) -> int:
        """Check that the count is positive."""
        if value < 1:
            raise ValueError("must be positive")
        return value

    @validator("density")
    def validate_density(cls, value: float) -> float:
        """Check that the value is a probability."""
        if not 0 <= value <= 1:
            raise ValueError("density must be between 0 and 1")
        return value

    @validator("eligibility")
    def validate_eligibility(cls, value: float) -> float:
        """Check that the value is a positive probability."""
        if not 0 < value <= 1:
            raise ValueError("eligibility must be in (0, 1]")
        return value

    @validator("time_range")
    def validate_time_range(cls, value: list[int]) -> list[int]:
        """Check that the range is two ordered positive times."""
        if len(value) != 2:
            raise ValueError("time_range must be a list of two integers")
        if not 1 <= value[0] <= value[1]:
            raise ValueError("time_range must satisfy 1 <= low <= high")
        return value


@dataclass(config=ConfigDict(extra="forbid"))
class Config:
    """Configuration of the command-line entry point."""

    command: Literal[
        "solve", "validate", "measure", "export", "oracle", "gantt", "bench", "gen"
    ]

    instance: str | None
    solution: str | None
    out: str | None

    alpha: float
    heuristic: Literal["est", "ect", "best"]
    original_units: bool
    reduce: bool

    export: ExportConfig
    oracle: OracleConfig
    bench: BenchConfig
    gen: GenConfig

    @root_validator(pre=True)
    def validate_fields(cls, values: dict) -> dict:
        """Check that the command has its input files.

        Args:
            values (dict): Field values.

        Returns:
            dict: Validated field values.
        """
        command = values["command"]
        if command in _NEEDS_INSTANCE and values.get("instance") is None:
            raise ValueError(f"command {command!r} needs instance=<path>")
        if command in _NEEDS_SOLUTION and values.get("solution") is None:
            raise ValueError(f"command {command!r} needs solution=<path>")
        return values

    @validator("alpha")
    def validate_alpha(cls, value: float) -> float:
        """Check that the learning rate is non-negative."""
        if value < 0:
            raise ValueError("alpha must be non-negative")
        return value


def validate_config(config: DictConfig) -> Config:
    """Validate the configuration.

    The `hydra` node, present when the configuration is composed with the Hydra
    settings, is not part of the schema.

    Args:
        config (DictConfig): Configuration object.

    Returns:
        Config: Validated configuration object.
    """
    # Resolve the DictConfig to a native Python object
    cfg_obj = OmegaConf.to_object(config)
    cfg_obj.pop("hydra", None)
    # Instantiate the Config class
    validated_config = Config(**cfg_obj)
    return validated_config
