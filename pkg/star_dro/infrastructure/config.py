"""Configuration management for STaR-DRO runs."""

import hashlib
import json
import os
from enum import Enum
from pathlib import Path
from typing import Any

import yaml
from pydantic import BaseModel, ConfigDict, Field, model_validator

from star_dro.exceptions import InvalidInputError

YAML_SUFFIXES = {".yaml", ".yml"}


class GroupingScheme(str, Enum):
    """How examples and annotations are assigned to groups."""

    CODE = "code"
    SUBCODE = "subcode"
    CODE_X_SUBCODE = "code_x_subcode"
    NUM_ANNOTATIONS = "num_annotations"
    CODE_X_SUBCODE_X_NA = "code_x_subcode_x_na"


class Method(str, Enum):
    """Training objective selector."""

    ERM = "erm"
    STANDARD_DRO = "dro"
    STAR_DRO = "stardro"


class SignalMode(str, Enum):
    """Granularity of the reweighting update signal."""

    SAMPLE = "sample"
    ANNOTATION = "annotation"


class ReweighterConfig(BaseModel):
    """Hyperparameters of the robust reweighters."""

    alpha: float = Field(default=1.08, gt=1.0, description="Tsallis order")
    eta: float = Field(default=0.003, gt=0.0, description="Mirror-ascent step size")
    rho: float = Field(default=0.03, gt=0.0, le=1.0, description="EMA coefficient")
    ceiling: float = Field(default=10.0, gt=1.0, description="Multiplier ceiling U")
    curvature: float = Field(default=0.75, gt=0.0, description="Multiplier curvature gamma")
    activation_step: int | None = Field(
        default=0, ge=0, description="Global step at which reweighting turns on (null: never)"
    )

    model_config = ConfigDict(extra="forbid", validate_assignment=True)

    @property
    def eta_eff(self) -> float:
        """Effective dual step (alpha - 1) * eta."""
        return (self.alpha - 1.0) * self.eta


class HardGroup(BaseModel):
    """Difficulty parameters of one hard group in the synthetic task."""

    group: int = Field(ge=0, description="Group index")
    label_noise: float = Field(default=0.2, ge=0.0, lt=1.0, description="Label flip rate")
    conflict: float = Field(
        default=0.5, ge=0.0, le=1.0, description="Fraction of informative coordinates reversed"
    )

    model_config = ConfigDict(extra="forbid")


class SyntheticTaskSpec(BaseModel):
    """Synthetic group-heterogeneous structured-completion task."""

    num_groups: int = Field(default=9, ge=1)
    group_sizes: list[int] = Field(
        default_factory=lambda: [300, 220, 160, 110, 80, 50, 30, 15, 5],
        description="Training examples homed in each group",
    )
    hard_groups: list[HardGroup] = Field(
        default_factory=lambda: [HardGroup(group=2), HardGroup(group=4)]
    )
    feature_dim: int = Field(default=8, ge=1, description="Informative coordinates")
    nuisance_dim: int = Field(default=24, ge=0, description="Pure-noise coordinates")
    classes: int = Field(default=3, ge=2)
    separation: float = Field(default=1.5, gt=0.0, description="Scale of class centres")
    annotation_noise: float = Field(default=1.0, ge=0.0)
    token_noise: float = Field(default=0.3, ge=0.0)
    max_annotations: int = Field(default=3, ge=1)
    subcodes_per_code: int = Field(default=2, ge=1)
    span_tokens: int = Field(default=3, ge=1)
    prompt_tokens: int = Field(default=2, ge=0)
    validation_per_group: int = Field(default=60, ge=1)
    seed: int = Field(default=0, ge=0)

    model_config = ConfigDict(extra="forbid")

    @model_validator(mode="after")
    def check_groups(self) -> "SyntheticTaskSpec":
        """Validate group sizes and hard-group indices."""
        if len(self.group_sizes) != self.num_groups:
            raise ValueError(
                f"group_sizes has {len(self.group_sizes)} entries for {self.num_groups} groups"
            )
        if any(size < 0 for size in self.group_sizes):
            raise ValueError("group sizes must be non-negative")
        if sum(self.group_sizes) == 0:
            raise ValueError("group sizes sum to zero")
        seen: set[int] = set()
        for hard in self.hard_groups:
            if hard.group >= self.num_groups:
                raise ValueError(f"hard group {hard.group} is out of range")
            if hard.group in seen:
                raise ValueError(f"hard group {hard.group} listed twice")
            seen.add(hard.group)
        return self


class ModelConfig(BaseModel):
    """Toy model and training-loop settings."""

    learning_rate: float = Field(default=0.5, gt=0.0)
    weight_decay: float = Field(default=0.05, ge=0.0)
    epochs: int = Field(default=16, ge=1)
    batch_size: int = Field(default=32, ge=1)
    activation_epoch: int | None = Field(
        default=1, ge=0, description="Epoch index at which reweighting turns on (null: never)"
    )
    divergence_threshold: float = Field(default=1e6, gt=0.0)
    signal: SignalMode = SignalMode.SAMPLE
    grouping: GroupingScheme = GroupingScheme.CODE
    validate_schema: bool = True

    model_config = ConfigDict(extra="forbid")


class RunConfig(BaseModel):
    """Complete, serializable description of one training run."""

    method: Method = Method.STAR_DRO
    reweighter: ReweighterConfig = Field(default_factory=ReweighterConfig)
    model: ModelConfig = Field(default_factory=ModelConfig)
    task: SyntheticTaskSpec = Field(default_factory=SyntheticTaskSpec)
    dataset_path: Path | None = Field(
        default=None, description="Generated dataset directory; overrides task when set"
    )
    seed: int = Field(default=0, ge=0)
    output_dir: Path = Field(default=Path("runs"))
    run_id: str | None = None

    model_config = ConfigDict(extra="forbid")

    @classmethod
    def from_file(cls, config_path: Path) -> "RunConfig":
        """Load configuration from a JSON (or YAML) file.

        Args:
            config_path: Path to configuration file

        Returns:
            RunConfig instance

        Raises:
            FileNotFoundError: If config file doesn't exist
            json.JSONDecodeError / yaml.YAMLError: If the file cannot be parsed
            pydantic.ValidationError: If fields are missing, unknown or out of range
        """
        return cls.model_validate(load_document(config_path))

    def save(self, config_path: Path) -> None:
        """Save configuration as JSON, or YAML when the suffix asks for it."""
        config_path.parent.mkdir(parents=True, exist_ok=True)
        data = self.model_dump(mode="json")
        with open(config_path, "w", encoding="utf-8") as f:
            if config_path.suffix in YAML_SUFFIXES:
                yaml.safe_dump(data, f, default_flow_style=False, sort_keys=True)
            else:
                json.dump(data, f, indent=2, sort_keys=True)
                f.write("\n")

    def config_hash(self) -> str:
        """Stable hash of everything that influences the run's numbers."""
        data = self.model_dump(mode="json", exclude={"output_dir", "run_id"})
        canonical = json.dumps(data, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    @property
    def resolved_run_id(self) -> str:
        """Explicit run id, or one derived from method, seed and config hash."""
        if self.run_id:
            return self.run_id
        return f"{self.method.value}-seed{self.seed}-{self.config_hash()[:8]}"

    def with_overrides(self, **updates: Any) -> "RunConfig":
        """Return a validated copy with top-level fields replaced."""
        data = self.model_dump()
        data.update(updates)
        return type(self).model_validate(data)


def load_document(path: Path) -> Any:
    """Read a JSON or YAML document from disk."""
    if not path.exists():
        raise FileNotFoundError(f"Configuration file not found: {path}")
    with open(path, encoding="utf-8") as f:
        if path.suffix in YAML_SUFFIXES:
            data = yaml.safe_load(f)
        else:
            data = json.load(f)
    if not isinstance(data, dict):
        raise InvalidInputError(f"{path} must contain a JSON object at the top level")
    return data


def resolve_output_dir(flag_value: Path | None) -> Path:
    """Output directory for a command; STARDRO_OUT overrides the flag."""
    if env_value := os.environ.get("STARDRO_OUT"):
        return Path(env_value)
    if flag_value is not None:
        return flag_value
    return Path("runs")
