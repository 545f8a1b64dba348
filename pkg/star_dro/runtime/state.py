"""Reweighter state and JSON snapshots.

A ReweighterState is owned by exactly one training loop. Steps never mutate a
state in place; they return a new one, so a state handed to another thread for
logging stays valid.

Snapshots persist the state together with the hyperparameters that produced
it, enabling checkpoint and resume of a robust run.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from star_dro.exceptions import InvalidInputError
from star_dro.geometry.simplex import FloatArray, check_simplex, uniform
from star_dro.infrastructure.config import ReweighterConfig
from star_dro.logging.logger import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class ReweighterState:
    """Adversarial weights, smoothed group losses and the step counter."""

    q: FloatArray
    ema_losses: tuple[float | None, ...]
    step: int = 0
    converged: bool = field(default=True, compare=False)

    def __post_init__(self) -> None:
        if len(self.ema_losses) != len(self.q):
            raise InvalidInputError(
                f"ema_losses has {len(self.ema_losses)} entries for {len(self.q)} groups"
            )
        if self.step < 0:
            raise InvalidInputError(f"step must be >= 0, got {self.step}")

    @classmethod
    def initial(cls, num_groups: int) -> "ReweighterState":
        """Uniform weights, no observations, step zero."""
        return cls(q=uniform(num_groups), ema_losses=(None,) * num_groups, step=0)

    @property
    def num_groups(self) -> int:
        return int(self.q.size)

    def advanced(
        self,
        q: FloatArray | None = None,
        ema_losses: tuple[float | None, ...] | None = None,
        converged: bool = True,
    ) -> "ReweighterState":
        """Next state: step + 1 with optional replacements."""
        return ReweighterState(
            q=self.q.copy() if q is None else q,
            ema_losses=self.ema_losses if ema_losses is None else ema_losses,
            step=self.step + 1,
            converged=converged,
        )


class StateSnapshot(BaseModel):
    """Serialized reweighter state plus the hyperparameters that produced it."""

    q: list[float]
    ema_losses: list[float | None]
    step: int = Field(ge=0)
    alpha: float
    eta: float
    rho: float
    ceiling: float
    curvature: float
    activation_step: int | None

    model_config = ConfigDict(extra="forbid")

    @classmethod
    def capture(cls, state: ReweighterState, config: ReweighterConfig) -> "StateSnapshot":
        """Build a snapshot from a live state."""
        return cls(
            q=[float(value) for value in state.q],
            ema_losses=list(state.ema_losses),
            step=state.step,
            alpha=config.alpha,
            eta=config.eta,
            rho=config.rho,
            ceiling=config.ceiling,
            curvature=config.curvature,
            activation_step=config.activation_step,
        )

    def to_state(self) -> ReweighterState:
        """Rebuild the state, validating the simplex."""
        q = check_simplex(np.asarray(self.q, dtype=np.float64))
        return ReweighterState(q=q, ema_losses=tuple(self.ema_losses), step=self.step)

    def to_config(self) -> ReweighterConfig:
        """Rebuild the hyperparameters."""
        return ReweighterConfig(
            alpha=self.alpha,
            eta=self.eta,
            rho=self.rho,
            ceiling=self.ceiling,
            curvature=self.curvature,
            activation_step=self.activation_step,
        )


def save_snapshot(path: Path, state: ReweighterState, config: ReweighterConfig) -> None:
    """Write a state snapshot as a JSON document.

    Args:
        path: Destination file
        state: State to persist
        config: Hyperparameters stored alongside the state
    """
    snapshot = StateSnapshot.capture(state, config)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(snapshot.model_dump(), f, indent=2)
        f.write("\n")
    logger.debug("snapshot_saved", path=str(path), step=state.step)


def load_snapshot(path: Path) -> tuple[ReweighterState, ReweighterConfig]:
    """Read a snapshot written by save_snapshot.

    Raises:
        FileNotFoundError: If the file does not exist
        pydantic.ValidationError: If required fields are missing
        InvalidInputError: If q is not on the simplex
    """
    with open(path, encoding="utf-8") as f:
        snapshot = StateSnapshot.model_validate(json.load(f))
    logger.debug("snapshot_loaded", path=str(path), step=snapshot.step)
    return snapshot.to_state(), snapshot.to_config()
