"""Value types exchanged between the training loop and the reweighters."""

import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from star_dro.exceptions import InvalidInputError
from star_dro.geometry.simplex import FloatArray


class GroupObservation(NamedTuple):
    """One unit of loss attributed to a set of groups.

    In sample mode a unit is an example and ``groups`` is its membership set
    S_i; in annotation mode a unit is a single annotation and ``groups`` holds
    exactly one group.
    """

    groups: tuple[int, ...]
    loss: float

    @property
    def overlap(self) -> int:
        """Membership count nu = |S|."""
        return len(self.groups)


def validate_observations(
    observations: Sequence[GroupObservation], num_groups: int
) -> list[GroupObservation]:
    """Normalize group sets to sorted distinct tuples and check ranges."""
    cleaned: list[GroupObservation] = []
    for position, obs in enumerate(observations):
        groups = tuple(sorted(set(obs.groups)))
        if not groups:
            raise InvalidInputError(f"observation {position} has an empty group set")
        if groups[0] < 0 or groups[-1] >= num_groups:
            raise InvalidInputError(
                f"observation {position} references group outside 0..{num_groups - 1}"
            )
        loss = float(obs.loss)
        if not math.isfinite(loss):
            raise InvalidInputError(f"observation {position} has non-finite loss {obs.loss!r}")
        cleaned.append(GroupObservation(groups, loss))
    return cleaned


@dataclass(frozen=True)
class GroupBatchStats:
    """Per-step summary of present groups, their losses and the ascent signal."""

    present: frozenset[int]
    counts: dict[int, int]
    raw_losses: dict[int, float]
    smoothed_losses: dict[int, float]
    scale: float
    ascent: FloatArray

    def weights(self) -> dict[int, float]:
        """Count weights pi(g) over present groups."""
        total = sum(self.counts[g] for g in self.present)
        return {g: self.counts[g] / total for g in self.present}


@dataclass(frozen=True)
class MultiplierSet:
    """Robust weights emitted by one controller step.

    ``per_group`` is indexed by group id; ``per_example`` follows the order
    of the observations fed to the step.
    """

    per_group: FloatArray
    per_example: FloatArray
    per_token: dict[tuple[int, int], float] | None = None
    stats: GroupBatchStats | None = field(default=None, compare=False)

    @classmethod
    def neutral(cls, num_groups: int, num_units: int) -> "MultiplierSet":
        """All weights exactly one."""
        return cls(per_group=np.ones(num_groups), per_example=np.ones(num_units))

    def summary(self) -> tuple[float, float, float]:
        """(min, mean, max) of the per-example weights."""
        if self.per_example.size == 0:
            return 1.0, 1.0, 1.0
        return (
            float(self.per_example.min()),
            float(self.per_example.mean()),
            float(self.per_example.max()),
        )


class Diagnostics(NamedTuple):
    """Distributional health of the adversarial weights."""

    entropy: float
    active_set_size: int
    eta_eff: float
