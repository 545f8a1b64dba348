"""
Attribution of robust weights to examples, annotations and tokens.

Losses live on completion tokens. A sample-level unit is the length-normalized
masked loss of an example; an annotation-level unit is the mean masked loss
over the annotation's token range. Group multipliers flow back to tokens: a
token inside an annotation inherits the multiplier of that annotation's
group, other completion tokens keep weight one.
"""

from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum

import numpy as np
from numpy.typing import ArrayLike

from star_dro.exceptions import DegenerateBatchError, InvalidInputError, SchemaError
from star_dro.geometry.simplex import FloatArray
from star_dro.grouping.inventory import GroupInventory
from star_dro.grouping.models import ExampleRecord
from star_dro.infrastructure.config import SignalMode
from star_dro.reweighting.types import GroupObservation


class SignalReduction(str, Enum):
    """How token losses reduce to one sample-level unit loss."""

    MEAN = "mean"
    SUM = "sum"


@dataclass(frozen=True)
class CompletionLosses:
    """Per-token losses of one example with its completion mask.

    ``token_weights`` are optional per-token weights applied before masking;
    all ones when omitted.
    """

    token_losses: FloatArray
    mask: FloatArray
    token_weights: FloatArray | None = None

    def __post_init__(self) -> None:
        if self.token_losses.shape != self.mask.shape:
            raise InvalidInputError(
                f"token losses {self.token_losses.shape} and mask {self.mask.shape} differ"
            )
        if self.token_weights is not None and self.token_weights.shape != self.mask.shape:
            raise InvalidInputError("token weights must match the mask shape")

    @classmethod
    def of(
        cls, token_losses: ArrayLike, mask: ArrayLike, token_weights: ArrayLike | None = None
    ) -> "CompletionLosses":
        return cls(
            np.asarray(token_losses, dtype=np.float64),
            np.asarray(mask, dtype=np.float64),
            None if token_weights is None else np.asarray(token_weights, dtype=np.float64),
        )

    @property
    def weighted(self) -> FloatArray:
        """Masked (and optionally token-weighted) losses."""
        losses = self.token_losses * self.mask
        if self.token_weights is not None:
            losses = losses * self.token_weights
        return losses

    def completion_length(self) -> float:
        return float(self.mask.sum())

    def unit_loss(self, reduction: SignalReduction = SignalReduction.MEAN) -> float:
        """Sample-level unit loss."""
        total = float(self.weighted.sum())
        if reduction is SignalReduction.SUM:
            return total
        length = self.completion_length()
        if length <= 0.0:
            raise InvalidInputError("example has no completion tokens")
        return total / length


def annotation_signal(
    example: ExampleRecord, token_losses: ArrayLike, mask: ArrayLike
) -> list[float]:
    """Mean masked token loss over each annotation's token range.

    Raises:
        InvalidInputError: If an annotation has no range, an empty range, a
            range past the end of the sequence, or no completion tokens in it
    """
    losses = np.asarray(token_losses, dtype=np.float64)
    weights = np.asarray(mask, dtype=np.float64)
    signals: list[float] = []
    for position, annotation in enumerate(example.annotations):
        if annotation.token_range is None:
            raise InvalidInputError(
                f"record {example.id!r} annotation {position} has no token range"
            )
        start, end = annotation.token_range
        if end <= start:
            raise InvalidInputError(
                f"record {example.id!r} annotation {position} has an empty token range"
            )
        if end > losses.size:
            raise InvalidInputError(
                f"record {example.id!r} annotation {position} ends at {end}, "
                f"sequence has {losses.size} tokens"
            )
        covered = float(weights[start:end].sum())
        if covered <= 0.0:
            raise InvalidInputError(
                f"record {example.id!r} annotation {position} covers no completion tokens"
            )
        signals.append(float((losses[start:end] * weights[start:end]).sum()) / covered)
    return signals


def has_token_ranges(example: ExampleRecord) -> bool:
    return bool(example.annotations) and all(
        a.token_range is not None for a in example.annotations
    )


def token_weights(
    example: ExampleRecord,
    per_group: ArrayLike,
    inventory: GroupInventory,
    length: int,
) -> FloatArray:
    """Per-token robust weights d_t for one example.

    Tokens inside an annotation range take that annotation's group
    multiplier; every other token gets 1 (prompt tokens are masked out by the
    objective).

    Raises:
        InvalidInputError: If the example carries no token ranges
        SchemaError: If two annotation ranges overlap
    """
    if not has_token_ranges(example):
        raise InvalidInputError(
            f"record {example.id!r} has no annotation token ranges; use sample-level signals"
        )
    multipliers = np.asarray(per_group, dtype=np.float64)
    weights = np.ones(length)
    claimed = np.zeros(length, dtype=bool)
    for annotation in example.annotations:
        start, end = annotation.token_range  # type: ignore[misc]
        if end > length:
            raise InvalidInputError(
                f"record {example.id!r} range {annotation.token_range} exceeds {length} tokens"
            )
        if claimed[start:end].any():
            raise SchemaError(f"record {example.id!r} has overlapping annotation token ranges")
        claimed[start:end] = True
        weights[start:end] = multipliers[inventory.annotation_group(example, annotation)]
    return weights


def sample_observations(
    examples: Sequence[ExampleRecord],
    completions: Sequence[CompletionLosses],
    inventory: GroupInventory,
    reduction: SignalReduction = SignalReduction.MEAN,
) -> list[GroupObservation]:
    """One observation per example with its membership set."""
    return [
        GroupObservation(inventory.memberships(example).groups, completion.unit_loss(reduction))
        for example, completion in zip(examples, completions, strict=True)
    ]


def annotation_observations(
    examples: Sequence[ExampleRecord],
    completions: Sequence[CompletionLosses],
    inventory: GroupInventory,
) -> list[GroupObservation]:
    """One observation per annotation, each in exactly one group.

    Duplicate (Code, Sub-code) annotations stay separate units.
    """
    observations: list[GroupObservation] = []
    for example, completion in zip(examples, completions, strict=True):
        signals = annotation_signal(
            example, completion.token_losses * _omega(completion), completion.mask
        )
        for annotation, signal in zip(example.annotations, signals, strict=True):
            observations.append(
                GroupObservation((inventory.annotation_group(example, annotation),), signal)
            )
    return observations


def _omega(completion: CompletionLosses) -> FloatArray | float:
    return 1.0 if completion.token_weights is None else completion.token_weights


def objective_coefficients(
    completions: Sequence[CompletionLosses],
    multipliers: Sequence[float] | Sequence[FloatArray],
    mode: SignalMode,
    reduction: SignalReduction = SignalReduction.MEAN,
) -> list[FloatArray]:
    """Per-token coefficients c such that the robust objective is sum(c * loss).

    Sample mode expects one multiplier per example; annotation mode expects one
    per-token weight array per example.

    Raises:
        DegenerateBatchError: If the objective's denominator is zero
    """
    if len(completions) != len(multipliers):
        raise InvalidInputError(
            f"{len(multipliers)} multipliers for {len(completions)} examples"
        )
    if mode is SignalMode.SAMPLE:
        per_example = np.asarray(multipliers, dtype=np.float64)
        denominator = float(per_example.sum())
        if not denominator > 0.0:
            raise DegenerateBatchError("sample multipliers sum to zero")
        coefficients = []
        for weight, completion in zip(per_example, completions, strict=True):
            scale = weight / denominator
            if reduction is SignalReduction.MEAN:
                length = completion.completion_length()
                if length <= 0.0:
                    raise InvalidInputError("example has no completion tokens")
                scale /= length
            coefficients.append(scale * completion.mask * _omega(completion))
        return coefficients

    token_level = [np.asarray(d, dtype=np.float64) for d in multipliers]
    denominator = float(sum((d * c.mask).sum() for d, c in zip(token_level, completions)))
    if not denominator > 0.0:
        raise DegenerateBatchError("annotation-level objective has no weighted completion tokens")
    return [
        d * c.mask * _omega(c) / denominator
        for d, c in zip(token_level, completions, strict=True)
    ]


def weighted_objective(
    completions: Sequence[CompletionLosses],
    multipliers: Sequence[float] | Sequence[FloatArray],
    mode: SignalMode,
    reduction: SignalReduction = SignalReduction.MEAN,
) -> float:
    """Robust training objective of a batch.

    Sample mode: sum(m_i * l_i) / sum(m_i) over unit losses l_i.
    Annotation mode: sum(d * loss) / sum(d * mask) over all completion tokens.
    """
    coefficients = objective_coefficients(completions, multipliers, mode, reduction)
    return float(
        sum((c * completion.token_losses).sum() for c, completion in zip(coefficients, completions))
    )
