"""
STaR-DRO: stateful Tsallis-robust reweighting.

One step runs, in order:
- overlap-corrected group-loss estimation on the minibatch
- EMA smoothing (absent groups frozen)
- rescaled ascent signal relative to the count-weighted mean
- Tsallis mirror ascent with entmax projection
- excess-only multiplier shaping and per-example aggregation
"""

from collections.abc import Mapping, Sequence

import numpy as np

from star_dro.exceptions import InvalidInputError
from star_dro.geometry.simplex import FloatArray, mirror_ascent_projection, uniform
from star_dro.infrastructure.config import ReweighterConfig
from star_dro.logging.logger import get_logger
from star_dro.reweighting.base import BaseReweighter, is_active
from star_dro.reweighting.types import (
    GroupBatchStats,
    GroupObservation,
    MultiplierSet,
    validate_observations,
)
from star_dro.runtime.state import ReweighterState

logger = get_logger(__name__)


def estimate_group_losses(observations: Sequence[GroupObservation]) -> dict[int, float]:
    """Overlap-corrected minibatch loss per present group.

    Each unit contributes its loss to every group in its set with weight 1/nu.
    Groups no unit belongs to carry no estimate.

    Raises:
        InvalidInputError: If a unit has an empty group set
    """
    numerators: dict[int, float] = {}
    denominators: dict[int, float] = {}
    for position, obs in enumerate(observations):
        groups = set(obs.groups)
        if not groups:
            raise InvalidInputError(f"observation {position} has an empty group set")
        share = 1.0 / len(groups)
        for g in groups:
            numerators[g] = numerators.get(g, 0.0) + share * float(obs.loss)
            denominators[g] = denominators.get(g, 0.0) + share
    return {g: numerators[g] / denominators[g] for g in sorted(numerators)}


def count_groups(observations: Sequence[GroupObservation]) -> dict[int, int]:
    """Number of units contributing to each present group."""
    counts: dict[int, int] = {}
    for obs in observations:
        for g in set(obs.groups):
            counts[g] = counts.get(g, 0) + 1
    return dict(sorted(counts.items()))


def update_ema(
    ema_losses: Sequence[float | None], raw: Mapping[int, float], rho: float
) -> tuple[float | None, ...]:
    """Smooth the raw estimates into the running group losses.

    The first observation of a group seeds its value; later observations
    blend as (1 - rho) * previous + rho * raw. Groups absent from ``raw``
    keep their previous value untouched.
    """
    if not 0.0 < rho <= 1.0:
        raise InvalidInputError(f"rho must lie in (0, 1], got {rho!r}")
    updated = list(ema_losses)
    for g, value in raw.items():
        previous = updated[g]
        updated[g] = value if previous is None else (1.0 - rho) * previous + rho * value
    return tuple(updated)


def compute_ascent(
    smoothed: Sequence[float | None] | Mapping[int, float],
    counts: Mapping[int, int],
    present: Sequence[int] | frozenset[int],
    num_groups: int,
) -> tuple[float, FloatArray]:
    """Scale s = sum pi(g) L_g and ascent a_g = L_g / s over present groups.

    A zero scale (every present loss is zero) yields an all-zero ascent.

    Raises:
        InvalidInputError: If no units are present or a present group has no
            smoothed value
    """
    members = sorted(present)
    total = sum(counts.get(g, 0) for g in members)
    if total <= 0:
        raise InvalidInputError("ascent needs at least one present unit")

    losses: dict[int, float] = {}
    for g in members:
        value = smoothed[g]
        if value is None:
            raise InvalidInputError(f"present group {g} has no smoothed loss")
        losses[g] = float(value)

    scale = sum(counts.get(g, 0) / total * losses[g] for g in members)
    ascent = np.zeros(num_groups)
    if scale == 0.0:
        logger.warning("degenerate_scale", present=len(members))
        return 0.0, ascent
    for g in members:
        ascent[g] = losses[g] / scale
    return scale, ascent


def shape_multipliers(
    q: FloatArray, present: Sequence[int] | frozenset[int], ceiling: float, curvature: float
) -> FloatArray:
    """Excess-only multipliers m_g = 1 + (U - 1) * clip((G q_g - 1)/(G - 1), 0, 1) ** gamma.

    Absent groups get exactly 1, as does every group when G = 1.
    """
    size = q.size
    multipliers = np.ones(size)
    if size == 1:
        return multipliers
    members = np.array(sorted(present), dtype=np.int64)
    if members.size == 0:
        return multipliers
    excess = np.clip((size * q[members] - 1.0) / (size - 1.0), 0.0, 1.0)
    multipliers[members] = 1.0 + (ceiling - 1.0) * np.power(excess, curvature)
    return multipliers


def aggregate_example_multipliers(
    per_group: FloatArray, observations: Sequence[GroupObservation]
) -> FloatArray:
    """Per-unit weight: mean group multiplier over the unit's distinct groups."""
    return np.array(
        [float(np.mean(per_group[sorted(set(obs.groups))])) for obs in observations],
        dtype=np.float64,
    )


def star_dro_step(
    state: ReweighterState,
    observations: Sequence[GroupObservation],
    config: ReweighterConfig,
    eta: float | None = None,
    rho: float | None = None,
) -> tuple[ReweighterState, MultiplierSet]:
    """Run one full STaR-DRO step.

    EMA statistics accumulate on every step. The adversarial weights and the
    multipliers only move once ``state.step`` reaches the activation step, at
    which point q restarts from uniform.

    Args:
        state: Current state
        observations: Loss units with group sets
        config: Hyperparameters
        eta: Step size for this step (defaults to config.eta)
        rho: EMA coefficient for this step (defaults to config.rho)

    Returns:
        The next state and this step's multipliers
    """
    eta = config.eta if eta is None else eta
    rho = config.rho if rho is None else rho
    size = state.num_groups
    units = validate_observations(observations, size)

    raw = estimate_group_losses(units)
    counts = count_groups(units)
    ema = update_ema(state.ema_losses, raw, rho)
    present = frozenset(raw)

    if present:
        scale, ascent = compute_ascent(ema, counts, present, size)
    else:
        scale, ascent = 0.0, np.zeros(size)
    stats = GroupBatchStats(
        present=present,
        counts=counts,
        raw_losses=raw,
        smoothed_losses={g: float(ema[g]) for g in present},  # type: ignore[arg-type]
        scale=scale,
        ascent=ascent,
    )

    if not is_active(config.activation_step, state.step):
        neutral = MultiplierSet.neutral(size, len(units))
        return state.advanced(ema_losses=ema), MultiplierSet(
            per_group=neutral.per_group, per_example=neutral.per_example, stats=stats
        )

    q = uniform(size) if state.step == config.activation_step else state.q
    converged = True
    if scale > 0.0 and eta > 0.0:
        projection = mirror_ascent_projection(q, ascent, config.alpha, eta)
        q, converged = projection.weights, projection.converged
    else:
        q = q.copy()

    per_group = shape_multipliers(q, present, config.ceiling, config.curvature)
    per_example = aggregate_example_multipliers(per_group, units)
    next_state = state.advanced(q=q, ema_losses=ema, converged=converged)
    return next_state, MultiplierSet(per_group=per_group, per_example=per_example, stats=stats)


class StarDROReweighter(BaseReweighter):
    """Stateful Tsallis mirror-ascent controller with bounded multipliers."""

    name = "stardro"

    def update(
        self, state: ReweighterState, observations: Sequence[GroupObservation]
    ) -> tuple[ReweighterState, MultiplierSet]:
        return star_dro_step(
            state,
            observations,
            self.config,
            eta=self.eta_at(state.step),
            rho=self.rho_at(state.step),
        )
