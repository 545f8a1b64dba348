"""Baseline controllers: standard group DRO and plain ERM."""

from collections.abc import Sequence

import numpy as np

from star_dro.geometry.simplex import exponentiated_gradient_step, uniform
from star_dro.infrastructure.config import ReweighterConfig
from star_dro.reweighting.base import BaseReweighter, is_active
from star_dro.reweighting.star import count_groups, estimate_group_losses
from star_dro.reweighting.types import (
    GroupBatchStats,
    GroupObservation,
    MultiplierSet,
    validate_observations,
)
from star_dro.runtime.state import ReweighterState


def standard_dro_step(
    state: ReweighterState,
    observations: Sequence[GroupObservation],
    config: ReweighterConfig,
    eta: float | None = None,
) -> tuple[ReweighterState, MultiplierSet]:
    """One exponentiated-gradient group-DRO step.

    q moves on the raw minibatch group estimates (absent groups see zero
    loss). Each unit is weighted by sum(q_g for g in S) / nu and the batch
    weights are rescaled to mean one. No EMA is kept.
    """
    eta = config.eta if eta is None else eta
    size = state.num_groups
    units = validate_observations(observations, size)
    raw = estimate_group_losses(units)
    stats = GroupBatchStats(
        present=frozenset(raw),
        counts=count_groups(units),
        raw_losses=raw,
        smoothed_losses={},
        scale=0.0,
        ascent=np.zeros(size),
    )

    if not is_active(config.activation_step, state.step):
        return state.advanced(), MultiplierSet(
            per_group=np.ones(size), per_example=np.ones(len(units)), stats=stats
        )

    q = uniform(size) if state.step == config.activation_step else state.q
    losses = np.zeros(size)
    for g, value in raw.items():
        losses[g] = value
    q = exponentiated_gradient_step(q, losses, eta)

    weights = np.array(
        [float(q[list(obs.groups)].sum()) / obs.overlap for obs in units], dtype=np.float64
    )
    mean_weight = float(weights.mean()) if weights.size else 0.0
    weights = weights / mean_weight if mean_weight > 0.0 else np.ones(len(units))

    return state.advanced(q=q), MultiplierSet(
        per_group=size * q, per_example=weights, stats=stats
    )


class StandardDROReweighter(BaseReweighter):
    """Dense exponentiated-gradient group DRO."""

    name = "dro"

    def update(
        self, state: ReweighterState, observations: Sequence[GroupObservation]
    ) -> tuple[ReweighterState, MultiplierSet]:
        return standard_dro_step(state, observations, self.config, eta=self.eta_at(state.step))


class ERMReweighter(BaseReweighter):
    """Empirical risk minimization: every multiplier is one."""

    name = "erm"

    def update(
        self, state: ReweighterState, observations: Sequence[GroupObservation]
    ) -> tuple[ReweighterState, MultiplierSet]:
        units = validate_observations(observations, state.num_groups)
        return state.advanced(), MultiplierSet.neutral(state.num_groups, len(units))
