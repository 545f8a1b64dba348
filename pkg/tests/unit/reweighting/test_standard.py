"""Tests for the standard group-DRO and ERM controllers."""

import numpy as np
import pytest

from star_dro.infrastructure.config import ReweighterConfig
from star_dro.reweighting import (
    ERMReweighter,
    GroupObservation,
    StandardDROReweighter,
    standard_dro_step,
)
from star_dro.runtime.state import ReweighterState


def obs(groups, loss):
    return GroupObservation(tuple(groups), loss)


class TestStandardDroStep:
    """Test the exponentiated-gradient baseline."""

    def test_equal_losses_keep_uniform(self):
        """Test uniform q with equal losses stays put and weights are one."""
        state, multipliers = standard_dro_step(
            ReweighterState.initial(3), [obs([0], 1.0), obs([1], 1.0), obs([2], 1.0)], ReweighterConfig()
        )
        np.testing.assert_allclose(state.q, [1 / 3] * 3)
        np.testing.assert_allclose(multipliers.per_example, [1.0, 1.0, 1.0])

    def test_hand_example(self):
        """Test q' = softmax(log q + eta * loss) on two groups."""
        state, multipliers = standard_dro_step(
            ReweighterState.initial(2), [obs([0], 1.0), obs([1], 0.0)], ReweighterConfig(eta=1.0)
        )
        np.testing.assert_allclose(state.q, [0.7311, 0.2689], atol=1e-4)
        np.testing.assert_allclose(multipliers.per_example, 2.0 * state.q)
        assert multipliers.per_example.mean() == pytest.approx(1.0)
        np.testing.assert_allclose(multipliers.per_group, 2.0 * state.q)

    def test_absent_group_sees_zero_loss(self):
        """Test an absent group's weight is only renormalized."""
        start = ReweighterState(q=np.array([0.2, 0.3, 0.5]), ema_losses=(None,) * 3, step=1)
        state, _ = standard_dro_step(start, [obs([0], 0.0), obs([1], 0.0)], ReweighterConfig(eta=2.0))
        np.testing.assert_allclose(state.q, [0.2, 0.3, 0.5])

    def test_overlap_weight(self):
        """Test a multi-group unit is weighted by its mean group mass."""
        start = ReweighterState(q=np.array([0.6, 0.2, 0.2]), ema_losses=(None,) * 3, step=1)
        state, multipliers = standard_dro_step(
            start, [obs([0, 1], 0.0), obs([2], 0.0)], ReweighterConfig(eta=1.0)
        )
        raw = np.array([(state.q[0] + state.q[1]) / 2.0, state.q[2]])
        np.testing.assert_allclose(multipliers.per_example, raw / raw.mean())

    def test_no_ema(self):
        """Test the baseline keeps no smoothed losses."""
        state, multipliers = standard_dro_step(
            ReweighterState.initial(2), [obs([0], 1.0)], ReweighterConfig()
        )
        assert state.ema_losses == (None, None)
        assert multipliers.stats.smoothed_losses == {}

    def test_inactive_is_neutral(self):
        """Test steps before activation leave q uniform."""
        config = ReweighterConfig(activation_step=3, eta=5.0)
        state = ReweighterState.initial(2)
        for _ in range(3):
            state, multipliers = standard_dro_step(state, [obs([0], 4.0), obs([1], 0.0)], config)
            np.testing.assert_array_equal(multipliers.per_example, [1.0, 1.0])
        np.testing.assert_array_equal(state.q, [0.5, 0.5])

    def test_weights_are_unbounded(self):
        """Test dense weighting exceeds any fixed ceiling under large steps."""
        state = ReweighterState.initial(2)
        config = ReweighterConfig(eta=5.0)
        for _ in range(5):
            state, multipliers = standard_dro_step(state, [obs([0], 3.0), obs([1], 0.0)], config)
        assert multipliers.per_example[0] / multipliers.per_example[1] > 1e6


class TestControllers:
    """Test the controller wrappers."""

    def test_standard_reweighter(self):
        """Test the wrapper moves mass toward the harder group."""
        reweighter = StandardDROReweighter(2, ReweighterConfig(eta=1.0))
        reweighter.step([obs([0], 2.0), obs([1], 0.5)])
        assert reweighter.state.q[0] > 0.5
        assert reweighter.name == "dro"

    def test_erm_is_neutral(self):
        """Test ERM never changes anything but the step counter."""
        reweighter = ERMReweighter(3)
        for _ in range(4):
            multipliers = reweighter.step([obs([0], 5.0), obs([1, 2], 0.1)])
            np.testing.assert_array_equal(multipliers.per_example, [1.0, 1.0])
            np.testing.assert_array_equal(multipliers.per_group, [1.0, 1.0, 1.0])
        assert reweighter.state.step == 4
        np.testing.assert_allclose(reweighter.state.q, [1 / 3] * 3)
