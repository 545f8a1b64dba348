"""Tests for the reweighter base class: activation, diagnostics, checkpoints."""

import numpy as np
import pytest

from star_dro.exceptions import InvalidInputError
from star_dro.infrastructure.config import ReweighterConfig
from star_dro.reweighting import (
    GroupObservation,
    StarDROReweighter,
    diagnostics,
    is_active,
)
from star_dro.runtime.state import ReweighterState


def batch():
    return [
        GroupObservation((0,), 3.0),
        GroupObservation((1,), 1.0),
        GroupObservation((2,), 0.2),
    ]


class TestActivation:
    """Test the activation boundary."""

    def test_is_active(self):
        """Test activation is inclusive and None never activates."""
        assert is_active(0, 0)
        assert not is_active(5, 4)
        assert is_active(5, 5)
        assert not is_active(None, 10_000)

    def test_reweighter_tracks_next_step(self):
        """Test the default step is the next one to run."""
        reweighter = StarDROReweighter(3, ReweighterConfig(activation_step=2))
        assert not reweighter.is_active()
        reweighter.step(batch())
        reweighter.step(batch())
        assert reweighter.is_active()


class TestDiagnostics:
    """Test entropy, active-set size and effective step reporting."""

    def test_uniform_state(self):
        """Test a uniform nine-group state."""
        config = ReweighterConfig(alpha=1.08, eta=0.003)
        result = diagnostics(ReweighterState.initial(9), config)
        assert result.entropy == pytest.approx(np.log(9))
        assert result.active_set_size == 9
        assert result.eta_eff == pytest.approx(2.4e-4)

    def test_sparse_state(self):
        """Test zeros drop out of the active set."""
        state = ReweighterState(q=np.array([0.5, 0.5, 0.0]), ema_losses=(None,) * 3)
        result = diagnostics(state, ReweighterConfig())
        assert result.active_set_size == 2
        assert result.entropy == pytest.approx(np.log(2))


class TestCheckpoint:
    """Test snapshot, restore and reset."""

    def test_restore_resumes_identically(self):
        """Test a restored controller continues exactly like the uninterrupted one."""
        config = ReweighterConfig(eta=0.5)
        original = StarDROReweighter(3, config)
        for _ in range(3):
            original.step(batch())
        snapshot = original.snapshot()

        resumed = StarDROReweighter(3)
        resumed.restore(snapshot)
        assert resumed.config == config
        assert resumed.state.step == 3

        expected = original.step(batch())
        actual = resumed.step(batch())
        np.testing.assert_allclose(actual.per_example, expected.per_example)
        np.testing.assert_allclose(resumed.state.q, original.state.q)

    def test_restore_rejects_group_mismatch(self):
        """Test snapshots only restore into the same group count."""
        snapshot = StarDROReweighter(3).snapshot()
        with pytest.raises(InvalidInputError):
            StarDROReweighter(4).restore(snapshot)

    def test_reset(self):
        """Test reset returns to the initial uniform state."""
        reweighter = StarDROReweighter(3, ReweighterConfig(eta=0.5))
        reweighter.step(batch())
        reweighter.reset()
        assert reweighter.state.step == 0
        np.testing.assert_allclose(reweighter.state.q, [1 / 3] * 3)
        assert reweighter.state.ema_losses == (None, None, None)


class TestSchedules:
    """Test per-step schedule overrides."""

    def test_schedule_overrides_config(self):
        """Test eta and rho schedules replace the configured constants."""
        reweighter = StarDROReweighter(
            2,
            ReweighterConfig(eta=0.1, rho=0.2),
            eta_schedule=lambda step: 0.01 * (step + 1),
            rho_schedule=lambda step: 0.5,
        )
        assert reweighter.eta_at(4) == pytest.approx(0.05)
        assert reweighter.rho_at(0) == 0.5

    def test_defaults_without_schedule(self):
        """Test the configured values are used without a schedule."""
        reweighter = StarDROReweighter(2, ReweighterConfig(eta=0.1, rho=0.2))
        assert reweighter.eta_at(100) == 0.1
        assert reweighter.rho_at(100) == 0.2
