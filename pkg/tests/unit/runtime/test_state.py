"""Tests for reweighter state and snapshots."""

import json

import numpy as np
import pytest
from pydantic import ValidationError

from star_dro.exceptions import InvalidInputError
from star_dro.infrastructure.config import ReweighterConfig
from star_dro.runtime.state import (
    ReweighterState,
    StateSnapshot,
    load_snapshot,
    save_snapshot,
)


class TestReweighterState:
    """Test the immutable state value."""

    def test_initial(self):
        """Test the initial state is uniform at step zero."""
        state = ReweighterState.initial(4)
        np.testing.assert_allclose(state.q, [0.25] * 4)
        assert state.ema_losses == (None,) * 4
        assert state.step == 0
        assert state.num_groups == 4

    def test_advanced_copies(self):
        """Test advancing increments the step and never aliases q."""
        state = ReweighterState.initial(2)
        nxt = state.advanced()
        assert nxt.step == 1
        assert nxt.q is not state.q
        nxt.q[0] = 0.9
        assert state.q[0] == 0.5

    def test_advanced_replacements(self):
        """Test replacements flow into the next state."""
        state = ReweighterState.initial(2).advanced(
            q=np.array([0.7, 0.3]), ema_losses=(1.0, None), converged=False
        )
        np.testing.assert_allclose(state.q, [0.7, 0.3])
        assert state.ema_losses == (1.0, None)
        assert not state.converged

    def test_rejects_length_mismatch(self):
        """Test ema_losses must match the group count."""
        with pytest.raises(InvalidInputError):
            ReweighterState(q=np.array([0.5, 0.5]), ema_losses=(None,))

    def test_rejects_negative_step(self):
        """Test the step counter is non-negative."""
        with pytest.raises(InvalidInputError):
            ReweighterState(q=np.array([1.0]), ema_losses=(None,), step=-1)


class TestSnapshots:
    """Test snapshot capture and persistence."""

    def test_capture_and_rebuild(self):
        """Test a snapshot rebuilds the state and hyperparameters."""
        state = ReweighterState(q=np.array([0.6, 0.4, 0.0]), ema_losses=(1.5, 0.5, None), step=7)
        config = ReweighterConfig(alpha=1.2, eta=0.05, activation_step=None)
        snapshot = StateSnapshot.capture(state, config)
        rebuilt = snapshot.to_state()
        np.testing.assert_allclose(rebuilt.q, state.q)
        assert rebuilt.ema_losses == state.ema_losses
        assert rebuilt.step == 7
        assert snapshot.to_config() == config

    def test_save_and_load(self, tmp_path):
        """Test the JSON file carries state and config."""
        path = tmp_path / "ckpt" / "state.json"
        state = ReweighterState(q=np.array([0.25, 0.75]), ema_losses=(2.0, 1.0), step=3)
        save_snapshot(path, state, ReweighterConfig())
        assert json.loads(path.read_text())["step"] == 3

        loaded, config = load_snapshot(path)
        np.testing.assert_allclose(loaded.q, [0.25, 0.75])
        assert loaded.ema_losses == (2.0, 1.0)
        assert config == ReweighterConfig()

    def test_load_rejects_off_simplex(self, tmp_path):
        """Test a tampered q is rejected on load."""
        path = tmp_path / "state.json"
        save_snapshot(path, ReweighterState.initial(2), ReweighterConfig())
        document = json.loads(path.read_text())
        document["q"] = [0.9, 0.9]
        path.write_text(json.dumps(document))
        with pytest.raises(InvalidInputError):
            load_snapshot(path)

    def test_load_rejects_unknown_fields(self, tmp_path):
        """Test snapshots forbid extra keys."""
        path = tmp_path / "state.json"
        save_snapshot(path, ReweighterState.initial(2), ReweighterConfig())
        document = json.loads(path.read_text())
        document["momentum"] = 0.9
        path.write_text(json.dumps(document))
        with pytest.raises(ValidationError):
            load_snapshot(path)

    def test_missing_file(self, tmp_path):
        """Test a missing snapshot raises FileNotFoundError."""
        with pytest.raises(FileNotFoundError):
            load_snapshot(tmp_path / "absent.json")
