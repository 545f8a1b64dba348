"""Tests for the toy token classifier."""

import numpy as np
import pytest

from star_dro.exceptions import InvalidInputError
from star_dro.training.model import ToyModel


class TestToyModel:
    """Test losses, gradients and updates."""

    def test_initial_loss(self):
        """Test zero parameters give log(num_classes) per token."""
        model = ToyModel(3, 4, learning_rate=0.1)
        losses, probabilities = model.token_losses(np.ones((5, 3)), np.array([0, 1, 2, 3, 0]))
        np.testing.assert_allclose(losses, np.log(4))
        np.testing.assert_allclose(probabilities, 0.25)

    def test_gradient_matches_finite_differences(self):
        """Test the analytic gradient of sum(c * loss)."""
        rng = np.random.default_rng(0)
        model = ToyModel(3, 3, learning_rate=0.1)
        model.parameters = rng.normal(size=model.parameters.shape)
        features = rng.normal(size=(6, 3))
        targets = rng.integers(0, 3, size=6)
        coefficients = rng.uniform(0.0, 1.0, size=6)

        def objective():
            return float((coefficients * model.token_losses(features, targets)[0]).sum())

        _, probabilities = model.token_losses(features, targets)
        grad = model.gradient(features, probabilities, targets, coefficients)
        numeric = np.zeros_like(grad)
        eps = 1e-6
        for index in np.ndindex(grad.shape):
            original = model.parameters[index]
            model.parameters[index] = original + eps
            upper = objective()
            model.parameters[index] = original - eps
            lower = objective()
            model.parameters[index] = original
            numeric[index] = (upper - lower) / (2 * eps)
        np.testing.assert_allclose(grad, numeric, atol=1e-6)

    def test_weight_decay_skips_bias(self):
        """Test decay shrinks weights but not the bias row."""
        model = ToyModel(2, 2, learning_rate=0.5, weight_decay=0.2)
        model.parameters[:] = 1.0
        model.apply(np.zeros_like(model.parameters))
        np.testing.assert_allclose(model.parameters[:-1], 0.9)
        np.testing.assert_allclose(model.parameters[-1], 1.0)

    def test_descent_reduces_loss(self):
        """Test a gradient step lowers the objective on a separable batch."""
        features = np.array([[1.0, 0.0], [0.0, 1.0]])
        targets = np.array([0, 1])
        model = ToyModel(2, 2, learning_rate=0.5)
        before, probabilities = model.token_losses(features, targets)
        model.apply(model.gradient(features, probabilities, targets, np.full(2, 0.5)))
        after, _ = model.token_losses(features, targets)
        assert after.sum() < before.sum()
        np.testing.assert_array_equal(model.predict(features), targets)

    @pytest.mark.parametrize(
        "args",
        [(0, 2, 0.1, 0.0), (2, 1, 0.1, 0.0), (2, 2, 0.0, 0.0), (2, 2, 0.1, -1.0)],
    )
    def test_invalid_arguments(self, args):
        """Test invalid shapes and rates are rejected."""
        with pytest.raises(InvalidInputError):
            ToyModel(*args)

    def test_is_finite(self):
        """Test the finiteness check."""
        model = ToyModel(2, 2, learning_rate=0.1)
        assert model.is_finite()
        model.parameters[0, 0] = np.nan
        assert not model.is_finite()
