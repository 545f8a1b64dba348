"""Multinomial logistic regression over token features."""

import numpy as np
from numpy.typing import NDArray
from scipy.special import log_softmax, softmax

from star_dro.exceptions import InvalidInputError
from star_dro.geometry.simplex import FloatArray


class ToyModel:
    """Linear token classifier with a bias row.

    Parameters start at zero. Updates are plain gradient descent with
    decoupled weight decay on the weight rows; the bias row is not decayed.
    """

    def __init__(
        self,
        input_dim: int,
        num_classes: int,
        learning_rate: float,
        weight_decay: float = 0.0,
    ) -> None:
        if input_dim < 1 or num_classes < 2:
            raise InvalidInputError(
                f"need input_dim >= 1 and num_classes >= 2, got {input_dim}, {num_classes}"
            )
        if not learning_rate > 0.0 or weight_decay < 0.0:
            raise InvalidInputError("learning_rate must be > 0 and weight_decay >= 0")
        self.learning_rate = learning_rate
        self.weight_decay = weight_decay
        self.parameters: FloatArray = np.zeros((input_dim + 1, num_classes))

    @property
    def num_classes(self) -> int:
        return int(self.parameters.shape[1])

    def logits(self, features: FloatArray) -> FloatArray:
        return features @ self.parameters[:-1] + self.parameters[-1]

    def token_losses(
        self, features: FloatArray, targets: NDArray[np.int64]
    ) -> tuple[FloatArray, FloatArray]:
        """Per-token cross-entropy and class probabilities."""
        log_probs = log_softmax(self.logits(features), axis=1)
        losses = -log_probs[np.arange(targets.size), targets]
        return losses, np.exp(log_probs)

    def predict(self, features: FloatArray) -> NDArray[np.int64]:
        return np.argmax(softmax(self.logits(features), axis=1), axis=1)

    def gradient(
        self,
        features: FloatArray,
        probabilities: FloatArray,
        targets: NDArray[np.int64],
        coefficients: FloatArray,
    ) -> FloatArray:
        """Gradient of sum(c_t * loss_t) with the coefficients held fixed."""
        residual = probabilities.copy()
        residual[np.arange(targets.size), targets] -= 1.0
        residual *= coefficients[:, None]
        grad = np.empty_like(self.parameters)
        grad[:-1] = features.T @ residual
        grad[-1] = residual.sum(axis=0)
        return grad

    def apply(self, grad: FloatArray) -> None:
        """One descent step followed by decoupled weight decay."""
        decay = self.learning_rate * self.weight_decay
        self.parameters -= self.learning_rate * grad
        self.parameters[:-1] -= decay * self.parameters[:-1]

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.parameters)))
