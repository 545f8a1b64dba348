"""
Tsallis mirror geometry on the probability simplex.

This module provides the pure numerical kernels used by the robust reweighters:
- Primal to dual map for the Tsallis mirror map of order alpha > 1
- Entmax-style thresholded projection back to the simplex, solved by bisection
- One mirror-ascent step in scaled dual coordinates
- The dense exponentiated-gradient step used by standard group DRO

All functions are pure and operate on value inputs; they are safe to call from
any number of threads.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from numpy.typing import ArrayLike, NDArray

from star_dro.exceptions import InvalidInputError, NumericalFailureError
from star_dro.logging.logger import get_logger

logger = get_logger(__name__)

FloatArray = NDArray[np.float64]

SIMPLEX_TOL = 1e-9
BISECTION_TOL = 1e-10
MAX_BISECTION_ITERATIONS = 200
# Below this alpha - 1 the power 1/(alpha - 1) is evaluated through exp/log.
LOG_SPACE_MARGIN = 0.05


@dataclass(frozen=True)
class TsallisOrder:
    """Order alpha of the Tsallis mirror map; strictly greater than one."""

    alpha: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.alpha) or self.alpha <= 1.0:
            raise InvalidInputError(f"Tsallis order must be finite and > 1, got {self.alpha!r}")

    @property
    def exponent(self) -> float:
        """Power 1/(alpha - 1) of the dual-to-primal map."""
        return 1.0 / (self.alpha - 1.0)

    @classmethod
    def of(cls, alpha: "float | TsallisOrder") -> "TsallisOrder":
        """Coerce a bare float into a validated order."""
        if isinstance(alpha, TsallisOrder):
            return alpha
        return cls(float(alpha))


class Projection(NamedTuple):
    """Result of an entmax projection."""

    weights: FloatArray
    threshold: float
    converged: bool = True
    iterations: int = 0
    residual: float = 0.0


def as_vector(values: ArrayLike, name: str = "vector") -> FloatArray:
    """Convert input to a finite, non-empty 1-D float array."""
    vec = np.asarray(values, dtype=np.float64)
    if vec.ndim != 1:
        raise InvalidInputError(f"{name} must be one-dimensional, got shape {vec.shape}")
    if vec.size == 0:
        raise InvalidInputError(f"{name} must have at least one entry")
    if not np.all(np.isfinite(vec)):
        raise InvalidInputError(f"{name} contains non-finite entries")
    return vec


def check_simplex(q: ArrayLike, tol: float = SIMPLEX_TOL) -> FloatArray:
    """Validate that q lies on the probability simplex and return it as an array."""
    vec = as_vector(q, "simplex vector")
    if np.any(vec < 0.0):
        raise InvalidInputError("simplex vector has negative entries")
    total = float(vec.sum())
    if abs(total - 1.0) > tol:
        raise InvalidInputError(f"simplex vector sums to {total!r}, expected 1")
    return vec


def uniform(size: int) -> FloatArray:
    """Uniform point 1/G on the simplex."""
    if size < 1:
        raise InvalidInputError(f"simplex dimension must be >= 1, got {size}")
    return np.full(size, 1.0 / size)


def shannon_entropy(q: ArrayLike) -> float:
    """Entropy in nats over the positive entries of q."""
    vec = np.asarray(q, dtype=np.float64)
    positive = vec[vec > 0.0]
    return float(-np.sum(positive * np.log(positive)))


def to_dual(q: ArrayLike, alpha: "float | TsallisOrder") -> FloatArray:
    """Map simplex weights to scaled dual coordinates q ** (alpha - 1)."""
    order = TsallisOrder.of(alpha)
    weights = check_simplex(q)
    return np.power(weights, order.alpha - 1.0)


def _powered(u: FloatArray, threshold: float, exponent: float, log_space: bool) -> FloatArray:
    gap = u - threshold
    out = np.zeros_like(u)
    positive = gap > 0.0
    if log_space:
        with np.errstate(over="ignore"):
            out[positive] = np.exp(exponent * np.log(gap[positive]))
    else:
        with np.errstate(over="ignore"):
            out[positive] = np.power(gap[positive], exponent)
    return out


def sparsemax_threshold(u: ArrayLike) -> float:
    """Closed-form threshold of the alpha = 2 projection (Euclidean simplex projection)."""
    vec = as_vector(u, "dual vector")
    ordered = np.sort(vec)[::-1]
    cumulative = np.cumsum(ordered) - 1.0
    ranks = np.arange(1, vec.size + 1)
    support = int(np.count_nonzero(ordered - cumulative / ranks > 0.0))
    return float(cumulative[support - 1] / support)


def entmax_project(
    u: ArrayLike,
    alpha: "float | TsallisOrder",
    tol: float = BISECTION_TOL,
    max_iterations: int = MAX_BISECTION_ITERATIONS,
) -> Projection:
    """Project scaled dual coordinates back onto the simplex.

    Solves q_g = [u_g - lambda]_+ ** (1/(alpha - 1)) with sum(q) = 1 for the
    threshold lambda. Coordinates at or below the threshold are exactly zero.

    Args:
        u: Scaled dual coordinates
        alpha: Tsallis order (> 1)
        tol: Tolerance on |mass - 1| for the bisection
        max_iterations: Bisection iteration cap

    The bisection is well conditioned for 1 < alpha <= 2. Above 2 the mass is
    not Lipschitz in the threshold near a support boundary: one ulp of
    threshold can move it by more than ``tol``, and the search stops as soon
    as the bracket cannot be halved further.

    Returns:
        Projection with the simplex weights and threshold. When the iteration
        cap is hit or the bracket collapses first, the near-feasible point is
        renormalized and ``converged`` is False.

    Raises:
        InvalidInputError: If u is empty or non-finite, or tol <= 0
        NumericalFailureError: If the threshold cannot be bracketed
    """
    order = TsallisOrder.of(alpha)
    if not tol > 0.0:
        raise InvalidInputError(f"tolerance must be > 0, got {tol!r}")
    vec = as_vector(u, "dual vector")

    if vec.size == 1:
        return Projection(np.ones(1), float(vec[0]) - 1.0)

    if order.alpha == 2.0:
        threshold = sparsemax_threshold(vec)
        weights = np.maximum(vec - threshold, 0.0)
        return Projection(weights, threshold, residual=abs(float(weights.sum()) - 1.0))

    exponent = order.exponent
    log_space = order.alpha - 1.0 < LOG_SPACE_MARGIN
    top = float(vec.max())
    # Bisect on u - max(u): the bracket is then [-1, 0] whatever the offset of u.
    shifted = vec - top
    lo, hi = -1.0, 0.0

    residual = float(_powered(shifted, lo, exponent, log_space).sum()) - 1.0
    if not residual >= -tol:
        raise NumericalFailureError("entmax threshold could not be bracketed", residual)

    threshold = lo
    converged = abs(residual) <= tol
    iterations = 0
    while not converged and iterations < max_iterations:
        midpoint = 0.5 * (lo + hi)
        if midpoint in (lo, hi):
            # Interval is one ulp wide; alpha > 2 can leave mass error at this point.
            break
        iterations += 1
        threshold = midpoint
        residual = float(_powered(shifted, threshold, exponent, log_space).sum()) - 1.0
        if abs(residual) <= tol:
            converged = True
        elif residual > 0.0:
            lo = threshold
        else:
            hi = threshold

    weights = _powered(shifted, threshold, exponent, log_space)
    threshold += top
    total = float(weights.sum())
    if not total > 0.0 or not math.isfinite(total):
        raise NumericalFailureError("entmax projection produced no mass", residual)
    if not converged:
        logger.warning(
            "projection_not_converged",
            alpha=order.alpha,
            iterations=iterations,
            residual=residual,
        )
    return Projection(weights / total, threshold, converged, iterations, residual)


def mirror_ascent_step(
    q: ArrayLike,
    ascent: ArrayLike,
    alpha: "float | TsallisOrder",
    eta: float,
    tol: float = BISECTION_TOL,
) -> FloatArray:
    """One Tsallis mirror-ascent step on the simplex.

    Adds (alpha - 1) * eta * ascent in scaled dual coordinates and projects
    back with entmax_project. A zero step returns a copy of q.
    """
    if eta == 0.0:
        return check_simplex(q).copy()
    return mirror_ascent_projection(q, ascent, alpha, eta, tol).weights


def mirror_ascent_projection(
    q: ArrayLike,
    ascent: ArrayLike,
    alpha: "float | TsallisOrder",
    eta: float,
    tol: float = BISECTION_TOL,
) -> Projection:
    """mirror_ascent_step, returning the full Projection (convergence included)."""
    order = TsallisOrder.of(alpha)
    weights = check_simplex(q)
    signal = as_vector(ascent, "ascent vector")
    if signal.size != weights.size:
        raise InvalidInputError(
            f"ascent has length {signal.size}, simplex vector has length {weights.size}"
        )
    if not math.isfinite(eta) or eta < 0.0:
        raise InvalidInputError(f"step size must be finite and >= 0, got {eta!r}")

    dual = to_dual(weights, order) + (order.alpha - 1.0) * eta * signal
    return entmax_project(dual, order, tol=tol)


def exponentiated_gradient_step(q: ArrayLike, losses: ArrayLike, eta: float) -> FloatArray:
    """Dense multiplicative update q_g * exp(eta * loss_g), renormalized."""
    weights = check_simplex(q)
    values = as_vector(losses, "loss vector")
    if values.size != weights.size:
        raise InvalidInputError(
            f"losses have length {values.size}, simplex vector has length {weights.size}"
        )
    if not math.isfinite(eta) or eta < 0.0:
        raise InvalidInputError(f"step size must be finite and >= 0, got {eta!r}")

    scaled = eta * values
    scaled -= scaled.max()
    updated = weights * np.exp(scaled)
    return updated / updated.sum()
