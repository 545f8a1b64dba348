"""Regime classification of a converged adversarial distribution."""

import math
from dataclasses import asdict, dataclass
from enum import Enum
from typing import Any

import numpy as np
from numpy.typing import ArrayLike

from star_dro.geometry.simplex import check_simplex, shannon_entropy


class Regime(str, Enum):
    """Qualitative behaviour of the adversarial weights."""

    BALANCED = "balanced"
    OVER_CONCENTRATED = "over_concentrated"
    UNDER_DIFFERENTIATED = "under_differentiated"


@dataclass(frozen=True)
class RegimeThresholds:
    """Classifier constants; all configurable."""

    top2_mass: float = 0.94
    min_active_set: int = 2
    entropy_fraction: float = 0.5
    uniform_band: float = 0.02


@dataclass(frozen=True)
class RegimeLabel:
    """Regime plus the statistics it was decided on."""

    regime: Regime
    entropy: float
    active_set_size: int
    top2_mass: float
    max_deviation: float
    has_zero: bool

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["regime"] = self.regime.value
        return data


def classify_regime(
    final_q: ArrayLike, thresholds: RegimeThresholds = RegimeThresholds()
) -> RegimeLabel:
    """Label a final q as over-concentrated, under-differentiated or balanced.

    Over-concentration is checked first: more than two groups and either the
    top two groups hold at least ``top2_mass`` or at most ``min_active_set``
    groups stay active; or some group is exactly zero while entropy is below
    ``entropy_fraction * ln G``. Otherwise a q within ``uniform_band`` of
    uniform everywhere is under-differentiated. Everything else is balanced.
    """
    q = check_simplex(final_q)
    size = q.size
    entropy = shannon_entropy(q)
    active = int((q > 0.0).sum())
    top2 = float(np.sort(q)[::-1][:2].sum())
    deviation = float(np.abs(q - 1.0 / size).max())
    has_zero = active < size

    concentrated = size > 2 and (
        top2 >= thresholds.top2_mass or active <= thresholds.min_active_set
    )
    collapsed = has_zero and entropy < thresholds.entropy_fraction * math.log(size)
    if concentrated or collapsed:
        regime = Regime.OVER_CONCENTRATED
    elif deviation < thresholds.uniform_band:
        regime = Regime.UNDER_DIFFERENTIATED
    else:
        regime = Regime.BALANCED
    return RegimeLabel(regime, entropy, active, top2, deviation, has_zero)
