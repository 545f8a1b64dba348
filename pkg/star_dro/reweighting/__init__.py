"""
Robust reweighting controllers.

Provides:
- STaR-DRO (Tsallis mirror ascent, EMA losses, bounded multipliers)
- Standard exponentiated-gradient group DRO
- ERM (neutral weights)
"""

from star_dro.reweighting.base import BaseReweighter, diagnostics, is_active
from star_dro.reweighting.standard import (
    ERMReweighter,
    StandardDROReweighter,
    standard_dro_step,
)
from star_dro.reweighting.star import (
    StarDROReweighter,
    aggregate_example_multipliers,
    compute_ascent,
    count_groups,
    estimate_group_losses,
    shape_multipliers,
    star_dro_step,
    update_ema,
)
from star_dro.reweighting.types import (
    Diagnostics,
    GroupBatchStats,
    GroupObservation,
    MultiplierSet,
)

__all__ = [
    "BaseReweighter",
    "Diagnostics",
    "ERMReweighter",
    "GroupBatchStats",
    "GroupObservation",
    "MultiplierSet",
    "StandardDROReweighter",
    "StarDROReweighter",
    "aggregate_example_multipliers",
    "compute_ascent",
    "count_groups",
    "diagnostics",
    "estimate_group_losses",
    "is_active",
    "shape_multipliers",
    "standard_dro_step",
    "star_dro_step",
    "update_ema",
]
