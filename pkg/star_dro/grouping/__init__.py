"""
Grouping and attribution.

Provides:
- Record schemas (examples, annotations, validity map)
- Group inventories under the five grouping schemes
- Attribution of group multipliers to examples and tokens
"""

from star_dro.grouping.attribution import (
    CompletionLosses,
    SignalReduction,
    annotation_observations,
    annotation_signal,
    objective_coefficients,
    sample_observations,
    token_weights,
    weighted_objective,
)
from star_dro.grouping.inventory import (
    GroupInventory,
    Membership,
    annotation_key,
    build_inventory,
    memberships,
)
from star_dro.grouping.models import AnnotationRecord, ExampleRecord, ValidityMap

__all__ = [
    "AnnotationRecord",
    "CompletionLosses",
    "ExampleRecord",
    "GroupInventory",
    "Membership",
    "SignalReduction",
    "ValidityMap",
    "annotation_key",
    "annotation_observations",
    "annotation_signal",
    "build_inventory",
    "memberships",
    "objective_coefficients",
    "sample_observations",
    "token_weights",
    "weighted_objective",
]
