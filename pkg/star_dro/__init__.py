"""
STaR-DRO: stateful Tsallis-robust reweighting for group-robust training.

Robust reweighters (ERM, standard group DRO, STaR-DRO), the simplex geometry
they rely on, grouping and attribution for structured annotations, a
desk-scale training harness, evaluation metrics and run diagnostics.
"""

__version__ = "0.1.0"
__author__ = "STaR-DRO Contributors"
__license__ = "MIT"

# Core components
from . import geometry, infrastructure, logging, reweighting, runtime

__all__ = [
    "geometry",
    "infrastructure",
    "logging",
    "reweighting",
    "runtime",
]
