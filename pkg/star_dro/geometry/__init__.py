"""
Simplex geometry for robust reweighting.

Provides:
- Tsallis primal/dual maps
- Entmax projection by bisection
- Mirror-ascent and exponentiated-gradient steps
"""

from star_dro.geometry.simplex import (
    Projection,
    TsallisOrder,
    check_simplex,
    entmax_project,
    exponentiated_gradient_step,
    mirror_ascent_projection,
    mirror_ascent_step,
    shannon_entropy,
    sparsemax_threshold,
    to_dual,
    uniform,
)

__all__ = [
    "Projection",
    "TsallisOrder",
    "check_simplex",
    "entmax_project",
    "exponentiated_gradient_step",
    "mirror_ascent_projection",
    "mirror_ascent_step",
    "shannon_entropy",
    "sparsemax_threshold",
    "to_dual",
    "uniform",
]
