"""
Infrastructure module for STaR-DRO.

Manages:
- Run, reweighter, model and synthetic-task configuration
- Loading and saving configuration files
- Output directory resolution
"""

from star_dro.infrastructure.config import (
    GroupingScheme,
    HardGroup,
    Method,
    ModelConfig,
    ReweighterConfig,
    RunConfig,
    SignalMode,
    SyntheticTaskSpec,
    resolve_output_dir,
)

__all__ = [
    "GroupingScheme",
    "HardGroup",
    "Method",
    "ModelConfig",
    "ReweighterConfig",
    "RunConfig",
    "SignalMode",
    "SyntheticTaskSpec",
    "resolve_output_dir",
]
