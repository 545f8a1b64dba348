"""
Command-line interface for STaR-DRO.

Provides commands for:
- Training runs and preset sweeps with trace export
- Projecting dual vectors onto the simplex
- Scoring predictions against gold annotations
- Generating synthetic datasets and recommending hyperparameters
"""

from .main import cli

__all__ = ["cli"]
