"""
Desk-scale training harness.

Provides:
- Synthetic group-heterogeneous task generation and persistence
- Toy multinomial logistic model
- Trainer for ERM, standard DRO and STaR-DRO
- Parallel sweeps and the desk-scale studies
"""

from star_dro.training.experiments import (
    RegularizationStudy,
    WorstGroupComparison,
    activation_ablation,
    compare_worst_group,
    entropy_volatility,
    regime_sweep,
    regularization_study,
)
from star_dro.training.model import ToyModel
from star_dro.training.sweep import sweep
from star_dro.training.synthetic import (
    SyntheticDataset,
    TaskSplit,
    generate_synthetic,
    load_dataset,
    save_dataset,
)
from star_dro.training.trainer import Trainer, resolve_dataset, train

__all__ = [
    "RegularizationStudy",
    "SyntheticDataset",
    "TaskSplit",
    "ToyModel",
    "Trainer",
    "WorstGroupComparison",
    "activation_ablation",
    "compare_worst_group",
    "entropy_volatility",
    "generate_synthetic",
    "load_dataset",
    "regime_sweep",
    "regularization_study",
    "resolve_dataset",
    "save_dataset",
    "sweep",
    "train",
]
