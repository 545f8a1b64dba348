"""
Desk-scale studies built on the trainer and the sweep.

- compare_worst_group: ERM vs STaR-DRO worst-group validation loss per seed
- regime_sweep: baseline, scaled-up and scaled-down effective dual step
- regularization_study: weak vs strong weight decay, per-group medians
- activation_ablation: robust phase starting at different epochs
- grouping_study: every grouping scheme under both loss signals

low_resource swaps in a small, high-dimensional task on which the toy model
memorizes its training tokens; weight decay matters there, so the
regularization study runs on it.
"""

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from star_dro.diagnostics.records import RunRecord
from star_dro.infrastructure.config import (
    GroupingScheme,
    HardGroup,
    Method,
    RunConfig,
    SignalMode,
    SyntheticTaskSpec,
)
from star_dro.logging.logger import get_logger
from star_dro.training.sweep import sweep

logger = get_logger(__name__)


def with_seed(config: RunConfig, seed: int) -> RunConfig:
    """Same config with both the run seed and the task seed set to ``seed``."""
    task = config.task.model_copy(update={"seed": seed})
    return config.with_overrides(seed=seed, task=task)


def with_method(config: RunConfig, method: Method, run_id: str | None = None) -> RunConfig:
    return config.with_overrides(method=method, run_id=run_id)


def with_eta(config: RunConfig, eta: float, run_id: str | None = None) -> RunConfig:
    reweighter = config.reweighter.model_copy(update={"eta": eta})
    return config.with_overrides(reweighter=reweighter, run_id=run_id)


@dataclass(frozen=True)
class WorstGroupComparison:
    """Final worst-group validation loss of ERM and STaR-DRO on one seed."""

    seed: int
    erm: float
    stardro: float

    @property
    def reduction(self) -> float:
        """Relative reduction (erm - stardro) / erm."""
        return (self.erm - self.stardro) / self.erm if self.erm > 0.0 else 0.0

    @property
    def improved(self) -> bool:
        return self.stardro < self.erm


def compare_worst_group(
    base: RunConfig, seeds: Sequence[int], workers: int | None = None
) -> list[WorstGroupComparison]:
    """Paired ERM / STaR-DRO runs per seed."""
    configs: list[RunConfig] = []
    for seed in seeds:
        seeded = with_seed(base, seed)
        configs.append(with_method(seeded, Method.ERM, f"erm-seed{seed}"))
        configs.append(with_method(seeded, Method.STAR_DRO, f"stardro-seed{seed}"))
    records = sweep(configs, workers)
    comparisons = [
        WorstGroupComparison(seed, erm.worst_group_loss, star.worst_group_loss)
        for seed, erm, star in zip(seeds, records[0::2], records[1::2], strict=True)
    ]
    logger.info(
        "worst_group_compared",
        seeds=len(comparisons),
        improved=sum(c.improved for c in comparisons),
        median_reduction=float(np.median([c.reduction for c in comparisons])),
    )
    return comparisons


def regime_sweep(
    base: RunConfig, factor: float = 100.0, workers: int | None = None
) -> dict[str, RunRecord]:
    """Three STaR-DRO runs: baseline, eta * factor and eta / factor.

    Scaling eta scales the effective dual step by the same factor. Each record
    carries its regime label.
    """
    star = base.with_overrides(method=Method.STAR_DRO)
    eta = star.reweighter.eta
    configs = {
        "baseline": with_eta(star, eta, "regime-baseline"),
        "scaled_up": with_eta(star, eta * factor, "regime-scaled-up"),
        "scaled_down": with_eta(star, eta / factor, "regime-scaled-down"),
    }
    records = sweep(list(configs.values()), workers)
    return dict(zip(configs, records, strict=True))


@dataclass(frozen=True)
class RegularizationStudy:
    """Per-group median validation loss under weak and strong weight decay."""

    medians: pd.DataFrame
    records: list[RunRecord] = field(default_factory=list)

    @property
    def improved_groups(self) -> int:
        """Groups whose median loss is lower under strong decay."""
        return int((self.medians["strong"] < self.medians["weak"]).sum())

    @property
    def spreads(self) -> tuple[float, float]:
        """(weak, strong) max - min of the per-group medians."""
        weak = self.medians["weak"]
        strong = self.medians["strong"]
        return float(weak.max() - weak.min()), float(strong.max() - strong.min())


def regularization_study(
    base: RunConfig,
    seeds: Sequence[int],
    weak: float = 0.01,
    strong: float = 0.1,
    workers: int | None = None,
) -> RegularizationStudy:
    """STaR-DRO under two weight-decay strengths, median over seeds."""
    configs: list[RunConfig] = []
    labels: list[tuple[str, int]] = []
    for seed in seeds:
        seeded = with_seed(base.with_overrides(method=Method.STAR_DRO), seed)
        for label, decay in (("weak", weak), ("strong", strong)):
            model = seeded.model.model_copy(update={"weight_decay": decay})
            configs.append(
                seeded.with_overrides(model=model, run_id=f"decay-{label}-seed{seed}")
            )
            labels.append((label, seed))

    records = sweep(configs, workers)
    rows = []
    for (label, seed), record in zip(labels, records, strict=True):
        final = record.final_epoch
        if final is None:
            logger.warning("regularization_run_incomplete", run_id=record.run_id)
            continue
        for group, loss in final.val_loss.items():
            rows.append({"strength": label, "seed": seed, "group": group, "loss": loss})

    frame = pd.DataFrame(rows, columns=["strength", "seed", "group", "loss"])
    medians = frame.pivot_table(index="group", columns="strength", values="loss", aggfunc="median")
    return RegularizationStudy(
        medians=medians.reindex(columns=["weak", "strong"]), records=records
    )


def activation_ablation(
    base: RunConfig, epochs: Sequence[int | None], workers: int | None = None
) -> dict[int | None, RunRecord]:
    """STaR-DRO runs with the robust phase starting at each given epoch."""
    configs = []
    for epoch in epochs:
        model = base.model.model_copy(update={"activation_epoch": epoch})
        label = "never" if epoch is None else str(epoch)
        configs.append(
            base.with_overrides(
                method=Method.STAR_DRO, model=model, run_id=f"activation-{label}"
            )
        )
    return dict(zip(epochs, sweep(configs, workers), strict=True))


def entropy_volatility(record: RunRecord) -> float:
    """Standard deviation of the step-to-step change in entropy."""
    entropy = record.column("entropy")
    if entropy.size < 2:
        return 0.0
    return float(np.std(np.diff(entropy)))


def low_resource(base: RunConfig) -> RunConfig:
    """Base config on a few hundred examples with many nuisance coordinates.

    The skewed group sizes and hard groups keep the shape of the default task.
    Training tokens are linearly separable through the nuisance coordinates,
    so an undecayed model grows confident on noise.
    """
    task = SyntheticTaskSpec(
        num_groups=9,
        group_sizes=[60, 44, 32, 22, 16, 10, 6, 3, 1],
        hard_groups=[HardGroup(group=2), HardGroup(group=4)],
        feature_dim=8,
        nuisance_dim=300,
        separation=0.6,
        max_annotations=2,
        span_tokens=1,
        prompt_tokens=1,
        validation_per_group=40,
        seed=base.task.seed,
    )
    model = base.model.model_copy(update={"learning_rate": 0.05, "batch_size": 16, "epochs": 60})
    return base.with_overrides(task=task, model=model)


@dataclass(frozen=True)
class GroupingStudy:
    """Final validation losses per (scheme, signal) and the underlying runs.

    Worst-group loss is taken over the groups of each run's own scheme.
    """

    table: pd.DataFrame
    records: list[RunRecord]


def grouping_study(base: RunConfig, workers: int | None = None) -> GroupingStudy:
    """STaR-DRO under every grouping scheme and both loss signals.

    Runs that produced no epoch get NaN losses.
    """
    star = base.with_overrides(method=Method.STAR_DRO)
    cells = [(scheme, signal) for scheme in GroupingScheme for signal in SignalMode]
    configs = []
    for scheme, signal in cells:
        model = star.model.model_copy(update={"grouping": scheme, "signal": signal})
        configs.append(
            star.with_overrides(model=model, run_id=f"grouping-{scheme.value}-{signal.value}")
        )
    records = sweep(configs, workers)
    rows = []
    for (scheme, signal), record in zip(cells, records, strict=True):
        final = record.final_epoch
        if final is None:
            logger.warning("grouping_run_incomplete", run_id=record.run_id, error=record.error)
        rows.append(
            {
                "scheme": scheme.value,
                "signal": signal.value,
                "groups": len(record.group_keys),
                "worst_group_loss": final.worst_group_loss if final else float("nan"),
                "mean_val_loss": final.mean_val_loss if final else float("nan"),
            }
        )
    table = pd.DataFrame(rows).set_index(["scheme", "signal"])
    return GroupingStudy(table=table, records=records)
