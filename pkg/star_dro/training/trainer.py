"""
Desk-scale trainer for ERM, standard group DRO and STaR-DRO.

Per optimizer step the trainer:
- samples a uniform minibatch (no group stratification)
- computes per-token losses and the unit losses of the active signal mode
- feeds the unit losses to the selected reweighter
- builds the robust objective from the returned multipliers
- takes one gradient step with decoupled weight decay

Per-group validation loss and accuracy are evaluated at the end of every
epoch.
"""

import math
from collections.abc import Sequence

import numpy as np

from star_dro.diagnostics.records import EpochSummary, RunRecord, Row
from star_dro.exceptions import DivergenceError
from star_dro.geometry.simplex import FloatArray
from star_dro.grouping.attribution import (
    CompletionLosses,
    SignalReduction,
    annotation_observations,
    objective_coefficients,
    sample_observations,
    token_weights,
)
from star_dro.grouping.inventory import GroupInventory, build_inventory, example_keys
from star_dro.infrastructure.config import RunConfig, SignalMode
from star_dro.logging.logger import LogContext, get_logger
from star_dro.reweighting.base import BaseReweighter, Schedule
from star_dro.reweighting.star import estimate_group_losses
from star_dro.reweighting.types import GroupObservation
from star_dro.runtime.registry import get_registry
from star_dro.training.model import ToyModel
from star_dro.training.synthetic import (
    SyntheticDataset,
    TaskSplit,
    TokenBatch,
    generate_synthetic,
    load_dataset,
)


def resolve_dataset(config: RunConfig) -> SyntheticDataset:
    """Dataset directory when configured, otherwise the synthetic task."""
    if config.dataset_path is not None:
        return load_dataset(config.dataset_path)
    return generate_synthetic(config.task)


def _completions(batch: TokenBatch, losses: FloatArray) -> list[CompletionLosses]:
    return [
        CompletionLosses(losses[batch.bounds(i)], batch.mask[batch.bounds(i)])
        for i in range(len(batch.examples))
    ]


class Trainer:
    """Runs one training configuration to completion."""

    def __init__(
        self,
        config: RunConfig,
        dataset: SyntheticDataset | None = None,
        *,
        eta_schedule: Schedule | None = None,
        rho_schedule: Schedule | None = None,
        reduction: SignalReduction = SignalReduction.MEAN,
    ) -> None:
        """Prepare data, inventory, reweighter and model.

        Args:
            config: Run configuration
            dataset: Pre-built dataset (generated or loaded from config when omitted)
            eta_schedule: Optional per-step eta for the reweighter
            rho_schedule: Optional per-step rho for the reweighter
            reduction: Sample-level unit loss reduction
        """
        self.config = config
        self.dataset = dataset if dataset is not None else resolve_dataset(config)
        self.reduction = reduction
        model_config = config.model

        train = self.dataset.train
        self.inventory: GroupInventory = build_inventory(
            train.examples,
            model_config.grouping,
            self.dataset.validity if model_config.validate_schema else None,
        )
        self.steps_per_epoch = math.ceil(len(train) / model_config.batch_size)
        self.activation_step = (
            None
            if model_config.activation_epoch is None
            else model_config.activation_epoch * self.steps_per_epoch
        )
        reweighter_config = config.reweighter.model_copy(
            update={"activation_step": self.activation_step}
        )
        self.reweighter: BaseReweighter = get_registry().create(
            config.method.value,
            len(self.inventory),
            reweighter_config,
            eta_schedule=eta_schedule,
            rho_schedule=rho_schedule,
        )
        self.model = ToyModel(
            self.dataset.input_dim,
            self.dataset.num_classes,
            model_config.learning_rate,
            model_config.weight_decay,
        )
        self.logger = get_logger(
            __name__, run_id=config.resolved_run_id, method=config.method.value, seed=config.seed
        )

    def run(self) -> RunRecord:
        """Train for the configured number of epochs.

        Divergence stops training early; the returned record is flagged and
        carries the error message.
        """
        config = self.config
        train = self.dataset.train
        rng = np.random.default_rng(config.seed)
        record = RunRecord(
            run_id=config.resolved_run_id,
            method=config.method.value,
            seed=config.seed,
            config_hash=config.config_hash(),
            group_keys=self.inventory.groups,
            config=config.model_dump(mode="json"),
        )
        self.logger.info(
            "run_started",
            groups=len(self.inventory),
            steps_per_epoch=self.steps_per_epoch,
            activation_step=self.activation_step,
        )

        step = 0
        for epoch in range(config.model.epochs):
            order = rng.permutation(len(train))
            for start in range(0, len(train), config.model.batch_size):
                indices = order[start : start + config.model.batch_size]
                row = self.train_step(train.gather(indices), step, epoch)
                record.add_row(row)
                step += 1
                try:
                    self._check_divergence(row)
                except DivergenceError as e:
                    record.diverged = True
                    record.error = str(e)
                    self.logger.error("run_diverged", step=e.step, loss=e.loss)
                    break
            if record.diverged:
                break
            record.epochs.append(self.evaluate(epoch, step))

        record.final_q = [float(value) for value in self.reweighter.state.q]
        self.logger.info(
            "run_finished",
            steps=step,
            worst_group_val_loss=record.worst_group_loss,
            diverged=record.diverged,
        )
        return record

    def _check_divergence(self, row: Row) -> None:
        objective = float(row["objective"])  # type: ignore[arg-type]
        threshold = self.config.model.divergence_threshold
        if not math.isfinite(objective) or objective > threshold or not self.model.is_finite():
            raise DivergenceError(int(row["step"]), objective, threshold)  # type: ignore[arg-type]

    def observations(
        self, batch: TokenBatch, completions: Sequence[CompletionLosses]
    ) -> list[GroupObservation]:
        if self.config.model.signal is SignalMode.ANNOTATION:
            return annotation_observations(batch.examples, completions, self.inventory)
        return sample_observations(batch.examples, completions, self.inventory, self.reduction)

    def train_step(self, batch: TokenBatch, step: int, epoch: int) -> Row:
        """One optimizer step on ``batch``; returns the diagnostics row."""
        losses, probabilities = self.model.token_losses(batch.features, batch.targets)
        completions = _completions(batch, losses)
        observations = self.observations(batch, completions)
        multipliers = self.reweighter.step(observations)

        mode = self.config.model.signal
        weights: list[float] | list[FloatArray]
        if mode is SignalMode.ANNOTATION:
            weights = [
                token_weights(example, multipliers.per_group, self.inventory, len(c.mask))
                for example, c in zip(batch.examples, completions, strict=True)
            ]
        else:
            weights = [float(m) for m in multipliers.per_example]
        coefficients = objective_coefficients(completions, weights, mode, self.reduction)
        flat = np.concatenate(coefficients)
        objective = float((flat * losses).sum())

        self.model.apply(self.model.gradient(batch.features, probabilities, batch.targets, flat))

        diagnostics = self.reweighter.diagnostics()
        low, mean, high = multipliers.summary()
        raw = multipliers.stats.raw_losses if multipliers.stats else {}
        row: Row = {
            "step": step,
            "epoch": epoch,
            "entropy": diagnostics.entropy,
            "active_set": diagnostics.active_set_size,
            "eta_eff": diagnostics.eta_eff,
            "objective": objective,
            "mean_loss": float(np.mean([obs.loss for obs in observations])),
            "mult_min": low,
            "mult_mean": mean,
            "mult_max": high,
        }
        q = self.reweighter.state.q
        for g, key in enumerate(self.inventory.groups):
            row[f"q_{key}"] = float(q[g])
        for g, key in enumerate(self.inventory.groups):
            row[f"loss_{key}"] = raw.get(g)
        return row

    def evaluate(self, epoch: int, step: int, split: TaskSplit | None = None) -> EpochSummary:
        """Per-group loss and annotation-token accuracy on a split.

        Validation groups missing from the training inventory are logged and
        left out of the per-group report.
        """
        split = split if split is not None else self.dataset.validation
        batch = split.everything()
        losses, probabilities = self.model.token_losses(batch.features, batch.targets)
        correct = (np.argmax(probabilities, axis=1) == batch.targets).astype(np.float64)

        loss_obs: list[GroupObservation] = []
        acc_obs: list[GroupObservation] = []
        unit_losses: list[float] = []
        unknown: set[str] = set()
        for i, example in enumerate(batch.examples):
            bounds = batch.bounds(i)
            unit = CompletionLosses(losses[bounds], batch.mask[bounds]).unit_loss()
            unit_losses.append(unit)
            keys = example_keys(example, self.inventory.scheme)
            groups = tuple(self.inventory.id_of(k) for k in keys if k in self.inventory)
            unknown.update(k for k in keys if k not in self.inventory)
            if not groups:
                continue
            inside = np.zeros(bounds.stop - bounds.start, dtype=bool)
            for annotation in example.annotations:
                if annotation.token_range is not None:
                    inside[annotation.token_range[0] : annotation.token_range[1]] = True
            accuracy = float(correct[bounds][inside].mean()) if inside.any() else 0.0
            loss_obs.append(GroupObservation(groups, unit))
            acc_obs.append(GroupObservation(groups, accuracy))

        if unknown:
            self.logger.warning("unknown_evaluation_groups", groups=sorted(unknown))
        keys = self.inventory.groups
        val_loss = {keys[g]: v for g, v in estimate_group_losses(loss_obs).items()}
        val_accuracy = {keys[g]: v for g, v in estimate_group_losses(acc_obs).items()}
        summary = EpochSummary(
            epoch=epoch,
            step=step,
            val_loss=val_loss,
            val_accuracy=val_accuracy,
            mean_val_loss=float(np.mean(unit_losses)) if unit_losses else float("nan"),
        )
        self.logger.info(
            "epoch_evaluated",
            epoch=epoch,
            worst_group_val_loss=summary.worst_group_loss,
            mean_val_loss=summary.mean_val_loss,
        )
        return summary


def train(config: RunConfig, dataset: SyntheticDataset | None = None) -> RunRecord:
    """Build a Trainer for ``config`` and run it.

    Run metadata is bound for the whole call, so events logged while the
    dataset and inventory are built carry it as well.
    """
    context = {"run_id": config.resolved_run_id, "method": config.method.value, "seed": config.seed}
    with LogContext(get_logger(__name__), **context):
        return Trainer(config, dataset).run()
