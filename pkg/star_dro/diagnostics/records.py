"""Run records: one diagnostics row per optimizer step plus epoch summaries."""

from dataclasses import dataclass, field
from typing import Any

import numpy as np
import pandas as pd

from star_dro.diagnostics.regime import RegimeLabel
from star_dro.exceptions import InvalidInputError

TRACE_COLUMNS = (
    "step",
    "epoch",
    "entropy",
    "active_set",
    "eta_eff",
    "objective",
    "mean_loss",
    "mult_min",
    "mult_mean",
    "mult_max",
)

Row = dict[str, float | int | None]


@dataclass
class EpochSummary:
    """Validation statistics at the end of one epoch."""

    epoch: int
    step: int
    val_loss: dict[str, float]
    val_accuracy: dict[str, float]
    mean_val_loss: float

    @property
    def worst_group_loss(self) -> float:
        return max(self.val_loss.values()) if self.val_loss else float("nan")

    def to_dict(self) -> dict[str, Any]:
        return {
            "epoch": self.epoch,
            "step": self.step,
            "mean_val_loss": self.mean_val_loss,
            "worst_group_val_loss": self.worst_group_loss,
            "val_loss": dict(self.val_loss),
            "val_accuracy": dict(self.val_accuracy),
        }


@dataclass
class RunRecord:
    """Everything a run produced."""

    run_id: str
    method: str
    seed: int
    config_hash: str
    group_keys: tuple[str, ...]
    rows: list[Row] = field(default_factory=list)
    epochs: list[EpochSummary] = field(default_factory=list)
    final_q: list[float] = field(default_factory=list)
    diverged: bool = False
    error: str | None = None
    config: dict[str, Any] = field(default_factory=dict)
    regime: RegimeLabel | None = None

    def add_row(self, row: Row) -> None:
        """Append a step row; step indices must increase."""
        if self.rows and int(row["step"]) <= int(self.rows[-1]["step"]):  # type: ignore[arg-type]
            raise InvalidInputError(
                f"step {row['step']} does not follow step {self.rows[-1]['step']}"
            )
        self.rows.append(row)

    @property
    def final_epoch(self) -> EpochSummary | None:
        return self.epochs[-1] if self.epochs else None

    @property
    def worst_group_loss(self) -> float:
        """Worst per-group validation loss at the last evaluated epoch."""
        final = self.final_epoch
        return final.worst_group_loss if final else float("nan")

    @property
    def mean_val_loss(self) -> float:
        final = self.final_epoch
        return final.mean_val_loss if final else float("nan")

    def column(self, name: str) -> np.ndarray:
        """One trace column as an array (missing values as NaN)."""
        return np.array(
            [np.nan if row.get(name) is None else row[name] for row in self.rows],
            dtype=np.float64,
        )

    def trace_columns(self) -> list[str]:
        """Deterministic column order of the trace."""
        return [
            *TRACE_COLUMNS,
            *(f"q_{key}" for key in self.group_keys),
            *(f"loss_{key}" for key in self.group_keys),
        ]

    def to_frame(self) -> pd.DataFrame:
        """Trace rows as a DataFrame in trace column order."""
        return pd.DataFrame.from_records(self.rows, columns=self.trace_columns())
