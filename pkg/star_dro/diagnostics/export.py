"""Trace and summary export for run records."""

import json
import math
from pathlib import Path
from typing import Any

from star_dro.diagnostics.records import RunRecord
from star_dro.diagnostics.regime import RegimeLabel, RegimeThresholds, classify_regime
from star_dro.exceptions import InvalidInputError
from star_dro.logging.logger import get_logger

logger = get_logger(__name__)

TRACE_FILE = "trace.csv"
SUMMARY_FILE = "summary.json"
FLOAT_FORMAT = "%.10g"


def _finite_or_none(value: float) -> float | None:
    return value if math.isfinite(value) else None


def build_summary(
    record: RunRecord, regime: RegimeLabel | None = None
) -> dict[str, Any]:
    """Summary document: final metrics, regime and config echo."""
    regime = regime or record.regime
    if regime is None and record.final_q:
        regime = classify_regime(record.final_q)
    final = record.final_epoch
    return {
        "run_id": record.run_id,
        "method": record.method,
        "seed": record.seed,
        "config_hash": record.config_hash,
        "steps": len(record.rows),
        "diverged": record.diverged,
        "error": record.error,
        "groups": list(record.group_keys),
        "final_q": record.final_q,
        "regime": regime.regime.value if regime else None,
        "regime_stats": regime.to_dict() if regime else None,
        "worst_group_val_loss": _finite_or_none(record.worst_group_loss),
        "mean_val_loss": _finite_or_none(record.mean_val_loss),
        "final_epoch": final.to_dict() if final else None,
        "epochs": [epoch.to_dict() for epoch in record.epochs],
        "config": record.config,
    }


def export_trace(
    record: RunRecord,
    output_dir: Path,
    thresholds: RegimeThresholds = RegimeThresholds(),
) -> tuple[Path, Path]:
    """Write ``<output_dir>/<run_id>/trace.csv`` and ``summary.json``.

    Re-exporting the same record produces byte-identical files.

    Raises:
        InvalidInputError: If the record has no rows
        OSError: If the files cannot be written (message carries the path)
    """
    if not record.rows:
        raise InvalidInputError(f"run {record.run_id!r} has no trace rows to export")
    run_dir = output_dir / record.run_id
    trace_path = run_dir / TRACE_FILE
    summary_path = run_dir / SUMMARY_FILE
    regime = record.regime
    if regime is None and record.final_q:
        regime = classify_regime(record.final_q, thresholds)
    summary = build_summary(record, regime)

    try:
        run_dir.mkdir(parents=True, exist_ok=True)
        record.to_frame().to_csv(
            trace_path, index=False, float_format=FLOAT_FORMAT, na_rep="", lineterminator="\n"
        )
        with open(summary_path, "w", encoding="utf-8") as f:
            json.dump(summary, f, indent=2, sort_keys=True)
            f.write("\n")
    except OSError as e:
        raise OSError(f"failed to export run {record.run_id!r} to {run_dir}: {e}") from e

    logger.info(
        "trace_exported",
        run_id=record.run_id,
        path=str(run_dir),
        rows=len(record.rows),
        regime=summary["regime"],
    )
    return trace_path, summary_path
