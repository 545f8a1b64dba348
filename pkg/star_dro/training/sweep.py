"""Parallel execution of independent runs."""

from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor, as_completed

from star_dro.diagnostics.records import RunRecord
from star_dro.diagnostics.regime import RegimeThresholds, classify_regime
from star_dro.infrastructure.config import RunConfig
from star_dro.logging.logger import get_logger
from star_dro.training.trainer import train

logger = get_logger(__name__)


def _run_one(config: RunConfig, thresholds: RegimeThresholds) -> RunRecord:
    try:
        record = train(config)
    except Exception as e:
        logger.error("sweep_run_failed", run_id=config.resolved_run_id, error=str(e))
        return RunRecord(
            run_id=config.resolved_run_id,
            method=config.method.value,
            seed=config.seed,
            config_hash=config.config_hash(),
            group_keys=(),
            error=f"{type(e).__name__}: {e}",
            config=config.model_dump(mode="json"),
        )
    if record.final_q:
        record.regime = classify_regime(record.final_q, thresholds)
    return record


def sweep(
    configs: Sequence[RunConfig],
    workers: int | None = None,
    thresholds: RegimeThresholds = RegimeThresholds(),
) -> list[RunRecord]:
    """Run every config and classify the regime of each final q.

    Each run owns its model, reweighter and random stream. A failing run is
    returned as a record carrying the error; the other runs continue.

    Args:
        configs: Run configurations
        workers: Worker threads (default: one per config, at most 4)
        thresholds: Regime classifier constants

    Returns:
        Records in the order of ``configs``
    """
    if not configs:
        return []
    workers = workers or min(len(configs), 4)
    logger.info("sweep_started", runs=len(configs), workers=workers)
    results: dict[int, RunRecord] = {}
    with ThreadPoolExecutor(max_workers=workers) as executor:
        futures = {
            executor.submit(_run_one, config, thresholds): position
            for position, config in enumerate(configs)
        }
        for future in as_completed(futures):
            results[futures[future]] = future.result()
    records = [results[position] for position in range(len(configs))]
    logger.info(
        "sweep_finished",
        runs=len(records),
        failed=sum(1 for r in records if r.error and not r.diverged),
    )
    return records
