"""Loaders for grouped JSONL datasets and run configuration files."""

import json
from collections.abc import Iterable
from pathlib import Path

from pydantic import ValidationError

from star_dro.exceptions import InvalidInputError, SchemaError
from star_dro.grouping.models import ExampleRecord
from star_dro.infrastructure.config import RunConfig
from star_dro.logging.logger import get_logger

logger = get_logger(__name__)


def load_examples(path: Path) -> list[ExampleRecord]:
    """Read one ExampleRecord per non-blank line.

    Raises:
        FileNotFoundError: If the file does not exist
        InvalidInputError: If a line is not valid JSON
        SchemaError: If a record violates the schema or an id repeats
    """
    records: list[ExampleRecord] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                data = json.loads(line)
            except json.JSONDecodeError as e:
                raise InvalidInputError(f"{path}:{lineno}: malformed JSON ({e.msg})") from e
            try:
                record = ExampleRecord.model_validate(data)
            except ValidationError as e:
                raise SchemaError(f"{path}:{lineno}: {e.errors()[0]['msg']}") from e
            if record.id in seen:
                raise SchemaError(f"{path}:{lineno}: duplicate record id {record.id!r}")
            seen.add(record.id)
            records.append(record)
    logger.debug("examples_loaded", path=str(path), count=len(records))
    return records


def write_examples(path: Path, examples: Iterable[ExampleRecord]) -> None:
    """Write records as JSONL with the on-disk field names."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        for example in examples:
            f.write(example.to_json_line())
            f.write("\n")


def load_run_config(path: Path) -> RunConfig:
    """Load and validate a RunConfig from JSON or YAML."""
    config = RunConfig.from_file(path)
    logger.debug("config_loaded", path=str(path), config_hash=config.config_hash()[:12])
    return config
