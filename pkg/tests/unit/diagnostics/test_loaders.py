"""Tests for dataset and configuration loaders."""

import json

import pytest
from pydantic import ValidationError

from star_dro.diagnostics.loaders import load_examples, load_run_config, write_examples
from star_dro.exceptions import InvalidInputError, SchemaError
from star_dro.infrastructure.config import Method


class TestLoadExamples:
    """Test JSONL example loading."""

    def test_roundtrip(self, tmp_path, worked_sample):
        """Test written records load back equal."""
        path = tmp_path / "gold.jsonl"
        write_examples(path, [worked_sample])
        assert load_examples(path) == [worked_sample]

    def test_blank_lines_skipped(self, tmp_path):
        """Test blank lines are ignored."""
        path = tmp_path / "data.jsonl"
        path.write_text('{"id": "a"}\n\n{"id": "b"}\n')
        assert [r.id for r in load_examples(path)] == ["a", "b"]

    def test_malformed_json(self, tmp_path):
        """Test a broken line reports its position."""
        path = tmp_path / "data.jsonl"
        path.write_text('{"id": "a"}\n{broken\n')
        with pytest.raises(InvalidInputError, match=":2:"):
            load_examples(path)

    def test_schema_violation(self, tmp_path):
        """Test a record without an id is a schema error."""
        path = tmp_path / "data.jsonl"
        path.write_text('{"sentence": "no id"}\n')
        with pytest.raises(SchemaError):
            load_examples(path)

    def test_duplicate_ids(self, tmp_path):
        """Test repeated ids are rejected."""
        path = tmp_path / "data.jsonl"
        path.write_text('{"id": "a"}\n{"id": "a"}\n')
        with pytest.raises(SchemaError, match="duplicate"):
            load_examples(path)

    def test_missing_file(self, tmp_path):
        """Test a missing file raises FileNotFoundError."""
        with pytest.raises(FileNotFoundError):
            load_examples(tmp_path / "absent.jsonl")


class TestLoadRunConfig:
    """Test run configuration loading."""

    def test_json(self, tmp_path):
        """Test a partial JSON document fills defaults."""
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"method": "erm", "seed": 4}))
        config = load_run_config(path)
        assert config.method is Method.ERM
        assert config.seed == 4
        assert config.reweighter.alpha == 1.08

    def test_yaml(self, tmp_path):
        """Test YAML documents are read by suffix."""
        path = tmp_path / "run.yaml"
        path.write_text("method: dro\nreweighter:\n  eta: 0.01\n")
        config = load_run_config(path)
        assert config.method is Method.STANDARD_DRO
        assert config.reweighter.eta == 0.01

    def test_unknown_field(self, tmp_path):
        """Test unknown keys are rejected."""
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"lr": 0.1}))
        with pytest.raises(ValidationError):
            load_run_config(path)
