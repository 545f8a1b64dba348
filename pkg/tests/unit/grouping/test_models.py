"""Tests for annotation and example records."""

import json

import pytest
from pydantic import ValidationError

from star_dro.exceptions import SchemaError
from star_dro.grouping.models import AnnotationRecord, ExampleRecord, ValidityMap


class TestAnnotationRecord:
    """Test AnnotationRecord parsing."""

    def test_on_disk_aliases(self):
        """Test the Code / Sub-code / Span keys are accepted."""
        record = AnnotationRecord.model_validate(
            {"Code": "InfoGive", "Sub-code": "Generalinformation", "Span": "I submitted"}
        )
        assert record.label == ("InfoGive", "Generalinformation")
        assert record.span == "I submitted"

    def test_empty_code_rejected(self):
        """Test empty labels are rejected."""
        with pytest.raises(ValidationError):
            AnnotationRecord.model_validate({"Code": "", "Sub-code": "x"})

    @pytest.mark.parametrize("token_range", [(5, 2), (-1, 3)])
    def test_invalid_token_range(self, token_range):
        """Test token ranges must be ordered and non-negative."""
        with pytest.raises(ValidationError):
            AnnotationRecord(code="A", subcode="a", token_range=token_range)


class TestExampleRecord:
    """Test ExampleRecord parsing and serialization."""

    def test_integer_id_coerced(self):
        """Test hand-written integer ids become strings."""
        assert ExampleRecord.model_validate({"id": 7}).id == "7"

    def test_json_line_uses_aliases(self, worked_sample):
        """Test serialization writes the on-disk field names."""
        data = json.loads(worked_sample.to_json_line())
        assert data["annotations"][0]["Code"] == "InfoGive"
        assert data["annotations"][0]["Sub-code"] == "Generalinformation"
        assert "unit_loss" not in data["annotations"][0]
        assert ExampleRecord.model_validate(data) == worked_sample

    def test_num_annotations(self, worked_sample):
        """Test the annotation count."""
        assert worked_sample.num_annotations == 3


class TestValidityMap:
    """Test the Code to Sub-code validity map."""

    def test_valid_pairs(self, worked_validity):
        """Test pair lookups."""
        assert worked_validity.is_valid("PartnershipProvider", "clinicalCare")
        assert not worked_validity.is_valid("InfoGive", "clinicalCare")
        assert not worked_validity.is_valid("Unknown", "clinicalCare")

    def test_check_accepts_worked_sample(self, worked_validity, worked_sample):
        """Test a valid example passes."""
        worked_validity.check(worked_sample)

    def test_check_names_the_bad_annotation(self, worked_validity):
        """Test an invalid pair raises SchemaError naming the record."""
        example = ExampleRecord(
            id="bad", annotations=[AnnotationRecord(code="InfoGive", subcode="clinicalCare")]
        )
        with pytest.raises(SchemaError, match="'bad' annotation 0"):
            worked_validity.check(example)

    def test_from_mapping_dedupes(self):
        """Test from_mapping sorts and dedupes Sub-codes."""
        validity = ValidityMap.from_mapping({"A": ["y", "x", "y"]})
        assert validity.mapping == {"A": ["x", "y"]}

    def test_duplicates_rejected(self):
        """Test a raw mapping with duplicates is rejected."""
        with pytest.raises(ValidationError):
            ValidityMap(mapping={"A": ["x", "x"]})
