"""Tests for group inventories and memberships."""

import pytest

from star_dro.exceptions import GroupLookupError, InvalidInputError, SchemaError
from star_dro.grouping.inventory import (
    GroupInventory,
    annotation_key,
    build_inventory,
    memberships,
)
from star_dro.grouping.models import AnnotationRecord, ExampleRecord
from star_dro.infrastructure.config import GroupingScheme


def example(id_, *labels):
    return ExampleRecord(
        id=id_, annotations=[AnnotationRecord(code=c, subcode=s) for c, s in labels]
    )


class TestAnnotationKey:
    """Test keys under each scheme."""

    @pytest.mark.parametrize(
        "scheme,expected",
        [
            (GroupingScheme.CODE, "InfoGive"),
            (GroupingScheme.SUBCODE, "Generalinformation"),
            (GroupingScheme.CODE_X_SUBCODE, "InfoGive|Generalinformation"),
            (GroupingScheme.NUM_ANNOTATIONS, "NA_3"),
            (GroupingScheme.CODE_X_SUBCODE_X_NA, "InfoGive|Generalinformation|NA_3"),
        ],
    )
    def test_keys(self, worked_sample, scheme, expected):
        """Test the first worked annotation under every scheme."""
        assert annotation_key(worked_sample, worked_sample.annotations[0], scheme) == expected


class TestBuildInventory:
    """Test inventory construction."""

    def test_worked_sample_code(self, worked_sample):
        """Test three distinct Codes give three groups in sorted order."""
        inventory = build_inventory([worked_sample], GroupingScheme.CODE)
        assert inventory.groups == ("InfoGive", "InfoGiveSDOH", "PartnershipProvider")
        assert memberships(worked_sample, inventory).groups == (0, 1, 2)
        assert memberships(worked_sample, inventory).overlap == 3

    def test_worked_sample_num_annotations(self, worked_sample):
        """Test the count scheme puts the example in a single group."""
        inventory = build_inventory([worked_sample], GroupingScheme.NUM_ANNOTATIONS)
        assert inventory.groups == ("NA_3",)
        assert memberships(worked_sample, inventory).overlap == 1

    def test_realized_pairs_only(self):
        """Test Code x Sub-code only includes pairs present in data."""
        dataset = [example("1", ("A", "x")), example("2", ("B", "y"), ("A", "x"))]
        inventory = build_inventory(dataset, GroupingScheme.CODE_X_SUBCODE)
        assert inventory.groups == ("A|x", "B|y")

    def test_duplicate_labels_count_once(self):
        """Test repeated labels in one example give one membership."""
        inventory = build_inventory([example("1", ("A", "x"), ("A", "y"))], GroupingScheme.CODE)
        assert inventory.memberships(example("1", ("A", "x"), ("A", "y"))).groups == (0,)

    def test_validity_enforced(self, worked_sample, worked_validity):
        """Test invalid pairs are rejected when a validity map is given."""
        build_inventory([worked_sample], GroupingScheme.CODE, worked_validity)
        with pytest.raises(SchemaError):
            build_inventory([example("1", ("InfoGive", "clinicalCare"))], GroupingScheme.CODE, worked_validity)

    def test_empty_dataset(self):
        """Test an empty dataset is rejected."""
        with pytest.raises(InvalidInputError):
            build_inventory([], GroupingScheme.CODE)

    def test_example_without_annotations(self):
        """Test an unannotated example is a schema error."""
        with pytest.raises(SchemaError):
            build_inventory([example("1")], GroupingScheme.CODE)


class TestGroupInventory:
    """Test lookups on an inventory."""

    def test_lookup(self):
        """Test dense ids and membership checks."""
        inventory = GroupInventory(GroupingScheme.CODE, ("A", "B"))
        assert inventory.id_of("B") == 1
        assert "A" in inventory
        assert len(inventory) == 2

    def test_unknown_key(self):
        """Test an unseen key raises GroupLookupError."""
        inventory = GroupInventory(GroupingScheme.CODE, ("A",))
        with pytest.raises(GroupLookupError, match="'Z'"):
            inventory.id_of("Z")
        with pytest.raises(SchemaError):
            memberships(example("1", ("Z", "z")), inventory)

    def test_unsorted_keys_rejected(self):
        """Test keys must be sorted and distinct."""
        with pytest.raises(InvalidInputError):
            GroupInventory(GroupingScheme.CODE, ("B", "A"))
        with pytest.raises(InvalidInputError):
            GroupInventory(GroupingScheme.CODE, ())
