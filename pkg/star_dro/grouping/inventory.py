"""
Group inventories under the five grouping schemes.

Group keys:
- Code: the annotation's Code
- Sub-code: the annotation's Sub-code
- Code x Sub-code: "Code|Sub-code"
- Number of annotations: "NA_k" for an example with k annotations
- Code x Sub-code x NA: "Code|Sub-code|NA_k"

Ids are dense 0..G-1 in lexicographic key order.
"""

from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import NamedTuple

from star_dro.exceptions import GroupLookupError, InvalidInputError, SchemaError
from star_dro.grouping.models import AnnotationRecord, ExampleRecord, ValidityMap
from star_dro.infrastructure.config import GroupingScheme
from star_dro.logging.logger import get_logger

logger = get_logger(__name__)

KEY_SEPARATOR = "|"


class Membership(NamedTuple):
    """Group set S_i of an example and its overlap count nu_i."""

    groups: tuple[int, ...]
    overlap: int


def annotation_key(
    example: ExampleRecord, annotation: AnnotationRecord, scheme: GroupingScheme
) -> str:
    """Group key one annotation of ``example`` maps to under ``scheme``."""
    count_key = f"NA_{example.num_annotations}"
    if scheme is GroupingScheme.CODE:
        return annotation.code
    if scheme is GroupingScheme.SUBCODE:
        return annotation.subcode
    if scheme is GroupingScheme.CODE_X_SUBCODE:
        return KEY_SEPARATOR.join((annotation.code, annotation.subcode))
    if scheme is GroupingScheme.NUM_ANNOTATIONS:
        return count_key
    return KEY_SEPARATOR.join((annotation.code, annotation.subcode, count_key))


def example_keys(example: ExampleRecord, scheme: GroupingScheme) -> list[str]:
    """Distinct group keys of an example, sorted."""
    return sorted({annotation_key(example, a, scheme) for a in example.annotations})


@dataclass(frozen=True)
class GroupInventory:
    """Ordered group keys realized in a dataset under one scheme."""

    scheme: GroupingScheme
    groups: tuple[str, ...]
    index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not self.groups:
            raise InvalidInputError("an inventory needs at least one group")
        if list(self.groups) != sorted(set(self.groups)):
            raise InvalidInputError("group keys must be distinct and sorted")
        object.__setattr__(self, "index", {key: i for i, key in enumerate(self.groups)})

    def __len__(self) -> int:
        return len(self.groups)

    def __contains__(self, key: object) -> bool:
        return key in self.index

    def id_of(self, key: str) -> int:
        """Dense id of a group key.

        Raises:
            GroupLookupError: If the key is not in the inventory
        """
        try:
            return self.index[key]
        except KeyError:
            raise GroupLookupError(
                f"group {key!r} is not in the {self.scheme.value} inventory"
            ) from None

    def annotation_group(self, example: ExampleRecord, annotation: AnnotationRecord) -> int:
        return self.id_of(annotation_key(example, annotation, self.scheme))

    def memberships(self, example: ExampleRecord) -> Membership:
        return memberships(example, self)


def build_inventory(
    dataset: Sequence[ExampleRecord],
    scheme: GroupingScheme,
    validity: ValidityMap | None = None,
) -> GroupInventory:
    """Collect the group keys realized in ``dataset``.

    Args:
        dataset: Training examples
        scheme: Grouping scheme
        validity: When given, every annotation must be valid under it

    Returns:
        Inventory with lexicographically ordered keys

    Raises:
        InvalidInputError: If the dataset is empty
        SchemaError: If an example has no annotations or violates ``validity``
    """
    if not dataset:
        raise InvalidInputError("cannot build an inventory from an empty dataset")
    keys: set[str] = set()
    for example in dataset:
        if not example.annotations:
            raise SchemaError(f"record {example.id!r} has no annotations")
        if validity is not None:
            validity.check(example)
        keys.update(example_keys(example, scheme))
    inventory = GroupInventory(scheme=scheme, groups=tuple(sorted(keys)))
    logger.debug("inventory_built", scheme=scheme.value, groups=len(inventory))
    return inventory


def memberships(example: ExampleRecord, inventory: GroupInventory) -> Membership:
    """Group set of an example; distinct groups over its annotations.

    Raises:
        SchemaError: If the example has no annotations
        GroupLookupError: If a key is missing from the inventory
    """
    if not example.annotations:
        raise SchemaError(f"record {example.id!r} has no annotations")
    groups = tuple(sorted({inventory.id_of(key) for key in example_keys(example, inventory.scheme)}))
    return Membership(groups, len(groups))
