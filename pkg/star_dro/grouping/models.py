"""Record schemas for grouped structured-completion data.

Field names on disk follow the annotation output schema exactly: each
annotation is an object with "Code", "Sub-code" and "Span".
"""

import json
from collections.abc import Iterable, Mapping
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from star_dro.exceptions import SchemaError


class AnnotationRecord(BaseModel):
    """One grounded (Code, Sub-code, Span) triple."""

    code: str = Field(alias="Code", min_length=1)
    subcode: str = Field(alias="Sub-code", min_length=1)
    span: str = Field(default="", alias="Span")
    unit_loss: float | None = None
    token_range: tuple[int, int] | None = Field(
        default=None, description="Half-open [start, end) token offsets"
    )

    model_config = ConfigDict(populate_by_name=True, extra="ignore", frozen=True)

    @field_validator("token_range")
    @classmethod
    def validate_token_range(cls, v: tuple[int, int] | None) -> tuple[int, int] | None:
        if v is not None and not 0 <= v[0] <= v[1]:
            raise ValueError(f"token_range must satisfy 0 <= start <= end, got {v}")
        return v

    @property
    def label(self) -> tuple[str, str]:
        return self.code, self.subcode


class ExampleRecord(BaseModel):
    """An input instance with its gold annotation set."""

    id: str
    sentence: str = ""
    context_prev: str | None = None
    context_next: str | None = None
    direction: Literal["Y", "N"] = "Y"
    annotations: list[AnnotationRecord] = Field(default_factory=list)
    example_loss: float | None = None

    model_config = ConfigDict(extra="ignore", frozen=True)

    @field_validator("id", mode="before")
    @classmethod
    def coerce_id(cls, v: Any) -> Any:
        """Accept integer ids from hand-written files."""
        return str(v) if isinstance(v, int) else v

    @property
    def num_annotations(self) -> int:
        return len(self.annotations)

    def to_json_line(self) -> str:
        """Serialize using the on-disk field names."""
        data = self.model_dump(by_alias=True, exclude_none=True)
        return json.dumps(data, sort_keys=True)


class ValidityMap(BaseModel):
    """Which Sub-codes are valid under each Code."""

    mapping: dict[str, list[str]]

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def normalize(self) -> "ValidityMap":
        for code, subcodes in self.mapping.items():
            if len(set(subcodes)) != len(subcodes):
                raise ValueError(f"duplicate Sub-codes under Code {code!r}")
        return self

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, str]]) -> "ValidityMap":
        """Build a map from (Code, Sub-code) pairs."""
        mapping: dict[str, set[str]] = {}
        for code, subcode in pairs:
            mapping.setdefault(code, set()).add(subcode)
        return cls(mapping={code: sorted(subs) for code, subs in sorted(mapping.items())})

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, Iterable[str]]) -> "ValidityMap":
        return cls(mapping={code: sorted(set(subs)) for code, subs in mapping.items()})

    def is_valid(self, code: str, subcode: str) -> bool:
        return subcode in self.mapping.get(code, ())

    def check(self, example: ExampleRecord) -> None:
        """Raise SchemaError if any annotation of ``example`` is invalid."""
        for position, annotation in enumerate(example.annotations):
            if not self.is_valid(annotation.code, annotation.subcode):
                raise SchemaError(
                    f"record {example.id!r} annotation {position}: Sub-code "
                    f"{annotation.subcode!r} is not valid under Code {annotation.code!r}"
                )
