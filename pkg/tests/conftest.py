"""Pytest configuration and fixtures."""

from pathlib import Path

import pytest
from structlog.contextvars import clear_contextvars

from star_dro.grouping.models import AnnotationRecord, ExampleRecord, ValidityMap
from star_dro.infrastructure.config import (
    HardGroup,
    ModelConfig,
    RunConfig,
    SyntheticTaskSpec,
)
from star_dro.logging.logger import cleanup_logging_handlers


@pytest.fixture
def project_root():
    """Return the project root directory."""
    return Path(__file__).parent.parent


@pytest.fixture
def small_task():
    """Three-group task small enough for unit tests."""
    return SyntheticTaskSpec(
        num_groups=3,
        group_sizes=[24, 12, 6],
        hard_groups=[HardGroup(group=1)],
        feature_dim=4,
        nuisance_dim=2,
        max_annotations=2,
        span_tokens=2,
        prompt_tokens=1,
        validation_per_group=6,
        seed=3,
    )


@pytest.fixture
def small_config(small_task, tmp_path):
    """Run configuration on the small task: two epochs, robust from the second."""
    return RunConfig(
        task=small_task,
        model=ModelConfig(epochs=2, batch_size=8, activation_epoch=1),
        output_dir=tmp_path / "runs",
    )


@pytest.fixture
def worked_sample():
    """The three-annotation message used throughout the attribution examples."""
    return ExampleRecord(
        id="sample-1",
        sentence=(
            "Person1, I submitted application look for email from Org3 in spam mail as "
            "well- let us know if you do not receive anything by MM/DD/YYYY."
        ),
        annotations=[
            AnnotationRecord(
                code="InfoGive",
                subcode="Generalinformation",
                span="I submitted application",
                token_range=(1, 4),
            ),
            AnnotationRecord(
                code="InfoGiveSDOH",
                subcode="HealthCareAccessAndQuality",
                span="look for email from Org3 in spam mail as well",
                token_range=(4, 14),
            ),
            AnnotationRecord(
                code="PartnershipProvider",
                subcode="maintainCommunication",
                span="let us know if you do not receive anything by MM/DD/YYYY",
                token_range=(14, 25),
            ),
        ],
    )


@pytest.fixture
def worked_validity():
    """Validity map covering the worked sample."""
    return ValidityMap.from_pairs(
        [
            ("InfoGive", "Generalinformation"),
            ("InfoGiveSDOH", "HealthCareAccessAndQuality"),
            ("PartnershipProvider", "maintainCommunication"),
            ("PartnershipProvider", "clinicalCare"),
        ]
    )


@pytest.fixture(autouse=True)
def cleanup_logging():
    """Automatically clean up logging handlers after each test."""
    yield
    cleanup_logging_handlers()
    clear_contextvars()
