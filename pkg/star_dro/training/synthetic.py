"""
Synthetic group-heterogeneous structured-completion task.

Each example is homed in one Code group and carries one or more annotations
under that Code. Token layout per example:

    [prompt tokens (mask 0)] then, per annotation,
    [delimiter token (mask 1)] [span tokens (mask 1, inside the token range)]

Span tokens are drawn around class centres shared by every easy group. A hard
group reverses the centres on a fraction of the informative coordinates and
flips labels with some probability, so its best linear rule disagrees with
the majority and its Bayes risk is strictly higher.
"""

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from numpy.typing import NDArray

from star_dro.diagnostics.loaders import load_examples, write_examples
from star_dro.exceptions import SchemaError
from star_dro.geometry.simplex import FloatArray
from star_dro.grouping.models import AnnotationRecord, ExampleRecord, ValidityMap
from star_dro.infrastructure.config import SyntheticTaskSpec
from star_dro.logging.logger import get_logger

logger = get_logger(__name__)

IntArray = NDArray[np.int64]
SPLITS = ("train", "validation")


@dataclass(frozen=True)
class TokenBatch:
    """Concatenated tokens of several examples."""

    examples: list[ExampleRecord]
    features: FloatArray
    targets: IntArray
    mask: FloatArray
    offsets: IntArray

    def bounds(self, position: int) -> slice:
        return slice(int(self.offsets[position]), int(self.offsets[position + 1]))


@dataclass(frozen=True)
class TaskSplit:
    """Examples of one split with their token tensors."""

    examples: tuple[ExampleRecord, ...]
    features: FloatArray
    targets: IntArray
    mask: FloatArray
    offsets: IntArray
    home_groups: IntArray

    def __post_init__(self) -> None:
        if self.offsets.size != len(self.examples) + 1:
            raise SchemaError(
                f"{self.offsets.size - 1} token blocks for {len(self.examples)} examples"
            )
        total = int(self.offsets[-1])
        if not self.features.shape[0] == self.targets.size == self.mask.size == total:
            raise SchemaError("token tensors have inconsistent lengths")

    def __len__(self) -> int:
        return len(self.examples)

    def gather(self, indices: NDArray[np.int64] | list[int]) -> TokenBatch:
        """Concatenate the tokens of the selected examples."""
        parts = [slice(int(self.offsets[i]), int(self.offsets[i + 1])) for i in indices]
        lengths = [part.stop - part.start for part in parts]
        offsets = np.concatenate([[0], np.cumsum(lengths)]).astype(np.int64)
        return TokenBatch(
            examples=[self.examples[i] for i in indices],
            features=np.concatenate([self.features[p] for p in parts]),
            targets=np.concatenate([self.targets[p] for p in parts]),
            mask=np.concatenate([self.mask[p] for p in parts]),
            offsets=offsets,
        )

    def everything(self) -> TokenBatch:
        return self.gather(list(range(len(self))))


@dataclass(frozen=True)
class SyntheticDataset:
    """Train and validation splits plus the validity map."""

    train: TaskSplit
    validation: TaskSplit
    validity: ValidityMap
    num_classes: int

    @property
    def input_dim(self) -> int:
        return int(self.train.features.shape[1])


def code_names(num_groups: int) -> list[str]:
    """Zero-padded Code names so lexicographic order matches group index."""
    width = len(str(max(num_groups - 1, 0)))
    return [f"Code{g:0{width}d}" for g in range(num_groups)]


class _SplitBuilder:
    def __init__(self, split: str) -> None:
        self.split = split
        self.examples: list[ExampleRecord] = []
        self.features: list[FloatArray] = []
        self.targets: list[int] = []
        self.mask: list[float] = []
        self.offsets: list[int] = [0]
        self.home_groups: list[int] = []

    def add(
        self,
        example: ExampleRecord,
        features: list[FloatArray],
        targets: list[int],
        mask: list[float],
        home: int,
    ) -> None:
        self.examples.append(example)
        self.features.extend(features)
        self.targets.extend(targets)
        self.mask.extend(mask)
        self.offsets.append(self.offsets[-1] + len(targets))
        self.home_groups.append(home)

    def build(self, order: NDArray[np.int64] | None = None) -> TaskSplit:
        split = TaskSplit(
            examples=tuple(self.examples),
            features=np.vstack(self.features),
            targets=np.asarray(self.targets, dtype=np.int64),
            mask=np.asarray(self.mask, dtype=np.float64),
            offsets=np.asarray(self.offsets, dtype=np.int64),
            home_groups=np.asarray(self.home_groups, dtype=np.int64),
        )
        if order is None:
            return split
        return _reorder(split, order)


def _reorder(split: TaskSplit, order: NDArray[np.int64]) -> TaskSplit:
    batch = split.gather(order)
    return TaskSplit(
        examples=tuple(batch.examples),
        features=batch.features,
        targets=batch.targets,
        mask=batch.mask,
        offsets=batch.offsets,
        home_groups=split.home_groups[order],
    )


def generate_synthetic(spec: SyntheticTaskSpec) -> SyntheticDataset:
    """Generate a reproducible train/validation pair for ``spec``.

    The same spec (seed included) always yields identical datasets.
    """
    rng = np.random.default_rng(spec.seed)
    classes = spec.classes
    delimiter = classes
    dim = spec.feature_dim + spec.nuisance_dim
    codes = code_names(spec.num_groups)
    subcodes = {
        code: [f"{code}.sub{j}" for j in range(spec.subcodes_per_code)] for code in codes
    }
    validity = ValidityMap.from_mapping(subcodes)

    base_centres = rng.normal(0.0, spec.separation, size=(classes, spec.feature_dim))
    delimiter_centre = rng.normal(0.0, spec.separation, size=spec.feature_dim)
    hard = {h.group: h for h in spec.hard_groups}
    centres = []
    for g in range(spec.num_groups):
        group_centres = base_centres.copy()
        if g in hard:
            flipped = int(round(hard[g].conflict * spec.feature_dim))
            coords = rng.choice(spec.feature_dim, size=flipped, replace=False)
            group_centres[:, coords] *= -1.0
        centres.append(group_centres)

    def token(centre: FloatArray, spread: float) -> FloatArray:
        informative = centre + rng.normal(0.0, spread, size=spec.feature_dim)
        return np.concatenate([informative, rng.normal(0.0, 1.0, size=spec.nuisance_dim)])

    def make_example(builder: _SplitBuilder, home: int) -> None:
        code = codes[home]
        serial = len(builder.examples)
        features: list[FloatArray] = [
            rng.normal(0.0, 1.0, size=dim) for _ in range(spec.prompt_tokens)
        ]
        targets = [delimiter] * spec.prompt_tokens
        mask = [0.0] * spec.prompt_tokens
        annotations = []
        for a in range(int(rng.integers(1, spec.max_annotations + 1))):
            subcode = subcodes[code][int(rng.integers(spec.subcodes_per_code))]
            label = int(rng.integers(classes))
            observed = label
            if home in hard and rng.random() < hard[home].label_noise:
                observed = (label + int(rng.integers(1, classes))) % classes

            features.append(token(delimiter_centre, spec.token_noise))
            targets.append(delimiter)
            mask.append(1.0)

            start = len(targets)
            offset = rng.normal(0.0, spec.annotation_noise, size=spec.feature_dim)
            for _ in range(spec.span_tokens):
                features.append(token(centres[home][label] + offset, spec.token_noise))
                targets.append(observed)
                mask.append(1.0)
            annotations.append(
                AnnotationRecord(
                    code=code,
                    subcode=subcode,
                    span=f"class{observed} evidence {serial} {a}",
                    token_range=(start, len(targets)),
                )
            )
        example = ExampleRecord(
            id=f"{builder.split}-{serial:05d}",
            sentence=f"synthetic {code} statement {serial}",
            direction="Y" if rng.random() < 0.5 else "N",
            annotations=annotations,
        )
        builder.add(example, features, targets, mask, home)

    train = _SplitBuilder("train")
    for g, size in enumerate(spec.group_sizes):
        for _ in range(size):
            make_example(train, g)
    validation = _SplitBuilder("validation")
    for g in range(spec.num_groups):
        for _ in range(spec.validation_per_group):
            make_example(validation, g)

    order = rng.permutation(len(train.examples)).astype(np.int64)
    dataset = SyntheticDataset(
        train=train.build(order),
        validation=validation.build(),
        validity=validity,
        num_classes=classes + 1,
    )
    logger.debug(
        "synthetic_generated",
        train=len(dataset.train),
        validation=len(dataset.validation),
        groups=spec.num_groups,
        seed=spec.seed,
    )
    return dataset


def save_dataset(dataset: SyntheticDataset, directory: Path) -> list[Path]:
    """Write JSONL records, token tensors and the validity map.

    Returns:
        Paths of the written files
    """
    directory.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    for name in SPLITS:
        split: TaskSplit = getattr(dataset, name)
        records = directory / f"{name}.jsonl"
        write_examples(records, split.examples)
        tokens = directory / f"{name}_tokens.npz"
        np.savez_compressed(
            tokens,
            features=split.features,
            targets=split.targets,
            mask=split.mask,
            offsets=split.offsets,
            home_groups=split.home_groups,
        )
        written.extend([records, tokens])
    meta = directory / "validity.json"
    with open(meta, "w", encoding="utf-8") as f:
        json.dump(
            {"num_classes": dataset.num_classes, "validity": dataset.validity.mapping},
            f,
            indent=2,
            sort_keys=True,
        )
        f.write("\n")
    written.append(meta)
    return written


def load_dataset(directory: Path) -> SyntheticDataset:
    """Read a dataset written by save_dataset.

    Raises:
        FileNotFoundError: If a split file is missing
        SchemaError: If records and token tensors disagree
    """
    with open(directory / "validity.json", encoding="utf-8") as f:
        meta = json.load(f)
    splits = {}
    for name in SPLITS:
        examples = load_examples(directory / f"{name}.jsonl")
        with np.load(directory / f"{name}_tokens.npz") as tokens:
            splits[name] = TaskSplit(
                examples=tuple(examples),
                features=tokens["features"],
                targets=tokens["targets"].astype(np.int64),
                mask=tokens["mask"],
                offsets=tokens["offsets"].astype(np.int64),
                home_groups=tokens["home_groups"].astype(np.int64),
            )
    return SyntheticDataset(
        train=splits["train"],
        validation=splits["validation"],
        validity=ValidityMap.from_mapping(meta["validity"]),
        num_classes=int(meta["num_classes"]),
    )
