"""Tests for the synthetic grouped task."""

import numpy as np

from star_dro.training.synthetic import (
    code_names,
    generate_synthetic,
    load_dataset,
    save_dataset,
)


class TestCodeNames:
    """Test Code naming."""

    def test_zero_padded(self):
        """Test lexicographic order matches group index."""
        names = code_names(12)
        assert names[0] == "Code00"
        assert names[11] == "Code11"
        assert names == sorted(names)

    def test_single_group(self):
        """Test one group gets a one-digit name."""
        assert code_names(1) == ["Code0"]

    def test_nine_groups(self):
        """Test the default nine groups are Code0 to Code8."""
        assert code_names(9) == [f"Code{g}" for g in range(9)]


class TestGenerateSynthetic:
    """Test dataset generation."""

    def test_reproducible(self, small_task):
        """Test the same task description yields identical tensors and records."""
        first = generate_synthetic(small_task)
        second = generate_synthetic(small_task)
        np.testing.assert_array_equal(first.train.features, second.train.features)
        np.testing.assert_array_equal(first.train.targets, second.train.targets)
        assert first.train.examples == second.train.examples

    def test_seed_changes_data(self, small_task):
        """Test a different seed gives different data."""
        first = generate_synthetic(small_task)
        second = generate_synthetic(small_task.model_copy(update={"seed": 4}))
        assert not np.array_equal(first.train.targets, second.train.targets) or not np.allclose(
            first.train.features, second.train.features
        )

    def test_group_sizes(self, small_task):
        """Test train and validation sizes follow the group sizes."""
        dataset = generate_synthetic(small_task)
        assert len(dataset.train) == 42
        assert np.bincount(dataset.train.home_groups).tolist() == [24, 12, 6]
        assert len(dataset.validation) == 18
        assert dataset.num_classes == small_task.classes + 1
        assert dataset.input_dim == 6

    def test_annotations_follow_layout(self, small_task):
        """Test ranges sit on completion tokens and labels are valid."""
        dataset = generate_synthetic(small_task)
        split = dataset.train
        for i, example in enumerate(split.examples):
            bounds = slice(int(split.offsets[i]), int(split.offsets[i + 1]))
            mask = split.mask[bounds]
            assert mask[: small_task.prompt_tokens].sum() == 0.0
            assert 1 <= example.num_annotations <= small_task.max_annotations
            dataset.validity.check(example)
            for annotation in example.annotations:
                start, end = annotation.token_range
                assert end - start == small_task.span_tokens
                assert mask[start:end].all()
                assert annotation.code == f"Code{split.home_groups[i]}"

    def test_save_and_load(self, small_task, tmp_path):
        """Test a saved dataset loads back identically."""
        dataset = generate_synthetic(small_task)
        paths = save_dataset(dataset, tmp_path / "data")
        assert sorted(p.name for p in paths) == [
            "train.jsonl",
            "train_tokens.npz",
            "validation.jsonl",
            "validation_tokens.npz",
            "validity.json",
        ]
        loaded = load_dataset(tmp_path / "data")
        assert loaded.train.examples == dataset.train.examples
        np.testing.assert_array_equal(loaded.validation.features, dataset.validation.features)
        assert loaded.validity == dataset.validity
        assert loaded.num_classes == dataset.num_classes
