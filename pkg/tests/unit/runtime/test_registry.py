"""Tests for the reweighter registry."""

import pytest

from star_dro.exceptions import ReweighterRegistryError
from star_dro.infrastructure.config import ReweighterConfig
from star_dro.reweighting import (
    BaseReweighter,
    ERMReweighter,
    StandardDROReweighter,
    StarDROReweighter,
)
from star_dro.runtime.registry import (
    ReweighterRegistry,
    get_registry,
    register_reweighter,
)


class TestReweighterRegistry:
    """Test ReweighterRegistry functionality."""

    def test_default_registrations(self):
        """Test the global registry knows every training method."""
        registry = get_registry()
        assert registry.list_names() == ["dro", "erm", "stardro"]
        assert registry.get("erm") is ERMReweighter
        assert registry.get("dro") is StandardDROReweighter
        assert registry.get("stardro") is StarDROReweighter

    def test_create(self):
        """Test the factory passes group count and config through."""
        config = ReweighterConfig(eta=0.2)
        reweighter = get_registry().create("stardro", 5, config)
        assert isinstance(reweighter, StarDROReweighter)
        assert reweighter.num_groups == 5
        assert reweighter.config is config

    def test_unknown_name(self):
        """Test unknown names list what is available."""
        with pytest.raises(ReweighterRegistryError, match="Available: dro, erm, stardro"):
            get_registry().get("focal")

    def test_register_rejects_non_reweighter(self):
        """Test only BaseReweighter subclasses can be registered."""
        registry = ReweighterRegistry()
        with pytest.raises(ReweighterRegistryError):
            registry.register("bad", dict)  # type: ignore[arg-type]

    def test_register_rejects_empty_name(self):
        """Test empty names are rejected."""
        with pytest.raises(ReweighterRegistryError):
            ReweighterRegistry().register("", ERMReweighter)

    def test_unregister(self):
        """Test unregistering removes the name."""
        registry = ReweighterRegistry()
        registry.register("erm", ERMReweighter)
        registry.unregister("erm")
        assert registry.list_names() == []
        with pytest.raises(ReweighterRegistryError):
            registry.unregister("erm")

    def test_decorator(self):
        """Test the decorator registers in the global registry."""

        @register_reweighter("neutral-test")
        class NeutralTest(ERMReweighter):
            pass

        try:
            assert get_registry().get("neutral-test") is NeutralTest
            assert issubclass(NeutralTest, BaseReweighter)
        finally:
            get_registry().unregister("neutral-test")
