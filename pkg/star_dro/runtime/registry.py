"""
Reweighter registry and factory.

This module provides:
- Central registry mapping method names to reweighter classes
- Factory helper that builds a configured reweighter for a run
- Decorator for registering additional controllers
"""

import inspect
from collections.abc import Callable
from typing import Any

from star_dro.exceptions import ReweighterRegistryError
from star_dro.infrastructure.config import ReweighterConfig
from star_dro.logging.logger import get_logger
from star_dro.reweighting.base import BaseReweighter
from star_dro.reweighting.standard import ERMReweighter, StandardDROReweighter
from star_dro.reweighting.star import StarDROReweighter


class ReweighterRegistry:
    """
    Central registry for reweighter controllers.

    Maps method names ("erm", "dro", "stardro", ...) to their implementations.
    """

    def __init__(self) -> None:
        """Initialize an empty registry."""
        self._reweighters: dict[str, type[BaseReweighter]] = {}
        self.logger = get_logger("reweighter.registry")

    def register(self, name: str, reweighter_class: type[BaseReweighter]) -> None:
        """
        Register a reweighter class.

        Args:
            name: Method name
            reweighter_class: Concrete BaseReweighter subclass

        Raises:
            ReweighterRegistryError: If the name is empty or the class is not a reweighter
        """
        if not name:
            raise ReweighterRegistryError("Reweighter name cannot be empty")

        if not inspect.isclass(reweighter_class) or not issubclass(
            reweighter_class, BaseReweighter
        ):
            raise ReweighterRegistryError(
                f"Reweighter class must be a subclass of BaseReweighter, got {reweighter_class}"
            )

        if name in self._reweighters:
            self.logger.warning(
                "reweighter_overwritten",
                name=name,
                old_class=self._reweighters[name].__name__,
                new_class=reweighter_class.__name__,
            )

        self._reweighters[name] = reweighter_class
        self.logger.debug("reweighter_registered", name=name, cls=reweighter_class.__name__)

    def unregister(self, name: str) -> None:
        """Remove a registration; unknown names raise ReweighterRegistryError."""
        if name not in self._reweighters:
            raise ReweighterRegistryError(f"Reweighter '{name}' is not registered")
        del self._reweighters[name]

    def get(self, name: str) -> type[BaseReweighter]:
        """
        Get a reweighter class by name.

        Raises:
            ReweighterRegistryError: If the name is not registered
        """
        if name not in self._reweighters:
            available = ", ".join(sorted(self._reweighters))
            raise ReweighterRegistryError(
                f"Reweighter '{name}' is not registered. Available: {available}"
            )
        return self._reweighters[name]

    def list_names(self) -> list[str]:
        """Registered names in sorted order."""
        return sorted(self._reweighters)

    def create(
        self,
        name: str,
        num_groups: int,
        config: ReweighterConfig | None = None,
        **kwargs: Any,
    ) -> BaseReweighter:
        """
        Build a reweighter instance.

        Args:
            name: Registered method name
            num_groups: Number of groups in the inventory
            config: Hyperparameters
            **kwargs: Extra constructor arguments (schedules)

        Returns:
            The configured reweighter
        """
        reweighter_class = self.get(name)
        reweighter = reweighter_class(num_groups, config, **kwargs)
        self.logger.debug("reweighter_created", name=name, num_groups=num_groups)
        return reweighter


def _default_registry() -> ReweighterRegistry:
    registry = ReweighterRegistry()
    for cls in (ERMReweighter, StandardDROReweighter, StarDROReweighter):
        registry.register(cls.name, cls)
    return registry


_global_registry = _default_registry()


def get_registry() -> ReweighterRegistry:
    """Get the global reweighter registry."""
    return _global_registry


def register_reweighter(name: str) -> Callable[[type[BaseReweighter]], type[BaseReweighter]]:
    """Decorator registering a reweighter class in the global registry."""

    def decorator(cls: type[BaseReweighter]) -> type[BaseReweighter]:
        get_registry().register(name, cls)
        return cls

    return decorator
