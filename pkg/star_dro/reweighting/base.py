"""
Base reweighter abstract class.

A reweighter owns one ReweighterState and turns per-step group-loss
observations into robust multipliers. Concrete controllers implement
``update`` as a pure transition from one state to the next; the base class
handles schedules, the activation boundary, diagnostics and checkpoints.
"""

from abc import ABC, abstractmethod
from collections.abc import Callable, Sequence
from typing import ClassVar

from star_dro.exceptions import InvalidInputError
from star_dro.geometry.simplex import shannon_entropy
from star_dro.infrastructure.config import ReweighterConfig
from star_dro.logging.logger import get_logger
from star_dro.reweighting.types import Diagnostics, GroupObservation, MultiplierSet
from star_dro.runtime.state import ReweighterState, StateSnapshot

Schedule = Callable[[int], float]


def is_active(activation_step: int | None, step: int) -> bool:
    """Robust branch runs from activation_step onwards; None never activates."""
    return activation_step is not None and step >= activation_step


def diagnostics(state: ReweighterState, config: ReweighterConfig) -> Diagnostics:
    """Entropy (nats), active-set size and effective dual step of a state."""
    return Diagnostics(
        entropy=shannon_entropy(state.q),
        active_set_size=int((state.q > 0.0).sum()),
        eta_eff=config.eta_eff,
    )


class BaseReweighter(ABC):
    """
    Abstract base class for group reweighters.

    Subclasses provide:
    - ``name``, the registry key
    - ``update``, the state transition for one optimizer step
    """

    name: ClassVar[str] = "base"

    def __init__(
        self,
        num_groups: int,
        config: ReweighterConfig | None = None,
        *,
        eta_schedule: Schedule | None = None,
        rho_schedule: Schedule | None = None,
    ) -> None:
        """Initialize the reweighter.

        Args:
            num_groups: Number of groups G in the inventory
            config: Hyperparameters (defaults when omitted)
            eta_schedule: Optional step -> eta override of config.eta
            rho_schedule: Optional step -> rho override of config.rho
        """
        self.config = config or ReweighterConfig()
        self.num_groups = num_groups
        self.eta_schedule = eta_schedule
        self.rho_schedule = rho_schedule
        self.logger = get_logger(f"reweighter.{self.name}")
        self._state = ReweighterState.initial(num_groups)

    @property
    def state(self) -> ReweighterState:
        """Current state."""
        return self._state

    def eta_at(self, step: int) -> float:
        return self.eta_schedule(step) if self.eta_schedule else self.config.eta

    def rho_at(self, step: int) -> float:
        return self.rho_schedule(step) if self.rho_schedule else self.config.rho

    def is_active(self, step: int | None = None) -> bool:
        """Whether the robust branch runs at ``step`` (default: the next step)."""
        return is_active(self.config.activation_step, self._state.step if step is None else step)

    def step(self, observations: Sequence[GroupObservation]) -> MultiplierSet:
        """Consume one batch of observations and advance the state.

        Args:
            observations: Loss units with their group sets

        Returns:
            Multipliers for this step
        """
        next_state, multipliers = self.update(self._state, observations)
        if self.is_active(self._state.step) and not self.is_active(self._state.step - 1):
            self.logger.info("reweighting_activated", step=self._state.step)
        self._state = next_state
        return multipliers

    @abstractmethod
    def update(
        self, state: ReweighterState, observations: Sequence[GroupObservation]
    ) -> tuple[ReweighterState, MultiplierSet]:
        """Pure transition: return the next state and this step's multipliers."""

    def diagnostics(self) -> Diagnostics:
        return diagnostics(self._state, self.config)

    def snapshot(self) -> StateSnapshot:
        """Capture state and hyperparameters for checkpointing."""
        return StateSnapshot.capture(self._state, self.config)

    def restore(self, snapshot: StateSnapshot) -> None:
        """Resume from a snapshot taken on a reweighter with the same group count."""
        state = snapshot.to_state()
        if state.num_groups != self.num_groups:
            raise InvalidInputError(
                f"snapshot has {state.num_groups} groups, reweighter has {self.num_groups}"
            )
        self.config = snapshot.to_config()
        self._state = state
        self.logger.info("state_restored", step=state.step)

    def reset(self) -> None:
        """Return to the initial uniform state."""
        self._state = ReweighterState.initial(self.num_groups)
