"""
Runtime module for STaR-DRO.

Core runtime functionality including:
- Reweighter state and checkpoint snapshots
- Reweighter registry and factory (star_dro.runtime.registry)
"""

from star_dro.runtime.state import (
    ReweighterState,
    StateSnapshot,
    load_snapshot,
    save_snapshot,
)

__all__ = [
    "ReweighterState",
    "StateSnapshot",
    "load_snapshot",
    "save_snapshot",
]
