"""
Logging module for STaR-DRO.

Provides structured logging (console or JSON rendering) shared by the library,
the training harness and the CLI.
"""

from star_dro.logging.logger import (
    LogContext,
    cleanup_logging_handlers,
    get_logger,
    setup_logging,
)

__all__ = [
    "setup_logging",
    "get_logger",
    "LogContext",
    "cleanup_logging_handlers",
]
