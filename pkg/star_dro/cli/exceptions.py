"""CLI-specific exceptions and error handling."""

import functools
import json
from collections.abc import Callable
from typing import Any, TypeVar

import click
import yaml
from pydantic import ValidationError
from rich.console import Console

from star_dro.exceptions import (
    DivergenceError,
    InvalidInputError,
    NumericalFailureError,
    SchemaError,
)
from star_dro.logging.logger import get_logger

err_console = Console(stderr=True)


class StarDROCLIError(click.ClickException):
    """Base exception for STaR-DRO CLI errors (exit code 1)."""

    exit_code = 1

    def show(self, file: Any | None = None) -> None:
        """Display the error message."""
        err_console.print(f"[red]Error: {self.format_message()}[/red]", highlight=False)


class InputError(StarDROCLIError):
    """Missing or unreadable input, malformed documents, bad parameters."""

    exit_code = 2


class SchemaMismatchError(StarDROCLIError):
    """Records or configs that violate their schema, or mismatched instance ids."""

    exit_code = 3


class NumericalError(StarDROCLIError):
    """Projection failures and diverged runs."""

    exit_code = 4


def _validation_message(error: ValidationError) -> str:
    parts = []
    for item in error.errors():
        location = ".".join(str(part) for part in item["loc"]) or "<root>"
        parts.append(f"{location}: {item['msg']}")
    return "invalid configuration: " + "; ".join(parts)


F = TypeVar("F", bound=Callable[..., Any])


def handle_errors(func: F) -> F:
    """Decorator mapping library and file-system errors to CLI exit codes.

    2: missing/unreadable files, malformed JSON or YAML, invalid input
    3: validation errors, schema violations, instance id mismatch
    4: numerical failures and divergence
    1: anything else (traceback logged)
    """

    @functools.wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return func(*args, **kwargs)
        except click.ClickException:
            # Already formatted, including our own subclasses
            raise
        except ValidationError as e:
            raise SchemaMismatchError(_validation_message(e)) from e
        except SchemaError as e:
            raise SchemaMismatchError(str(e)) from e
        except (NumericalFailureError, DivergenceError) as e:
            raise NumericalError(str(e)) from e
        except FileNotFoundError as e:
            filename = getattr(e, "filename", None) or str(e)
            raise InputError(f"File not found: {filename}") from e
        except PermissionError as e:
            raise InputError(f"Permission denied: {e.filename}") from e
        except json.JSONDecodeError as e:
            raise InputError(f"Malformed JSON: {e}") from e
        except yaml.YAMLError as e:
            raise InputError(f"Malformed YAML: {e}") from e
        except InvalidInputError as e:
            raise InputError(str(e)) from e
        except Exception as e:
            logger = get_logger(__name__)
            logger.error("unexpected_error", exc_info=True)
            raise StarDROCLIError(
                f"An unexpected error occurred: {str(e)}\n" "Run with --verbose for more details."
            ) from e

    return wrapper  # type: ignore[return-value]
