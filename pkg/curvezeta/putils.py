#!/usr/bin/env python3
import asyncio
import functools
import logging

import click

from curvezeta.exceptions import CurveZetaError

logger = logging.getLogger(__name__)


def make_sync(func):
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        return asyncio.run(func(*args, **kwargs))

    return wrapper


class CommandError(click.ClickException):
    def __init__(self, message: str, exit_code: int) -> None:
        super().__init__(message)
        self.exit_code = exit_code


def exit_on_error(func):
    """Turn library errors into click exceptions carrying the documented exit code."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except CurveZetaError as e:
            logger.debug("command failed", exc_info=True)
            raise CommandError(f"{type(e).__name__}: {e}", e.exit_code) from e

    return wrapper
