#!/usr/bin/env python3
import functools
from pathlib import Path

import click
from ant31box.config import LOG_LEVELS

from curvezeta.config import Config, config, init_logging
from curvezeta.exceptions import InputError
from curvezeta.inputs import LoadedInput, load_input, parse_input
from curvezeta.parse_utils import parse_multiindex
from curvezeta.render import OutputDocument, render

LEVEL_CHOICES = click.Choice(list(LOG_LEVELS.keys()))


def _multiindex(_ctx: click.Context, _param: click.Parameter, value: str | None) -> tuple[int, ...] | None:
    if value is None:
        return None
    try:
        return parse_multiindex(value)
    except ValueError as e:
        raise click.BadParameter(str(e)) from e


def input_options(func):
    """INPUT plus the options shared by every command reading a curve description."""

    @click.argument("input_path", metavar="INPUT", type=str)
    @click.option("--format", "-o", "fmt", default=None, type=click.Choice(["text", "json"]), help="Output format")
    @click.option("--config", "-c", "config_path", default=None, type=click.Path(exists=True), help="YAML config")
    @click.option("--log-level", default=None, type=LEVEL_CHOICES, help="Log level (logs go to stderr)")
    @click.option(
        "--truncation",
        default=None,
        callback=_multiindex,
        help="Per-branch jet truncation N1,..,Nd; overrides the input",
    )
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        return func(*args, **kwargs)

    return wrapper


def setup(config_path: str | None, log_level: str | None) -> Config:
    conf = config(config_path, reload=config_path is not None)
    init_logging(conf, log_level)
    return conf


def read_input(input_path: str) -> str:
    if input_path == "-":
        return click.get_text_stream("stdin").read()
    try:
        return Path(input_path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"Cannot read {input_path}: {e.strerror or e}") from e


def load(
    conf: Config, input_path: str, truncation: tuple[int, ...] | None, field_model: bool = False
) -> LoadedInput:
    description = parse_input(read_input(input_path))
    return load_input(
        description,
        truncation=truncation,
        start=conf.zeta.start_truncation,
        max_norm=conf.zeta.max_truncation_norm,
        field_model=field_model,
    )


def emit(doc: OutputDocument, conf: Config, fmt: str | None) -> None:
    click.echo(render(doc, fmt or conf.zeta.output_format))
