#!/usr/bin/env python3
import click
from ant31box.cmd.default_config import default_config
from ant31box.cmd.version import version

from curvezeta.config import config
from curvezeta.version import VERSION

from .check import check
from .semigroup import semigroup
from .zeta import poincare, specialize, zeta


@click.group()
@click.pass_context
def cli(ctx: click.Context) -> None:
    ctx.ensure_object(dict)


def main():
    _ = VERSION
    _ = config()
    # Display version
    cli.add_command(version)
    # Show default config
    cli.add_command(default_config)
    # Universal zeta function and its derived forms
    cli.add_command(zeta)
    cli.add_command(poincare)
    cli.add_command(specialize)
    # Value semigroup
    cli.add_command(semigroup)
    # Theorem and oracle checks
    cli.add_command(check)

    # Parse cmd-line arguments and options
    # pylint: disable=no-value-for-parameter
    cli()


if __name__ == "__main__":
    main()
