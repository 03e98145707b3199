# Copyright 2021 The fanbeam Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""
fanbeam command line entry point.
"""
import sys

from fanbeam import (
    commands, constants, settings
)
from fanbeam.cli import (
    CLIFactory, Arg, Parser, SubParser
)
from fanbeam.cli.types import positive_int
from fanbeam.config import Config, apply_threads
from fanbeam.exceptions import (
    ConfigError,
    FanbeamBaseException,
)
from fanbeam.log import add_logging


def build_cli():
    """
    Build CLI for the fanbeam toolkit

    return: CLIParser
    """
    cli_factory = CLIFactory(Parser(
        prog=constants.FANBEAM_PROG_NAME, subparser=SubParser()
    ))
    # Initialize main used arguments
    cli_factory.add_arguments(
        config=Arg(
            flags=('-c', '--config'),
            type=str,
            help=constants.FANBEAM_CONFIG_HELP
        ),
        threads=Arg(
            flags=('--threads',),
            type=positive_int,
            env=settings.FANBEAM_THREADS_ENV,
            help=constants.FANBEAM_THREADS_HELP
        )
    )
    cli_factory.parser.args.extend(['config', 'threads'])
    # Add logging configuration to fanbeam CLI
    add_logging(cli_factory)

    # Add CLI commands
    commands.version.add_command(cli_factory)
    commands.simulate.add_command(cli_factory)
    commands.project.add_command(cli_factory)
    commands.perturb.add_command(cli_factory)
    commands.calibrate.add_command(cli_factory)
    commands.reconstruct.add_command(cli_factory)
    commands.compare.add_command(cli_factory)
    commands.metrics.add_command(cli_factory)
    commands.export.add_command(cli_factory)

    return cli_factory.get_cli(
        description=constants.FANBEAM_CLI_DESCRIPTION,
        epilog=constants.FANBEAM_CLI_EPILOG
    )


def main():
    """
    Creating and initializing the CLI for processing input operations
    """
    try:
        cli = build_cli()
    except ConfigError as err:
        sys.stderr.write("{prog}: {err}\n".format(
            prog=constants.FANBEAM_PROG_NAME, err=err))
        sys.exit(1)
    args = cli.parse_args()
    # Configure logging
    args.setup_logging(args)

    if getattr(args, "func", None) is None:
        cli.exit(1, "Sub-command didn't set for processing your operation. "
                    "Please see in `fanbeam --help` how to use fanbeam.\n")

    status, message = 0, ""
    try:
        config = Config.load_from_file(filename=args.config)
        apply_threads(args.threads, config)
        args.func(args)
    except FanbeamBaseException as err:
        status, message = (1, "{err}\n".format(err=str(err)))
    cli.exit(status, message)


if __name__ == "__main__":
    main()
