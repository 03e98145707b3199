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
fanbeam CLI factory
"""

import os
from argparse import ArgumentParser, ArgumentTypeError
from dataclasses import asdict
from typing import Callable, Dict, List, Optional

from fanbeam.cli.args import Arg
from fanbeam.cli.parsers import Parser
from fanbeam.exceptions import ConfigError

__all__ = (
    "CLIFactory",
)

_NOT_ARGPARSE_FIELDS = ("flags", "env")


class CLIFactory:
    """
    CLI Factory - registers named argument descriptions once and wires them
    into the main parser and the subcommand parsers by name.
    """

    def __init__(
        self,
        parser: Parser,
        *,
        args: Optional[Dict[str, Arg]] = None
    ):
        self._parser = parser
        self._args = args or {}

    @property
    def parser(self) -> Parser:
        """
        Parser description used as the main parser.
        """
        return self._parser

    def add_arguments(self, **args: Optional[Arg]) -> None:
        """
        Register argument descriptions under their names. Registering a
        name twice keeps the first description so commands can share
        arguments.
        """
        for arg_name, arg_conf in args.items():
            self._args.setdefault(arg_name, arg_conf)

    def add_command(
        self,
        name: str,
        func: Callable,
        help: str,  # pylint: disable=redefined-builtin
        args: List[str]
    ) -> Parser:
        """
        Append a subcommand parser to the main parser.
        """
        command = Parser(name=name, func=func, help=help, args=list(args))
        self.parser.subparser.parsers.append(command)
        return command

    @staticmethod
    def _env_default(arg_config: Arg):
        raw = os.environ.get(arg_config.env, "").strip()
        if not raw:
            return arg_config.default
        convert = arg_config.type or str
        try:
            return convert(raw)
        except (ArgumentTypeError, ValueError) as err:
            raise ConfigError(
                "environment variable {env}={raw!r}: {err}".format(
                    env=arg_config.env, raw=raw, err=err
                )
            )

    def _setup_arguments(
        self,
        parser: ArgumentParser,
        args: List[str]
    ) -> None:
        for arg_name in args:
            arg_config = self._args.get(arg_name)
            if arg_config is None:
                continue
            kwargs = {}
            for field, value in asdict(arg_config).items():
                if field not in _NOT_ARGPARSE_FIELDS and value is not None:
                    kwargs[field] = value
            # Environment fallback replaces the static default
            if arg_config.env is not None:
                kwargs["default"] = self._env_default(arg_config)
            parser.add_argument(*arg_config.flags, **kwargs)

    def _setup_subparsers(
        self,
        parser: ArgumentParser,
        parser_config: Parser
    ) -> None:
        subparsers = parser.add_subparsers(**parser_config.subparser.asdict())
        for p_config in parser_config.subparser.parsers:
            # Create command parser
            _parser = subparsers.add_parser(p_config.name, **p_config.asdict(
                epilog=parser.epilog, description=p_config.help
            ))
            # Setup command arguments
            self._setup_arguments(_parser, p_config.args)
            # Setup handler and defaults
            if p_config.func is not None:
                _parser.set_defaults(func=p_config.func)
            if p_config.defaults:
                _parser.set_defaults(**p_config.defaults)
            # Setup nested commands
            if p_config.subparser is not None:
                self._setup_subparsers(_parser, p_config)

    def get_cli(self, *, args=None, **kwargs) -> ArgumentParser:
        """
        Build and return the main CLI parser.
        """
        # Create main parser
        parser = ArgumentParser(**self.parser.asdict(**kwargs))
        # Global arguments go before the command name
        self.parser.args.extend(args or [])
        self._setup_arguments(parser, self.parser.args)
        if self.parser.defaults:
            parser.set_defaults(**self.parser.defaults)

        # Setup commands
        if self.parser.subparser is not None:
            self._setup_subparsers(parser, self.parser)

        return parser
