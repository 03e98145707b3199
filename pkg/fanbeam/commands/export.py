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
fanbeam command

Command: export-pgm
"""

import os

from fanbeam.cli import Arg
from fanbeam.cli.types import existing_file
from fanbeam.commands.common import Outputs, add_common_arguments
from fanbeam.io import export_pgm, raster_paths, read_raster

__all__ = (
    "add_command",
    "export",
)


def export(args):
    """
    Write a 16-bit PGM preview of an image or sinogram raster.
    """
    raster = read_raster(args.input)
    header, _ = raster_paths(args.input)
    stem = os.path.splitext(os.path.basename(header))[0]
    outputs = Outputs("export-pgm", args)
    path = outputs.path(stem + ".pgm")
    export_pgm(raster, path)
    outputs.add(path)
    outputs.report()


def add_command(cli_factory):
    """
    Create export-pgm command and add to the fanbeam CLI
    """
    add_common_arguments(cli_factory)
    cli_factory.add_arguments(input=Arg(
        flags=("--input",),
        type=existing_file,
        required=True,
        metavar="FILE",
        help="Image or sinogram raster."
    ))
    cli_factory.add_command(
        "export-pgm", export,
        "Export a raster as a 16-bit PGM image.",
        ["out", "input"]
    )
