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

Command: metrics
"""

import json

from fanbeam.cli import Arg
from fanbeam.cli.types import existing_file
from fanbeam.commands.common import Outputs, add_common_arguments
from fanbeam.io import read_image
from fanbeam.metrics import fov_mask, relative_error, ssim

__all__ = (
    "add_command",
    "metrics",
)


def metrics(args):
    """
    Relative error and SSIM of image --a against the reference --b,
    printed as JSON.
    """
    estimate, reference = read_image(args.a), read_image(args.b)
    scores = {
        "rel_error": relative_error(estimate, reference,
                                    fov_mask(reference.n,
                                             args.mask_fraction)),
        "ssim": ssim(estimate, reference),
    }
    print(json.dumps(scores, sort_keys=True))
    if args.out is not None:
        outputs = Outputs("metrics", args)
        outputs.json("metrics.json", scores)
        outputs.report(metrics=scores)


def add_command(cli_factory):
    """
    Create metrics command and add to the fanbeam CLI
    """
    add_common_arguments(cli_factory)
    cli_factory.add_arguments(
        a=Arg(
            flags=("--a",),
            type=existing_file,
            required=True,
            metavar="FILE",
            help="Image to score."
        ),
        b=Arg(
            flags=("--b",),
            type=existing_file,
            required=True,
            metavar="FILE",
            help="Reference image."
        ),
        optional_out=Arg(
            flags=("-o", "--out"),
            dest="out",
            metavar="DIR",
            help="Also write metrics.json and report.json to this directory."
        ),
    )
    cli_factory.add_command(
        "metrics", metrics,
        "Relative error and SSIM of two images.",
        ["a", "b", "mask_fraction", "optional_out"]
    )
