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

Command: project
"""

import logging

from fanbeam import settings
from fanbeam.cli import Arg
from fanbeam.cli.types import existing_file
from fanbeam.commands.common import (
    Outputs,
    add_common_arguments,
    load_config,
    resolve_geometry,
)
from fanbeam.geometry import geometry_to_dict, ray_set
from fanbeam.io import read_image
from fanbeam.projector import NoiseSpec, add_noise, forward_project

__all__ = (
    "add_command",
    "project",
)


def project(args):
    """
    Forward project an image raster, optionally adding relative noise.
    The sinogram header embeds the geometry it was made with.
    """
    config = load_config(args)
    cfg, g = resolve_geometry(args, config)
    img = read_image(args.image)
    seed = settings.NOISE_SEED if args.seed is None else args.seed
    noise = NoiseSpec(args.noise or 0.0, seed)
    logging.info("Projecting %sx%s image over %s angles.", img.n, img.n,
                 cfg.n_angles)
    sino = add_noise(forward_project(img, ray_set(cfg, g)), noise)
    sino.geometry = geometry_to_dict(cfg, g)

    outputs = Outputs("project", args)
    outputs.raster("sinogram", sino, pgm=args.pgm)
    outputs.report(seeds={"noise": noise.seed})


def add_command(cli_factory):
    """
    Create project command and add to the fanbeam CLI
    """
    add_common_arguments(cli_factory)
    cli_factory.add_arguments(image=Arg(
        flags=("--image",),
        type=existing_file,
        required=True,
        metavar="FILE",
        help="Image raster to project."
    ))
    cli_factory.add_command(
        "project", project,
        "Forward project an image with a given geometry.",
        ["out", "image", "geometry", "noise", "seed", "pgm"]
    )
