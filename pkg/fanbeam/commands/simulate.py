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
fanbeam commands

Commands: simulate-phantom, simulate
"""

import logging

from fanbeam import settings
from fanbeam.cli import Arg
from fanbeam.cli.types import existing_file, positive_float, positive_int
from fanbeam.commands.common import (
    Outputs,
    add_common_arguments,
    load_config,
    resolve,
    resolve_geometry,
)
from fanbeam.config import Config
from fanbeam.geometry import geometry_to_dict, ray_set
from fanbeam.phantoms import (
    PHANTOMS,
    ImageGrid,
    load_phantom_spec,
    make_phantom,
    resample_image,
)
from fanbeam.projector import (
    NoiseSpec,
    add_noise,
    forward_project,
    sinogram_to_intensities,
)

__all__ = (
    "add_command",
    "simulate_phantom",
    "simulate",
)


def _phantom(args, n: int, fov: float) -> ImageGrid:
    spec = load_phantom_spec(args.phantom, args.spec)
    return make_phantom(args.phantom, n, fov, spec)


def simulate_phantom(args):
    """
    Rasterize a phantom at the requested grid size.
    """
    config = load_config(args)
    section = Config.RECONSTRUCTION_SECTION
    n = resolve(args, "n", config, section, kind=int)
    fov = resolve(args, "fov", config, section)
    outputs = Outputs("simulate-phantom", args)
    img = _phantom(args, n, fov)
    outputs.raster("phantom", img, pgm=args.pgm)
    outputs.report(phantom=args.phantom, n=n, fov_mm=fov)


def simulate(args):
    """
    Synthetic measurement: phantom on a fine grid, forward projection,
    relative noise, and the ground truth resampled to the coarse grid.
    """
    config = load_config(args)
    cfg, g = resolve_geometry(args, config)
    if args.angles is not None:
        cfg = cfg.with_angles(args.angles)
    fov = resolve(args, "fov", config, Config.RECONSTRUCTION_SECTION)
    seed = settings.NOISE_SEED if args.seed is None else args.seed
    level = settings.NOISE_LEVEL if args.noise is None else args.noise
    noise = NoiseSpec(level, seed)

    outputs = Outputs("simulate", args)
    logging.info("Simulating %s phantom: %s -> %s grid, %s angles, "
                 "noise %s.", args.phantom, args.fine_n, args.coarse_n,
                 cfg.n_angles, noise.relative_level)
    fine = _phantom(args, args.fine_n, fov)
    clean = forward_project(fine, ray_set(cfg, g))
    sino = add_noise(clean, noise)
    sino.geometry = geometry_to_dict(cfg, g)
    coarse = resample_image(fine, args.coarse_n)

    outputs.raster("sinogram", sino, pgm=args.pgm)
    outputs.raster("truth_fine", fine)
    outputs.raster("truth", coarse, pgm=args.pgm)
    if args.intensities is not None:
        intensities = sino.copy(
            sinogram_to_intensities(sino, args.intensities))
        outputs.raster("intensities", intensities)
    provenance = {
        "phantom": args.phantom,
        "phantom_spec": args.spec,
        "geometry": geometry_to_dict(cfg, g),
        "fine_n": args.fine_n,
        "coarse_n": args.coarse_n,
        "fov_mm": fov,
        "noise_level": noise.relative_level,
        "noise_seed": noise.seed,
        "i0": args.intensities,
    }
    outputs.json("provenance.json", provenance)
    outputs.report(seeds={"noise": noise.seed})


def add_command(cli_factory):
    """
    Create simulation commands and add them to the fanbeam CLI
    """
    add_common_arguments(cli_factory)
    cli_factory.add_arguments(
        phantom=Arg(
            flags=("--phantom",),
            choices=sorted(PHANTOMS),
            default="l",
            help="Phantom to generate. Default: l"
        ),
        spec=Arg(
            flags=("--spec",),
            type=existing_file,
            metavar="FILE",
            help="Phantom spec JSON overriding the built-in dimensions."
        ),
        angles=Arg(
            flags=("--angles",),
            type=positive_int,
            help="Number of projection angles over the angular span.\n"
                 "Default: [scanner] n_angles."
        ),
        fine_n=Arg(
            flags=("--fine-n",),
            type=positive_int,
            default=settings.FINE_N,
            help="Grid size the data are simulated on."
        ),
        coarse_n=Arg(
            flags=("--coarse-n",),
            type=positive_int,
            default=settings.COARSE_N,
            help="Grid size of the downsampled ground truth."
        ),
        intensities=Arg(
            flags=("--intensities",),
            type=positive_float,
            metavar="I0",
            help="Also write Beer-Lambert intensities I0 * exp(-y)."
        ),
    )
    cli_factory.add_command(
        "simulate-phantom", simulate_phantom,
        "Rasterize a calibration or target phantom.",
        ["out", "phantom", "spec", "n", "fov", "pgm"]
    )
    cli_factory.add_command(
        "simulate", simulate,
        "Simulate a noisy sinogram of a phantom and its ground truth.",
        ["out", "phantom", "spec", "geometry", "angles", "fine_n",
         "coarse_n", "fov", "noise", "seed", "intensities", "pgm"]
    )
