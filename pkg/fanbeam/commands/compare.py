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

Command: compare-methods

Subsamples one sinogram to several angle counts, reconstructs each with
FBP, Tikhonov and Cauchy MAP and scores everything against one reference
image.
"""

import csv
import logging
from argparse import ArgumentTypeError

from fanbeam import settings
from fanbeam.cli import Arg
from fanbeam.cli.types import int_list
from fanbeam.commands.common import (
    Outputs,
    add_common_arguments,
    load_config,
    sinogram_geometry,
)
from fanbeam.commands.reconstruct import (
    METHODS,
    add_solver_arguments,
    reconstruct_with,
)
from fanbeam.exceptions import FanbeamCommandException
from fanbeam.geometry import ray_set
from fanbeam.io import read_image, read_sinogram
from fanbeam.metrics import fov_mask, relative_error, ssim
from fanbeam.projector import subsample_angles

__all__ = (
    "add_command",
    "compare_methods",
)

_CSV_FIELDS = ("method", "n_angles", "rel_error", "ssim")


def compare_methods(args):
    """
    Metrics table of every method at every angle count.
    """
    if args.reference is None:
        raise FanbeamCommandException("compare-methods needs --reference")
    config = load_config(args)
    reference = read_image(args.reference)
    n, fov = reference.n, reference.fov
    mask = fov_mask(n, args.mask_fraction)
    full = read_sinogram(args.sino)

    outputs = Outputs("compare-methods", args)
    rows, solvers = [], []
    for count in args.angle_counts:
        sino = subsample_angles(full, count)
        cfg, g = sinogram_geometry(sino, args, config)
        rays = ray_set(cfg, g)
        for method in args.methods:
            image, summary = reconstruct_with(method, sino, rays, n, fov,
                                              args, config)
            name = "{}_{}".format(method, count)
            outputs.raster(name, image, pgm=args.pgm)
            row = {
                "method": method,
                "n_angles": count,
                "rel_error": relative_error(image, reference, mask),
                "ssim": ssim(image, reference),
            }
            logging.info("%s with %s angles: rel_error %.4f, ssim %.4f",
                         method, count, row["rel_error"], row["ssim"])
            rows.append(row)
            summary["n_angles"] = count
            solvers.append(summary)

    outputs.json("metrics.json", {"rows": rows})
    csv_path = outputs.path("metrics.csv")
    with open(csv_path, "w", newline="") as file_descriptor:
        writer = csv.DictWriter(file_descriptor, fieldnames=_CSV_FIELDS)
        writer.writeheader()
        writer.writerows(rows)
    outputs.add(csv_path)
    outputs.report(solvers=solvers)


def _method_list(value: str):
    methods = tuple(item.strip() for item in value.split(",") if item.strip())
    unknown = [item for item in methods if item not in METHODS]
    if unknown or not methods:
        raise ArgumentTypeError("methods must be taken from {}".format(
            ", ".join(METHODS)))
    return methods


def add_command(cli_factory):
    """
    Create compare-methods command and add to the fanbeam CLI
    """
    add_common_arguments(cli_factory)
    add_solver_arguments(cli_factory)
    cli_factory.add_arguments(
        angle_counts=Arg(
            flags=("--angle-counts",),
            type=int_list,
            default=settings.COMPARE_ANGLES,
            help="Comma separated angle counts, each dividing the number\n"
                 "of sinogram rows. Default: 360,45,20"
        ),
        methods=Arg(
            flags=("--methods",),
            type=_method_list,
            default=METHODS,
            help="Comma separated methods. Default: fbp,tikhonov,map"
        ),
    )
    cli_factory.add_command(
        "compare-methods", compare_methods,
        "Compare FBP, Tikhonov and MAP at several angle counts.",
        ["out", "sino", "geometry", "reference", "angle_counts", "methods",
         "filter", "cutoff", "alpha", "beta", "max_iter", "solver_tol",
         "data_noise", "init", "mask_fraction", "pgm"]
    )
