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

Command: reconstruct
"""

import logging
from typing import Any, Dict, Tuple

from fanbeam import settings
from fanbeam.cli import Arg
from fanbeam.cli.types import positive_float, positive_int
from fanbeam.commands.common import (
    Outputs,
    add_common_arguments,
    filter_kind,
    load_config,
    resolve,
    sinogram_geometry,
)
from fanbeam.config import Config
from fanbeam.fbp import fbp_from_rays
from fanbeam.geometry import RaySet, ray_set
from fanbeam.io import read_image, read_sinogram
from fanbeam.metrics import fov_mask, relative_error, ssim
from fanbeam.phantoms import ImageGrid
from fanbeam.projector import Sinogram, subsample_angles
from fanbeam.recon import (
    CauchyMapOptions,
    TikhonovOptions,
    map_reconstruct,
    tikhonov_reconstruct,
)
from fanbeam.recon.cauchy import INITIALIZERS

__all__ = (
    "add_command",
    "reconstruct",
    "reconstruct_with",
    "add_solver_arguments",
    "METHODS",
)

METHODS = ("fbp", "tikhonov", "map")


def reconstruct_with(method: str, sino: Sinogram, rays: RaySet, n: int,
                     fov: float, args,
                     config: Config) -> Tuple[ImageGrid, Dict[str, Any]]:
    """
    Run one reconstruction method; returns the image and a summary of the
    options and solver outcome for the report.
    """
    section = Config.RECONSTRUCTION_SECTION
    if method == "fbp":
        kind = filter_kind(args, config)
        summary = {"method": "fbp", "filter": kind.window.value,
                   "cutoff": kind.cutoff}
        return fbp_from_rays(sino, rays, n, fov, kind), summary
    max_iter = resolve(args, "max_iter", config, section, kind=int)
    if method == "tikhonov":
        opts = TikhonovOptions(
            alpha=resolve(args, "alpha", config, section),
            max_iter=max_iter,
            tol=resolve(args, "tol", config, section, "tikhonov_tol"),
        )
        report = tikhonov_reconstruct(sino, rays, n, fov, opts)
        summary = report.to_dict()
        summary.update(alpha=opts.alpha, tol=opts.tol, max_iter=max_iter)
        return report.image, summary
    opts = CauchyMapOptions(
        beta=resolve(args, "beta", config, section),
        max_iter=max_iter,
        grad_tol=resolve(args, "tol", config, section, "grad_tol"),
        init=args.init,
        noise=resolve(args, "data_noise", config, section, "noise"),
    )
    report = map_reconstruct(sino, rays, n, fov, opts)
    summary = report.to_dict()
    summary.update(beta=opts.beta, grad_tol=opts.grad_tol,
                   max_iter=max_iter, init=opts.init, noise=opts.noise)
    return report.image, summary


def _scores(image: ImageGrid, reference: ImageGrid,
            mask_fraction: float) -> Dict[str, float]:
    return {
        "rel_error": relative_error(image, reference,
                                    fov_mask(image.n, mask_fraction)),
        "ssim": ssim(image, reference),
    }


def reconstruct(args):
    """
    Reconstruct a sinogram with FBP, Tikhonov or Cauchy MAP, optionally
    on a subset of its angles.
    """
    config = load_config(args)
    section = Config.RECONSTRUCTION_SECTION
    n = resolve(args, "n", config, section, kind=int)
    fov = resolve(args, "fov", config, section)
    sino = read_sinogram(args.sino)
    if args.angles is not None:
        sino = subsample_angles(sino, args.angles)
    cfg, g = sinogram_geometry(sino, args, config)
    logging.info("Reconstructing %sx%s sinogram with %s on a %s grid.",
                 sino.k, sino.m, args.method, n)
    image, summary = reconstruct_with(
        args.method, sino, ray_set(cfg, g), n, fov, args, config)

    outputs = Outputs("reconstruct", args)
    outputs.raster("reconstruction", image, pgm=args.pgm)
    extra = {"solver": summary, "n_angles": sino.k}
    if args.reference is not None:
        extra["metrics"] = _scores(image, read_image(args.reference),
                                   args.mask_fraction)
        logging.info("rel_error %.4f, ssim %.4f",
                     extra["metrics"]["rel_error"], extra["metrics"]["ssim"])
    outputs.report(**extra)


def add_solver_arguments(cli_factory):
    """ Options of the iterative reconstructions """
    cli_factory.add_arguments(
        alpha=Arg(
            flags=("--alpha",),
            type=positive_float,
            help="Tikhonov weight. Default: [reconstruction] alpha."
        ),
        beta=Arg(
            flags=("--beta",),
            type=positive_float,
            help="Cauchy prior scale. Default: [reconstruction] beta."
        ),
        max_iter=Arg(
            flags=("--max-iter",),
            type=positive_int,
            help="Iteration limit. Default: [reconstruction] max_iter."
        ),
        solver_tol=Arg(
            flags=("--tol",),
            dest="tol",
            type=positive_float,
            help="Stopping tolerance (CG residual or gradient norm).\n"
                 "Default: [reconstruction] tikhonov_tol or grad_tol."
        ),
        data_noise=Arg(
            flags=("--data-noise",),
            dest="data_noise",
            type=positive_float,
            help="Relative noise level of the sinogram, weighting the MAP\n"
                 "data term. Default: [reconstruction] noise."
        ),
        init=Arg(
            flags=("--init",),
            choices=list(INITIALIZERS),
            default=settings.CAUCHY_INIT,
            help="MAP starting image. Default: fbp"
        ),
    )


def add_command(cli_factory):
    """
    Create reconstruct command and add to the fanbeam CLI
    """
    add_common_arguments(cli_factory)
    add_solver_arguments(cli_factory)
    cli_factory.add_arguments(
        method=Arg(
            flags=("--method",),
            choices=list(METHODS),
            default="fbp",
            help="Reconstruction method. Default: fbp"
        ),
        subsample=Arg(
            flags=("--angles",),
            dest="angles",
            type=positive_int,
            help="Use only this many evenly spaced angles of the sinogram."
        ),
    )
    cli_factory.add_command(
        "reconstruct", reconstruct,
        "Reconstruct a sinogram with FBP, Tikhonov or Cauchy MAP.",
        ["out", "sino", "geometry", "method", "n", "fov", "filter", "cutoff",
         "alpha", "beta", "max_iter", "solver_tol", "data_noise", "init",
         "subsample",
         "reference", "mask_fraction", "pgm"]
    )
