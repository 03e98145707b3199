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

Commands: calibrate, calibrate-sweep
"""

import csv
import logging
import os
from typing import Optional

from fanbeam import settings
from fanbeam.calib import (
    OBJECTIVES,
    CalibProblem,
    DeOptions,
    Handedness,
    calibrate,
    calibration_sweep,
    reconstruction_at,
)
from fanbeam.cli import Arg
from fanbeam.cli.types import (
    existing_file,
    fraction,
    int_list,
    non_negative_float,
    positive_int,
)
from fanbeam.commands.common import (
    Outputs,
    add_common_arguments,
    filter_kind,
    load_config,
    resolve,
    sinogram_geometry,
    sinogram_scanner,
)
from fanbeam.config import Config
from fanbeam.exceptions import ConfigError
from fanbeam.fbp import fbp_reconstruct
from fanbeam.geometry import save_geometry
from fanbeam.io import read_image, read_json, read_sinogram
from fanbeam.metrics import fov_mask, relative_error, ssim
from fanbeam.phantoms import mirror_image

__all__ = (
    "add_command",
    "calibrate_command",
    "calibrate_sweep",
    "load_bounds",
)

_PARAM_NAMES = ("alpha0", "r_D", "h_S", "h_D", "alpha_D")
_SWEEP_FIELDS = ("seed",) + _PARAM_NAMES + (
    "J", "mirrored", "generations", "converged", "rel_error", "ssim")


def load_bounds(path: Optional[str]):
    """
    Search box from JSON: either five [low, high] pairs in parameter
    order or an object keyed by alpha0, r_D, h_S, h_D and alpha_D. Keys
    left out keep their default interval.
    """
    if path is None:
        return settings.DE_BOUNDS
    data = read_json(path)
    if isinstance(data, dict):
        unknown = set(data) - set(_PARAM_NAMES)
        if unknown:
            raise ConfigError("{}: unknown key(s) {}".format(
                path, ", ".join(sorted(unknown))))
        pairs = [data.get(name, default)
                 for name, default in zip(_PARAM_NAMES, settings.DE_BOUNDS)]
    elif isinstance(data, list):
        pairs = data
    else:
        raise ConfigError("{}: expected a list or an object".format(path))
    if len(pairs) != len(_PARAM_NAMES):
        raise ConfigError("{}: need {} intervals, got {}".format(
            path, len(_PARAM_NAMES), len(pairs)))
    try:
        return tuple((float(lo), float(hi)) for lo, hi in pairs)
    except (TypeError, ValueError) as err:
        raise ConfigError("{}: {}".format(path, err))


def _de_options(args, config: Config, seed: Optional[int] = None):
    section = Config.CALIBRATION_SECTION
    return DeOptions(
        pop_size=resolve(args, "pop", config, section, "pop_size", int),
        mu=resolve(args, "mu", config, section),
        p_cross=resolve(args, "pc", config, section, "p_cross"),
        max_gen=resolve(args, "gens", config, section, "max_gen", int),
        conv_tol=resolve(args, "tol", config, section, "conv_tol"),
        seed=(seed if seed is not None
              else resolve(args, "seed", config, section, kind=int)),
        bounds=load_bounds(args.bounds),
    )


def _problem(args, config: Config) -> CalibProblem:
    sino = read_sinogram(args.sino)
    ref = read_image(args.ref)
    return CalibProblem(
        sino=sino,
        ref=ref,
        cfg=sinogram_scanner(sino, config),
        filter=filter_kind(args, config),
        handedness=Handedness(args.handedness),
    )


def calibrate_command(args):
    """
    Estimate the geometry of a calibration-phantom sinogram.
    """
    config = load_config(args)
    prob = _problem(args, config)
    opts = _de_options(args, config)
    report = calibrate(prob, opts, args.objective)

    outputs = Outputs("calibrate", args)
    geometry_path = outputs.path("geometry.json")
    save_geometry(geometry_path, prob.cfg, report.best_theta)
    outputs.add(geometry_path)
    logging.info("Estimated geometry written to %s.", geometry_path)
    outputs.report(
        seeds={"de": opts.seed},
        objective=args.objective,
        handedness=prob.handedness.value,
        options=opts.to_dict(),
        optimizer=report.to_dict(),
    )


def _evaluation(args, config: Config, n: int, fov: float):
    """ (log sinogram, its scanner, reference image, filter) or None """
    if args.log_sino is None:
        return None
    log_sino = read_sinogram(args.log_sino)
    kind = filter_kind(args, config)
    if args.reference is not None:
        return (log_sino, sinogram_scanner(log_sino, config),
                read_image(args.reference), kind)
    log_cfg, true_g = sinogram_geometry(log_sino, args, config)
    reference = fbp_reconstruct(log_sino, log_cfg, true_g, n, fov, kind)
    return log_sino, log_cfg, reference, kind


def calibrate_sweep(args):
    """
    Calibrate the same data once per seed and tabulate the estimates.
    With --log-sino every estimate is also scored by reconstructing that
    sinogram and comparing against --reference (default: its FBP at the
    geometry in its header).
    """
    config = load_config(args)
    prob = _problem(args, config)
    section = Config.RECONSTRUCTION_SECTION
    n = resolve(args, "n", config, section, kind=int)
    fov = resolve(args, "fov", config, section)
    evaluation = _evaluation(args, config, n, fov)
    opts = _de_options(args, config, seed=args.seeds[0])

    outputs = Outputs("calibrate-sweep", args)
    runs_dir = outputs.path("runs")
    os.makedirs(runs_dir, exist_ok=True)
    reports = calibration_sweep(prob, opts, args.seeds, args.objective)

    rows = []
    for report in reports:
        row: dict = {"seed": report.seed}
        row.update(zip(_PARAM_NAMES, (float(v) for v in report.best_x)))
        row.update(J=report.best_value, mirrored=report.mirrored,
                   generations=report.generations,
                   converged=report.converged)
        if evaluation is not None:
            log_sino, log_cfg, reference, kind = evaluation
            image = reconstruction_at(report, log_sino, log_cfg,
                                      reference.n, reference.fov, kind)
            if report.mirrored:
                image = mirror_image(image)
            row["rel_error"] = relative_error(image, reference,
                                              fov_mask(reference.n))
            row["ssim"] = ssim(image, reference)
            logging.info("Seed %s: rel_error %.4f, ssim %.4f", report.seed,
                         row["rel_error"], row["ssim"])
        geometry_path = os.path.join(runs_dir,
                                     "seed_{}.json".format(report.seed))
        save_geometry(geometry_path, prob.cfg, report.best_theta)
        outputs.add(geometry_path)
        rows.append(row)

    csv_path = outputs.path("sweep.csv")
    with open(csv_path, "w", newline="") as file_descriptor:
        writer = csv.DictWriter(file_descriptor, fieldnames=_SWEEP_FIELDS,
                                restval="")
        writer.writeheader()
        writer.writerows(rows)
    outputs.add(csv_path)
    outputs.report(
        seeds={"de": list(args.seeds)},
        objective=args.objective,
        options=opts.to_dict(),
        runs=[report.to_dict() for report in reports],
    )


def _calibration_args(cli_factory):
    cli_factory.add_arguments(
        ref=Arg(
            flags=("--ref",),
            type=existing_file,
            required=True,
            metavar="FILE",
            help="Reference image of the calibration phantom; its grid\n"
                 "is the reconstruction grid of the objective."
        ),
        bounds=Arg(
            flags=("--bounds",),
            type=existing_file,
            metavar="FILE",
            help="JSON search box: five [low, high] pairs or an object\n"
                 "keyed by parameter name."
        ),
        pop=Arg(
            flags=("--pop",),
            type=positive_int,
            help="Population size. Default: [calibration] pop_size."
        ),
        mu=Arg(
            flags=("--mu",),
            type=non_negative_float,
            help="Mutation factor. Default: [calibration] mu."
        ),
        pc=Arg(
            flags=("--pc",),
            type=fraction,
            help="Crossover probability. Default: [calibration] p_cross."
        ),
        gens=Arg(
            flags=("--gens",),
            type=int,
            help="Maximum number of generations. "
                 "Default: [calibration] max_gen."
        ),
        tol=Arg(
            flags=("--tol",),
            type=non_negative_float,
            help="Population convergence tolerance.\n"
                 "Default: [calibration] conv_tol."
        ),
        objective=Arg(
            flags=("--objective",),
            choices=sorted(OBJECTIVES),
            default="fbp",
            help="Compare in image space (fbp) or sinogram space (sino)."
        ),
        handedness=Arg(
            flags=("--handedness",),
            choices=Handedness.names(),
            default=Handedness.BOTH.value,
            help="Reference orientations to correlate against."
        ),
        seeds=Arg(
            flags=("--seeds",),
            type=int_list,
            default=(1, 2, 3, 4, 5),
            help="Comma separated seeds, one calibration each."
        ),
        log_sino=Arg(
            flags=("--log-sino",),
            type=existing_file,
            metavar="FILE",
            help="Sinogram reconstructed at every estimate for scoring."
        ),
    )


def add_command(cli_factory):
    """
    Create calibration commands and add them to the fanbeam CLI
    """
    add_common_arguments(cli_factory)
    _calibration_args(cli_factory)
    options = ["sino", "ref", "bounds", "pop", "mu", "pc", "gens", "tol",
               "seed", "objective", "handedness", "filter", "cutoff"]
    cli_factory.add_command(
        "calibrate", calibrate_command,
        "Estimate the unknown geometry from a calibration phantom scan.",
        ["out"] + options
    )
    cli_factory.add_command(
        "calibrate-sweep", calibrate_sweep,
        "Repeat the calibration for several seeds and tabulate them.",
        ["out"] + [opt for opt in options if opt != "seed"]
        + ["seeds", "log_sino", "reference", "geometry", "n", "fov"]
    )
