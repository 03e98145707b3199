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

Command: perturb-demo

Reconstructs one sinogram with deliberately wrong geometries to show the
artefacts each misspecified parameter causes:

    a   only alpha0 and r_D, every offset and the tilt zeroed
    b   as a, plus the source offset h_S
    c   as b, plus the detector offset h_D (tilt still zero)
    d   alpha0, r_D and the tilt, both offsets zeroed
    e   all parameters, r_D off by epsilon
    f   all parameters correct, the reference for the metrics
"""

import csv
import dataclasses
import logging
from typing import Dict, List

from fanbeam.cli import Arg
from fanbeam.cli.types import positive_float
from fanbeam.commands.common import (
    Outputs,
    add_common_arguments,
    filter_kind,
    load_config,
    resolve,
    sinogram_geometry,
)
from fanbeam.config import Config
from fanbeam.fbp import fbp_reconstruct
from fanbeam.geometry import GeometryParams
from fanbeam.io import read_sinogram
from fanbeam.metrics import fov_mask, relative_error, ssim

__all__ = (
    "add_command",
    "perturb_demo",
    "perturbed_geometries",
)

_CSV_FIELDS = ("case", "alpha0", "r_D", "h_S", "h_D", "alpha_D",
               "rel_error", "ssim")


def perturbed_geometries(g: GeometryParams,
                         epsilon: float) -> Dict[str, GeometryParams]:
    """ Geometries of the cases a to f, keyed by their letter """
    replace = dataclasses.replace
    return {
        "a": replace(g, h_s=0.0, h_d=0.0, alpha_d=0.0),
        "b": replace(g, h_d=0.0, alpha_d=0.0),
        "c": replace(g, alpha_d=0.0),
        "d": replace(g, h_s=0.0, h_d=0.0),
        "e": replace(g, r_d=g.r_d + epsilon),
        "f": g,
    }


def perturb_demo(args):
    """
    FBP of the sinogram for each case and a metrics table against case f.
    """
    config = load_config(args)
    section = Config.RECONSTRUCTION_SECTION
    n = resolve(args, "n", config, section, kind=int)
    fov = resolve(args, "fov", config, section)
    kind = filter_kind(args, config)
    sino = read_sinogram(args.sino)
    cfg, g = sinogram_geometry(sino, args, config)

    outputs = Outputs("perturb-demo", args)
    cases = perturbed_geometries(g, args.epsilon)
    images = {}
    for name, params in cases.items():
        logging.info("Case %s: %s", name, params.to_dict())
        images[name] = fbp_reconstruct(sino, cfg, params, n, fov, kind)
        outputs.raster("case_{}".format(name), images[name], pgm=args.pgm)

    reference = images["f"]
    mask = fov_mask(n, args.mask_fraction)
    rows: List[Dict] = []
    for name, params in cases.items():
        row = {"case": name}
        row.update(params.to_dict())
        row["rel_error"] = relative_error(images[name], reference, mask)
        row["ssim"] = ssim(images[name], reference)
        rows.append(row)
        logging.info("Case %s: rel_error %.4f, ssim %.4f", name,
                     row["rel_error"], row["ssim"])

    outputs.json("metrics.json", {"reference": "f", "cases": rows})
    csv_path = outputs.path("metrics.csv")
    with open(csv_path, "w", newline="") as file_descriptor:
        writer = csv.DictWriter(file_descriptor, fieldnames=_CSV_FIELDS)
        writer.writeheader()
        writer.writerows(rows)
    outputs.add(csv_path)
    outputs.report(epsilon_mm=args.epsilon, filter=kind.window.value)


def add_command(cli_factory):
    """
    Create perturb-demo command and add to the fanbeam CLI
    """
    add_common_arguments(cli_factory)
    cli_factory.add_arguments(epsilon=Arg(
        flags=("--epsilon",),
        type=positive_float,
        default=10.0,
        metavar="MM",
        help="Perturbation of r_D in case e. Default: 10"
    ))
    cli_factory.add_command(
        "perturb-demo", perturb_demo,
        "Reconstruct with misspecified geometries and compare.",
        ["out", "sino", "geometry", "n", "fov", "filter", "cutoff",
         "epsilon", "mask_fraction", "pgm"]
    )
