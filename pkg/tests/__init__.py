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

import argparse

import numpy as np

from fanbeam import constants
from fanbeam.cli import CLIFactory, Parser, SubParser
from fanbeam.geometry import GeometryParams, ScannerConfig


def empty_cli_factory():
    return CLIFactory(Parser(
        prog=constants.FANBEAM_PROG_NAME, subparser=SubParser()
    ))


def arguments(**kwargs):
    return argparse.Namespace(**kwargs)


def small_scanner(n_angles=60, n_d=96, det_pixel=4.0, r_s=400.0):
    """ Scanner scaled down so the tests run on tiny grids """
    return ScannerConfig(r_s=r_s, n_d=n_d, det_pixel=det_pixel,
                         n_angles=n_angles)


def small_geometry(**changes):
    values = dict(alpha0=0.3, r_d=300.0, h_s=12.0, h_d=-6.0, alpha_d=0.05)
    values.update(changes)
    return GeometryParams(**values)


def ideal_geometry(r_d=300.0):
    return GeometryParams(alpha0=0.0, r_d=r_d, h_s=0.0, h_d=0.0, alpha_d=0.0)


def random_image(n, seed=0):
    return np.random.default_rng(seed).random((n, n))
