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

import json
import os
import sys

import mock
import pytest

from fanbeam.geometry import save_geometry
from fanbeam.main import main
from tests import small_geometry, small_scanner

CONFIG = """\
[reconstruction]
n = 24
fov = 80
max_iter = 3

[calibration]
pop_size = 5
max_gen = 1
"""

L_SPEC = {"arm_length": 50.0, "arm_width": 15.0}

NEAR_TRUTH = {
    "alpha0": [0.25, 0.35],
    "r_D": [290.0, 310.0],
    "h_S": [10.0, 14.0],
    "h_D": [-8.0, -4.0],
    "alpha_D": [0.03, 0.07],
}


def run_fanbeam(*argv):
    """ Run the CLI and return its exit status """
    with mock.patch.object(sys, "argv", ["fanbeam"] + [str(a) for a in argv]):
        with pytest.raises(SystemExit) as exit_info:
            main()
    return exit_info.value.code


def workspace(tmp):
    """ Config, geometry, phantom spec and bounds files for a tiny scan """
    tmp.write("fanbeam.cfg", CONFIG.encode("ascii"))
    tmp.write("spec.json", json.dumps(L_SPEC).encode("ascii"))
    tmp.write("bounds.json", json.dumps(NEAR_TRUTH).encode("ascii"))
    save_geometry(tmp.getpath("geometry.json"),
                  small_scanner(n_angles=30, n_d=48), small_geometry())
    return {
        "config": tmp.getpath("fanbeam.cfg"),
        "spec": tmp.getpath("spec.json"),
        "bounds": tmp.getpath("bounds.json"),
        "geometry": tmp.getpath("geometry.json"),
    }


def simulate(tmp, out="sim", *extra):
    """ Simulate the L phantom into ``out`` and return the directory """
    files = workspace(tmp)
    directory = tmp.getpath(out)
    status = run_fanbeam(
        "-c", files["config"], "simulate", "-o", directory,
        "--geometry", files["geometry"], "--spec", files["spec"],
        "--fine-n", 48, "--coarse-n", 24, "--fov", 80, *extra
    )
    assert status == 0
    return directory


def read_report(directory):
    with open(os.path.join(directory, "report.json")) as file_descriptor:
        return json.load(file_descriptor)
