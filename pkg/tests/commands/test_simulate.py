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

import numpy as np
from testfixtures import TempDirectory

from fanbeam import __version__
from fanbeam.io import read_image, read_raster, read_sinogram
from tests.commands import read_report, run_fanbeam, simulate, workspace


def test_simulate():
    with TempDirectory() as tmp:
        directory = simulate(tmp, "sim", "--noise", 0.01, "--seed", 2,
                             "--intensities", 1000, "--pgm")
        sino = read_sinogram(os.path.join(directory, "sinogram"))
        assert sino.values.shape == (30, 48)
        assert sino.geometry["n_D"] == 48
        assert sino.geometry["h_S"] == 12.0
        assert read_image(os.path.join(directory, "truth")).n == 24
        assert read_image(os.path.join(directory, "truth_fine")).n == 48
        intensities = read_raster(os.path.join(directory, "intensities"))
        assert np.allclose(intensities.values, 1000 * np.exp(-sino.values))
        assert os.path.isfile(os.path.join(directory, "truth.pgm"))

        report = read_report(directory)
        assert report["command"] == "simulate"
        assert report["version"] == __version__
        assert report["seeds"] == {"noise": 2}
        assert report["arguments"]["noise"] == 0.01
        assert os.path.join(directory, "sinogram.bin") in report["outputs"]
        with open(os.path.join(directory, "provenance.json")) as handle:
            provenance = json.load(handle)
        assert provenance["noise_level"] == 0.01
        assert provenance["geometry"] == sino.geometry


def test_simulate_is_reproducible():
    with TempDirectory() as tmp:
        first = simulate(tmp, "first", "--seed", 5)
        second = simulate(tmp, "second", "--seed", 5)
        other = simulate(tmp, "other", "--seed", 6)
        payloads = [
            open(os.path.join(path, "sinogram.bin"), "rb").read()
            for path in (first, second, other)
        ]
    assert payloads[0] == payloads[1]
    assert payloads[0] != payloads[2]


def test_simulate_phantom():
    with TempDirectory() as tmp:
        files = workspace(tmp)
        status = run_fanbeam("-c", files["config"], "simulate-phantom",
                             "-o", tmp.getpath("ph"), "--spec",
                             files["spec"], "--n", 32)
        assert status == 0
        img = read_image(tmp.getpath("ph/phantom"))
        assert img.n == 32
        assert img.fov == 80.0
        assert img.values.max() > 0


def test_simulate_rejects_oversized_phantom():
    with TempDirectory() as tmp:
        files = workspace(tmp)
        status = run_fanbeam("-c", files["config"], "simulate-phantom",
                             "-o", tmp.getpath("ph"), "--phantom", "l")
        assert status == 1


def test_project():
    with TempDirectory() as tmp:
        files = workspace(tmp)
        directory = simulate(tmp, "sim", "--noise", 0)
        status = run_fanbeam(
            "project", "-o", tmp.getpath("proj"),
            "--image", os.path.join(directory, "truth_fine"),
            "--geometry", files["geometry"])
        assert status == 0
        projected = read_sinogram(tmp.getpath("proj/sinogram"))
        simulated = read_sinogram(os.path.join(directory, "sinogram"))
        assert np.array_equal(projected.values, simulated.values)
        assert read_report(tmp.getpath("proj"))["command"] == "project"
