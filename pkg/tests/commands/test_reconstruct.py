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

import csv
import os

import numpy as np
from testfixtures import TempDirectory

from fanbeam.io import read_image, write_raster
from fanbeam.projector import Sinogram
from tests.commands import (
    CONFIG,
    read_report,
    run_fanbeam,
    simulate,
    workspace,
)


def test_reconstruct_fbp_with_reference():
    with TempDirectory() as tmp:
        files = workspace(tmp)
        directory = simulate(tmp, "sim", "--noise", 0)
        status = run_fanbeam(
            "-c", files["config"], "reconstruct", "-o", tmp.getpath("rec"),
            "--sino", os.path.join(directory, "sinogram"),
            "--reference", os.path.join(directory, "truth"), "--pgm")
        assert status == 0
        image = read_image(tmp.getpath("rec/reconstruction"))
        assert image.n == 24
        report = read_report(tmp.getpath("rec"))
        assert report["solver"]["method"] == "fbp"
        assert report["solver"]["filter"] == "hann"
        assert report["n_angles"] == 30
        assert 0.0 <= report["metrics"]["rel_error"] < 1.0
        assert os.path.isfile(tmp.getpath("rec/reconstruction.pgm"))


def test_reconstruct_iterative_on_subset():
    with TempDirectory() as tmp:
        files = workspace(tmp)
        directory = simulate(tmp)
        for method in ("tikhonov", "map"):
            out = tmp.getpath(method)
            status = run_fanbeam(
                "-c", files["config"], "reconstruct", "-o", out,
                "--sino", os.path.join(directory, "sinogram"),
                "--method", method, "--angles", 15, "--max-iter", 2)
            assert status == 0
            report = read_report(out)
            assert report["n_angles"] == 15
            assert report["solver"]["method"] == method
            assert report["solver"]["iterations"] <= 2
            assert "metrics" not in report


def test_reconstruct_solver_settings_from_config():
    with TempDirectory() as tmp:
        directory = simulate(tmp)
        config = tmp.write("solver.cfg", CONFIG.replace(
            "max_iter = 3\n",
            "max_iter = 3\ntikhonov_tol = 0.25\ngrad_tol = 0.125\n"
            "noise = 0.05\n").encode("ascii"))
        sino = os.path.join(directory, "sinogram")
        for method, extra in (("tikhonov", ()), ("map", ()),
                              ("map", ("--tol", 0.5, "--data-noise", 0.1))):
            out = tmp.getpath("rec")
            status = run_fanbeam("-c", config, "reconstruct", "-o", out,
                                 "--sino", sino, "--method", method, *extra)
            assert status == 0
            solver = read_report(out)["solver"]
            if method == "tikhonov":
                assert solver["tol"] == 0.25
            elif extra:
                assert solver["grad_tol"] == 0.5
                assert solver["noise"] == 0.1
            else:
                assert solver["grad_tol"] == 0.125
                assert solver["noise"] == 0.05


def test_reconstruct_needs_a_geometry():
    with TempDirectory() as tmp:
        files = workspace(tmp)
        write_raster(tmp.getpath("bare"),
                     Sinogram(np.ones((30, 48)), np.zeros(30)))
        status = run_fanbeam(
            "-c", files["config"], "reconstruct", "-o", tmp.getpath("rec"),
            "--sino", tmp.getpath("bare"))
        assert status == 1
        status = run_fanbeam(
            "-c", files["config"], "reconstruct", "-o", tmp.getpath("rec"),
            "--sino", tmp.getpath("bare"), "--geometry", files["geometry"])
        assert status == 0


def test_reconstruct_rejects_uneven_subset():
    with TempDirectory() as tmp:
        files = workspace(tmp)
        directory = simulate(tmp)
        status = run_fanbeam(
            "-c", files["config"], "reconstruct", "-o", tmp.getpath("rec"),
            "--sino", os.path.join(directory, "sinogram"), "--angles", 7)
        assert status == 1


def test_compare_methods():
    with TempDirectory() as tmp:
        files = workspace(tmp)
        directory = simulate(tmp)
        out = tmp.getpath("cmp")
        status = run_fanbeam(
            "-c", files["config"], "compare-methods", "-o", out,
            "--sino", os.path.join(directory, "sinogram"),
            "--reference", os.path.join(directory, "truth"),
            "--angle-counts", "30,10", "--methods", "fbp,map")
        assert status == 0
        with open(os.path.join(out, "metrics.csv")) as handle:
            rows = list(csv.DictReader(handle))
        assert [(row["method"], row["n_angles"]) for row in rows] == [
            ("fbp", "30"), ("map", "30"), ("fbp", "10"), ("map", "10")]
        assert read_image(os.path.join(out, "map_10")).n == 24
        report = read_report(out)
        assert [solver["n_angles"] for solver in report["solvers"]] == \
            [30, 30, 10, 10]


def test_compare_methods_needs_reference():
    with TempDirectory() as tmp:
        files = workspace(tmp)
        directory = simulate(tmp)
        status = run_fanbeam(
            "-c", files["config"], "compare-methods", "-o",
            tmp.getpath("cmp"),
            "--sino", os.path.join(directory, "sinogram"))
        assert status == 1


def test_perturb_demo():
    with TempDirectory() as tmp:
        files = workspace(tmp)
        directory = simulate(tmp, "sim", "--noise", 0)
        out = tmp.getpath("perturb")
        status = run_fanbeam(
            "-c", files["config"], "perturb-demo", "-o", out,
            "--sino", os.path.join(directory, "sinogram"))
        assert status == 0
        with open(os.path.join(out, "metrics.csv")) as handle:
            rows = {row["case"]: row for row in csv.DictReader(handle)}
        assert sorted(rows) == ["a", "b", "c", "d", "e", "f"]
        assert float(rows["f"]["rel_error"]) == 0.0
        assert float(rows["f"]["ssim"]) == 1.0
        assert float(rows["a"]["rel_error"]) > 0.0
        assert float(rows["e"]["r_D"]) == 310.0
        assert float(rows["a"]["h_S"]) == 0.0
        assert read_image(os.path.join(out, "case_f")).n == 24
        assert read_report(out)["epsilon_mm"] == 10.0
