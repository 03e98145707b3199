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
Calibration objectives and the calibration driver.
"""
import logging
from typing import Callable, Dict, Iterable, List, Tuple, Union

import numpy as np

from fanbeam.calib.de import DeOptions, OptimizerReport, de_minimize
from fanbeam.calib.problem import CalibProblem, Handedness
from fanbeam.exceptions import InvalidArgumentError
from fanbeam.fbp import fbp_reconstruct
from fanbeam.geometry import GeometryParams, ray_set
from fanbeam.phantoms import ImageGrid
from fanbeam.projector import forward_project

__all__ = (
    "correlations",
    "objective_J",
    "objective_J_sino",
    "OBJECTIVES",
    "calibrate",
    "calibration_sweep",
    "reconstruction_at",
)

logger = logging.getLogger(__name__)

Theta = Union[GeometryParams, np.ndarray]


def _params(theta: Theta) -> GeometryParams:
    if isinstance(theta, GeometryParams):
        return theta
    return GeometryParams.from_vector(theta)


def _pick(direct: float, mirrored: float, handedness: Handedness) -> float:
    if handedness is Handedness.DIRECT:
        return direct
    if handedness is Handedness.MIRRORED:
        return mirrored
    return max(direct, mirrored)


def _fbp_correlations(g: GeometryParams,
                      prob: CalibProblem) -> Tuple[float, float]:
    image = fbp_reconstruct(prob.sino, prob.cfg, g, prob.recon_n, prob.fov,
                            prob.filter).values
    return (float(np.sum(prob.ref.values * image)),
            float(np.sum(prob.ref_mirror.values * image)))


def _sino_correlations(g: GeometryParams,
                       prob: CalibProblem) -> Tuple[float, float]:
    rays = ray_set(prob.cfg, g)
    data = prob.sino.values.ravel()
    direct = forward_project(prob.ref, rays).values.ravel()
    mirrored = forward_project(prob.ref_mirror, rays).values.ravel()
    return float(np.dot(direct, data)), float(np.dot(mirrored, data))


def correlations(theta: Theta, prob: CalibProblem,
                 objective: str = "fbp") -> Tuple[float, float]:
    """ (direct, mirrored) inner products used by the objectives """
    try:
        compute = _CORRELATIONS[objective]
    except KeyError:
        raise InvalidArgumentError("unknown objective {!r}".format(objective))
    return compute(_params(theta), prob)


def objective_J(theta: Theta, prob: CalibProblem) -> float:
    """
    -max(<X_ref, FBP(theta; y)>, <mirror(X_ref), FBP(theta; y)>), Frobenius
    inner products without normalisation.
    """
    direct, mirrored = _fbp_correlations(_params(theta), prob)
    return -_pick(direct, mirrored, prob.handedness)


def objective_J_sino(theta: Theta, prob: CalibProblem) -> float:
    """
    -max((A_theta x_ref)^T y, (A_theta mirror(x_ref))^T y)
    """
    direct, mirrored = _sino_correlations(_params(theta), prob)
    return -_pick(direct, mirrored, prob.handedness)


_CORRELATIONS = {
    "fbp": _fbp_correlations,
    "sino": _sino_correlations,
}

OBJECTIVES: Dict[str, Callable[[Theta, CalibProblem], float]] = {
    "fbp": objective_J,
    "sino": objective_J_sino,
}


def calibrate(prob: CalibProblem, opts: DeOptions = None,
              objective: str = "fbp",
              map_fn: Callable = map) -> OptimizerReport:
    """
    Estimate the five geometry parameters by minimizing the objective
    with differential evolution.
    """
    opts = opts or DeOptions()
    if opts.dim != 5:
        raise InvalidArgumentError(
            "calibration needs 5 bounds, got {}".format(opts.dim))
    if opts.bounds[1][0] <= 0:
        raise InvalidArgumentError("the r_D search interval must be positive")
    try:
        func = OBJECTIVES[objective]
    except KeyError:
        raise InvalidArgumentError("unknown objective {!r}".format(objective))

    logger.info("Calibrating with objective %s, population %s, seed %s.",
                objective, opts.pop_size, opts.seed)
    report = de_minimize(lambda theta: func(theta, prob), opts, map_fn=map_fn)
    direct, mirrored = correlations(report.best_x, prob, objective)
    if prob.handedness is Handedness.BOTH:
        report.mirrored = mirrored > direct
    else:
        report.mirrored = prob.handedness is Handedness.MIRRORED
    logger.info("Calibration finished after %s generations: J = %.6g, "
                "theta = %s, mirrored = %s.", report.generations,
                report.best_value, np.array2string(report.best_x,
                                                   precision=4),
                report.mirrored)
    return report


def calibration_sweep(prob: CalibProblem, opts: DeOptions,
                      seeds: Iterable[int],
                      objective: str = "fbp") -> List[OptimizerReport]:
    """ Repeated calibrations of the same data, one per seed """
    reports = []
    for seed in seeds:
        run_opts = DeOptions(
            pop_size=opts.pop_size, mu=opts.mu, p_cross=opts.p_cross,
            max_gen=opts.max_gen, conv_tol=opts.conv_tol, seed=seed,
            bounds=opts.bounds,
        )
        reports.append(calibrate(prob, run_opts, objective))
    return reports


def reconstruction_at(report: OptimizerReport, sino, cfg, n: int, fov: float,
                      kind=None) -> ImageGrid:
    """ FBP of ``sino`` at the calibrated geometry of ``report`` """
    return fbp_reconstruct(sino, cfg, report.best_theta, n, fov, kind)
