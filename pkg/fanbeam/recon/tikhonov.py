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
Tikhonov-regularized least squares by conjugate gradients on the normal
equations (A^T A + alpha I) x = A^T y.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import List

import numpy as np

from fanbeam import settings
from fanbeam.exceptions import InvalidArgumentError
from fanbeam.geometry import RaySet
from fanbeam.phantoms import ImageGrid
from fanbeam.projector import ProjectionOperator, Sinogram

__all__ = (
    "TikhonovOptions",
    "TikhonovReport",
    "tikhonov_reconstruct",
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TikhonovOptions:
    alpha: float = settings.TIKHONOV_ALPHA
    max_iter: int = settings.TIKHONOV_MAX_ITER
    tol: float = settings.TIKHONOV_TOL

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise InvalidArgumentError(
                "alpha must be positive, got {}".format(self.alpha))
        if not self.tol > 0:
            raise InvalidArgumentError(
                "tol must be positive, got {}".format(self.tol))
        if self.max_iter < 1:
            raise InvalidArgumentError("max_iter must be >= 1")


@dataclass(eq=False)
class TikhonovReport:
    image: ImageGrid
    converged: bool
    iterations: int
    residual: float
    residuals: List[float] = field(default_factory=list)

    def to_dict(self):
        return {
            "method": "tikhonov",
            "converged": self.converged,
            "iterations": self.iterations,
            "residual": self.residual,
        }


def tikhonov_reconstruct(sino: Sinogram, rays: RaySet, n: int, fov: float,
                         opts: TikhonovOptions = None) -> TikhonovReport:
    """
    Minimizer of ||A x - y||^2 + alpha ||x||^2. Stops when the relative
    normal-equation residual ||A^T(Ax - y) + alpha x|| / ||A^T y|| <= tol;
    otherwise returns the iterate with the smallest residual.
    """
    opts = opts or TikhonovOptions()
    operator = ProjectionOperator(rays, n, fov)
    if (sino.k, sino.m) != (rays.n_angles, rays.n_elements):
        raise InvalidArgumentError("sinogram does not match the rays")

    rhs = operator.adjoint(sino.values.ravel())
    rhs_norm = float(np.linalg.norm(rhs))
    x = np.zeros(n * n)
    if rhs_norm == 0.0:
        return TikhonovReport(ImageGrid(n, fov, x.reshape(n, n)), True, 0,
                              0.0, [0.0])

    r = rhs.copy()
    p = r.copy()
    rs_old = float(np.dot(r, r))
    best_x, best_res = x.copy(), 1.0
    residuals = [1.0]
    converged = False
    iteration = 0
    for iteration in range(1, opts.max_iter + 1):
        ap = operator.normal(p) + opts.alpha * p
        curvature = float(np.dot(p, ap))
        if curvature <= 0.0:
            logger.warning("CG lost positive curvature at iteration %s.",
                           iteration)
            break
        step = rs_old / curvature
        x += step * p
        r -= step * ap
        rs_new = float(np.dot(r, r))
        res = math.sqrt(rs_new) / rhs_norm
        residuals.append(res)
        if res < best_res:
            best_x, best_res = x.copy(), res
        logger.debug("CG iteration %s: relative residual %.3e", iteration, res)
        if res <= opts.tol:
            converged = True
            break
        p = r + (rs_new / rs_old) * p
        rs_old = rs_new

    if not converged:
        logger.warning("Tikhonov CG did not reach tol %.1e in %s iterations "
                       "(residual %.3e).", opts.tol, iteration, best_res)
    return TikhonovReport(ImageGrid(n, fov, best_x.reshape(n, n)), converged,
                          iteration, best_res, residuals)
