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
MAP estimation with the first-order isotropic Cauchy difference prior.

F(x) = ||A x - y||^2 / (2 sigma^2)
       + 3/2 sum_{i, j < N-1} log(beta^2 + (x[i+1, j] - x[i, j])^2
                                         + (x[i, j+1] - x[i, j])^2)

sigma is the noise standard deviation of the data. map_reconstruct takes it
as a level relative to the RMS of the sinogram, the way noise is simulated.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import List

import numpy as np

from fanbeam import settings
from fanbeam.exceptions import InvalidArgumentError
from fanbeam.fbp import FilterKind, Window, fbp_from_rays
from fanbeam.geometry import RaySet
from fanbeam.phantoms import ImageGrid
from fanbeam.projector import ProjectionOperator, Sinogram
from fanbeam.recon.lbfgs import lbfgs_minimize

__all__ = (
    "CauchyMapOptions",
    "MapReport",
    "cauchy_prior",
    "cauchy_prior_gradient",
    "cauchy_neg_log_posterior",
    "cauchy_gradient",
    "map_reconstruct",
    "noise_sigma",
)

logger = logging.getLogger(__name__)

INITIALIZERS = ("zeros", "fbp")


@dataclass(frozen=True)
class CauchyMapOptions:
    beta: float = settings.CAUCHY_BETA
    max_iter: int = settings.CAUCHY_MAX_ITER
    grad_tol: float = settings.CAUCHY_GRAD_TOL
    memory: int = settings.CAUCHY_MEMORY
    init: str = settings.CAUCHY_INIT
    noise: float = settings.CAUCHY_NOISE

    def __post_init__(self):
        if not (math.isfinite(self.beta) and self.beta > 0):
            raise InvalidArgumentError(
                "beta must be positive, got {}".format(self.beta))
        if self.memory < 1:
            raise InvalidArgumentError("memory must be >= 1")
        if self.max_iter < 0 or not self.grad_tol > 0:
            raise InvalidArgumentError("need max_iter >= 0 and grad_tol > 0")
        if not (math.isfinite(self.noise) and self.noise > 0):
            raise InvalidArgumentError(
                "noise must be positive, got {}".format(self.noise))
        if self.init not in INITIALIZERS:
            raise InvalidArgumentError("init must be one of {}".format(
                ", ".join(INITIALIZERS)))


@dataclass(eq=False)
class MapReport:
    image: ImageGrid
    value: float
    initial_value: float
    converged: bool
    iterations: int
    grad_norm: float
    message: str
    sigma: float
    history: List[float] = field(default_factory=list)

    def to_dict(self):
        return {
            "method": "map",
            "value": self.value,
            "initial_value": self.initial_value,
            "converged": self.converged,
            "iterations": self.iterations,
            "grad_norm": self.grad_norm,
            "message": self.message,
            "sigma": self.sigma,
        }


def _differences(x: np.ndarray):
    base = x[:-1, :-1]
    return x[1:, :-1] - base, x[:-1, 1:] - base


def cauchy_prior(x: np.ndarray, beta: float) -> float:
    """ Prior part of the negative log posterior """
    down, right = _differences(np.asarray(x))
    return 1.5 * float(np.sum(np.log(beta * beta + down ** 2 + right ** 2)))


def cauchy_prior_gradient(x: np.ndarray, beta: float) -> np.ndarray:
    down, right = _differences(np.asarray(x))
    weight = 3.0 / (beta * beta + down ** 2 + right ** 2)
    wd, wr = weight * down, weight * right
    grad = np.zeros(np.shape(x))
    grad[:-1, :-1] -= wd + wr
    grad[1:, :-1] += wd
    grad[:-1, 1:] += wr
    return grad


def _objective(operator: ProjectionOperator, data: np.ndarray, beta: float,
               sigma: float):
    n = operator.n
    weight = 1.0 / (sigma * sigma)

    def fun_and_grad(flat: np.ndarray):
        residual = operator.forward(flat) - data
        image = flat.reshape(n, n)
        value = 0.5 * weight * float(np.dot(residual, residual)) \
            + cauchy_prior(image, beta)
        grad = weight * operator.adjoint(residual) \
            + cauchy_prior_gradient(image, beta).ravel()
        return value, grad

    return fun_and_grad


def _check(sino: Sinogram, rays: RaySet, beta: float, sigma: float):
    if not (beta > 0 and sigma > 0):
        raise InvalidArgumentError("beta and sigma must be positive")
    if (sino.k, sino.m) != (rays.n_angles, rays.n_elements):
        raise InvalidArgumentError("sinogram does not match the rays")


def cauchy_neg_log_posterior(x: ImageGrid, sino: Sinogram, rays: RaySet,
                             beta: float, sigma: float = 1.0) -> float:
    _check(sino, rays, beta, sigma)
    operator = ProjectionOperator(rays, x.n, x.fov)
    value, _ = _objective(operator, sino.values.ravel(), beta, sigma)(
        x.values.ravel())
    return value


def cauchy_gradient(x: ImageGrid, sino: Sinogram, rays: RaySet,
                    beta: float, sigma: float = 1.0) -> ImageGrid:
    """ A^T(Ax - y) / sigma^2 plus the chain-rule prior term """
    _check(sino, rays, beta, sigma)
    operator = ProjectionOperator(rays, x.n, x.fov)
    _, grad = _objective(operator, sino.values.ravel(), beta, sigma)(
        x.values.ravel())
    return ImageGrid(x.n, x.fov, grad.reshape(x.n, x.n))


def noise_sigma(sino: Sinogram, noise: float) -> float:
    """ Absolute noise level: ``noise`` times the RMS of the data """
    rms = float(np.sqrt(np.mean(np.square(sino.values))))
    return noise * rms if rms > 0 else noise


def _initial_image(sino: Sinogram, rays: RaySet, n: int, fov: float,
                   opts: CauchyMapOptions) -> np.ndarray:
    if opts.init == "zeros":
        return np.zeros(n * n)
    start = fbp_from_rays(sino, rays, n, fov, FilterKind(Window.HANN))
    return np.maximum(start.values, 0.0).ravel()


def map_reconstruct(sino: Sinogram, rays: RaySet, n: int, fov: float,
                    opts: CauchyMapOptions = None) -> MapReport:
    """
    Unconstrained L-BFGS minimization of the negative log posterior.
    """
    opts = opts or CauchyMapOptions()
    if (sino.k, sino.m) != (rays.n_angles, rays.n_elements):
        raise InvalidArgumentError("sinogram does not match the rays")
    sigma = noise_sigma(sino, opts.noise)
    operator = ProjectionOperator(rays, n, fov)
    fun_and_grad = _objective(operator, sino.values.ravel(), opts.beta,
                              sigma)
    x0 = _initial_image(sino, rays, n, fov, opts)
    result = lbfgs_minimize(
        fun_and_grad, x0,
        memory=opts.memory, max_iter=opts.max_iter, grad_tol=opts.grad_tol,
    )
    logger.info("MAP finished after %s iterations: F %.6g -> %.6g (%s).",
                result.iterations, result.history[0], result.fun,
                result.message)
    return MapReport(
        image=ImageGrid(n, fov, result.x.reshape(n, n)),
        value=result.fun,
        initial_value=result.history[0],
        converged=result.converged,
        iterations=result.iterations,
        grad_norm=result.grad_norm,
        message=result.message,
        sigma=sigma,
        history=result.history,
    )
