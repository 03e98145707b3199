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
Matrix-free fan-beam forward model, its adjoint and measurement helpers.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Sequence

import numba
import numpy as np
from scipy import sparse

from fanbeam import settings
from fanbeam.exceptions import InvalidArgumentError
from fanbeam.geometry import RaySet
from fanbeam.phantoms import ImageGrid
from fanbeam.projector.kernels import (
    adjoint_kernel,
    forward_kernel,
    trace_ray,
)

__all__ = (
    "Sinogram",
    "NoiseSpec",
    "ProjectionOperator",
    "line_integral",
    "forward_project",
    "adjoint_project",
    "intensities_to_sinogram",
    "sinogram_to_intensities",
    "add_noise",
    "subsample_angles",
    "system_matrix",
)

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class Sinogram:
    """
    K x M line-integral data, one row per angle. ``geometry`` is optional
    provenance (the flat geometry dict of the scan) carried through files.
    """
    values: np.ndarray
    angles: np.ndarray
    geometry: Optional[Dict[str, Any]] = field(default=None)

    def __post_init__(self):
        self.values = np.ascontiguousarray(self.values, dtype=np.float64)
        self.angles = np.asarray(self.angles, dtype=np.float64).ravel()
        if self.values.ndim != 2:
            raise InvalidArgumentError("sinogram values must be 2D")
        if self.angles.shape[0] != self.values.shape[0]:
            raise InvalidArgumentError(
                "{} angles for {} sinogram rows".format(
                    self.angles.shape[0], self.values.shape[0]))
        if not np.all(np.isfinite(self.values)):
            raise InvalidArgumentError("sinogram values must be finite")

    @property
    def k(self) -> int:
        return self.values.shape[0]

    @property
    def m(self) -> int:
        return self.values.shape[1]

    def copy(self, values=None) -> "Sinogram":
        return Sinogram(
            self.values.copy() if values is None else values,
            self.angles.copy(),
            None if self.geometry is None else dict(self.geometry),
        )


@dataclass(frozen=True)
class NoiseSpec:
    relative_level: float = settings.NOISE_LEVEL
    seed: int = settings.NOISE_SEED

    def __post_init__(self):
        if not (math.isfinite(self.relative_level)
                and self.relative_level >= 0):
            raise InvalidArgumentError(
                "relative_level must be >= 0, got {}".format(
                    self.relative_level))


def _check_rays(sino: Sinogram, rays: RaySet):
    if (sino.k, sino.m) != (rays.n_angles, rays.n_elements):
        raise InvalidArgumentError(
            "sinogram is {}x{} but the rays are {}x{}".format(
                sino.k, sino.m, rays.n_angles, rays.n_elements))


def line_integral(img: ImageGrid, p0: Sequence[float],
                  p1: Sequence[float]) -> float:
    """
    Exact sum of intersection length times cell value along p0 -> p1.
    """
    x0, y0 = float(p0[0]), float(p0[1])
    x1, y1 = float(p1[0]), float(p1[1])
    if x0 == x1 and y0 == y1:
        raise InvalidArgumentError("ray endpoints coincide")
    cells = np.empty(2 * img.n + 2, dtype=np.int64)
    lengths = np.empty(2 * img.n + 2, dtype=np.float64)
    count = trace_ray(x0, y0, x1, y1, img.n, float(img.fov), cells, lengths)
    flat = img.values.ravel()
    return float(np.dot(flat[cells[:count]], lengths[:count]))


def forward_project(img: ImageGrid, rays: RaySet) -> Sinogram:
    """ y[k, i] = line integral from source k to detector element (k, i) """
    values = forward_kernel(
        img.values.ravel(), img.n, float(img.fov),
        np.ascontiguousarray(rays.source_pos),
        np.ascontiguousarray(rays.det_centers),
    )
    return Sinogram(values, rays.angles.copy())


def adjoint_project(sino: Sinogram, rays: RaySet, n: int,
                    fov: float) -> ImageGrid:
    """ Exact transpose of forward_project """
    _check_rays(sino, rays)
    flat = adjoint_kernel(
        sino.values, n, float(fov),
        np.ascontiguousarray(rays.source_pos),
        np.ascontiguousarray(rays.det_centers),
        numba.get_num_threads(),
    )
    return ImageGrid(n, fov, flat.reshape(n, n))


def intensities_to_sinogram(intensities: np.ndarray, i0: float,
                            angles: Optional[np.ndarray] = None) -> Sinogram:
    """ Beer-Lambert log transform y = -ln(I / I0) """
    intensities = np.asarray(intensities, dtype=np.float64)
    if not i0 > 0:
        raise InvalidArgumentError("I0 must be positive, got {}".format(i0))
    if intensities.ndim != 2 or np.any(~(intensities > 0)):
        raise InvalidArgumentError("intensities must be a positive 2D array")
    if angles is None:
        angles = np.zeros(intensities.shape[0])
    return Sinogram(-np.log(intensities / i0), angles)


def sinogram_to_intensities(sino: Sinogram, i0: float) -> np.ndarray:
    """ I = I0 * exp(-y) """
    if not i0 > 0:
        raise InvalidArgumentError("I0 must be positive, got {}".format(i0))
    return i0 * np.exp(-sino.values)


def add_noise(sino: Sinogram, spec: NoiseSpec) -> Sinogram:
    """
    White Gaussian noise with sigma = relative_level * RMS(values).
    """
    if spec.relative_level == 0:
        return sino.copy()
    rms = math.sqrt(float(np.mean(sino.values ** 2)))
    rng = np.random.default_rng(spec.seed)
    noise = rng.standard_normal(sino.values.shape)
    logger.debug("Adding noise: level %s, sigma %.4g, seed %s",
                 spec.relative_level, spec.relative_level * rms, spec.seed)
    return sino.copy(sino.values + spec.relative_level * rms * noise)


def subsample_angles(sino: Sinogram, k: int) -> Sinogram:
    """ Keep every (K / k)-th row """
    if k < 1 or sino.k % k != 0:
        raise InvalidArgumentError(
            "cannot take {} of {} angles evenly".format(k, sino.k))
    step = sino.k // k
    return Sinogram(sino.values[::step].copy(), sino.angles[::step].copy(),
                    None if sino.geometry is None else dict(sino.geometry))


def system_matrix(rays: RaySet, n: int, fov: float) -> sparse.csr_matrix:
    """
    Explicit (K*M) x n^2 matrix of the forward model, for small grids.
    """
    if n > settings.SYSTEM_MATRIX_MAX_N:
        raise InvalidArgumentError(
            "explicit matrices are limited to n <= {}, got {}".format(
                settings.SYSTEM_MATRIX_MAX_N, n))
    cells = np.empty(2 * n + 2, dtype=np.int64)
    lengths = np.empty(2 * n + 2, dtype=np.float64)
    rows, cols, data = [], [], []
    n_det = rays.n_elements
    for k in range(rays.n_angles):
        sx, sy = rays.source_pos[k]
        for i in range(n_det):
            dx, dy = rays.det_centers[k, i]
            count = trace_ray(float(sx), float(sy), float(dx), float(dy),
                              n, float(fov), cells, lengths)
            rows.append(np.full(count, k * n_det + i))
            cols.append(cells[:count].copy())
            data.append(lengths[:count].copy())
    return sparse.csr_matrix(
        (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
        shape=(rays.n_angles * n_det, n * n),
    )


class ProjectionOperator:
    """
    A_theta bound to a ray set and an image grid; works on flat vectors.
    """

    def __init__(self, rays: RaySet, n: int, fov: float):
        self.rays = rays
        self.n = n
        self.fov = float(fov)
        self._norm = None

    @property
    def shape(self):
        return (self.rays.n_angles * self.rays.n_elements, self.n * self.n)

    def forward(self, x: np.ndarray) -> np.ndarray:
        """ flat image -> flat sinogram """
        img = ImageGrid(self.n, self.fov, np.reshape(x, (self.n, self.n)))
        return forward_project(img, self.rays).values.ravel()

    def adjoint(self, y: np.ndarray) -> np.ndarray:
        """ flat sinogram -> flat image """
        sino = Sinogram(
            np.reshape(y, (self.rays.n_angles, self.rays.n_elements)),
            self.rays.angles,
        )
        img = adjoint_project(sino, self.rays, self.n, self.fov)
        return img.values.ravel()

    def normal(self, x: np.ndarray) -> np.ndarray:
        return self.adjoint(self.forward(x))

    def norm_estimate(self, iterations: int = 30, seed: int = 0) -> float:
        """
        Estimate of ||A||_2 by power iteration on A^T A (cached).
        """
        if self._norm is not None:
            return self._norm
        rng = np.random.default_rng(seed)
        x = rng.random(self.n * self.n)
        x /= np.linalg.norm(x)
        eig = 0.0
        for _ in range(iterations):
            z = self.normal(x)
            eig = float(np.linalg.norm(z))
            if eig == 0.0:
                break
            x = z / eig
        self._norm = math.sqrt(eig)
        return self._norm
