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
Fan-beam filtered backprojection.

The ramp filter is built from the band-limited spatial kernel
h[0] = 1 / (4 tau^2), h[odd j] = -1 / (pi j tau)^2, h[even j] = 0 sampled at
the detector pitch tau, so an impulse row filters to exactly tau * h. Windows
are applied on top of it over the normalised frequency omega = |f| / f_c,
f_c = cutoff * Nyquist, and vanish for omega > 1.
"""
import enum
import logging
import math
from dataclasses import dataclass

import numba
import numpy as np
from scipy import fft

from fanbeam import settings
from fanbeam.exceptions import InvalidArgumentError
from fanbeam.geometry import GeometryParams, RaySet, ScannerConfig, ray_set
from fanbeam.phantoms import ImageGrid
from fanbeam.projector import Sinogram
from fanbeam.projector.kernels import backproject_kernel

__all__ = (
    "Window",
    "FilterKind",
    "ramp_kernel",
    "filter_response",
    "filter_sinogram",
    "fbp_reconstruct",
    "fbp_from_rays",
)

logger = logging.getLogger(__name__)


class Window(enum.Enum):
    RAMLAK = "ramlak"
    SHEPPLOGAN = "shepplogan"
    COSINE = "cosine"
    HAMMING = "hamming"
    HANN = "hann"

    @classmethod
    def names(cls):
        return [item.value for item in cls]


@dataclass(frozen=True)
class FilterKind:
    """ Filter window and cutoff as a fraction of Nyquist """
    window: Window = Window(settings.FILTER)
    cutoff: float = settings.FILTER_CUTOFF

    def __post_init__(self):
        if isinstance(self.window, str):
            try:
                object.__setattr__(self, "window", Window(self.window.lower()))
            except ValueError:
                raise InvalidArgumentError(
                    "unknown filter {!r}, expected one of {}".format(
                        self.window, ", ".join(Window.names())))
        if not 0 < self.cutoff <= 1:
            raise InvalidArgumentError(
                "cutoff must lie in (0, 1], got {}".format(self.cutoff))


def _padded_length(m: int) -> int:
    return 1 << int(math.ceil(math.log2(2 * m)))


def ramp_kernel(size: int, det_pixel: float) -> np.ndarray:
    """
    Discrete ramp kernel h on a circular grid of ``size`` samples (lags
    beyond size/2 wrap to negative).
    """
    index = np.arange(size)
    lag = np.where(index < size // 2 + 1, index, index - size)
    kernel = np.zeros(size)
    odd = lag % 2 == 1
    kernel[odd] = -1.0 / (math.pi * lag[odd] * det_pixel) ** 2
    kernel[0] = 1.0 / (4.0 * det_pixel ** 2)
    return kernel


def _window(kind: FilterKind, freq: np.ndarray) -> np.ndarray:
    omega = np.abs(freq) / (0.5 * kind.cutoff)
    if kind.window is Window.RAMLAK:
        weights = np.ones_like(omega)
    elif kind.window is Window.SHEPPLOGAN:
        weights = np.sinc(omega / 2)
    elif kind.window is Window.COSINE:
        weights = np.cos(0.5 * math.pi * omega)
    elif kind.window is Window.HAMMING:
        weights = 0.54 + 0.46 * np.cos(math.pi * omega)
    else:
        weights = 0.5 * (1.0 + np.cos(math.pi * omega))
    return np.where(omega <= 1.0, weights, 0.0)


def filter_response(size: int, kind: FilterKind,
                    det_pixel: float) -> np.ndarray:
    """ Frequency response tau * FFT(h) * W on ``size`` FFT bins """
    ramp = det_pixel * np.real(fft.fft(ramp_kernel(size, det_pixel)))
    return ramp * _window(kind, fft.fftfreq(size))


def filter_sinogram(sino: Sinogram, kind: FilterKind,
                    det_pixel: float) -> Sinogram:
    """
    Zero-pad every row to the next power of two >= 2m, multiply by the
    filter response and truncate back to m samples.
    """
    if sino.m < 2:
        raise InvalidArgumentError("need at least 2 detector elements")
    size = _padded_length(sino.m)
    response = filter_response(size, kind, det_pixel)
    workers = numba.get_num_threads()
    spectrum = fft.fft(sino.values, n=size, axis=1, workers=workers)
    filtered = fft.ifft(spectrum * response, axis=1, workers=workers)
    return Sinogram(np.real(filtered[:, :sino.m]), sino.angles.copy(),
                    sino.geometry)


def fbp_from_rays(sino: Sinogram, rays: RaySet, n: int, fov: float,
                  kind: FilterKind = None) -> ImageGrid:
    """
    FBP for an explicit ray set. The cos-gamma pre-weight and the U^-2
    backprojection weight use the on-axis distances r_S and r_S + r_D of
    the first angle, the detector coordinate uses the exact rays.
    """
    kind = kind or FilterKind()
    if (sino.k, sino.m) != (rays.n_angles, rays.n_elements):
        raise InvalidArgumentError(
            "sinogram is {}x{} but the geometry expects {}x{}".format(
                sino.k, sino.m, rays.n_angles, rays.n_elements))
    angles = rays.angles
    e_r = np.stack((np.cos(angles), np.sin(angles)), axis=1)
    r_s = -float(np.dot(rays.source_pos[0], e_r[0]))
    r_d = float(np.dot(rays.det_mid[0], e_r[0]))
    distance = r_s + r_d
    det_pixel = rays.det_pixel

    offsets = (np.arange(sino.m) - 0.5 * (sino.m - 1)) * det_pixel
    weights = distance / np.sqrt(distance ** 2 + offsets ** 2)
    weighted = Sinogram(sino.values * weights[None, :], sino.angles)
    filtered = filter_sinogram(weighted, kind, det_pixel)

    step = rays.angular_step or 2.0 * math.pi / sino.k
    values = backproject_kernel(
        filtered.values, n, float(fov),
        np.ascontiguousarray(rays.source_pos),
        np.ascontiguousarray(rays.det_mid),
        np.ascontiguousarray(rays.det_axis),
        e_r, det_pixel, r_s, distance, 0.5 * step,
    )
    if not np.all(np.isfinite(values)):
        logger.warning("FBP produced non-finite pixels, clamping them.")
        values = np.nan_to_num(values, nan=0.0, posinf=0.0, neginf=0.0)
    return ImageGrid(n, fov, values)


def fbp_reconstruct(sino: Sinogram, cfg: ScannerConfig, g: GeometryParams,
                    n: int, fov: float, kind: FilterKind = None) -> ImageGrid:
    """ FBP(theta; y) """
    if (sino.k, sino.m) != (cfg.n_angles, cfg.n_d):
        raise InvalidArgumentError(
            "sinogram is {}x{} but the scanner has {} angles and {} "
            "elements".format(sino.k, sino.m, cfg.n_angles, cfg.n_d))
    return fbp_from_rays(sino, ray_set(cfg, g), n, fov, kind)
