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
Reconstruction quality metrics.
"""
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from scipy import ndimage

from fanbeam import settings
from fanbeam.exceptions import InvalidArgumentError
from fanbeam.phantoms import ImageGrid, pixel_centers

__all__ = (
    "SsimOptions",
    "relative_error",
    "ssim",
    "ssim_map",
    "fov_mask",
    "gaussian_window",
)

Image = Union[ImageGrid, np.ndarray]


@dataclass(frozen=True)
class SsimOptions:
    """ ``data_range`` None means max - min of the reference image """
    window: int = settings.SSIM_WINDOW
    sigma: float = settings.SSIM_SIGMA
    k1: float = settings.SSIM_K1
    k2: float = settings.SSIM_K2
    data_range: Optional[float] = None

    def __post_init__(self):
        if self.window < 3 or self.window % 2 == 0:
            raise InvalidArgumentError(
                "SSIM window must be odd and >= 3, got {}".format(
                    self.window))
        if not (self.k1 > 0 and self.k2 > 0 and self.sigma > 0):
            raise InvalidArgumentError("k1, k2 and sigma must be positive")


def _values(img: Image) -> np.ndarray:
    if isinstance(img, ImageGrid):
        return img.values
    return np.asarray(img, dtype=np.float64)


def _same_shape(a: np.ndarray, b: np.ndarray):
    if a.shape != b.shape:
        raise InvalidArgumentError(
            "images differ in shape: {} vs {}".format(a.shape, b.shape))


def fov_mask(n: int, fraction: float = 0.9) -> np.ndarray:
    """ Pixels whose centre lies within ``fraction`` of the fov radius """
    x, y = pixel_centers(n, 2.0)
    return np.hypot(x, y) <= fraction


def relative_error(x_hat: Image, x_true: Image,
                   mask: Optional[np.ndarray] = None) -> float:
    """ ||x_hat - x_true|| / ||x_true||, optionally over a mask """
    estimate, truth = _values(x_hat), _values(x_true)
    _same_shape(estimate, truth)
    if mask is not None:
        estimate, truth = estimate[mask], truth[mask]
    norm = float(np.linalg.norm(truth))
    if norm == 0.0:
        raise InvalidArgumentError("reference image has zero norm")
    return float(np.linalg.norm(estimate - truth)) / norm


def gaussian_window(size: int, sigma: float) -> np.ndarray:
    """ Normalised 1D Gaussian taps """
    offsets = np.arange(size) - size // 2
    taps = np.exp(-0.5 * (offsets / sigma) ** 2)
    return taps / taps.sum()


def _filter(img: np.ndarray, taps: np.ndarray) -> np.ndarray:
    out = ndimage.correlate1d(img, taps, axis=0, mode="reflect")
    return ndimage.correlate1d(out, taps, axis=1, mode="reflect")


def ssim_map(x_hat: Image, x_true: Image,
             opts: SsimOptions = None) -> np.ndarray:
    """
    Local SSIM for every window that fits entirely inside the image.
    """
    opts = opts or SsimOptions()
    a, b = _values(x_hat), _values(x_true)
    _same_shape(a, b)
    pad = opts.window // 2
    if min(a.shape) < opts.window:
        raise InvalidArgumentError(
            "images smaller than the {0}x{0} SSIM window".format(opts.window))
    data_range = opts.data_range
    if data_range is None:
        data_range = float(b.max() - b.min())
    if data_range == 0.0:
        data_range = 1.0
    c1 = (opts.k1 * data_range) ** 2
    c2 = (opts.k2 * data_range) ** 2

    taps = gaussian_window(opts.window, opts.sigma)
    mu_a, mu_b = _filter(a, taps), _filter(b, taps)
    var_a = _filter(a * a, taps) - mu_a * mu_a
    var_b = _filter(b * b, taps) - mu_b * mu_b
    cov = _filter(a * b, taps) - mu_a * mu_b

    numerator = (2 * mu_a * mu_b + c1) * (2 * cov + c2)
    denominator = (mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2)
    local = numerator / denominator
    return local[pad:-pad, pad:-pad]


def ssim(x_hat: Image, x_true: Image, opts: SsimOptions = None) -> float:
    """ Mean of the interior SSIM map, in [-1, 1] """
    value = float(np.mean(ssim_map(x_hat, x_true, opts)))
    return min(1.0, value) if math.isfinite(value) else value
