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
Pixel rasters and digital phantoms.

An ImageGrid covers the square [-fov/2, fov/2]^2 mm. Row 0 is the top
(largest y), column 0 the left (smallest x). Pixel (r, c) has its centre at
x = (c + 0.5 - n/2) * h, y = (n/2 - r - 0.5) * h with h = fov / n, so the
centre coordinates of mirrored columns are exact negatives of each other.
Phantoms take the value of the shape at each pixel centre.
"""
import json
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Tuple

import numpy as np
from scipy import ndimage

from fanbeam import settings
from fanbeam.exceptions import ConfigError, InvalidArgumentError

__all__ = (
    "ImageGrid",
    "LPhantomSpec",
    "HolePhantomSpec",
    "LogPhantomSpec",
    "Ellipse",
    "pixel_centers",
    "make_log_phantom",
    "make_l_phantom",
    "make_hole_phantom",
    "make_disk_phantom",
    "make_phantom",
    "mirror_image",
    "mirror_values",
    "resample_image",
    "load_phantom_spec",
    "PHANTOMS",
)


@dataclass(eq=False)
class ImageGrid:
    """ n x n attenuation raster (1/mm) over a square field of view (mm) """
    n: int
    fov: float
    values: np.ndarray

    def __post_init__(self):
        self.values = np.ascontiguousarray(self.values, dtype=np.float64)
        if int(self.n) != self.n or self.n < 2:
            raise InvalidArgumentError(
                "image size must be an integer >= 2, got {}".format(self.n))
        self.n = int(self.n)
        if not (math.isfinite(self.fov) and self.fov > 0):
            raise InvalidArgumentError(
                "fov must be positive, got {}".format(self.fov))
        if self.values.shape != (self.n, self.n):
            raise InvalidArgumentError(
                "values must have shape ({0}, {0}), got {1}".format(
                    self.n, self.values.shape))
        if not np.all(np.isfinite(self.values)):
            raise InvalidArgumentError("image values must be finite")

    @property
    def pixel_size(self) -> float:
        return self.fov / self.n

    @classmethod
    def zeros(cls, n: int, fov: float) -> "ImageGrid":
        return cls(n, fov, np.zeros((n, n)))

    def copy(self, values=None) -> "ImageGrid":
        """ Same grid, optionally with other values """
        return ImageGrid(
            self.n, self.fov,
            self.values.copy() if values is None else values
        )


def pixel_centers(n: int, fov: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    (x, y) centre coordinates broadcastable to (n, n): x varies along
    columns, y along rows.
    """
    h = fov / n
    offsets = np.arange(n) + 0.5 - 0.5 * n
    return (offsets * h)[None, :], (-offsets * h)[:, None]


@dataclass(frozen=True)
class Ellipse:
    """ Filled ellipse; ``angle`` rotates the first semi-axis from x """
    center: Tuple[float, float]
    axes: Tuple[float, float]
    angle: float
    value: float

    def mask(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        dx, dy = x - self.center[0], y - self.center[1]
        cos, sin = math.cos(self.angle), math.sin(self.angle)
        u = (dx * cos + dy * sin) / self.axes[0]
        v = (-dx * sin + dy * cos) / self.axes[1]
        return u * u + v * v <= 1.0


def _default_knots():
    radius = settings.FOV / 2 * settings.LOG_RADIUS_FRACTION
    return (
        Ellipse((-0.35 * radius, 0.3 * radius), settings.LOG_KNOT_AXES,
                math.radians(35.0), settings.LOG_KNOT_VALUE),
        Ellipse((0.3 * radius, -0.35 * radius), settings.LOG_KNOT_AXES,
                math.radians(-60.0), settings.LOG_KNOT_VALUE),
    )


def _default_foreign():
    radius = settings.FOV / 2 * settings.LOG_RADIUS_FRACTION
    return Ellipse((0.45 * radius, 0.4 * radius), settings.LOG_FOREIGN_AXES,
                   math.radians(20.0), settings.LOG_FOREIGN_VALUE)


@dataclass(frozen=True)
class LogPhantomSpec:
    """
    Log cross-section: a disk of alternating growth rings, knots and one
    small dense foreign object. Feature positions are given for the default
    500 mm field of view and scale with ``fov / 500``.
    """
    radius_fraction: float = settings.LOG_RADIUS_FRACTION
    n_rings: int = settings.LOG_RINGS
    ring_values: Tuple[float, float] = settings.LOG_RING_VALUES
    knots: Tuple[Ellipse, ...] = field(default_factory=_default_knots)
    foreign: Ellipse = field(default_factory=_default_foreign)

    def __post_init__(self):
        if not 0 < self.radius_fraction <= 1:
            raise InvalidArgumentError("radius_fraction must lie in (0, 1]")
        if self.n_rings < 1 or min(self.ring_values) < 0:
            raise InvalidArgumentError(
                "need at least one ring and nonnegative ring values")


@dataclass(frozen=True)
class LPhantomSpec:
    """ L shape: a horizontal arm along the bottom and a vertical arm on the
    left of an arm_length square box centred at center_offset """
    arm_length: float = settings.L_ARM_LENGTH
    arm_width: float = settings.L_ARM_WIDTH
    attenuation: float = settings.WOOD_ATTENUATION
    center_offset: Tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if not self.arm_length > self.arm_width > 0:
            raise InvalidArgumentError(
                "need arm_length > arm_width > 0, got {} and {}".format(
                    self.arm_length, self.arm_width))
        if not self.attenuation > 0:
            raise InvalidArgumentError(
                "attenuation must be positive, got {}".format(
                    self.attenuation))
        object.__setattr__(self, "center_offset",
                           tuple(float(v) for v in self.center_offset))


@dataclass(frozen=True)
class HolePhantomSpec:
    """ Square block centred at the COR with a circular hole """
    outer_side: float = settings.HOLE_BLOCK_SIDE
    hole_radius: float = settings.HOLE_RADIUS
    hole_offset: Tuple[float, float] = settings.HOLE_OFFSET
    attenuation: float = settings.WOOD_ATTENUATION

    def __post_init__(self):
        object.__setattr__(self, "hole_offset",
                           tuple(float(v) for v in self.hole_offset))
        if not self.hole_radius > 0:
            raise InvalidArgumentError("hole_radius must be positive")
        if not self.attenuation > 0:
            raise InvalidArgumentError("attenuation must be positive")
        half = 0.5 * self.outer_side
        if max(abs(v) for v in self.hole_offset) + self.hole_radius >= half:
            raise InvalidArgumentError(
                "hole of radius {} at {} is not strictly inside a block of "
                "side {}".format(self.hole_radius, self.hole_offset,
                                 self.outer_side))


def _check_fits(half_extent: float, fov: float, what: str):
    if half_extent > 0.5 * fov:
        raise InvalidArgumentError(
            "{} does not fit in a {} mm field of view".format(what, fov))


def make_log_phantom(n: int, fov: float = settings.FOV,
                     spec: LogPhantomSpec = None) -> ImageGrid:
    """
    Log phantom; rings alternate ring_values[0], ring_values[1] from the
    pith outwards, knots and then the foreign object are painted on top.
    """
    if n < settings.LOG_MIN_N:
        raise InvalidArgumentError(
            "log phantom needs n >= {}, got {}".format(settings.LOG_MIN_N, n))
    spec = spec or LogPhantomSpec()
    scale = fov / settings.FOV
    x, y = pixel_centers(n, fov)
    radius = 0.5 * fov * spec.radius_fraction
    r = np.hypot(x, y)

    ring = np.minimum(np.floor(r / radius * spec.n_rings), spec.n_rings - 1)
    values = np.where(ring % 2 == 0, spec.ring_values[0], spec.ring_values[1])
    values = np.where(r <= radius, values, 0.0)

    for feature in tuple(spec.knots) + (spec.foreign,):
        scaled = Ellipse(
            (feature.center[0] * scale, feature.center[1] * scale),
            (feature.axes[0] * scale, feature.axes[1] * scale),
            feature.angle, feature.value)
        values = np.where(scaled.mask(x, y), scaled.value, values)
    return ImageGrid(n, fov, values)


def make_l_phantom(n: int, fov: float = settings.FOV,
                   spec: LPhantomSpec = None) -> ImageGrid:
    spec = spec or LPhantomSpec()
    cx, cy = spec.center_offset
    half = 0.5 * spec.arm_length
    _check_fits(max(abs(cx), abs(cy)) + half, fov, "L phantom")
    x, y = pixel_centers(n, fov)
    left, bottom = cx - half, cy - half
    in_box = (x >= left) & (x <= cx + half) & (y >= bottom) & (y <= cy + half)
    horizontal = y <= bottom + spec.arm_width
    vertical = x <= left + spec.arm_width
    mask = in_box & (horizontal | vertical)
    return ImageGrid(n, fov, np.where(mask, spec.attenuation, 0.0))


def make_hole_phantom(n: int, fov: float = settings.FOV,
                      spec: HolePhantomSpec = None) -> ImageGrid:
    spec = spec or HolePhantomSpec()
    half = 0.5 * spec.outer_side
    _check_fits(half, fov, "hole phantom block")
    x, y = pixel_centers(n, fov)
    block = (np.abs(x) <= half) & (np.abs(y) <= half)
    ox, oy = spec.hole_offset
    hole = (x - ox) ** 2 + (y - oy) ** 2 <= spec.hole_radius ** 2
    return ImageGrid(n, fov, np.where(block & ~hole, spec.attenuation, 0.0))


def make_disk_phantom(n: int, fov: float, radius: float,
                      value: float = 1.0,
                      center: Tuple[float, float] = (0.0, 0.0)) -> ImageGrid:
    """ Uniform disk, the usual sanity object for projector and FBP """
    x, y = pixel_centers(n, fov)
    mask = (x - center[0]) ** 2 + (y - center[1]) ** 2 <= radius ** 2
    return ImageGrid(n, fov, np.where(mask, float(value), 0.0))


def mirror_values(values: np.ndarray) -> np.ndarray:
    """ Left-right flip of a 2D array """
    return np.ascontiguousarray(np.asarray(values)[:, ::-1])


def mirror_image(img: ImageGrid) -> ImageGrid:
    return ImageGrid(img.n, img.fov, mirror_values(img.values))


def resample_image(img: ImageGrid, n_out: int) -> ImageGrid:
    """
    Bilinear interpolation onto an n_out x n_out grid over the same field
    of view. Output pixel centres outside the input centre lattice use the
    nearest edge value.
    """
    if n_out < 2:
        raise InvalidArgumentError(
            "n_out must be >= 2, got {}".format(n_out))
    if n_out == img.n:
        return img.copy()
    coords = (np.arange(n_out) + 0.5) * (img.n / n_out) - 0.5
    rows, cols = np.meshgrid(coords, coords, indexing="ij")
    values = ndimage.map_coordinates(
        img.values, [rows, cols], order=1, mode="nearest"
    )
    return ImageGrid(n_out, img.fov, values)


PHANTOMS = {
    "log": (make_log_phantom, LogPhantomSpec),
    "l": (make_l_phantom, LPhantomSpec),
    "hole": (make_hole_phantom, HolePhantomSpec),
}


def _spec_from_dict(spec_cls, data: Dict[str, Any], source: str):
    known = set(spec_cls.__dataclass_fields__)
    unknown = set(data) - known
    if unknown:
        raise ConfigError("{}: unknown key(s) {}".format(
            source, ", ".join(sorted(unknown))))
    data = dict(data)
    try:
        if spec_cls is LogPhantomSpec:
            if "knots" in data:
                data["knots"] = tuple(Ellipse(**item)
                                      for item in data["knots"])
            if "foreign" in data:
                data["foreign"] = Ellipse(**data["foreign"])
        return spec_cls(**data)
    except TypeError as err:
        raise ConfigError("{}: {}".format(source, err))


def load_phantom_spec(kind: str, path: str = None):
    """
    Phantom spec for ``kind`` from a JSON object keyed by its field names;
    defaults when ``path`` is None.
    """
    try:
        _, spec_cls = PHANTOMS[kind]
    except KeyError:
        raise InvalidArgumentError("unknown phantom {!r}".format(kind))
    if path is None:
        return spec_cls()
    try:
        with open(path) as file_descriptor:
            data = json.load(file_descriptor)
    except (OSError, ValueError) as err:
        raise ConfigError("cannot read phantom spec {}: {}".format(path, err))
    if not isinstance(data, dict):
        raise ConfigError("{}: expected a JSON object".format(path))
    return _spec_from_dict(spec_cls, data, path)


def make_phantom(kind: str, n: int, fov: float, spec=None) -> ImageGrid:
    """ Dispatch on the phantom name used by the CLI """
    try:
        factory, _ = PHANTOMS[kind]
    except KeyError:
        raise InvalidArgumentError("unknown phantom {!r}".format(kind))
    return factory(n, fov, spec)
