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
Fan-beam acquisition geometry.

Object frame: origin at the centre of rotation (COR), x to the right, y up.
For a projection angle phi, e_r = (cos phi, sin phi) points from the source
towards the detector and e_t = (-sin phi, cos phi) is tangential. The five
unknown parameters shift the source (h_s) and the detector (h_d) along e_t,
place the detector at distance r_d, tilt its axis by alpha_d and set the
first angle alpha0. The scanner constants (r_s, detector size, pitch,
angles) are known.
"""
import json
import math
from dataclasses import dataclass, field, fields, replace
from typing import Any, Dict, Tuple

import numpy as np

from fanbeam import settings
from fanbeam.exceptions import ConfigError, InvalidArgumentError

__all__ = (
    "ScannerConfig",
    "GeometryParams",
    "RaySet",
    "angle_list",
    "ray_set",
    "true_geometry",
    "geometry_to_dict",
    "geometry_from_dict",
    "scanner_from_dict",
    "save_geometry",
    "load_geometry",
)

# file key -> attribute name
_SCANNER_KEYS = {
    "r_S": "r_s",
    "n_D": "n_d",
    "det_pixel_mm": "det_pixel",
    "n_angles": "n_angles",
    "angular_span": "angular_span",
}
_PARAM_KEYS = {
    "alpha0": "alpha0",
    "r_D": "r_d",
    "h_S": "h_s",
    "h_D": "h_d",
    "alpha_D": "alpha_d",
}


def _require(condition: bool, message: str):
    if not condition:
        raise InvalidArgumentError(message)


@dataclass(frozen=True)
class ScannerConfig:
    """ Known scanner constants """
    r_s: float = settings.SCANNER_R_S
    n_d: int = settings.SCANNER_N_D
    det_pixel: float = settings.SCANNER_DET_PIXEL
    n_angles: int = settings.SCANNER_N_ANGLES
    angular_span: float = settings.SCANNER_ANGULAR_SPAN

    def __post_init__(self):
        _require(math.isfinite(self.r_s) and self.r_s > 0,
                 "r_S must be positive, got {}".format(self.r_s))
        _require(int(self.n_d) == self.n_d and self.n_d >= 2,
                 "n_D must be an integer >= 2, got {}".format(self.n_d))
        _require(math.isfinite(self.det_pixel) and self.det_pixel > 0,
                 "det_pixel must be positive, got {}".format(self.det_pixel))
        _require(int(self.n_angles) == self.n_angles and self.n_angles >= 1,
                 "n_angles must be an integer >= 1, got {}".format(
                     self.n_angles))
        _require(0 < self.angular_span <= 2.0 * math.pi + 1e-12,
                 "angular_span must lie in (0, 2*pi], got {}".format(
                     self.angular_span))
        object.__setattr__(self, "n_d", int(self.n_d))
        object.__setattr__(self, "n_angles", int(self.n_angles))

    @property
    def angular_step(self) -> float:
        return self.angular_span / self.n_angles

    def with_angles(self, n_angles: int) -> "ScannerConfig":
        """
        Same scanner sampling the same sweep with ``n_angles`` projections.
        """
        return replace(self, n_angles=n_angles)

    def to_dict(self) -> Dict[str, Any]:
        return {key: getattr(self, attr)
                for key, attr in _SCANNER_KEYS.items()}


@dataclass(frozen=True)
class GeometryParams:
    """ The five unknown geometry parameters """
    alpha0: float
    r_d: float
    h_s: float
    h_d: float
    alpha_d: float

    def __post_init__(self):
        for item in fields(self):
            value = float(getattr(self, item.name))
            _require(math.isfinite(value),
                     "{} must be finite, got {}".format(item.name, value))
            object.__setattr__(self, item.name, value)
        _require(self.r_d > 0, "r_D must be positive, got {}".format(self.r_d))

    def as_vector(self) -> np.ndarray:
        """ theta = [alpha0, r_D, h_S, h_D, alpha_D] """
        return np.array(
            [self.alpha0, self.r_d, self.h_s, self.h_d, self.alpha_d],
            dtype=np.float64
        )

    @classmethod
    def from_vector(cls, theta) -> "GeometryParams":
        values = np.asarray(theta, dtype=np.float64).ravel()
        _require(values.size == 5,
                 "theta must have 5 entries, got {}".format(values.size))
        return cls(*(float(value) for value in values))

    def to_dict(self) -> Dict[str, Any]:
        return {key: getattr(self, attr) for key, attr in _PARAM_KEYS.items()}


def true_geometry() -> GeometryParams:
    """ Geometry used to simulate the synthetic experiments """
    return GeometryParams(
        alpha0=settings.TRUE_ALPHA0,
        r_d=settings.TRUE_R_D,
        h_s=settings.TRUE_H_S,
        h_d=settings.TRUE_H_D,
        alpha_d=settings.TRUE_ALPHA_D,
    )


@dataclass(frozen=True, eq=False)
class RaySet:
    """
    Explicit ray endpoints: one source point per angle and the M detector
    element centres of that angle. ``angular_step`` is the sweep divided by
    the number of angles; FBP needs it when K = 1.
    """
    angles: np.ndarray
    source_pos: np.ndarray
    det_centers: np.ndarray
    angular_step: float = field(default=0.0)

    def __post_init__(self):
        k = self.angles.shape[0]
        _require(self.source_pos.shape == (k, 2),
                 "source_pos must have shape ({}, 2)".format(k))
        _require(self.det_centers.ndim == 3
                 and self.det_centers.shape[0] == k
                 and self.det_centers.shape[2] == 2
                 and self.det_centers.shape[1] >= 2,
                 "det_centers must have shape ({}, M, 2), M >= 2".format(k))

    @property
    def n_angles(self) -> int:
        return self.angles.shape[0]

    @property
    def n_elements(self) -> int:
        return self.det_centers.shape[1]

    @property
    def det_mid(self) -> np.ndarray:
        """ (K, 2) detector line centres """
        return 0.5 * (self.det_centers[:, 0] + self.det_centers[:, -1])

    @property
    def det_axis(self) -> np.ndarray:
        """ (K, 2) unit vectors from element 0 towards element M-1 """
        axis = self.det_centers[:, -1] - self.det_centers[:, 0]
        return axis / np.linalg.norm(axis, axis=1, keepdims=True)

    @property
    def det_pixel(self) -> float:
        span = np.linalg.norm(self.det_centers[0, -1] - self.det_centers[0, 0])
        return float(span / (self.n_elements - 1))


def angle_list(cfg: ScannerConfig, g: GeometryParams) -> np.ndarray:
    """
    phi_k = alpha0 + k * angular_span / n_angles, endpoint excluded.
    """
    return g.alpha0 + np.arange(cfg.n_angles) * cfg.angular_step


def ray_set(cfg: ScannerConfig, g: GeometryParams) -> RaySet:
    """
    Source and detector element centres for every angle of ``cfg``.
    """
    angles = angle_list(cfg, g)
    e_r = np.stack((np.cos(angles), np.sin(angles)), axis=1)
    e_t = np.stack((-np.sin(angles), np.cos(angles)), axis=1)

    source = -cfg.r_s * e_r + g.h_s * e_t
    center = g.r_d * e_r + g.h_d * e_t
    axis = e_t + g.alpha_d * e_r
    axis /= np.linalg.norm(axis, axis=1, keepdims=True)

    offsets = (np.arange(cfg.n_d) - 0.5 * (cfg.n_d - 1)) * cfg.det_pixel
    det_centers = center[:, None, :] \
        + offsets[None, :, None] * axis[:, None, :]
    return RaySet(
        angles=angles,
        source_pos=source,
        det_centers=det_centers,
        angular_step=cfg.angular_step,
    )


def geometry_to_dict(cfg: ScannerConfig, g: GeometryParams) -> Dict[str, Any]:
    """ Flat geometry file layout (scanner constants + parameters) """
    data = g.to_dict()
    data.update(cfg.to_dict())
    return data


def _pick(data: Dict[str, Any], keys: Dict[str, str], source: str):
    missing = [key for key in keys if key not in data]
    if missing:
        raise ConfigError("{}: missing key(s) {}".format(
            source, ", ".join(missing)
        ))
    try:
        return {attr: float(data[key]) for key, attr in keys.items()}
    except (TypeError, ValueError) as err:
        raise ConfigError("{}: {}".format(source, err))


def scanner_from_dict(data: Dict[str, Any],
                      source: str = "geometry") -> ScannerConfig:
    values = _pick(data, _SCANNER_KEYS, source)
    return ScannerConfig(**values)


def geometry_from_dict(
    data: Dict[str, Any],
    source: str = "geometry"
) -> Tuple[ScannerConfig, GeometryParams]:
    """
    Parse the flat geometry layout. Unknown keys are rejected.
    """
    unknown = set(data) - set(_SCANNER_KEYS) - set(_PARAM_KEYS)
    if unknown:
        raise ConfigError("{}: unknown key(s) {}".format(
            source, ", ".join(sorted(unknown))
        ))
    cfg = scanner_from_dict(data, source)
    g = GeometryParams(**_pick(data, _PARAM_KEYS, source))
    return cfg, g


def save_geometry(path: str, cfg: ScannerConfig, g: GeometryParams):
    with open(path, "w") as file_descriptor:
        json.dump(geometry_to_dict(cfg, g), file_descriptor, indent=2)


def load_geometry(path: str) -> Tuple[ScannerConfig, GeometryParams]:
    try:
        with open(path) as file_descriptor:
            data = json.load(file_descriptor)
    except (OSError, ValueError) as err:
        raise ConfigError("cannot read geometry file {}: {}".format(path, err))
    if not isinstance(data, dict):
        raise ConfigError("{}: expected a JSON object".format(path))
    return geometry_from_dict(data, path)
