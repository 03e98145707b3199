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
Calibration problem: measured data of a known phantom plus its reference
image and the mirrored reference.
"""
import enum
from dataclasses import dataclass, field

from fanbeam.exceptions import InvalidArgumentError
from fanbeam.fbp import FilterKind
from fanbeam.geometry import ScannerConfig
from fanbeam.phantoms import ImageGrid, mirror_image
from fanbeam.projector import Sinogram

__all__ = (
    "Handedness",
    "CalibProblem",
)


class Handedness(enum.Enum):
    """ Which reference orientations the objective may match """
    BOTH = "both"
    DIRECT = "direct"
    MIRRORED = "mirrored"

    @classmethod
    def names(cls):
        return [item.value for item in cls]


@dataclass(eq=False)
class CalibProblem:
    sino: Sinogram
    ref: ImageGrid
    cfg: ScannerConfig
    filter: FilterKind = field(default_factory=FilterKind)
    handedness: Handedness = Handedness.BOTH
    ref_mirror: ImageGrid = field(init=False)

    def __post_init__(self):
        if isinstance(self.handedness, str):
            self.handedness = Handedness(self.handedness)
        if (self.sino.k, self.sino.m) != (self.cfg.n_angles, self.cfg.n_d):
            raise InvalidArgumentError(
                "sinogram is {}x{} but the scanner has {} angles and {} "
                "elements".format(self.sino.k, self.sino.m,
                                  self.cfg.n_angles, self.cfg.n_d))
        self.ref_mirror = mirror_image(self.ref)

    @property
    def recon_n(self) -> int:
        return self.ref.n

    @property
    def fov(self) -> float:
        return self.ref.fov
