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
Discrete fan-beam projector
"""
from fanbeam.projector.operator import (
    Sinogram,
    NoiseSpec,
    ProjectionOperator,
    line_integral,
    forward_project,
    adjoint_project,
    intensities_to_sinogram,
    sinogram_to_intensities,
    add_noise,
    subsample_angles,
    system_matrix,
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
