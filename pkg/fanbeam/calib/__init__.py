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
Geometry calibration
"""
from fanbeam.calib.de import (
    DeOptions,
    OptimizerReport,
    de_minimize,
    latin_hypercube,
)
from fanbeam.calib.objective import (
    OBJECTIVES,
    calibrate,
    calibration_sweep,
    correlations,
    objective_J,
    objective_J_sino,
    reconstruction_at,
)
from fanbeam.calib.problem import CalibProblem, Handedness

__all__ = (
    "DeOptions",
    "OptimizerReport",
    "de_minimize",
    "latin_hypercube",
    "OBJECTIVES",
    "calibrate",
    "calibration_sweep",
    "correlations",
    "objective_J",
    "objective_J_sino",
    "reconstruction_at",
    "CalibProblem",
    "Handedness",
)
