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
fanbeam default settings
"""
import math as _math
import os as _os

FANBEAM_CONFIG_DIR = ".fanbeam"
FANBEAM_CONFIG_PATH = _os.path.join(_os.getenv("HOME", ""), FANBEAM_CONFIG_DIR)
FANBEAM_CONFIG_FILE_NAME = "fanbeam.cfg"
FANBEAM_THREADS_ENV = "FANBEAM_THREADS"

# Scanner constants
SCANNER_R_S = 859.46
SCANNER_N_D = 768
SCANNER_DET_PIXEL = 2.0
SCANNER_N_ANGLES = 360
SCANNER_ANGULAR_SPAN = 2.0 * _math.pi

# Geometry used to simulate the synthetic experiments
TRUE_ALPHA0 = 2.55
TRUE_R_D = 715.0
TRUE_H_S = 320.0
TRUE_H_D = 44.0
TRUE_ALPHA_D = 0.28

# Grids
FOV = 500.0
FINE_N = 1013
COARSE_N = 256
NOISE_LEVEL = 0.02
NOISE_SEED = 0

# Phantoms
WOOD_ATTENUATION = 0.05
L_ARM_LENGTH = 200.0
L_ARM_WIDTH = 60.0
HOLE_BLOCK_SIDE = 200.0
HOLE_RADIUS = 30.0
HOLE_OFFSET = (30.0, 20.0)
LOG_RADIUS_FRACTION = 0.8
LOG_RINGS = 12
LOG_RING_VALUES = (0.04, 0.05)
LOG_KNOT_VALUE = 0.08
LOG_KNOT_AXES = (25.0, 10.0)
LOG_FOREIGN_VALUE = 0.5
LOG_FOREIGN_AXES = (6.0, 4.0)
LOG_MIN_N = 16

# Filtered backprojection
FILTER = "hann"
FILTER_CUTOFF = 1.0

# Differential evolution
DE_POP_SIZE = 60
DE_MU = 0.7
DE_P_CROSS = 0.7
DE_MAX_GEN = 300
DE_CONV_TOL = 0.01
DE_SEED = 1
DE_BOUNDS = (
    (0.0, 2.0 * _math.pi),
    (400.0, 1000.0),
    (-500.0, 500.0),
    (-500.0, 500.0),
    (-0.6, 0.6),
)

# Regularized reconstruction
TIKHONOV_ALPHA = 1.0
TIKHONOV_MAX_ITER = 200
TIKHONOV_TOL = 1e-6
CAUCHY_BETA = 0.01
CAUCHY_MAX_ITER = 200
CAUCHY_GRAD_TOL = 1e-6
CAUCHY_MEMORY = 10
CAUCHY_INIT = "fbp"
CAUCHY_NOISE = NOISE_LEVEL

# SSIM
SSIM_WINDOW = 11
SSIM_SIGMA = 1.5
SSIM_K1 = 0.01
SSIM_K2 = 0.03

# Method comparison angle counts
COMPARE_ANGLES = (360, 45, 20)

# Explicit matrices are only assembled for small grids
SYSTEM_MATRIX_MAX_N = 64
