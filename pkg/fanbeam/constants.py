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
fanbeam constants for CLI
"""

__all__ = (
    "FANBEAM_PROG_NAME",
    "FANBEAM_CLI_DESCRIPTION",
    "FANBEAM_CLI_EPILOG",
    "FANBEAM_CONFIG_HELP",
    "FANBEAM_THREADS_HELP",
    "FANBEAM_LOG_LEVEL_HELP",
    "FANBEAM_LOG_QUIET_NUMBA",
    "FANBEAM_FILTER_HELP",
)

# fanbeam main cli constants
FANBEAM_PROG_NAME = "fanbeam"
FANBEAM_CLI_DESCRIPTION = (
    "Fan-beam X-ray CT toolkit.\nSimulates scans, estimates unknown scanner "
    "geometry from a calibration phantom and reconstructs sparse-angle data "
    "with FBP, Tikhonov or Cauchy-prior MAP."
)
FANBEAM_CLI_EPILOG = (
    "Every command writes a report.json next to its outputs.\n"
    "Internal parallelism follows --threads or the FANBEAM_THREADS "
    "environment variable."
)
FANBEAM_CONFIG_HELP = (
    "Path to your custom configuration file.\n"
    "By default ~/.fanbeam/fanbeam.cfg is used if it exists."
)
FANBEAM_THREADS_HELP = (
    "Number of worker threads for the numerical kernels.\n"
    "Falls back to FANBEAM_THREADS, then to [runtime] threads in the config."
)

# fanbeam logging constants
FANBEAM_LOG_LEVEL_HELP = (
    "Used for setup log level for output messages.\n"
    "By default the log level is INFO."
)
FANBEAM_LOG_QUIET_NUMBA = (
    "Keep numba compiler messages at WARNING even when the log level is "
    "DEBUG."
)

FANBEAM_FILTER_HELP = (
    "Reconstruction filter window: ramlak, shepplogan, cosine, hamming or "
    "hann."
)
