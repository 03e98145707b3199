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
fanbeam user configuration
"""
import logging
import os
from configparser import ConfigParser
from typing import Optional

import numba

from fanbeam import settings
from fanbeam.exceptions import ConfigError

__all__ = (
    "Config",
    "apply_threads",
)

logger = logging.getLogger(__name__)


class Config(ConfigParser):
    """
    User configuration with the sections [scanner], [calibration],
    [reconstruction] and [runtime]. Missing sections and keys are filled
    from ``fanbeam.settings``.
    """
    # pylint: disable=too-many-ancestors
    SCANNER_SECTION = "scanner"
    CALIBRATION_SECTION = "calibration"
    RECONSTRUCTION_SECTION = "reconstruction"
    RUNTIME_SECTION = "runtime"
    _FILE_PATH = os.path.join(
        settings.FANBEAM_CONFIG_PATH, settings.FANBEAM_CONFIG_FILE_NAME
    )

    @classmethod
    def load_from_file(cls, filename: Optional[str] = None) -> "Config":
        """
        Load configuration from file. A missing default file is not an
        error; a missing explicit file is.
        """
        config = cls()
        if filename is None:
            filename = cls._FILE_PATH
        else:
            filename = os.path.expanduser(filename)
            if not os.path.isfile(filename):
                raise ConfigError(
                    "config file {} does not exist".format(filename)
                )
        config.filename = filename
        config.read([filename, ])
        config.set_default_values()
        return config

    def set_default_values(self, force: bool = False):
        """
        Fill every section with the package defaults without overwriting
        user values (unless ``force``).
        """
        defaults = {
            self.SCANNER_SECTION: dict(
                r_s=settings.SCANNER_R_S,
                n_d=settings.SCANNER_N_D,
                det_pixel_mm=settings.SCANNER_DET_PIXEL,
                n_angles=settings.SCANNER_N_ANGLES,
                angular_span=settings.SCANNER_ANGULAR_SPAN,
            ),
            self.CALIBRATION_SECTION: dict(
                pop_size=settings.DE_POP_SIZE,
                mu=settings.DE_MU,
                p_cross=settings.DE_P_CROSS,
                max_gen=settings.DE_MAX_GEN,
                conv_tol=settings.DE_CONV_TOL,
                seed=settings.DE_SEED,
            ),
            self.RECONSTRUCTION_SECTION: dict(
                filter=settings.FILTER,
                cutoff=settings.FILTER_CUTOFF,
                fov=settings.FOV,
                n=settings.COARSE_N,
                alpha=settings.TIKHONOV_ALPHA,
                beta=settings.CAUCHY_BETA,
                max_iter=settings.CAUCHY_MAX_ITER,
                tikhonov_tol=settings.TIKHONOV_TOL,
                grad_tol=settings.CAUCHY_GRAD_TOL,
                noise=settings.CAUCHY_NOISE,
            ),
            self.RUNTIME_SECTION: dict(
                threads=0,
            ),
        }
        for section, values in defaults.items():
            if not self.has_section(section):
                self.add_section(section)
            for key, value in values.items():
                if force is True or not self.has_option(section, key):
                    self.set(section, key, str(value))

    def number(self, section: str, key: str, kind=float):
        """
        Typed getter raising ConfigError with the offending key.
        """
        raw = self.get(section, key)
        try:
            return kind(raw)
        except ValueError:
            raise ConfigError("[{}] {} = {!r} is not a valid {}".format(
                section, key, raw, kind.__name__
            ))


def apply_threads(threads: Optional[int], config: Optional[Config] = None):
    """
    Set the numba worker count. ``threads`` comes from --threads (with
    the FANBEAM_THREADS fallback already applied by the CLI); then the
    [runtime] threads value; 0 keeps numba's default.
    """
    if not threads and config is not None:
        threads = config.number(Config.RUNTIME_SECTION, "threads", int)
    if not threads:
        return numba.get_num_threads()
    if threads > numba.config.NUMBA_NUM_THREADS:
        logger.warning(
            "Requested %s threads, only %s available.",
            threads, numba.config.NUMBA_NUM_THREADS
        )
        threads = numba.config.NUMBA_NUM_THREADS
    numba.set_num_threads(threads)
    logger.debug("Using %s numba threads.", threads)
    return threads
