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
fanbeam numerical and data exceptions
"""

from fanbeam.exceptions.base import FanbeamBaseException

__all__ = (
    "InvalidArgumentError",
    "ConfigError",
    "RasterFormatError",
    "ChecksumMismatchError",
    "DimensionMismatchError",
    "UnknownDtypeError",
)


class InvalidArgumentError(FanbeamBaseException, ValueError):
    """ A precondition of a numerical operation does not hold """
    _STR = "Invalid argument: {message}"


class ConfigError(FanbeamBaseException):
    """ Bad configuration value or parameter file """
    _STR = "Configuration error: {message}"


class RasterFormatError(FanbeamBaseException):
    """ Base class for raster file problems """
    _STR = "Raster format error: {message}"


class ChecksumMismatchError(RasterFormatError):
    """ Payload CRC32 does not match the header """
    _STR = "Raster checksum mismatch: {message}"


class DimensionMismatchError(RasterFormatError):
    """ Payload length does not match rows x cols """
    _STR = "Raster dimension mismatch: {message}"


class UnknownDtypeError(RasterFormatError):
    _STR = "Unknown raster dtype: {message}"
