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
Raster persistence and visualisation export.

A raster is stored as ``<path>.json`` (header) and ``<path>.bin`` (payload:
row-major little-endian float64). The header carries the kind, the shape,
the dtype tag "f64le", a CRC32 of the payload and either the field of view
(images) or the angle list and scan geometry (sinograms).
"""
import json
import logging
import os
import zlib
from typing import Any, Dict, Union

import numpy as np

from fanbeam.exceptions import (
    ChecksumMismatchError,
    ConfigError,
    DimensionMismatchError,
    RasterFormatError,
    UnknownDtypeError,
)
from fanbeam.phantoms import ImageGrid
from fanbeam.projector import Sinogram

__all__ = (
    "DTYPE",
    "raster_paths",
    "write_raster",
    "read_raster",
    "read_image",
    "read_sinogram",
    "export_pgm",
    "write_json",
    "read_json",
    "make_output_dir",
)

logger = logging.getLogger(__name__)

DTYPE = "f64le"
_NUMPY_DTYPE = np.dtype("<f8")
_SUFFIXES = (".json", ".bin")

Raster = Union[ImageGrid, Sinogram]


def raster_paths(path: str):
    """ (header, payload) paths; a given .json/.bin suffix is dropped """
    path = os.path.expanduser(str(path))
    for suffix in _SUFFIXES:
        if path.endswith(suffix):
            path = path[:-len(suffix)]
    return path + ".json", path + ".bin"


def make_output_dir(path: str) -> str:
    """ Create ``path`` (and parents) if needed and return it """
    path = os.path.expanduser(str(path))
    os.makedirs(path, exist_ok=True)
    return path


def write_json(path: str, data: Dict[str, Any]):
    with open(path, "w") as file_descriptor:
        json.dump(data, file_descriptor, indent=2, sort_keys=True)
        file_descriptor.write("\n")


def read_json(path: str) -> Dict[str, Any]:
    try:
        with open(path) as file_descriptor:
            return json.load(file_descriptor)
    except (OSError, ValueError) as err:
        raise ConfigError("cannot read {}: {}".format(path, err))


def write_raster(path: str, raster: Raster):
    """ Write header and payload; floats are stored bit-exactly """
    header_path, payload_path = raster_paths(path)
    payload = np.ascontiguousarray(raster.values, dtype=_NUMPY_DTYPE)
    data = payload.tobytes()
    header = {
        "rows": int(payload.shape[0]),
        "cols": int(payload.shape[1]),
        "dtype": DTYPE,
        "checksum": zlib.crc32(data) & 0xFFFFFFFF,
    }
    if isinstance(raster, ImageGrid):
        header.update(kind="image", fov_mm=float(raster.fov))
    elif isinstance(raster, Sinogram):
        header.update(kind="sinogram",
                      angles=[float(a) for a in raster.angles],
                      geometry=raster.geometry)
    else:
        raise RasterFormatError(
            "cannot store {}".format(type(raster).__name__))
    directory = os.path.dirname(header_path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(payload_path, "wb") as file_descriptor:
        file_descriptor.write(data)
    write_json(header_path, header)
    logger.debug("Wrote %s raster %s (%sx%s).", header["kind"], header_path,
                 header["rows"], header["cols"])


def read_raster(path: str) -> Raster:
    """
    Read a raster written by ``write_raster``. Nothing is returned unless
    dtype, length and checksum all agree with the header.
    """
    header_path, payload_path = raster_paths(path)
    try:
        with open(header_path) as file_descriptor:
            header = json.load(file_descriptor)
        with open(payload_path, "rb") as file_descriptor:
            data = file_descriptor.read()
    except OSError as err:
        raise RasterFormatError("cannot read {}: {}".format(path, err))
    except ValueError as err:
        raise RasterFormatError("bad header {}: {}".format(header_path, err))

    try:
        kind = header["kind"]
        rows, cols = int(header["rows"]), int(header["cols"])
        dtype = header["dtype"]
        checksum = int(header["checksum"])
    except (KeyError, TypeError, ValueError) as err:
        raise RasterFormatError("incomplete header {}: {}".format(
            header_path, err))
    if dtype != DTYPE:
        raise UnknownDtypeError("{} in {}".format(dtype, header_path))
    if len(data) != rows * cols * _NUMPY_DTYPE.itemsize:
        raise DimensionMismatchError(
            "{} bytes in {} for a {}x{} raster".format(
                len(data), payload_path, rows, cols))
    if zlib.crc32(data) & 0xFFFFFFFF != checksum:
        raise ChecksumMismatchError(payload_path)

    values = np.frombuffer(data, dtype=_NUMPY_DTYPE).reshape(rows, cols)
    values = values.astype(np.float64)
    if kind == "image":
        if rows != cols:
            raise DimensionMismatchError(
                "image {} is not square".format(header_path))
        return ImageGrid(rows, float(header["fov_mm"]), values)
    if kind == "sinogram":
        angles = np.array(header.get("angles", []), dtype=np.float64)
        if angles.shape[0] != rows:
            raise DimensionMismatchError(
                "{} angles for {} rows in {}".format(
                    angles.shape[0], rows, header_path))
        return Sinogram(values, angles, header.get("geometry"))
    raise RasterFormatError("unknown raster kind {!r} in {}".format(
        kind, header_path))


def read_image(path: str) -> ImageGrid:
    raster = read_raster(path)
    if not isinstance(raster, ImageGrid):
        raise RasterFormatError("{} is not an image".format(path))
    return raster


def read_sinogram(path: str) -> Sinogram:
    raster = read_raster(path)
    if not isinstance(raster, Sinogram):
        raise RasterFormatError("{} is not a sinogram".format(path))
    return raster


def export_pgm(img: Raster, path: str):
    """
    Binary 16-bit PGM. Values are mapped affinely from [min, max] to
    [0, 65535]; a constant raster becomes mid-gray 32768.
    """
    values = np.asarray(img.values, dtype=np.float64)
    low, high = float(values.min()), float(values.max())
    if high > low:
        levels = np.rint((values - low) / (high - low) * 65535.0)
    else:
        levels = np.full(values.shape, 32768.0)
    rows, cols = values.shape
    with open(os.path.expanduser(str(path)), "wb") as file_descriptor:
        file_descriptor.write("P5\n{} {}\n65535\n".format(cols, rows).encode(
            "ascii"))
        file_descriptor.write(levels.astype(">u2").tobytes())
