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
Arguments and helpers shared by the fanbeam commands
"""
import logging
import os
import time
from typing import Any, Dict, List

from fanbeam import __version__, constants
from fanbeam.cli import Actions, Arg
from fanbeam.cli.types import (
    existing_file,
    fraction,
    non_negative_float,
    positive_float,
    positive_int,
)
from fanbeam.config import Config
from fanbeam.exceptions import FanbeamCommandException
from fanbeam.fbp import FilterKind, Window
from fanbeam.geometry import (
    ScannerConfig,
    geometry_from_dict,
    load_geometry,
    scanner_from_dict,
    true_geometry,
)
from fanbeam.io import export_pgm, make_output_dir, write_json, write_raster
from fanbeam.projector import Sinogram

__all__ = (
    "add_common_arguments",
    "load_config",
    "resolve",
    "scanner_from_config",
    "resolve_geometry",
    "sinogram_scanner",
    "sinogram_geometry",
    "filter_kind",
    "Outputs",
)


def add_common_arguments(cli_factory):
    """
    Register the arguments several commands share. Registration is
    idempotent, so every command module may call it.
    """
    cli_factory.add_arguments(
        out=Arg(
            flags=("-o", "--out"),
            type=str,
            required=True,
            metavar="DIR",
            help="Output directory (created if missing)."
        ),
        sino=Arg(
            flags=("--sino",),
            type=existing_file,
            required=True,
            metavar="FILE",
            help="Sinogram raster (header path, the .json suffix is "
                 "optional)."
        ),
        geometry=Arg(
            flags=("--geometry",),
            type=existing_file,
            metavar="FILE",
            help="Geometry JSON (alpha0, r_D, h_S, h_D, alpha_D, r_S, n_D, "
                 "det_pixel_mm, n_angles, angular_span).\nDefault: the "
                 "[scanner] config section with the synthetic true "
                 "parameters."
        ),
        n=Arg(
            flags=("--n",),
            type=positive_int,
            help="Reconstruction grid size. Default: [reconstruction] n."
        ),
        fov=Arg(
            flags=("--fov",),
            type=positive_float,
            metavar="MM",
            help="Field of view in mm. Default: [reconstruction] fov."
        ),
        filter=Arg(
            flags=("--filter",),
            choices=Window.names(),
            help=constants.FANBEAM_FILTER_HELP
        ),
        cutoff=Arg(
            flags=("--cutoff",),
            type=fraction,
            help="Filter cutoff as a fraction of Nyquist, in (0, 1]."
        ),
        seed=Arg(
            flags=("--seed",),
            type=int,
            help="Random seed."
        ),
        noise=Arg(
            flags=("--noise",),
            type=non_negative_float,
            help="Relative noise level (sigma = level * RMS of the data).\n"
                 "Default: 0.02 for simulate, 0 for project."
        ),
        reference=Arg(
            flags=("--reference",),
            type=existing_file,
            metavar="FILE",
            help="Reference image the reconstructions are scored against."
        ),
        mask_fraction=Arg(
            flags=("--mask-fraction",),
            type=fraction,
            default=0.9,
            help="Radius of the scoring disk as a fraction of the fov."
        ),
        pgm=Arg(
            flags=("--pgm",),
            action=Actions.STORE_TRUE,
            help="Also write 16-bit PGM previews of the images."
        ),
    )


def load_config(args) -> Config:
    """ Config selected by the global --config flag """
    return Config.load_from_file(filename=getattr(args, "config", None))


def resolve(args, name: str, config: Config, section: str, key: str = None,
            kind=float):
    """ CLI value if given, the config value otherwise """
    value = getattr(args, name, None)
    if value is not None:
        return value
    if kind is str:
        return config.get(section, key or name)
    return config.number(section, key or name, kind)


def scanner_from_config(config: Config) -> ScannerConfig:
    section = Config.SCANNER_SECTION
    return ScannerConfig(
        r_s=config.number(section, "r_s"),
        n_d=config.number(section, "n_d", int),
        det_pixel=config.number(section, "det_pixel_mm"),
        n_angles=config.number(section, "n_angles", int),
        angular_span=config.number(section, "angular_span"),
    )


def resolve_geometry(args, config: Config):
    """ (ScannerConfig, GeometryParams) from --geometry or the defaults """
    if getattr(args, "geometry", None):
        return load_geometry(args.geometry)
    return scanner_from_config(config), true_geometry()


def sinogram_scanner(sino: Sinogram, config: Config) -> ScannerConfig:
    """
    Scanner constants of a measured sinogram: the ones embedded in its
    header if present, else the config; the angle count is the row count.
    """
    if sino.geometry:
        cfg = scanner_from_dict(sino.geometry, "sinogram header")
    else:
        cfg = scanner_from_config(config)
    if cfg.n_d != sino.m:
        raise FanbeamCommandException(
            "sinogram has {} detector elements, the scanner {}".format(
                sino.m, cfg.n_d))
    return cfg.with_angles(sino.k)


def sinogram_geometry(sino: Sinogram, args, config: Config):
    """
    Geometry for reconstructing ``sino``: --geometry, else the geometry in
    the sinogram header.
    """
    if getattr(args, "geometry", None):
        cfg, g = load_geometry(args.geometry)
    elif sino.geometry:
        cfg, g = geometry_from_dict(sino.geometry, "sinogram header")
    else:
        raise FanbeamCommandException(
            "the sinogram carries no geometry, pass --geometry")
    if cfg.n_d != sino.m:
        raise FanbeamCommandException(
            "sinogram has {} detector elements, the geometry {}".format(
                sino.m, cfg.n_d))
    return cfg.with_angles(sino.k), g


def filter_kind(args, config: Config) -> FilterKind:
    section = Config.RECONSTRUCTION_SECTION
    return FilterKind(
        resolve(args, "filter", config, section, kind=str),
        resolve(args, "cutoff", config, section),
    )


def _jsonable(value: Any):
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    if isinstance(value, (list, tuple)):
        return [_jsonable(item) for item in value]
    return str(value)


class Outputs:
    """
    Collects the files a command writes and finishes with report.json.
    """

    def __init__(self, command: str, args):
        self.command = command
        self.args = args
        self.directory = make_output_dir(args.out)
        self.files: List[str] = []
        self.extra: Dict[str, Any] = {}
        self._started = time.time()

    def path(self, name: str) -> str:
        return os.path.join(self.directory, name)

    def raster(self, name: str, raster, pgm: bool = False) -> str:
        path = self.path(name)
        write_raster(path, raster)
        self.files.extend([path + ".json", path + ".bin"])
        if pgm:
            export_pgm(raster, path + ".pgm")
            self.files.append(path + ".pgm")
        logging.info("Wrote %s.", path)
        return path

    def json(self, name: str, data: Dict[str, Any]) -> str:
        path = self.path(name)
        write_json(path, data)
        self.files.append(path)
        logging.info("Wrote %s.", path)
        return path

    def add(self, path: str):
        self.files.append(path)

    def report(self, **extra) -> Dict[str, Any]:
        self.extra.update(extra)
        arguments = {
            key: _jsonable(value) for key, value in vars(self.args).items()
            if not callable(value)
        }
        report = {
            "command": self.command,
            "version": __version__,
            "arguments": arguments,
            "outputs": list(self.files),
            "wall_time_s": round(time.time() - self._started, 3),
        }
        report.update(self.extra)
        write_json(self.path("report.json"), report)
        return report
