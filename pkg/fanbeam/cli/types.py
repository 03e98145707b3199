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
Validating argument types for the CLI factory
"""

import os
from argparse import ArgumentTypeError
from typing import Tuple

__all__ = (
    "positive_int",
    "positive_float",
    "non_negative_float",
    "fraction",
    "existing_file",
    "int_list",
)


def positive_int(value: str) -> int:
    """ Integer strictly greater than zero """
    try:
        number = int(value)
    except ValueError:
        raise ArgumentTypeError("{!r} is not an integer".format(value))
    if number <= 0:
        raise ArgumentTypeError("{} must be positive".format(number))
    return number


def positive_float(value: str) -> float:
    number = non_negative_float(value)
    if number == 0.0:
        raise ArgumentTypeError("{} must be positive".format(number))
    return number


def non_negative_float(value: str) -> float:
    try:
        number = float(value)
    except ValueError:
        raise ArgumentTypeError("{!r} is not a number".format(value))
    if not number >= 0.0 or number == float("inf"):
        raise ArgumentTypeError(
            "{} must be a finite non-negative number".format(value)
        )
    return number


def fraction(value: str) -> float:
    """ Number in (0, 1], used for filter cutoffs and fov masks """
    number = positive_float(value)
    if number > 1.0:
        raise ArgumentTypeError("{} must lie in (0, 1]".format(number))
    return number


def existing_file(value: str) -> str:
    """
    Path of a readable file. Raster paths may be given without their
    ``.json`` suffix.
    """
    path = os.path.expanduser(value)
    if os.path.isfile(path) or os.path.isfile(path + ".json"):
        return path
    raise ArgumentTypeError("file {!r} does not exist".format(value))


def int_list(value: str) -> Tuple[int, ...]:
    """ Comma separated positive integers, e.g. ``360,45,20`` """
    items = tuple(
        positive_int(item) for item in value.split(",") if item.strip()
    )
    if not items:
        raise ArgumentTypeError("expected a comma separated list")
    return items
