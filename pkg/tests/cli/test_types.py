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

from argparse import ArgumentTypeError

import pytest
from testfixtures import TempDirectory

from fanbeam.cli.types import (
    existing_file,
    fraction,
    int_list,
    non_negative_float,
    positive_float,
    positive_int,
)


def test_positive_int():
    assert positive_int("4") == 4
    for value in ("0", "-2", "1.5", "four"):
        with pytest.raises(ArgumentTypeError):
            positive_int(value)


def test_floats():
    assert positive_float("0.5") == 0.5
    assert non_negative_float("0") == 0.0
    with pytest.raises(ArgumentTypeError):
        positive_float("0")
    for value in ("-1", "inf", "nan", "x"):
        with pytest.raises(ArgumentTypeError):
            non_negative_float(value)


def test_fraction():
    assert fraction("1") == 1.0
    assert fraction("0.25") == 0.25
    for value in ("0", "1.5"):
        with pytest.raises(ArgumentTypeError):
            fraction(value)


def test_int_list():
    assert int_list("360,45,20") == (360, 45, 20)
    assert int_list("7") == (7,)
    for value in ("", "3,0", "a,b"):
        with pytest.raises(ArgumentTypeError):
            int_list(value)


def test_existing_file():
    with TempDirectory() as tmp:
        tmp.write("geometry.json", b"{}")
        tmp.write("image.json", b"{}")
        path = tmp.getpath("geometry.json")
        assert existing_file(path) == path
        assert existing_file(tmp.getpath("image")) == tmp.getpath("image")
        with pytest.raises(ArgumentTypeError):
            existing_file(tmp.getpath("missing.json"))
