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

import math

import numpy as np
import pytest
from testfixtures import TempDirectory

from fanbeam import settings
from fanbeam.exceptions import ConfigError, InvalidArgumentError
from fanbeam.phantoms import (
    HolePhantomSpec,
    ImageGrid,
    LogPhantomSpec,
    LPhantomSpec,
    load_phantom_spec,
    make_disk_phantom,
    make_hole_phantom,
    make_l_phantom,
    make_log_phantom,
    make_phantom,
    mirror_image,
    mirror_values,
    pixel_centers,
    resample_image,
)


def test_image_grid_validation():
    with pytest.raises(InvalidArgumentError):
        ImageGrid(1, 10.0, np.zeros((1, 1)))
    with pytest.raises(InvalidArgumentError):
        ImageGrid(4, 0.0, np.zeros((4, 4)))
    with pytest.raises(InvalidArgumentError):
        ImageGrid(4, 10.0, np.zeros((4, 3)))
    bad = np.zeros((4, 4))
    bad[1, 1] = np.nan
    with pytest.raises(InvalidArgumentError):
        ImageGrid(4, 10.0, bad)
    img = ImageGrid.zeros(4, 8.0)
    assert img.pixel_size == 2.0


def test_pixel_centers():
    x, y = pixel_centers(4, 8.0)
    assert np.array_equal(x.ravel(), [-3.0, -1.0, 1.0, 3.0])
    assert np.array_equal(y.ravel(), [3.0, 1.0, -1.0, -3.0])
    # mirrored columns have exactly negated centres
    x, _ = pixel_centers(7, 3.3)
    assert np.array_equal(x.ravel(), -x.ravel()[::-1])


def test_log_phantom():
    img = make_log_phantom(256, 500.0)
    positive = np.count_nonzero(img.values > 0)
    assert 0 < positive < 256 ** 2
    values = set(np.unique(img.values))
    assert set(settings.LOG_RING_VALUES) <= values
    assert settings.LOG_KNOT_VALUE in values
    assert settings.LOG_FOREIGN_VALUE in values
    assert img.values[0, 0] == 0.0


def test_log_phantom_minimum_size():
    img = make_log_phantom(settings.LOG_MIN_N, 500.0)
    rings = set(np.unique(img.values)) & set(settings.LOG_RING_VALUES)
    assert len(rings) == 2
    with pytest.raises(InvalidArgumentError):
        make_log_phantom(settings.LOG_MIN_N - 1, 500.0)


def test_l_phantom_area():
    n, fov = 256, 500.0
    img = make_l_phantom(n, fov)
    area = 200.0 * 60.0 + (200.0 - 60.0) * 60.0
    expected = area / fov ** 2 * n ** 2
    count = np.count_nonzero(img.values)
    assert abs(count - expected) <= 0.02 * expected
    assert set(np.unique(img.values)) == {0.0, settings.WOOD_ATTENUATION}


def test_l_phantom_orientation():
    img = make_l_phantom(64, 500.0)
    x, y = pixel_centers(64, 500.0)
    mask = img.values > 0
    # the corner of the L is bottom left
    assert np.any(mask & (x < -70) & (y < -70))
    assert not np.any(mask & (x > 40) & (y > 40))


def test_l_phantom_validation():
    with pytest.raises(InvalidArgumentError):
        LPhantomSpec(attenuation=0.0)
    with pytest.raises(InvalidArgumentError):
        LPhantomSpec(arm_length=50.0, arm_width=60.0)
    with pytest.raises(InvalidArgumentError):
        make_l_phantom(64, 150.0)
    with pytest.raises(InvalidArgumentError):
        make_l_phantom(64, 500.0, LPhantomSpec(center_offset=(200.0, 0.0)))


def test_hole_phantom_hole_area():
    n, fov = 256, 500.0
    spec = HolePhantomSpec(outer_side=200.0, hole_radius=30.0)
    img = make_hole_phantom(n, fov, spec)
    x, y = pixel_centers(n, fov)
    block = (np.abs(x) <= 100.0) & (np.abs(y) <= 100.0)
    zeros_in_block = np.count_nonzero(block & (img.values == 0))
    expected = math.pi * 30.0 ** 2 / fov ** 2 * n ** 2
    assert abs(zeros_in_block - expected) <= 0.02 * expected


def test_hole_phantom_symmetry():
    centred = make_hole_phantom(64, 500.0, HolePhantomSpec(
        hole_offset=(0.0, 0.0)))
    assert np.array_equal(mirror_image(centred).values, centred.values)
    off = make_hole_phantom(64, 500.0)
    assert not np.array_equal(mirror_image(off).values, off.values)


def test_hole_phantom_validation():
    with pytest.raises(InvalidArgumentError):
        HolePhantomSpec(outer_side=100.0, hole_radius=30.0,
                        hole_offset=(25.0, 0.0))
    with pytest.raises(InvalidArgumentError):
        HolePhantomSpec(hole_radius=0.0)


def test_disk_phantom():
    img = make_disk_phantom(32, 32.0, 8.0, value=2.0)
    assert img.values.max() == 2.0
    assert img.values[16, 16] == 2.0
    assert img.values[0, 0] == 0.0


def test_mirror():
    assert np.array_equal(mirror_values(np.array([[5.0]])), [[5.0]])
    assert np.array_equal(
        mirror_values(np.array([[1.0, 2.0], [3.0, 4.0]])),
        [[2.0, 1.0], [4.0, 3.0]]
    )
    img = make_log_phantom(64, 500.0)
    twice = mirror_image(mirror_image(img))
    assert twice.values.tobytes() == img.values.tobytes()


def test_resample_constant():
    img = ImageGrid(10, 5.0, np.full((10, 10), 0.3))
    out = resample_image(img, 7)
    assert out.n == 7 and out.fov == 5.0
    assert np.allclose(out.values, 0.3)
    assert resample_image(img, 10).values is not img.values
    with pytest.raises(InvalidArgumentError):
        resample_image(img, 1)


def test_resample_preserves_mass():
    fine = make_log_phantom(settings.FINE_N, settings.FOV)
    coarse = resample_image(fine, settings.COARSE_N)
    assert math.isclose(coarse.values.mean(), fine.values.mean(),
                        rel_tol=0.02)


def test_resample_round_trip():
    x, y = pixel_centers(32, 32.0)
    smooth = ImageGrid(32, 32.0, np.exp(-(x ** 2 + y ** 2) / (2 * 5.0 ** 2)))
    back = resample_image(resample_image(smooth, 64), 32)
    error = np.linalg.norm(back.values - smooth.values)
    assert error <= 1e-2 * np.linalg.norm(smooth.values)


def test_make_phantom_dispatch():
    assert make_phantom("l", 32, 500.0).n == 32
    with pytest.raises(InvalidArgumentError):
        make_phantom("cube", 32, 500.0)


def test_load_phantom_spec():
    assert load_phantom_spec("hole") == HolePhantomSpec()
    with TempDirectory() as tmp:
        tmp.write("l.json", b'{"arm_length": 150, "arm_width": 40}')
        spec = load_phantom_spec("l", tmp.getpath("l.json"))
        assert spec.arm_length == 150 and spec.arm_width == 40
        tmp.write("bad.json", b'{"arm_girth": 1}')
        with pytest.raises(ConfigError):
            load_phantom_spec("l", tmp.getpath("bad.json"))
        tmp.write("log.json", b'{"n_rings": 4, "knots": []}')
        log_spec = load_phantom_spec("log", tmp.getpath("log.json"))
        assert log_spec.n_rings == 4 and log_spec.knots == ()
        for body in (b'{"knots": [{"centre": [0, 0]}]}',
                     b'{"foreign": {"center": [0, 0], "axes": [1, 1]}}',
                     b'{"knots": [[0, 0]]}'):
            tmp.write("bad_log.json", body)
            with pytest.raises(ConfigError):
                load_phantom_spec("log", tmp.getpath("bad_log.json"))
    assert isinstance(load_phantom_spec("log"), LogPhantomSpec)
