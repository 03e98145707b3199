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

from fanbeam.exceptions import InvalidArgumentError
from fanbeam.geometry import ray_set
from fanbeam.phantoms import ImageGrid, make_disk_phantom
from fanbeam.projector import (
    NoiseSpec,
    ProjectionOperator,
    Sinogram,
    add_noise,
    adjoint_project,
    forward_project,
    intensities_to_sinogram,
    line_integral,
    sinogram_to_intensities,
    subsample_angles,
    system_matrix,
)
from fanbeam.projector.kernels import trace_ray
from tests import ideal_geometry, random_image, small_geometry, small_scanner


def _dense_line_integral(img, p0, p1, samples=10000):
    """ Midpoint rule along the segment with nearest-cell lookup """
    p0, p1 = np.asarray(p0, float), np.asarray(p1, float)
    t = (np.arange(samples) + 0.5) / samples
    points = p0[None, :] + t[:, None] * (p1 - p0)[None, :]
    h = img.fov / img.n
    cols = np.floor((points[:, 0] + 0.5 * img.fov) / h).astype(int)
    rows = np.floor((0.5 * img.fov - points[:, 1]) / h).astype(int)
    inside = (cols >= 0) & (cols < img.n) & (rows >= 0) & (rows < img.n)
    values = img.values[rows[inside], cols[inside]]
    return values.sum() * np.linalg.norm(p1 - p0) / samples


def test_line_integral_zero_and_constant():
    zero = ImageGrid.zeros(16, 10.0)
    assert line_integral(zero, (-20.0, 1.0), (20.0, -3.0)) == 0.0

    const = ImageGrid(16, 10.0, np.full((16, 16), 0.7))
    value = line_integral(const, (-20.0, 0.0), (20.0, 0.0))
    assert math.isclose(value, 0.7 * 10.0, rel_tol=1e-9)
    value = line_integral(const, (0.0, 30.0), (0.0, -30.0))
    assert math.isclose(value, 0.7 * 10.0, rel_tol=1e-9)


def test_line_integral_misses_grid():
    const = ImageGrid(8, 10.0, np.ones((8, 8)))
    assert line_integral(const, (-20.0, 6.0), (20.0, 6.0)) == 0.0
    assert line_integral(const, (6.0, 6.0), (20.0, 20.0)) == 0.0
    with pytest.raises(InvalidArgumentError):
        line_integral(const, (1.0, 1.0), (1.0, 1.0))


def test_line_integral_boundary_tie():
    # the ray x = 0 runs along a column boundary and is charged to column n/2
    values = np.zeros((4, 4))
    values[:, 2] = 1.0
    img = ImageGrid(4, 4.0, values)
    assert math.isclose(line_integral(img, (0.0, -5.0), (0.0, 5.0)), 4.0)


def test_line_integral_disk_chord():
    n, fov, radius = 128, 100.0, 30.0
    img = make_disk_phantom(n, fov, radius, value=1.0)
    value = line_integral(img, (-80.0, -3.0), (80.0, 5.0))
    assert abs(value - 2 * radius) <= 2 * img.pixel_size
    value = line_integral(img, (0.3, -90.0), (0.3, 90.0))
    assert abs(value - 2 * radius) <= 2 * img.pixel_size


def test_line_integral_dense_oracle():
    rng = np.random.default_rng(3)
    img = ImageGrid(32, 40.0, rng.random((32, 32)))
    for _ in range(100):
        angle = rng.uniform(0.0, 2 * math.pi)
        p0 = 40.0 * np.array([math.cos(angle), math.sin(angle)])
        p1 = rng.uniform(-25.0, 25.0, size=2)
        exact = line_integral(img, p0, p1)
        dense = _dense_line_integral(img, p0, p1)
        assert abs(exact - dense) <= 2 * img.pixel_size * img.values.max()


def test_forward_zero_and_linear():
    cfg = small_scanner(n_angles=12, n_d=48)
    rays = ray_set(cfg, small_geometry())
    zero = forward_project(ImageGrid.zeros(24, 100.0), rays)
    assert zero.values.shape == (12, 48)
    assert not np.any(zero.values)

    x1 = ImageGrid(24, 100.0, random_image(24, 1))
    x2 = ImageGrid(24, 100.0, random_image(24, 2))
    combined = ImageGrid(24, 100.0, 2.5 * x1.values - 0.5 * x2.values)
    expected = (2.5 * forward_project(x1, rays).values
                - 0.5 * forward_project(x2, rays).values)
    result = forward_project(combined, rays).values
    assert np.allclose(result, expected, rtol=1e-12, atol=1e-12)
    assert np.all(forward_project(x1, rays).values >= 0.0)


def test_forward_matches_system_matrix():
    cfg = small_scanner(n_angles=10, n_d=32)
    rays = ray_set(cfg, small_geometry())
    img = ImageGrid(16, 80.0, random_image(16, 4))
    matrix = system_matrix(rays, 16, 80.0)
    assert matrix.shape == (320, 256)
    assert np.allclose(matrix @ img.values.ravel(),
                       forward_project(img, rays).values.ravel(),
                       rtol=1e-12, atol=1e-12)
    with pytest.raises(InvalidArgumentError):
        system_matrix(rays, 65, 80.0)


def test_centered_disk_rows_match_chords():
    n, fov, radius = 128, 200.0, 60.0
    cfg = small_scanner(n_angles=36, n_d=96, det_pixel=4.0)
    rays = ray_set(cfg, ideal_geometry())
    img = make_disk_phantom(n, fov, radius)
    sino = forward_project(img, rays)

    direction = rays.det_centers - rays.source_pos[:, None, :]
    cross = (direction[..., 0] * -rays.source_pos[:, None, 1]
             - direction[..., 1] * -rays.source_pos[:, None, 0])
    distance = np.abs(cross) / np.linalg.norm(direction, axis=2)
    central = distance <= 0.7 * radius
    chords = 2 * np.sqrt(np.maximum(radius ** 2 - distance ** 2, 0.0))
    assert np.count_nonzero(central) > 0
    error = np.abs(sino.values - chords)[central]
    assert error.max() <= 3 * img.pixel_size
    # so the rows agree with each other as well
    rows = np.where(central, sino.values, 0.0)
    assert np.abs(rows - rows[0]).max() <= 6 * img.pixel_size


def test_translation_moves_trace():
    n, fov = 64, 64.0
    cfg = small_scanner(n_angles=4, n_d=200, det_pixel=1.0, r_s=200.0)
    g = ideal_geometry(r_d=200.0)
    rays = ray_set(cfg, g)
    magnification = (cfg.r_s + g.r_d) / cfg.r_s
    centroids = []
    elements = np.arange(cfg.n_d)
    for shift in (0, 6):
        values = np.zeros((n, n))
        values[n // 2 - 1 - shift, n // 2] = 1.0
        sino = forward_project(ImageGrid(n, fov, values), rays)
        # angle 0: detector axis is +y, so the trace follows the y shift
        row = sino.values[0]
        centroids.append(float(np.dot(elements, row) / row.sum()))
    expected = 6 * (fov / n) * magnification / cfg.det_pixel
    assert abs((centroids[1] - centroids[0]) - expected) <= 1.0


def test_adjoint_identity():
    n, fov = 64, 200.0
    cfg = small_scanner(n_angles=30, n_d=128, det_pixel=3.0)
    rays = ray_set(cfg, small_geometry())
    rng = np.random.default_rng(7)
    for _ in range(20):
        x = ImageGrid(n, fov, rng.standard_normal((n, n)))
        y = Sinogram(rng.standard_normal((30, 128)), rays.angles)
        ax = forward_project(x, rays).values
        aty = adjoint_project(y, rays, n, fov).values
        lhs = float(np.sum(ax * y.values))
        rhs = float(np.sum(x.values * aty))
        bound = 1e-10 * np.linalg.norm(ax) * np.linalg.norm(y.values)
        assert abs(lhs - rhs) <= bound


def test_adjoint_zero_and_single_ray():
    n, fov = 16, 80.0
    cfg = small_scanner(n_angles=6, n_d=24)
    rays = ray_set(cfg, small_geometry())
    zero = Sinogram(np.zeros((6, 24)), rays.angles)
    assert not np.any(adjoint_project(zero, rays, n, fov).values)

    values = np.zeros((6, 24))
    values[2, 11] = 1.0
    image = adjoint_project(Sinogram(values, rays.angles), rays, n, fov)
    cells = np.empty(2 * n + 2, dtype=np.int64)
    lengths = np.empty(2 * n + 2)
    count = trace_ray(rays.source_pos[2, 0], rays.source_pos[2, 1],
                      rays.det_centers[2, 11, 0], rays.det_centers[2, 11, 1],
                      n, fov, cells, lengths)
    expected = np.zeros(n * n)
    expected[cells[:count]] = lengths[:count]
    assert np.allclose(image.values.ravel(), expected)
    assert set(np.flatnonzero(image.values)) == set(cells[:count])


def test_adjoint_dimension_mismatch():
    rays = ray_set(small_scanner(n_angles=6, n_d=24), small_geometry())
    with pytest.raises(InvalidArgumentError):
        adjoint_project(Sinogram(np.zeros((5, 24)), np.zeros(5)),
                        rays, 16, 80.0)


def test_adjoint_is_repeatable():
    rays = ray_set(small_scanner(n_angles=20, n_d=48), small_geometry())
    y = Sinogram(np.random.default_rng(0).random((20, 48)), rays.angles)
    first = adjoint_project(y, rays, 32, 120.0).values
    second = adjoint_project(y, rays, 32, 120.0).values
    assert first.tobytes() == second.tobytes()


def test_projection_operator():
    n, fov = 16, 80.0
    rays = ray_set(small_scanner(n_angles=10, n_d=24), small_geometry())
    operator = ProjectionOperator(rays, n, fov)
    assert operator.shape == (240, 256)
    dense = system_matrix(rays, n, fov).toarray()
    x = random_image(n, 5).ravel()
    assert np.allclose(operator.forward(x), dense @ x)
    y = np.random.default_rng(6).random(240)
    assert np.allclose(operator.adjoint(y), dense.T @ y)
    assert np.allclose(operator.normal(x), dense.T @ (dense @ x))

    exact = np.linalg.norm(dense, 2)
    estimate = operator.norm_estimate()
    assert estimate <= exact * (1 + 1e-9)
    assert estimate >= 0.9 * exact
    assert operator.norm_estimate() == estimate


def test_intensities():
    values = np.full((3, 4), 5.0)
    assert not np.any(intensities_to_sinogram(values, 5.0).values)
    ones = intensities_to_sinogram(values * math.exp(-1.0), 5.0)
    assert np.allclose(ones.values, 1.0)
    with pytest.raises(InvalidArgumentError):
        intensities_to_sinogram(np.zeros((2, 2)), 1.0)
    with pytest.raises(InvalidArgumentError):
        intensities_to_sinogram(values, 0.0)


def test_intensities_round_trip():
    rays = ray_set(small_scanner(n_angles=8, n_d=24), small_geometry())
    sino = forward_project(ImageGrid(16, 80.0, 0.01 * random_image(16)),
                           rays)
    intensities = sinogram_to_intensities(sino, 1000.0)
    back = intensities_to_sinogram(intensities, 1000.0, sino.angles)
    assert np.allclose(back.values, sino.values, rtol=0, atol=1e-12)
    assert np.array_equal(back.angles, sino.angles)


def test_add_noise():
    sino = Sinogram(np.random.default_rng(1).random((100, 120)) + 1.0,
                    np.zeros(100))
    same = add_noise(sino, NoiseSpec(0.0, 3))
    assert np.array_equal(same.values, sino.values)

    first = add_noise(sino, NoiseSpec(0.02, 3))
    second = add_noise(sino, NoiseSpec(0.02, 3))
    assert np.array_equal(first.values, second.values)
    other = add_noise(sino, NoiseSpec(0.02, 4))
    assert not np.array_equal(first.values, other.values)

    ratio = (np.linalg.norm(first.values - sino.values)
             / np.linalg.norm(sino.values))
    assert 0.018 <= ratio <= 0.022
    with pytest.raises(InvalidArgumentError):
        NoiseSpec(-0.1, 0)


def test_sinogram_validation():
    with pytest.raises(InvalidArgumentError):
        Sinogram(np.zeros((3, 4)), np.zeros(2))
    with pytest.raises(InvalidArgumentError):
        Sinogram(np.full((2, 2), np.inf), np.zeros(2))
    sino = Sinogram(np.zeros((3, 4)), np.zeros(3))
    assert (sino.k, sino.m) == (3, 4)


def test_subsample_angles():
    cfg = small_scanner(n_angles=12, n_d=8)
    rays = ray_set(cfg, small_geometry())
    sino = Sinogram(np.arange(96.0).reshape(12, 8), rays.angles,
                    {"n_angles": 12})
    sparse = subsample_angles(sino, 4)
    assert sparse.k == 4
    assert np.array_equal(sparse.values, sino.values[::3])
    assert np.allclose(sparse.angles, ray_set(cfg.with_angles(4),
                                              small_geometry()).angles)
    assert sparse.geometry == {"n_angles": 12}
    with pytest.raises(InvalidArgumentError):
        subsample_angles(sino, 5)
