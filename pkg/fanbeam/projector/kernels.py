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
numba kernels of the discrete fan-beam model.

Rays are traced with an incremental parametric (Siddon/Jacobs) traversal in
grid units: gx = (x + fov/2) / h counts columns from the left edge and
gy = (fov/2 - y) / h counts rows from the top edge. A ray that runs exactly
along a cell boundary is charged to the cell on the positive-index side.
"""
import math

import numpy as np
from numba import njit, prange

__all__ = (
    "trace_ray",
    "forward_kernel",
    "adjoint_kernel",
    "backproject_kernel",
)


@njit(cache=True)
def trace_ray(x0, y0, x1, y1, n, fov, cells, lengths):
    """
    Write the flat indices (row * n + col) of the cells crossed by the
    segment (x0, y0) -> (x1, y1) and the intersection lengths in mm into
    ``cells`` / ``lengths`` (capacity >= 2n + 2). Returns the count.
    """
    h = fov / n
    half = 0.5 * fov
    length = math.sqrt((x1 - x0) ** 2 + (y1 - y0) ** 2)
    gx0 = (x0 + half) / h
    gy0 = (half - y0) / h
    dx = (x1 + half) / h - gx0
    dy = (half - y1) / h - gy0

    a_min = 0.0
    a_max = 1.0
    if dx != 0.0:
        a_lo = -gx0 / dx
        a_hi = (n - gx0) / dx
        a_min = max(a_min, min(a_lo, a_hi))
        a_max = min(a_max, max(a_lo, a_hi))
    elif gx0 < 0.0 or gx0 >= n:
        return 0
    if dy != 0.0:
        a_lo = -gy0 / dy
        a_hi = (n - gy0) / dy
        a_min = max(a_min, min(a_lo, a_hi))
        a_max = min(a_max, max(a_lo, a_hi))
    elif gy0 < 0.0 or gy0 >= n:
        return 0
    if a_min >= a_max:
        return 0

    gx = gx0 + a_min * dx
    gy = gy0 + a_min * dy
    if dx < 0.0:
        col = int(math.ceil(gx)) - 1
    else:
        col = int(math.floor(gx))
    if dy < 0.0:
        row = int(math.ceil(gy)) - 1
    else:
        row = int(math.floor(gy))
    col = min(max(col, 0), n - 1)
    row = min(max(row, 0), n - 1)

    inf = np.inf
    if dx > 0.0:
        step_x = 1
        ax_next = (col + 1 - gx0) / dx
        ax_step = 1.0 / dx
    elif dx < 0.0:
        step_x = -1
        ax_next = (col - gx0) / dx
        ax_step = -1.0 / dx
    else:
        step_x = 0
        ax_next = inf
        ax_step = inf
    if dy > 0.0:
        step_y = 1
        ay_next = (row + 1 - gy0) / dy
        ay_step = 1.0 / dy
    elif dy < 0.0:
        step_y = -1
        ay_next = (row - gy0) / dy
        ay_step = -1.0 / dy
    else:
        step_y = 0
        ay_next = inf
        ay_step = inf

    count = 0
    a_cur = a_min
    while a_cur < a_max:
        a_new = min(ax_next, ay_next, a_max)
        if a_new > a_cur:
            cells[count] = row * n + col
            lengths[count] = (a_new - a_cur) * length
            count += 1
        if a_new >= a_max:
            break
        if ax_next <= a_new:
            col += step_x
            ax_next += ax_step
        if ay_next <= a_new:
            row += step_y
            ay_next += ay_step
        if col < 0 or col >= n or row < 0 or row >= n:
            break
        a_cur = a_new
    return count


@njit(parallel=True, cache=True)
def forward_kernel(flat, n, fov, source_pos, det_centers):
    """ One sinogram row per angle; rows are independent """
    n_angles = det_centers.shape[0]
    n_det = det_centers.shape[1]
    out = np.zeros((n_angles, n_det))
    for k in prange(n_angles):
        cells = np.empty(2 * n + 2, dtype=np.int64)
        lengths = np.empty(2 * n + 2, dtype=np.float64)
        sx = source_pos[k, 0]
        sy = source_pos[k, 1]
        for i in range(n_det):
            count = trace_ray(sx, sy, det_centers[k, i, 0],
                              det_centers[k, i, 1], n, fov, cells, lengths)
            total = 0.0
            for j in range(count):
                total += flat[cells[j]] * lengths[j]
            out[k, i] = total
    return out


@njit(parallel=True, cache=True)
def adjoint_kernel(values, n, fov, source_pos, det_centers, n_chunks):
    """
    Scatter every ray value back along its cells. Chunk c owns the angles
    c, c + n_chunks, ... and its own buffer; buffers are summed in chunk
    order so the result only depends on n_chunks.
    """
    n_angles = det_centers.shape[0]
    n_det = det_centers.shape[1]
    buffers = np.zeros((n_chunks, n * n))
    for c in prange(n_chunks):
        cells = np.empty(2 * n + 2, dtype=np.int64)
        lengths = np.empty(2 * n + 2, dtype=np.float64)
        for k in range(c, n_angles, n_chunks):
            sx = source_pos[k, 0]
            sy = source_pos[k, 1]
            for i in range(n_det):
                value = values[k, i]
                if value == 0.0:
                    continue
                count = trace_ray(sx, sy, det_centers[k, i, 0],
                                  det_centers[k, i, 1], n, fov,
                                  cells, lengths)
                for j in range(count):
                    buffers[c, cells[j]] += value * lengths[j]
    out = np.zeros(n * n)
    for c in range(n_chunks):
        out += buffers[c]
    return out


@njit(parallel=True, cache=True)
def backproject_kernel(filtered, n, fov, source_pos, det_mid, det_axis,
                       e_r, det_pixel, r_s, distance, scale):
    """
    Pixel-driven fan-beam backprojection of pre-weighted, filtered rows.
    The source-to-pixel ray is intersected with each detector line, the
    row is linearly interpolated there and weighted by
    distance * r_s / U^2, U the source-to-pixel distance along e_r.
    """
    n_angles = filtered.shape[0]
    n_det = filtered.shape[1]
    h = fov / n
    center = 0.5 * (n_det - 1)
    out = np.zeros((n, n))
    for r in prange(n):
        y = (0.5 * n - r - 0.5) * h
        for c in range(n):
            x = (c + 0.5 - 0.5 * n) * h
            total = 0.0
            for k in range(n_angles):
                sx = source_pos[k, 0]
                sy = source_pos[k, 1]
                vx = x - sx
                vy = y - sy
                wx = det_mid[k, 0] - sx
                wy = det_mid[k, 1] - sy
                ax = det_axis[k, 0]
                ay = det_axis[k, 1]
                det = ax * vy - vx * ay
                if det == 0.0:
                    continue
                t = (ax * wy - wx * ay) / det
                if t <= 0.0:
                    continue
                u = (vx * wy - vy * wx) / det
                pos = u / det_pixel + center
                if pos < 0.0 or pos > n_det - 1:
                    continue
                i0 = min(int(pos), n_det - 2)
                frac = pos - i0
                sample = (1.0 - frac) * filtered[k, i0] \
                    + frac * filtered[k, i0 + 1]
                depth = vx * e_r[k, 0] + vy * e_r[k, 1]
                if depth <= 0.0:
                    continue
                total += sample * distance * r_s / (depth * depth)
            out[r, c] = total * scale
    return out
