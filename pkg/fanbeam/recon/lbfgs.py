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
Limited-memory BFGS with Armijo backtracking.
"""
import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, List, Tuple

import numpy as np

__all__ = (
    "LbfgsResult",
    "lbfgs_minimize",
)

logger = logging.getLogger(__name__)

FunAndGrad = Callable[[np.ndarray], Tuple[float, np.ndarray]]


@dataclass(eq=False)
class LbfgsResult:
    x: np.ndarray
    fun: float
    grad_norm: float
    iterations: int
    converged: bool
    message: str
    history: List[float] = field(default_factory=list)


def _two_loop(grad, s_list, y_list, rho_list):
    q = grad.copy()
    alphas = []
    for s, y, rho in zip(reversed(s_list), reversed(y_list),
                         reversed(rho_list)):
        alpha = rho * np.dot(s, q)
        q -= alpha * y
        alphas.append(alpha)
    if s_list:
        s, y = s_list[-1], y_list[-1]
        q *= np.dot(s, y) / np.dot(y, y)
    for (s, y, rho), alpha in zip(zip(s_list, y_list, rho_list),
                                  reversed(alphas)):
        beta = rho * np.dot(y, q)
        q += (alpha - beta) * s
    return -q


def lbfgs_minimize(
    fun_and_grad: FunAndGrad,
    x0: np.ndarray,
    *,
    memory: int = 10,
    max_iter: int = 200,
    grad_tol: float = 1e-6,
    c1: float = 1e-4,
    shrink: float = 0.5,
    max_backtracks: int = 50,
) -> LbfgsResult:
    """
    Minimize a smooth function. Stops when ||g|| <= grad_tol * (1 + |f|).
    Only steps passing the sufficient-decrease test are accepted, so the
    objective never increases; a failed line search ends the run with
    ``converged=False`` and the current (best) iterate.
    """
    x = np.array(x0, dtype=np.float64, copy=True)
    f, g = fun_and_grad(x)
    history = [float(f)]
    s_list, y_list, rho_list = deque(maxlen=memory), deque(maxlen=memory), \
        deque(maxlen=memory)

    for iteration in range(max_iter + 1):
        grad_norm = float(np.linalg.norm(g))
        if grad_norm <= grad_tol * (1.0 + abs(f)):
            return LbfgsResult(x, float(f), grad_norm, iteration, True,
                               "gradient tolerance reached", history)
        if iteration == max_iter:
            break

        direction = _two_loop(g, list(s_list), list(y_list), list(rho_list))
        slope = float(np.dot(g, direction))
        if not s_list or slope >= 0.0:
            if s_list:
                logger.debug("Not a descent direction, restarting memory.")
                s_list.clear()
                y_list.clear()
                rho_list.clear()
            direction = -g / grad_norm
            slope = float(np.dot(g, direction))

        step = 1.0
        for _ in range(max_backtracks):
            x_new = x + step * direction
            f_new, g_new = fun_and_grad(x_new)
            if np.isfinite(f_new) and f_new <= f + c1 * step * slope:
                break
            step *= shrink
        else:
            logger.warning("Line search failed after %s backtracks at "
                           "iteration %s.", max_backtracks, iteration)
            return LbfgsResult(x, float(f), grad_norm, iteration, False,
                               "line search failed", history)

        s = x_new - x
        y = g_new - g
        sy = float(np.dot(s, y))
        if sy > 1e-12 * float(np.dot(y, y)) and sy > 0.0:
            s_list.append(s)
            y_list.append(y)
            rho_list.append(1.0 / sy)
        x, f, g = x_new, f_new, g_new
        history.append(float(f))
        logger.debug("L-BFGS iteration %s: F = %.10g, |g| = %.4g, step %.3g",
                     iteration + 1, f, np.linalg.norm(g), step)

    grad_norm = float(np.linalg.norm(g))
    logger.warning("L-BFGS stopped after %s iterations, |g| = %.4g.",
                   max_iter, grad_norm)
    return LbfgsResult(x, float(f), grad_norm, max_iter, False,
                       "maximum number of iterations reached", history)
