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
Differential evolution, DE/best/1/bin.

Random numbers come from per-candidate generators seeded with
(seed, generation, index), so evaluating a generation through any map
(serial or a thread pool) gives the same result.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from fanbeam import settings
from fanbeam.exceptions import InvalidArgumentError
from fanbeam.geometry import GeometryParams

__all__ = (
    "DeOptions",
    "OptimizerReport",
    "de_minimize",
    "latin_hypercube",
)

logger = logging.getLogger(__name__)

Bounds = Tuple[Tuple[float, float], ...]


@dataclass(frozen=True)
class DeOptions:
    pop_size: int = settings.DE_POP_SIZE
    mu: float = settings.DE_MU
    p_cross: float = settings.DE_P_CROSS
    max_gen: int = settings.DE_MAX_GEN
    conv_tol: float = settings.DE_CONV_TOL
    seed: int = settings.DE_SEED
    bounds: Bounds = settings.DE_BOUNDS

    def __post_init__(self):
        bounds = tuple((float(lo), float(hi)) for lo, hi in self.bounds)
        object.__setattr__(self, "bounds", bounds)
        if self.pop_size < 4:
            raise InvalidArgumentError(
                "pop_size must be >= 4, got {}".format(self.pop_size))
        if not 0 <= self.mu <= 2:
            raise InvalidArgumentError("mu must lie in [0, 2]")
        if not 0 <= self.p_cross <= 1:
            raise InvalidArgumentError("p_cross must lie in [0, 1]")
        if self.max_gen < 0 or self.conv_tol < 0 or self.seed < 0:
            raise InvalidArgumentError(
                "need max_gen, conv_tol and seed >= 0")
        if not bounds:
            raise InvalidArgumentError("bounds must not be empty")
        for lo, hi in bounds:
            if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
                raise InvalidArgumentError(
                    "bounds need finite low < high, got [{}, {}]".format(
                        lo, hi))

    @property
    def dim(self) -> int:
        return len(self.bounds)

    def to_dict(self):
        return {
            "pop_size": self.pop_size,
            "mu": self.mu,
            "p_cross": self.p_cross,
            "max_gen": self.max_gen,
            "conv_tol": self.conv_tol,
            "seed": self.seed,
            "bounds": [list(pair) for pair in self.bounds],
        }


@dataclass(eq=False)
class OptimizerReport:
    """
    Outcome of one optimizer run. ``trace`` holds the best value after
    initialisation and after every generation.
    """
    best_x: np.ndarray
    best_value: float
    trace: List[float]
    generations: int
    seed: int
    converged: bool
    n_evaluations: int
    mirrored: Optional[bool] = field(default=None)

    @property
    def best_theta(self) -> GeometryParams:
        return GeometryParams.from_vector(self.best_x)

    def to_dict(self):
        data = {
            "best_x": [float(v) for v in self.best_x],
            "best_value": self.best_value,
            "trace": list(self.trace),
            "generations": self.generations,
            "seed": self.seed,
            "converged": self.converged,
            "n_evaluations": self.n_evaluations,
        }
        if self.mirrored is not None:
            data["mirrored"] = self.mirrored
            data["best_theta"] = self.best_theta.to_dict()
        return data


def _stream(seed: int, generation: int, index: int) -> np.random.Generator:
    return np.random.default_rng([seed, generation, index])


def latin_hypercube(rng: np.random.Generator, pop_size: int,
                    dim: int) -> np.ndarray:
    """
    One sample per stratum in every dimension, strata shuffled
    independently per dimension; values in [0, 1).
    """
    segment = 1.0 / pop_size
    samples = segment * rng.uniform(size=(pop_size, dim)) \
        + np.linspace(0.0, 1.0, pop_size, endpoint=False)[:, None]
    population = np.zeros_like(samples)
    for j in range(dim):
        order = rng.permutation(pop_size)
        population[:, j] = samples[order, j]
    return population


def _converged(energies: np.ndarray, conv_tol: float) -> bool:
    return bool(np.std(energies) <= conv_tol * abs(np.mean(energies)))


def _trial(opts: DeOptions, generation: int, i: int, population: np.ndarray,
           best: int, others: np.ndarray) -> np.ndarray:
    """
    Mutant of the best member, recombined with it coordinate-wise; the
    last coordinate always comes from the mutant.
    """
    rng = _stream(opts.seed, generation, i)
    k1, k2 = rng.choice(others, size=2, replace=False)
    mutant = population[best] + opts.mu * (population[k1] - population[k2])
    cross = rng.uniform(size=opts.dim) < opts.p_cross
    cross[-1] = True
    return np.where(cross, mutant, population[best])


def de_minimize(
    fun: Callable[[np.ndarray], float],
    opts: DeOptions = None,
    *,
    map_fn: Callable = map,
    callback: Optional[Callable[[int, np.ndarray, float], None]] = None,
) -> OptimizerReport:
    """
    Minimize ``fun`` over the box ``opts.bounds``.

    Each generation builds every trial vector from the best member of the
    previous generation and evaluates them together with ``map_fn``. A
    trial replaces the member it was built for when it is not worse than
    that member, and the best trial becomes the new best member when
    f(u) <= f(x_best).
    """
    opts = opts or DeOptions()
    lower = np.array([lo for lo, _ in opts.bounds])
    upper = np.array([hi for _, hi in opts.bounds])
    size = opts.pop_size

    def evaluate(candidates: Sequence[np.ndarray]) -> np.ndarray:
        return np.array([float(v) for v in map_fn(fun, candidates)])

    unit = latin_hypercube(np.random.default_rng([opts.seed]), size, opts.dim)
    population = lower + unit * (upper - lower)
    energies = evaluate(list(population))
    n_evaluations = size
    best = int(np.argmin(energies))
    trace = [float(energies[best])]
    converged = False
    generation = 0

    while not converged and generation < opts.max_gen:
        generation += 1
        others = np.array([j for j in range(size) if j != best])
        trials = np.array([
            np.clip(_trial(opts, generation, i, population, best, others),
                    lower, upper)
            for i in range(size)
        ])

        trial_energies = evaluate(list(trials))
        n_evaluations += size
        best_energy = energies[best]
        improved = trial_energies <= energies
        population[improved] = trials[improved]
        energies[improved] = trial_energies[improved]
        challenger = int(np.argmin(trial_energies))
        if trial_energies[challenger] <= best_energy:
            best = challenger

        trace.append(float(energies[best]))
        logger.debug("DE generation %s: best %.10g, mean %.6g, std %.3g",
                     generation, trace[-1], np.mean(energies),
                     np.std(energies))
        if callback is not None:
            callback(generation, population[best].copy(), trace[-1])
        converged = _converged(energies, opts.conv_tol)

    if not converged:
        logger.info("DE stopped at the generation limit (%s).", generation)
    return OptimizerReport(
        best_x=population[best].copy(),
        best_value=float(energies[best]),
        trace=trace,
        generations=generation,
        seed=opts.seed,
        converged=converged,
        n_evaluations=n_evaluations,
    )
