"""Boltzmann distributions over the full search space and their marginals.

All tables are indexed by solution index (bit ``i - 1`` holds ``x_i``).
Internally a length-``2^N`` table is viewed as an N-dimensional ``2 x ... x 2``
array in C order, so variable ``x_i`` lives on axis ``N - i``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from . import textio
from .errors import ParameterError

SUM_TOLERANCE = 1e-12


class Source(enum.Enum):
    BOLTZMANN = "boltzmann"
    UNIVARIATE_PRODUCT = "univariate_product"
    GIVEN = "given"


def _n_vars_of(size: int) -> int:
    n = size.bit_length() - 1
    if size < 2 or (1 << n) != size:
        raise ParameterError(f"table length must be a power of two >= 2, got {size}")
    return n


def _axis(n_vars: int, i: int) -> int:
    return n_vars - i


@dataclass(frozen=True)
class DistributionTable:
    """Probability of each of the ``2^N`` solutions."""

    probs: npt.NDArray[np.float64]
    temperature: float = 1.0
    source: Source = Source.GIVEN

    def __post_init__(self) -> None:
        probs = np.array(self.probs, dtype=np.float64)
        if probs.ndim != 1:
            raise ParameterError(f"probabilities must be one-dimensional, got shape {probs.shape}")
        _n_vars_of(probs.size)
        if not np.all(np.isfinite(probs)) or np.any(probs < 0):
            raise ParameterError("probabilities must be finite and non-negative")
        total = math.fsum(probs.tolist())
        if abs(total - 1.0) > SUM_TOLERANCE:
            raise ParameterError(f"probabilities sum to {total!r}, not 1")
        if not (math.isfinite(self.temperature) and self.temperature > 0):
            raise ParameterError(f"temperature must be positive: {self.temperature}")
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "source", Source(self.source))

    @property
    def n_vars(self) -> int:
        return _n_vars_of(self.probs.size)

    def cube(self) -> npt.NDArray[np.float64]:
        return self.probs.reshape((2,) * self.n_vars)

    def to_csv(self) -> str:
        return textio.csv_text(["solution_index", "p"], enumerate(self.probs.tolist()))


@dataclass(frozen=True)
class UnivariateMarginals:
    """``p_one[i - 1]`` is the probability that ``x_i = 1``."""

    p_one: npt.NDArray[np.float64]
    temperature: float = 1.0

    def __post_init__(self) -> None:
        p = np.array(self.p_one, dtype=np.float64)
        if p.ndim != 1 or p.size == 0:
            raise ParameterError("marginals must be a non-empty vector")
        if not np.all(np.isfinite(p)) or np.any(p < 0) or np.any(p > 1):
            raise ParameterError("marginals must lie in [0, 1]")
        p.setflags(write=False)
        object.__setattr__(self, "p_one", p)

    @property
    def n_vars(self) -> int:
        return self.p_one.size

    def to_csv(self) -> str:
        return textio.csv_text(
            ["variable", "p_one"], ((i + 1, p) for i, p in enumerate(self.p_one.tolist()))
        )


@dataclass(frozen=True)
class BivariateMarginal:
    """Joint table ``table[a, b] = p(x_i = a, x_j = b)`` for ``i < j``."""

    pair: tuple[int, int]
    table: npt.NDArray[np.float64]


def boltzmann(values: npt.ArrayLike, temperature: float = 1.0) -> DistributionTable:
    """Boltzmann distribution ``p(x) = exp(g(x)/T) / sum_x' exp(g(x')/T)``.

    The maximum is subtracted before exponentiating. Higher values get
    higher probability, so the most probable solutions are the optima.

    Parameters
    ----------
    values : array_like
        Objective value of every solution, length ``2^N``.
    temperature : float
        Positive temperature ``T``; defaults to 1.
    """
    values = np.asarray(values, dtype=np.float64)
    if values.ndim != 1:
        raise ParameterError(f"values must be one-dimensional, got shape {values.shape}")
    if not np.all(np.isfinite(values)):
        raise ParameterError("values must be finite")
    temperature = float(temperature)
    if not (math.isfinite(temperature) and temperature > 0):
        raise ParameterError(f"temperature must be positive: {temperature}")
    weights = np.exp((values - values.max()) / temperature)
    # numpy's pairwise summation: fixed reduction order, reproducible
    probs = weights / weights.sum()
    return DistributionTable(probs, temperature, Source.BOLTZMANN)


def univariate_marginals(dist: DistributionTable) -> UnivariateMarginals:
    n = dist.n_vars
    cube = dist.cube()
    p_one = np.empty(n)
    for i in range(1, n + 1):
        others = tuple(a for a in range(n) if a != _axis(n, i))
        p_one[i - 1] = cube.sum(axis=others)[1]
    return UnivariateMarginals(np.clip(p_one, 0.0, 1.0), dist.temperature)


def bivariate_marginal(dist: DistributionTable, i: int, j: int) -> BivariateMarginal:
    """Joint distribution of ``(x_i, x_j)``, 1-based ``i < j``."""
    n = dist.n_vars
    if not 1 <= i < j <= n:
        raise ParameterError(f"need 1 <= i < j <= {n}: i={i}, j={j}")
    ai, aj = _axis(n, i), _axis(n, j)
    others = tuple(a for a in range(n) if a not in (ai, aj))
    # remaining axes stay in ascending order: (aj, ai) since aj < ai
    table = dist.cube().sum(axis=others).T
    return BivariateMarginal((i, j), np.ascontiguousarray(table))


def product_distribution(marg: UnivariateMarginals) -> DistributionTable:
    """``q(x) = prod_i p_i^{x_i} (1 - p_i)^{1 - x_i}``."""
    probs = np.ones(1)
    # highest variable first so x_1 ends up as the least significant bit
    for p in marg.p_one[::-1].tolist():
        probs = np.multiply.outer(probs, [1.0 - p, p]).ravel()
    return DistributionTable(probs, marg.temperature, Source.UNIVARIATE_PRODUCT)


def univariate_approximation(dist: DistributionTable) -> DistributionTable:
    return product_distribution(univariate_marginals(dist))


def max_abs_difference(a: DistributionTable, b: DistributionTable) -> float:
    """L-infinity distance between two tables over the same space."""
    if a.probs.shape != b.probs.shape:
        raise ParameterError("distributions are over different search spaces")
    return float(np.max(np.abs(a.probs - b.probs)))
