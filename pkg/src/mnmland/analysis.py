"""Pairwise mutual information, the per-problem simulation and (M, sigma) sweeps.

Mutual information is reported in nats.
"""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from typing import Sequence

import numpy as np
import numpy.typing as npt

from . import textio
from .distribution import (
    DistributionTable,
    UnivariateMarginals,
    bivariate_marginal,
    boltzmann,
    max_abs_difference,
    product_distribution,
    univariate_marginals,
)
from .errors import MnmError, ParameterError
from .landscape import generate_landscape
from .mop import MnmProblem, ObjectiveTable, full_table, make_bi_objective
from .pareto import FrontComparison, FrontResult, compare_fronts, front_from_distributions, pareto_front

MI_TOLERANCE = 1e-12
_MASK64 = (1 << 64) - 1


def mutual_information_2x2(table: npt.ArrayLike) -> float:
    """MI of a 2x2 joint table, ``sum p(a,b) ln(p(a,b) / (p(a) p(b)))``."""
    t = np.asarray(table, dtype=np.float64)
    if t.shape != (2, 2) or not np.all(np.isfinite(t)) or np.any(t < 0):
        raise ParameterError(f"expected a non-negative 2x2 joint table, got {t.tolist()}")
    if abs(t.sum() - 1.0) > 1e-12:
        raise ParameterError(f"joint table sums to {t.sum()!r}, not 1")
    pa = t.sum(axis=1)
    pb = t.sum(axis=0)
    total = 0.0
    for a in range(2):
        for b in range(2):
            if t[a, b] > 0:
                total += t[a, b] * math.log(t[a, b] / (pa[a] * pb[b]))
    if total < -MI_TOLERANCE:
        raise MnmError(f"negative mutual information {total!r}: inconsistent joint table")
    return max(total, 0.0)


def mutual_information(dist: DistributionTable, i: int, j: int) -> float:
    """Mutual information between ``x_i`` and ``x_j`` (1-based), in nats."""
    if i == j:
        raise ParameterError(f"mutual information needs two distinct variables: i=j={i}")
    a, b = sorted((i, j))
    return mutual_information_2x2(bivariate_marginal(dist, a, b).table)


@dataclass(frozen=True)
class MutualInfoMatrix:
    """Symmetric ``N x N`` matrix of pairwise MI; the diagonal is 0."""

    n_vars: int
    values: npt.NDArray[np.float64]

    def off_diagonal(self) -> npt.NDArray[np.float64]:
        return self.values[np.triu_indices(self.n_vars, k=1)]

    def max(self) -> float:
        return float(self.off_diagonal().max()) if self.n_vars > 1 else 0.0

    def mean(self) -> float:
        return float(self.off_diagonal().mean()) if self.n_vars > 1 else 0.0

    def to_csv(self) -> str:
        rows = (
            (i, j, float(self.values[i - 1, j - 1]))
            for i, j in itertools.combinations(range(1, self.n_vars + 1), 2)
        )
        return textio.csv_text(["i", "j", "mi_nats"], rows)


def mi_matrix(dist: DistributionTable) -> MutualInfoMatrix:
    n = dist.n_vars
    values = np.zeros((n, n))
    for i, j in itertools.combinations(range(1, n + 1), 2):
        values[i - 1, j - 1] = values[j - 1, i - 1] = mutual_information(dist, i, j)
    values.setflags(write=False)
    return MutualInfoMatrix(n, values)


# --------------------------------------------------------------------------
# one problem


@dataclass(frozen=True)
class SimulationRecord:
    """Everything the simulation computes for one mNM problem.

    ``true_front`` comes from the objective values, ``boltzmann_front`` from
    the Boltzmann probabilities and ``factorized_front`` from the univariate
    product approximations. ``comparison`` relates the true and factorized
    fronts, ``boltzmann_comparison`` the true and Boltzmann fronts.
    """

    problem: MnmProblem
    temperature: float
    table: ObjectiveTable
    boltzmann: tuple[DistributionTable, ...]
    marginals: tuple[UnivariateMarginals, ...]
    products: tuple[DistributionTable, ...]
    true_front: FrontResult
    boltzmann_front: FrontResult
    factorized_front: FrontResult
    comparison: FrontComparison
    boltzmann_comparison: FrontComparison

    def factorization_gaps(self) -> list[float]:
        """L-infinity distance between each Boltzmann table and its approximation."""
        return [max_abs_difference(b, q) for b, q in zip(self.boltzmann, self.products)]


def run_simulation(
    problem: MnmProblem, temperature: float = 1.0, normalize: bool = True
) -> SimulationRecord:
    """Evaluate, build Boltzmann and univariate tables, and compare fronts.

    Parameters
    ----------
    problem : MnmProblem
    temperature : float
        Boltzmann temperature shared by all objectives.
    normalize : bool
        Feed normalized objective values (default) or raw values to the
        Boltzmann distribution.
    """
    table = full_table(problem, normalize=normalize)
    dists = tuple(boltzmann(table.column(k), temperature) for k in range(table.n_objectives))
    margs = tuple(univariate_marginals(d) for d in dists)
    products = tuple(product_distribution(mg) for mg in margs)
    true_front = pareto_front(table.values)
    b_front = front_from_distributions(dists)
    q_front = front_from_distributions(products)
    return SimulationRecord(
        problem=problem,
        temperature=float(temperature),
        table=table,
        boltzmann=dists,
        marginals=margs,
        products=products,
        true_front=true_front,
        boltzmann_front=b_front,
        factorized_front=q_front,
        comparison=compare_fronts(true_front, q_front),
        boltzmann_comparison=compare_fronts(true_front, b_front),
    )


def distinct_value_count(values: npt.ArrayLike, decimals: int = 3) -> int:
    """Number of distinct objective vectors after rounding to ``decimals``.

    On normalized tables the default resolution of 1e-3 is roughly what a
    scatter plot of the objective space can tell apart.
    """
    rounded = np.round(np.asarray(values, dtype=np.float64), decimals) + 0.0
    return int(np.unique(rounded, axis=0).shape[0])


# --------------------------------------------------------------------------
# sweeps


def _mix64(z: int) -> int:
    # splitmix64 finalizer, a bijection on 64-bit integers
    z = (z + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def model_seed(base_seed: int, model_index: int) -> int:
    """Seed of reference model ``model_index`` in a sweep.

    ``splitmix64(base_seed << 32 | model_index)``, injective for
    ``base_seed, model_index < 2**32``. The same reference model is used
    for every M (nested truncations) and every sigma (shared Gaussian draws).
    """
    if not 0 <= base_seed < 2**32 or not 0 <= model_index < 2**32:
        raise ParameterError(
            f"base_seed and model_index must lie in [0, 2**32): {base_seed}, {model_index}"
        )
    return _mix64((base_seed << 32) | model_index)


def default_sigma_grid() -> tuple[float, ...]:
    return tuple(float(2 * i + 1) for i in range(10))


@dataclass(frozen=True)
class SweepConfig:
    """Grid of (M, sigma) cells, each averaged over ``models_per_cell`` models.

    ``objective`` (1-based) selects which objective of the bi-objective
    problem ``(m1 = m2 = M)`` is analysed for mutual information.
    """

    n_vars: int = 10
    m_grid: tuple[int, ...] = tuple(range(1, 10))
    sigma_grid: tuple[float, ...] = field(default_factory=default_sigma_grid)
    models_per_cell: int = 10
    base_seed: int = 0
    temperature: float = 1.0
    objective: int = 2
    normalize: bool = True
    front_metrics: bool = True
    distinct_decimals: int = 3

    def __post_init__(self) -> None:
        object.__setattr__(self, "m_grid", tuple(int(m) for m in self.m_grid))
        object.__setattr__(self, "sigma_grid", tuple(float(s) for s in self.sigma_grid))
        if self.n_vars < 2:
            raise ParameterError(f"n_vars must be >= 2 for pairwise analysis: {self.n_vars}")
        if not self.m_grid or not self.sigma_grid:
            raise ParameterError("m_grid and sigma_grid must be non-empty")
        for m in self.m_grid:
            if not 1 <= m <= self.n_vars:
                raise ParameterError(f"M={m} outside [1, {self.n_vars}]")
        for s in self.sigma_grid:
            if not (math.isfinite(s) and s > 0):
                raise ParameterError(f"sigma={s} must be positive")
        if len(set(self.m_grid)) != len(self.m_grid) or len(set(self.sigma_grid)) != len(self.sigma_grid):
            raise ParameterError("grid values must be unique")
        if self.models_per_cell < 1:
            raise ParameterError(f"models_per_cell must be >= 1: {self.models_per_cell}")
        if not (math.isfinite(self.temperature) and self.temperature > 0):
            raise ParameterError(f"temperature must be positive: {self.temperature}")
        if self.objective not in (1, 2):
            raise ParameterError(f"objective must be 1 or 2: {self.objective}")
        model_seed(self.base_seed, self.models_per_cell - 1)

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True)
class ModelRecord:
    M: int
    sigma: float
    model_index: int
    seed: int
    mi_max: float
    mi_mean: float
    front_size: int
    front_jaccard: float
    distinct_value_count: int


RECORD_COLUMNS = tuple(f.name for f in fields(ModelRecord))


@dataclass(frozen=True)
class CellSummary:
    """Aggregates over the models of one (M, sigma) cell (population std)."""

    M: int
    sigma: float
    n_models: int
    mi_max_mean: float
    mi_max_std: float
    mi_mean_mean: float
    mi_mean_std: float
    front_size_mean: float
    front_jaccard_mean: float
    distinct_value_count_mean: float


CELL_COLUMNS = tuple(f.name for f in fields(CellSummary))


def run_model(config: SweepConfig, M: int, sigma: float, model_index: int) -> ModelRecord:
    """Analyse one reference model at one (M, sigma) grid point."""
    seed = model_seed(config.base_seed, model_index)
    # canonical term order makes this the order-M truncation of the reference
    # model of any higher order
    parent = generate_landscape(config.n_vars, M, sigma, seed)
    problem = make_bi_objective(parent, M, M)
    k = config.objective - 1
    if config.front_metrics:
        sim = run_simulation(problem, config.temperature, config.normalize)
        dist = sim.boltzmann[k]
        front_size = sim.true_front.size
        jaccard = sim.comparison.jaccard
        distinct = distinct_value_count(sim.table.values, config.distinct_decimals)
    else:
        table = full_table(problem, normalize=config.normalize)
        dist = boltzmann(table.column(k), config.temperature)
        front_size, jaccard, distinct = 0, float("nan"), 0
    mi = mi_matrix(dist)
    return ModelRecord(M, sigma, model_index, seed, mi.max(), mi.mean(), front_size, jaccard, distinct)


def run_cell(config: SweepConfig, M: int, sigma: float) -> list[ModelRecord]:
    return [run_model(config, M, sigma, k) for k in range(config.models_per_cell)]


def _run_cell_args(args: tuple[SweepConfig, int, float]) -> list[ModelRecord]:
    return run_cell(*args)


def _summarize(M: int, sigma: float, records: Sequence[ModelRecord]) -> CellSummary:
    mi_max = np.array([r.mi_max for r in records])
    mi_mean = np.array([r.mi_mean for r in records])
    return CellSummary(
        M=M,
        sigma=sigma,
        n_models=len(records),
        mi_max_mean=float(mi_max.mean()),
        mi_max_std=float(mi_max.std()),
        mi_mean_mean=float(mi_mean.mean()),
        mi_mean_std=float(mi_mean.std()),
        front_size_mean=float(np.mean([r.front_size for r in records])),
        front_jaccard_mean=float(np.mean([r.front_jaccard for r in records])),
        distinct_value_count_mean=float(np.mean([r.distinct_value_count for r in records])),
    )


@dataclass(frozen=True)
class SweepResult:
    config: SweepConfig
    records: tuple[ModelRecord, ...]
    cells: tuple[CellSummary, ...]

    def cell(self, M: int, sigma: float) -> CellSummary:
        for c in self.cells:
            if c.M == M and c.sigma == float(sigma):
                return c
        raise KeyError((M, sigma))

    def matrix(self, statistic: str = "mi_max_mean") -> npt.NDArray[np.float64]:
        """Cell statistic as an array of shape ``(len(m_grid), len(sigma_grid))``."""
        if statistic not in CELL_COLUMNS:
            raise ParameterError(f"unknown statistic {statistic!r}")
        out = np.empty((len(self.config.m_grid), len(self.config.sigma_grid)))
        for c in self.cells:
            out[self.config.m_grid.index(c.M), self.config.sigma_grid.index(c.sigma)] = getattr(c, statistic)
        return out

    def records_csv(self) -> str:
        return textio.csv_text(
            RECORD_COLUMNS, ([getattr(r, c) for c in RECORD_COLUMNS] for r in self.records)
        )

    def cells_csv(self) -> str:
        return textio.csv_text(
            CELL_COLUMNS, ([getattr(c, col) for col in CELL_COLUMNS] for c in self.cells)
        )

    def plot_data(self) -> dict:
        """Grid axes plus matrices of cell means, enough to redraw the MI heat map."""
        return {
            "units": "nats",
            "statistic": "mi_max",
            "config": self.config.to_dict(),
            "m_grid": list(self.config.m_grid),
            "sigma_grid": list(self.config.sigma_grid),
            "mi_max_mean": self.matrix("mi_max_mean").tolist(),
            "mi_max_std": self.matrix("mi_max_std").tolist(),
            "mi_mean_mean": self.matrix("mi_mean_mean").tolist(),
        }


def run_sweep(config: SweepConfig, workers: int = 1) -> SweepResult:
    """Run every (M, sigma) cell of ``config``.

    Cells are independent and may run in ``workers`` processes; records are
    always assembled in grid order (M outer, sigma inner, model index), so
    the result does not depend on ``workers``.
    """
    if workers < 1:
        raise ParameterError(f"workers must be >= 1: {workers}")
    grid = [(config, M, s) for M in config.m_grid for s in config.sigma_grid]
    if workers == 1:
        per_cell = [_run_cell_args(g) for g in grid]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            per_cell = list(pool.map(_run_cell_args, grid))
    records = tuple(r for cell in per_cell for r in cell)
    cells = tuple(_summarize(M, s, recs) for (_, M, s), recs in zip(grid, per_cell))
    return SweepResult(config, records, cells)
