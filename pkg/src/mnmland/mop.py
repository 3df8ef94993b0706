"""Multi-objective NM (mNM) problems over bit vectors in {0,1}^N.

Solutions are addressed by an integer index in ``[0, 2^N)``; variable
``x_i`` (1-based) is bit ``i - 1`` of the index, least-significant bit
first. Every table in the package uses this row order.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import numpy.typing as npt

from . import textio
from .errors import NormalizationError, ParameterError
from .landscape import NmLandscape, truncate


class Transform(enum.Enum):
    """Map from a bit ``x_i`` to the spin fed to the landscape."""

    NEGATE = "negate"  # y_i = -2 x_i + 1
    IDENTITY_SIGN = "identity_sign"  # z_i = 2 x_i - 1

    def apply(self, x: npt.ArrayLike) -> npt.NDArray[np.int64]:
        x = np.asarray(x, dtype=np.int64)
        if self is Transform.NEGATE:
            return 1 - 2 * x
        return 2 * x - 1


def bits_from_index(index: int, n_vars: int) -> npt.NDArray[np.int64]:
    """Bit vector ``(x_1, ..., x_N)`` of a solution index (LSB = x_1)."""
    if not 0 <= index < (1 << n_vars):
        raise ParameterError(f"index {index} out of range for N={n_vars}")
    return (int(index) >> np.arange(n_vars)) & 1


def index_from_bits(x: npt.ArrayLike) -> int:
    x = _check_bits(x)
    return int(np.dot(x, 1 << np.arange(x.size, dtype=np.int64)))


def _check_bits(x: npt.ArrayLike, n_vars: int | None = None) -> npt.NDArray[np.int64]:
    x = np.asarray(x)
    if x.ndim != 1 or (n_vars is not None and x.shape[0] != n_vars):
        raise ParameterError(f"bit vector must have length {n_vars}, got shape {x.shape}")
    if not np.all((x == 0) | (x == 1)):
        raise ParameterError("bit vector entries must be 0 or 1")
    return x.astype(np.int64)


@dataclass(frozen=True)
class ObjectiveSpec:
    landscape: NmLandscape
    transform: Transform

    def __post_init__(self) -> None:
        object.__setattr__(self, "transform", Transform(self.transform))


@dataclass(frozen=True)
class MnmProblem:
    """An ordered list of ``m >= 2`` objectives over a shared bit string."""

    n_vars: int
    objectives: tuple[ObjectiveSpec, ...]

    def __post_init__(self) -> None:
        objectives = tuple(self.objectives)
        object.__setattr__(self, "objectives", objectives)
        if len(objectives) < 2:
            raise ParameterError(f"an mNM problem needs m >= 2 objectives, got {len(objectives)}")
        for k, spec in enumerate(objectives, start=1):
            if spec.landscape.n_vars != self.n_vars:
                raise ParameterError(
                    f"objective {k} has N={spec.landscape.n_vars}, problem has N={self.n_vars}"
                )

    @property
    def n_objectives(self) -> int:
        return len(self.objectives)

    def metadata(self) -> dict:
        return {
            "n_vars": self.n_vars,
            "objectives": [
                {
                    "transform": spec.transform.value,
                    "max_order": spec.landscape.max_order,
                    "n_terms": spec.landscape.n_terms,
                    "sigma": spec.landscape.sigma,
                    "seed": spec.landscape.seed,
                }
                for spec in self.objectives
            ],
        }


def make_bi_objective(parent: NmLandscape, m1: int, m2: int) -> MnmProblem:
    """Nested bi-objective problem built from one parent landscape.

    ``f_1`` keeps the parent's terms up to order ``m1`` and reads the bits
    through :attr:`Transform.NEGATE`; ``f_2`` keeps terms up to ``m2`` and
    uses :attr:`Transform.IDENTITY_SIGN`. Shared-order coefficients are the
    parent's, so ``f_1`` is maximized at all-zeros and ``f_2`` at all-ones.
    """
    if not 1 <= m1 <= m2 <= parent.max_order:
        raise ParameterError(
            f"orders must satisfy 1 <= m1 <= m2 <= {parent.max_order}: m1={m1}, m2={m2}"
        )
    return MnmProblem(
        parent.n_vars,
        (
            ObjectiveSpec(truncate(parent, m1), Transform.NEGATE),
            ObjectiveSpec(truncate(parent, m2), Transform.IDENTITY_SIGN),
        ),
    )


def evaluate_objective(spec: ObjectiveSpec, x: npt.ArrayLike) -> float:
    x = _check_bits(x, spec.landscape.n_vars)
    return spec.landscape.evaluate(spec.transform.apply(x))


def objective_column(spec: ObjectiveSpec) -> npt.NDArray[np.float64]:
    """Raw values of one objective for every solution index."""
    spin_table = spec.landscape.table()
    # NEGATE sends x_i = 1 to spin -1, so the spin mask is the index itself;
    # IDENTITY_SIGN sends x_i = 0 to -1, i.e. the complemented index
    if spec.transform is Transform.NEGATE:
        return spin_table
    return spin_table[::-1].copy()


def scale_by_terms(values: npt.ArrayLike, n_terms: Sequence[int]) -> npt.NDArray[np.float64]:
    """First normalization step: divide column ``i`` by its term count."""
    return np.asarray(values, dtype=np.float64) / np.asarray(n_terms, dtype=np.float64)


def minmax_rescale(values: npt.ArrayLike) -> npt.NDArray[np.float64]:
    """Second normalization step: map each column onto [0, 1].

    Raises
    ------
    NormalizationError
        If any column is constant.
    """
    values = np.asarray(values, dtype=np.float64)
    lo = values.min(axis=0)
    span = values.max(axis=0) - lo
    constant = np.flatnonzero(span == 0)
    if constant.size:
        raise NormalizationError(constant.tolist())
    return (values - lo) / span


@dataclass(frozen=True)
class ObjectiveTable:
    """Objective values for all ``2^N`` solutions, shape ``(2^N, m)``.

    ``raw`` holds the unnormalized values and ``scaled`` the values after
    division by the term counts; ``values`` is what downstream steps use
    (the min-max rescaled values when ``normalized`` is true, else ``raw``).
    """

    values: npt.NDArray[np.float64]
    normalized: bool
    raw: npt.NDArray[np.float64]
    scaled: npt.NDArray[np.float64]
    n_terms: tuple[int, ...]

    @property
    def n_solutions(self) -> int:
        return self.values.shape[0]

    @property
    def n_objectives(self) -> int:
        return self.values.shape[1]

    def column(self, k: int) -> npt.NDArray[np.float64]:
        return self.values[:, k]

    def csv_rows(self):
        for s, row in enumerate(self.values.tolist()):
            yield (s, *row)

    def to_csv(self) -> str:
        header = ["solution_index"] + [f"f{k + 1}" for k in range(self.n_objectives)]
        return textio.csv_text(header, self.csv_rows())

    def to_dict(self, problem: MnmProblem | None = None) -> dict:
        out = {
            "normalized": self.normalized,
            "n_terms": list(self.n_terms),
            "columns": ["solution_index"] + [f"f{k + 1}" for k in range(self.n_objectives)],
            "rows": [list(r) for r in self.csv_rows()],
        }
        if problem is not None:
            out = {"problem": problem.metadata(), **out}
        return out

    def to_json(self, problem: MnmProblem | None = None) -> str:
        return textio.dumps(self.to_dict(problem))


def _readonly(a: npt.NDArray) -> npt.NDArray:
    a.setflags(write=False)
    return a


def full_table(problem: MnmProblem, normalize: bool = True) -> ObjectiveTable:
    """Evaluate every solution of ``problem`` for every objective.

    With ``normalize`` each column is divided by its number of terms and
    then min-max rescaled to [0, 1]; both steps are positive affine maps, so
    rankings and dominance relations are unchanged.

    Raises
    ------
    ResourceError
        If ``N`` exceeds the enumeration guard.
    NormalizationError
        If ``normalize`` and some column is constant.
    """
    raw = np.column_stack([objective_column(spec) for spec in problem.objectives])
    n_terms = tuple(spec.landscape.n_terms for spec in problem.objectives)
    scaled = scale_by_terms(raw, n_terms)
    values = minmax_rescale(scaled) if normalize else raw
    return ObjectiveTable(
        values=_readonly(values),
        normalized=bool(normalize),
        raw=_readonly(raw),
        scaled=_readonly(scaled),
        n_terms=n_terms,
    )
