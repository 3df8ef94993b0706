"""Pareto dominance and front extraction (maximization) over full tables."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import numpy.typing as npt

from . import textio
from .distribution import DistributionTable
from .errors import ParameterError

_CHUNK = 256


def dominates(a: npt.ArrayLike, b: npt.ArrayLike) -> bool:
    """True iff ``a`` is >= ``b`` everywhere and > somewhere."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ParameterError(f"vectors must have equal length: {a.shape} vs {b.shape}")
    return bool(np.all(a >= b) and np.any(a > b))


@dataclass(frozen=True)
class FrontResult:
    """Pareto set (solution indices, ascending) and its objective vectors."""

    member_indices: npt.NDArray[np.int64]
    front_points: npt.NDArray[np.float64]

    @property
    def size(self) -> int:
        return int(self.member_indices.size)

    def members(self) -> frozenset[int]:
        return frozenset(self.member_indices.tolist())

    def distinct_points(self) -> npt.NDArray[np.float64]:
        return np.unique(self.front_points, axis=0)

    def export_order(self) -> npt.NDArray[np.int64]:
        """Row order for export: f1 descending, ties by solution index."""
        return np.lexsort((self.member_indices, -self.front_points[:, 0]))

    def to_csv(self) -> str:
        m = self.front_points.shape[1]
        order = self.export_order()
        rows = (
            (int(self.member_indices[r]), *self.front_points[r].tolist()) for r in order
        )
        return textio.csv_text(["solution_index"] + [f"f{k + 1}" for k in range(m)], rows)


@dataclass(frozen=True)
class FrontComparison:
    set_equal: bool
    only_in_a: tuple[int, ...]
    only_in_b: tuple[int, ...]
    jaccard: float

    def to_dict(self) -> dict:
        return {
            "set_equal": self.set_equal,
            "jaccard": self.jaccard,
            "only_in_a": list(self.only_in_a),
            "only_in_b": list(self.only_in_b),
        }


def _check_table(table: npt.ArrayLike) -> npt.NDArray[np.float64]:
    table = np.asarray(table, dtype=np.float64)
    if table.ndim != 2 or table.shape[0] == 0 or table.shape[1] == 0:
        raise ParameterError(f"expected a non-empty (S, m) table, got shape {table.shape}")
    if not np.all(np.isfinite(table)):
        raise ParameterError("table entries must be finite")
    return table


def dominated_mask(table: npt.ArrayLike) -> npt.NDArray[np.bool_]:
    """``out[s]`` is true iff some row of ``table`` dominates row ``s``.

    Plain O(S^2 m) pairwise filter, processed in row chunks.
    """
    table = _check_table(table)
    out = np.zeros(table.shape[0], dtype=bool)
    for start in range(0, table.shape[0], _CHUNK):
        block = table[start : start + _CHUNK]
        # geq[a, b]: row a >= block row b in every objective
        geq = np.all(table[:, None, :] >= block[None, :, :], axis=2)
        gt = np.any(table[:, None, :] > block[None, :, :], axis=2)
        out[start : start + _CHUNK] = np.any(geq & gt, axis=0)
    return out


def _front_mask_sweep(table: npt.NDArray[np.float64]) -> npt.NDArray[np.bool_]:
    # m = 2: sort by f1 desc then f2 desc; a group of equal f1 survives only if
    # its best f2 beats every f2 seen in strictly better f1 groups
    f1, f2 = table[:, 0], table[:, 1]
    order = np.lexsort((-f2, -f1))
    s1, s2 = f1[order], f2[order]
    starts = np.flatnonzero(np.r_[True, s1[1:] != s1[:-1]])
    group_best = s2[starts]
    running = np.maximum.accumulate(group_best)
    previous = np.r_[-np.inf, running[:-1]]
    group_of = np.repeat(np.arange(starts.size), np.diff(np.r_[starts, s1.size]))
    keep_sorted = (group_best[group_of] > previous[group_of]) & (s2 == group_best[group_of])
    mask = np.zeros(table.shape[0], dtype=bool)
    mask[order[keep_sorted]] = True
    return mask


def pareto_front(table: npt.ArrayLike, method: str = "auto") -> FrontResult:
    """Exact non-dominated set of an ``(S, m)`` table.

    Every solution whose vector is non-dominated is a member, including
    solutions that share the same vector.

    Parameters
    ----------
    table : array_like
        Row ``s`` holds the objective (or probability) vector of solution ``s``.
    method : {"auto", "pairwise", "sweep"}
        ``"sweep"`` is the O(S log S) sort-based path and needs ``m == 2``;
        ``"auto"`` picks it when possible.
    """
    table = _check_table(table)
    m = table.shape[1]
    if method == "auto":
        method = "sweep" if m == 2 else "pairwise"
    if method == "sweep":
        if m != 2:
            raise ParameterError(f"the sweep method needs m == 2, got m={m}")
        mask = _front_mask_sweep(table)
    elif method == "pairwise":
        mask = ~dominated_mask(table)
    else:
        raise ParameterError(f"unknown method {method!r}")
    members = np.flatnonzero(mask).astype(np.int64)
    points = table[members]
    members.setflags(write=False)
    points.setflags(write=False)
    return FrontResult(members, points)


def front_from_distributions(
    dists: Sequence[DistributionTable], method: str = "auto"
) -> FrontResult:
    """Pareto front of the per-objective probability vectors."""
    if len(dists) == 0:
        raise ParameterError("need at least one distribution")
    sizes = {d.probs.size for d in dists}
    if len(sizes) != 1:
        raise ParameterError(f"distributions are over different search spaces: sizes {sorted(sizes)}")
    return pareto_front(np.column_stack([d.probs for d in dists]), method=method)


def compare_fronts(a: FrontResult, b: FrontResult) -> FrontComparison:
    sa, sb = a.members(), b.members()
    union = sa | sb
    jaccard = len(sa & sb) / len(union) if union else 1.0
    return FrontComparison(
        set_equal=sa == sb,
        only_in_a=tuple(sorted(sa - sb)),
        only_in_b=tuple(sorted(sb - sa)),
        jaccard=jaccard,
    )
