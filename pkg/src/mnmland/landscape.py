"""Single-objective NM-landscapes over spin vectors in {-1, +1}^N.

An NM-landscape is the interaction model

    F(s) = sum_k beta_k * prod_{i in U_k} s_i

containing one term for every non-empty variable subset ``U_k`` with
``|U_k| <= M``. Coefficients are ``exp(-|g|)`` with ``g ~ Normal(0, sigma)``,
so every coefficient lies in (0, 1] and the all-ones spin vector is a global
maximum.

Random numbers
--------------
Coefficients come from :class:`GaussianStream`: a PCG64 bit generator
(``numpy.random.PCG64``) whose raw 64-bit outputs are turned into uniforms
``u = (raw >> 11) * 2**-53`` and then into standard normals with the
Marsaglia polar method. PCG64 raw output is part of numpy's stream
compatibility guarantee, and the transform is implemented here with the
scalar C library ``log``/``sqrt``/``exp`` (never numpy's CPU-dispatched
kernels), so a seed maps to the same coefficients wherever libm agrees.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
import numpy.typing as npt

from . import textio
from .errors import ParameterError, ResourceError

#: Largest N for which full 2^N tables are built.
MAX_ENUM_VARS = 26

_UINT64_MAX = 2**64 - 1
_TWO_M53 = 2.0**-53


class GaussianStream:
    """Seeded stream of standard normal deviates (PCG64 + polar method).

    The emitted sequence depends only on ``seed``; requesting ``k`` values at
    once or one at a time yields the same numbers.

    Parameters
    ----------
    seed : int
        Unsigned 64-bit seed.
    """

    def __init__(self, seed: int) -> None:
        self.seed = _check_seed(seed)
        self._bitgen = np.random.PCG64(self.seed)
        self._buffer = np.empty(0, dtype=np.float64)

    def _uniforms(self, count: int) -> npt.NDArray[np.float64]:
        raw = self._bitgen.random_raw(count)
        return (raw >> np.uint64(11)).astype(np.float64) * _TWO_M53

    def _fill(self, needed: int) -> None:
        chunks = [self._buffer]
        have = self._buffer.size
        while have < needed:
            # acceptance rate of the polar method is pi/4
            pairs = int((needed - have) / 2 / 0.78) + 8
            u = self._uniforms(2 * pairs).reshape(pairs, 2)
            v = 2.0 * u - 1.0
            s = v[:, 0] * v[:, 0] + v[:, 1] * v[:, 1]
            ok = (s > 0.0) & (s < 1.0)
            # scalar libm log/sqrt: numpy's SIMD kernels vary by CPU
            normals = []
            for (v1, v2), sq in zip(v[ok].tolist(), s[ok].tolist()):
                factor = math.sqrt(-2.0 * math.log(sq) / sq)
                normals.append(v1 * factor)
                normals.append(v2 * factor)
            chunks.append(np.array(normals, dtype=np.float64))
            have += len(normals)
        self._buffer = np.concatenate(chunks)

    def normals(self, count: int) -> npt.NDArray[np.float64]:
        """Return the next ``count`` standard normal deviates."""
        if count < 0:
            raise ParameterError(f"count must be non-negative: count={count}")
        self._fill(count)
        out, self._buffer = self._buffer[:count].copy(), self._buffer[count:]
        return out

    def normal(self) -> float:
        return float(self.normals(1)[0])


def _check_seed(seed: int) -> int:
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise ParameterError(f"seed must be an integer: seed={seed!r}")
    seed = int(seed)
    if not 0 <= seed <= _UINT64_MAX:
        raise ParameterError(f"seed must be an unsigned 64-bit integer: seed={seed}")
    return seed


def _check_sigma(sigma: float) -> float:
    sigma = float(sigma)
    if not (math.isfinite(sigma) and sigma > 0):
        raise ParameterError(f"sigma must be a positive finite number: sigma={sigma}")
    return sigma


def _check_orders(n_vars: int, max_order: int) -> None:
    if n_vars < 1:
        raise ParameterError(f"n_vars must be positive: n_vars={n_vars}")
    if not 1 <= max_order <= n_vars:
        raise ParameterError(
            f"max_order must satisfy 1 <= max_order <= n_vars={n_vars}: max_order={max_order}"
        )


def coefficients_from_normals(
    sigma: float, normals: npt.ArrayLike
) -> npt.NDArray[np.float64]:
    """Map standard normals ``z`` to coefficients ``exp(-|sigma * z|)``."""
    sigma = _check_sigma(sigma)
    z = np.asarray(normals, dtype=np.float64).tolist()
    return np.array([math.exp(-abs(sigma * v)) for v in z], dtype=np.float64)


def sample_coefficient(sigma: float, rng: GaussianStream) -> float:
    """Draw one coefficient ``exp(-|g|)``, ``g ~ Normal(0, sigma)``.

    The result lies in (0, 1]; larger ``sigma`` pushes it towards 0.
    """
    sigma = _check_sigma(sigma)
    return float(coefficients_from_normals(sigma, [rng.normal()])[0])


def enumerate_term_sets(n_vars: int, max_order: int) -> list[tuple[int, ...]]:
    """All non-empty subsets of ``{1..n_vars}`` of size <= ``max_order``.

    Ordered by size, then lexicographically.

    >>> enumerate_term_sets(3, 2)
    [(1,), (2,), (3,), (1, 2), (1, 3), (2, 3)]
    """
    _check_orders(n_vars, max_order)
    variables = range(1, n_vars + 1)
    return [
        combo
        for order in range(1, max_order + 1)
        for combo in itertools.combinations(variables, order)
    ]


def n_terms(n_vars: int, max_order: int) -> int:
    """Number of terms ``sum_{k=1..M} C(N, k)`` of a full NM model."""
    _check_orders(n_vars, max_order)
    return sum(math.comb(n_vars, k) for k in range(1, max_order + 1))


@dataclass(frozen=True)
class InteractionTerm:
    """One ``(U_k, beta_k)`` pair; ``indices`` are 1-based and increasing."""

    indices: tuple[int, ...]
    coefficient: float

    def __post_init__(self) -> None:
        indices = tuple(int(i) for i in self.indices)
        if not indices:
            raise ParameterError("a term needs at least one variable index")
        if indices[0] < 1 or any(a >= b for a, b in zip(indices, indices[1:])):
            raise ParameterError(
                f"term indices must be strictly increasing and >= 1: {indices}"
            )
        coefficient = float(self.coefficient)
        if not (math.isfinite(coefficient) and coefficient >= 0):
            raise ParameterError(f"coefficients must be finite and >= 0: {coefficient}")
        object.__setattr__(self, "indices", indices)
        object.__setattr__(self, "coefficient", coefficient)

    @property
    def order(self) -> int:
        return len(self.indices)

    @property
    def mask(self) -> int:
        """Bit mask with bit ``i - 1`` set for every index ``i``."""
        return sum(1 << (i - 1) for i in self.indices)


@dataclass(frozen=True)
class NmLandscape:
    """An NM model: every subset of size <= ``max_order`` with its coefficient.

    Instances are immutable; use :func:`generate_landscape` to build one.
    """

    n_vars: int
    max_order: int
    sigma: float
    terms: tuple[InteractionTerm, ...] = field(repr=False)
    seed: int

    def __post_init__(self) -> None:
        _check_orders(self.n_vars, self.max_order)
        _check_sigma(self.sigma)
        _check_seed(self.seed)
        terms = tuple(self.terms)
        object.__setattr__(self, "terms", terms)
        if len(terms) != n_terms(self.n_vars, self.max_order):
            raise ParameterError(
                f"expected {n_terms(self.n_vars, self.max_order)} terms for "
                f"N={self.n_vars}, M={self.max_order}, got {len(terms)}"
            )
        seen = set()
        for term in terms:
            if term.indices[-1] > self.n_vars or term.order > self.max_order:
                raise ParameterError(f"term {term.indices} outside N={self.n_vars}, M={self.max_order}")
            if term.indices in seen:
                raise ParameterError(f"duplicate term {term.indices}")
            seen.add(term.indices)

    @property
    def n_terms(self) -> int:
        return len(self.terms)

    @cached_property
    def masks(self) -> npt.NDArray[np.int64]:
        return np.array([t.mask for t in self.terms], dtype=np.int64)

    @cached_property
    def coefficients(self) -> npt.NDArray[np.float64]:
        return np.array([t.coefficient for t in self.terms], dtype=np.float64)

    @cached_property
    def orders(self) -> npt.NDArray[np.int64]:
        return np.array([t.order for t in self.terms], dtype=np.int64)

    def evaluate(self, s: Sequence[int] | npt.ArrayLike) -> float:
        """Fitness ``sum_k beta_k prod_{i in U_k} s_i`` of one spin vector."""
        s = np.asarray(s)
        if s.ndim != 1 or s.shape[0] != self.n_vars:
            raise ParameterError(
                f"spin vector must have length {self.n_vars}, got shape {s.shape}"
            )
        if not np.all((s == 1) | (s == -1)):
            raise ParameterError("spin vector entries must be -1 or +1")
        # a term's product is -1 iff it covers an odd number of -1 spins
        negative = int(np.dot((s == -1).astype(np.int64), 1 << np.arange(self.n_vars)))
        parity = np.bitwise_count(self.masks & negative) & 1
        return float(np.dot(self.coefficients, 1 - 2 * parity.astype(np.float64)))

    def table(self) -> npt.NDArray[np.float64]:
        """Fitness of all 2^N spin vectors.

        Entry ``m`` is ``F(s)`` with ``s_i = -1`` iff bit ``i - 1`` of ``m``
        is set. Computed with a fast Walsh-Hadamard transform, since
        ``F(s(m)) = sum_U beta_U (-1)^popcount(m & U)``.
        """
        return walsh_sum(self.masks, self.coefficients, self.n_vars)

    def to_dict(self) -> dict:
        return {
            "n_vars": self.n_vars,
            "max_order": self.max_order,
            "sigma": self.sigma,
            "seed": self.seed,
            "terms": [
                {"indices": list(t.indices), "coefficient": t.coefficient} for t in self.terms
            ],
        }

    def to_json(self) -> str:
        return textio.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "NmLandscape":
        try:
            terms = tuple(
                InteractionTerm(tuple(t["indices"]), float(t["coefficient"]))
                for t in data["terms"]
            )
            return cls(
                n_vars=int(data["n_vars"]),
                max_order=int(data["max_order"]),
                sigma=float(data["sigma"]),
                terms=terms,
                seed=int(data["seed"]),
            )
        except (KeyError, TypeError) as exc:
            raise ParameterError(f"malformed landscape document: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> "NmLandscape":
        return cls.from_dict(json.loads(text))


def walsh_sum(
    masks: npt.ArrayLike, coefficients: npt.ArrayLike, n_vars: int
) -> npt.NDArray[np.float64]:
    """``out[m] = sum_k c_k * (-1)^popcount(m & masks[k])`` for all m < 2^n_vars."""
    if n_vars > MAX_ENUM_VARS:
        raise ResourceError(
            f"2^{n_vars} table exceeds the enumeration guard (N <= {MAX_ENUM_VARS})"
        )
    size = 1 << n_vars
    a = np.zeros(size, dtype=np.float64)
    np.add.at(a, np.asarray(masks, dtype=np.int64), np.asarray(coefficients, dtype=np.float64))
    h = 1
    while h < size:
        a = a.reshape(-1, 2, h)
        a = np.stack((a[:, 0] + a[:, 1], a[:, 0] - a[:, 1]), axis=1)
        h *= 2
    return a.reshape(size)


def generate_landscape(n_vars: int, max_order: int, sigma: float, seed: int) -> NmLandscape:
    """Generate an NM-landscape.

    One coefficient is drawn per term set, in canonical term order, from a
    :class:`GaussianStream` seeded with ``seed``. Because the order is
    canonical, the order-<=M' terms of a landscape are identical to those of
    ``generate_landscape(n_vars, M', sigma, seed)``.

    Parameters
    ----------
    n_vars : int
        Number of variables N.
    max_order : int
        Maximum interaction order M, ``1 <= M <= N``.
    sigma : float
        Standard deviation of the Gaussian; larger values give smaller,
        more clumped coefficients.
    seed : int
        Unsigned 64-bit seed.

    Returns
    -------
    NmLandscape
    """
    sets = enumerate_term_sets(n_vars, max_order)
    sigma = _check_sigma(sigma)
    stream = GaussianStream(seed)
    coefficients = coefficients_from_normals(sigma, stream.normals(len(sets)))
    terms = tuple(InteractionTerm(idx, c) for idx, c in zip(sets, coefficients.tolist()))
    return NmLandscape(n_vars, max_order, sigma, terms, int(seed))


def truncate(landscape: NmLandscape, new_max_order: int) -> NmLandscape:
    """Keep only the terms of order <= ``new_max_order``; coefficients unchanged."""
    if not 1 <= new_max_order <= landscape.max_order:
        raise ParameterError(
            f"new_max_order must satisfy 1 <= new_max_order <= {landscape.max_order}: "
            f"new_max_order={new_max_order}"
        )
    if new_max_order == landscape.max_order:
        return landscape
    terms = tuple(t for t in landscape.terms if t.order <= new_max_order)
    return NmLandscape(landscape.n_vars, new_max_order, landscape.sigma, terms, landscape.seed)


def spins_from_index(index: int, n_vars: int) -> npt.NDArray[np.int64]:
    """Spin vector whose ``-1`` entries are the set bits of ``index``."""
    bits = (int(index) >> np.arange(n_vars)) & 1
    return 1 - 2 * bits


def all_spins(n_vars: int) -> Iterable[npt.NDArray[np.int64]]:
    for index in range(1 << n_vars):
        yield spins_from_index(index, n_vars)
