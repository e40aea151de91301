"""Bivariate p.m.f. containers, vectorization conventions, and information quantities.

The central objects are dense r x s probability matrices with strictly
positive row and column sums (membership in the set Gamma).  All matrix
formulas elsewhere in the package use a column-major, 1-based
vectorization: the vector element at position i + r*(j-1) is the matrix
entry (i, j).  Internally arrays are stored row-major as usual; ``vec``
and ``vec_inverse`` handle the convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

#: Absolute tolerance on probability sums.
PROB_TOL = 1e-12

#: Sentinel for an infinite I-divergence (support violation).
INFINITE_DIVERGENCE = math.inf


class DimensionError(ValueError):
    """Shapes of two objects are incompatible."""


class DegenerateDimensionError(ValueError):
    """An operation requires r >= 2 and s >= 2."""


class SingularSupportError(ValueError):
    """An operation requires strictly positive entries."""


class PmfValidationError(ValueError):
    """Input grid is not a valid probability mass function."""


def _as_readonly(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=float)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class MarginalPmf:
    """A univariate p.m.f. on the first ``k`` integers."""

    values: np.ndarray

    def __post_init__(self):
        v = _as_readonly(np.asarray(self.values, dtype=float).ravel())
        if v.size < 1:
            raise PmfValidationError("empty marginal")
        if np.any(v < 0):
            raise PmfValidationError("negative probability in marginal")
        if abs(v.sum() - 1.0) > PROB_TOL:
            raise PmfValidationError(
                f"marginal sums to {v.sum()!r}, not 1 within {PROB_TOL}"
            )
        object.__setattr__(self, "values", v)

    @property
    def k(self) -> int:
        return self.values.size

    @property
    def strictly_positive(self) -> bool:
        return bool(np.all(self.values > 0))


@dataclass(frozen=True)
class BivariatePmf:
    """An r x s bivariate p.m.f. with positive row and column sums."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 2:
            raise PmfValidationError("values must be a 2-D grid")
        if np.any(v < 0):
            raise PmfValidationError("negative probability entry")
        if abs(v.sum() - 1.0) > PROB_TOL:
            raise PmfValidationError(
                f"p.m.f. sums to {v.sum()!r}, not 1 within {PROB_TOL}"
            )
        if np.any(v.sum(axis=1) <= 0) or np.any(v.sum(axis=0) <= 0):
            raise PmfValidationError("zero row or column sum (not in Gamma)")
        object.__setattr__(self, "values", _as_readonly(v))

    @property
    def r(self) -> int:
        return self.values.shape[0]

    @property
    def s(self) -> int:
        return self.values.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    @property
    def strictly_positive(self) -> bool:
        return bool(np.all(self.values > 0))

    def support(self) -> "SupportSet":
        cells = frozenset(
            (i + 1, j + 1) for i, j in zip(*np.nonzero(self.values > 0))
        )
        return SupportSet(cells)


@dataclass(frozen=True)
class SupportSet:
    """Set of 1-based (i, j) index pairs where a p.m.f. is positive."""

    cells: frozenset

    def __post_init__(self):
        if not self.cells:
            raise PmfValidationError("empty support")

    def issubset(self, other: "SupportSet") -> bool:
        return self.cells <= other.cells


@dataclass(frozen=True)
class ContingencyTable:
    """An r x s table of nonnegative integer counts."""

    counts: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.counts)
        if c.ndim != 2:
            raise PmfValidationError("counts must be a 2-D grid")
        if not np.issubdtype(c.dtype, np.integer):
            ci = np.asarray(c, dtype=np.int64)
            if not np.array_equal(ci, c):
                raise PmfValidationError("counts must be integers")
            c = ci
        if np.any(c < 0):
            raise PmfValidationError("negative count")
        if c.sum() < 1:
            raise PmfValidationError("table must contain at least one observation")
        c = np.array(c, dtype=np.int64)
        c.flags.writeable = False
        object.__setattr__(self, "counts", c)

    @property
    def r(self) -> int:
        return self.counts.shape[0]

    @property
    def s(self) -> int:
        return self.counts.shape[1]

    @property
    def n(self) -> int:
        return int(self.counts.sum())


def margins(p: BivariatePmf) -> tuple[MarginalPmf, MarginalPmf]:
    """Row and column sums of ``p`` as marginal p.m.f.s."""
    row = p.values.sum(axis=1)
    col = p.values.sum(axis=0)
    # Kill roundoff so margins of a valid p.m.f. are themselves valid.
    return MarginalPmf(row / row.sum()), MarginalPmf(col / col.sum())


def vec(p: BivariatePmf | np.ndarray) -> np.ndarray:
    """Column-major vectorization: element i + r*(j-1) is entry (i, j)."""
    a = p.values if isinstance(p, BivariatePmf) else np.asarray(p, dtype=float)
    return a.ravel(order="F").copy()


def vec_inverse(v: np.ndarray, r: int, s: int) -> np.ndarray:
    """Inverse of :func:`vec`: reshape a length-rs vector to an r x s grid."""
    v = np.asarray(v, dtype=float)
    if v.size != r * s:
        raise DimensionError(f"expected length {r * s}, got {v.size}")
    return v.reshape((r, s), order="F").copy()


def vec_subset(p: BivariatePmf | np.ndarray, cells) -> np.ndarray:
    """Entries at the given 1-based (i, j) cells, in the order provided."""
    a = p.values if isinstance(p, BivariatePmf) else np.asarray(p, dtype=float)
    return np.array([a[i - 1, j - 1] for i, j in cells], dtype=float)


def i_divergence(y: BivariatePmf, x: BivariatePmf) -> float:
    """Kullback-Leibler divergence D(y || x), with 0 log 0 = 0.

    Returns the :data:`INFINITE_DIVERGENCE` sentinel when the support of
    ``y`` is not contained in the support of ``x``.
    """
    if y.shape != x.shape:
        raise DimensionError(f"shape mismatch: {y.shape} vs {x.shape}")
    yv, xv = y.values, x.values
    pos = yv > 0
    if np.any(xv[pos] <= 0):
        return INFINITE_DIVERGENCE
    return float(np.sum(yv[pos] * np.log(yv[pos] / xv[pos])))


def local_odds_ratios(x: BivariatePmf) -> np.ndarray:
    """The (r-1) x (s-1) grid of local odds ratios of a positive p.m.f."""
    if not x.strictly_positive:
        raise SingularSupportError("odds ratios require strictly positive entries")
    v = x.values
    return (v[:-1, :-1] * v[1:, 1:]) / (v[:-1, 1:] * v[1:, :-1])
