"""Iterative proportional fitting: scaling steps, fixed-point iteration,
feasibility diagnosis, and the copula-like decomposition.

One "iteration" is a full row-then-column alternation; the stopping rule
compares consecutive post-column-scaling iterates in the entrywise L1
norm.  Non-convergence within the iteration budget is reported in the
result, not raised.

The inner loop runs in a compiled extension when available; set the
environment variable ``COPULAPMF_PURE_PYTHON=1`` to force the NumPy
fallback.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass

import numpy as np

from .core import (
    BivariatePmf,
    DimensionError,
    MarginalPmf,
    PmfValidationError,
    margins,
)

if os.environ.get("COPULAPMF_PURE_PYTHON") == "1":
    from . import _ipfp_py as _kernel

    BACKEND = "python"
else:
    try:
        from . import _ipfp_cy as _kernel  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        from . import _ipfp_py as _kernel

        BACKEND = "python"


class FeasibilityKind(enum.Enum):
    EqualSupport = "EqualSupport"
    SubsetSupportOnly = "SubsetSupportOnly"
    Infeasible = "Infeasible"


@dataclass(frozen=True)
class IpfpConfig:
    """Stopping rule: L1 threshold ``epsilon``, budget ``max_iterations``."""

    epsilon: float = 1e-10
    max_iterations: int = 1000

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError("epsilon must be > 0")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


DEFAULT_CONFIG = IpfpConfig()


@dataclass(frozen=True)
class IpfpResult:
    fitted: BivariatePmf
    iterations: int
    converged: bool
    final_delta: float


@dataclass(frozen=True)
class FeasibilityVerdict:
    kind: FeasibilityKind
    #: (R, C) pair of 1-based index sets achieving equality or violation.
    witness: tuple[frozenset, frozenset] | None = None


def _check_targets(x: BivariatePmf, a: MarginalPmf, b: MarginalPmf) -> None:
    if a.k != x.r or b.k != x.s:
        raise DimensionError(
            f"targets of length ({a.k},{b.k}) vs p.m.f. of shape {x.shape}"
        )
    if not (a.strictly_positive and b.strictly_positive):
        raise PmfValidationError("target margins must be strictly positive")


def row_scale(x: BivariatePmf, a: MarginalPmf) -> BivariatePmf:
    """Rescale rows of ``x`` so its first margin becomes ``a``."""
    if a.k != x.r:
        raise DimensionError(f"target of length {a.k} vs {x.r} rows")
    if not a.strictly_positive:
        raise PmfValidationError("target margin must be strictly positive")
    v = x.values * (a.values / x.values.sum(axis=1))[:, None]
    return BivariatePmf(v)


def col_scale(x: BivariatePmf, b: MarginalPmf) -> BivariatePmf:
    """Rescale columns of ``x`` so its second margin becomes ``b``."""
    if b.k != x.s:
        raise DimensionError(f"target of length {b.k} vs {x.s} columns")
    if not b.strictly_positive:
        raise PmfValidationError("target margin must be strictly positive")
    v = x.values * (b.values / x.values.sum(axis=0))
    return BivariatePmf(v)


def ipfp_fit(
    x: BivariatePmf,
    a: MarginalPmf,
    b: MarginalPmf,
    cfg: IpfpConfig = DEFAULT_CONFIG,
) -> IpfpResult:
    """Alternate row and column scalings of ``x`` toward margins (a, b).

    When it converges the result is the I-projection of ``x`` onto the
    set of p.m.f.s with the target margins.
    """
    _check_targets(x, a, b)
    fitted, iterations, converged, delta = _kernel.ipfp_core(
        x.values, a.values, b.values, cfg.epsilon, cfg.max_iterations
    )
    return IpfpResult(
        fitted=BivariatePmf(fitted / fitted.sum()),
        iterations=iterations,
        converged=bool(converged),
        final_delta=float(delta),
    )


def uniform_margins(r: int, s: int) -> tuple[MarginalPmf, MarginalPmf]:
    return (
        MarginalPmf(np.full(r, 1.0 / r)),
        MarginalPmf(np.full(s, 1.0 / s)),
    )


def copula_pmf(x: BivariatePmf, cfg: IpfpConfig = DEFAULT_CONFIG) -> IpfpResult:
    """IPFP of ``x`` to uniform margins: the copula p.m.f. map U."""
    a, b = uniform_margins(x.r, x.s)
    return ipfp_fit(x, a, b, cfg)


def sklar_compose(
    u: BivariatePmf,
    a: MarginalPmf,
    b: MarginalPmf,
    cfg: IpfpConfig = DEFAULT_CONFIG,
) -> IpfpResult:
    """Recompose a p.m.f. from a copula p.m.f. ``u`` and margins (a, b)."""
    if np.max(np.abs(u.values.sum(axis=1) - 1.0 / u.r)) > 1e-9 or np.max(
        np.abs(u.values.sum(axis=0) - 1.0 / u.s)
    ) > 1e-9:
        raise PmfValidationError("u must have uniform margins within 1e-9")
    return ipfp_fit(u, a, b, cfg)


def check_feasibility(
    x: BivariatePmf, a: MarginalPmf, b: MarginalPmf
) -> FeasibilityVerdict:
    """Diagnose whether margins (a, b) are attainable on the support of x.

    Tests P_a(R) <= P_b(complement of C) over every nonempty pair of
    index sets R, C whose rectangle R x C carries zero mass.  Strict
    inequalities everywhere mean a solution with equal support exists;
    an equality means only subset support is attainable; a violation
    means no solution exists.
    """
    _check_targets(x, a, b)
    if x.r + x.s > 30:
        raise DimensionError(
            "feasibility enumeration limited to r + s <= 30; strictly "
            "positive inputs are trivially EqualSupport without the check"
        )
    if x.strictly_positive:
        return FeasibilityVerdict(FeasibilityKind.EqualSupport)

    # Enumerate over the smaller dimension; roles of (R, a) and (C, b)
    # swap under transposition.
    transposed = x.s < x.r
    if transposed:
        grid = x.values.T
        pa, pb = b.values, a.values
    else:
        grid = x.values
        pa, pb = a.values, b.values
    r, s = grid.shape
    zero_cols = grid == 0  # r x s boolean

    tol = 1e-12
    equality_witness = None
    for mask in range(1, 1 << r):
        rows = [i for i in range(r) if mask >> i & 1]
        # Maximal C: columns that are zero in every selected row.
        cmask = np.all(zero_cols[rows, :], axis=0)
        if not cmask.any():
            continue
        lhs = pa[rows].sum()
        rhs = pb[~cmask].sum()
        if lhs > rhs + tol:
            witness = (
                frozenset(i + 1 for i in rows),
                frozenset(int(j) + 1 for j in np.nonzero(cmask)[0]),
            )
            if transposed:
                witness = (witness[1], witness[0])
            return FeasibilityVerdict(FeasibilityKind.Infeasible, witness)
        if equality_witness is None and lhs >= rhs - tol:
            witness = (
                frozenset(i + 1 for i in rows),
                frozenset(int(j) + 1 for j in np.nonzero(cmask)[0]),
            )
            if transposed:
                witness = (witness[1], witness[0])
            equality_witness = witness

    if equality_witness is not None:
        return FeasibilityVerdict(
            FeasibilityKind.SubsetSupportOnly, equality_witness
        )
    return FeasibilityVerdict(FeasibilityKind.EqualSupport)
