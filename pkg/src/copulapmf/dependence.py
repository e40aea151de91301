"""Dependence measures of a copula p.m.f. and their gradients.

All measures act on uniform-margin p.m.f.s on the grid of the first r
and s integers.  Yule's coefficient is the Pearson correlation of the
pair of labels; gamma and tau-b are built from the concordance and
discordance probabilities kappa and delta.  Gradients are returned as
length-rs vectors in the package's column-major vec convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import BivariatePmf, DegenerateDimensionError, vec


class UndefinedGammaError(ValueError):
    """gamma requires kappa + delta > 0."""


@dataclass(frozen=True)
class DependenceSummary:
    rho: float
    gamma: float
    tau_b: float
    kappa: float
    delta: float


def _require_2d(u: BivariatePmf) -> None:
    if u.r < 2 or u.s < 2:
        raise DegenerateDimensionError("measures require r >= 2 and s >= 2")


def _check_uniform_margins(u: BivariatePmf, tol: float = 1e-9) -> None:
    if (
        np.max(np.abs(u.values.sum(axis=1) - 1.0 / u.r)) > tol
        or np.max(np.abs(u.values.sum(axis=0) - 1.0 / u.s)) > tol
    ):
        raise ValueError("input must have uniform margins within 1e-9")


def yule(u: BivariatePmf) -> float:
    """Pearson correlation of the labels (U, V) distributed as ``u``."""
    _require_2d(u)
    _check_uniform_margins(u)
    r, s = u.shape
    i = np.arange(1, r + 1)[:, None]
    j = np.arange(1, s + 1)[None, :]
    m = float(np.sum(i * j * u.values))
    return 12.0 * (m - (r + 1) * (s + 1) / 4.0) / math.sqrt(
        (r * r - 1) * (s * s - 1)
    )


def _strict_lower_sums(v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """For each cell, the total mass at strictly (greater, greater) and at
    strictly (smaller, greater) index pairs."""
    r, s = v.shape
    csum = np.cumsum(np.cumsum(v, axis=0), axis=1)
    total_cols = np.cumsum(v, axis=0)  # mass in column block up to row i
    # S_gt[i, j] = sum over i' > i, j' > j
    full = csum[-1, -1]
    row_tail = csum[-1, :]  # mass with j' <= j
    col_tail = csum[:, -1]  # mass with i' <= i
    s_gt = full - row_tail[None, :] - col_tail[:, None] + csum
    # S_lt_gt[i, j] = sum over i' < i, j' > j
    below = np.zeros_like(v)
    below[1:, :] = col_tail[:-1, None] - csum[:-1, :]  # i' <= i-1, j' > j
    return s_gt, below


def concordance(u: BivariatePmf) -> tuple[float, float]:
    """Concordance and discordance probabilities (kappa, delta)."""
    v = u.values
    s_gt, s_lt_gt = _strict_lower_sums(v)
    kappa = 2.0 * float(np.sum(v * s_gt))
    delta = 2.0 * float(np.sum(v * s_lt_gt))
    return kappa, delta


def gamma(u: BivariatePmf) -> float:
    kappa, delta = concordance(u)
    if kappa + delta <= 0:
        raise UndefinedGammaError("kappa + delta = 0")
    return (kappa - delta) / (kappa + delta)


def _tau_denominator(r: int, s: int) -> float:
    return math.sqrt((r - 1) * (s - 1) / (r * s))


def tau_b(u: BivariatePmf) -> float:
    _require_2d(u)
    _check_uniform_margins(u)
    kappa, delta = concordance(u)
    return (kappa - delta) / _tau_denominator(u.r, u.s)


def yule_grad(u: BivariatePmf) -> np.ndarray:
    """Gradient of :func:`yule`, constant in ``u``: entries c * i * j."""
    _require_2d(u)
    r, s = u.shape
    i = np.arange(1, r + 1)[:, None]
    j = np.arange(1, s + 1)[None, :]
    g = 12.0 / math.sqrt((r * r - 1) * (s * s - 1)) * (i * j)
    return vec(np.broadcast_to(g, (r, s)).astype(float))


def _concordance_grads(u: BivariatePmf) -> tuple[np.ndarray, np.ndarray]:
    # d kappa / d u_ab sums the mass strictly concordant with cell (a, b)
    # (below-right plus above-left); d delta / d u_ab sums the strictly
    # discordant mass (above-right plus below-left).
    v = u.values
    s_gt, s_lt_gt = _strict_lower_sums(v)
    s_gt_f, s_lt_gt_f = _strict_lower_sums(v[::-1, ::-1])
    s_lt = s_gt_f[::-1, ::-1]  # mass at i' < i, j' < j
    s_gt_lt = s_lt_gt_f[::-1, ::-1]  # mass at i' > i, j' < j
    kappa_dot = 2.0 * (s_gt + s_lt)
    delta_dot = 2.0 * (s_lt_gt + s_gt_lt)
    return kappa_dot, delta_dot


def gamma_grad(u: BivariatePmf) -> np.ndarray:
    kappa, delta = concordance(u)
    if kappa + delta <= 0:
        raise UndefinedGammaError("kappa + delta = 0")
    kd, dd = _concordance_grads(u)
    num = (kd - dd) * (kappa + delta) - (kappa - delta) * (kd + dd)
    return vec(num / (kappa + delta) ** 2)


def tau_grad(u: BivariatePmf) -> np.ndarray:
    _require_2d(u)
    kd, dd = _concordance_grads(u)
    return vec((kd - dd) / _tau_denominator(u.r, u.s))


def dependence_summary(u: BivariatePmf) -> DependenceSummary:
    kappa, delta = concordance(u)
    if kappa + delta <= 0:
        raise UndefinedGammaError("kappa + delta = 0")
    return DependenceSummary(
        rho=yule(u),
        gamma=(kappa - delta) / (kappa + delta),
        tau_b=(kappa - delta) / _tau_denominator(u.r, u.s),
        kappa=kappa,
        delta=delta,
    )
