"""Parameter estimation for discretized copula families.

Method-of-moments inverts the moment map g_measure on the family's
clipped parameter interval; maximum pseudo-likelihood maximizes
sum u^[n] log u^[theta] over the same interval.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import dependence, numerics
from .core import BivariatePmf, ContingencyTable
from .families import DiscretizedFamily, discretize, g_moment
from .ipfp import DEFAULT_CONFIG, IpfpConfig
from .nonparametric import empirical_copula


class RangeError(ValueError):
    """Empirical measure outside the range of g on the clipped domain."""


@dataclass(frozen=True)
class FitResult:
    theta_hat: float
    estimator: str  # MoM-rho | MoM-gamma | MoM-tau | MPL
    objective_value: float | None = None  # -Lbar/n for MPL
    iterations: int = 0
    converged: bool = True


_MEASURE_FUNCS = {
    "rho": dependence.yule,
    "gamma": dependence.gamma,
    "tau": dependence.tau_b,
}


def fit_mom_copula(
    u_n: BivariatePmf, fam: DiscretizedFamily, measure: str
) -> FitResult:
    """Invert g_measure at the empirical measure of ``u_n``."""
    if measure not in _MEASURE_FUNCS:
        raise ValueError(f"unknown measure {measure!r}")
    target = _MEASURE_FUNCS[measure](u_n)
    family = fam.family
    lo, hi = family.clip_lo, family.clip_hi
    g_lo = g_moment(fam, lo, measure)
    g_hi = g_moment(fam, hi, measure)
    if not (min(g_lo, g_hi) <= target <= max(g_lo, g_hi)):
        raise RangeError(
            f"empirical {measure}={target:.6g} outside g range "
            f"[{min(g_lo, g_hi):.6g}, {max(g_lo, g_hi):.6g}] "
            f"for family {family.name}"
        )
    evals = 0

    def f(theta):
        nonlocal evals
        evals += 1
        return g_moment(fam, theta, measure) - target

    theta = numerics.brent_root(f, lo, hi, tol=1e-10)
    return FitResult(
        theta_hat=theta, estimator=f"MoM-{measure}", iterations=evals
    )


def fit_mom(
    t: ContingencyTable,
    fam: DiscretizedFamily,
    measure: str,
    cfg: IpfpConfig = DEFAULT_CONFIG,
) -> FitResult:
    u_n = empirical_copula(t, cfg).empirical_copula
    return fit_mom_copula(u_n, fam, measure)


def pseudo_loglik(u_n: BivariatePmf, fam: DiscretizedFamily, theta: float) -> float:
    """sum of u^[n]_ij log u^[theta]_ij (the 1/n-scaled pseudo-loglikelihood)."""
    u_theta = discretize(fam, theta).values
    w = u_n.values
    pos = w > 0
    if np.any(u_theta[pos] <= 0):
        return -np.inf
    return float(np.sum(w[pos] * np.log(u_theta[pos])))


def fit_mpl_copula(u_n: BivariatePmf, fam: DiscretizedFamily) -> FitResult:
    """Maximum pseudo-likelihood estimate on the clipped interval."""
    family = fam.family
    lo, hi = family.clip_lo, family.clip_hi
    evals = 0

    def neg(theta):
        nonlocal evals
        evals += 1
        return -pseudo_loglik(u_n, fam, theta)

    try:
        theta, fval = numerics.bounded_minimize(neg, lo, hi, tol=1e-8)
    except numerics.NumericalError as exc:
        raise RangeError(f"MPL optimization failed: {exc}") from exc
    return FitResult(
        theta_hat=theta,
        estimator="MPL",
        objective_value=fval,
        iterations=evals,
        converged=True,
    )


def fit_mpl(
    t: ContingencyTable,
    fam: DiscretizedFamily,
    cfg: IpfpConfig = DEFAULT_CONFIG,
) -> FitResult:
    u_n = empirical_copula(t, cfg).empirical_copula
    return fit_mpl_copula(u_n, fam)
