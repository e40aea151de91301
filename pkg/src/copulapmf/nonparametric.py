"""Empirical p.m.f., additive smoothing, and the empirical copula p.m.f."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import BivariatePmf, ContingencyTable
from .ipfp import DEFAULT_CONFIG, IpfpConfig, IpfpResult, copula_pmf


@dataclass(frozen=True)
class EmpiricalEstimate:
    hat_p: BivariatePmf | None
    smoothed_p: BivariatePmf
    empirical_copula: BivariatePmf
    ipfp_meta: IpfpResult


def empirical_pmf(t: ContingencyTable) -> np.ndarray:
    """Raw relative frequencies counts / n.

    Returned as a plain grid: unlike the smoothed version it may have
    zero rows or columns and then is not a Gamma member.
    """
    return t.counts / t.n


def empirical_bivariate(t: ContingencyTable) -> BivariatePmf | None:
    """Raw empirical p.m.f. as a BivariatePmf, or None if a row or
    column of the table is all zero."""
    hat = empirical_pmf(t)
    if np.any(hat.sum(axis=1) <= 0) or np.any(hat.sum(axis=0) <= 0):
        return None
    return BivariatePmf(hat)


def smoothed_pmf(t: ContingencyTable) -> BivariatePmf:
    """Additively smoothed p.m.f.: (counts + 1/(rs)) / (n + 1).

    Equivalently the mixture (n/(n+1)) hat_p + (1/(n+1)) pi; strictly
    positive for every table.
    """
    rs = t.r * t.s
    return BivariatePmf((t.counts + 1.0 / rs) / (t.n + 1))


def empirical_copula(
    t: ContingencyTable, cfg: IpfpConfig = DEFAULT_CONFIG
) -> EmpiricalEstimate:
    """Empirical copula p.m.f.: IPFP of the smoothed p.m.f. to uniform
    margins, with the IPFP metadata carried along."""
    smoothed = smoothed_pmf(t)
    res = copula_pmf(smoothed, cfg)
    return EmpiricalEstimate(
        hat_p=empirical_bivariate(t),
        smoothed_p=smoothed,
        empirical_copula=res.fitted,
        ipfp_meta=res,
    )
