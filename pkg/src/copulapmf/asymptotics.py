"""Delta-method machinery for the copula p.m.f. map.

Index conventions (1-based, column-major):
  A = {(k, l) : k <= r-1, l <= s-1}, vectorized at k + (r-1)(l-1);
  B = all cells except (r, s), vectorized at i + r(j-1).
The Jacobian of the uniform-margin IPFP map at (u, p) factors as
J = -K L_u^{-1} M_p N with K completing A-coordinates to full grids
under the margin constraints, N dropping the (r, s) coordinate, L_u the
Hessian block in the copula argument, and M_p the mixed block.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import dependence, numerics
from .core import BivariatePmf, MarginalPmf, PmfValidationError, SingularSupportError, vec
from .families import DiscretizedFamily, discretize, dtheta_discretize


class DegenerateEstimatorError(ValueError):
    """Vanishing g' or zero Fisher information."""


@dataclass(frozen=True)
class JacobianBundle:
    K: np.ndarray
    N: np.ndarray
    L_u: np.ndarray
    M_p: np.ndarray
    J: np.ndarray
    sigma_p: np.ndarray


def matrix_K(r: int, s: int) -> np.ndarray:
    """rs x (r-1)(s-1) completion matrix: block diagonal of H with a
    final block row of -H, where H stacks the identity over a -1 row."""
    na = (r - 1) * (s - 1)
    K = np.zeros((r * s, na))
    for l in range(1, s):
        for k in range(1, r):
            col = (k - 1) + (r - 1) * (l - 1)
            K[(k - 1) + r * (l - 1), col] += 1.0
            K[(r - 1) + r * (l - 1), col] -= 1.0
            K[(k - 1) + r * (s - 1), col] -= 1.0
            K[(r - 1) + r * (s - 1), col] += 1.0
    return K


def matrix_N(r: int, s: int) -> np.ndarray:
    """(rs-1) x rs selector dropping the (r, s) coordinate: [I | 0]."""
    return np.hstack([np.eye(r * s - 1), np.zeros((r * s - 1, 1))])


def matrix_L(u: BivariatePmf) -> np.ndarray:
    """Hessian block L_u over A-coordinates; symmetric and >= identity."""
    if not u.strictly_positive:
        raise SingularSupportError("L_u requires strictly positive u")
    r, s = u.shape
    v = u.values
    na = (r - 1) * (s - 1)
    # Denominators written as in the defining formula (they simplify to
    # u_rl, u_ks, u_rs for uniform-margin u).
    col_rest = 1.0 / s - v[:-1, :].sum(axis=0)  # length s, index l
    row_rest = 1.0 / r - v[:, :-1].sum(axis=1)  # length r, index k
    corner = 1.0 / r + 1.0 / s - 1.0 + v[:-1, :-1].sum()
    L = np.zeros((na, na))
    for l in range(1, s):
        for k in range(1, r):
            row = (k - 1) + (r - 1) * (l - 1)
            for j in range(1, s):
                for i in range(1, r):
                    col = (i - 1) + (r - 1) * (j - 1)
                    val = 1.0 / corner
                    if i == k and j == l:
                        val += 1.0 / v[k - 1, l - 1]
                    if j == l:
                        val += 1.0 / col_rest[l - 1]
                    if i == k:
                        val += 1.0 / row_rest[k - 1]
                    L[row, col] = val
    return L


def matrix_M(p: BivariatePmf) -> np.ndarray:
    """Mixed block M_p: rows over A, columns over B."""
    if not p.strictly_positive:
        raise SingularSupportError("M_p requires strictly positive p")
    r, s = p.shape
    v = p.values
    na = (r - 1) * (s - 1)
    nb = r * s - 1
    rest = 1.0 / (1.0 - (v.sum() - v[r - 1, s - 1]))
    M = np.full((na, nb), rest)
    for l in range(1, s):
        for k in range(1, r):
            row = (k - 1) + (r - 1) * (l - 1)
            M[row, (k - 1) + r * (l - 1)] -= 1.0 / v[k - 1, l - 1]
            M[row, (r - 1) + r * (l - 1)] += 1.0 / v[r - 1, l - 1]
            M[row, (k - 1) + r * (s - 1)] += 1.0 / v[k - 1, s - 1]
    return M


def sigma_from(p: BivariatePmf) -> np.ndarray:
    """Multinomial covariance diag(vec p) - vec p vec p^T."""
    vp = vec(p)
    return np.diag(vp) - np.outer(vp, vp)


def jacobian_bundle(
    u: BivariatePmf,
    p: BivariatePmf,
    sigma_source: BivariatePmf | None = None,
) -> JacobianBundle:
    """Assemble K, N, L_u, M_p, J and Sigma_p.

    ``sigma_source`` lets the caller drive Sigma_p by the raw empirical
    p.m.f. while L_u, M_p use the smoothed pair, per the plug-in recipe.
    """
    r, s = p.shape
    K = matrix_K(r, s)
    N = matrix_N(r, s)
    L = matrix_L(u)
    M = matrix_M(p)
    J = -K @ numerics.lu_inverse(L) @ M @ N
    sigma = sigma_from(sigma_source if sigma_source is not None else p)
    return JacobianBundle(K=K, N=N, L_u=L, M_p=M, J=J, sigma_p=sigma)


def reconstruct_d(w: np.ndarray, r: int, s: int) -> BivariatePmf:
    """Complete B-coordinates to a p.m.f. by filling the (r, s) cell."""
    w = np.asarray(w, dtype=float)
    if w.size != r * s - 1:
        raise ValueError(f"expected length {r * s - 1}, got {w.size}")
    last = 1.0 - w.sum()
    if not (0.0 < last < 1.0):
        raise PmfValidationError(f"completed (r,s) entry {last} outside (0,1)")
    full = np.append(w, last)
    return BivariatePmf(full.reshape((r, s), order="F"))


def reconstruct_c(z: np.ndarray, a: MarginalPmf, b: MarginalPmf) -> BivariatePmf:
    """Complete A-coordinates to a p.m.f. with margins (a, b)."""
    r, s = a.k, b.k
    z = np.asarray(z, dtype=float)
    if z.size != (r - 1) * (s - 1):
        raise ValueError(f"expected length {(r - 1) * (s - 1)}, got {z.size}")
    grid = np.zeros((r, s))
    grid[: r - 1, : s - 1] = z.reshape((r - 1, s - 1), order="F")
    grid[: r - 1, s - 1] = a.values[: r - 1] - grid[: r - 1, : s - 1].sum(axis=1)
    grid[r - 1, :] = b.values - grid[: r - 1, :].sum(axis=0)
    completed = np.concatenate([grid[: r - 1, s - 1], grid[r - 1, :]])
    if np.any(completed <= 0.0) or np.any(completed >= 1.0):
        raise PmfValidationError("completed entries outside (0,1)")
    return BivariatePmf(grid)


_GRAD_FUNCS = {
    "rho": dependence.yule_grad,
    "gamma": dependence.gamma_grad,
    "tau": dependence.tau_grad,
}


def moment_variance(
    u: BivariatePmf,
    p: BivariatePmf,
    measure: str,
    sigma_source: BivariatePmf | None = None,
) -> float:
    """Asymptotic variance of sqrt(n)(measure^[n] - measure(u))."""
    grad = _GRAD_FUNCS[measure](u)
    bundle = jacobian_bundle(u, p, sigma_source)
    w = grad @ bundle.J
    return float(w @ bundle.sigma_p @ w)


def mom_V(
    u: BivariatePmf,
    p: BivariatePmf,
    fam: DiscretizedFamily,
    theta0: float,
    measure: str,
    bundle: JacobianBundle | None = None,
) -> np.ndarray:
    """Influence row vector of the method-of-moments estimator."""
    if bundle is None:
        bundle = jacobian_bundle(u, p)
    grad = _GRAD_FUNCS[measure](u)
    grad_theta = _GRAD_FUNCS[measure](discretize(fam, theta0))
    udot = dtheta_discretize(fam, theta0)
    gprime = float(grad_theta @ vec(udot))
    if abs(gprime) < 1e-14:
        raise DegenerateEstimatorError(f"g'_{measure}(theta0) vanishes")
    return (grad @ bundle.J)[None, :] / gprime


def mpl_V(
    u: BivariatePmf,
    p: BivariatePmf,
    fam: DiscretizedFamily,
    theta0: float,
    bundle: JacobianBundle | None = None,
) -> np.ndarray:
    """Influence row vector of the maximum pseudo-likelihood estimator."""
    if bundle is None:
        bundle = jacobian_bundle(u, p)
    u_theta = discretize(fam, theta0).values
    udot = dtheta_discretize(fam, theta0)
    ldot = udot / u_theta
    info = float(np.sum(u_theta * ldot * ldot))
    if info < 1e-14:
        raise DegenerateEstimatorError("zero Fisher information")
    return (vec(ldot) @ bundle.J)[None, :] / info
