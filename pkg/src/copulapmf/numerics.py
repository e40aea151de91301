"""Small numerical kernels: dense inversion, symmetric eigenvalues,
scalar root finding and minimization, and deterministic RNG streams.

Linear algebra and optimization are thin wrappers over SciPy/LAPACK
with the contracts (pivot/symmetry checks, ordering, tolerances) pinned
here.  Randomness uses the counter-based Philox generator keyed by
(root_seed, stream_index): distinct stream indices give independent
streams without sequential jumping, and the same key reproduces the
same sequence on every platform.  Normal variates use NumPy's
fixed-order ziggurat; categorical sampling inverts the precomputed
cumulative sums of the column-major vectorized p.m.f.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.optimize

from .core import BivariatePmf, vec


class NumericalError(RuntimeError):
    """Singular matrix, non-convergent eigensolver, or similar."""


class BracketError(ValueError):
    """Root bracketing failed: f(lo) and f(hi) have the same sign."""


PIVOT_THRESHOLD = 1e-13


def lu_inverse(a: np.ndarray) -> np.ndarray:
    """Inverse via dense LU with partial pivoting."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("square matrix required")
    lu, piv = scipy.linalg.lu_factor(a, check_finite=True)
    if np.min(np.abs(np.diag(lu))) < PIVOT_THRESHOLD:
        raise NumericalError("matrix is singular to working precision")
    return scipy.linalg.lu_solve((lu, piv), np.eye(a.shape[0]))


def sym_eigenvalues(a: np.ndarray) -> np.ndarray:
    """Eigenvalues of a symmetric matrix, sorted descending."""
    a = np.asarray(a, dtype=float)
    if np.max(np.abs(a - a.T)) > 1e-8:
        raise ValueError("matrix is not symmetric within 1e-8")
    sym = 0.5 * (a + a.T)
    try:
        vals = np.linalg.eigvalsh(sym)
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise NumericalError(str(exc)) from exc
    return vals[::-1].copy()


def brent_root(f, lo: float, hi: float, tol: float = 1e-10) -> float:
    """Root of ``f`` on [lo, hi]; requires a sign change at the ends."""
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0:
        raise BracketError(f"no sign change on [{lo}, {hi}]")
    return float(scipy.optimize.brentq(f, lo, hi, xtol=tol))


def bounded_minimize(f, lo: float, hi: float, tol: float = 1e-8):
    """Minimize ``f`` on [lo, hi]; returns (x, f(x))."""
    res = scipy.optimize.minimize_scalar(
        f, bounds=(lo, hi), method="bounded", options={"xatol": tol}
    )
    if not res.success:
        raise NumericalError(f"bounded minimization failed: {res.message}")
    return float(res.x), float(res.fun)


@dataclass(frozen=True)
class RngStream:
    """A deterministic stream identified by (root_seed, stream_index)."""

    root_seed: int
    stream_index: int = 0

    def generator(self) -> np.random.Generator:
        key = np.array(
            [self.root_seed % 2**64, self.stream_index % 2**64],
            dtype=np.uint64,
        )
        return np.random.Generator(np.random.Philox(key=key))

    def substream(self, index: int) -> "RngStream":
        """Derive a child stream; indices are partitioned so that
        substreams of distinct parents never collide for index < 2^32."""
        return RngStream(self.root_seed, self.stream_index * 2**32 + index)


def standard_normal(stream_or_gen, size=None):
    gen = (
        stream_or_gen.generator()
        if isinstance(stream_or_gen, RngStream)
        else stream_or_gen
    )
    return gen.standard_normal(size)


def categorical_cumsums(pmf: BivariatePmf) -> np.ndarray:
    """Cumulative sums of vec(pmf), precomputed once per p.m.f."""
    c = np.cumsum(vec(pmf))
    c[-1] = 1.0
    return c


def categorical(stream_or_gen, pmf: BivariatePmf, size=None, cumsums=None):
    """Draw 1-based (i, j) cells from a bivariate p.m.f.

    Returns a pair of arrays (rows, cols) when ``size`` is given, else a
    single (i, j) tuple.
    """
    gen = (
        stream_or_gen.generator()
        if isinstance(stream_or_gen, RngStream)
        else stream_or_gen
    )
    if cumsums is None:
        cumsums = categorical_cumsums(pmf)
    r = pmf.r
    flat = np.searchsorted(cumsums, gen.random(size), side="right")
    i = flat % r + 1
    j = flat // r + 1
    if size is None:
        return int(i), int(j)
    return i, j


def counts_from_draws(rows, cols, r: int, s: int) -> np.ndarray:
    """Aggregate 1-based draws into an r x s count table."""
    flat = (np.asarray(rows) - 1) * s + (np.asarray(cols) - 1)
    return np.bincount(flat, minlength=r * s).reshape(r, s)
