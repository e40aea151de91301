"""Parametric copula p.m.f. families.

A family supplies a classical bivariate copula CDF; the discrete family
member u^[theta] on an r x s grid is the four-term inclusion-exclusion
of the CDF over grid rectangles, which has exactly uniform margins by
telescoping.  Survival variants rotate the base grid by 180 degrees.

Shipped families and their CLI names: clayton, gumbel (Gumbel-Hougaard),
frank, joe, plackett, surv-clayton, surv-gumbel, surv-joe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.integrate

from .core import BivariatePmf
from . import numerics

_FRANK_EPS = 1e-8
_PLACKETT_EPS = 1e-7


class DomainError(ValueError):
    """Parameter outside the family's domain or unattainable tau."""


# -- CDF cores on the open unit square ---------------------------------


def _clayton_core(theta, u, v):
    return (u ** -theta + v ** -theta - 1.0) ** (-1.0 / theta)


def _clayton_dtheta_core(theta, u, v):
    a = u ** -theta + v ** -theta - 1.0
    c = a ** (-1.0 / theta)
    return c * (
        np.log(a) / theta**2
        + (u ** -theta * np.log(u) + v ** -theta * np.log(v)) / (theta * a)
    )


def _gumbel_core(theta, u, v):
    x = -np.log(u)
    y = -np.log(v)
    s = x**theta + y**theta
    return np.exp(-(s ** (1.0 / theta)))


def _gumbel_dtheta_core(theta, u, v):
    x = -np.log(u)
    y = -np.log(v)
    s = x**theta + y**theta
    t = s ** (1.0 / theta)
    dt = t * (
        -np.log(s) / theta**2
        + (x**theta * np.log(x) + y**theta * np.log(y)) / (theta * s)
    )
    return -np.exp(-t) * dt


def _frank_core(theta, u, v):
    if abs(theta) < _FRANK_EPS:
        return u * v
    a = np.expm1(-theta * u)
    b = np.expm1(-theta * v)
    c = np.expm1(-theta)
    return -np.log1p(a * b / c) / theta


def _frank_dtheta_core(theta, u, v):
    if abs(theta) < _FRANK_EPS:
        # First-order expansion around independence.
        return u * v * (1.0 - u) * (1.0 - v) / 2.0
    a = np.expm1(-theta * u)
    b = np.expm1(-theta * v)
    c = np.expm1(-theta)
    g = a * b / c
    da = -u * (a + 1.0)
    db = -v * (b + 1.0)
    dc = -(c + 1.0)
    dg = g * (da / a + db / b - dc / c)
    return np.log1p(g) / theta**2 - dg / (theta * (1.0 + g))


def _joe_core(theta, u, v):
    x = (1.0 - u) ** theta
    y = (1.0 - v) ** theta
    return 1.0 - (x + y - x * y) ** (1.0 / theta)


def _plackett_core(theta, u, v):
    if abs(theta - 1.0) < _PLACKETT_EPS:
        return u * v + (theta - 1.0) * u * v * (1.0 - u) * (1.0 - v)
    t1 = theta - 1.0
    s = 1.0 + t1 * (u + v)
    d = np.sqrt(s * s - 4.0 * theta * t1 * u * v)
    return (s - d) / (2.0 * t1)


def _with_boundaries(core):
    """Extend a CDF core to the closed unit square."""

    def cdf(theta, u, v):
        u, v = np.broadcast_arrays(
            np.asarray(u, dtype=float), np.asarray(v, dtype=float)
        )
        out = np.empty(u.shape)
        interior = (u > 0) & (u < 1) & (v > 0) & (v < 1)
        if interior.any():
            out[interior] = core(theta, u[interior], v[interior])
        m = u == 1
        out[m] = v[m]
        m = v == 1
        out[m] = u[m]
        m = (u == 0) | (v == 0)
        out[m] = 0.0
        return out

    return cdf


def _zero_boundaries(core):
    """Extend a dC/dtheta core by zero on the boundary of the square."""

    def dcdf(theta, u, v):
        u, v = np.broadcast_arrays(
            np.asarray(u, dtype=float), np.asarray(v, dtype=float)
        )
        out = np.zeros(u.shape)
        interior = (u > 0) & (u < 1) & (v > 0) & (v < 1)
        if interior.any():
            out[interior] = core(theta, u[interior], v[interior])
        return out

    return dcdf


# -- continuous Kendall tau functionals --------------------------------


def _clayton_tau(theta):
    return theta / (theta + 2.0)


def _gumbel_tau(theta):
    return 1.0 - 1.0 / theta


def _frank_tau(theta):
    if abs(theta) < _FRANK_EPS:
        return 0.0
    debye1 = (
        scipy.integrate.quad(lambda t: t / math.expm1(t), 0.0, theta)[0] / theta
    )
    return 1.0 - 4.0 / theta * (1.0 - debye1)


def _joe_tau(theta):
    if theta <= 1.0:
        return 0.0

    def integrand(t):
        g = 1.0 - (1.0 - t) ** theta
        if g <= 0.0:
            return 0.0
        return g * math.log(g) / (theta * (1.0 - t) ** (theta - 1.0))

    val = scipy.integrate.quad(integrand, 0.0, 1.0, limit=200)[0]
    return 1.0 + 4.0 * val


@lru_cache(maxsize=1)
def _gauss_grid(nodes: int = 64):
    x, w = np.polynomial.legendre.leggauss(nodes)
    x = 0.5 * (x + 1.0)
    w = 0.5 * w
    return x, w


def _plackett_tau(theta):
    # tau = 1 - 4 int int dC/du * dC/dv, partials by central differences.
    x, w = _gauss_grid()
    u = x[:, None]
    v = x[None, :]
    h = 1e-6
    cdf = _with_boundaries(_plackett_core)
    du = (cdf(theta, u + h, v) - cdf(theta, u - h, v)) / (2.0 * h)
    dv = (cdf(theta, u, v + h) - cdf(theta, u, v - h)) / (2.0 * h)
    integral = float(w @ (du * dv) @ w)
    return 1.0 - 4.0 * integral


# -- family objects ----------------------------------------------------


@dataclass(frozen=True)
class CopulaFamily:
    name: str
    #: closed mathematical parameter domain used for validation
    theta_min: float
    theta_max: float
    #: compact sub-interval used by estimators
    clip_lo: float
    clip_hi: float
    cdf: callable
    dcdf_dtheta: callable | None
    tau_functional: callable
    tau_inverse: callable | None = None
    survival_of: "CopulaFamily | None" = None

    @property
    def has_analytic_dtheta(self) -> bool:
        return self.dcdf_dtheta is not None

    def validate_theta(self, theta: float) -> None:
        if not (self.theta_min <= theta <= self.theta_max):
            raise DomainError(
                f"theta={theta} outside {self.name} domain "
                f"[{self.theta_min}, {self.theta_max}]"
            )


def _survival(base: CopulaFamily, name: str) -> CopulaFamily:
    def cdf(theta, u, v):
        u, v = np.broadcast_arrays(
            np.asarray(u, dtype=float), np.asarray(v, dtype=float)
        )
        return u + v - 1.0 + base.cdf(theta, 1.0 - u, 1.0 - v)

    dcdf = None
    if base.dcdf_dtheta is not None:
        def dcdf(theta, u, v):  # noqa: E731 style kept simple
            return base.dcdf_dtheta(theta, 1.0 - np.asarray(u, float),
                                    1.0 - np.asarray(v, float))

    return CopulaFamily(
        name=name,
        theta_min=base.theta_min,
        theta_max=base.theta_max,
        clip_lo=base.clip_lo,
        clip_hi=base.clip_hi,
        cdf=cdf,
        dcdf_dtheta=dcdf,
        tau_functional=base.tau_functional,
        tau_inverse=base.tau_inverse,
        survival_of=base,
    )


_CLAYTON = CopulaFamily(
    name="clayton",
    theta_min=1e-12,
    theta_max=math.inf,
    clip_lo=1e-4,
    clip_hi=50.0,
    cdf=_with_boundaries(_clayton_core),
    dcdf_dtheta=_zero_boundaries(_clayton_dtheta_core),
    tau_functional=_clayton_tau,
    tau_inverse=lambda tau: 2.0 * tau / (1.0 - tau),
)

_GUMBEL = CopulaFamily(
    name="gumbel",
    theta_min=1.0,
    theta_max=math.inf,
    clip_lo=1.0 + 1e-4,
    clip_hi=50.0,
    cdf=_with_boundaries(_gumbel_core),
    dcdf_dtheta=_zero_boundaries(_gumbel_dtheta_core),
    tau_functional=_gumbel_tau,
    tau_inverse=lambda tau: 1.0 / (1.0 - tau),
)

_FRANK = CopulaFamily(
    name="frank",
    theta_min=-math.inf,
    theta_max=math.inf,
    clip_lo=-50.0,
    clip_hi=50.0,
    cdf=_with_boundaries(_frank_core),
    dcdf_dtheta=_zero_boundaries(_frank_dtheta_core),
    tau_functional=_frank_tau,
)

_JOE = CopulaFamily(
    name="joe",
    theta_min=1.0,
    theta_max=math.inf,
    clip_lo=1.0 + 1e-4,
    clip_hi=50.0,
    cdf=_with_boundaries(_joe_core),
    dcdf_dtheta=None,
    tau_functional=_joe_tau,
)

_PLACKETT = CopulaFamily(
    name="plackett",
    theta_min=1e-12,
    theta_max=math.inf,
    clip_lo=1e-4,
    clip_hi=1e4,
    cdf=_with_boundaries(_plackett_core),
    dcdf_dtheta=None,
    tau_functional=_plackett_tau,
)

FAMILIES: dict[str, CopulaFamily] = {
    f.name: f
    for f in (
        _CLAYTON,
        _GUMBEL,
        _FRANK,
        _JOE,
        _PLACKETT,
        _survival(_CLAYTON, "surv-clayton"),
        _survival(_GUMBEL, "surv-gumbel"),
        _survival(_JOE, "surv-joe"),
    )
}


def get_family(name: str) -> CopulaFamily:
    try:
        return FAMILIES[name]
    except KeyError:
        raise DomainError(
            f"unknown family {name!r}; valid names: {', '.join(sorted(FAMILIES))}"
        ) from None


@dataclass(frozen=True)
class DiscretizedFamily:
    """A copula family restricted to an r x s grid."""

    family: CopulaFamily
    r: int
    s: int

    def __post_init__(self):
        if self.r < 2 or self.s < 2:
            raise DomainError("discretization requires r >= 2 and s >= 2")


def _rectangle_masses(cdf, theta, r, s) -> np.ndarray:
    gu = np.arange(r + 1) / r
    gv = np.arange(s + 1) / s
    f = cdf(theta, gu[:, None], gv[None, :])
    return f[1:, 1:] - f[1:, :-1] - f[:-1, 1:] + f[:-1, :-1]


def discretize(fam: DiscretizedFamily, theta: float) -> BivariatePmf:
    """The grid p.m.f. u^[theta]: CDF inclusion-exclusion over cells."""
    family = fam.family
    family.validate_theta(theta)
    if family.survival_of is not None:
        base = discretize(
            DiscretizedFamily(family.survival_of, fam.r, fam.s), theta
        )
        return BivariatePmf(base.values[::-1, ::-1])
    masses = _rectangle_masses(family.cdf, theta, fam.r, fam.s)
    # 2-increasingness can leave -1e-16 level noise.
    masses = np.where(masses < 0, 0.0, masses)
    return BivariatePmf(masses / masses.sum())


def dtheta_discretize(fam: DiscretizedFamily, theta: float) -> np.ndarray:
    """Entrywise derivative of u^[theta] in theta (sums to zero)."""
    family = fam.family
    family.validate_theta(theta)
    if family.survival_of is not None:
        base = dtheta_discretize(
            DiscretizedFamily(family.survival_of, fam.r, fam.s), theta
        )
        return base[::-1, ::-1].copy()
    if family.has_analytic_dtheta:
        return _rectangle_masses(family.dcdf_dtheta, theta, fam.r, fam.s)
    h = 1e-6 * max(1.0, abs(theta))
    lo = theta - h
    hi = theta + h
    if lo < family.theta_min:
        lo = theta
    if hi > family.theta_max:
        hi = theta
    up = _rectangle_masses(family.cdf, hi, fam.r, fam.s)
    dn = _rectangle_masses(family.cdf, lo, fam.r, fam.s)
    return (up - dn) / (hi - lo)


def g_moment(fam: DiscretizedFamily, theta: float, measure: str) -> float:
    """Moment map g_measure(theta) = measure(u^[theta])."""
    from . import dependence

    u = discretize(fam, theta)
    if measure == "rho":
        return dependence.yule(u)
    if measure == "gamma":
        return dependence.gamma(u)
    if measure == "tau":
        return dependence.tau_b(u)
    raise ValueError(f"unknown measure {measure!r}")


def copula_tau_to_theta(family: CopulaFamily, tau: float) -> float:
    """Parameter with the given continuous-copula Kendall tau."""
    if family.survival_of is not None:
        return copula_tau_to_theta(family.survival_of, tau)
    if family.tau_inverse is not None:
        theta = family.tau_inverse(tau)
        if not (family.clip_lo <= theta <= family.clip_hi):
            raise DomainError(f"tau={tau} unattainable within clipped domain")
        return theta
    if family.name == "frank" and abs(tau) < 1e-12:
        return 0.0
    lo, hi = family.clip_lo, family.clip_hi
    f = lambda t: family.tau_functional(t) - tau  # noqa: E731
    try:
        return numerics.brent_root(f, lo, hi, tol=1e-10)
    except numerics.BracketError:
        raise DomainError(
            f"tau={tau} unattainable by family {family.name}"
        ) from None
