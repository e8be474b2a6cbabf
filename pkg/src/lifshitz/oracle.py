"""Brute-force reference values for the closed forms.

Everything here integrates the original Lifshitz integrands directly with
adaptive Gauss-Kronrod quadrature (QUADPACK via :func:`scipy.integrate.quad`)
and uses nothing but ``exp``/``log``.  It deliberately does not import the
polylogarithm or planar-model code: a check that shares code with the thing
it checks proves nothing.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, NamedTuple

from scipy import integrate

from .errors import ConvergenceError, DomainError, NumericalWarning

PI = math.pi
EPS = 2.220446049250313e-16

__all__ = [
    "QuadratureConfig",
    "QuadratureResult",
    "pressure_zero_t_quadrature",
    "free_energy_zero_t_quadrature",
    "free_energy_matsubara_quadrature",
    "regulated_spectrum_termwise",
    "finite_difference",
]


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances and variable map for the semi-infinite integrals.

    ``mapping="exponential"`` substitutes ``kappa = zeta - log(u)/(2a)``, which
    turns the ``exp(-2 kappa a)`` kernel into a power of ``u``;
    ``mapping="rational"`` uses ``kappa = zeta + t/((1-t) 2a)``.
    """

    rel_tol: float = 1e-12
    abs_tol: float = 1e-300
    max_subdivisions: int = 200
    mapping: str = "exponential"

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise DomainError("quadrature tolerances must be positive")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be >= 1")
        if self.mapping not in ("exponential", "rational"):
            raise DomainError(f"mapping must be 'exponential' or 'rational', got {self.mapping!r}")


class QuadratureResult(NamedTuple):
    value: float
    abs_error: float


def _products(refl):
    return [rho for rho in (refl.r_s1 * refl.r_s2, refl.r_p1 * refl.r_p2) if rho != 0.0]


def _quad(f, lo, hi, cfg):
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, err = integrate.quad(f, lo, hi, epsabs=cfg.abs_tol, epsrel=cfg.rel_tol,
                                      limit=cfg.max_subdivisions)
        except integrate.IntegrationWarning as exc:
            raise ConvergenceError(f"quadrature did not converge: {exc}") from None
    return val, err


def _tail_integral(kernel, power, zeta, a, cfg):
    """int_zeta^inf kappa^power kernel(exp(-2 kappa a)) dkappa, after the configured map.

    ``kernel(y, y0)`` receives ``y = exp(-2 kappa a)`` and ``y0`` with
    ``y = u * y0`` so it can divide by ``u`` without cancellation.
    """
    y0 = math.exp(-2.0 * zeta * a)
    if cfg.mapping == "exponential":
        def f(u):
            if u <= 0.0:
                return 0.0
            kappa = zeta - math.log(u) / (2.0 * a)
            return kappa ** power * kernel(u * y0, y0) / (2.0 * a)
        return _quad(f, 0.0, 1.0, cfg)

    def g(t):
        if t >= 1.0:
            return 0.0
        s = t / (1.0 - t)
        kappa = zeta + s / (2.0 * a)
        u = math.exp(-s)
        if u == 0.0:
            return 0.0
        return kappa ** power * kernel(u * y0, y0) * u / ((1.0 - t) ** 2 * 2.0 * a)
    return _quad(g, 0.0, 1.0, cfg)


def _pressure_kernel(rho):
    # rho y / (1 - rho y), returned divided by u = y / y0
    def k(y, y0):
        return rho * y0 / (1.0 - rho * y)
    return k


def _energy_kernel(rho):
    # log(1 - rho y) / u
    def k(y, y0):
        if y == 0.0:
            return -rho * y0
        return math.log1p(-rho * y) * y0 / y
    return k


def _outer(inner, a, cfg):
    """int_0^inf inner(zeta) dzeta with the same map in the outer variable."""
    inner_err = [0.0]

    def wrapped(zeta):
        val, err = inner(zeta)
        inner_err[0] = max(inner_err[0], err)
        return val

    if cfg.mapping == "exponential":
        def f(v):
            if v <= 0.0:
                return 0.0
            return wrapped(-math.log(v) / (2.0 * a)) / (2.0 * a * v)
    else:
        def f(v):
            if v >= 1.0:
                return 0.0
            return wrapped(v / (1.0 - v) / (2.0 * a)) / ((1.0 - v) ** 2 * 2.0 * a)
    val, err = _quad(f, 0.0, 1.0, cfg)
    return val, err + inner_err[0]


def _double_integral(kernel, power, a, cfg, order):
    # order "zeta-first": outer zeta, inner kappa in [zeta, inf).
    # order "kappa-first": outer kappa in [0, inf), inner zeta in [0, kappa].
    if order == "zeta-first":
        return _outer(lambda zeta: _tail_integral(kernel, power, zeta, a, cfg), a, cfg)
    if order != "kappa-first":
        raise DomainError(f"order must be 'zeta-first' or 'kappa-first', got {order!r}")

    def kappa_integrand(kappa):
        y = math.exp(-2.0 * kappa * a)
        weight = kappa ** power * kernel(y, 1.0) * y
        return _quad(lambda zeta: weight, 0.0, kappa, cfg)

    # integrate over kappa using the zeta-map machinery with zeta = kappa
    return _outer(kappa_integrand, a, cfg)


def pressure_zero_t_quadrature(refl, a: float, cfg: QuadratureConfig | None = None,
                               order: str = "zeta-first") -> QuadratureResult:
    """Zero-temperature pressure by nested quadrature of the raw Lifshitz double integral.

    ``P = -1/(2 pi^2) int_0^inf dzeta int_zeta^inf dkappa kappa^2 sum_sigma rho e^{-2 kappa a}/(1 - rho e^{-2 kappa a})``
    """
    cfg = cfg or QuadratureConfig()
    if a <= 0:
        raise DomainError(f"separation must be positive, got {a!r}")
    total, err = 0.0, 0.0
    for rho in _products(refl):
        v, e = _double_integral(_pressure_kernel(rho), 2, a, cfg, order)
        total += v
        err += e
    scale = 1.0 / (2.0 * PI ** 2)
    return QuadratureResult(-scale * total, scale * err)


def free_energy_zero_t_quadrature(refl, a: float, cfg: QuadratureConfig | None = None,
                                  order: str = "zeta-first") -> QuadratureResult:
    """Zero-temperature free energy by nested quadrature.

    ``F = 1/(4 pi^2) int_0^inf dzeta int_zeta^inf dkappa kappa sum_sigma log(1 - rho e^{-2 kappa a})``
    """
    cfg = cfg or QuadratureConfig()
    if a <= 0:
        raise DomainError(f"separation must be positive, got {a!r}")
    total, err = 0.0, 0.0
    for rho in _products(refl):
        v, e = _double_integral(_energy_kernel(rho), 1, a, cfg, order)
        total += v
        err += e
    scale = 1.0 / (4.0 * PI ** 2)
    return QuadratureResult(scale * total, scale * err)


def _mode_bound(rho, zeta, a):
    # |int_zeta^inf kappa log(1 - rho e^{-2 kappa a})| <= |rho| e^{-2 zeta a}(2 a zeta + 1) / (4 a^2 (1 - |rho| e^{-2 zeta a}))
    y = abs(rho) * math.exp(-2.0 * zeta * a)
    return y * (2.0 * a * zeta + 1.0) / (4.0 * a * a * (1.0 - y))


def free_energy_matsubara_quadrature(refl, state, cfg: QuadratureConfig | None = None,
                                     tol: float = 1e-15) -> QuadratureResult:
    """Finite-temperature free energy by 1-D quadrature of every Matsubara mode.

    ``F = T/(2 pi) sum'_m int_{zeta_m}^inf dkappa kappa sum_sigma log(1 - rho e^{-2 kappa a})``,
    ``zeta_m = 2 pi m T``, the m = 0 mode at half weight.  Modes are added until
    an elementary bound on all remaining modes drops below ``tol`` relative.
    """
    cfg = cfg or QuadratureConfig()
    a, T = state.a, state.T
    if T <= 0:
        raise DomainError("Matsubara quadrature needs T > 0")
    total, err = 0.0, 0.0
    for rho in _products(refl):
        kernel = _energy_kernel(rho)
        acc, acc_err = 0.0, 0.0
        m = 0
        while True:
            zeta = 2.0 * PI * m * T
            v, e = _tail_integral(kernel, 1, zeta, a, cfg)
            w = 0.5 if m == 0 else 1.0
            acc += w * v
            acc_err += w * e
            if m >= 4:
                tail, j = 0.0, m + 1
                while True:
                    b = _mode_bound(rho, 2.0 * PI * j * T, a)
                    tail += b
                    if b <= 1e-3 * tail or b == 0.0:
                        break
                    j += 1
                if tail <= tol * abs(acc):
                    acc_err += tail
                    break
            m += 1
        total += acc
        err += acc_err
    scale = T / (2.0 * PI)
    return QuadratureResult(scale * total, scale * err)


def _regulated_harmonic(k, eps):
    # int_0^inf e^{-eps xi} [-xi^2 sin(k xi)/k - 2 xi cos(k xi)/k^2 + 2 sin(k xi)/k^3] d xi,
    # from int xi^n e^{-(eps - i k) xi} = n!/(eps - i k)^(n+1); tends to 6/k^4 as eps -> 0
    s = complex(eps, -k)
    return (-(2.0 / s ** 3).imag / k - 2.0 * (1.0 / s ** 2).real / k ** 2
            + 2.0 * (1.0 / s).imag / k ** 3)


def regulated_spectrum_termwise(rho: float, a: float, eps: float, tol: float = 1e-16) -> QuadratureResult:
    """Damped spectrum integral of one polarization, summed harmonic by harmonic.

    Expanding the density in powers ``rho^k`` each harmonic integrates in
    closed form under ``e^{-eps xi}``.  Harmonic magnitudes are below
    ``6/k^4 |rho|^k``, which bounds the truncated tail.
    """
    if not (eps > 0 and a > 0 and -1.0 <= rho <= 1.0):
        raise DomainError("need eps > 0, a > 0 and |rho| <= 1")
    pref = -1.0 / (16.0 * PI ** 2 * a ** 3) / (2.0 * a)
    if rho == 0.0:
        return QuadratureResult(0.0, 0.0)
    terms = []
    running = 0.0
    k = 0
    while True:
        k += 1
        terms.append(rho ** k * _regulated_harmonic(k, eps))
        running += terms[-1]
        # sum_{j>k} 6|rho|^j/j^4: geometric bound, or the integral bound 2/k^3 at |rho| = 1
        r = abs(rho)
        tail = 2.0 / k ** 3 if r == 1.0 else min(2.0 / k ** 3, 6.0 * r ** (k + 1) / ((k + 1) ** 4 * (1.0 - r)))
        if tail <= tol * abs(running) or k >= 10_000_000:
            break
    return QuadratureResult(pref * math.fsum(terms), abs(pref) * tail)


def finite_difference(f: Callable[[float], float], x: float, h: float, order: int = 1) -> float:
    """Central difference estimate of the first or second derivative of ``f`` at ``x``.

    Warns with :class:`NumericalWarning` when the difference of function values
    is comparable to their rounding error.
    """
    if order not in (1, 2):
        raise DomainError(f"order must be 1 or 2, got {order!r}")
    if not h > 0 or x + h == x or x - h == x:
        raise DomainError(f"step h = {h!r} is below the resolution of x = {x!r}")
    fp, fm = f(x + h), f(x - h)
    if order == 1:
        diff = fp - fm
        scale = max(abs(fp), abs(fm))
        est = diff / (2.0 * h)
    else:
        f0 = f(x)
        diff = fp - 2.0 * f0 + fm
        scale = max(abs(fp), abs(fm), abs(f0))
        est = diff / (h * h)
    if diff != 0.0 and abs(diff) <= 1e3 * EPS * scale:
        warnings.warn(f"finite difference at x = {x!r} with h = {h!r} is at the round-off floor",
                      NumericalWarning, stacklevel=2)
    return est
