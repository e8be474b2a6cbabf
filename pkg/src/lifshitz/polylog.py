"""Integer-order polylogarithms, Bernoulli numbers and zeta at integers.

Real arguments on [-1, 1] and complex arguments ``r2 * exp(i xi)`` on the
closed unit disk are supported.  Mathematical conventions:
``Li_nu(x) = sum_{k>=1} x**k / k**nu`` and ``B_1 = -1/2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import _kernels
from .errors import DomainError, SingularityError

DEFAULT_TOL = 1e-12

__all__ = [
    "PolylogResult",
    "li_real",
    "li_unit_circle",
    "li_unit_circle_array",
    "li_reduced",
    "robinson_expansion",
    "bernoulli",
    "zeta_int",
]


@dataclass(frozen=True)
class PolylogResult:
    """A polylogarithm value with a bound on the truncation error of the method used."""

    value: float | complex
    abs_error_bound: float = 0.0
    terms: int = 0

    def __float__(self):
        return float(self.value)

    def __complex__(self):
        return complex(self.value)


# ---------------------------------------------------------------------------
# Bernoulli numbers and zeta
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _bernoulli_table(nmax: int) -> tuple:
    # B_m = -1/(m+1) sum_{j<m} C(m+1, j) B_j
    table = [Fraction(1)]
    for m in range(1, nmax + 1):
        acc = Fraction(0)
        c = 1  # C(m+1, j), j = 0
        for j in range(m):
            acc += c * table[j]
            c = c * (m + 1 - j) // (j + 1)
        table.append(-acc / (m + 1))
    return tuple(table)


def _bernoulli(n: int) -> Fraction:
    if n < 0:
        raise DomainError(f"Bernoulli index must be non-negative, got {n}")
    if n > 1 and n % 2:
        return Fraction(0)
    size = 64
    while size < n:
        size *= 2
    return _bernoulli_table(size)[n]


def bernoulli(k: int) -> Fraction:
    """Exact Bernoulli number ``B_k`` for even ``0 <= k <= 40``.

    >>> bernoulli(4)
    Fraction(-1, 30)
    """
    if not isinstance(k, (int, np.integer)) or k < 0 or k > 40 or k % 2:
        raise DomainError(f"bernoulli() takes an even integer in [0, 40], got {k!r}")
    return _bernoulli(int(k))


@lru_cache(maxsize=None)
def _zeta_borwein(s: int, n: int = 40) -> Fraction:
    # Borwein's alternating-series algorithm, exact rational arithmetic;
    # relative error below 3 / (3 + sqrt 8)^n ~ 1e-30 for n = 40.
    d = []
    acc = Fraction(0)
    for i in range(n + 1):
        acc += Fraction(math.factorial(n + i - 1) * 4 ** i,
                        math.factorial(n - i) * math.factorial(2 * i))
        d.append(n * acc)
    total = Fraction(0)
    for k in range(n):
        total += Fraction((-1) ** k) * (d[k] - d[n]) / Fraction((k + 1) ** s)
    return -total / (d[n] * (1 - Fraction(1, 2 ** (s - 1))))


@lru_cache(maxsize=None)
def _zeta_exact(n: int) -> Fraction | None:
    """Rational value of zeta(n) for n <= 0, None otherwise."""
    if n == 0:
        return Fraction(-1, 2)
    if n < 0:
        if n % 2 == 0:
            return Fraction(0)
        k = (1 - n) // 2
        return -_bernoulli(2 * k) / (2 * k)
    return None


@lru_cache(maxsize=None)
def zeta_int(n: int) -> float:
    """Riemann zeta at an integer ``n != 1``.

    Positive arguments come from an exact rational Borwein sum (accurate far
    beyond double precision); non-positive arguments are rational.
    """
    n = int(n)
    if n == 1:
        raise SingularityError("zeta has a pole at n = 1")
    exact = _zeta_exact(n)
    if exact is not None:
        return float(exact)
    return float(_zeta_borwein(n))


# ---------------------------------------------------------------------------
# real argument
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _eulerian_row(n: int) -> tuple:
    row = [1]
    for m in range(2, n + 1):
        new = [0] * m
        for k in range(m):
            left = row[k] if k < len(row) else 0
            right = row[k - 1] if k >= 1 else 0
            new[k] = (k + 1) * left + (m - k) * right
        row = new
    return tuple(row)


def _li_nonpositive_exact(nu: int, x: float) -> Fraction:
    # Li_{-n}(x) = x * sum_k A(n,k) x^k / (1-x)^(n+1), A the Eulerian numbers
    n = -nu
    fx = Fraction(x)
    if n == 0:
        return fx / (1 - fx)
    poly = Fraction(0)
    for coeff in reversed(_eulerian_row(n)):
        poly = poly * fx + coeff
    return fx * poly / (1 - fx) ** (n + 1)


def _li_nonpositive(nu: int, x: float) -> float:
    return float(_li_nonpositive_exact(nu, x))


def li_real(nu: int, x: float, tol: float = DEFAULT_TOL) -> PolylogResult:
    """Polylogarithm ``Li_nu(x)`` of integer order for real ``x`` in [-1, 1].

    Orders ``nu <= 0`` use exact rational closed forms and ``nu = 1`` uses
    ``-log(1 - x)``.  Orders ``nu >= 2`` sum the defining power series with an
    adaptively chosen number of terms so that the tail is below ``tol``.
    """
    nu = int(nu)
    x = float(x)
    if not -1.0 <= x <= 1.0:
        raise DomainError(f"li_real needs |x| <= 1, got x = {x!r}")
    if x == 1.0:
        if nu <= 1:
            raise SingularityError(f"Li_{nu}(x) is singular at x = 1")
        return PolylogResult(zeta_int(nu))
    if x == 0.0:
        return PolylogResult(0.0)
    if nu <= 0:
        return PolylogResult(_li_nonpositive(nu, x))
    if nu == 1:
        return PolylogResult(-math.log1p(-x))
    if x == -1.0:
        # Dirichlet eta: Li_nu(-1) = -(1 - 2^(1-nu)) zeta(nu)
        return PolylogResult(-(1.0 - 2.0 ** (1 - nu)) * zeta_int(nu))
    # tol on the O(1) reduced sum: a relative tolerance, hence also absolute since |x| <= 1
    s, k, bound = _kernels.li_reduced(nu, x, tol)
    return PolylogResult(x * s, abs(x) * bound, k)


def li_reduced(nu: int, x: float, tol: float = 1e-17) -> float:
    """``Li_nu(x) / x`` continued to 1 at ``x = 0`` (removes the 1/x in force formulas)."""
    nu = int(nu)
    x = float(x)
    if x == 0.0:
        return 1.0
    if abs(x) == 1.0 or nu <= 1:
        return li_real(nu, x).value / x
    s, _, _ = _kernels.li_reduced(nu, x, tol)
    return s


# ---------------------------------------------------------------------------
# complex argument on the closed unit disk
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _log_series_coefficients(n: int) -> tuple:
    """Coefficients zeta(n-j)/j! of the expansion of Li_n(e^mu) about mu = 0."""
    coef = np.zeros(_kernels.KMAX_LOGSERIES)
    for j in range(coef.size):
        if j == n - 1:
            continue
        exact = _zeta_exact(n - j)
        if exact is not None:
            coef[j] = float(exact / math.factorial(j))
        else:
            coef[j] = zeta_int(n - j) / math.factorial(j)
    harmonic = math.fsum(1.0 / k for k in range(1, n))
    coef.setflags(write=False)
    return coef, harmonic, float(math.factorial(n - 1))


def _reduce_angle(xi):
    return xi - 2.0 * math.pi * np.floor(xi / (2.0 * math.pi) + 0.5)


def li_unit_circle_array(nu: int, r2: float, xi, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Vectorised ``Li_nu(r2 * exp(i xi))`` over an array of angles ``xi``."""
    nu = int(nu)
    r2 = float(r2)
    if nu < 1:
        raise DomainError(f"li_unit_circle needs nu >= 1, got {nu}")
    if not 0.0 <= r2 <= 1.0:
        raise DomainError(f"li_unit_circle needs 0 <= r2 <= 1, got {r2!r}")
    xi = np.atleast_1d(np.asarray(xi, dtype=np.float64))
    if r2 == 0.0:
        return np.zeros(xi.shape, dtype=np.complex128)
    if nu == 1:
        xr = _reduce_angle(xi)
        if r2 == 1.0 and np.any(xr == 0.0):
            raise SingularityError("Li_1(z) is singular at z = 1")
        # 1 - z with the real part formed without cancellation near z = 1
        s = np.sin(0.5 * xr)
        w = (1.0 - r2) + 2.0 * r2 * s * s - 1j * r2 * np.sin(xr)
        return -np.log(w)
    coef, harmonic, fact = _log_series_coefficients(nu)
    return _kernels.li_complex(nu, r2, np.ascontiguousarray(xi), coef, harmonic, fact, tol)


def li_unit_circle(nu: int, r2: float, xi: float, tol: float = DEFAULT_TOL) -> PolylogResult:
    """Polylogarithm ``Li_nu(r2 * exp(i xi))`` for ``nu >= 1`` and ``0 <= r2 <= 1``.

    ``nu = 1`` is the closed form ``-log(1 - z)``.  Higher orders sum the
    power series when ``r2 <= 1/2`` and otherwise the expansion of
    ``Li_nu(e^mu)`` in ``mu = log z`` about ``z = 1``; after reducing the angle
    to ``(-pi, pi]`` that expansion converges at least like ``0.52**j``.
    """
    value = complex(li_unit_circle_array(nu, r2, [xi], tol)[0])
    if nu == 1 or r2 == 0.0:
        bound = 0.0
    elif r2 <= 0.5:
        k = _kernels.series_cutoff(nu, r2, tol, _kernels.KMAX_SERIES)
        bound = r2 ** (k + 1) / ((k + 1.0) ** nu * (1.0 - r2))
    else:
        xr = float(_reduce_angle(xi))
        ratio = math.hypot(math.log(r2), xr) / (2.0 * math.pi)
        j = _kernels.KMAX_LOGSERIES
        bound = 4.0 * (2.0 * math.pi) ** (nu - 1) * ratio ** j / (1.0 - ratio)
    return PolylogResult(value, bound)


# ---------------------------------------------------------------------------
# small-tau expansion of Li_n(e^-tau)
# ---------------------------------------------------------------------------

def _robinson_term(n: int, k: int, tau: float) -> float:
    return zeta_int(n - k) * (-tau) ** k / math.factorial(k)


def robinson_expansion(n: int, tau: float, order: int) -> PolylogResult:
    """Small-``tau`` expansion of ``Li_n(exp(-tau))`` through ``tau**order``.

    The logarithmic piece ``(-tau)^(n-1)/(n-1)! * (H_{n-1} - log tau)`` is
    always kept, so ``order`` must be at least ``n - 1``.  The reported error
    bound is the magnitude of the first omitted power.
    """
    n = int(n)
    order = int(order)
    tau = float(tau)
    if n < 1:
        raise DomainError(f"robinson_expansion needs n >= 1, got {n}")
    if not 0.0 < tau < 2.0 * math.pi:
        raise DomainError(f"tau must lie in (0, 2 pi), got {tau!r}")
    if order < n - 1:
        raise DomainError(f"order must be >= n - 1 = {n - 1}, got {order}")
    harmonic = math.fsum(1.0 / k for k in range(1, n))
    value = (-tau) ** (n - 1) / math.factorial(n - 1) * (harmonic - math.log(tau))
    terms = [_robinson_term(n, k, tau) for k in range(order + 1) if k != n - 1]
    value += math.fsum(terms)
    # first omitted power that does not vanish (zeta at negative even integers is 0)
    nxt = order + 1
    while _robinson_term(n, nxt, tau) == 0.0 and nxt < order + 4:
        nxt += 1
    return PolylogResult(value, abs(_robinson_term(n, nxt, tau)), order + 1)
