"""Real-frequency spectrum of the zero-temperature pressure.

With ``xi = 2 omega a`` the pressure density per unit frequency and
polarization is

    P_omega = -1/(16 pi^2 a^3) [-xi^2 Im Li1(z) - 2 xi Re Li2(z) + 2 Im Li3(z)],
    z = rho exp(i xi),

and ``P = int_0^inf d omega sum_sigma P_omega``.  For ``rho = 1`` the density
jumps at ``xi = 2 pi n``; for ``rho < 1`` it is smooth but its envelope grows
like ``xi^2``, so the frequency integral only exists with a regulator.

Under the damping ``exp(-eps xi)`` the k-th harmonic of the density
integrates to ``k^-4 G(eps/k)`` with ``G`` even, so the regulated integral is
a function of ``eps^2`` and extrapolation to ``eps = 0`` is done in ``eps^2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError, SingularityError
from .planar import ReflectivityPair
from .polylog import li_unit_circle_array

PI = math.pi
TWO_PI = 2.0 * PI
LI_TOL = 1e-15
GAUSS_NODES = 20
GRADING = 0.25

__all__ = [
    "SpectrumSample",
    "SpectrumIntegral",
    "spectral_density",
    "spectral_density_array",
    "ideal_jump",
    "regulated_integral",
    "integrate_spectrum",
]


@dataclass(frozen=True)
class SpectrumSample:
    """Density per unit omega at ``xi = 2 omega a``, for each polarization."""

    xi: float
    density_s: float
    density_p: float

    @property
    def total(self) -> float:
        return self.density_s + self.density_p


def _check(a, xi):
    if not (math.isfinite(a) and a > 0):
        raise DomainError(f"separation must be positive, got a = {a!r}")
    if np.any(~np.isfinite(xi)) or np.any(xi < 0):
        raise DomainError("xi must be finite and non-negative")


def _bracket(rho, xi, jump):
    """-xi^2 Im Li1 - 2 xi Re Li2 + 2 Im Li3 at z = rho e^{i xi}, elementwise."""
    out = np.zeros(xi.shape)
    if rho == 0.0:
        return out
    r2 = abs(rho)
    angle = xi + PI if rho < 0 else xi
    k = np.floor(angle / TWO_PI + 0.5)
    on_pole = (angle == TWO_PI * k) if r2 == 1.0 else np.zeros(xi.shape, bool)
    at_origin = xi == 0.0
    if np.any(on_pole & ~at_origin) and jump == "raise":
        bad = xi[on_pole & ~at_origin][0]
        raise SingularityError(f"density for rho = {rho:g} is discontinuous at xi = {bad!r}; "
                               "pass jump='midpoint' for the average of the one-sided limits")
    safe = ~on_pole
    li1 = np.zeros(xi.shape, complex)
    if np.any(safe):
        li1[safe] = li_unit_circle_array(1, r2, angle[safe], LI_TOL)
    # on a pole the midpoint of Im Li1's two limits +-pi/2 is 0
    li2 = li_unit_circle_array(2, r2, angle, LI_TOL)
    li3 = li_unit_circle_array(3, r2, angle, LI_TOL)
    out = -xi * xi * li1.imag - 2.0 * xi * li2.real + 2.0 * li3.imag
    return out


def spectral_density_array(refl: ReflectivityPair, a: float, xi, jump: str = "raise"):
    """Per-polarization densities on an array of ``xi``; returns ``(density_s, density_p)``."""
    if jump not in ("raise", "midpoint"):
        raise DomainError(f"jump must be 'raise' or 'midpoint', got {jump!r}")
    xi = np.atleast_1d(np.asarray(xi, dtype=np.float64))
    a = float(a)
    _check(a, xi)
    pref = -1.0 / (16.0 * PI ** 2 * a ** 3)
    return pref * _bracket(refl.rho_s, xi, jump), pref * _bracket(refl.rho_p, xi, jump)


def spectral_density(refl: ReflectivityPair, a: float, xi: float, jump: str = "raise") -> SpectrumSample:
    """Spectral pressure density at one frequency.

    At ``rho = 1`` and ``xi = 2 pi n`` (n >= 1) the density has a jump and
    this raises :class:`SingularityError` unless ``jump="midpoint"``.
    """
    s, p = spectral_density_array(refl, a, [xi], jump)
    return SpectrumSample(float(xi), float(s[0]), float(p[0]))


def ideal_jump(a: float, n: int = 1) -> float:
    """Jump ``P_omega(2 pi n +) - P_omega(2 pi n -)`` of one perfectly reflecting polarization.

    Only the ``-xi^2 Im Li1`` term is discontinuous; ``Im Li1`` rises by ``pi``.
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n!r}")
    return n * n * PI / (4.0 * a ** 3)


# ---------------------------------------------------------------------------
# regulated integral
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpectrumIntegral:
    """Extrapolated spectrum integral and the data behind it.

    ``regulated[i]`` is the e^{-eps xi}-damped integral at ``epsilons[i]``;
    ``extrapolated[i]`` the polynomial extrapolation to eps = 0 through the
    first ``i + 1`` of them, and ``residuals[i] = |extrapolated[i+1] - extrapolated[i]|``.
    """

    value: float
    epsilons: tuple
    regulated: tuple
    extrapolated: tuple
    residuals: tuple
    error_estimate: float


def _period_rule(rho):
    """Gauss-Legendre nodes/weights on (0, 2 pi), graded towards both ends.

    The integrand's singularities sit a distance ``-log|rho|`` off the real
    axis at the period ends.
    """
    d = max(-math.log(abs(rho)), 1e-3) if abs(rho) < 1.0 else 1e-3
    levels = max(1, math.ceil(math.log(8.0 * PI / d) / math.log(1.0 / GRADING)))
    edges = [0.0] + [PI * GRADING ** j for j in range(levels, -1, -1)]
    x, w = np.polynomial.legendre.leggauss(GAUSS_NODES)
    nodes, weights = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        half = 0.5 * (hi - lo)
        nodes.append(lo + half * (x + 1.0))
        weights.append(half * w)
    left = np.concatenate(nodes)
    wl = np.concatenate(weights)
    t = np.concatenate([left, TWO_PI - left[::-1]])
    wt = np.concatenate([wl, wl[::-1]])
    return t, wt


def _regulated_one(rho, eps_list):
    # int_0^inf e^{-eps xi} bracket(xi) d xi, summing the periods xi = 2 pi n + t in closed form
    if rho == 0.0:
        return np.zeros(len(eps_list))
    t, w = _period_rule(rho)
    r2 = abs(rho)
    angle = t + PI if rho < 0 else t
    im1 = li_unit_circle_array(1, r2, angle, LI_TOL).imag
    re2 = li_unit_circle_array(2, r2, angle, LI_TOL).real
    im3 = li_unit_circle_array(3, r2, angle, LI_TOL).imag
    out = []
    for eps in eps_list:
        q = math.exp(-TWO_PI * eps)
        om = -math.expm1(-TWO_PI * eps)
        s0 = 1.0 / om
        s1 = q / om ** 2
        s2 = q * (1.0 + q) / om ** 3
        damp = w * np.exp(-eps * t)
        # (2 pi n + t)^2 and (2 pi n + t) summed against q^n
        sq = 4.0 * PI ** 2 * s2 + 4.0 * PI * t * s1 + t * t * s0
        lin = TWO_PI * s1 + t * s0
        out.append(math.fsum(damp * (-im1 * sq - 2.0 * re2 * lin + 2.0 * im3 * s0)))
    return np.array(out)


def regulated_integral(refl: ReflectivityPair, a: float, eps_list) -> np.ndarray:
    """``int_0^inf d omega e^{-eps xi} sum_sigma P_omega`` for each regulator ``eps``."""
    eps_list = [float(e) for e in eps_list]
    if any(not (e > 0 and math.isfinite(e)) for e in eps_list):
        raise DomainError("regulators must be positive and finite")
    a = float(a)
    _check(a, np.zeros(1))
    pref = -1.0 / (16.0 * PI ** 2 * a ** 3) / (2.0 * a)
    total = _regulated_one(refl.rho_s, eps_list) + _regulated_one(refl.rho_p, eps_list)
    return pref * total


def _neville_diagonal(xs, ys):
    """Values at 0 of the interpolating polynomials through the first 1, 2, ... points."""
    n = len(xs)
    p = list(ys)
    diag = [p[0]]
    # p[i] after stage m interpolates points i-m .. i
    for m in range(1, n):
        for i in range(n - 1, m - 1, -1):
            p[i] = (xs[i] * p[i - 1] - xs[i - m] * p[i]) / (xs[i] - xs[i - m])
        diag.append(p[m])
    return diag


def integrate_spectrum(refl: ReflectivityPair, a: float,
                       epsilon_list=(0.2, 0.1, 0.05, 0.025)) -> SpectrumIntegral:
    """Total pressure recovered from the spectrum.

    Evaluates the damped integral for each ``eps`` (decreasing, positive) and
    extrapolates to ``eps -> 0`` with Neville's polynomial scheme in ``eps^2``.  Raises
    :class:`ConvergenceError` when successive extrapolants stop getting closer.
    """
    eps = [float(e) for e in epsilon_list]
    if not eps:
        raise DomainError("epsilon_list must be non-empty")
    if any(e2 >= e1 for e1, e2 in zip(eps, eps[1:])):
        raise DomainError("epsilon_list must be strictly decreasing")
    reg = regulated_integral(refl, a, eps)
    # every harmonic depends on eps only through eps^2 (see module notes)
    diag = _neville_diagonal([e * e for e in eps], list(reg))
    res = [abs(y - x) for x, y in zip(diag, diag[1:])]
    floor = 1e3 * np.finfo(float).eps * max(abs(v) for v in diag) if diag else 0.0
    for prev, cur in zip(res, res[1:]):
        if cur > prev and cur > floor:
            raise ConvergenceError(
                f"spectrum extrapolation is not converging: residuals {res}")
    err = res[-1] if res else math.inf
    return SpectrumIntegral(diag[-1], tuple(eps), tuple(reg), tuple(diag), tuple(res), err)
