"""Pressure, free energy and entropy of two plates with constant reflectivities.

Natural units (hbar = k_B = c = 1): the separation ``a`` is a length L, the
temperature ``T`` an inverse length, free energies are per unit area (1/L^3)
and pressures 1/L^4.  Negative pressure means attraction.

Each polarization enters only through the product ``rho = r1 * r2`` of the two
bodies' reflection coefficients.  Thermal results are available in two exactly
equivalent forms, a sum over Matsubara frequencies ``2 pi m T`` and a sum over
round trips ``k`` between the plates, which the test-suite plays off against
each other.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from fractions import Fraction

from . import _kernels
from .errors import ConvergenceError, DomainError, RegimeWarning
from .polylog import _bernoulli, _li_nonpositive_exact, li_real, li_reduced, zeta_int

PI = math.pi
THERMAL_TOL = 1e-15
SERIES_TOL = 1e-17
MIN_MATSUBARA = 5
MAX_MATSUBARA = 10_000_000
MAX_ROUND_TRIPS = 100_000_000
# Below this aT the dispatchers (free_energy, pressure and the generalized
# force) return the T = 0 closed forms.  The neglected thermal part is at most
# 2 pi^2 (aT)^2 / (3 eta(3)) ~ 7e-16 relative for the force, far less for F, P.
ZERO_T_FLOOR_AT = 1e-8

__all__ = [
    "ReflectivityPair",
    "CavityState",
    "ThermalSeries",
    "AsymptoticSeries",
    "ideal_pressure",
    "ideal_free_energy",
    "pressure_zero_t",
    "free_energy_zero_t",
    "free_energy_matsubara",
    "free_energy_geometric",
    "pressure_thermal",
    "pressure_geometric",
    "free_energy",
    "pressure",
    "entropy",
    "free_energy_high_t",
    "free_energy_low_t",
    "asymptotic_series",
    "ideal_conductor_expansion",
]


def _check_coefficient(name, value):
    if not math.isfinite(value) or abs(value) > 1.0:
        raise DomainError(f"reflection coefficient {name} must satisfy |r| <= 1, got {value!r}")


@dataclass(frozen=True)
class ReflectivityPair:
    """Constant reflection coefficients of body 1 and body 2, per polarization."""

    r_s1: float
    r_p1: float
    r_s2: float
    r_p2: float

    def __post_init__(self):
        for name in ("r_s1", "r_p1", "r_s2", "r_p2"):
            value = float(getattr(self, name))
            _check_coefficient(name, value)
            object.__setattr__(self, name, value)

    @classmethod
    def uniform(cls, r: float) -> "ReflectivityPair":
        """Both bodies, both polarizations equal to ``r``."""
        return cls(r, r, r, r)

    @classmethod
    def from_products(cls, rho_s: float, rho_p: float | None = None) -> "ReflectivityPair":
        """Identical bodies realising the products ``rho_s`` and ``rho_p``.

        A negative product is realised as ``r1 = 1, r2 = rho``.
        """
        if rho_p is None:
            rho_p = rho_s
        coeffs = []
        for rho in (rho_s, rho_p):
            rho = float(rho)
            if not -1.0 <= rho <= 1.0:
                raise DomainError(f"reflectivity product must lie in [-1, 1], got {rho!r}")
            coeffs.append((math.sqrt(rho), math.sqrt(rho)) if rho >= 0 else (1.0, rho))
        (s1, s2), (p1, p2) = coeffs
        return cls(s1, p1, s2, p2)

    @property
    def rho_s(self) -> float:
        return self.r_s1 * self.r_s2

    @property
    def rho_p(self) -> float:
        return self.r_p1 * self.r_p2

    @property
    def products(self) -> tuple:
        return (self.rho_s, self.rho_p)

    @property
    def repulsive_capable(self) -> bool:
        """True when some polarization has opposite-sign reflection (rho < 0)."""
        return self.rho_s < 0 or self.rho_p < 0

    def coefficient(self, body: int, polarization: str) -> float:
        return getattr(self, _field(body, polarization))

    def with_coefficient(self, body: int, polarization: str, value: float) -> "ReflectivityPair":
        return replace(self, **{_field(body, polarization): value})


def _field(body, polarization):
    if body not in (1, 2) or polarization not in ("s", "p"):
        raise DomainError(f"need body in {{1, 2}} and polarization in {{'s', 'p'}}, got {body!r}, {polarization!r}")
    return f"r_{polarization}{body}"


@dataclass(frozen=True)
class CavityState:
    """Plate separation ``a`` > 0 and temperature ``T`` >= 0 (natural units)."""

    a: float
    T: float = 0.0

    def __post_init__(self):
        a, T = float(self.a), float(self.T)
        if not (math.isfinite(a) and a > 0):
            raise DomainError(f"separation must be positive, got a = {self.a!r}")
        if not (math.isfinite(T) and T >= 0):
            raise DomainError(f"temperature must be non-negative, got T = {self.T!r}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "T", T)

    @property
    def aT(self) -> float:
        return self.a * self.T

    def with_T(self, T: float) -> "CavityState":
        return CavityState(self.a, T)

    def with_a(self, a: float) -> "CavityState":
        return CavityState(a, self.T)


@dataclass(frozen=True)
class ThermalSeries:
    """A truncated thermal sum: the value, how many terms it took, and a bound on the rest."""

    value: float
    terms_used: int
    tail_bound: float

    def __float__(self):
        return self.value


def _require_thermal(state):
    if state.T <= 0:
        raise DomainError("thermal sums need T > 0; use the zero-temperature closed forms at T = 0")


# ---------------------------------------------------------------------------
# zero temperature
# ---------------------------------------------------------------------------

def ideal_pressure(a: float) -> float:
    """Casimir pressure between perfect mirrors, ``-pi^2 / (240 a^4)``."""
    return -PI ** 2 / (240.0 * a ** 4)


def ideal_free_energy(a: float) -> float:
    """Casimir free energy per area between perfect mirrors, ``-pi^2 / (720 a^3)``."""
    return -PI ** 2 / (720.0 * a ** 3)


def _li4_sum(refl):
    return sum(li_real(4, rho, SERIES_TOL).value for rho in refl.products)


def pressure_zero_t(refl: ReflectivityPair, a: float) -> float:
    """Zero-temperature pressure ``-3/(16 pi^2 a^4) * sum_sigma Li_4(rho_sigma)``."""
    a = CavityState(a).a
    return -3.0 * _li4_sum(refl) / (16.0 * PI ** 2 * a ** 4)


def free_energy_zero_t(refl: ReflectivityPair, a: float) -> float:
    """Zero-temperature free energy per area ``-1/(16 pi^2 a^3) * sum_sigma Li_4(rho_sigma)``."""
    a = CavityState(a).a
    return -_li4_sum(refl) / (16.0 * PI ** 2 * a ** 3)


# ---------------------------------------------------------------------------
# Matsubara form
# ---------------------------------------------------------------------------

def matsubara_moments(rho: float, state: CavityState, tol: float = THERMAL_TOL):
    """Primed Matsubara sums for one polarization.

    Returns ``(sums, terms, tail_a, tail_b)`` where, with ``c = 4 pi a T`` and
    ``x_m = rho exp(-c m)``, ``sums`` holds the half-weighted sums over m >= 0 of
    ``Li3(x)``, ``c m Li2(x)``, ``(c m)^2 Li1(x)``, ``e^{-cm} Li2(x)/x`` and
    ``c m e^{-cm} Li1(x)/x``.  ``tail_a`` bounds the omitted part of each of the
    first three sums, ``tail_b`` of the last two.  Raises ConvergenceError
    when ``MAX_MATSUBARA`` terms cannot reach ``tol``.
    """
    c = 4.0 * PI * state.a * state.T
    if c * MAX_MATSUBARA < 1.0:
        raise ConvergenceError(f"Matsubara sum at aT = {state.aT:g} needs more than {MAX_MATSUBARA} terms")
    m0_a = 0.5 * li_real(3, rho, SERIES_TOL).value
    m0_b = 0.5 * li_reduced(2, rho)
    sums, M, tail_a, tail_b = _kernels.matsubara_sums(
        rho, c, tol, abs(m0_a), abs(m0_b), MIN_MATSUBARA, MAX_MATSUBARA)
    if math.isnan(sums[0]):
        raise ConvergenceError(f"Matsubara sum at aT = {state.aT:g} did not reach tol = {tol:g} "
                               f"within {MAX_MATSUBARA} terms")
    sums = sums.copy()
    sums[0] += m0_a
    sums[3] += m0_b
    return sums, M + 1, tail_a, tail_b


def free_energy_matsubara(refl: ReflectivityPair, state: CavityState,
                          tol: float = THERMAL_TOL) -> ThermalSeries:
    """Free energy per area as the primed sum over Matsubara frequencies.

    ``F = -T/(8 pi a^2) sum_sigma sum'_m [2 a zeta_m Li2(x_m) + Li3(x_m)]``,
    ``x_m = rho_sigma exp(-2 zeta_m a)``; the m = 0 term carries weight 1/2.
    Truncation stops once a rigorous bound on the omitted terms is below
    ``tol`` relative to the leading term.
    """
    _require_thermal(state)
    a, T = state.a, state.T
    pref = T / (8.0 * PI * a ** 2)
    value, terms, tail = 0.0, 0, 0.0
    for rho in refl.products:
        if rho == 0.0:
            continue
        sums, n, tail_a, _ = matsubara_moments(rho, state, tol)
        value -= pref * (sums[0] + sums[1])
        terms = max(terms, n)
        tail += pref * tail_a
    return ThermalSeries(value, terms, tail)


def pressure_thermal(refl: ReflectivityPair, state: CavityState,
                     tol: float = THERMAL_TOL) -> ThermalSeries:
    """Pressure ``-dF/da`` of the Matsubara form, differentiated analytically.

    ``P = -T/(4 pi a^3) sum_sigma sum'_m [Li3(x_m) + 2 zeta_m a Li2(x_m) + 2 (zeta_m a)^2 Li1(x_m)]``.
    """
    _require_thermal(state)
    a, T = state.a, state.T
    pref = T / (4.0 * PI * a ** 3)
    value, terms, tail = 0.0, 0, 0.0
    for rho in refl.products:
        if rho == 0.0:
            continue
        sums, n, tail_a, _ = matsubara_moments(rho, state, tol)
        value -= pref * (sums[0] + sums[1] + 0.5 * sums[2])
        terms = max(terms, n)
        tail += pref * tail_a
    return ThermalSeries(value, terms, tail)


# ---------------------------------------------------------------------------
# round-trip (geometric) form
# ---------------------------------------------------------------------------

def _round_trip(rho, state, power, kind, scale, tol):
    # sum_k rho^(k-1) K(k x1)/k^power, see _kernels; scale sets the tolerance
    x1 = 2.0 * PI * state.a * state.T
    if math.exp(-2.0 * x1) == 1.0:
        raise ConvergenceError(f"round-trip sum at aT = {state.aT:g} would need unboundedly many terms")
    s, K, t = _kernels.geometric_sum(rho, x1, power, kind, tol, scale, MAX_ROUND_TRIPS)
    if math.isnan(s):
        raise ConvergenceError(f"round-trip sum at aT = {state.aT:g} did not reach tol = {tol:g} "
                               f"within {MAX_ROUND_TRIPS} terms")
    return s, K, t


def free_energy_geometric(refl: ReflectivityPair, state: CavityState,
                          tol: float = THERMAL_TOL) -> ThermalSeries:
    """Free energy per area as a sum over round trips between the plates.

    ``F = -T/(16 pi a^2) sum_sigma sum_k rho^k/k^3 W(x_k)``, ``x_k = 2 pi k T a``,
    with ``W(x) = x/sinh^2 x + coth x``.  Because ``W -> 1`` exponentially the
    sum is evaluated as ``Li3(rho) + sum_k rho^k (W(x_k) - 1)/k^3``, which
    converges geometrically even for ``rho = 1``.  The number of terms grows
    like ``1/(aT)``.
    """
    _require_thermal(state)
    a, T = state.a, state.T
    pref = T / (16.0 * PI * a ** 2)
    x1 = 2.0 * PI * T * a
    value, terms, tail = 0.0, 0, 0.0
    for rho in refl.products:
        if rho == 0.0:
            continue
        li3 = li_real(3, rho, SERIES_TOL).value
        # for rho > 0 the bracket exceeds both Li3 and 2 Li4/x1; the scale stays below that
        scale = max(abs(li3), abs(li_real(4, rho, SERIES_TOL).value) / x1)
        s, K, t = _round_trip(rho, state, 3, 0, scale / abs(rho), tol)
        value -= pref * (li3 + rho * s)
        terms = max(terms, K)
        tail += pref * abs(rho) * t
    return ThermalSeries(value, terms, tail)


def pressure_geometric(refl: ReflectivityPair, state: CavityState,
                       tol: float = THERMAL_TOL) -> ThermalSeries:
    """Pressure ``-dF/da`` of the round-trip form, differentiated term by term.

    ``P = -T/(16 pi a^3) sum_sigma sum_k rho^k/k^3 U(x_k)`` with
    ``U = 2W - x W'``, summed as ``2 Li3(rho) + sum_k rho^k (U - 2)/k^3``.
    """
    _require_thermal(state)
    a, T = state.a, state.T
    pref = T / (16.0 * PI * a ** 3)
    x1 = 2.0 * PI * T * a
    value, terms, tail = 0.0, 0, 0.0
    for rho in refl.products:
        if rho == 0.0:
            continue
        li3 = li_real(3, rho, SERIES_TOL).value
        scale = max(2.0 * abs(li3), 3.0 * abs(li_real(4, rho, SERIES_TOL).value) / x1)
        s, K, t = _round_trip(rho, state, 3, 1, scale / abs(rho), tol)
        value -= pref * (2.0 * li3 + rho * s)
        terms = max(terms, K)
        tail += pref * abs(rho) * t
    return ThermalSeries(value, terms, tail)


def free_energy(refl: ReflectivityPair, state: CavityState) -> float:
    """Free energy per area at any ``T >= 0``.

    Round-trip sum for ``aT >= ZERO_T_FLOOR_AT``, the T = 0 closed form below.
    """
    if state.aT < ZERO_T_FLOOR_AT:
        return free_energy_zero_t(refl, state.a)
    return free_energy_geometric(refl, state).value


def pressure(refl: ReflectivityPair, state: CavityState) -> float:
    """Pressure at any ``T >= 0`` (round-trip sum, or the T = 0 form below the floor)."""
    if state.aT < ZERO_T_FLOOR_AT:
        return pressure_zero_t(refl, state.a)
    return pressure_geometric(refl, state).value


# ---------------------------------------------------------------------------
# entropy
# ---------------------------------------------------------------------------

# Below this aT the central difference in T drowns in round-off.
ENTROPY_DIFFERENCE_MIN_AT = 1e-3
ENTROPY_STEP = 1e-4


def _entropy_low_t(rho, state):
    a, T = state.a, state.T
    if rho == 1.0:
        # half of the ideal-conductor expansion derivative (one polarization)
        return 0.5 * (3.0 * zeta_int(3) * T ** 2 / (2.0 * PI) - 4.0 * PI ** 2 * a * T ** 3 / 45.0)
    return 4.0 * PI ** 2 * a * T ** 3 / 45.0 * (rho / (1.0 - rho))


def entropy(refl: ReflectivityPair, state: CavityState) -> float:
    """Entropy per area ``S = -dF/dT``.

    Central difference of the Matsubara free energy with step ``T * 1e-4``.
    For ``aT`` below ``ENTROPY_DIFFERENCE_MIN_AT`` the difference quotient is
    dominated by round-off and the derivative of the low-temperature expansion
    is returned instead, polarization by polarization.
    """
    _require_thermal(state)
    if state.aT < ENTROPY_DIFFERENCE_MIN_AT:
        return sum(_entropy_low_t(rho, state) for rho in refl.products if rho != 0.0)
    h = state.T * ENTROPY_STEP
    up = free_energy_matsubara(refl, state.with_T(state.T + h)).value
    down = free_energy_matsubara(refl, state.with_T(state.T - h)).value
    return -(up - down) / (2.0 * h)


# ---------------------------------------------------------------------------
# asymptotes
# ---------------------------------------------------------------------------

def free_energy_high_t(refl: ReflectivityPair, state: CavityState) -> float:
    """High-temperature asymptote ``-T/(16 pi a^2) sum_sigma Li3(rho_sigma)``.

    Only the static (m = 0) Matsubara term survives; the neglected terms are of
    relative size ``exp(-4 pi a T)``.  Warns with :class:`RegimeWarning` when
    ``aT <= 1/2``.
    """
    _require_thermal(state)
    if state.aT <= 0.5:
        warnings.warn(f"high-temperature asymptote used at aT = {state.aT:g} <= 1/2",
                      RegimeWarning, stacklevel=2)
    li3 = sum(li_real(3, rho, SERIES_TOL).value for rho in refl.products)
    return -state.T * li3 / (16.0 * PI * state.a ** 2)


def _reject_ideal(refl, what):
    for rho in refl.products:
        if rho >= 1.0:
            raise DomainError(f"{what} requires rho < 1 for both polarizations (got rho = 1); "
                              "use ideal_conductor_expansion for perfect mirrors")


def free_energy_low_t(refl: ReflectivityPair, state: CavityState) -> float:
    """Low-temperature expansion ``F0 - (pi^2 a T^4 / 45) sum_sigma rho/(1 - rho)``, valid for rho < 1."""
    _reject_ideal(refl, "the low-temperature expansion")
    a, T = state.a, state.T
    correction = sum(rho / (1.0 - rho) for rho in refl.products)
    return free_energy_zero_t(refl, a) - PI ** 2 * a * T ** 4 / 45.0 * correction


@dataclass(frozen=True)
class AsymptoticSeries:
    """Terms of the low-temperature series and their optimally truncated sum.

    ``terms`` lists ``(power_of_T, value)`` pairs summed over polarizations.
    ``value`` adds all terms before the smallest one (index ``truncation_index``),
    whose magnitude is reported as ``error_estimate``.  ``diverging`` is set
    when term magnitudes grow again beyond the smallest one.
    """

    terms: tuple
    value: float
    truncation_index: int
    error_estimate: float
    diverging: bool


def asymptotic_term_coefficient(k: int, rho: float) -> Fraction | float:
    """``(k-1) B_2k / (2k)! * Li_{4-2k}(rho)``: exact rational for k >= 2."""
    if k == 0:
        return -li_real(4, rho, SERIES_TOL).value
    if k == 1:
        return Fraction(0)
    return (k - 1) * _bernoulli(2 * k) / math.factorial(2 * k) * _li_nonpositive_exact(4 - 2 * k, rho)


def _asymptotic_term(k, rho, a, T):
    if k == 0:
        return -li_real(4, rho, SERIES_TOL).value / (16.0 * PI ** 2 * a ** 3)
    coef = asymptotic_term_coefficient(k, rho)
    if coef == 0:
        return 0.0
    y = Fraction(4.0 * PI * a * T) ** (2 * k) / Fraction(16.0 * PI ** 2 * a ** 3)
    try:
        return float(coef * y)
    except OverflowError:
        return math.copysign(math.inf, coef)


def asymptotic_series(refl: ReflectivityPair, state: CavityState, max_order: int) -> AsymptoticSeries:
    """Low-temperature series of the free energy in powers ``T^(2k)``, ``k = 0..max_order``.

    Per polarization the k-th term is
    ``(1/(16 pi^2 a^3)) (k-1) B_2k/(2k)! Li_{4-2k}(rho) (4 pi a T)^(2k)``.
    The series is asymptotic with zero radius of convergence.
    """
    _reject_ideal(refl, "the asymptotic temperature series")
    max_order = int(max_order)
    if max_order < 0:
        raise DomainError(f"max_order must be >= 0, got {max_order}")
    a, T = state.a, state.T
    terms = []
    for k in range(max_order + 1):
        terms.append((2 * k, math.fsum(_asymptotic_term(k, rho, a, T) for rho in refl.products)))
    mags = [abs(v) for _, v in terms]
    candidates = [k for k in range(2, len(terms)) if mags[k] > 0]
    if candidates:
        kmin = min(candidates, key=lambda k: mags[k])
        diverging = any(mags[k] > mags[kmin] for k in candidates if k > kmin)
        value = math.fsum(v for _, v in terms[:kmin])
        err = mags[kmin]
    else:
        kmin = len(terms)
        diverging = False
        value = math.fsum(v for _, v in terms)
        err = 0.0
    return AsymptoticSeries(tuple(terms), value, kmin, err, diverging)


def ideal_conductor_expansion(state: CavityState) -> float:
    """Perfect-mirror free energy ``-pi^2/(720 a^3) - zeta(3) T^3/(2 pi) + pi^2 a T^4/45``.

    Exact up to exponentially small corrections as ``T -> 0``; warns with
    :class:`RegimeWarning` above ``aT = 0.3``.
    """
    a, T = state.a, state.T
    if state.aT > 0.3:
        warnings.warn(f"ideal-conductor expansion used at aT = {state.aT:g} > 0.3",
                      RegimeWarning, stacklevel=2)
    return -PI ** 2 / (720.0 * a ** 3) - zeta_int(3) * T ** 3 / (2.0 * PI) + PI ** 2 * a * T ** 4 / 45.0
