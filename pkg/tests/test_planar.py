import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lifshitz import planar
from lifshitz.errors import ConvergenceError, DomainError, RegimeWarning
from lifshitz.oracle import finite_difference
from lifshitz.planar import CavityState, ReflectivityPair
from lifshitz.polylog import zeta_int

PI = math.pi


def mp_free_energy_matsubara(rho, a, T, terms=4000):
    # direct primed Matsubara sum with mpmath polylogs, both polarizations equal
    with mpmath.workdps(30):
        total = mpmath.mpf(0)
        for m in range(terms):
            zeta = 2 * mpmath.pi * m * T
            x = rho * mpmath.exp(-2 * zeta * a)
            term = 2 * a * zeta * mpmath.polylog(2, x) + mpmath.polylog(3, x)
            total += term / 2 if m == 0 else term
            if m > 5 and abs(term) < mpmath.mpf(10) ** -32:
                break
        return float(-T / (8 * mpmath.pi * a * a) * 2 * total)


# ------------------------------------------------------------------ types

def test_reflectivity_validation():
    with pytest.raises(DomainError):
        ReflectivityPair(1.1, 0, 0, 0)
    with pytest.raises(DomainError):
        ReflectivityPair(math.nan, 0, 0, 0)
    r = ReflectivityPair(0.5, -0.4, 0.6, 1.0)
    assert r.products == (0.3, -0.4)
    assert r.repulsive_capable
    assert not ReflectivityPair.uniform(0.3).repulsive_capable


def test_from_products():
    r = ReflectivityPair.from_products(0.25, -0.5)
    assert r.rho_s == pytest.approx(0.25)
    assert r.rho_p == -0.5
    with pytest.raises(DomainError):
        ReflectivityPair.from_products(1.5)


def test_coefficient_access():
    r = ReflectivityPair(0.1, 0.2, 0.3, 0.4)
    assert r.coefficient(2, "p") == 0.4
    assert r.with_coefficient(1, "s", 0.9).r_s1 == 0.9
    with pytest.raises(DomainError):
        r.coefficient(3, "s")
    with pytest.raises(DomainError):
        r.with_coefficient(1, "s", 2.0)


@pytest.mark.parametrize("a, T", [(0.0, 0.0), (-1.0, 0.0), (1.0, -0.1), (math.inf, 0.0)])
def test_state_validation(a, T):
    with pytest.raises(DomainError):
        CavityState(a, T)


# ------------------------------------------------------------------ zero temperature

def test_ideal_limits():
    refl = ReflectivityPair.uniform(1.0)
    assert planar.pressure_zero_t(refl, 1.0) == pytest.approx(-PI ** 2 / 240, rel=1e-15)
    assert planar.free_energy_zero_t(refl, 1.0) == pytest.approx(-PI ** 2 / 720, rel=1e-15)
    assert planar.ideal_pressure(2.0) == -PI ** 2 / (240 * 16)


def test_zero_reflectivity_vanishes():
    refl = ReflectivityPair.uniform(0.0)
    assert planar.pressure_zero_t(refl, 1.0) == 0.0
    assert planar.free_energy(refl, CavityState(1.0, 0.7)) == 0.0


@pytest.mark.parametrize("rho", [0.1, 0.25, 0.5, 0.9, -0.5])
def test_zero_t_closed_forms(rho):
    refl = ReflectivityPair.from_products(rho)
    li4 = float(mpmath.polylog(4, rho))
    assert planar.free_energy_zero_t(refl, 1.5) == pytest.approx(-2 * li4 / (16 * PI ** 2 * 1.5 ** 3), rel=1e-14)
    assert planar.pressure_zero_t(refl, 1.5) == pytest.approx(-6 * li4 / (16 * PI ** 2 * 1.5 ** 4), rel=1e-14)


def test_opposite_sign_reflection_repels():
    refl = ReflectivityPair.from_products(-0.8)
    assert planar.pressure_zero_t(refl, 1.0) > 0


# ------------------------------------------------------------------ thermal

@pytest.mark.parametrize("rho", [0.1, 0.5, 0.9, 1.0, -0.5])
@pytest.mark.parametrize("aT", [1e-3, 0.01, 0.1, 1.0, 5.0])
def test_dual_representation(rho, aT):
    refl = ReflectivityPair.from_products(rho)
    st_ = CavityState(1.0, aT)
    m = planar.free_energy_matsubara(refl, st_)
    g = planar.free_energy_geometric(refl, st_)
    assert m.value == pytest.approx(g.value, rel=1e-13)
    assert m.tail_bound <= 1e-14 * abs(m.value)
    assert g.tail_bound <= 1e-14 * abs(g.value)


@pytest.mark.parametrize("rho, aT", [(0.5, 0.2), (0.9, 1.0), (1.0, 0.5), (-0.3, 0.1)])
def test_matsubara_against_mpmath(rho, aT):
    refl = ReflectivityPair.from_products(rho)
    want = mp_free_energy_matsubara(rho, 1.0, aT)
    assert planar.free_energy_matsubara(refl, CavityState(1.0, aT)).value == pytest.approx(want, rel=1e-14)


def test_matsubara_terms_scale_with_temperature():
    refl = ReflectivityPair.uniform(0.9)
    few = planar.free_energy_matsubara(refl, CavityState(1.0, 1.0)).terms_used
    many = planar.free_energy_matsubara(refl, CavityState(1.0, 0.01)).terms_used
    assert few < many


def test_thermal_requires_positive_temperature():
    with pytest.raises(DomainError):
        planar.free_energy_matsubara(ReflectivityPair.uniform(0.5), CavityState(1.0, 0.0))


def test_free_energy_continuous_at_zero_temperature():
    refl = ReflectivityPair.uniform(0.7)
    f0 = planar.free_energy(refl, CavityState(1.0, 0.0))
    assert planar.free_energy(refl, CavityState(1.0, 1e-4)) == pytest.approx(f0, rel=1e-12)
    p0 = planar.pressure(refl, CavityState(1.0, 0.0))
    assert planar.pressure(refl, CavityState(1.0, 1e-4)) == pytest.approx(p0, rel=1e-12)


@pytest.mark.parametrize("rho", [0.25, 0.81, 1.0])
@pytest.mark.parametrize("aT", [0.01, 0.3, 2.0])
def test_pressure_is_minus_free_energy_derivative(rho, aT):
    refl = ReflectivityPair.from_products(rho)
    T = aT

    def f(a):
        return planar.free_energy_geometric(refl, CavityState(a, T)).value

    want = -finite_difference(f, 1.0, 1e-4)
    assert planar.pressure_thermal(refl, CavityState(1.0, T)).value == pytest.approx(want, rel=1e-7)


def test_entropy_matches_derivative_and_is_positive():
    refl = ReflectivityPair.uniform(0.6)
    for aT in (0.01, 0.1, 1.0, 4.0):
        s = planar.entropy(refl, CavityState(1.0, aT))
        assert s > 0
        want = -finite_difference(lambda t: planar.free_energy_geometric(refl, CavityState(1.0, t)).value, aT, aT * 1e-3)
        assert s == pytest.approx(want, rel=1e-5)


def test_entropy_low_temperature_fallback_is_continuous():
    refl = ReflectivityPair.uniform(0.5)
    lo = planar.entropy(refl, CavityState(1.0, planar.ENTROPY_DIFFERENCE_MIN_AT * 0.999))
    hi = planar.entropy(refl, CavityState(1.0, planar.ENTROPY_DIFFERENCE_MIN_AT * 1.001))
    assert lo == pytest.approx(hi, rel=2e-2)


def test_entropy_ideal_conductor_goes_like_t_squared():
    refl = ReflectivityPair.uniform(1.0)
    T = 1e-4
    s = planar.entropy(refl, CavityState(1.0, T))
    # S = -d/dT [-zeta(3) T^3/(2 pi)] to leading order
    assert s == pytest.approx(3 * zeta_int(3) * T ** 2 / (2 * PI), rel=1e-3)


# ------------------------------------------------------------------ asymptotes

def test_high_temperature_limit():
    refl = ReflectivityPair.from_products(0.3, 0.8)
    st_ = CavityState(1.0, 5.0)
    exact = planar.free_energy(refl, st_)
    assert planar.free_energy_high_t(refl, st_) == pytest.approx(exact, rel=math.exp(-4 * PI * 5) + 1e-12)
    with pytest.warns(RegimeWarning):
        planar.free_energy_high_t(refl, CavityState(1.0, 0.2))


def test_low_temperature_expansion():
    refl = ReflectivityPair.uniform(0.5)
    st_ = CavityState(1.0, 0.01)
    exact = planar.free_energy(refl, st_) - planar.free_energy_zero_t(refl, 1.0)
    approx = planar.free_energy_low_t(refl, st_) - planar.free_energy_zero_t(refl, 1.0)
    assert approx == pytest.approx(exact, rel=1e-2)
    with pytest.raises(DomainError):
        planar.free_energy_low_t(ReflectivityPair.uniform(1.0), st_)


def test_asymptotic_series_structure():
    refl = ReflectivityPair.uniform(0.3)
    st_ = CavityState(1.0, 0.05)
    s = planar.asymptotic_series(refl, st_, 12)
    powers = [p for p, _ in s.terms]
    assert powers == list(range(0, 26, 2))
    assert s.terms[1][1] == 0.0
    low = planar.free_energy_low_t(refl, st_) - planar.free_energy_zero_t(refl, 1.0)
    assert s.terms[2][1] == pytest.approx(low, rel=1e-12)
    exact = planar.free_energy(refl, st_)
    assert abs(s.value - exact) <= 10 * s.error_estimate + 1e-15 * abs(exact)


def test_asymptotic_coefficient_exact():
    # k = 2: B4/4! * Li0(rho) = -rho/(720 (1-rho))
    c = planar.asymptotic_term_coefficient(2, 0.5)
    assert c == Fraction(-1, 720)


def test_asymptotic_series_diverges():
    s = planar.asymptotic_series(ReflectivityPair.uniform(math.sqrt(0.9)), CavityState(1.0, 0.2), 30)
    assert s.diverging
    assert s.truncation_index < 30


def test_ideal_conductor_expansion():
    st_ = CavityState(1.0, 0.05)
    exact = planar.free_energy(ReflectivityPair.uniform(1.0), st_)
    assert planar.ideal_conductor_expansion(st_) == pytest.approx(exact, rel=1e-13)
    with pytest.warns(RegimeWarning):
        planar.ideal_conductor_expansion(CavityState(1.0, 0.5))


@settings(max_examples=40, deadline=None)
@given(st.floats(min_value=-1.0, max_value=1.0), st.floats(min_value=0.2, max_value=5.0),
       st.floats(min_value=1e-3, max_value=3.0))
def test_dual_representation_property(rho, a, T):
    refl = ReflectivityPair.from_products(rho)
    state = CavityState(a, T)
    m = planar.free_energy_matsubara(refl, state).value
    g = planar.free_energy_geometric(refl, state).value
    assert m == pytest.approx(g, rel=1e-12, abs=1e-300)


@settings(max_examples=40, deadline=None)
@given(st.floats(min_value=0.0, max_value=1.0), st.floats(min_value=0.0, max_value=1.0))
def test_energy_monotone_in_reflectivity(r1, r2):
    # larger |rho| never lowers the attraction at T = 0
    lo, hi = sorted((r1, r2))
    f_lo = planar.free_energy_zero_t(ReflectivityPair.from_products(lo), 1.0)
    f_hi = planar.free_energy_zero_t(ReflectivityPair.from_products(hi), 1.0)
    assert f_hi <= f_lo


# ------------------------------------------------------------------ round-trip pressure, low-T floor

@pytest.mark.parametrize("rho", [0.1, 0.9, 1.0, -0.5, -1.0])
@pytest.mark.parametrize("aT", [1e-3, 0.1, 5.0])
def test_pressure_dual_representation(rho, aT):
    refl = ReflectivityPair.from_products(rho)
    st_ = CavityState(1.3, aT / 1.3)
    g = planar.pressure_geometric(refl, st_)
    assert g.value == pytest.approx(planar.pressure_thermal(refl, st_).value, rel=1e-13)
    assert g.tail_bound <= 1e-14 * abs(g.value)


@pytest.mark.parametrize("aT", [1e-5, 1e-6, 1e-7])
def test_round_trip_sums_hold_precision_at_low_temperature(aT):
    # ideal mirrors: F = -pi^2/720 - zeta(3) T^3/(2 pi) + pi^2 T^4/45 up to exp(-1/aT)
    st_ = CavityState(1.0, aT)
    want = -PI ** 2 / 720 - zeta_int(3) * aT ** 3 / (2 * PI) + PI ** 2 * aT ** 4 / 45
    refl = ReflectivityPair.uniform(1.0)
    assert planar.free_energy_geometric(refl, st_).value == pytest.approx(want, rel=2e-15)
    assert planar.pressure_geometric(refl, st_).value == pytest.approx(-PI ** 2 / 240 - PI ** 2 * aT ** 4 / 45,
                                                                        rel=2e-15)


@pytest.mark.parametrize("rho", [1.0, 0.5, -1.0])
def test_zero_temperature_floor_is_seamless(rho):
    refl = ReflectivityPair.from_products(rho)
    lo = CavityState(1.0, planar.ZERO_T_FLOOR_AT * 0.999)
    hi = CavityState(1.0, planar.ZERO_T_FLOOR_AT * 1.001)
    assert planar.free_energy(refl, lo) == planar.free_energy_zero_t(refl, 1.0)
    assert planar.free_energy(refl, hi) == pytest.approx(planar.free_energy(refl, lo), rel=1e-15)
    assert planar.pressure(refl, hi) == pytest.approx(planar.pressure(refl, lo), rel=1e-15)
    assert planar.pressure(refl, CavityState(1.0, 1e-200)) == planar.pressure_zero_t(refl, 1.0)


def test_unreachable_thermal_sums_raise():
    refl = ReflectivityPair.uniform(1.0)
    with pytest.raises(ConvergenceError):
        planar.free_energy_matsubara(refl, CavityState(1.0, 1e-9))
    with pytest.raises(ConvergenceError):
        planar.free_energy_geometric(refl, CavityState(1.0, 1e-20))
