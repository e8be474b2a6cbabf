import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lifshitz import backreaction as br
from lifshitz import planar
from lifshitz.errors import DegenerateFitError, DomainError, NumericalWarning
from lifshitz.oracle import finite_difference
from lifshitz.planar import CavityState, ReflectivityPair
from lifshitz.polylog import li_real, zeta_int

PI = math.pi


@pytest.mark.parametrize("r", [0.1, 0.4, 0.7, 0.95])
@pytest.mark.parametrize("aT", [0.01, 1.0, 10.0])
def test_force_is_minus_energy_derivative(r, aT):
    refl = ReflectivityPair(r, 0.9 * r, 0.8 * r, r)
    st_ = CavityState(1.0, aT)
    for body in (1, 2):
        for pol in "sp":
            x = refl.coefficient(body, pol)
            fd = -finite_difference(
                lambda v: planar.free_energy_matsubara(refl.with_coefficient(body, pol, v), st_).value,
                x, 1e-4 * x)
            assert br.generalized_force(refl, st_, body, pol) == pytest.approx(fd, rel=1e-6)


def test_equal_bodies_half_total_derivative():
    st_ = CavityState(1.0, 0.5)
    r = 0.6

    def f(v):
        return planar.free_energy_matsubara(ReflectivityPair(v, 0.0, v, 0.0), st_).value

    phi = br.generalized_force(ReflectivityPair(r, 0.0, r, 0.0), st_, 1, "s")
    assert phi == pytest.approx(-0.5 * finite_difference(f, r, 1e-5), rel=1e-6)


def test_zero_temperature_limit():
    r = 0.7
    refl = ReflectivityPair.uniform(r)
    want = li_real(3, r * r).value / (16 * PI ** 2 * r)
    assert br.generalized_force(refl, CavityState(1.0), 1, "s") == pytest.approx(want, rel=1e-14)
    assert br.generalized_force(refl, CavityState(1.0, 1e-3), 1, "s") == pytest.approx(want, rel=1e-3)


def test_high_temperature_limit():
    r, aT = 0.7, 10.0
    refl = ReflectivityPair.uniform(r)
    phi = br.generalized_force(refl, CavityState(1.0, aT), 2, "p")
    assert phi / aT == pytest.approx(li_real(2, r * r).value / (16 * PI * r), rel=math.exp(-4 * PI * aT) + 1e-12)


def test_force_finite_at_zero_reflectivity():
    st_ = CavityState(1.0, 0.3)
    at_zero = br.generalized_force(ReflectivityPair(0.0, 0.0, 0.5, 0.5), st_, 1, "s")
    near = br.generalized_force(ReflectivityPair(1e-9, 0.0, 0.5, 0.5), st_, 1, "s")
    assert at_zero == pytest.approx(near, rel=1e-7)
    at_zero_t0 = br.generalized_force(ReflectivityPair(0.0, 0.0, 0.5, 0.5), CavityState(1.0), 1, "s")
    assert at_zero_t0 == pytest.approx(0.5 / (16 * PI ** 2), rel=1e-15)
    assert br.generalized_force(ReflectivityPair(0.5, 0.5, 0.0, 0.0), st_, 1, "s") == 0.0


def test_force_argument_checks():
    with pytest.raises(DomainError):
        br.generalized_force(ReflectivityPair.uniform(0.5), CavityState(1.0), 3, "s")
    with pytest.raises(DomainError):
        br.generalized_force(ReflectivityPair.uniform(0.5), CavityState(1.0), 1, "x")


@settings(max_examples=40, deadline=None)
@given(st.floats(min_value=0.01, max_value=1.0), st.floats(min_value=0.01, max_value=1.0),
       st.floats(min_value=0.0, max_value=3.0), st.floats(min_value=1e-4, max_value=10.0))
def test_sign_law(r1, r2, aT, chi):
    refl = ReflectivityPair(r1, r1, r2, r2)
    st_ = CavityState(1.0, aT)
    assert br.generalized_force(refl, st_, 1, "s") > 0
    assert br.one_loop_correction(refl, st_, chi) < 0


def test_one_loop_chi_zero_and_validation():
    refl = ReflectivityPair.uniform(0.5)
    assert br.one_loop_correction(refl, CavityState(1.0), 0.0) == 0.0
    with pytest.raises(DomainError):
        br.one_loop_correction(refl, CavityState(1.0), -1.0)


# ------------------------------------------------------------------ flow

def test_flow_chi_zero_converges_immediately():
    refl = ReflectivityPair.uniform(0.5)
    f = br.reflectivity_flow(refl, CavityState(1.0, 0.1), 0.0)
    assert f.converged and f.iteration == 1 and f.r_current == refl and not f.capped


def test_flow_large_chi_caps_at_ideal():
    st_ = CavityState(1.0, 0.1)
    f = br.reflectivity_flow(ReflectivityPair.uniform(0.5), st_, 100.0)
    assert f.converged and f.capped
    assert f.r_current == ReflectivityPair.uniform(1.0)
    assert f.history[-1][1] == planar.free_energy(ReflectivityPair.uniform(1.0), st_)
    assert f.history[-1][1] == pytest.approx(planar.ideal_conductor_expansion(st_), rel=1e-12)


def test_flow_moderate_chi_monotone():
    st_ = CavityState(1.0, 0.2)
    refl = ReflectivityPair(0.4, 0.5, 0.6, 0.3)
    phi = br.generalized_force(refl, st_, 1, "s")
    chi = 0.01 * 0.4 / phi
    f = br.reflectivity_flow(refl, st_, chi, tol=1e-10, max_iter=20_000)
    assert f.converged
    prev_r, prev_F = f.history[0]
    for r, F in f.history[1:]:
        for body in (1, 2):
            for pol in "sp":
                assert prev_r.coefficient(body, pol) <= r.coefficient(body, pol) <= 1.0
        assert F <= prev_F
        prev_r, prev_F = r, F
    assert f.history[-1][1] <= f.history[0][1]


def test_flow_reports_nonconvergence():
    with pytest.warns(NumericalWarning):
        f = br.reflectivity_flow(ReflectivityPair.uniform(0.5), CavityState(2.0), 0.01, max_iter=3)
    assert not f.converged and f.iteration == 3 and len(f.history) == 4


def test_flow_argument_checks():
    with pytest.raises(DomainError):
        br.reflectivity_flow(ReflectivityPair.uniform(0.5), CavityState(1.0), math.nan)
    with pytest.raises(DomainError):
        br.reflectivity_flow(ReflectivityPair.uniform(0.5), CavityState(1.0), 1.0, max_iter=0)


# ------------------------------------------------------------------ scaling

def test_zero_temperature_exponents():
    refl = ReflectivityPair.uniform(0.8)
    st_ = CavityState(1.0)
    grid = [1, 2, 4, 8, 16]
    assert br.free_energy_correction_scaling(refl, st_, 0.1, grid).exponent == pytest.approx(-6, abs=1e-6)
    fit = br.pressure_correction_scaling(refl, st_, 0.1, grid)
    assert fit.exponent == pytest.approx(-7, abs=1e-6)
    assert fit.regime == "low" and fit.residual < 1e-8
    assert all(e == pytest.approx(-7, abs=1e-5) for e in fit.local_exponents)


def test_high_temperature_exponents():
    refl = ReflectivityPair.uniform(0.8)
    st_ = CavityState(1.0, 3.0)
    grid = [1, 2, 4, 8, 16]
    assert br.free_energy_correction_scaling(refl, st_, 0.1, grid).exponent == pytest.approx(-4, abs=1e-6)
    assert br.pressure_correction_scaling(refl, st_, 0.1, grid).exponent == pytest.approx(-5, abs=1e-6)
    t_fit = br.free_energy_correction_scaling(refl, CavityState(1.0, 3.0), 0.1, [3, 10, 30], "T")
    assert t_fit.exponent == pytest.approx(2, abs=1e-6) and t_fit.regime == "high"


def test_scaling_grid_checks():
    refl = ReflectivityPair.uniform(0.8)
    with pytest.raises(DomainError):
        br.pressure_correction_scaling(refl, CavityState(1.0, 0.1), 0.1, [0.1, 1, 10])
    with pytest.raises(DomainError):
        br.pressure_correction_scaling(refl, CavityState(1.0), 0.1, [1, 2, 4])
    with pytest.raises(DomainError):
        br.free_energy_correction_scaling(refl, CavityState(1.0), 0.1, [1, 10], "r")


def test_scaling_chi_zero_is_degenerate():
    with pytest.raises(DegenerateFitError):
        br.pressure_correction_scaling(ReflectivityPair.uniform(0.8), CavityState(1.0), 0.0, [1, 10])


@pytest.mark.parametrize("aT", [1e-7, 1e-12, 1e-163])
def test_force_at_vanishing_temperature(aT):
    # ideal mirrors: Phi = [zeta(3) + (2 pi^2/3) (aT)^2] / (16 pi^2) to leading order
    refl = ReflectivityPair.uniform(1.0)
    want = (zeta_int(3) + 2 * PI ** 2 / 3 * aT ** 2) / (16 * PI ** 2)
    assert br.generalized_force(refl, CavityState(1.0, aT), 1, "s") == pytest.approx(want, rel=2e-15)
