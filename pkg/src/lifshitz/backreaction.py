"""Back-reaction of the Casimir free energy on the mirrors' reflectivities.

Each reflection coefficient feels a generalized force ``Phi = -dF/dr``.  With a
constant susceptibility ``chi`` (a plain non-negative float), the response
``delta r = chi * Phi`` can be iterated to a fixed point, and to lowest order
it lowers the free energy by ``chi * Phi^2`` per coefficient.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateFitError, DomainError, NumericalWarning
from .planar import (THERMAL_TOL, ZERO_T_FLOOR_AT, CavityState, ReflectivityPair, _round_trip,
                     free_energy)
from .polylog import li_reduced

PI = math.pi
POLARIZATIONS = ("s", "p")
BODIES = (1, 2)
LOW_T_MAX_AT = 0.05
HIGH_T_MIN_AT = 2.0
DIFF_STEP = 1e-5

__all__ = [
    "FlowState",
    "ScalingFit",
    "generalized_force",
    "one_loop_correction",
    "reflectivity_flow",
    "pressure_correction",
    "pressure_correction_scaling",
    "free_energy_correction_scaling",
]


def _check_chi(chi):
    chi = float(chi)
    if not (math.isfinite(chi) and chi >= 0):
        raise DomainError(f"susceptibility must be a finite non-negative number, got chi = {chi!r}")
    return chi


def _reduced_sum(rho, state):
    # sum_k rho^(k-1) W(k x1)/k^2 = Li2(rho)/rho + sum_k rho^(k-1) (W(k x1) - 1)/k^2
    li2r = li_reduced(2, rho)
    x1 = 2.0 * PI * state.aT
    scale = max(abs(li2r), abs(li_reduced(3, rho)) / x1)
    s, _, _ = _round_trip(rho, state, 2, 0, scale, THERMAL_TOL)
    return li2r + s


def generalized_force(refl: ReflectivityPair, state: CavityState, body_index: int,
                      polarization: str) -> float:
    """``Phi = -dF/dr`` for the coefficient of body ``body_index`` and ``polarization``.

    Written without the removable ``1/r`` so it is finite at ``r = 0``:
    ``Phi = T/(16 pi a^2) r_other sum_k rho^(k-1) W(2 pi k T a)/k^2``, the
    derivative of the round-trip form.  At ``T = 0`` (and below
    ``ZERO_T_FLOOR_AT``) this is ``r_other Li3(rho)/rho / (16 pi^2 a^3)``.
    """
    if body_index not in BODIES or polarization not in POLARIZATIONS:
        raise DomainError(f"need body_index in (1, 2) and polarization in ('s', 'p'), "
                          f"got {body_index!r}, {polarization!r}")
    other = refl.coefficient(3 - body_index, polarization)
    if other == 0.0:
        return 0.0
    rho = refl.rho_s if polarization == "s" else refl.rho_p
    a, T = state.a, state.T
    if state.aT < ZERO_T_FLOOR_AT:
        return other * li_reduced(3, rho) / (16.0 * PI ** 2 * a ** 3)
    return T / (16.0 * PI * a * a) * other * _reduced_sum(rho, state)


def _forces(refl, state):
    return {(i, pol): generalized_force(refl, state, i, pol) for i in BODIES for pol in POLARIZATIONS}


def one_loop_correction(refl: ReflectivityPair, state: CavityState, chi: float) -> float:
    """Lowest-order free-energy shift ``-chi sum_sigma sum_i Phi^2`` (never positive)."""
    chi = _check_chi(chi)
    if chi == 0.0:
        return 0.0
    return -chi * math.fsum(phi * phi for phi in _forces(refl, state).values())


# ---------------------------------------------------------------------------
# flow
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FlowState:
    """Where the reflectivity iteration stopped.

    ``history`` holds ``(ReflectivityPair, free energy)`` for the initial point
    and after every iteration.
    """

    r_current: ReflectivityPair
    iteration: int
    converged: bool
    capped: bool
    history: tuple = ()


def reflectivity_flow(initial: ReflectivityPair, state: CavityState, chi: float,
                      tol: float = 1e-12, max_iter: int = 10_000) -> FlowState:
    """Iterate ``r <- clip(r + chi Phi(r), -1, 1)`` for all four coefficients at once.

    Stops when the largest applied change is below ``tol``.  If ``max_iter``
    iterations pass first, warns and returns the last state with
    ``converged=False``.
    """
    chi = _check_chi(chi)
    if not tol > 0 or max_iter < 1:
        raise DomainError("need tol > 0 and max_iter >= 1")
    refl = initial
    history = [(refl, free_energy(refl, state))]
    capped = False
    for it in range(1, max_iter + 1):
        forces = _forces(refl, state)
        step = 0.0
        new = refl
        for (i, pol), phi in forces.items():
            old = refl.coefficient(i, pol)
            raw = old + chi * phi
            val = min(1.0, max(-1.0, raw))
            if val != raw:
                capped = True
            step = max(step, abs(val - old))
            new = new.with_coefficient(i, pol, val)
        refl = new
        history.append((refl, free_energy(refl, state)))
        if step < tol:
            return FlowState(refl, it, True, capped, tuple(history))
    warnings.warn(f"reflectivity flow did not converge in {max_iter} iterations",
                  NumericalWarning, stacklevel=2)
    return FlowState(refl, max_iter, False, capped, tuple(history))


# ---------------------------------------------------------------------------
# scaling laws
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScalingFit:
    """Least-squares log-log slope of a correction against ``variable``.

    ``local_exponents`` are slopes between neighbouring grid points;
    ``residual`` is the RMS deviation of ``log|y|`` from the fitted line.
    """

    exponent: float
    residual: float
    variable: str
    grid: tuple
    values: tuple
    local_exponents: tuple
    regime: str


def _regime(aT):
    if aT <= LOW_T_MAX_AT:
        return "low"
    if aT >= HIGH_T_MIN_AT:
        return "high"
    return "crossover"


def _check_grid(grid, a_values, T):
    grid = np.asarray(sorted(float(g) for g in grid))
    if grid.size < 2 or np.any(grid <= 0):
        raise DomainError("scaling grid needs at least two positive points")
    if grid[-1] / grid[0] < 10.0 * (1.0 - 1e-12):
        raise DomainError(f"scaling grid must span at least one decade, got {grid[0]:g}..{grid[-1]:g}")
    regimes = {_regime(a * t) for a, t in zip(a_values(grid), T(grid))}
    if len(regimes) != 1 or "crossover" in regimes:
        raise DomainError(f"scaling grid must lie in a single regime (aT <= {LOW_T_MAX_AT} "
                          f"or aT >= {HIGH_T_MIN_AT}); got {sorted(regimes)}")
    return grid, regimes.pop()


def _fit(variable, grid, values, regime):
    values = np.asarray(values, dtype=float)
    if np.any(values == 0.0) or not np.all(np.isfinite(values)):
        raise DegenerateFitError("the correction vanishes on the grid; nothing to fit (chi = 0?)")
    x, y = np.log(grid), np.log(np.abs(values))
    slope, icept = np.polyfit(x, y, 1)
    resid = float(np.sqrt(np.mean((y - (slope * x + icept)) ** 2)))
    local = tuple(float(v) for v in np.diff(y) / np.diff(x))
    return ScalingFit(float(slope), resid, variable, tuple(grid), tuple(float(v) for v in values),
                      local, regime)


def free_energy_correction_scaling(refl: ReflectivityPair, state: CavityState, chi: float,
                                   grid, variable: str = "a") -> ScalingFit:
    """Fit ``|Delta F| ~ variable^exponent`` over ``grid``; ``variable`` is ``"a"`` or ``"T"``.

    The other variable is held at its value in ``state``.
    """
    chi = _check_chi(chi)
    if variable == "a":
        grid, regime = _check_grid(grid, lambda g: g, lambda g: [state.T] * len(g))
        states = [state.with_a(g) for g in grid]
    elif variable == "T":
        grid, regime = _check_grid(grid, lambda g: [state.a] * len(g), lambda g: g)
        states = [state.with_T(g) for g in grid]
    else:
        raise DomainError(f"variable must be 'a' or 'T', got {variable!r}")
    values = [one_loop_correction(refl, s, chi) for s in states]
    return _fit(variable, grid, values, regime)


def pressure_correction(refl: ReflectivityPair, state: CavityState, chi: float) -> float:
    """``Delta P = -d(Delta F)/da`` by central difference with step ``a * 1e-5``."""
    h = state.a * DIFF_STEP
    up = one_loop_correction(refl, state.with_a(state.a + h), chi)
    down = one_loop_correction(refl, state.with_a(state.a - h), chi)
    return -(up - down) / (2.0 * h)


def pressure_correction_scaling(refl: ReflectivityPair, state: CavityState, chi: float,
                                a_grid) -> ScalingFit:
    """Fit ``|Delta P| ~ a^exponent`` over ``a_grid`` at the temperature of ``state``.

    The grid must span a decade and sit entirely in one regime, either
    ``aT <= 0.05`` (or ``T = 0``) or ``aT >= 2``.  Raises
    :class:`DegenerateFitError` when the correction vanishes, e.g. ``chi = 0``.
    """
    chi = _check_chi(chi)
    grid, regime = _check_grid(a_grid, lambda g: g, lambda g: [state.T] * len(g))
    values = [pressure_correction(refl, state.with_a(a), chi) for a in grid]
    return _fit("a", grid, values, regime)
