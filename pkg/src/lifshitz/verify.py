"""Self-verification: every closed form against an independent computation.

Each family returns the largest relative deviation it saw; a family passes
when that stays within its tolerance (or a caller-supplied override).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import oracle, planar, spectrum
from .planar import CavityState, ReflectivityPair

ORACLE_RHOS = (0.1, 0.25, 0.5, 0.81, 0.99)
ORACLE_SEPARATIONS = (0.5, 1.0, 2.0)
THERMAL_RHOS = (0.1, 0.5, 0.9)
THERMAL_AT = (0.01, 0.1, 1.0, 5.0)


@dataclass(frozen=True)
class FamilyResult:
    name: str
    checks: int
    max_rel_dev: float
    tolerance: float
    worst_case: str

    @property
    def passed(self) -> bool:
        return self.max_rel_dev <= self.tolerance


def _rel(x, ref):
    if ref == 0.0:
        return abs(x)
    return abs(x / ref - 1.0)


def _closed_form_vs_quadrature():
    out = []
    for rho, a in itertools.product(ORACLE_RHOS, ORACLE_SEPARATIONS):
        refl = ReflectivityPair.from_products(rho)
        p = oracle.pressure_zero_t_quadrature(refl, a).value
        f = oracle.free_energy_zero_t_quadrature(refl, a).value
        out.append((f"P rho={rho:g} a={a:g}", _rel(planar.pressure_zero_t(refl, a), p)))
        out.append((f"F rho={rho:g} a={a:g}", _rel(planar.free_energy_zero_t(refl, a), f)))
    return out


def _dual_representation():
    out = []
    for rho, aT in itertools.product(THERMAL_RHOS, THERMAL_AT):
        refl = ReflectivityPair.from_products(rho)
        st = CavityState(1.0, aT)
        m = planar.free_energy_matsubara(refl, st).value
        g = planar.free_energy_geometric(refl, st).value
        out.append((f"rho={rho:g} aT={aT:g}", _rel(m, g)))
    return out


def _matsubara_quadrature():
    out = []
    for rho, aT in itertools.product(THERMAL_RHOS, THERMAL_AT):
        refl = ReflectivityPair.from_products(rho)
        st = CavityState(1.0, aT)
        q = oracle.free_energy_matsubara_quadrature(refl, st).value
        out.append((f"rho={rho:g} aT={aT:g}", _rel(planar.free_energy_geometric(refl, st).value, q)))
    return out


def _thermodynamic():
    out = []
    for rho, aT in itertools.product(THERMAL_RHOS + (1.0,), THERMAL_AT):
        refl = ReflectivityPair.from_products(rho)
        a, T = 1.0, aT

        def f_of_a(x):
            return planar.free_energy_geometric(refl, CavityState(x, T)).value

        fd = -oracle.finite_difference(f_of_a, a, 1e-4)
        p = planar.pressure_thermal(refl, CavityState(a, T)).value
        out.append((f"P=-dF/da rho={rho:g} aT={aT:g}", _rel(p, fd)))
        s = planar.entropy(refl, CavityState(a, T))
        out.append((f"S>=0 rho={rho:g} aT={aT:g}", 0.0 if s >= 0 else float("inf")))
    return out


def _spectrum_integral():
    out = []
    for rho in (0.5, 0.9):
        refl = ReflectivityPair.from_products(rho)
        res = spectrum.integrate_spectrum(refl, 1.0, (0.2, 0.1, 0.05, 0.025))
        out.append((f"rho={rho:g}", _rel(res.value, planar.pressure_zero_t(refl, 1.0))))
    return out


# name -> (runner, default tolerance)
FAMILIES = {
    "closed-form-vs-quadrature": (_closed_form_vs_quadrature, 1e-8),
    "dual-representation": (_dual_representation, 1e-10),
    "matsubara-quadrature": (_matsubara_quadrature, 1e-8),
    "thermodynamic": (_thermodynamic, 1e-6),
    "spectrum-integral": (_spectrum_integral, 1e-4),
}


def run_family(name: str, tol: float | None = None) -> FamilyResult:
    runner, default_tol = FAMILIES[name]
    results = runner()
    label, dev = max(results, key=lambda item: item[1])
    return FamilyResult(name, len(results), dev, default_tol if tol is None else tol, label)
