"""``lifshitz`` command-line interface.

Exit codes: 0 success, 2 usage error, 3 domain error, 4 verification failure.
"""
from __future__ import annotations

import argparse
import math
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import __version__, _kernels, backreaction, planar, spectrum, verify
from .errors import ConvergenceError, DegenerateFitError, DomainError, RegimeWarning
from .output import UNITS_NOTE, Table, render
from .planar import CavityState, ReflectivityPair
from .polylog import li_real, zeta_int

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_VERIFY = 0, 2, 3, 4


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------

SWEEP_VARIABLES = ("reflectivity", "temperature", "separation", "xi")


@dataclass(frozen=True)
class SweepSpec:
    """One swept variable: ``count`` points from ``start`` to ``stop``, linear or log spaced."""

    variable: str
    start: float
    stop: float
    count: int
    spacing: str = "linear"

    def __post_init__(self):
        if self.variable not in SWEEP_VARIABLES:
            raise UsageError(f"sweep variable must be one of {SWEEP_VARIABLES}, got {self.variable!r}")
        if self.count < 2:
            raise UsageError("sweep needs count >= 2")
        if not self.start < self.stop:
            raise UsageError("sweep needs start < stop")
        if self.spacing not in ("linear", "log"):
            raise UsageError(f"spacing must be 'linear' or 'log', got {self.spacing!r}")
        if self.spacing == "log" and self.start <= 0:
            raise UsageError("log spacing needs start > 0")

    @classmethod
    def parse(cls, text: str) -> "SweepSpec":
        """``VARIABLE:START:STOP:COUNT[:SPACING]``"""
        parts = text.split(":")
        if len(parts) not in (4, 5):
            raise UsageError(f"bad sweep {text!r}; expected VARIABLE:START:STOP:COUNT[:SPACING]")
        try:
            return cls(parts[0], float(parts[1]), float(parts[2]), int(parts[3]),
                       *(parts[4:] or ["linear"]))
        except ValueError as exc:
            raise UsageError(f"bad sweep {text!r}: {exc}") from None

    def values(self) -> np.ndarray:
        if self.spacing == "log":
            v = np.geomspace(self.start, self.stop, self.count)
        else:
            v = np.linspace(self.start, self.stop, self.count)
        v[0], v[-1] = self.start, self.stop
        return v


def _pmap(fn, items, threads):
    # executor.map keeps input order, so output bytes do not depend on --threads
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _float_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _tag(r):
    return format(r, "g")


def _table(args, command, columns):
    t = Table(list(columns))
    t.add_meta("lifshitz", __version__)
    t.add_meta("command", command)
    t.add_meta("units", UNITS_NOTE)
    t.add_meta("tol", "default" if args.tol is None else args.tol)
    t.add_meta("backend", _kernels.BACKEND)
    return t


def _thermal_tol(args):
    return planar.THERMAL_TOL if args.tol is None else args.tol


def _reflectivities(args):
    base = args.r if args.r is not None else 1.0
    return ReflectivityPair(
        base if args.rs1 is None else args.rs1,
        base if args.rp1 is None else args.rp1,
        base if args.rs2 is None else args.rs2,
        base if args.rp2 is None else args.rp2,
    )


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

POINT_COLUMNS = ("a", "T", "r_s1", "r_p1", "r_s2", "r_p2", "F", "P", "S", "F_ratio", "P_ratio")


def _point_row(refl, state, tol):
    a, T = state.a, state.T
    zero_t = state.aT < planar.ZERO_T_FLOOR_AT
    if zero_t:
        F = planar.free_energy_zero_t(refl, a)
        P = planar.pressure_zero_t(refl, a)
    else:
        F = planar.free_energy_geometric(refl, state, tol).value
        P = planar.pressure_geometric(refl, state, tol).value
    S = planar.entropy(refl, state) if T > 0.0 else 0.0
    if zero_t:
        # both ratios are sum Li4 / (2 zeta(4)); taking it directly keeps r = 1 at exactly 1
        ratio = math.fsum(li_real(4, rho, planar.SERIES_TOL).value for rho in refl.products) / (2.0 * zeta_int(4))
        f_ratio = p_ratio = ratio
    else:
        f_ratio, p_ratio = F / planar.ideal_free_energy(a), P / planar.ideal_pressure(a)
    return [a, T, refl.r_s1, refl.r_p1, refl.r_s2, refl.r_p2, F, P, S, f_ratio, p_ratio]


def cmd_point(args):
    refl = _reflectivities(args)
    state = CavityState(args.a, args.temp)
    t = _table(args, "point", POINT_COLUMNS)
    tol = _thermal_tol(args)
    if args.sweep is None:
        t.rows.append(_point_row(refl, state, tol))
        return t
    sweep = SweepSpec.parse(args.sweep)
    t.add_meta("sweep", args.sweep)
    if sweep.variable == "xi":
        raise UsageError("point cannot sweep xi; use fig2")

    def row(v):
        if sweep.variable == "reflectivity":
            return _point_row(ReflectivityPair.uniform(v), state, tol)
        if sweep.variable == "temperature":
            return _point_row(refl, state.with_T(v), tol)
        return _point_row(refl, state.with_a(v), tol)

    t.rows.extend(_pmap(row, sweep.values(), args.threads))
    return t


def cmd_fig1(args):
    if args.points < 2:
        raise UsageError("--points must be >= 2")
    t = _table(args, "fig1", ("r2", "r", "P_ratio", "P"))
    t.add_meta("a", args.a)
    z4 = zeta_int(4)
    r2 = np.linspace(0.0, 1.0, args.points)
    r2[0], r2[-1] = 0.0, 1.0

    def row(x):
        x = float(x)
        refl = ReflectivityPair.uniform(math.sqrt(x))
        return [x, math.sqrt(x), li_real(4, x, planar.SERIES_TOL).value / z4,
                planar.pressure_zero_t(refl, args.a)]

    t.rows.extend(_pmap(row, r2, args.threads))
    return t


def cmd_fig2(args):
    if args.points < 2:
        raise UsageError("--points must be >= 2")
    rs = args.r_list
    a = args.a
    cols = ["xi"]
    for r in rs:
        cols += [f"density_r{_tag(r)}", f"a3_density_r{_tag(r)}"]
    has_ideal = any(abs(r) == 1.0 for r in rs)
    if has_ideal:
        cols.append("jump_r1")
    t = _table(args, "fig2", cols)
    t.add_meta("a", a)
    t.add_meta("density", "per polarization, per unit omega; xi = 2 omega a")
    if has_ideal:
        t.add_meta("jump_r1", "P_omega(2 pi n +) - P_omega(2 pi n -) on the first row at or past xi = 2 pi n, else 0")
    xi = np.linspace(0.0, args.xi_max, args.points)
    xi[-1] = args.xi_max

    def curve(r):
        dens, _ = spectrum.spectral_density_array(ReflectivityPair.uniform(r), a, xi, jump="midpoint")
        return dens

    curves = _pmap(curve, rs, args.threads)
    jumps = np.zeros(xi.size)
    if has_ideal:
        n = 1
        while TWO_PI * n <= xi[-1]:
            i = int(np.searchsorted(xi, TWO_PI * n, side="left"))
            jumps[i] = spectrum.ideal_jump(a, n)
            n += 1
    for i, x in enumerate(xi):
        row = [float(x)]
        for dens in curves:
            row += [float(dens[i]), float(dens[i]) * a ** 3]
        if has_ideal:
            row.append(float(jumps[i]))
        t.rows.append(row)
    return t


TWO_PI = 2.0 * math.pi


def cmd_fig3(args):
    if args.points < 2:
        raise UsageError("--points must be >= 2")
    refl = ReflectivityPair.uniform(args.r)
    a = args.a
    tol = _thermal_tol(args)
    sweep = SweepSpec("temperature", args.at_min, args.at_max, args.points, "log")
    t = _table(args, "fig3", ("aT", "T", "F", "F_high", "F_low", "F0",
                              "a3F", "a3F_high", "a3F_low", "high_rel_err", "low_rel_err"))
    t.add_meta("a", a)
    t.add_meta("r", args.r)
    F0 = planar.free_energy_zero_t(refl, a)

    def row(aT):
        aT = float(aT)
        state = CavityState(a, aT / a)
        F = planar.free_energy_geometric(refl, state, tol).value
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RegimeWarning)
            Fh = planar.free_energy_high_t(refl, state)
        Fl = planar.free_energy_low_t(refl, state)
        return [aT, state.T, F, Fh, Fl, F0, F * a ** 3, Fh * a ** 3, Fl * a ** 3,
                abs(Fh / F - 1.0), abs(Fl / F - 1.0)]

    t.rows.extend(_pmap(row, sweep.values(), args.threads))
    t.add_meta("crossover_aT", _crossover(t))
    return t


def _crossover(t):
    # aT where the two asymptotes are equally good, log-interpolated
    at = t.column("aT")
    d = [math.log(h) - math.log(l) if h > 0 and l > 0 else math.nan
         for h, l in zip(t.column("high_rel_err"), t.column("low_rel_err"))]
    for i in range(len(d) - 1):
        if d[i] > 0 >= d[i + 1]:
            w = d[i] / (d[i] - d[i + 1])
            return math.exp((1 - w) * math.log(at[i]) + w * math.log(at[i + 1]))
    return math.nan


def _local_slopes(x, y):
    y = np.abs(np.asarray(y, dtype=float))
    if len(x) < 2 or np.any(y == 0.0) or not np.all(np.isfinite(y)):
        return [math.nan] * len(x)
    return [float(v) for v in np.gradient(np.log(y), np.log(np.asarray(x)))]


def cmd_backreaction(args):
    chi = args.chi
    refl = _reflectivities(args)
    grid = sorted(args.a_grid)
    T = args.temp
    t = _table(args, "backreaction", ("a", "T", "aT", "Phi_s1", "Phi_p1", "dF", "dP",
                                      "dF_local_exponent", "dP_local_exponent",
                                      "flow_r_s1", "flow_r_p1", "flow_iterations", "flow_converged",
                                      "flow_capped"))
    t.add_meta("chi", chi)
    t.add_meta("r", f"{refl.r_s1:g},{refl.r_p1:g},{refl.r_s2:g},{refl.r_p2:g}")

    def row(a):
        state = CavityState(a, T)
        phis = backreaction.generalized_force(refl, state, 1, "s"), backreaction.generalized_force(refl, state, 1, "p")
        dF = backreaction.one_loop_correction(refl, state, chi)
        dP = backreaction.pressure_correction(refl, state, chi)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            flow = backreaction.reflectivity_flow(refl, state, chi, tol=args.flow_tol, max_iter=args.max_iter)
        return [a, T, a * T, phis[0], phis[1], dF, dP, flow.r_current.r_s1, flow.r_current.r_p1,
                flow.iteration, flow.converged, flow.capped]

    data = _pmap(row, grid, args.threads)
    slope_f = _local_slopes(grid, [d[5] for d in data])
    slope_p = _local_slopes(grid, [d[6] for d in data])
    for d, sf, sp in zip(data, slope_f, slope_p):
        t.rows.append(d[:7] + [sf, sp] + d[7:])

    state = CavityState(grid[0], T)
    for key, fit in (("dF_exponent", lambda: backreaction.free_energy_correction_scaling(refl, state, chi, grid)),
                     ("dP_exponent", lambda: backreaction.pressure_correction_scaling(refl, state, chi, grid))):
        t.add_meta(key, _fit_or_nan(fit))
    if args.t_grid:
        st = CavityState(grid[0], args.t_grid[0])
        t.add_meta("dF_T_exponent", _fit_or_nan(
            lambda: backreaction.free_energy_correction_scaling(refl, st, chi, args.t_grid, "T")))
    return t


def _fit_or_nan(fn):
    try:
        return fn().exponent
    except (DegenerateFitError, DomainError) as exc:
        return f"nan ({exc})"


def cmd_verify(args):
    names = args.only or list(verify.FAMILIES)
    results = _pmap(lambda n: verify.run_family(n, args.tol), names, args.threads)
    t = _table(args, "verify", ("family", "checks", "max_rel_dev", "tolerance", "status", "worst_case"))
    for r in results:
        t.rows.append([r.name, r.checks, r.max_rel_dev, r.tolerance, "PASS" if r.passed else "FAIL",
                       r.worst_case.replace(",", ";")])
    t.add_meta("all_passed", int(all(r.passed for r in results)))
    return t


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None,
                        help="series truncation tolerance; for verify, overrides every pass threshold")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", default=None, help="output file (default stdout)")
    common.add_argument("--threads", type=_positive_int, default=1)

    refl = argparse.ArgumentParser(add_help=False)
    refl.add_argument("--r", type=float, default=None, help="shorthand for all four coefficients")
    for name in ("rs1", "rp1", "rs2", "rp2"):
        refl.add_argument(f"--{name}", type=float, default=None)

    p = _Parser(prog="lifshitz", description="Casimir-Lifshitz plates with constant reflection coefficients")
    p.add_argument("--version", action="version", version=f"lifshitz {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("point", parents=[common, refl], help="F, P, S at one point or along a sweep")
    sp.add_argument("--a", type=float, default=1.0)
    sp.add_argument("--temp", type=float, default=0.0)
    sp.add_argument("--sweep", default=None, metavar="VAR:START:STOP:COUNT[:SPACING]",
                    help="VAR in reflectivity, temperature, separation; SPACING linear or log")
    sp.set_defaults(func=cmd_point)

    sp = sub.add_parser("fig1", parents=[common], help="zero-T pressure ratio against r^2")
    sp.add_argument("--points", type=int, default=101)
    sp.add_argument("--a", type=float, default=1.0)
    sp.set_defaults(func=cmd_fig1)

    sp = sub.add_parser("fig2", parents=[common], help="real-frequency spectrum")
    sp.add_argument("--points", type=int, default=2000)
    sp.add_argument("--xi-max", type=float, default=8.0 * math.pi)
    sp.add_argument("--a", type=float, default=1.0)
    sp.add_argument("--r-list", type=_float_list, default=[0.5, 0.7, 0.9, 1.0])
    sp.set_defaults(func=cmd_fig2)

    sp = sub.add_parser("fig3", parents=[common], help="free energy against aT with both asymptotes")
    sp.add_argument("--points", type=int, default=61)
    sp.add_argument("--at-min", type=float, default=1e-2)
    sp.add_argument("--at-max", type=float, default=10.0)
    sp.add_argument("--a", type=float, default=1.0)
    sp.add_argument("--r", type=float, default=0.5)
    sp.set_defaults(func=cmd_fig3)

    sp = sub.add_parser("backreaction", parents=[common, refl], help="generalized force, one-loop shift, flow")
    sp.add_argument("--chi", type=float, default=0.01)
    sp.add_argument("--a-grid", type=_float_list, default=[1.0, 2.0, 4.0, 8.0, 16.0])
    sp.add_argument("--temp", type=float, default=0.0)
    sp.add_argument("--t-grid", type=_float_list, default=None,
                    help="temperatures for the Delta F temperature exponent, at the first a")
    sp.add_argument("--max-iter", type=_positive_int, default=1000, help="flow iteration cap")
    sp.add_argument("--flow-tol", type=float, default=1e-12, help="flow stops once no coefficient moves by more")
    sp.set_defaults(func=cmd_backreaction, r=0.5)

    sp = sub.add_parser("verify", parents=[common], help="run the self-checks")
    sp.add_argument("--only", action="append", choices=list(verify.FAMILIES), default=None)
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        table = args.func(args)
    except UsageError as exc:
        print(f"lifshitz: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"lifshitz: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ConvergenceError as exc:
        # inputs a series or quadrature cannot resolve count as outside the domain
        print(f"lifshitz: no convergence: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    text = render(table, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.command == "verify":
        failed = [row[0] for row in table.rows if row[4] != "PASS"]
        if failed:
            print(f"lifshitz: verification failed: {', '.join(failed)}", file=sys.stderr)
            return EXIT_VERIFY
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
