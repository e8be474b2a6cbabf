"""Hot inner loops, in two interchangeable flavours.

Every kernel exists as ``<name>_nb`` (numba ``@njit``) and ``<name>_np``
(pure numpy / Python).  The public name ``<name>`` is bound to one of them at
import time.  Set ``LIFSHITZ_NO_NUMBA=1`` in the environment to force the
numpy path; it is also used automatically when numba cannot be imported.

The kernels know nothing about physics.  They sum series whose coefficients
and cutoffs are decided here from rigorous tail bounds, so that both flavours
use the same number of terms for the same inputs.
"""
import cmath
import math
import os
import types

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and os.environ.get("LIFSHITZ_NO_NUMBA", "").strip() in ("", "0")
BACKEND = "numba" if USE_NUMBA else "numpy"

TWO_PI = 2.0 * math.pi

# Hard caps on the polylog series; a request needing more terms reports a
# non-zero bound instead.  The thermal sums return nan when their cap is hit.
KMAX_SERIES = 50_000_000
KMAX_LOGSERIES = 100


def _jit(fn, **deps):
    """Compile ``fn``; ``deps`` rebinds helpers it calls to their compiled twins.

    The plain function is left untouched so the numpy path never enters numba.
    """
    if not HAVE_NUMBA:
        return fn
    if deps:
        scope = dict(fn.__globals__)
        scope.update(deps)
        fn = types.FunctionType(fn.__code__, scope, fn.__name__, fn.__defaults__, fn.__closure__)
    return numba.njit(cache=True, nogil=True)(fn)


# ---------------------------------------------------------------------------
# tail bounds (shared scalar helpers, jitted so the numba kernels can call them)
# ---------------------------------------------------------------------------

def _geo_moments(q, n):
    """Return sum_{m>n} q^m, sum_{m>n} m q^m, sum_{m>n} m^2 q^m for 0 <= q < 1."""
    qn = q ** (n + 1)
    om = 1.0 - q
    a0 = qn / om
    a1 = qn * ((n + 1) * om + q) / (om * om)
    n1 = n + 1.0
    a2 = qn * (n1 * n1 * om * om + 2.0 * n1 * q * om + q * (1.0 + q)) / (om * om * om)
    return a0, a1, a2


_geo_moments_j = _jit(_geo_moments)


def _series_cutoff(nu, ax, tol, kmax):
    """Smallest K with |x|^K / ((K+1)^nu (1-|x|)) <= tol (tail of the reduced series)."""
    if ax == 0.0:
        return 1
    lax = math.log(ax)
    target = math.log(tol * (1.0 - ax))
    # log of the bound is strictly decreasing in K: exponential search, then bisect
    if lax - nu * math.log(2.0) <= target:
        return 1
    lo = 1
    hi = 2
    while hi * lax - nu * math.log(hi + 1.0) > target:
        lo = hi
        hi *= 2
        if hi >= kmax:
            return kmax
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if mid * lax - nu * math.log(mid + 1.0) <= target:
            hi = mid
        else:
            lo = mid
    return hi


_series_cutoff_j = _jit(_series_cutoff)


def _matsubara_tails(rho, c, m):
    """Bounds on sum_{n>m} of the first three and of the last two Matsubara summands."""
    q = math.exp(-c)
    arho = abs(rho)
    a0, a1, a2 = _geo_moments(q, m)
    den = 1.0 - arho * q ** (m + 1)
    return arho * (a0 + c * a1 + c * c * a2) / den, (a0 + c * a1) / den


_matsubara_tails_j = _jit(_matsubara_tails, _geo_moments=_geo_moments_j)


def _matsubara_cutoff(rho, c, tol, scale_a, scale_b, min_terms, max_terms):
    """Last Matsubara index M such that the tail m > M is below tol*scale.

    Both bounds decrease with M, so an exponential search followed by bisection
    finds the smallest admissible M; ``max_terms`` is returned if none is.
    """
    lo = min_terms - 1
    ta, tb = _matsubara_tails(rho, c, lo)
    if ta <= tol * scale_a and tb <= tol * scale_b:
        return lo, ta, tb
    hi = lo + 1
    while True:
        if hi >= max_terms:
            hi = max_terms
            ta, tb = _matsubara_tails(rho, c, hi)
            if not (ta <= tol * scale_a and tb <= tol * scale_b):
                return hi, ta, tb
            break
        ta, tb = _matsubara_tails(rho, c, hi)
        if ta <= tol * scale_a and tb <= tol * scale_b:
            break
        lo = hi
        hi *= 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        ma, mb = _matsubara_tails(rho, c, mid)
        if ma <= tol * scale_a and mb <= tol * scale_b:
            hi, ta, tb = mid, ma, mb
        else:
            lo = mid
    return hi, ta, tb


_matsubara_cutoff_j = _jit(_matsubara_cutoff, _matsubara_tails=_matsubara_tails_j)


def _geometric_tail(rho, x1, power, kind, k):
    """Bound on the round-trip sum (see below) over indices j > k."""
    q = math.exp(-2.0 * x1)
    qe = abs(rho) * q
    # sum_{j>k} |rho|^(j-1) j^n q^j = q sum_{i>=k} (i+1)^n qe^i
    b0, b1, b2 = _geo_moments(qe, k - 1)
    den = -math.expm1(-2.0 * x1 * (k + 1))
    head = 2.0 * b0 + 4.0 * x1 * (b1 + b0)
    if kind == 1:
        head = 2.0 * head + 16.0 * x1 * x1 * (b2 + 2.0 * b1 + b0) / den
    return q * head / (den * den * (k + 1.0) ** power)


_geometric_tail_j = _jit(_geometric_tail, _geo_moments=_geo_moments_j)


def _geometric_cutoff(rho, x1, power, kind, tol, scale, max_terms):
    """Smallest K whose round-trip tail bound is below tol*scale (``max_terms`` if none is)."""
    lo = 1
    tail = _geometric_tail(rho, x1, power, kind, lo)
    if tail <= tol * scale:
        return lo, tail
    hi = 2
    while True:
        if hi >= max_terms:
            hi = max_terms
            tail = _geometric_tail(rho, x1, power, kind, hi)
            if not tail <= tol * scale:
                return hi, tail
            break
        tail = _geometric_tail(rho, x1, power, kind, hi)
        if tail <= tol * scale:
            break
        lo = hi
        hi *= 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        t = _geometric_tail(rho, x1, power, kind, mid)
        if t <= tol * scale:
            hi, tail = mid, t
        else:
            lo = mid
    return hi, tail


_geometric_cutoff_j = _jit(_geometric_cutoff, _geometric_tail=_geometric_tail_j)


# ---------------------------------------------------------------------------
# reduced polylogarithm series  S_nu(x) = sum_{k>=1} x^(k-1) / k^nu = Li_nu(x)/x
# ---------------------------------------------------------------------------

def _li_reduced_nb(nu, x, tol):
    ax = abs(x)
    K = _series_cutoff_j(nu, ax, tol, KMAX_SERIES)
    s = 0.0
    comp = 0.0
    p = 1.0
    for k in range(1, K + 1):
        t = p / float(k) ** nu
        # Neumaier compensated summation
        u = s + t
        if abs(s) >= abs(t):
            comp += (s - u) + t
        else:
            comp += (t - u) + s
        s = u
        p *= x
    if ax == 0.0:
        bound = 0.0
    else:
        bound = ax ** K / ((K + 1.0) ** nu * (1.0 - ax))
    return s + comp, K, bound


def _li_reduced_np(nu, x, tol):
    ax = abs(x)
    K = _series_cutoff(nu, ax, tol, KMAX_SERIES)
    parts = []
    chunk = 8192
    for start in range(1, K + 1, chunk):
        k = np.arange(start, min(start + chunk, K + 1), dtype=np.float64)
        parts.append(float(np.sum(np.power(x, k - 1.0) / np.power(k, nu))))
    bound = 0.0 if ax == 0.0 else ax ** K / ((K + 1.0) ** nu * (1.0 - ax))
    return math.fsum(parts), K, bound


if HAVE_NUMBA:
    _li_reduced_nb = _jit(_li_reduced_nb)


def _li_reduced_array_np(nu, xs, tol):
    """Vectorised S_nu over an array of arguments sharing one cutoff."""
    xs = np.asarray(xs, dtype=np.float64)
    if xs.size == 0:
        return xs.copy()
    K = _series_cutoff(nu, float(np.max(np.abs(xs))), tol, KMAX_SERIES)
    out = np.zeros_like(xs)
    chunk = max(1, min(4096, 2_000_000 // xs.size))
    for start in range(1, K + 1, chunk):
        k = np.arange(start, min(start + chunk, K + 1), dtype=np.float64)
        out += np.sum(np.power(xs[:, None], k[None, :] - 1.0) / np.power(k, nu)[None, :], axis=1)
    return out


# ---------------------------------------------------------------------------
# Matsubara moment sums over m >= 1
# ---------------------------------------------------------------------------
# For x_m = rho*exp(-c m) the kernel accumulates
#   s0 = sum Li3(x_m)            s1 = sum (c m) Li2(x_m)    s2 = sum (c m)^2 Li1(x_m)
#   s3 = sum q^m Li2(x_m)/x_m    s4 = sum (c m) q^m Li1(x_m)/x_m
# The m = 0 contribution is added by the caller (it may sit on |x| = 1).

def _matsubara_nb(rho, c, tol, scale_a, scale_b, min_terms, max_terms):
    M, tail_a, tail_b = _matsubara_cutoff_j(rho, c, tol, scale_a, scale_b, min_terms, max_terms)
    out = np.zeros(5)
    if not (tail_a <= tol * scale_a and tail_b <= tol * scale_b):
        out[:] = math.nan
        return out, M, tail_a, tail_b
    # Neumaier-compensated accumulation: at low T there are ~1/(aT) terms
    comp = np.zeros(5)
    term = np.empty(5)
    for m in range(1, M + 1):
        qm = math.exp(-c * m)
        x = rho * qm
        s3r, _, _ = _li_reduced_nb(3, x, 1e-17)
        s2r, _, _ = _li_reduced_nb(2, x, 1e-17)
        if abs(x) < 1e-8:
            s1r = 1.0 + x / 2.0 + x * x / 3.0
        else:
            s1r = -math.log1p(-x) / x
        cm = c * m
        term[0] = x * s3r
        term[1] = cm * x * s2r
        term[2] = cm * cm * x * s1r
        term[3] = qm * s2r
        term[4] = cm * qm * s1r
        for i in range(5):
            t = out[i] + term[i]
            if abs(out[i]) >= abs(term[i]):
                comp[i] += (out[i] - t) + term[i]
            else:
                comp[i] += (term[i] - t) + out[i]
            out[i] = t
    out += comp
    return out, M, tail_a, tail_b


def _matsubara_np(rho, c, tol, scale_a, scale_b, min_terms, max_terms):
    M, tail_a, tail_b = _matsubara_cutoff(rho, c, tol, scale_a, scale_b, min_terms, max_terms)
    if not (tail_a <= tol * scale_a and tail_b <= tol * scale_b):
        return np.full(5, math.nan), M, tail_a, tail_b
    m = np.arange(1, M + 1, dtype=np.float64)
    qm = np.exp(-c * m)
    x = rho * qm
    s3r = _li_reduced_array_np(3, x, 1e-17)
    s2r = _li_reduced_array_np(2, x, 1e-17)
    small = np.abs(x) < 1e-8
    with np.errstate(divide="ignore", invalid="ignore"):
        s1r = np.where(small, 1.0 + x / 2.0 + x * x / 3.0, -np.log1p(-x) / np.where(small, 1.0, x))
    cm = c * m
    out = np.array([
        np.sum(x * s3r),
        np.sum(cm * x * s2r),
        np.sum(cm * cm * x * s1r),
        np.sum(qm * s2r),
        np.sum(cm * qm * s1r),
    ])
    return out, M, tail_a, tail_b


if HAVE_NUMBA:
    _matsubara_nb = _jit(_matsubara_nb)


# ---------------------------------------------------------------------------
# round-trip sums  sum_k rho^(k-1) K(k x1) / k^power  with
#   kind 0:  K = W - 1,        W(x) = x/sinh^2 x + coth x
#   kind 1:  K = 2W - x W' - 2 = 2(W - 1) + 2 x^2 cosh x / sinh^3 x
# kind 0 with power 3 is the free energy, with power 2 the derivative in one
# reflection coefficient; kind 1 with power 3 is the pressure.  Writing the
# weight as rho^(k-1) keeps rho = 0 finite.  With e = exp(-2x), d = 1 - e,
#   W - 1 = 2e/d + 4xe/d^2  and  2 x^2 cosh/sinh^3 = 8 x^2 e (1+e)/d^3.
# ---------------------------------------------------------------------------

def _geometric_nb(rho, x1, power, kind, tol, scale, max_terms):
    K, tail = _geometric_cutoff_j(rho, x1, power, kind, tol, scale, max_terms)
    if not tail <= tol * scale:
        return math.nan, K, tail
    s = 0.0
    comp = 0.0
    p = 1.0
    for k in range(1, K + 1):
        x = k * x1
        e = math.exp(-2.0 * x)
        d = -math.expm1(-2.0 * x)
        w = 2.0 * e / d + 4.0 * x * e / (d * d)
        if kind == 1:
            w = 2.0 * w + 8.0 * x * x * e * (1.0 + e) / (d * d * d)
        term = p * w / (float(k) ** power)
        t = s + term
        if abs(s) >= abs(term):
            comp += (s - t) + term
        else:
            comp += (term - t) + s
        s = t
        p *= rho
    return s + comp, K, tail


def _geometric_np(rho, x1, power, kind, tol, scale, max_terms):
    K, tail = _geometric_cutoff(rho, x1, power, kind, tol, scale, max_terms)
    if not tail <= tol * scale:
        return math.nan, K, tail
    k = np.arange(1, K + 1, dtype=np.float64)
    x = k * x1
    e = np.exp(-2.0 * x)
    d = -np.expm1(-2.0 * x)
    w = 2.0 * e / d + 4.0 * x * e / (d * d)
    if kind == 1:
        w = 2.0 * w + 8.0 * x * x * e * (1.0 + e) / (d * d * d)
    return float(np.sum(np.power(rho, k - 1.0) * w / k ** power)), K, tail


if HAVE_NUMBA:
    _geometric_nb = _jit(_geometric_nb)


# ---------------------------------------------------------------------------
# complex polylogarithm Li_n(r2 e^{i xi}), n >= 2, over an array of xi
# ---------------------------------------------------------------------------
# r2 <= 1/2: direct power series.  r2 > 1/2: expansion in mu = log z about z = 1,
#   Li_n(e^mu) = mu^(n-1)/(n-1)! (H_{n-1} - log(-mu)) + sum_{j != n-1} zeta(n-j) mu^j / j!
# whose coefficients ``coef[j] = zeta(n-j)/j!`` (coef[n-1] = 0) the caller supplies.

def _li_complex_nb(n, r2, xi, coef, harmonic, fact, tol):
    out = np.empty(xi.size, dtype=np.complex128)
    if r2 <= 0.5:
        K = _series_cutoff_j(n, r2, tol, KMAX_SERIES)
        for i in range(xi.size):
            z = r2 * complex(math.cos(xi[i]), math.sin(xi[i]))
            s = 0j
            p = z
            for k in range(1, K + 1):
                s += p / float(k) ** n
                p *= z
            out[i] = s
        return out
    lr = math.log(r2)
    for i in range(xi.size):
        xr = xi[i] - TWO_PI * math.floor(xi[i] / TWO_PI + 0.5)
        mu = complex(lr, xr)
        if mu == 0j:
            out[i] = coef[0]
            continue
        s = 0j
        p = 1.0 + 0j
        for j in range(coef.size):
            s += coef[j] * p
            p *= mu
        pn = mu ** (n - 1)
        out[i] = s + pn / fact * (harmonic - cmath.log(-mu))
    return out


def _li_complex_np(n, r2, xi, coef, harmonic, fact, tol):
    xi = np.asarray(xi, dtype=np.float64)
    if r2 <= 0.5:
        K = _series_cutoff(n, r2, tol, KMAX_SERIES)
        k = np.arange(1, K + 1, dtype=np.float64)
        z = r2 * np.exp(1j * xi)
        return np.sum(np.power(z[:, None], k[None, :]) / np.power(k, n)[None, :], axis=1)
    xr = xi - TWO_PI * np.floor(xi / TWO_PI + 0.5)
    mu = np.log(r2) + 1j * xr
    s = np.zeros(xi.size, dtype=np.complex128)
    p = np.ones(xi.size, dtype=np.complex128)
    for j in range(coef.size):
        s += coef[j] * p
        p *= mu
    at_one = mu == 0
    safe = np.where(at_one, 1.0, mu)
    out = s + safe ** (n - 1) / fact * (harmonic - np.log(-safe))
    out[at_one] = coef[0]
    return out


if HAVE_NUMBA:
    _li_complex_nb = _jit(_li_complex_nb)


if USE_NUMBA:
    li_reduced = _li_reduced_nb
    matsubara_sums = _matsubara_nb
    geometric_sum = _geometric_nb
    li_complex = _li_complex_nb
else:
    li_reduced = _li_reduced_np
    matsubara_sums = _matsubara_np
    geometric_sum = _geometric_np
    li_complex = _li_complex_np

series_cutoff = _series_cutoff

IMPLEMENTATIONS = {
    "numpy": {
        "li_reduced": _li_reduced_np,
        "matsubara_sums": _matsubara_np,
        "geometric_sum": _geometric_np,
        "li_complex": _li_complex_np,
    },
}
if HAVE_NUMBA:
    IMPLEMENTATIONS["numba"] = {
        "li_reduced": _li_reduced_nb,
        "matsubara_sums": _matsubara_nb,
        "geometric_sum": _geometric_nb,
        "li_complex": _li_complex_nb,
    }
