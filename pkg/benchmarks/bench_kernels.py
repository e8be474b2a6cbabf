"""Time the numba kernels against their numpy twins on representative workloads.

    python benchmarks/bench_kernels.py [--repeat 5]

Both implementations are imported side by side regardless of LIFSHITZ_NO_NUMBA,
and each workload is checked for agreement before it is timed.
"""
from __future__ import annotations

import argparse
import math
import sys
import timeit

import numpy as np

from lifshitz import _kernels
from lifshitz.polylog import _log_series_coefficients


def workloads():
    xi = np.linspace(0.0, 8.0 * math.pi, 2000)
    coef, harmonic, fact = _log_series_coefficients(3)
    return {
        "li_reduced(4, 0.99)": ("li_reduced", (4, 0.99, 1e-17)),
        "matsubara_sums aT=0.001": ("matsubara_sums", (0.81, 4 * math.pi * 1e-3, 1e-15, 1.0, 1.0, 5, 10_000_000)),
        "geometric_sum F rho=1 aT=1e-4": ("geometric_sum", (1.0, 2 * math.pi * 1e-4, 3, 0, 1e-15, 1.0, 100_000_000)),
        "geometric_sum P rho=0.9 aT=1e-3": ("geometric_sum", (0.9, 2 * math.pi * 1e-3, 3, 1, 1e-15, 1.0, 100_000_000)),
        "li_complex(3) r2=0.81 x2000": ("li_complex", (3, 0.81, xi, coef, harmonic, fact, 1e-15)),
        "li_complex(3) r2=0.25 x2000": ("li_complex", (3, 0.25, xi, coef, harmonic, fact, 1e-15)),
    }


def _as_array(v):
    if isinstance(v, tuple):
        v = v[0]
    return np.atleast_1d(np.asarray(v))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    if "numba" not in _kernels.IMPLEMENTATIONS:
        print("numba is not installed; nothing to compare", file=sys.stderr)
        return 1
    nb, npy = _kernels.IMPLEMENTATIONS["numba"], _kernels.IMPLEMENTATIONS["numpy"]

    print(f"{'workload':32s} {'numpy [ms]':>12s} {'numba [ms]':>12s} {'speed-up':>9s} {'max rel diff':>13s}")
    for label, (name, call_args) in workloads().items():
        a = _as_array(npy[name](*call_args))
        b = _as_array(nb[name](*call_args))  # also triggers compilation
        diff = float(np.max(np.abs(a - b) / np.maximum(np.abs(a), 1e-300)))
        t_np = min(timeit.repeat(lambda: npy[name](*call_args), number=1, repeat=args.repeat))
        t_nb = min(timeit.repeat(lambda: nb[name](*call_args), number=1, repeat=args.repeat))
        print(f"{label:32s} {1e3 * t_np:12.3f} {1e3 * t_nb:12.3f} {t_np / t_nb:9.1f} {diff:13.2e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
