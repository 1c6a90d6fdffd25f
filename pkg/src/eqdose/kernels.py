"""Hot numeric loops of the equivalence search.

The scalar reference-course BED and the bracketing/bisection/golden-section
loops dominate the runtime of batch solves, so they are compiled with numba
when it is importable.  Set EQDOSE_NUMBA=0 to force the plain numpy/Python
fallback; both paths compute identical values.
"""

from __future__ import annotations

import math
import os

import numpy as np

_flag = os.environ.get("EQDOSE_NUMBA", "").strip().lower()
if _flag in ("0", "off", "false", "no"):
    NUMBA_ENABLED = False
else:
    try:
        from numba import njit

        NUMBA_ENABLED = True
    except ImportError:
        NUMBA_ENABLED = False


def _jit(func):
    if NUMBA_ENABLED:
        return njit(cache=True)(func)
    return func


# Convergence of the inner searches is pushed well below the caller-facing
# BED tolerance so the answer is as good as the bracket allows.
_REL_WIDTH = 1e-13
_MAX_ITER = 200
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@_jit
def reference_bed(n_ref, per_fraction_bed, day_slope, deficit_rate, deficit_onset):
    """BED of an uninterrupted reference course with a real fraction count.

    Overall time is the continuous surrogate 1 + day_slope * (n_ref - 1),
    floored at one day; the deficit starts deficit_onset days in and grows
    at deficit_rate Gy/day.  Negative values clamp to zero.
    """
    t = 1.0 + day_slope * max(0.0, n_ref - 1.0)
    value = n_ref * per_fraction_bed - deficit_rate * max(0.0, t - deficit_onset)
    return value if value > 0.0 else 0.0


@_jit
def reference_bed_grid(n_grid, per_fraction_bed, day_slope, deficit_rate, deficit_onset):
    out = np.empty(n_grid.shape[0])
    for i in range(n_grid.shape[0]):
        out[i] = reference_bed(n_grid[i], per_fraction_bed, day_slope, deficit_rate, deficit_onset)
    return out


@_jit
def bisect_fraction_count(lo, hi, target, per_fraction_bed, day_slope, deficit_rate, deficit_onset):
    """Root of reference_bed(n) - target on [lo, hi]; assumes bed(lo) <= target <= bed(hi)."""
    for _ in range(_MAX_ITER):
        mid = 0.5 * (lo + hi)
        value = reference_bed(mid, per_fraction_bed, day_slope, deficit_rate, deficit_onset)
        if value < target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= _REL_WIDTH * (1.0 + hi):
            break
    return 0.5 * (lo + hi)


@_jit
def golden_min_fraction_count(lo, hi, target, per_fraction_bed, day_slope, deficit_rate, deficit_onset):
    """Fraction count minimizing |reference_bed(n) - target| on [lo, hi]."""
    a = lo
    b = hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc = abs(reference_bed(c, per_fraction_bed, day_slope, deficit_rate, deficit_onset) - target)
    fd = abs(reference_bed(d, per_fraction_bed, day_slope, deficit_rate, deficit_onset) - target)
    for _ in range(_MAX_ITER):
        if fc < fd:
            b = d
            d = c
            fd = fc
            c = b - _INVPHI * (b - a)
            fc = abs(reference_bed(c, per_fraction_bed, day_slope, deficit_rate, deficit_onset) - target)
        else:
            a = c
            c = d
            fc = fd
            d = a + _INVPHI * (b - a)
            fd = abs(reference_bed(d, per_fraction_bed, day_slope, deficit_rate, deficit_onset) - target)
        if b - a <= _REL_WIDTH * (1.0 + b):
            break
    return 0.5 * (a + b)
