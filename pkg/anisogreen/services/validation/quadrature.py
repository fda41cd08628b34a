from __future__ import annotations

from collections.abc import Callable

import numpy as np

from anisogreen.core.exceptions import AccuracyError

REFERENCE_BUDGET = 2_000_000
MAX_DEPTH = 60


def reference_quadrature(
    f: Callable[[float], complex],
    a: float,
    b: float,
    tol: float = 1e-12,
    budget: int = REFERENCE_BUDGET,
) -> complex:
    """Adaptive Simpson rule with Richardson correction, absolute tolerance ``tol``."""

    if a == b:
        return 0j
    evaluations = 3
    fa, fb = complex(f(a)), complex(f(b))
    mid = 0.5 * (a + b)
    fm = complex(f(mid))
    whole = (b - a) * (fa + 4.0 * fm + fb) / 6.0
    # (a, b, fa, fm, fb, whole, tol, depth)
    stack = [(a, b, fa, fm, fb, whole, tol, 0)]
    total = 0j
    while stack:
        lo, hi, flo, fmid, fhi, estimate, local_tol, depth = stack.pop()
        centre = 0.5 * (lo + hi)
        left_mid = 0.5 * (lo + centre)
        right_mid = 0.5 * (centre + hi)
        fl = complex(f(left_mid))
        fr = complex(f(right_mid))
        evaluations += 2
        if evaluations > budget:
            raise AccuracyError(
                "reference quadrature budget exhausted",
                achieved_tolerance=abs(estimate) * 1e-16 + local_tol,
                evaluations=evaluations,
            )
        left = (centre - lo) * (flo + 4.0 * fl + fmid) / 6.0
        right = (hi - centre) * (fmid + 4.0 * fr + fhi) / 6.0
        delta = left + right - estimate
        floor = 64.0 * np.finfo(float).eps * (abs(left) + abs(right))
        if abs(delta) <= 15.0 * max(local_tol, floor) or depth >= MAX_DEPTH:
            total += left + right + delta / 15.0
            continue
        stack.append((centre, hi, fmid, fr, fhi, right, 0.5 * local_tol, depth + 1))
        stack.append((lo, centre, flo, fl, fmid, left, 0.5 * local_tol, depth + 1))
    return total


__all__ = ["reference_quadrature"]
