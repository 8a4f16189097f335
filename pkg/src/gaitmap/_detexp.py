"""Deterministic exp() shared by the render backends.

The compiled kernel and the numpy fallback must emit bit-identical float64
values, and libm's exp() is not guaranteed to agree with numpy's vectorized
exp() in the last ulp. Both backends therefore evaluate this one fixed
operation sequence (argument reduction + degree-13 Horner polynomial +
ldexp), which consists only of IEEE-754 +,*,- and correctly-rounded
rint/ldexp, so the two implementations agree bit-for-bit as long as FMA
contraction is disabled in the C build.

Accuracy: relative error < 1e-15 on (-746, 0], which is far below the
renderer's 1e-6 oracle-equivalence budget. Arguments are clamped to
-746.0 (below the f64 underflow threshold), where the result is exactly 0.

The Cython twin in _render_cy.pyx uses the same constants and the same
expression shapes; change them together or not at all.
"""

from __future__ import annotations

import numpy as np

ARG_MIN = -746.0
LOG2E = 1.4426950408889634
LN2_HI = 0.6931471803691238
LN2_LO = 1.9082149292705877e-10

# 1/k! for k = 13 .. 0, Horner order.
_COEFFS = (
    1.6059043836821613e-10,
    2.08767569878681e-09,
    2.505210838544172e-08,
    2.755731922398589e-07,
    2.7557319223985893e-06,
    2.48015873015873e-05,
    0.0001984126984126984,
    0.001388888888888889,
    0.008333333333333333,
    0.041666666666666664,
    0.16666666666666666,
    0.5,
    1.0,
    1.0,
)


def detexp(x: np.ndarray) -> np.ndarray:
    """exp(x) for float64 arrays with x <= 0, deterministic across backends."""
    x = np.where(x > ARG_MIN, x, ARG_MIN)  # also maps NaN to ARG_MIN
    k = np.rint(x * LOG2E)
    t = (x - k * LN2_HI) - k * LN2_LO
    p = np.full_like(t, _COEFFS[0])
    for c in _COEFFS[1:]:
        p = p * t + c
    return np.ldexp(p, k.astype(np.int32))
