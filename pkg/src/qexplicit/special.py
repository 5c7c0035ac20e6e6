"""Special functions needed by the contour densities."""
from __future__ import annotations

import math

import numpy as np

EULER_GAMMA = 0.57721566490153286060651209008240243
LOG_TWO_PI = math.log(2.0 * math.pi)

# B_2k / (2k) for k = 1..10
_B2K_OVER_2K = np.array(
    [
        1.0 / 6 / 2,
        -1.0 / 30 / 4,
        1.0 / 42 / 6,
        -1.0 / 30 / 8,
        5.0 / 66 / 10,
        -691.0 / 2730 / 12,
        7.0 / 6 / 14,
        -3617.0 / 510 / 16,
        43867.0 / 798 / 18,
        -174611.0 / 330 / 20,
    ]
)

_SHIFT_TARGET = 14.0


def digamma(s):
    """Digamma function psi(s) for real or complex s (scalar or array).

    Reflection for Re s < 1/2, upward recurrence to Re s >= 14, then the
    Stirling-type asymptotic series.  Raises ValueError at the poles.
    """
    z = np.asarray(s, dtype=complex)
    scalar = z.ndim == 0
    z = np.atleast_1d(z).copy()
    is_pole = (z.imag == 0) & (z.real <= 0) & (z.real == np.round(z.real))
    if np.any(is_pole):
        raise ValueError("digamma has poles at the non-positive integers")

    out = np.zeros_like(z)
    reflect = z.real < 0.5
    if np.any(reflect):
        zr = z[reflect]
        out[reflect] = -math.pi / np.tan(math.pi * zr)
        z[reflect] = 1.0 - zr

    w = z.copy()
    while True:
        low = w.real < _SHIFT_TARGET
        if not np.any(low):
            break
        out[low] -= 1.0 / w[low]
        w[low] += 1.0
    inv2 = 1.0 / (w * w)
    series = np.zeros_like(w)
    for c in _B2K_OVER_2K[::-1]:
        series = (series + c) * inv2
    out += np.log(w) - 0.5 / w - series

    if np.isrealobj(s) or (np.ndim(s) == 0 and isinstance(s, (int, float))):
        out_real = out.real
        return float(out_real[0]) if scalar else out_real
    return complex(out[0]) if scalar else out
