"""Integer-order cylinder Bessel J_k, Y_k for real argument.

Covers only what the planar three-circle demos need: moderate arguments
(series seeds are accurate to ~1e-10 for x <= 15) and integer order.
J by downward recurrence with the even-sum normalization; Y upward from
series seeds.
"""
from __future__ import annotations

import math

import numpy as np

_EULER = 0.5772156649015328606

_Y_SERIES_LIMIT = 15.0


def cylinder_j(kmax: int, x: float) -> np.ndarray:
    """J_0..J_kmax(x) by Miller's downward recurrence."""
    if x == 0.0:
        out = np.zeros(kmax + 1)
        out[0] = 1.0
        return out
    top = kmax + max(20, int(1.2 * abs(x)) + 20)
    fp, fc = 0.0, 1e-280
    vals = np.zeros(kmax + 1)
    even_sum = 0.0
    for k in range(top, -1, -1):
        fm = 2.0 * (k + 1) / x * fc - fp
        fp, fc = fc, fm
        if abs(fc) > 1e250:
            fc *= 1e-250
            fp *= 1e-250
            vals *= 1e-250
            even_sum *= 1e-250
        if k <= kmax:
            vals[k] = fc
        if k > 0 and k % 2 == 0:
            even_sum += fc
    norm = fc + 2.0 * even_sum          # J0 + 2 sum J_{2k} = 1
    return vals / norm


def _y0_y1_series(x: float) -> tuple[float, float]:
    if not (0 < x <= _Y_SERIES_LIMIT):
        raise ValueError(f"Y series seeds valid for 0 < x <= {_Y_SERIES_LIMIT}")
    j = cylinder_j(1, x)
    q = 0.25 * x * x
    # Y0 = (2/pi)[(ln(x/2)+gamma) J0 + sum_{k>=1} (-1)^{k+1} H_k q^k / (k!)^2]
    term = 1.0
    hk = 0.0
    s0 = 0.0
    for k in range(1, 60):
        term *= q / (k * k)
        hk += 1.0 / k
        s0 += (-1) ** (k + 1) * hk * term
        if term * hk < 1e-18 * max(abs(s0), 1.0):
            break
    y0 = (2.0 / math.pi) * ((math.log(0.5 * x) + _EULER) * j[0] + s0)
    # Y1 from the Wronskian J1 Y0 - J0 Y1 = 2/(pi x)... rearranged:
    if abs(j[0]) > 0.1:
        y1 = (j[1] * y0 - 2.0 / (math.pi * x)) / j[0]
    else:
        # fall back to the Y1 series when J0 is near a zero
        term = 1.0
        s1 = 0.0
        hk = 0.0
        hk1 = 1.0
        for k in range(0, 60):
            if k > 0:
                term *= -q / (k * (k + 1))
                hk += 1.0 / k
                hk1 += 1.0 / (k + 1)
            s1 += term * (hk + hk1)
            if abs(term) < 1e-18:
                break
        y1 = (2.0 / math.pi) * ((math.log(0.5 * x) + _EULER) * j[1]
                                - 1.0 / x - 0.25 * x * s1)
    return y0, y1


def cylinder_y(kmax: int, x: float) -> np.ndarray:
    """Y_0..Y_kmax(x) by upward recurrence from series seeds."""
    y0, y1 = _y0_y1_series(x)
    out = np.zeros(kmax + 1)
    out[0] = y0
    if kmax >= 1:
        out[1] = y1
    for k in range(1, kmax):
        out[k + 1] = 2.0 * k / x * out[k] - out[k - 1]
    return out


def cylinder_jy_with_derivatives(kmax: int, x: float):
    """(J, J', Y, Y') arrays for orders 0..kmax at x > 0."""
    j = cylinder_j(kmax + 1, x)
    y = cylinder_y(kmax + 1, x)
    dj = np.empty(kmax + 1)
    dy = np.empty(kmax + 1)
    dj[0] = -j[1]
    dy[0] = -y[1]
    for k in range(1, kmax + 1):
        dj[k] = j[k - 1] - k / x * j[k]
        dy[k] = y[k - 1] - k / x * y[k]
    return j[:kmax + 1], dj, y[:kmax + 1], dy
