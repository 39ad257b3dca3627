"""Spherical Bessel machinery for complex arguments and real order.

Strategy, in brief: j is computed by the ascending series for small |z|
and by scaled downward (Miller) recurrence otherwise, anchored at whichever
of the two lowest orders is farther from a zero; y is computed by scaled
upward recurrence from closed-form seeds (integer order) or series seeds
obtained through the reflection formula (fractional order).  Downward for
j / upward for y is forced by which solution is recessive or dominant as
the order grows at fixed argument.

Fractional orders arise from spherical-frame anisotropic layers, where the
effective order solves nu(nu+1) = (tangential/radial) * n(n+1).

All values are carried as (mantissa, decimal exponent) pairs; see
`calrlab.specfun.scaled`.
"""
from __future__ import annotations

import math

import numpy as np

from .scaled import ScaledArray

MAX_ORDER = 1500
_SERIES_CUTOFF = 8.0  # |z| below which the ascending series is used for j
_LN10 = math.log(10.0)


def log_dfact_plus(nu: float) -> float:
    """ln((2*nu+1)!!), continued to real nu via the Gamma function."""
    return (nu + 1.0) * math.log(2.0) + math.lgamma(nu + 1.5) - 0.5 * math.log(math.pi)


def log_dfact_minus(nu: float) -> float:
    """ln((2*nu-1)!!), continued to real nu via the Gamma function."""
    return nu * math.log(2.0) + math.lgamma(nu + 0.5) - 0.5 * math.log(math.pi)


def _as_z_array(z):
    z = np.asarray(z, dtype=complex)
    scalar = z.ndim == 0
    return np.atleast_1d(z), scalar


def _series_j(nu: float, z: np.ndarray) -> ScaledArray:
    """Ascending series for j_nu, valid for nu > -3/2, scaled output.

    j_nu(z) = (sqrt(pi)/2) (z/2)^nu sum_k (-z^2/4)^k / (k! Gamma(k+nu+3/2)).
    Terms are updated recursively so no large Gamma values appear.
    """
    if nu <= -1.5:
        raise ValueError(f"series invalid for order {nu}")
    if float(np.max(np.abs(z))) > 60.0:
        raise ValueError("ascending series unreliable for |z| > 60")
    zsq4 = -(z * z) / 4.0
    term = np.ones_like(z)
    acc = np.ones_like(z)
    k = 0
    while True:
        k += 1
        term = term * zsq4 / (k * (k + nu + 0.5))
        acc = acc + term
        if np.all(np.abs(term) <= 1e-18 * np.maximum(np.abs(acc), 1e-300)) or k > 400:
            break
    # prefactor (sqrt(pi)/2) (z/2)^nu / Gamma(nu+3/2), in log10 pieces
    out = ScaledArray.from_complex(acc)
    logpref = (0.5 * math.log(math.pi) - math.log(2.0) - math.lgamma(nu + 1.5)) / _LN10
    nz = z != 0
    phase = np.where(nz, np.exp(1j * nu * np.angle(np.where(nz, z, 1.0) / 2.0)), 1.0)
    logmag = np.where(nz, nu * np.log10(np.abs(np.where(nz, z, 1.0)) / 2.0), 0.0)
    out = ScaledArray(out.m * phase, out.e) .scale10(logmag + logpref)
    if np.any(~nz):
        # j_nu(0) = 1 for nu == 0, else 0
        fill = 1.0 if nu == 0 else 0.0
        out.m[~nz] = fill
        out.e[~nz] = 0
    return out


def _series_jminus_aux(nu: float, z: np.ndarray) -> ScaledArray:
    """sqrt(pi/(2z)) * J_{-(nu+1/2)}(z), the second series of the reflection.

    Equals (sqrt(pi)/2) (z/2)^(-nu-1) sum_k (-z^2/4)^k / (k! Gamma(k-nu+1/2)).
    """
    g0 = 0.5 - nu
    if abs(g0 - round(g0)) < 1e-12 and round(g0) <= 0:
        raise ValueError(f"reflection series degenerate at order {nu}")
    zsq4 = -(z * z) / 4.0
    term = np.ones_like(z)
    acc = np.ones_like(z)
    k = 0
    while True:
        k += 1
        term = term * zsq4 / (k * (k - nu - 0.5))
        acc = acc + term
        if np.all(np.abs(term) <= 1e-18 * np.maximum(np.abs(acc), 1e-300)) or k > 400:
            break
    # 1/Gamma(g0) with sign (g0 may be negative non-integer)
    sign = 1.0
    if g0 < 0:
        # reflection: Gamma(g0) = pi / (sin(pi g0) Gamma(1-g0))
        s = math.sin(math.pi * g0)
        sign = 1.0 if s > 0 else -1.0
        log_gamma = math.log(math.pi) - math.log(abs(s)) - math.lgamma(1.0 - g0)
    else:
        log_gamma = math.lgamma(g0)
    out = ScaledArray.from_complex(acc * sign)
    logpref = (0.5 * math.log(math.pi) - math.log(2.0) - log_gamma) / _LN10
    if np.any(z == 0):
        raise ZeroDivisionError("y-type series requires z != 0")
    phase = np.exp(-1j * (nu + 1.0) * np.angle(z / 2.0))
    logmag = -(nu + 1.0) * np.log10(np.abs(z) / 2.0)
    return ScaledArray(out.m * phase, out.e).scale10(logmag + logpref)


def _series_y(nu: float, z: np.ndarray) -> ScaledArray:
    """y_nu by the reflection formula (fractional nu) or trig (integer nu<=1)."""
    if abs(nu - round(nu)) < 1e-12:
        n = int(round(nu))
        if n == 0:
            return ScaledArray.from_complex(-np.cos(z) / z)
        if n == -1:
            return ScaledArray.from_complex(np.sin(z) / z)
        if n == 1:
            return ScaledArray.from_complex(-np.cos(z) / (z * z) - np.sin(z) / z)
        raise ValueError("trig seeds only cover orders -1, 0, 1")
    a = nu + 0.5
    s = math.sin(math.pi * a)
    if abs(s) < 1e-8:
        raise ValueError(
            f"order {nu} too close to half-integer for the reflection formula; "
            "perturb the order slightly")
    j = _series_j(nu, z)
    aux = _series_jminus_aux(nu, z)
    return (j * math.cos(math.pi * a) - aux) * (1.0 / s)


def _miller_j(nu: float, z: np.ndarray, base: float) -> tuple[ScaledArray, ScaledArray]:
    """Scaled downward recurrence; returns j at orders (nu-1, nu).

    `base` is the fractional part of nu (the anchor order); anchoring is at
    base or base+1, whichever true value is larger elementwise, so zeros of
    the anchor do not poison the normalization.
    """
    steps = int(round(nu - base))
    zmax = float(np.max(np.abs(z)))
    top = steps + max(24, int(math.ceil(1.1 * zmax - nu)) + 24)
    fp = np.zeros_like(z)            # f_{k+1}
    fc = np.ones_like(z)             # f_k, arbitrary seed
    eoff = np.zeros(z.shape, dtype=np.int64)
    snap = {}
    for k in range(top, -1, -1):
        if k == steps + 1:
            snap["above"] = (fc.copy(), eoff.copy())
        if k == steps:
            snap["at"] = (fc.copy(), eoff.copy())
        if k == steps - 1:
            snap["below"] = (fc.copy(), eoff.copy())
        if k == 1:
            snap["one"] = (fc.copy(), eoff.copy())
        if k == 0:
            snap["zero"] = (fc.copy(), eoff.copy())
            break
        order = base + k
        fm = (2.0 * order + 1.0) / z * fc - fp
        fp, fc = fc, fm
        big = np.abs(fc) > 1e250
        if np.any(big):
            fc[big] *= 1e-250
            fp[big] *= 1e-250
            eoff[big] += 250
    f0 = ScaledArray(snap["zero"][0], snap["zero"][1])
    f1 = ScaledArray(snap["one"][0], snap["one"][1])
    if abs(base) < 1e-12:
        t0 = ScaledArray.from_complex(np.where(z != 0, np.sin(z) / np.where(z != 0, z, 1.0), 1.0))
        t1 = ScaledArray.from_complex(
            np.where(z != 0, np.sin(z) / np.where(z != 0, z * z, 1.0)
                     - np.cos(z) / np.where(z != 0, z, 1.0), 0.0))
    else:
        t0 = _series_j(base, z)
        t1 = _series_j(base + 1.0, z)
    # elementwise anchor choice by larger true magnitude
    use1 = t1.log10_abs() > t0.log10_abs()
    rat0 = t0 / f0
    rat1 = t1 / f1
    ratio = ScaledArray(np.where(use1, rat1.m, rat0.m), np.where(use1, rat1.e, rat0.e),
                        normalize=False)
    j_at = ScaledArray(*snap["at"]) * ratio
    if steps >= 1:
        j_below = ScaledArray(*snap["below"]) * ratio
    else:
        # j_{nu-1} = (2nu+1)/z j_nu - j_{nu+1}, using downward data only
        j_above = ScaledArray(*snap["above"]) * ratio
        j_below = (2.0 * nu + 1.0) * (j_at * ScaledArray.from_complex(1.0 / z)) - j_above
    return j_below, j_at


def _upward_y(nu: float, z: np.ndarray, base: float) -> tuple[ScaledArray, ScaledArray]:
    """Scaled upward recurrence; returns y at orders (nu-1, nu)."""
    steps = int(round(nu - base))
    if abs(base) < 1e-12:
        ym1 = ScaledArray.from_complex(np.sin(z) / z)   # y_{-1}
        y0 = ScaledArray.from_complex(-np.cos(z) / z)
    else:
        ym1 = _series_y(base - 1.0, z)
        y0 = _series_y(base, z)
    if steps == 0:
        return ym1, y0
    prev_m, prev_e = ym1.m.copy(), ym1.e.copy()
    cur_m, cur_e = y0.m.copy(), y0.e.copy()
    # align both registers to the larger exponent (never scales up)
    eoff = np.maximum(prev_e, cur_e)
    prev_m = prev_m * 10.0 ** np.clip((prev_e - eoff).astype(float), -400, 0)
    cur_m = cur_m * 10.0 ** np.clip((cur_e - eoff).astype(float), -400, 0)
    for k in range(steps):
        order = base + k
        nxt = (2.0 * order + 1.0) / z * cur_m - prev_m
        prev_m, cur_m = cur_m, nxt
        big = np.abs(cur_m) > 1e250
        if np.any(big):
            cur_m[big] *= 1e-250
            prev_m[big] *= 1e-250
            eoff[big] += 250
    return ScaledArray(prev_m, eoff), ScaledArray(cur_m, eoff)


def sph_jy(nu: float, z) -> dict:
    """j_nu, y_nu and their z-derivatives as ScaledArrays.

    Vectorized over z (complex); nu is a scalar real order >= 0.
    Derivatives use f' = f_{nu-1} - (nu+1)/z * f_nu.
    """
    if nu < 0:
        raise ValueError("order must be >= 0")
    if nu > MAX_ORDER:
        raise ValueError(f"order {nu} exceeds MAX_ORDER={MAX_ORDER}")
    z, scalar = _as_z_array(z)
    if np.any(z == 0):
        raise ZeroDivisionError("sph_jy requires z != 0 (y is singular there)")
    base = nu - math.floor(nu)
    if float(np.max(np.abs(z))) <= _SERIES_CUTOFF:
        j_at = _series_j(nu, z)
        j_below = _series_j(nu - 1.0, z)
    else:
        j_below, j_at = _miller_j(nu, z, base)
    y_below, y_at = _upward_y(nu, z, base)
    inv_z = ScaledArray.from_complex(1.0 / z)
    dj = j_below - (nu + 1.0) * (j_at * inv_z)
    dy = y_below - (nu + 1.0) * (y_at * inv_z)
    out = {"j": j_at, "dj": dj, "y": y_at, "dy": dy,
           "j_prev": j_below, "y_prev": y_below}
    if scalar:
        out = {k: v[0:1] for k, v in out.items()}
    return out


def hat_jy(nu: float, z) -> dict:
    """Growth-normalized pair: jhat = (2nu+1)!! j, yhat = -y/(2nu-1)!!.

    Near zero argument jhat(t) ~ t^nu and yhat(t) ~ t^(-nu-1), which keeps
    high-order coefficients meaningful.  Returns ScaledArrays for the values
    and their z-derivatives.
    """
    raw = sph_jy(nu, z)
    lp = log_dfact_plus(nu) / _LN10
    lm = log_dfact_minus(nu) / _LN10
    return {
        "j": raw["j"].scale10(lp),
        "dj": raw["dj"].scale10(lp),
        "y": (-raw["y"]).scale10(-lm),
        "dy": (-raw["dy"]).scale10(-lm),
    }


def hat_h1(nu: float, z) -> dict:
    """Outgoing radial function hhat = i h1 / (2nu-1)!! and its derivative.

    Shares the small-argument normalization of yhat: hhat(t) ~ t^(-nu-1).
    """
    raw = sph_jy(nu, z)
    lm = log_dfact_minus(nu) / _LN10
    h = (1j * raw["j"] - raw["y"]).scale10(-lm)
    dh = (1j * raw["dj"] - raw["dy"]).scale10(-lm)
    return {"h": h, "dh": dh}


def hat_wronskian(nu: float, z) -> complex:
    """Exact value of jhat yhat' - jhat' yhat, which is -(2nu+1)/z^2."""
    z = complex(z)
    return -(2.0 * nu + 1.0) / (z * z)


def spherical_bessel(kind: str, n: int, z):
    """j_n, y_n or h1_n at complex z.

    Returns a plain complex when representable; on overflow/underflow of the
    double range returns the (mantissa, decimal exponent) pair instead.
    """
    if n < 0:
        raise ValueError("order must be >= 0")
    if n > MAX_ORDER:
        raise ValueError(f"order {n} exceeds MAX_ORDER={MAX_ORDER}")
    z = complex(z)
    if kind == "J" and z == 0:
        return 1.0 + 0.0j if n == 0 else 0.0 + 0.0j
    if z == 0:
        raise ZeroDivisionError(f"{kind}_n singular at z=0")
    vals = sph_jy(float(n), z)
    if kind == "J":
        v = vals["j"]
    elif kind == "Y":
        v = vals["y"]
    elif kind == "H1":
        v = vals["j"] + 1j * vals["y"]
    else:
        raise ValueError(f"unknown kind {kind!r}")
    sc = v.item()
    if -290 <= sc.exp10 <= 290:
        return sc.to_complex()
    return sc


def normalized_bessel(kind: str, n: float, r: float) -> float:
    """jhat_n(r) = (2n+1)!! j_n(r) or yhat_n(r) = -y_n(r)/(2n-1)!!, real r > 0."""
    if r <= 0:
        raise ValueError("argument must be > 0")
    vals = hat_jy(float(n), complex(r))
    if kind == "Jhat":
        sc = vals["j"].item()
    elif kind == "Yhat":
        sc = vals["y"].item()
    else:
        raise ValueError(f"unknown kind {kind!r}")
    if sc.exp10 > 300:
        raise OverflowError(
            f"{kind}_{n}({r}) exceeds double range; use hat_jy for scaled values")
    out = sc.to_complex()
    return float(out.real)


def wronskian_residual(n: float, r: float) -> float:
    """|j_n y_n' - j_n' y_n - 1/r^2| via recurrence derivatives, scaled."""
    if r <= 0:
        raise ValueError("argument must be > 0")
    vals = sph_jy(float(n), complex(r))
    w = vals["j"] * vals["dy"] - vals["dj"] * vals["y"]
    resid = w - (1.0 / r ** 2)
    return float(np.abs(resid.to_complex())[0])
