"""Boundary norms with fractional modal multipliers and their interpolation check.

The norm is ||v||_{H^{1/2}} + ||M grad v . e_r||_{H^{-1/2}} on a sphere (or
circle), with H^{+-1/2} realized by the multipliers (1+n)^{+-1/2} on trace
coefficients.  The modal path (M = I) is exact; general M falls back to a
quadrature projection tagged as approximate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..specfun.vsh import sphere_rule, sph_harm_y
from .expansions import SphericalExpansion, PlanarHelmholtzExpansion
from .harmonic2d import HarmonicExpansion2D


@dataclass(frozen=True)
class NormReport:
    """A computed norm plus the metadata needed to reproduce it."""

    value: float
    parts: dict = field(default_factory=dict)
    method: str = "modal-exact"
    params: dict = field(default_factory=dict)

    def __float__(self):
        return self.value


def _sphere_multiplier_norm(trace: dict, radius: float) -> tuple[float, float]:
    """(trace piece, conormal piece) from (n,m) -> (v_hat, w_hat)."""
    s_tr = 0.0
    s_co = 0.0
    for (n, _m), (v_hat, w_hat) in trace.items():
        s_tr += (1.0 + n) * abs(v_hat) ** 2
        s_co += abs(w_hat) ** 2 / (1.0 + n)
    area = radius * radius
    return math.sqrt(area * s_tr), math.sqrt(area * s_co)


def _circle_multiplier_norm(trace: dict, radius: float) -> tuple[float, float]:
    s_tr = 0.0
    s_co = 0.0
    for k, (v_hat, w_hat) in trace.items():
        s_tr += (1.0 + abs(k)) * abs(v_hat) ** 2
        s_co += abs(w_hat) ** 2 / (1.0 + abs(k))
    length = 2.0 * math.pi * radius
    return math.sqrt(length * s_tr), math.sqrt(length * s_co)


def hnorm_sphere(v, m_tensor=None, radius: float = 1.0,
                 quad_order: int = 40, n_project: int = 24) -> NormReport:
    """The combined boundary norm of an expansion on |x| = radius.

    With m_tensor None (identity) the modal multipliers are exact.  A general
    tensor (constant 3x3 or callable of position) routes the conormal datum
    through a quadrature projection; the result is tagged "quadrature".
    """
    if isinstance(v, HarmonicExpansion2D):
        if m_tensor is not None:
            raise ValueError("planar path supports only the identity tensor")
        tr = v.circle_coeffs(radius)
        dr = v.radial_derivative_coeffs(radius)
        trace = {k: (tr[k], dr.get(k, 0.0)) for k in tr}
        t, c = _circle_multiplier_norm(trace, radius)
        return NormReport(value=t + c, parts={"trace": t, "conormal": c},
                          method="modal-exact", params={"radius": radius})
    if isinstance(v, PlanarHelmholtzExpansion):
        if m_tensor is not None:
            raise ValueError("planar path supports only the identity tensor")
        trace = v.circle_trace(radius)
        t, c = _circle_multiplier_norm(trace, radius)
        return NormReport(value=t + c, parts={"trace": t, "conormal": c},
                          method="modal-exact",
                          params={"radius": radius, "omega": v.omega})
    if not isinstance(v, SphericalExpansion):
        raise TypeError("unsupported expansion type")
    if m_tensor is None:
        trace = v.trace_coeffs(radius)
        t, c = _sphere_multiplier_norm(trace, radius)
        return NormReport(value=t + c, parts={"trace": t, "conormal": c},
                          method="modal-exact", params={"radius": radius})
    # quadrature projection path for a general coefficient tensor
    pts, w, theta, phi = sphere_rule(quad_order)
    xs = radius * pts
    vals, grads = v.value_and_gradient_many(xs)
    conorm = np.empty(len(xs), dtype=complex)
    for i, x in enumerate(xs):
        mt = np.asarray(m_tensor(x) if callable(m_tensor) else m_tensor,
                        dtype=complex)
        conorm[i] = np.dot(mt @ grads[i], pts[i])
    trace = {}
    for n in range(0, n_project + 1):
        for m in range(-n, n + 1):
            y = sph_harm_y(n, m, theta, phi)
            v_hat = complex(np.sum(w * vals * np.conj(y)))
            w_hat = complex(np.sum(w * conorm * np.conj(y)))
            trace[(n, m)] = (v_hat, w_hat)
    t, c = _sphere_multiplier_norm(trace, radius)
    return NormReport(value=t + c, parts={"trace": t, "conormal": c},
                      method="quadrature",
                      params={"radius": radius, "quad_order": quad_order,
                              "n_project": n_project})


def check_helmholtz_3sphere(v, r1: float, r2: float, r3: float):
    """Both sides of the boundary-norm interpolation with the log exponent.

    Returns (lhs, rhs, measured_c) with alpha0 = ln(R3/R2)/ln(R3/R1).
    """
    if not (0 < r1 < r2 < r3):
        raise ValueError("need 0 < r1 < r2 < r3")
    alpha0 = math.log(r3 / r2) / math.log(r3 / r1)
    lhs = hnorm_sphere(v, None, r2).value
    n1 = hnorm_sphere(v, None, r1).value
    n3 = hnorm_sphere(v, None, r3).value
    rhs = n1 ** alpha0 * n3 ** (1.0 - alpha0)
    c = lhs / rhs if rhs > 0 else (math.inf if lhs > 0 else 0.0)
    return lhs, rhs, c
