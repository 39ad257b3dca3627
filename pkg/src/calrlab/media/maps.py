"""Diffeomorphisms with analytic Jacobians: Kelvin, power-law, linear, compositions."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np


@dataclass(frozen=True)
class SmoothMap:
    """A diffeomorphism with closed-form forward, inverse and Jacobian."""

    forward: Callable[[np.ndarray], np.ndarray]
    inverse: Callable[[np.ndarray], np.ndarray]
    jacobian: Callable[[np.ndarray], np.ndarray]
    label: str = "map"
    params: dict = field(default_factory=dict)

    def __call__(self, x):
        return self.forward(np.asarray(x, dtype=float))

    def jacobian_det(self, x):
        return float(np.linalg.det(self.jacobian(np.asarray(x, dtype=float))))


def identity_map() -> SmoothMap:
    eye = np.eye(3)
    return SmoothMap(forward=lambda x: np.asarray(x, dtype=float),
                     inverse=lambda x: np.asarray(x, dtype=float),
                     jacobian=lambda x: eye.copy(),
                     label="identity")


def linear_map(matrix) -> SmoothMap:
    a = np.asarray(matrix, dtype=float)
    if abs(np.linalg.det(a)) < 1e-300:
        raise ValueError("linear map must be invertible")
    ainv = np.linalg.inv(a)
    return SmoothMap(forward=lambda x: a @ np.asarray(x, dtype=float),
                     inverse=lambda y: ainv @ np.asarray(y, dtype=float),
                     jacobian=lambda x: a.copy(),
                     label="linear", params={"matrix": a.tolist()})


def power_map(r2: float, p: float) -> SmoothMap:
    """x -> r2^p x / |x|^p.  p = 2 is the Kelvin transform w.r.t. |x| = r2.

    The inverse is the power map with exponent q = p/(p-1) and radius
    r2^(p/p... ) chosen so the pair exchanges B_{r2} and its exterior.
    """
    if p <= 1:
        raise ValueError("power map requires p > 1")
    if r2 <= 0:
        raise ValueError("power map requires r2 > 0")
    c = r2 ** p
    q = p / (p - 1.0)
    ci = r2 ** q

    def fwd(x):
        x = np.asarray(x, dtype=float)
        r = np.linalg.norm(x)
        if r == 0:
            raise ZeroDivisionError("power map undefined at the origin")
        return c * x / r ** p

    def inv(y):
        y = np.asarray(y, dtype=float)
        r = np.linalg.norm(y)
        if r == 0:
            raise ZeroDivisionError("power map inverse undefined at the origin")
        return ci * y / r ** q

    def jac(x):
        x = np.asarray(x, dtype=float)
        r = np.linalg.norm(x)
        if r == 0:
            raise ZeroDivisionError("power map Jacobian undefined at the origin")
        xh = x / r
        return (c / r ** p) * (np.eye(3) - p * np.outer(xh, xh))

    return SmoothMap(forward=fwd, inverse=inv, jacobian=jac,
                     label="power", params={"r2": r2, "p": p})


def kelvin_map(radius: float) -> SmoothMap:
    """Sphere inversion x -> radius^2 x / |x|^2 (self-inverse)."""
    m = power_map(radius, 2.0)
    return SmoothMap(forward=m.forward, inverse=m.inverse, jacobian=m.jacobian,
                     label="kelvin", params={"radius": radius})


def compose(outer: SmoothMap, inner: SmoothMap) -> SmoothMap:
    """outer after inner, with the chain-rule Jacobian."""

    def fwd(x):
        return outer.forward(inner.forward(x))

    def inv(y):
        return inner.inverse(outer.inverse(y))

    def jac(x):
        xin = inner.forward(x)
        return outer.jacobian(xin) @ inner.jacobian(x)

    return SmoothMap(forward=fwd, inverse=inv, jacobian=jac,
                     label="composition",
                     params={"outer": outer.label, "inner": inner.label})


def check_inverse(mapping: SmoothMap, points, tol: float = 1e-10) -> float:
    """Max |inverse(forward(x)) - x| over sample points (invariant check)."""
    worst = 0.0
    for x in np.atleast_2d(points):
        worst = max(worst, float(np.linalg.norm(mapping.inverse(mapping.forward(x)) - x)))
    if worst > tol:
        raise ValueError(f"map {mapping.label} fails round-trip check: {worst}")
    return worst
