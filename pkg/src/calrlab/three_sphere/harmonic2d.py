"""Planar harmonic expansions, circle sup norms, and the three-circle check."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class HarmonicExpansion2D:
    """Finite combination of r^{|k|} e^{ik theta} and r^{-|k|} e^{ik theta}.

    `regular` holds the r^{|k|} coefficients, `singular` the r^{-|k|} ones,
    both keyed by the integer frequency k.
    """

    regular: dict = field(default_factory=dict)
    singular: dict = field(default_factory=dict)

    @classmethod
    def holomorphic(cls, coeffs) -> "HarmonicExpansion2D":
        """v(z) = sum_k c_k z^k from a coefficient sequence (k >= 0)."""
        return cls(regular={k: complex(c) for k, c in enumerate(coeffs)
                            if c != 0 or k == 0})

    @property
    def is_holomorphic(self) -> bool:
        return not self.singular and all(k >= 0 for k in self.regular)

    def value(self, r, theta) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        theta = np.asarray(theta, dtype=float)
        out = np.zeros(np.broadcast(r, theta).shape, dtype=complex)
        for k, c in self.regular.items():
            out = out + c * r ** abs(k) * np.exp(1j * k * theta)
        for k, c in self.singular.items():
            out = out + c * r ** (-abs(k)) * np.exp(1j * k * theta)
        return out

    def circle_coeffs(self, radius: float) -> dict:
        """Fourier coefficients of the trace on |z| = radius."""
        out = {}
        for k, c in self.regular.items():
            out[k] = out.get(k, 0.0) + c * radius ** abs(k)
        for k, c in self.singular.items():
            out[k] = out.get(k, 0.0) + c * radius ** (-abs(k))
        return out

    def radial_derivative_coeffs(self, radius: float) -> dict:
        out = {}
        for k, c in self.regular.items():
            out[k] = out.get(k, 0.0) + c * abs(k) * radius ** (abs(k) - 1)
        for k, c in self.singular.items():
            out[k] = out.get(k, 0.0) - c * abs(k) * radius ** (-abs(k) - 1)
        return out


def _top_candidates(prof, theta, n, how_many=4):
    order = np.argsort(prof)[::-1]
    cands = []
    taken = []
    for idx in order:
        if all(min(abs(idx - t), n - abs(idx - t)) > 3 for t in taken):
            taken.append(idx)
            cands.append(theta[idx])
        if len(cands) >= how_many:
            break
    return np.asarray(cands)


def sup_norm_circle(v: HarmonicExpansion2D, radius: float,
                    coarse: int | None = None, refine_iters: int = 32) -> float:
    """L-infinity norm of v on |z| = radius to ~1e-10 relative.

    Dense sampling locates the global maximum of the trigonometric profile;
    batched golden-section refinement polishes the best candidates.  For a
    holomorphic polynomial the circle profile is a single polyval.
    """
    ks = set(v.regular) | set(v.singular)
    kmax = max((abs(k) for k in ks), default=0)
    n = coarse if coarse is not None else max(512, 64 * (kmax + 1))
    theta = 2.0 * math.pi * np.arange(n) / n
    if v.is_holomorphic:
        poly = np.zeros(kmax + 1, dtype=complex)
        for k, c in v.regular.items():
            poly[kmax - k] = c

        def profile(th):
            return np.abs(np.polyval(poly, radius * np.exp(1j * th)))
    else:
        def profile(th):
            return np.abs(v.value(radius, th))

    prof = profile(theta)
    cands = _top_candidates(prof, theta, n, how_many=3)
    best = float(prof.max())
    # golden-section in lockstep over all candidate intervals
    gr = (math.sqrt(5.0) - 1.0) / 2.0
    h = 2.0 * math.pi / n
    a = cands - h
    b = cands + h
    xa = a + (1 - gr) * (b - a)
    xb = a + gr * (b - a)
    fa = profile(xa)
    fb = profile(xb)
    for _ in range(refine_iters):
        left = fa >= fb                      # maximum in [a, xb] else [xa, b]
        xa_old, fa_old = xa, fa
        b = np.where(left, xb, b)
        a = np.where(left, a, xa_old)
        xa_fresh = a + (1 - gr) * (b - a)
        xb_fresh = a + gr * (b - a)
        xa = np.where(left, xa_fresh, xb)
        xb = np.where(left, xa_old, xb_fresh)
        fresh = profile(np.where(left, xa_fresh, xb_fresh))
        fa = np.where(left, fresh, fb)
        fb = np.where(left, fa_old, fresh)
        if np.max(b - a) < 1e-13:
            break
    return max(best, float(fa.max()), float(fb.max()))


def check_hadamard(v: HarmonicExpansion2D, r1: float, r2: float, r3: float):
    """Three-circle interpolation of sup norms for a holomorphic v.

    Returns (lhs, rhs, alpha, ratio) with alpha = ln(R3/R2)/ln(R3/R1);
    ratio <= 1 for holomorphic input, with equality for monomials.
    """
    if not (0 < r1 < r2 < r3):
        raise ValueError("need 0 < r1 < r2 < r3")
    if not v.is_holomorphic:
        raise ValueError("the sup-norm interpolation needs a holomorphic input")
    alpha = math.log(r3 / r2) / math.log(r3 / r1)
    lhs = sup_norm_circle(v, r2)
    n1 = sup_norm_circle(v, r1)
    n3 = sup_norm_circle(v, r3)
    rhs = n1 ** alpha * n3 ** (1.0 - alpha)
    ratio = lhs / rhs if rhs > 0 else math.inf if lhs > 0 else 1.0
    return lhs, rhs, alpha, ratio
