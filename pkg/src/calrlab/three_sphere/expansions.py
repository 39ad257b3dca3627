"""Scalar expansions on annuli: Helmholtz and harmonic, 3-D and planar."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..specfun.bessel import sph_jy
from ..specfun.cylinder import cylinder_jy_with_derivatives
from ..specfun.vsh import pbar_tau_pi

HELMHOLTZ = "helmholtz"
HARMONIC = "harmonic"


@dataclass(frozen=True)
class SphericalExpansion:
    """v = sum c_reg f_n(r) Y_n^m + c_sing g_n(r) Y_n^m on an annulus.

    kind "helmholtz": (f, g) = (j_n(omega r), y_n(omega r)), so
    Delta v + omega^2 v = 0 exactly; kind "harmonic": (r^n, r^{-n-1}).
    """

    kind: str
    coeffs: dict                      # (n, m) -> (c_reg, c_sing)
    omega: float = 1.0

    def __post_init__(self):
        if self.kind not in (HELMHOLTZ, HARMONIC):
            raise ValueError(f"unknown kind {self.kind!r}")
        if self.kind == HELMHOLTZ and self.omega <= 0:
            raise ValueError("helmholtz expansion needs omega > 0")
        for (n, m) in self.coeffs:
            if n < 0 or abs(m) > n:
                raise ValueError(f"bad mode ({n}, {m})")

    @property
    def n_max(self) -> int:
        return max((n for n, _ in self.coeffs), default=0)

    def radial(self, n: int, r) -> tuple[np.ndarray, np.ndarray]:
        """(f_nm-combined radial factor, its r-derivative) for unit coefficients.

        Returns the pair of basis values (regular, singular) stacked as
        ((f, f'), (g, g')) evaluated on the r array.
        """
        r = np.atleast_1d(np.asarray(r, dtype=float))
        if self.kind == HARMONIC:
            f = r ** n
            df = n * r ** (n - 1) if n > 0 else np.zeros_like(r)
            g = r ** (-n - 1)
            dg = -(n + 1) * r ** (-n - 2)
            return (f, df), (g, dg)
        vals = sph_jy(float(n), self.omega * r)
        f = vals["j"].to_complex().real
        df = self.omega * vals["dj"].to_complex().real
        g = vals["y"].to_complex().real
        dg = self.omega * vals["dy"].to_complex().real
        return (f, df), (g, dg)

    def trace_coeffs(self, radius: float) -> dict:
        """(n, m) -> (v_hat, dv_dr_hat): modal trace and radial derivative."""
        out = {}
        cache = {}
        for (n, m), (c_reg, c_sing) in self.coeffs.items():
            if n not in cache:
                cache[n] = self.radial(n, radius)
            (f, df), (g, dg) = cache[n]
            out[(n, m)] = (c_reg * f[0] + c_sing * g[0],
                           c_reg * df[0] + c_sing * dg[0])
        return out

    def value(self, x) -> complex:
        return self._eval(x, want_grad=False)[0]

    def gradient(self, x) -> np.ndarray:
        return self._eval(x, want_grad=True)[1]

    def value_and_gradient_many(self, points):
        """Vectorized (values, gradients) over an (N, 3) point array."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        r = np.linalg.norm(pts, axis=1)
        theta = np.arccos(np.clip(pts[:, 2] / r, -1, 1))
        phi = np.arctan2(pts[:, 1], pts[:, 0])
        st, ct = np.sin(theta), np.cos(theta)
        sp, cp = np.sin(phi), np.cos(phi)
        xhat = np.stack([st * cp, st * sp, ct], axis=-1)
        theta_hat = np.stack([ct * cp, ct * sp, -st], axis=-1)
        phi_hat = np.stack([-sp, cp, np.zeros_like(sp)], axis=-1)
        vals = np.zeros(len(pts), dtype=complex)
        grads = np.zeros((len(pts), 3), dtype=complex)
        nmax = self.n_max
        rad_cache = {}
        leg_cache = {}
        for (n, m), (c_reg, c_sing) in self.coeffs.items():
            if n not in rad_cache:
                rad_cache[n] = self.radial(n, r)
            (f, df), (g, dg) = rad_cache[n]
            fr = c_reg * f + c_sing * g
            dfr = c_reg * df + c_sing * dg
            if m not in leg_cache:
                leg_cache[m] = pbar_tau_pi(nmax, m, theta)
            pbar, tau, pi_m = leg_cache[m]
            idx = n - abs(m)
            eimp = np.exp(1j * m * phi)
            y = pbar[idx] * eimp
            vals += fr * y
            # grad = f' Y xhat + (f/r) grad_S Y
            gs = eimp[:, None] * (tau[idx][:, None] * theta_hat
                                  + 1j * pi_m[idx][:, None] * phi_hat)
            grads += (dfr * y)[:, None] * xhat + (fr / r)[:, None] * gs
        return vals, grads

    def _eval(self, x, want_grad: bool):
        vals, grads = self.value_and_gradient_many(np.asarray(x, dtype=float)[None, :])
        return complex(vals[0]), grads[0]

    def annulus_norm_sq(self, a: float, b: float, include_gradient: bool,
                        quad_order: int = 64) -> float:
        """Exact modal squared L2 (or H1 seminorm-augmented) norm on a < r < b."""
        nodes, weights = np.polynomial.legendre.leggauss(quad_order)
        rr = 0.5 * (a + b) + 0.5 * (b - a) * nodes
        wr = 0.5 * (b - a) * weights
        total = 0.0
        cache = {}
        for (n, m), (c_reg, c_sing) in self.coeffs.items():
            if n not in cache:
                cache[n] = self.radial(n, rr)
            (f, df), (g, dg) = cache[n]
            fr = c_reg * f + c_sing * g
            dfr = c_reg * df + c_sing * dg
            dens = np.abs(fr) ** 2
            if include_gradient:
                dens = dens + np.abs(dfr) ** 2 + n * (n + 1) * np.abs(fr / rr) ** 2
            total += float(np.sum(wr * dens * rr * rr))
        return total


@dataclass(frozen=True)
class PlanarHelmholtzExpansion:
    """v = sum_k (a_k J_k(omega r) + b_k Y_k(omega r)) e^{ik theta} on an annulus."""

    coeffs: dict                      # k >= 0 -> (a_k, b_k); negative k allowed
    omega: float = 1.0

    @property
    def k_max(self) -> int:
        return max((abs(k) for k in self.coeffs), default=0)

    def circle_trace(self, radius: float) -> dict:
        j, dj, y, dy = cylinder_jy_with_derivatives(self.k_max, self.omega * radius)
        out = {}
        for k, (a, b) in self.coeffs.items():
            ka = abs(k)
            out[k] = (a * j[ka] + b * y[ka],
                      self.omega * (a * dj[ka] + b * dy[ka]))
        return out
