"""Modal norms, far-field flux, and the lossy-layer energy functional.

Vector-harmonic orthonormality collapses every angular integral, so L2 norms
over annuli reduce to 1-D radial quadratures of the six component functions,
and the far-field power to a closed-form sum over outgoing coefficients.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..specfun.bessel import log_dfact_minus
from .modes import TE
from .solver import FieldSolution
from .fields import eval_field, mode_radial_components

_LN10 = math.log(10.0)


def adaptive_gauss(fn, a: float, b: float, rel_tol: float = 1e-8,
                   order: int = 16, max_doublings: int = 10) -> float:
    """Panel-doubling Gauss-Legendre quadrature of a vectorized integrand."""
    if b <= a:
        return 0.0
    nodes, weights = np.polynomial.legendre.leggauss(order)
    prev = None
    panels = 1
    for _ in range(max_doublings + 1):
        total = 0.0
        edges = np.linspace(a, b, panels + 1)
        for lo, hi in zip(edges[:-1], edges[1:]):
            mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
            total += half * float(np.sum(weights * fn(mid + half * nodes)))
        if prev is not None and abs(total - prev) <= rel_tol * max(abs(total), 1e-300):
            return total
        prev = total
        panels *= 2
    return prev


def _mode_weights(sol: FieldSolution) -> dict:
    """(n, pol) -> sum over m of |amplitude|^2 (the m-degeneracy collapse)."""
    w = {}
    for key, amp in sol.amplitudes.items():
        w[(key.n, key.pol)] = w.get((key.n, key.pol), 0.0) + abs(amp) ** 2
    return w


def _segments(sol: FieldSolution, a: float, b: float):
    cuts = sorted({a, b} | {reg.r_hi for reg in sol.regions if a < reg.r_hi < b}
                  | {reg.r_lo for reg in sol.regions if a < reg.r_lo < b})
    return list(zip(cuts[:-1], cuts[1:]))


def _component_density(sol: FieldSolution, weights, parts, select=None):
    """r -> sum over modes of weighted squared component magnitudes."""

    def density(r):
        r = np.atleast_1d(r)
        idx = sol.region_index(float(r[0]))
        out = np.zeros_like(r, dtype=float)
        for (n, pol), w in weights.items():
            rs = sol.radial[(n, pol)]
            comps = mode_radial_components(rs.regions[idx], pol, rs.coeffs[idx],
                                           n, r, sol.omega)
            e_y, e_u, e_v, h_y, h_u, h_v = comps
            acc = np.zeros_like(r, dtype=float)
            if "E" in parts:
                if select is None:
                    acc += np.abs(e_y) ** 2 + np.abs(e_u) ** 2 + np.abs(e_v) ** 2
                else:
                    acc += (select[0] * np.abs(e_y) ** 2
                            + select[1] * (np.abs(e_u) ** 2 + np.abs(e_v) ** 2))
            if "H" in parts:
                if select is None:
                    acc += np.abs(h_y) ** 2 + np.abs(h_u) ** 2 + np.abs(h_v) ** 2
                else:
                    acc += (select[2] * np.abs(h_y) ** 2
                            + select[3] * (np.abs(h_u) ** 2 + np.abs(h_v) ** 2))
            out += w * acc
        return out * r * r

    return density


def l2_norm_annulus(sol: FieldSolution, a: float, b: float, parts: str = "EH",
                    rel_tol: float = 1e-8) -> float:
    """Exact modal L2 norm of the selected fields over a < |x| < b."""
    if not (0 <= a < b):
        raise ValueError("need 0 <= a < b")
    weights = _mode_weights(sol)
    total = 0.0
    for lo, hi in _segments(sol, a, b):
        total += adaptive_gauss(_component_density(sol, weights, parts), lo, hi,
                                rel_tol=rel_tol)
    return math.sqrt(max(total, 0.0))


def l2_norm_annulus_diff(sol_a: FieldSolution, sol_b: FieldSolution,
                         a: float, b: float, rel_tol: float = 1e-8) -> float:
    """L2 norm of the difference of two solves over an annulus.

    Valid where both media agree (used in vacuum observation regions);
    the sources must carry identical amplitude tables.
    """
    if set(sol_a.amplitudes) != set(sol_b.amplitudes):
        raise ValueError("difference norm needs identical source tables")
    for key, amp in sol_a.amplitudes.items():
        if abs(amp - sol_b.amplitudes[key]) > 1e-14 * max(1.0, abs(amp)):
            raise ValueError("difference norm needs identical source tables")
    weights = _mode_weights(sol_a)
    cuts = sorted({a, b}
                  | {r.r_hi for r in sol_a.regions if a < r.r_hi < b}
                  | {r.r_hi for r in sol_b.regions if a < r.r_hi < b})
    total = 0.0
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        mid = 0.5 * (lo + hi)
        ia, ib = sol_a.region_index(mid), sol_b.region_index(mid)

        def density(r, ia=ia, ib=ib):
            r = np.atleast_1d(r)
            out = np.zeros_like(r, dtype=float)
            for (n, pol), w in weights.items():
                ra, rb = sol_a.radial[(n, pol)], sol_b.radial[(n, pol)]
                rega, regb = ra.regions[ia], rb.regions[ib]
                for attr in ("eps_rad", "eps_tan", "mu_rad", "mu_tan"):
                    if abs(getattr(rega, attr) - getattr(regb, attr)) > 1e-12:
                        raise ValueError("media differ on the comparison annulus")
                ca, cb = ra.coeffs[ia].as_jy(), rb.coeffs[ib].as_jy()
                diff_cj = ca.c_j - cb.c_j
                diff_cy = ca.c_y - cb.c_y
                from .solver import RegionCoeffs
                dcoef = RegionCoeffs(nu=ca.nu, k=ca.k, c_j=diff_cj, c_y=diff_cy)
                comps = mode_radial_components(rega, pol, dcoef, n, r, sol_a.omega)
                out += w * sum(np.abs(c) ** 2 for c in comps)
            return out * r * r

        total += adaptive_gauss(density, lo, hi, rel_tol=rel_tol)
    return math.sqrt(max(total, 0.0))


def farfield_flux(sol: FieldSolution) -> float:
    """Im I(H) = omega * lim_R int_{|x|=R} |H|^2, in closed modal form.

    Each outgoing mode contributes |c_h|^2 / (omega (2n-1)!!)^2 per unit
    squared amplitude; requires a vacuum outermost layer.
    """
    reg = sol.regions[-1]
    if abs(reg.eps_tan - 1) > 1e-12 or abs(reg.mu_tan - 1) > 1e-12:
        raise ValueError("far-field flux requires a vacuum exterior")
    weights = _mode_weights(sol)
    total = 0.0
    for (n, pol), w in weights.items():
        c = sol.radial[(n, pol)].coeffs[-1]
        if not c.outgoing:
            raise ValueError("outermost region is not outgoing")
        log_amp = (c.c_y.log10_abs()[0] - log_dfact_minus(c.nu) / _LN10
                   - math.log10(sol.omega))
        total += w * 10.0 ** (2.0 * log_amp)
    return sol.omega * total


@dataclass
class DataReport:
    """Data(J, delta) and the pieces entering it, plus the energy-identity check."""

    value: float
    pairing_im: float          # Im of i omega int J . conj(E)
    flux_im: float             # Im I(H)
    j_norm_sq: float
    delta: float
    lossy_norm_weighted: float  # omega^2 * int Im-weighted (|E|^2+|H|^2) / delta
    shell_norm_sq: float

    @property
    def energy_ratio(self) -> float:
        """(1/delta)|pairing + flux| over the weighted lossy-layer norm; exact
        closure of the divergence identity makes this 1."""
        num = abs(self.pairing_im + self.flux_im) / self.delta
        return num / max(self.lossy_norm_weighted, 1e-300)

    @property
    def stability_ratio(self) -> float:
        """Shell L2 norm squared over Data (the measured constant of the
        a-priori bound)."""
        return self.shell_norm_sq / max(self.value, 1e-300)


def _source_pairing(sol: FieldSolution) -> complex:
    """int J . conj(E) over the sheet, by modal orthonormality."""
    r_s = sol.source.radius
    idx = sol.region_index(r_s)
    pairing = 0.0 + 0.0j
    for key, amp in sol.amplitudes.items():
        rs = sol.radial[(key.n, key.pol)]
        comps = mode_radial_components(rs.regions[idx], key.pol, rs.coeffs[idx],
                                       key.n, np.array([r_s]), sol.omega)
        e_y, e_u, e_v, _, _, _ = comps
        if key.pol == TE:
            e_comp = amp * 1.0 * e_v[0]        # sheet along Vtilde
        else:
            e_comp = amp * (-1.0) * e_u[0]     # sheet along Utilde
        pairing += r_s * r_s * amp * np.conj(e_comp)
    return complex(pairing)


def _lossy_weighted_norm_sq(sol: FieldSolution, delta: float,
                            rel_tol: float = 1e-8) -> float:
    """omega^2/delta * int of Im(coef)-weighted squared components over lossy layers."""
    weights = _mode_weights(sol)
    total = 0.0
    for i, reg in enumerate(sol.regions):
        ims = (reg.eps_rad.imag, reg.eps_tan.imag, reg.mu_rad.imag, reg.mu_tan.imag)
        if max(ims) <= 0:
            continue
        if math.isinf(reg.r_hi):
            raise ValueError("lossy exterior is not supported")
        select = tuple(v / delta for v in ims)

        def density_fixed(r, idx=i, select=select):
            r = np.atleast_1d(r)
            out = np.zeros_like(r, dtype=float)
            for (n, pol), w in weights.items():
                rs = sol.radial[(n, pol)]
                e_y, e_u, e_v, h_y, h_u, h_v = mode_radial_components(
                    rs.regions[idx], pol, rs.coeffs[idx], n, r, sol.omega)
                acc = (select[0] * np.abs(e_y) ** 2
                       + select[1] * (np.abs(e_u) ** 2 + np.abs(e_v) ** 2)
                       + select[2] * np.abs(h_y) ** 2
                       + select[3] * (np.abs(h_u) ** 2 + np.abs(h_v) ** 2))
                out += w * acc
            return out * r * r

        total += adaptive_gauss(density_fixed, reg.r_lo, reg.r_hi, rel_tol=rel_tol)
    return sol.omega ** 2 * total


def data_quantity(sol: FieldSolution, delta: float,
                  shell: tuple[float, float] | None = None) -> DataReport:
    """The scalar Data(J, delta) plus its energy-identity diagnostics.

    Data = (1/delta) |Im int i omega J conj(E) + Im I(H)| + ||J||^2, with the
    sheet pairing realized at the source radius.  The companion stability
    check exposes the measured ratio ||(E,H)||^2_shell / Data.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    pairing = _source_pairing(sol)
    pairing_im = (1j * sol.omega * pairing).imag
    flux = farfield_flux(sol)
    j_sq = sol.source.l2_norm_sq()
    value = abs(pairing_im + flux) / delta + j_sq
    if shell is None:
        prov = sol.medium.provenance
        shell = (prov.get("r1", 0.0), prov.get("r2", 0.0))
    shell_sq = (l2_norm_annulus(sol, shell[0], shell[1]) ** 2
                if shell[1] > shell[0] else 0.0)
    weighted = _lossy_weighted_norm_sq(sol, delta)
    return DataReport(value=value, pairing_im=pairing_im, flux_im=flux,
                      j_norm_sq=j_sq, delta=delta,
                      lossy_norm_weighted=weighted, shell_norm_sq=shell_sq)


_LEVI = []
for a in range(3):
    m = np.zeros((3, 3))
    for b in range(3):
        for c in range(3):
            perm = {(0, 1, 2): 1, (1, 2, 0): 1, (2, 0, 1): 1,
                    (0, 2, 1): -1, (2, 1, 0): -1, (1, 0, 2): -1}
            m[b, c] = perm.get((a, b, c), 0)
    _LEVI.append(m)


def second_order_residual(sol: FieldSolution, a: int, samples,
                          h: float = 1e-3) -> float:
    """FD residual of the weakly coupled second-order form for component a.

    div(eps grad E_a) + div(d_a eps E + i omega eps LC^a mu H) should vanish;
    LC^a is the Levi-Civita slice.  Samples must sit inside one layer, at
    least 2h from its interfaces.
    """
    if a not in (0, 1, 2):
        raise ValueError("component index must be 0, 1 or 2")
    lc = _LEVI[a]

    def eps_at(x):
        return sol.medium.tensors_at(x)[0]

    def mu_at(x):
        return sol.medium.tensors_at(x)[1]

    def vec_field(x):
        e, hfld = eval_field(sol, x)
        grad_ea = np.zeros(3, dtype=complex)
        for k in range(3):
            dx = np.zeros(3)
            dx[k] = h
            grad_ea[k] = (eval_field(sol, x + dx)[0][a]
                          - eval_field(sol, x - dx)[0][a]) / (2 * h)
        eps = eps_at(x)
        deps = np.zeros((3, 3), dtype=complex)
        dx = np.zeros(3)
        dx[a] = h
        deps = (eps_at(x + dx) - eps_at(x - dx)) / (2 * h)
        return eps @ grad_ea + deps @ e + 1j * sol.omega * (eps @ lc @ mu_at(x) @ hfld)

    worst = 0.0
    for x in np.atleast_2d(np.asarray(samples, dtype=float)):
        r = float(np.linalg.norm(x))
        idx = sol.region_index(r)
        reg = sol.regions[idx]
        if r - 2 * h < reg.r_lo or (not math.isinf(reg.r_hi) and r + 2 * h > reg.r_hi):
            raise ValueError(f"sample at radius {r} too close to an interface")
        div = 0.0 + 0.0j
        for k in range(3):
            dx = np.zeros(3)
            dx[k] = h
            div += (vec_field(x + dx)[k] - vec_field(x - dx)[k]) / (2 * h)
        worst = max(worst, abs(div))
    return worst
