"""Vector spherical harmonics: normalization, tangency, pole limits."""
import math

import numpy as np
import pytest
from scipy.special import sph_harm_y as scipy_ynm

from calrlab.specfun import sphere_rule, sph_harm_y, vsh


def test_y_against_scipy():
    rng = np.random.default_rng(3)
    for _ in range(40):
        n = int(rng.integers(0, 9))
        m = int(rng.integers(-n, n + 1)) if n else 0
        theta = float(rng.uniform(0.05, math.pi - 0.05))
        phi = float(rng.uniform(0, 2 * math.pi))
        ours = sph_harm_y(n, m, theta, phi)
        ref = scipy_ynm(n, m, theta, phi)
        assert complex(ours) == pytest.approx(complex(ref), rel=1e-12, abs=1e-14)


def test_y10_at_pole():
    # Y_1^0(e3) = sqrt(3/(4 pi)); radial part of the triple points along e3
    val = math.sqrt(3.0 / (4.0 * math.pi))
    t = vsh(1, 0, np.array([0.0, 0.0, 1.0]))
    assert np.allclose(t.radial, val * np.array([0, 0, 1.0]), atol=1e-13)


def test_tangency_and_rotation():
    rng = np.random.default_rng(11)
    for _ in range(30):
        d = rng.standard_normal(3)
        d /= np.linalg.norm(d)
        n = int(rng.integers(1, 7))
        m = int(rng.integers(-n, n + 1))
        t = vsh(n, m, d)
        assert abs(np.dot(t.gradient_tangent, d)) < 1e-12
        assert abs(np.dot(t.rotated_tangent, d)) < 1e-12
        assert np.allclose(np.cross(d, t.gradient_tangent), t.rotated_tangent, atol=1e-12)
        # radial part parallel to d
        assert np.linalg.norm(np.cross(t.radial.real, d)) < 1e-12
        assert np.linalg.norm(np.cross(t.radial.imag, d)) < 1e-12


def test_conjugation_parity():
    # conj(Y_n^m) = (-1)^m Y_n^{-m}, and likewise for the tangential fields
    rng = np.random.default_rng(5)
    for _ in range(20):
        d = rng.standard_normal(3)
        d /= np.linalg.norm(d)
        n = int(rng.integers(1, 6))
        m = int(rng.integers(1, n + 1))
        a = vsh(n, m, d)
        b = vsh(n, -m, d)
        s = (-1.0) ** m
        assert np.allclose(np.conj(a.radial), s * b.radial, atol=1e-12)
        assert np.allclose(np.conj(a.gradient_tangent), s * b.gradient_tangent, atol=1e-12)
        assert np.allclose(np.conj(a.rotated_tangent), s * b.rotated_tangent, atol=1e-12)


def _gram_matrix(nmax, order):
    from calrlab.specfun import vsh_table
    _, w, th, ph = sphere_rule(order)
    table = vsh_table(nmax, th, ph)
    fields = [f for key in sorted(table) for f in table[key]]
    stack = np.stack(fields)                      # (K, N, 3)
    weighted = stack * w[None, :, None]
    return np.einsum("inc,jnc->ij", weighted, np.conj(stack))


def test_orthonormality_gram_n_le_2():
    # 50th-order product quadrature, (n,m) in {1,2} x {-n..n}: identity to 1e-8
    g = _gram_matrix(2, 50)
    assert np.max(np.abs(g - np.eye(g.shape[0]))) < 1e-8


def test_orthonormality_gram_n_le_8():
    g = _gram_matrix(8, 60)
    assert np.max(np.abs(g - np.eye(g.shape[0]))) < 1e-8


def test_pole_limits_match_interior_limit():
    # approach the pole along a meridian; values must converge to the pole value
    for n, m in [(1, 1), (2, 1), (3, -1), (4, 2)]:
        at_pole = vsh(n, m, np.array([0.0, 0.0, 1.0]))
        near = vsh(n, m, np.array([math.sin(1e-7), 0.0, math.cos(1e-7)]))
        assert np.allclose(at_pole.gradient_tangent, near.gradient_tangent, atol=1e-5)
        assert np.allclose(at_pole.rotated_tangent, near.rotated_tangent, atol=1e-5)


def test_sphere_rule_weights():
    pts, w, _, _ = sphere_rule(20)
    assert np.sum(w) == pytest.approx(4 * math.pi, rel=1e-13)
    assert np.allclose(np.linalg.norm(pts, axis=1), 1.0, atol=1e-14)
    # integrates x^2 exactly: 4 pi / 3
    assert np.sum(w * pts[:, 0] ** 2) == pytest.approx(4 * math.pi / 3, rel=1e-12)


def test_vsh_table_matches_scalar_path():
    from calrlab.specfun import vsh_table
    rng = np.random.default_rng(17)
    d = rng.standard_normal((6, 3))
    d /= np.linalg.norm(d, axis=1)[:, None]
    th = np.arccos(d[:, 2])
    ph = np.arctan2(d[:, 1], d[:, 0])
    table = vsh_table(3, th, ph)
    for (n, m), (rad, grad, rot) in table.items():
        for i in range(len(d)):
            t = vsh(n, m, d[i])
            assert np.allclose(rad[i], t.radial, atol=1e-13)
            assert np.allclose(grad[i], t.gradient_tangent, atol=1e-13)
            assert np.allclose(rot[i], t.rotated_tangent, atol=1e-13)
