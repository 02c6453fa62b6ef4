"""Tests for the elliptic integral and Jacobi function core.

Derived expected values are checked against independent quadrature of the
defining integrals (scipy.integrate.quad), never against the
implementation itself.
"""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from confwarp import (
    DomainError,
    complete_K,
    incomplete_F_complex,
    incomplete_F_real,
    jacobi_real,
    jacobi_sn_dn_complex,
)

# Frozen oracle values from adaptive quadrature of the defining integrand
# (recomputed below where cheap).
K_HALF = 1.8540746773013719
F_ONE_HALF = 1.083216772845169
F_COMPLEX_ORACLE = 0.49018959091467906 + 0.41969438293231454j


def quad_F(phi: float, m: float) -> float:
    val, _ = quad(lambda t: 1.0 / math.sqrt(1.0 - m * math.sin(t) ** 2),
                  0.0, phi, epsabs=1e-13, epsrel=1e-13)
    return val


def quad_F_complex(z: complex, m: float) -> complex:
    def integrand(t):
        return z / np.sqrt(1.0 - m * np.sin(t * z) ** 2)

    re, _ = quad(lambda t: integrand(t).real, 0.0, 1.0, epsabs=1e-12, epsrel=1e-12)
    im, _ = quad(lambda t: integrand(t).imag, 0.0, 1.0, epsabs=1e-12, epsrel=1e-12)
    return complex(re, im)


class TestCompleteK:
    def test_zero_parameter(self):
        assert complete_K(0.0) == pytest.approx(math.pi / 2.0, abs=1e-15)

    def test_half_matches_quadrature(self):
        oracle = quad_F(math.pi / 2.0, 0.5)
        assert oracle == pytest.approx(K_HALF, abs=1e-13)
        assert complete_K(0.5) == pytest.approx(oracle, abs=1e-11)

    def test_matches_quadrature_across_parameters(self):
        for m in (0.1, 0.3, 0.5, 0.7, 0.9):
            assert complete_K(m) == pytest.approx(quad_F(math.pi / 2.0, m), abs=1e-11)

    def test_equals_incomplete_at_half_pi(self):
        assert abs(complete_K(0.5) - incomplete_F_real(math.pi / 2.0, 0.5)) < 1e-14

    def test_strictly_increasing(self):
        vals = [complete_K(m) for m in np.linspace(0.0, 0.95, 20)]
        assert all(b > a for a, b in zip(vals, vals[1:]))

    @pytest.mark.parametrize("m", [1.0, 1.5, -0.1])
    def test_rejects_bad_parameter(self, m):
        with pytest.raises(DomainError):
            complete_K(m)


class TestIncompleteFReal:
    def test_zero_amplitude(self):
        assert incomplete_F_real(0.0, 0.5) == 0.0

    def test_zero_parameter_is_identity(self):
        assert incomplete_F_real(math.pi / 4.0, 0.0) == pytest.approx(math.pi / 4.0, abs=1e-15)

    def test_matches_quadrature(self):
        oracle = quad_F(1.0, 0.5)
        assert oracle == pytest.approx(F_ONE_HALF, abs=1e-12)
        assert float(incomplete_F_real(1.0, 0.5)) == pytest.approx(oracle, abs=1e-10)

    def test_oddness(self):
        rng = np.random.default_rng(11)
        phi = rng.uniform(0.0, 4.0, 500)
        res = incomplete_F_real(-phi, 0.5) + incomplete_F_real(phi, 0.5)
        assert np.max(np.abs(res)) < 1e-12

    def test_quasi_periodicity(self):
        rng = np.random.default_rng(12)
        phi = rng.uniform(-2.0, 2.0, 200)
        m = 0.3
        res = incomplete_F_real(phi + math.pi, m) - incomplete_F_real(phi, m) - 2.0 * complete_K(m)
        assert np.max(np.abs(res)) < 1e-12

    def test_strictly_increasing_in_phi(self):
        phi = np.linspace(-4.0, 4.0, 300)
        vals = np.asarray(incomplete_F_real(phi, 0.7))
        assert np.all(np.diff(vals) > 0.0)

    def test_rejects_bad_parameter(self):
        with pytest.raises(DomainError):
            incomplete_F_real(1.0, 1.0)


class TestJacobiReal:
    def test_zero_argument(self):
        sn, cn, dn = jacobi_real(0.0, 0.5)
        assert float(sn) == 0.0
        assert float(cn) == 1.0
        assert float(dn) == 1.0

    def test_quarter_period(self):
        K = complete_K(0.5)
        sn, cn, dn = jacobi_real(K, 0.5)
        assert float(sn) == pytest.approx(1.0, abs=1e-12)
        assert float(cn) == pytest.approx(0.0, abs=1e-12)
        assert float(dn) == pytest.approx(math.sqrt(0.5), abs=1e-12)

    def test_inverse_relation_with_F(self):
        sn, _, _ = jacobi_real(0.7, 0.3)
        back = incomplete_F_real(math.asin(float(sn)), 0.3)
        assert float(back) == pytest.approx(0.7, abs=1e-10)

    def test_identities_random(self):
        rng = np.random.default_rng(13)
        worst1 = worst2 = 0.0
        for _ in range(1000):
            m = float(rng.uniform(0.05, 0.95))
            K = complete_K(m)
            u = float(rng.uniform(-2.0 * K, 2.0 * K))
            sn, cn, dn = jacobi_real(u, m)
            worst1 = max(worst1, abs(float(sn) ** 2 + float(cn) ** 2 - 1.0))
            worst2 = max(worst2, abs(float(dn) ** 2 + m * float(sn) ** 2 - 1.0))
        assert worst1 < 1e-12
        assert worst2 < 1e-12

    def test_parity(self):
        u = np.linspace(-3.0, 3.0, 101)
        sn_p, cn_p, dn_p = jacobi_real(u, 0.4)
        sn_m, cn_m, dn_m = jacobi_real(-u, 0.4)
        assert np.max(np.abs(sn_p + sn_m)) < 1e-13
        assert np.max(np.abs(cn_p - cn_m)) < 1e-13
        assert np.max(np.abs(dn_p - dn_m)) < 1e-13

    def test_zero_parameter_trig(self):
        u = np.linspace(-2.0, 2.0, 31)
        sn, cn, dn = jacobi_real(u, 0.0)
        assert np.allclose(sn, np.sin(u), atol=1e-15)
        assert np.allclose(cn, np.cos(u), atol=1e-15)
        assert np.allclose(dn, 1.0, atol=0.0)


class TestJacobiComplex:
    def test_real_argument_collapses(self):
        rng = np.random.default_rng(14)
        for m in (0.05, 0.5, 0.95):
            x = rng.uniform(-3.0, 3.0, 400)
            sn_c, dn_c = jacobi_sn_dn_complex(x.astype(complex), m)
            sn_r, _, dn_r = jacobi_real(x, m)
            assert np.max(np.abs(sn_c - sn_r)) < 1e-13
            assert np.max(np.abs(dn_c - dn_r)) < 1e-13

    def test_imaginary_argument_transformation(self):
        m = 0.5
        y = 0.37
        sn, _ = jacobi_sn_dn_complex(1j * y, m)
        s1, c1, _ = jacobi_real(y, 1.0 - m)
        assert complex(sn) == pytest.approx(1j * float(s1) / float(c1), abs=1e-14)

    def test_inversion_oracle_at_sample_point(self):
        # F(arcsin(sn(z)), m) must return z for z in the principal domain
        z = 0.4 + 0.3j
        m = 0.5
        sn, dn = jacobi_sn_dn_complex(z, m)
        back = incomplete_F_complex(np.arcsin(complex(sn)), m)
        assert abs(complex(back) - z) < 1e-10
        # dn is determined by sn through the defining identity
        assert abs(complex(dn) ** 2 + m * complex(sn) ** 2 - 1.0) < 1e-12

    def test_rejects_bad_parameter(self):
        with pytest.raises(DomainError):
            jacobi_sn_dn_complex(0.1 + 0.1j, -0.5)


class TestIncompleteFComplex:
    def test_zero(self):
        assert abs(complex(incomplete_F_complex(0.0 + 0.0j, 0.5))) < 1e-11

    def test_real_argument_collapses(self):
        x = np.linspace(-1.3, 1.3, 41)
        got = np.asarray(incomplete_F_complex(x.astype(complex), 0.5))
        want = np.asarray(incomplete_F_real(x, 0.5))
        assert np.max(np.abs(got.imag)) < 1e-11
        assert np.max(np.abs(got.real - want)) < 1e-10

    def test_matches_path_quadrature(self):
        z = 0.5 + 0.4j
        oracle = quad_F_complex(z, 0.5)
        assert abs(oracle - F_COMPLEX_ORACLE) < 1e-12
        assert abs(complex(incomplete_F_complex(z, 0.5)) - oracle) < 1e-8

    def test_oddness_and_conjugation(self):
        rng = np.random.default_rng(15)
        z = rng.uniform(-0.9, 0.9, 200) + 1j * rng.uniform(-0.9, 0.9, 200)
        F = np.asarray(incomplete_F_complex(z, 0.5))
        assert np.max(np.abs(np.asarray(incomplete_F_complex(-z, 0.5)) + F)) < 1e-10
        assert np.max(np.abs(np.asarray(incomplete_F_complex(np.conj(z), 0.5)) - np.conj(F))) < 1e-10

    def test_sn_recovers_amplitude(self):
        # sn(F(arcsin(w), m), m) = w for principal-domain w
        rng = np.random.default_rng(16)
        w = rng.uniform(-0.6, 0.6, 500) + 1j * rng.uniform(-0.6, 0.6, 500)
        u = np.asarray(incomplete_F_complex(np.arcsin(w), 0.5))
        sn, _ = jacobi_sn_dn_complex(u, 0.5)
        assert np.max(np.abs(sn - w)) < 1e-9

    def test_stable_near_pi_multiples(self):
        # real parts sitting on the cotangent singularities are shifted off,
        # so results stay finite and accurate
        for x0 in (0.0, math.pi, -math.pi):
            z = complex(x0, 0.25)
            got = complex(incomplete_F_complex(z, 0.5))
            assert np.isfinite(got.real) and np.isfinite(got.imag)
            if abs(z) < 1.4:  # straight-path oracle valid near the origin only
                assert abs(got - quad_F_complex(z, 0.5)) < 1e-8

    @pytest.mark.parametrize("m", [0.0, 1.0])
    def test_rejects_degenerate_parameter(self, m):
        with pytest.raises(DomainError):
            incomplete_F_complex(0.2 + 0.1j, m)
