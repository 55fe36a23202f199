"""Special functions against frozen high-precision references and identities.

Reference values were computed once with mpmath at 30 significant digits.
"""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose
from scipy import special

from gyrokit.errors import DomainError, SingularityError
from gyrokit.specfun import (HypergeometricSpec, appell_f1, bessel_half, ellip_F, ellip_K,
                             ellip_Pi, hyp2f1, jacobi_am_sn_cn_dn, lauricella, lauricella_fd,
                             rc, rf, rj)


class TestCarlson:
    def test_rf_reference(self):
        assert_allclose(rf(1.0, 2.0, 0.0), 1.3110287771460599, rtol=1e-14)
        assert_allclose(rf(2.0, 3.0, 4.0), 0.58408284167715171, rtol=1e-14)

    def test_rj_reference(self):
        assert_allclose(rj(0.0, 1.0, 2.0, 3.0), 0.77688623778582332, rtol=1e-14)
        assert_allclose(rj(2.0, 3.0, 4.0, 5.0), 0.14297579667156754, rtol=1e-14)

    def test_rc_reference(self):
        assert_allclose(rc(0.0, 0.25), np.pi, rtol=1e-14)

    def test_rf_is_symmetric(self):
        vals = [rf(*perm) for perm in ((0.3, 1.7, 2.2), (1.7, 2.2, 0.3), (2.2, 0.3, 1.7))]
        assert_allclose(vals, vals[0], rtol=1e-15)

    def test_rf_homogeneity(self):
        # R_F(l x, l y, l z) = R_F(x, y, z) / sqrt(l)
        assert_allclose(rf(4.0, 8.0, 12.0), rf(1.0, 2.0, 3.0) / 2.0, rtol=1e-14)


class TestLegendre:
    def test_first_kind_reference(self):
        assert_allclose(ellip_F(np.pi / 3, 0.8), 1.1789022995388238, rtol=1e-13)

    def test_first_kind_beyond_half_period(self):
        assert_allclose(ellip_F(4.0, 0.5), 4.2543274975235837, rtol=1e-13)

    def test_complete_first_kind(self):
        assert_allclose(ellip_K(0.9), 2.2805491384227702, rtol=1e-13)
        assert_allclose(ellip_K(0.0), np.pi / 2, rtol=1e-15)

    def test_third_kind_reference(self):
        assert_allclose(ellip_Pi(1.0, 0.5, 0.6), 1.2530856140080295, rtol=1e-13)
        assert_allclose(ellip_Pi(1.0, -0.7, 0.6), 0.89664508633217498, rtol=1e-13)

    def test_third_kind_at_zero_modulus(self):
        # Pi(phi, n, 0) = atan(sqrt(1 - n) tan phi) / sqrt(1 - n)
        n = 0.3
        expected = np.arctan(np.sqrt(1 - n) * np.tan(np.pi / 4)) / np.sqrt(1 - n)
        assert_allclose(ellip_Pi(np.pi / 4, n, 0.0), expected, rtol=1e-14)

    def test_third_kind_n_zero_is_first_kind(self):
        assert_allclose(ellip_Pi(1.1, 0.0, 0.7), ellip_F(1.1, 0.7), rtol=1e-14)

    def test_matches_scipy_first_kind(self):
        phi = np.linspace(-5, 5, 41)
        assert_allclose(ellip_F(phi, 0.75), special.ellipkinc(phi, 0.5625), rtol=1e-13,
                        atol=1e-15)

    def test_odd_in_phi(self):
        assert_allclose(ellip_F(-0.9, 0.4), -ellip_F(0.9, 0.4), rtol=1e-15)

    def test_modulus_one_rejected_beyond_pole(self):
        with pytest.raises(DomainError):
            ellip_F(2.0, 1.0)

    def test_modulus_above_one_rejected(self):
        with pytest.raises(DomainError):
            ellip_K(1.2)

    def test_third_kind_pole_on_path(self):
        with pytest.raises((DomainError, SingularityError)):
            ellip_Pi(np.pi / 2, 2.0, 0.5)

    @settings(max_examples=60, deadline=None)
    @given(st.floats(0.0, 1.5), st.floats(0.0, 1.5), st.floats(-3.0, 0.9), st.floats(0.0, 0.95))
    def test_third_kind_monotone_in_phi(self, p1, p2, n, k):
        lo, hi = sorted((p1, p2))
        assert ellip_Pi(hi, n, k) >= ellip_Pi(lo, n, k) - 1e-15


class TestJacobi:
    def test_zero_modulus_is_circular(self):
        u = np.linspace(-4, 4, 17)
        am, sn, cn, dn = jacobi_am_sn_cn_dn(u, 0.0)
        assert_allclose(am, u, atol=1e-15)
        assert_allclose(sn, np.sin(u), atol=1e-15)
        assert_allclose(cn, np.cos(u), atol=1e-15)
        assert_allclose(dn, 1.0, atol=1e-15)

    def test_unit_modulus_is_hyperbolic(self):
        _, sn, cn, dn = jacobi_am_sn_cn_dn(1.0, 1.0)
        assert_allclose(sn, np.tanh(1.0), rtol=1e-14)
        assert_allclose(cn, 1 / np.cosh(1.0), rtol=1e-14)
        assert_allclose(dn, 1 / np.cosh(1.0), rtol=1e-14)

    def test_matches_scipy(self):
        u = np.linspace(-10, 10, 101)
        k = 0.83
        _, sn, cn, dn = jacobi_am_sn_cn_dn(u, k)
        ref = special.ellipj(u, k * k)
        assert_allclose(sn, ref[0], atol=1e-13)
        assert_allclose(cn, ref[1], atol=1e-13)
        assert_allclose(dn, ref[2], atol=1e-13)

    def test_amplitude_is_unwrapped(self):
        k = 0.6
        K = ellip_K(k)
        am, _, _, _ = jacobi_am_sn_cn_dn(np.array([2 * K, 4 * K, 6 * K]), k)
        assert_allclose(am, [np.pi, 2 * np.pi, 3 * np.pi], rtol=1e-13)

    @settings(max_examples=100, deadline=None)
    @given(st.floats(-30, 30), st.floats(0.0, 0.999))
    def test_identities(self, u, k):
        _, sn, cn, dn = jacobi_am_sn_cn_dn(u, k)
        assert abs(sn * sn + cn * cn - 1) < 1e-12
        assert abs(dn * dn + k * k * sn * sn - 1) < 1e-12


class TestHypergeometric:
    def test_gauss_log(self):
        assert_allclose(hyp2f1(1.0, 1.0, 2.0, 0.5), 2 * np.log(2), rtol=1e-13)

    def test_gauss_matches_scipy(self):
        for x in (-0.9, -0.3, 0.2, 0.7):
            assert_allclose(hyp2f1(0.7, 1.3, 2.9, x), special.hyp2f1(0.7, 1.3, 2.9, x),
                            rtol=1e-12)

    def test_appell_reference(self):
        assert_allclose(appell_f1(0.5, 0.5, 0.5, 1.5, 0.2, -0.3), 0.98958308455550612,
                        rtol=1e-12)

    def test_three_variable_reference(self):
        val = lauricella(1.2, (0.5, 1.5, 0.25), 2.7, (0.7, -2.5, 0.9))
        assert_allclose(val, 0.51937322871429287, rtol=1e-11)

    def test_four_variable_reference(self):
        val = lauricella(0.5, (1.0, 1.0, 0.5, 0.5), 1.5, (0.3, -0.2, 0.15, 0.4))
        assert_allclose(val, 1.1752342454864598, rtol=1e-12)

    def test_series_and_integral_agree(self):
        args = (0.8, (0.4, -1.2, 2.0), 2.1, (0.3, -0.45, 0.1))
        assert_allclose(lauricella(*args, method="series"), lauricella(*args, method="integral"),
                        rtol=1e-12)

    def test_permutation_symmetry(self):
        b, x = (0.5, 1.5, 0.25), (0.3, -0.4, 0.45)
        base = lauricella(1.1, b, 2.2, x)
        for perm in ((2, 0, 1), (1, 2, 0), (0, 2, 1)):
            val = lauricella(1.1, [b[i] for i in perm], 2.2, [x[i] for i in perm])
            assert_allclose(val, base, rtol=1e-13)

    def test_zero_arguments_give_one(self):
        assert_allclose(lauricella(1.3, (0.2, 0.4), 2.0, (0.0, 0.0)), 1.0, rtol=1e-15)

    def test_spec_object(self):
        spec = HypergeometricSpec(0.5, (0.5, 0.5), 1.5, (0.2, -0.3))
        assert_allclose(lauricella_fd(spec), 0.98958308455550612, rtol=1e-12)

    def test_argument_beyond_one_rejected(self):
        with pytest.raises(DomainError):
            lauricella(0.5, (0.5,), 1.5, (1.2,))

    def test_c_not_above_a_rejected(self):
        with pytest.raises(DomainError):
            lauricella(1.5, (0.5,), 1.0, (0.2,))

    def test_mismatched_lengths_rejected(self):
        with pytest.raises((DomainError, ValueError)):
            lauricella(0.5, (0.5, 0.5), 1.5, (0.2,))


class TestBesselHalf:
    @pytest.mark.parametrize("x", [np.pi / 2, np.pi, 2.5, 17.0])
    def test_matches_scipy(self, x):
        v = bessel_half(x)
        assert_allclose(v.j_val, special.jv(-0.5, x), rtol=1e-13, atol=1e-16)
        assert_allclose(v.y_val, special.yv(-0.5, x), rtol=1e-13, atol=1e-16)

    def test_reference(self):
        v = bessel_half(2.5)
        assert_allclose(v.j_val, -0.40427830223905687, rtol=1e-14)
        assert_allclose(v.y_val, 0.30200490606236568, rtol=1e-14)

    def test_wronskian(self):
        # J_nu Y_nu' - J_nu' Y_nu = 2 / (pi x)
        x, h = 3.3, 1e-5
        v, vp, vm = bessel_half(x), bessel_half(x + h), bessel_half(x - h)
        dj = (vp.j_val - vm.j_val) / (2 * h)
        dy = (vp.y_val - vm.y_val) / (2 * h)
        assert_allclose(v.j_val * dy - dj * v.y_val, 2 / (np.pi * x), rtol=1e-8)

    def test_vectorised(self):
        v = bessel_half(np.array([1.0, 2.0]))
        assert v.j_val.shape == (2,)

    @pytest.mark.parametrize("x", [0.0, -1.0, np.nan])
    def test_nonpositive_rejected(self, x):
        with pytest.raises(DomainError):
            bessel_half(x)
