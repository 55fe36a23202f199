"""Cubic-radical integrals: frozen references, cross-form agreement and domains.

References were computed once with mpmath quadrature at 30 digits.
"""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from gyrokit import integrals as itg
from gyrokit.errors import DomainError

FORMS = ("elliptic", "hypergeometric", "quadrature")


@pytest.mark.parametrize("form", FORMS)
def test_i1_i2_reference(form):
    p = itg.CubicParams(3.0, 0.9, 0.5, 0.2, 0.8)
    assert_allclose(itg.i1(p, form), 2.0422125491754705, rtol=1e-12)
    assert_allclose(itg.i2(p, form), 1.3041537151632618, rtol=1e-12)


def test_i1_i2_reference_negative_lower_root():
    p = itg.CubicParams(2.0, 0.6, -0.4, -1.0, 0.3)
    assert_allclose(itg.i1(p), 1.2737116729770152, rtol=1e-12)
    assert_allclose(itg.i2(p), -0.089879281030150934, rtol=1e-11)


def test_i1_vanishes_at_lower_limit():
    p = itg.CubicParams(3.0, 0.9, 0.5, 0.2, 0.5)
    assert_allclose(itg.i1(p), 0.0, atol=1e-15)


def test_i1_limit_past_pole_rejected():
    # the limit y = 1.5 would cross the pole of 1 / (1 - u^2) at u = 1
    with pytest.raises(DomainError):
        itg.i1(itg.CubicParams(3.0, 2.0, 0.5, 0.2, 1.5))


def test_i1_limit_outside_band_rejected():
    with pytest.raises(DomainError):
        itg.i1(itg.CubicParams(3.0, 0.9, 0.5, 0.2, 0.95))


def test_i1_array_limit():
    y = np.linspace(0.5, 0.9, 5)
    vals = itg.i1(itg.CubicParams(3.0, 0.9, 0.5, 0.2, y))
    assert vals.shape == (5,)
    assert np.all(np.diff(vals) > 0)


def test_i3_i4_reference():
    assert_allclose(itg.i4(1.2, 0.5, 0.7), 0.8533309253803149, rtol=1e-13)
    assert_allclose(itg.i3(1.2, 0.5, 0.7), 0.46222543282624674, rtol=1e-13)


def test_i3_negative_parameter_over_a_period():
    assert_allclose(itg.i3_param(4.0, -2.0, 0.7), 0.83491920351576543, rtol=1e-13)


def test_i3_plus_i4_zero_parameter_is_identity():
    # with n = 0, sn^2 + cn^2 = 1 integrates to y
    y = np.linspace(0, 6, 13)
    assert_allclose(itg.i3_param(y, 0.0, 0.4) + itg.i4_param(y, 0.0, 0.4), y, atol=1e-14)


def test_i3_i4_combination():
    # I3 + I4 = int du / (1 - n sn^2), and subtracting n I3 leaves int du = y
    y, n, k = 2.3, -0.8, 0.55
    i3, i4 = itg.i3_param(y, n, k), itg.i4_param(y, n, k)
    assert_allclose(i3 + i4 - n * i3, y, rtol=1e-13)


def test_i5_i6_reference():
    assert_allclose(itg.i5(2.5, 4.0, -1.0, 1.8), -0.36478967854538732, rtol=1e-13)
    assert_allclose(itg.i6(2.5, 4.0, -1.0, 1.8), -0.098536457320655967, rtol=1e-13)


@pytest.mark.parametrize("form", ["appell", "quadrature"])
def test_i5_forms(form):
    assert_allclose(itg.i5(2.5, 4.0, -1.0, 1.8, form), -0.36478967854538732, rtol=1e-12)


@pytest.mark.parametrize("form", ["lauricella", "quadrature"])
def test_i6_forms(form):
    assert_allclose(itg.i6(2.5, 4.0, -1.0, 1.8, form), -0.098536457320655967, rtol=1e-12)


def test_i5_zero_at_start_of_band():
    assert itg.i5(2.5, 4.0, -1.0, 2.0) == 0.0


def test_i5_sign_follows_band_direction():
    up = itg.i5(4.0, 2.5, -1.0, 1.8)
    down = itg.i5(2.5, 4.0, -1.0, 1.8)
    assert up > 0 > down


def test_i6_needs_nonzero_roots():
    with pytest.raises(DomainError):
        itg.i6(2.5, 4.0, 0.0, 1.8)


def test_i5_outside_band_rejected():
    with pytest.raises(DomainError):
        itg.i5(2.5, 4.0, -1.0, 2.5)


def test_snap_to_ends():
    out = itg.snap_to_ends(np.array([1.0 + 1e-16, 1.5, 4.0 - 2e-15]), 1.0, 4.0)
    np.testing.assert_array_equal(out, [1.0, 1.5, 4.0])


def test_i7_closed_form_against_quadrature():
    from scipy.integrate import quad
    a, b, c, y = 3.0, 2.0, 0.5, 1.1
    # u = c + (y - c) sin^2 t removes the endpoint singularity
    ref = quad(lambda t: 2 * np.sqrt(y - c) * np.sin(t) * np.cos(t)
               / np.sqrt((a - c - (y - c) * np.sin(t) ** 2) * (b - c - (y - c) * np.sin(t) ** 2))
               / np.sin(t), 0, np.pi / 2, epsabs=1e-15)[0]
    assert_allclose(itg.i7(a, b, c, y), ref, rtol=1e-12)


def test_i7_round_trip():
    a, b, c, y = 3.0, 2.0, 0.5, 1.1
    assert_allclose(itg.i7_invert(a, b, c, itg.i7(a, b, c, y)), y, rtol=1e-13)


def test_i7_bound_reaches_b():
    a, b, c = 3.0, 2.0, 0.5
    assert_allclose(itg.i7_invert(a, b, c, itg.i7_bound(a, b, c)), b, rtol=1e-14)
    assert_allclose(itg.i7(a, b, c, c), 0.0, atol=1e-16)


def test_i7_beyond_bound_rejected():
    with pytest.raises(DomainError):
        itg.i7_invert(3.0, 2.0, 0.5, 1.01 * itg.i7_bound(3.0, 2.0, 0.5))


def test_i7_unordered_roots_rejected():
    with pytest.raises(DomainError):
        itg.i7(2.0, 3.0, 0.5, 1.0)


@settings(max_examples=40, deadline=None)
@given(st.floats(-1.5, 0.0), st.floats(0.1, 1.0), st.floats(0.1, 2.0), st.floats(0.0, 1.0),
       st.floats(0.0, 1.0))
def test_i7_monotone(c, gap_b, gap_a, f1, f2):
    b = c + gap_b
    a = b + gap_a
    y1, y2 = sorted((c + f1 * (b - c), c + f2 * (b - c)))
    assert itg.i7(a, b, c, y2) >= itg.i7(a, b, c, y1)


@settings(max_examples=25, deadline=None)
@given(st.floats(-0.8, 0.3), st.floats(0.05, 0.5), st.floats(0.05, 2.0), st.floats(-2, 2),
       st.floats(0.0, 1.0))
def test_i1_forms_agree(c, gap_b, gap_a, alpha, frac):
    b = min(c + gap_b, 0.95)
    a = b + gap_a
    p = itg.CubicParams(a, b, c, alpha, c + frac * (b - c))
    ell = itg.i1(p, "elliptic")
    assert_allclose(itg.i1(p, "hypergeometric"), ell, rtol=1e-9, atol=1e-10)
    assert_allclose(itg.i1(p, "quadrature"), ell, rtol=1e-9, atol=1e-10)
