"""Herpolhode polar equation: constants, closed forms, annulus and tracing.

Anomaly references were computed once with mpmath quadrature at 30 digits.
"""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from gyrokit import herpolhode as hp
from gyrokit import poinsot as po
from gyrokit.errors import AssumptionError, DomainError

CHI_MID = 0.85598586230274875
CHI_HALF_SWEEP = 1.8127944838457559


@pytest.fixture(scope="module")
def hc():
    return hp.herpolhode_constants(3.0, 2.0, 1.0, 1.5)


CHI_FORMS = [hp.chi_elliptic, hp.chi_hypergeometric, hp.chi_quadrature]


def test_constants(hc):
    assert_allclose([hc.G_const, hc.a, hc.b, hc.c], [-1 / 24, 1 / 12, 1 / 6, -1 / 12],
                    rtol=1e-15)
    assert_allclose([hc.rho_min, hc.rho_max], [np.sqrt(1 / 12), np.sqrt(1 / 6)], rtol=1e-15)


def test_degenerate_d_gives_zero_g():
    hc = hp.herpolhode_constants(3.0, 2.0, 1.0, 2.0)
    assert hc.G_const == 0
    assert 0.0 in (hc.a, hc.b, hc.c)
    with pytest.raises(DomainError):
        hp.chi_elliptic(hc.rho_max, hc)


def test_symmetric_body_is_circle():
    hc = hp.herpolhode_constants(2.0, 2.0, 1.0, 1.5)
    assert hc.a == hc.b and hc.is_circle
    with pytest.raises(DomainError):
        hp.chi_elliptic(hc.rho_max, hc)
    rho = hp.trace_curve(hc, 50, 2)["rho"]
    assert_allclose(rho, hc.rho_max, rtol=1e-15)


def test_invalid_d_rejected():
    with pytest.raises(AssumptionError, match="sign pattern"):
        hp.herpolhode_constants(3.0, 2.0, 1.0, 2.5)


def test_nonpositive_data_rejected():
    with pytest.raises(AssumptionError):
        hp.herpolhode_constants(3.0, 2.0, 1.0, -1.0)


@pytest.mark.parametrize("chi", CHI_FORMS)
def test_reference_values(hc, chi):
    assert_allclose(chi(np.sqrt(0.125), hc), CHI_MID, rtol=1e-12)
    assert_allclose(chi(hc.rho_max, hc), CHI_HALF_SWEEP, rtol=1e-12)


@pytest.mark.parametrize("chi", CHI_FORMS)
def test_inner_circle_gives_initial_anomaly(chi):
    hc = hp.herpolhode_constants(3.0, 2.0, 1.0, 1.5, chi0=0.7)
    assert_allclose(chi(hc.rho_min, hc), 0.7, atol=1e-15)


def test_forms_agree_across_band(hc):
    rho = np.linspace(hc.rho_min, hc.rho_max, 50)
    ell = hp.chi_elliptic(rho, hc)
    assert_allclose(hp.chi_hypergeometric(rho, hc), ell, atol=1e-12)
    assert_allclose(hp.chi_quadrature(rho, hc), ell, atol=1e-12)


def test_outside_annulus_rejected(hc):
    with pytest.raises(DomainError):
        hp.chi_elliptic(1.1 * hc.rho_max, hc)
    with pytest.raises(DomainError):
        hp.chi_hypergeometric(0.9 * hc.rho_min, hc)


def test_free_body_constants():
    cfg = po.FreeBodyConfig.from_rates(1.0, 2.0, 3.0, 1.2, 0.9)
    hc = hp.from_free_body(1.0, 2.0, 3.0, cfg.E0, cfg.K_norm)
    assert 2.0 < hc.D < 3.0
    assert_allclose(hc.D * hc.m ** 2, 2 * cfg.E0, rtol=1e-15)


class TestTrace:
    def test_leg_reaches_both_radii(self, hc):
        rho = hp.trace_curve(hc, 101, 1)["rho"]
        assert_allclose([rho[0], rho[-1]], [hc.rho_min, hc.rho_max], rtol=1e-14)

    def test_half_sweep_anomaly(self, hc):
        chi = hp.trace_curve(hc, 101, 2)["chi"]
        assert_allclose([chi[50], chi[-1]], [CHI_HALF_SWEEP, 2 * CHI_HALF_SWEEP], rtol=1e-12)

    def test_trace_matches_polar_equation(self, hc):
        tr = hp.trace_curve(hc, 41, 1)
        assert_allclose(tr["chi"], hp.chi_elliptic(tr["rho"], hc), atol=1e-12)

    def test_cartesian(self, hc):
        tr = hp.trace_curve(hc, 21, 3)
        assert_allclose(np.hypot(tr["x"], tr["y"]), tr["rho"], rtol=1e-15)

    def test_too_few_samples(self, hc):
        with pytest.raises(DomainError):
            hp.trace_curve(hc, 1)

    @settings(max_examples=30, deadline=None)
    @given(st.floats(1.0, 4.0), st.floats(0.1, 2.0), st.floats(0.1, 2.0), st.floats(0.05, 0.95),
           st.integers(1, 5))
    def test_annulus_and_monotone(self, A, gap1, gap2, frac, legs):
        B, C = A + gap1, A + gap1 + gap2
        hc = hp.herpolhode_constants(A, B, C, B + frac * (C - B))
        tr = hp.trace_curve(hc, 200, legs)
        assert tr["rho"].min() >= hc.rho_min and tr["rho"].max() <= hc.rho_max
        assert np.all(np.diff(tr["chi"]) > 0)
