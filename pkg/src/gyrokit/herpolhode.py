"""Polar equation chi(rho) of the herpolhode.

The angular velocity of a torque-free body traces the herpolhode on the
invariable plane.  With the first integrals written as

    A p^2 + B q^2 + C r^2 = D m^2,    A^2 p^2 + B^2 q^2 + C^2 r^2 = D^2 m^2

and G = (A-D)(B-D)(C-D)/(ABCD), the polar anomaly obeys

    dchi = (rho^2 + G) drho / (rho sqrt(D) sqrt(-(rho^2-a)(rho^2-b)(rho^2-c)))

with a, b, c the constants returned by :func:`herpolhode_constants`.  The
radius oscillates between sqrt(min(a, b)) and sqrt(max(a, b)); chi is
measured from the inner circle.
"""

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import AssumptionError, DomainError
from .integrals import i5, i6, snap_to_ends
from .specfun.elliptic import _ellipf_m, _ellippi_m

_ROUNDOFF = 1e-12


@dataclass(frozen=True)
class HerpolhodeConstants:
    """Inertia data, fictitious moment D and the derived polar constants."""

    A: float
    B: float
    C: float
    D: float
    m: float
    G_const: float
    a: float
    b: float
    c: float
    chi0: float = 0.0

    @property
    def outer_root(self):
        return max(self.a, self.b)

    @property
    def inner_root(self):
        return min(self.a, self.b)

    @property
    def rho_min(self):
        return float(np.sqrt(self.inner_root))

    @property
    def rho_max(self):
        return float(np.sqrt(self.outer_root))

    @property
    def is_circle(self):
        return self.outer_root - self.inner_root <= _ROUNDOFF * max(self.outer_root, 1e-300)


def herpolhode_constants(A, B, C, D, m=1.0, chi0=0.0):
    """Compute G, a, b, c and check the sign pattern a >= 0, b >= 0, c <= 0.

    A valid D lies between the intermediate and the spin-axis moment
    (e.g. B < D < C for C > B > A).  D equal to a principal moment gives
    the degenerate cases with G = 0.
    """
    for name, v in (("A", A), ("B", B), ("C", C), ("D", D), ("m", m)):
        if not (np.isfinite(v) and v > 0):
            raise AssumptionError("positive herpolhode data", f"{name} must be positive")
    G = (A - D) * (B - D) * (C - D) / (A * B * C * D)
    a = -(B - D) * (C - D) / (B * C * D)
    b = -(C - D) * (A - D) / (C * A * D)
    c = -(A - D) * (B - D) / (A * B * D)
    if a < 0 or b < 0 or c > 0:
        raise AssumptionError(
            "herpolhode sign pattern",
            f"need a >= 0, b >= 0, c <= 0 but got a={a:.6g}, b={b:.6g}, c={c:.6g}; "
            "D must lie between the intermediate moment and the spin-axis moment")
    return HerpolhodeConstants(float(A), float(B), float(C), float(D), float(m), float(G),
                               float(a), float(b), float(c), float(chi0))


def from_free_body(A, B, C, E0, K_norm, chi0=0.0):
    """Constants for the free body with kinetic energy E0 and momentum |K|.

    D = |K|^2 / (2 E0) and m^2 = 4 E0^2 / |K|^2.
    """
    D = K_norm ** 2 / (2.0 * E0)
    m = 2.0 * E0 / K_norm
    return herpolhode_constants(A, B, C, D, m, chi0)


def _check_rho(rho, hc):
    if hc.is_circle:
        raise DomainError("circular herpolhode: chi is not a function of rho")
    if hc.inner_root == 0 or hc.c == 0:
        raise DomainError("degenerate herpolhode (a root vanishes): no finite polar equation")
    rho = np.asarray(rho, float)
    lo, hi = hc.rho_min, hc.rho_max
    slack = _ROUNDOFF * hi
    if np.any(~np.isfinite(rho)) or np.any(rho < lo - slack) or np.any(rho > hi + slack):
        raise DomainError(f"rho must lie in the annulus [{lo!r}, {hi!r}]")
    return np.clip(rho, lo, hi)


def _combine(hc, first, second):
    out = hc.chi0 + (np.asarray(first) + hc.G_const * np.asarray(second)) / np.sqrt(hc.D)
    return out[()] if out.ndim == 0 else out


def chi_elliptic(rho, hc):
    """Polar anomaly via first- and third-kind elliptic integrals."""
    rho = _check_rho(rho, hc)
    hi, lo, c = hc.outer_root, hc.inner_root, hc.c
    first = i5(hi, lo, c, rho, form="elliptic")
    second = i6(hi, lo, c, rho, form="elliptic") if hc.G_const != 0 else 0.0
    return _combine(hc, first, second)


def chi_hypergeometric(rho, hc):
    """Polar anomaly via the Appell F1 and a three-variable Lauricella F_D."""
    rho = _check_rho(rho, hc)
    hi, lo, c = hc.outer_root, hc.inner_root, hc.c
    first = i5(hi, lo, c, rho, form="appell")
    second = i6(hi, lo, c, rho, form="lauricella") if hc.G_const != 0 else 0.0
    return _combine(hc, first, second)


def chi_quadrature(rho, hc):
    """Polar anomaly by direct adaptive quadrature of the differential equation."""
    rho = _check_rho(rho, hc)
    hi, lo, c = hc.outer_root, hc.inner_root, hc.c
    out = []
    for x in np.atleast_1d(snap_to_ends(rho * rho, lo, hi)).ravel():
        top = np.arcsin(np.sqrt(np.clip((x - lo) / (hi - lo), 0.0, 1.0)))

        def f(t):
            xt = lo + (hi - lo) * np.sin(t) ** 2
            return (1.0 + hc.G_const / xt) / np.sqrt(xt - c)

        out.append(quad(f, 0.0, top, epsabs=1e-14, epsrel=1e-13, limit=200)[0])
    out = hc.chi0 + np.reshape(out, np.shape(rho)) / np.sqrt(hc.D)
    return out[()] if out.ndim == 0 else out


def _chi_of_amplitude(phi, hc):
    # chi as a quasi-periodic function of the elliptic amplitude: phi runs
    # 0 -> pi/2 on the outward sweep, pi/2 -> pi back in, and so on
    hi, lo, c = hc.outer_root, hc.inner_root, hc.c
    m = (hi - lo) / (hi - c)
    root = np.sqrt(hi - c)
    first = np.asarray(_ellipf_m(phi, m)) / root
    if hc.G_const != 0:
        if lo == 0:
            raise DomainError("degenerate herpolhode (inner radius zero with G != 0)")
        second = (lo * np.asarray(_ellipf_m(phi, m))
                  - (lo - c) * np.asarray(_ellippi_m(phi, c / lo * m, m))) / (lo * c * root)
    else:
        second = 0.0
    return _combine(hc, first, second)


def trace_curve(hc, n_samples=200, legs=2):
    """Sample the herpolhode over ``legs`` radial sweeps.

    Points are uniform in the elliptic amplitude, which concentrates them
    near the bounding circles.  Each leg runs between the two radii and chi
    keeps increasing across legs.

    Returns
    -------
    dict with arrays rho, chi, x, y.
    """
    if n_samples < 2:
        raise DomainError("n_samples must be at least 2")
    if legs < 1:
        raise DomainError("legs must be at least 1")
    hi, lo, c = hc.outer_root, hc.inner_root, hc.c
    phi = np.linspace(0.0, 0.5 * np.pi * legs, n_samples)
    S = np.sin(phi) ** 2
    if hc.is_circle:
        rho2 = np.full(phi.shape, hi)
    else:
        rho2 = ((hi - c) * lo - S * (hi - lo) * c) / ((hi - c) - S * (hi - lo))
    rho = np.clip(np.sqrt(rho2), hc.rho_min, hc.rho_max)
    if hc.is_circle:
        rho = np.full(phi.shape, hc.rho_max)
    chi = np.asarray(_chi_of_amplitude(phi, hc))
    return {"rho": rho, "chi": chi, "x": rho * np.cos(chi), "y": rho * np.sin(chi)}
