"""Closed forms for the cubic-radical integrals used by the solvers.

Each integral is available in a hypergeometric (Lauricella/Appell) form, a
Legendre elliptic form and, where it is a definite integral of an
elementary integrand, a quadrature oracle.  The quadrature oracle works on
the original integrand after a sin^2 substitution that removes the
square-root endpoint singularities, so it shares no code with the closed
forms beyond numpy and scipy.

Summary (all radicals taken positive):

    I1 = int_c^y (1 - alpha u) / (1 - u^2) du / sqrt((a-u)(b-u)(u-c))
    I2 = int_c^y (1 - alpha u) u / (1 - u^2) du / sqrt((a-u)(b-u)(u-c))
    I3 = int_0^y sn^2 / (1 - c^2 sn^2) du
    I4 = int_0^y cn^2 / (1 - c^2 sn^2) du
    I5 = int_sqrt(b)^y u du / sqrt((a-u^2)(u^2-b)(u^2-c))
    I6 = int_sqrt(b)^y du / (u sqrt((a-u^2)(u^2-b)(u^2-c)))
    I7 = int_c^y du / sqrt((a-u)(b-u)(u-c))
"""

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import DomainError
from .specfun.elliptic import (_ellipf_m, _ellipk_m, _ellippi_m, _ellippi_reduced_m,
                               _jacobi_m)
from .specfun.hypergeometric import appell_f1, lauricella

# relative slack for round-off when a limit sits exactly on a root
_ROUNDOFF = 1e-12
# y^2 within this relative distance of a band end counts as the end itself
SNAP_RELATIVE = 1e-14


def _scalar(out):
    out = np.asarray(out, float)
    return out[()] if out.ndim == 0 else out


def _clamp(y, lo, hi, what):
    y = np.asarray(y, float)
    slack = _ROUNDOFF * max(1.0, abs(lo), abs(hi))
    if np.any(~np.isfinite(y)) or np.any(y < lo - slack) or np.any(y > hi + slack):
        raise DomainError(f"{what} must lie in [{lo!r}, {hi!r}]")
    return np.clip(y, lo, hi)


@dataclass(frozen=True)
class CubicParams:
    """Roots ``a > b > c``, weight coefficient ``alpha`` and upper limit ``y``.

    For I1 and I2 the limit satisfies ``c <= y <= b``, ``-1 < c`` and
    ``y < 1`` so that the factor 1 - u^2 stays positive on the path.
    """

    a: float
    b: float
    c: float
    alpha: float
    y: object

    def checked_y(self):
        if not (self.a > self.b > self.c > -1.0):
            raise DomainError(f"need a > b > c > -1, got a={self.a}, b={self.b}, c={self.c}")
        y = _clamp(self.y, self.c, self.b, "upper limit y")
        if np.any(y >= 1.0):
            raise DomainError("upper limit must stay below 1 (pole of 1/(1-u^2))")
        return y


def _lauricella_xs(a, b, c, y):
    d = y - c
    return (d / (1.0 - c), -d / (1.0 + c), d / (a - c), d / (b - c))


_B4 = (1.0, 1.0, 0.5, 0.5)


def _quad_cubic(a, b, c, y, weight):
    # u = c + (b - c) sin^2 t cancels sqrt((b-u)(u-c)) against du
    out = []
    for yy in np.atleast_1d(y).ravel():
        top = np.arcsin(np.sqrt((yy - c) / (b - c)))

        def f(t):
            u = c + (b - c) * np.sin(t) ** 2
            return 2.0 * weight(u) / np.sqrt(a - u)

        out.append(quad(f, 0.0, top, epsabs=1e-14, epsrel=1e-13, limit=200)[0])
    return np.reshape(out, np.shape(y))


def weighted_from_amplitude(a, b, c, w0, w1, amplitude, times_u=False):
    """Elliptic form of the I1/I2 family driven by the Jacobi amplitude.

    Evaluates int (w0 - w1 u) / (1 - u^2) [u] du / sqrt(|(a-u)(b-u)(u-c)|)
    along the path u = c + (b - c) sin^2(vartheta), vartheta from 0 to
    ``amplitude``.  Because the elliptic integrals are quasi-periodic in
    the amplitude, an unwrapped amplitude beyond pi/2 accumulates the
    integral over successive sweeps c -> b -> c -> ... with the correct
    sign, which is exactly what a time-parametrised angle needs.
    """
    m = (b - c) / (a - c)
    n1 = (b - c) / (1.0 - c)
    n2 = -(b - c) / (1.0 + c)
    x1 = np.asarray(_ellippi_m(amplitude, n1, m)) / (1.0 - c)
    x2 = np.asarray(_ellippi_m(amplitude, n2, m)) / (1.0 + c)
    if times_u:
        x3 = np.asarray(_ellipf_m(amplitude, m))
        out = (w0 - w1) * x1 - (w0 + w1) * x2 + 2.0 * w1 * x3
    else:
        out = (w0 - w1) * x1 + (w0 + w1) * x2
    return _scalar(out / np.sqrt(a - c))


def weighted(a, b, c, w0, w1, y, times_u=False, form="elliptic"):
    """int_c^y (w0 - w1 u) / (1 - u^2) [u] du / sqrt((a-u)(b-u)(u-c)).

    With ``w0 = 1, w1 = alpha`` this is I1 (or I2 when ``times_u``).  The
    two-coefficient numerator lets callers avoid dividing by a possibly
    vanishing constant.
    """
    p = CubicParams(a, b, c, 0.0, y)
    y = p.checked_y()
    if form == "elliptic":
        amp = np.arcsin(np.sqrt((y - c) / (b - c)))
        return weighted_from_amplitude(a, b, c, w0, w1, amp, times_u)
    if form == "hypergeometric":
        d = y - c
        xs = _lauricella_xs(a, b, c, y)
        pref = np.sqrt(d) / ((1.0 - c * c) * np.sqrt((a - c) * (b - c)))
        X = lauricella(0.5, _B4, 1.5, xs)
        Y = lauricella(1.5, _B4, 2.5, xs)
        if times_u:
            Z = lauricella(2.5, _B4, 3.5, xs)
            out = pref * (2.0 * c * (w0 - c * w1) * X
                          + (2.0 / 3.0) * (w0 - 2.0 * c * w1) * d * Y
                          - 0.4 * w1 * d * d * Z)
        else:
            out = pref * (2.0 * (w0 - c * w1) * X - (2.0 / 3.0) * w1 * d * Y)
        return _scalar(out)
    if form == "quadrature":
        if times_u:
            return _scalar(_quad_cubic(a, b, c, y, lambda u: (w0 - w1 * u) * u / (1.0 - u * u)))
        return _scalar(_quad_cubic(a, b, c, y, lambda u: (w0 - w1 * u) / (1.0 - u * u)))
    raise ValueError(f"unknown form {form!r}")


def i1(p, form="elliptic"):
    """Evaluate I1 for ``p`` (a :class:`CubicParams`).

    Parameters
    ----------
    p : CubicParams
        ``p.y`` may be an array.
    form : {"elliptic", "hypergeometric", "quadrature"}
        The hypergeometric form uses two F_D^(4) values, the elliptic form
        two third-kind integrals.
    """
    return weighted(p.a, p.b, p.c, 1.0, p.alpha, p.y, times_u=False, form=form)


def i2(p, form="elliptic"):
    """Evaluate I2; same conventions as :func:`i1`.

    The hypergeometric form uses three F_D^(4) values, the elliptic form
    two third-kind integrals and one first-kind integral.
    """
    return weighted(p.a, p.b, p.c, 1.0, p.alpha, p.y, times_u=True, form=form)


def i3_param(y, n, k):
    """int_0^y sn^2 / (1 - n sn^2) du with the parameter ``n`` given directly.

    ``n`` may be negative.  Raises :class:`~gyrokit.errors.SingularityError`
    if ``1 - n sn^2`` vanishes on the path.
    """
    m = np.asarray(k, float) ** 2
    return _ellippi_reduced_m(_jacobi_m(y, m), n, m)


def i4_param(y, n, k):
    """int_0^y cn^2 / (1 - n sn^2) du with the parameter ``n`` given directly."""
    m = np.asarray(k, float) ** 2
    am = _jacobi_m(y, m)
    return _scalar(np.asarray(_ellippi_m(am, n, m)) - _ellippi_reduced_m(am, n, m))


def i3(y, c, k):
    """int_0^y sn^2 u / (1 - c^2 sn^2 u) du, i.e. (Pi(am y, c^2, k) - y) / c^2."""
    return i3_param(y, np.asarray(c, float) ** 2, k)


def i4(y, c, k):
    """int_0^y cn^2 u / (1 - c^2 sn^2 u) du, i.e. ((c^2-1) Pi(am y, c^2, k) + y) / c^2."""
    return i4_param(y, np.asarray(c, float) ** 2, k)


def _band(a, b, c, y):
    # x = u^2 runs between the roots a and b; c lies below both
    if not c < min(a, b):
        raise DomainError("need c below both a and b")
    if a == b:
        raise DomainError("a and b must differ")
    y = np.asarray(y, float)
    if np.any(y < 0):
        raise DomainError("upper limit must be non-negative")
    x = _clamp(y * y, min(a, b), max(a, b), "y^2 (arcsin argument outside [0, 1])")
    x = snap_to_ends(x, a, b)
    # a < b integrates from sqrt(b) downward, so the signed value is negative
    sign = 1.0 if a > b else -1.0
    return x, sign


def snap_to_ends(x, lo, hi, rel=SNAP_RELATIVE):
    """Move x onto an endpoint of [lo, hi] when within squaring round-off.

    The band integrals have square-root endpoint behaviour, so a one-ulp
    error in y^2 would otherwise show up as an O(1e-8) change in the value.
    """
    x = np.asarray(x, float)
    tol = rel * max(abs(lo), abs(hi))
    x = np.where(np.abs(x - lo) <= tol, lo, x)
    return np.where(np.abs(x - hi) <= tol, hi, x)


def _i56_phi_m(a, b, c, x):
    m = (a - b) / (a - c)
    ratio = (a - c) * (x - b) / ((a - b) * (x - c))
    return np.arcsin(np.sqrt(np.clip(ratio, 0.0, 1.0))), m


def i5(a, b, c, y, form="elliptic"):
    """Signed integral int_sqrt(b)^y u du / sqrt((a-u^2)(u^2-b)(u^2-c)).

    Real on the band where y^2 lies between ``a`` and ``b`` (either order),
    with ``c`` below both.  When ``a < b`` the limit runs downward from
    sqrt(b) and the value is negative.

    Parameters
    ----------
    form : {"elliptic", "appell", "quadrature"}
    """
    x, sign = _band(a, b, c, y)
    if form == "elliptic":
        phi, m = _i56_phi_m(a, b, c, x)
        out = _ellipf_m(phi, m) / np.sqrt(a - c)
    elif form == "appell":
        d = x - b
        out = np.sqrt(d / ((a - b) * (b - c))) * appell_f1(0.5, 0.5, 0.5, 1.5, d / (a - b),
                                                            -d / (b - c))
    elif form == "quadrature":
        out = _quad_band(a, b, c, x, lambda xx: 1.0)
    else:
        raise ValueError(f"unknown form {form!r}")
    return _scalar(sign * np.asarray(out))


def i6(a, b, c, y, form="elliptic"):
    """Signed integral int_sqrt(b)^y du / (u sqrt((a-u^2)(u^2-b)(u^2-c))).

    Same band and sign conventions as :func:`i5`; ``b`` and ``c`` must be
    non-zero.

    Parameters
    ----------
    form : {"elliptic", "lauricella", "quadrature"}
    """
    if b == 0 or c == 0:
        raise DomainError("I6 needs b != 0 and c != 0")
    x, sign = _band(a, b, c, y)
    if form == "elliptic":
        phi, m = _i56_phi_m(a, b, c, x)
        out = (b * np.asarray(_ellipf_m(phi, m))
               - (b - c) * np.asarray(_ellippi_m(phi, c / b * m, m))) / (b * c * np.sqrt(a - c))
    elif form == "lauricella":
        d = x - b
        out = np.sqrt(d / ((a - b) * (b - c))) / b * lauricella(
            0.5, (1.0, 0.5, 0.5), 1.5, (-d / b, d / (a - b), -d / (b - c)))
    elif form == "quadrature":
        out = _quad_band(a, b, c, x, lambda xx: 1.0 / xx)
    else:
        raise ValueError(f"unknown form {form!r}")
    return _scalar(sign * np.asarray(out))


def _quad_band(a, b, c, x, weight):
    # (1/2) int dx w(x) / sqrt(|a-x||x-b|(x-c)), x = b + (a-b) sin^2 t
    out = []
    for xx in np.atleast_1d(x).ravel():
        top = np.arcsin(np.sqrt(np.clip((xx - b) / (a - b), 0.0, 1.0)))

        def f(t):
            xt = b + (a - b) * np.sin(t) ** 2
            return weight(xt) / np.sqrt(xt - c)

        out.append(quad(f, 0.0, top, epsabs=1e-14, epsrel=1e-13, limit=200)[0])
    return np.reshape(out, np.shape(x))


def _i7_check(a, b, c):
    if not a > b > c:
        raise DomainError(f"need a > b > c, got a={a}, b={b}, c={c}")


def i7(a, b, c, y):
    """int_c^y du / sqrt((a-u)(b-u)(u-c)) = 2/sqrt(a-c) F(arcsin sqrt((y-c)/(b-c)), k)."""
    _i7_check(a, b, c)
    y = _clamp(y, c, b, "upper limit y")
    m = (b - c) / (a - c)
    phi = np.arcsin(np.sqrt((y - c) / (b - c)))
    return _scalar(2.0 / np.sqrt(a - c) * np.asarray(_ellipf_m(phi, m)))


def i7_bound(a, b, c):
    """Largest attainable value of :func:`i7`, reached at y = b."""
    _i7_check(a, b, c)
    return 2.0 / np.sqrt(a - c) * float(_ellipk_m((b - c) / (a - c)))


def i7_invert(a, b, c, L):
    """Solve i7(a, b, c, y) = L for y; needs 0 <= L <= i7_bound(a, b, c)."""
    _i7_check(a, b, c)
    L = _clamp(L, 0.0, i7_bound(a, b, c), "L (no real solution)")
    m = (b - c) / (a - c)
    sn = np.sin(_jacobi_m(0.5 * L * np.sqrt(a - c), m))
    return _scalar(c + (b - c) * sn * sn)
