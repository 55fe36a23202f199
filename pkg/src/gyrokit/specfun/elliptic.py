"""Legendre elliptic integrals and Jacobi elliptic functions.

Convention: the public functions take the *modulus* ``k`` (never the
parameter ``m = k**2``).  The underscore-prefixed ``*_m`` helpers take the
parameter ``m`` directly; they also accept ``m < 0`` (imaginary modulus),
which some closed forms in :mod:`gyrokit.integrals` produce.

The third-kind integral uses the sign convention

    Pi(phi, n, k) = int_0^phi dt / ((1 - n sin^2 t) sqrt(1 - k^2 sin^2 t)).

Amplitudes outside [-pi/2, pi/2] are handled by quasi-periodicity, so all
integrals are continuous, odd and increasing functions of ``phi``.
"""

import numpy as np

from ..errors import DomainError, SingularityError
from .carlson import rf, rj


def _scalar(out):
    out = np.asarray(out)
    return out[()] if out.ndim == 0 else out


def _reduce(phi):
    j = np.round(phi / np.pi)
    return j, phi - j * np.pi


def _check_m(m, phi=None):
    if phi is None:
        bad = m >= 1.0
    else:
        bad = (m > 1.0) | ((m >= 1.0) & (np.abs(phi) >= np.pi / 2))
        # m > 1 is tolerated only while m sin^2(phi) < 1 on the whole path
        bad |= (m > 1.0) & (m * np.sin(np.minimum(np.abs(phi), np.pi / 2)) ** 2 >= 1.0)
    if np.any(bad):
        raise DomainError("elliptic integral diverges for this modulus/amplitude")


def _ellipk_m(m):
    m = np.asarray(m, float)
    _check_m(m)
    return _scalar(rf(0.0, 1.0 - m, 1.0))


def _ellipf_m(phi, m):
    phi, m = np.broadcast_arrays(np.asarray(phi, float), np.asarray(m, float))
    if not np.all(np.isfinite(phi)):
        raise DomainError("amplitude must be finite")
    _check_m(m, phi)
    j, pr = _reduce(phi)
    s = np.sin(pr)
    c2 = np.cos(pr) ** 2
    out = s * rf(c2, 1.0 - m * s * s, 1.0)
    wrap = j != 0
    if np.any(wrap):
        out = np.where(wrap, out + 2.0 * j * rf(0.0, np.where(wrap, 1.0 - m, 1.0), 1.0), out)
    return _scalar(out)


def _check_n(phi, n):
    # the circular case needs 1 - n sin^2 > 0 along the whole path
    reach = np.where(np.abs(phi) >= np.pi / 2, 1.0, np.sin(phi) ** 2)
    if np.any(n * reach >= 1.0):
        raise SingularityError("ellip_Pi", "n*sin^2(phi) reaches 1 on the integration path")


def _ellippi_reduced_m(phi, n, m):
    """(Pi(phi, n) - F(phi)) / n, well defined (and smooth) at n = 0."""
    phi, n, m = np.broadcast_arrays(np.asarray(phi, float), np.asarray(n, float),
                                    np.asarray(m, float))
    if not np.all(np.isfinite(phi)):
        raise DomainError("amplitude must be finite")
    _check_m(m, phi)
    _check_n(phi, n)
    j, pr = _reduce(phi)
    s = np.sin(pr)
    s2 = s * s
    out = s * s2 * rj(np.cos(pr) ** 2, 1.0 - m * s2, 1.0, 1.0 - n * s2) / 3.0
    wrap = j != 0
    if np.any(wrap):
        mm = np.where(wrap, m, 0.0)
        nn = np.where(wrap, n, 0.0)
        full = rj(0.0, 1.0 - mm, 1.0, 1.0 - nn) / 3.0
        out = np.where(wrap, out + 2.0 * j * full, out)
    return _scalar(out)


def _ellippi_m(phi, n, m):
    return _scalar(np.asarray(_ellipf_m(phi, m)) + np.asarray(n) * _ellippi_reduced_m(phi, n, m))


def ellip_K(k):
    """Complete elliptic integral of the first kind K(k), 0 <= k < 1."""
    k = np.asarray(k, float)
    return _ellipk_m(k * k)


def ellip_F(phi, k):
    """Incomplete elliptic integral of the first kind F(phi, k).

    Parameters
    ----------
    phi : array_like
        Amplitude in radians, any finite value.
    k : array_like
        Modulus.  ``k >= 1`` is accepted only while ``k sin(phi) < 1``.
    """
    k = np.asarray(k, float)
    return _ellipf_m(phi, k * k)


def ellip_Pi(phi, n, k):
    """Incomplete elliptic integral of the third kind Pi(phi, n, k).

    Raises :class:`~gyrokit.errors.SingularityError` when ``n sin^2`` reaches
    1 on the path from 0 to ``phi`` (the hyperbolic, principal-value case).
    """
    k = np.asarray(k, float)
    return _ellippi_m(phi, n, k * k)


def _jacobi_m(u, m):
    u, m = np.broadcast_arrays(np.asarray(u, float), np.asarray(m, float))
    if not np.all(np.isfinite(u)):
        raise DomainError("argument must be finite")
    if np.any((m < 0) | (m > 1)):
        raise DomainError("Jacobi functions need 0 <= k <= 1")
    u = u.astype(float)
    am = np.empty(u.shape)
    one = m == 1.0
    if np.any(one):
        am[one] = 2.0 * np.arctan(np.tanh(0.5 * u[one]))
    reg = ~one
    if np.any(reg):
        uu, mm = u[reg], m[reg]
        # descending Landen / AGM sequence, DLMF 22.20(ii)
        a = [np.ones(uu.shape)]
        c = [np.sqrt(mm)]
        b = np.sqrt(1.0 - mm)
        while np.any(np.abs(c[-1]) > 1e-16 * a[-1]) and len(a) < 40:
            an, bn = a[-1], b
            a.append(0.5 * (an + bn))
            c.append(0.5 * (an - bn))
            b = np.sqrt(an * bn)
        n = len(a) - 1
        phi = 2.0 ** n * a[n] * uu
        for i in range(n, 0, -1):
            phi = 0.5 * (phi + np.arcsin(c[i] / a[i] * np.sin(phi)))
        am[reg] = phi
    return am


def jacobi_am_sn_cn_dn(u, k):
    """Jacobi amplitude and the functions sn, cn, dn.

    The amplitude is returned unwrapped: it is a continuous increasing
    function of ``u`` (no folding into (-pi, pi]).

    Returns
    -------
    am, sn, cn, dn : ndarray or float
    """
    k = np.asarray(k, float)
    m = k * k
    am = _jacobi_m(u, m)
    sn = np.sin(am)
    cn = np.cos(am)
    dn = np.sqrt(1.0 - m * sn * sn)
    return _scalar(am), _scalar(sn), _scalar(cn), _scalar(dn)
