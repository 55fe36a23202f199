"""Carlson symmetric elliptic integrals R_F, R_J and R_C.

All three are evaluated by the duplication theorem (B. C. Carlson,
"Numerical computation of real or complex elliptic integrals",
Numer. Algorithms 10, 1995).  The routines are vectorised over numpy
broadcasting and restricted to real, non-negative arguments with a
strictly positive fourth argument for ``rj``.
"""

import numpy as np

_RTOL = 1e-16
_MAX_ITER = 80


def _scalar(out):
    return out[()] if out.ndim == 0 else out


def rc(x, y):
    """Degenerate integral R_C(x, y) for x >= 0, y > 0."""
    x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
    out = np.empty(x.shape)
    lt = x < y
    gt = x > y
    eq = ~(lt | gt)
    out[lt] = np.arccos(np.sqrt(x[lt] / y[lt])) / np.sqrt(y[lt] - x[lt])
    out[gt] = np.arccosh(np.sqrt(x[gt] / y[gt])) / np.sqrt(x[gt] - y[gt])
    out[eq] = 1.0 / np.sqrt(y[eq])
    return _scalar(out)


def _rc_one(e):
    # R_C(1, 1 + e); series near e = 0 avoids the 0/0 in atan(sqrt e)/sqrt e
    e = np.asarray(e, float)
    out = np.empty(e.shape)
    small = np.abs(e) < 1e-4
    es = e[small]
    out[small] = 1.0 + es * (-1 / 3 + es * (1 / 5 + es * (-1 / 7 + es * (1 / 9 - es / 11))))
    pos = (e > 0) & ~small
    neg = (e < 0) & ~small
    se = np.sqrt(e[pos])
    out[pos] = np.arctan(se) / se
    se = np.sqrt(-e[neg])
    out[neg] = np.arctanh(se) / se
    return out


def rf(x, y, z):
    """Symmetric integral of the first kind R_F(x, y, z).

    At most one argument may vanish.
    """
    x, y, z = (np.array(v, float) for v in np.broadcast_arrays(x, y, z))
    if np.any((x < 0) | (y < 0) | (z < 0)):
        raise ValueError("rf requires non-negative arguments")
    a0 = (x + y + z) / 3.0
    q = (3.0 * _RTOL) ** (-1.0 / 6.0) * np.maximum.reduce(
        [np.abs(a0 - x), np.abs(a0 - y), np.abs(a0 - z)])
    x0, y0 = x.copy(), y.copy()
    a = a0.copy()
    scale = np.ones(a.shape)
    for _ in range(_MAX_ITER):
        if np.all(q * scale < np.abs(a)):
            break
        sx, sy, sz = np.sqrt(x), np.sqrt(y), np.sqrt(z)
        lam = sx * sy + sx * sz + sy * sz
        x = 0.25 * (x + lam)
        y = 0.25 * (y + lam)
        z = 0.25 * (z + lam)
        a = 0.25 * (a + lam)
        scale *= 0.25
    X = scale * (a0 - x0) / a
    Y = scale * (a0 - y0) / a
    Z = -(X + Y)
    e2 = X * Y - Z * Z
    e3 = X * Y * Z
    out = (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / np.sqrt(a)
    return _scalar(out)


def rj(x, y, z, p):
    """Symmetric integral of the third kind R_J(x, y, z, p), p > 0.

    x, y, z are non-negative with at most one of them zero.
    """
    x, y, z, p = (np.array(v, float) for v in np.broadcast_arrays(x, y, z, p))
    if np.any((x < 0) | (y < 0) | (z < 0)):
        raise ValueError("rj requires non-negative x, y, z")
    if np.any(p <= 0):
        raise ValueError("rj requires p > 0 (principal-value case unsupported)")
    a0 = (x + y + z + 2.0 * p) / 5.0
    delta = (p - x) * (p - y) * (p - z)
    q = (0.25 * _RTOL) ** (-1.0 / 6.0) * np.maximum.reduce(
        [np.abs(a0 - x), np.abs(a0 - y), np.abs(a0 - z), np.abs(a0 - p)])
    x0, y0, z0 = x.copy(), y.copy(), z.copy()
    a = a0.copy()
    scale = np.ones(a.shape)
    acc = np.zeros(a.shape)
    for m in range(_MAX_ITER):
        if np.all(q * scale < np.abs(a)):
            break
        sx, sy, sz, sp = np.sqrt(x), np.sqrt(y), np.sqrt(z), np.sqrt(p)
        lam = sx * sy + sx * sz + sy * sz
        d = (sp + sx) * (sp + sy) * (sp + sz)
        e = scale ** 3 * delta / (d * d)
        acc += scale / d * _rc_one(e)
        x = 0.25 * (x + lam)
        y = 0.25 * (y + lam)
        z = 0.25 * (z + lam)
        p = 0.25 * (p + lam)
        a = 0.25 * (a + lam)
        scale *= 0.25
    X = scale * (a0 - x0) / a
    Y = scale * (a0 - y0) / a
    Z = scale * (a0 - z0) / a
    P = -(X + Y + Z) / 2.0
    e2 = X * Y + X * Z + Y * Z - 3.0 * P * P
    e3 = X * Y * Z + 2.0 * e2 * P + 4.0 * P ** 3
    e4 = (2.0 * X * Y * Z + e2 * P + 3.0 * P ** 3) * P
    e5 = X * Y * Z * P * P
    series = (1.0 - 3.0 * e2 / 14.0 + e3 / 6.0 + 9.0 * e2 * e2 / 88.0
              - 3.0 * e4 / 22.0 - 9.0 * e2 * e3 / 52.0 + 3.0 * e5 / 26.0)
    out = scale * series / (a * np.sqrt(a)) + 6.0 * acc
    return _scalar(out)
