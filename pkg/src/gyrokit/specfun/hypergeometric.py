"""Gauss, Appell and Lauricella hypergeometric functions of real argument.

The workhorse is the one-dimensional integral representation

    F_D(a; b_1..b_n; c; x_1..x_n)
        = G(c) / (G(a) G(c-a)) * int_0^1 u^(a-1) (1-u)^(c-a-1)
                                        prod_i (1 - x_i u)^(-b_i) du,

valid for c > a > 0 and x_i < 1.  It is evaluated by tanh-sinh
(double-exponential) quadrature with the integrand carried in log space,
so the endpoint singularities u^(a-1) and (1-u)^(c-a-1) are harmless.
For small arguments the grouped multiple series is used instead (or as a
cross-check).

Arguments may be numpy arrays: all ``x_i`` are broadcast together and the
result has the broadcast shape.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from ..errors import DomainError

_QUAD_RTOL = 1e-12
_MAX_LEVEL = 9
_SERIES_RADIUS = 0.5


@dataclass(frozen=True)
class HypergeometricSpec:
    """Parameters of F_D^(n)(a; b_1..b_n; c; x_1..x_n)."""

    a: float
    b_list: tuple
    c: float
    x_list: tuple

    def __post_init__(self):
        object.__setattr__(self, "b_list", tuple(float(b) for b in self.b_list))
        object.__setattr__(self, "x_list", tuple(self.x_list))
        if len(self.b_list) != len(self.x_list):
            raise DomainError("b_list and x_list must have the same length")
        _validate(self.a, self.b_list, self.c, self.x_list)


def _validate(a, b, c, x):
    if not (a > 0 and c > a):
        raise DomainError(f"integral representation needs c > a > 0 (a={a}, c={c})")
    tail = c - a
    for bi, xi in zip(b, x):
        xi = np.asarray(xi, float)
        if not np.all(np.isfinite(xi)):
            raise DomainError("hypergeometric arguments must be finite")
        if np.any(xi > 1.0):
            raise DomainError("argument on the branch cut x >= 1")
        if np.any(xi == 1.0):
            tail = min(tail, c - a - bi)
    if tail <= 0:
        raise DomainError("x_i = 1 allowed only when c - a - sum(b_i) over those i is positive")


def _log1mxu(x, log_u, log_1mu, u):
    # log(1 - x u) for x <= 1, accurate as u -> 1 and x -> 1
    out = np.empty(np.broadcast(x, u).shape)
    x = np.broadcast_to(x, out.shape)
    u = np.broadcast_to(u, out.shape)
    log_1mu = np.broadcast_to(log_1mu, out.shape)
    neg = x <= 0
    out[neg] = np.log1p(-x[neg] * u[neg])
    pos = ~neg
    xp = x[pos]
    with np.errstate(divide="ignore"):
        out[pos] = np.logaddexp(np.log1p(-xp), np.log(xp) + log_1mu[pos])
    return out


def _quad(a, b, c, x):
    """Tanh-sinh evaluation; ``x`` has shape (n, N)."""
    n, N = x.shape
    decay = min(a, c - a)
    for i in range(n):
        if np.any(x[i] == 1.0):
            decay = min(decay, c - a - b[i])
    # beyond |t| > T the integrand is below exp(-60) of its scale
    T = np.arcsinh(60.0 / (np.pi * 0.5 * decay)) + 0.5
    lognorm = gammaln(c) - gammaln(a) - gammaln(c - a)

    def log_terms(t):
        v = np.pi * np.sinh(t)
        log_u = -np.logaddexp(0.0, -v)
        log_1mu = -np.logaddexp(0.0, v)
        u = np.exp(log_u)
        lt = a * log_u + (c - a) * log_1mu + np.log(np.pi * np.cosh(t)) + lognorm
        lt = np.broadcast_to(lt, (N, t.size)).copy()
        for i in range(n):
            if b[i] != 0.0:
                lt -= b[i] * _log1mxu(x[i][:, None], log_u[None, :], log_1mu[None, :],
                                      u[None, :])
        return lt

    h = 0.5
    half_width = int(np.ceil(T / h))
    t = np.arange(-half_width, half_width + 1) * h
    total = np.exp(log_terms(t)).sum(axis=1)
    prev = total * h
    for _ in range(_MAX_LEVEL):
        # refinement only adds the odd points of the halved grid
        half_width *= 2
        h *= 0.5
        odd = np.arange(-half_width + 1, half_width, 2)
        total = total + np.exp(log_terms(odd * h)).sum(axis=1)
        cur = total * h
        if np.all(np.abs(cur - prev) <= _QUAD_RTOL * np.abs(cur)):
            return cur
        prev = cur
    return prev


def _series(a, b, c, x, tol=1e-17, max_terms=600):
    """Multiple series grouped by total degree; ``x`` has shape (n, N)."""
    n, N = x.shape
    M = max_terms
    # per-variable coefficient rows (b_i)_j x_i^j / j!
    rows = []
    for i in range(n):
        r = np.empty((N, M))
        r[:, 0] = 1.0
        for j in range(1, M):
            r[:, j] = r[:, j - 1] * (b[i] + j - 1) / j * x[i]
        rows.append(r)
    total = np.zeros(N)
    ratio = 1.0
    small = 0
    # e_m built incrementally as the degree-m slice of the product of rows
    for m in range(M):
        if m > 0:
            ratio *= (a + m - 1) / (c + m - 1)
        e = _degree_slice(rows, m)
        term = ratio * e
        total += term
        if np.all(np.abs(term) <= tol * np.abs(total)):
            small += 1
            if small >= 3:
                return total
        else:
            small = 0
    raise DomainError("Lauricella series did not converge; use the integral representation")


def _degree_slice(rows, m):
    # sum over j_1+...+j_n = m of prod rows[i][:, j_i]
    acc = rows[0][:, : m + 1]
    for r in rows[1:]:
        # acc[:, k] for k <= m convolved with r
        conv = np.zeros_like(acc)
        for k in range(m + 1):
            conv[:, k] = np.einsum("ij,ij->i", acc[:, : k + 1], r[:, k::-1])
        acc = conv
    return acc[:, m]


def lauricella(a, b_list, c, x_list, method="auto"):
    """Lauricella F_D^(n)(a; b; c; x) with broadcasting over the arguments.

    Parameters
    ----------
    a, c : float
        Parameters with ``c > a > 0``.
    b_list : sequence of float
    x_list : sequence of array_like
        Arguments, each ``< 1`` (``= 1`` is accepted when the integral
        still converges).
    method : {"auto", "integral", "series"}
        ``"series"`` needs all ``|x_i| < 1``; ``"auto"`` takes the series
        when every ``|x_i| < 0.5``.
    """
    b = tuple(float(v) for v in b_list)
    if len(b) != len(x_list):
        raise DomainError("b_list and x_list must have the same length")
    a = float(a)
    c = float(c)
    _validate(a, b, c, x_list)
    if len(b) == 0:
        return 1.0
    arrs = np.broadcast_arrays(*[np.asarray(v, float) for v in x_list])
    shape = arrs[0].shape
    x = np.stack([v.ravel() for v in arrs])
    if method == "auto":
        method = "series" if np.all(np.abs(x) < _SERIES_RADIUS) else "integral"
    if method == "series":
        if np.any(np.abs(x) >= 1.0):
            raise DomainError("series route needs |x_i| < 1")
        out = _series(a, b, c, x)
    elif method == "integral":
        out = _quad(a, b, c, x)
    else:
        raise ValueError(f"unknown method {method!r}")
    out = out.reshape(shape)
    return out[()] if out.ndim == 0 else out


def lauricella_fd(spec, method="auto"):
    """F_D^(n) for a validated :class:`HypergeometricSpec`."""
    return lauricella(spec.a, spec.b_list, spec.c, spec.x_list, method=method)


def appell_f1(a, b1, b2, c, x1, x2, method="auto"):
    """Appell F1(a; b1, b2; c; x1, x2), the two-variable Lauricella function."""
    return lauricella(a, (b1, b2), c, (x1, x2), method=method)


def hyp2f1(a, b, c, x, method="auto"):
    """Gauss 2F1(a, b; c; x) through the same integral representation."""
    return lauricella(a, (b,), c, (x,), method=method)
