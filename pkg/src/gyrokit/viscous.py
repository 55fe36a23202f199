"""Symmetric body (A = B) under a viscous torque -mu * omega on every axis.

Closed form for the rates: r decays exponentially and p + i q rotates with
a decaying magnitude.  In Bessel form, with x(t) = kappa e^{-mu t / C} and
kappa = C |r0| |A - C| / (A mu), the equatorial rates are

    p = e^{-mu t / A} (C1 J(t) + C2 Y(t)),   J = N0 cos x,  Y = N0 sin x,

where N0 = sqrt(2 / (pi kappa)), so that J(t) = sqrt(x / kappa) J_{-1/2}(x)
and likewise for Y.  The direction cosines gamma need numerics: either the
third-order resolvent in gamma1 or the Poisson equations directly.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad, solve_ivp

from .errors import AssumptionError, DomainError
from .specfun.bessel import bessel_half

_RTOL = 1e-12
_ATOL = 1e-14
# resolvent denominator threshold relative to |omega|^3 + mu |omega|^2 / min(A, C)
SWITCH_RATIO = 0.01
# near cos(theta) = 0 the psi integrand switches to the regular cosine form
_COS_GUARD = 0.1


@dataclass(frozen=True)
class ViscousConfig:
    """Inertia, viscous constant, initial rates and initial vertical cosines."""

    A: float
    C: float
    mu: float
    p0: float
    q0: float
    r0: float
    gamma0: tuple = (0.0, 0.0, 1.0)

    def __post_init__(self):
        for name in ("A", "C", "mu"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise AssumptionError("positive viscous data", f"{name} must be positive")
        for name in ("p0", "q0", "r0"):
            if not np.isfinite(getattr(self, name)):
                raise AssumptionError("finite initial data", f"{name} is not finite")
        g = np.asarray(self.gamma0, float)
        if g.shape != (3,) or not np.all(np.isfinite(g)):
            raise AssumptionError("unit initial cosines", "gamma0 must be three finite numbers")
        if abs(g @ g - 1.0) > 1e-12:
            raise AssumptionError("unit initial cosines", f"|gamma0|^2 = {g @ g!r} is not 1")
        object.__setattr__(self, "gamma0", tuple(float(v) for v in g))


@dataclass(frozen=True)
class BesselSolutionParams:
    """Integration constants of the Bessel-form solution.

    ``arg_scale`` is kappa, the Bessel argument at t = 0, and ``sense`` is
    sign((A - C) r0), the direction in which p + i q turns.  ``branch`` is
    "bessel" or "decoupled" (A = C or r0 = 0, pure exponential decay).
    """

    C1: float
    C2: float
    nu: float
    arg_scale: float
    sense: float
    branch: str = "bessel"

    @property
    def norm(self):
        """N0 = sqrt(2 / (pi kappa))."""
        return float(np.sqrt(2.0 / (np.pi * self.arg_scale)))


def p_ode_coefficients(cfg):
    """(a, b, c, lambda) of p'' + a p' + (b e^{lambda t} + c) p = 0."""
    A, C, mu = cfg.A, cfg.C, cfg.mu
    a = mu * (A + 2.0 * C) / (A * C)
    b = cfg.r0 ** 2 * (A - C) ** 2 / A ** 2
    c = mu ** 2 * (A + C) / (A ** 2 * C)
    return a, b, c, -2.0 * mu / C


def bessel_order(cfg):
    """nu = sqrt(a^2 - 4 c) / lambda for the p equation (always -1/2)."""
    a, _, c, lam = p_ode_coefficients(cfg)
    return float(np.sqrt(a * a - 4.0 * c) / lam)


def bessel_params(cfg):
    """Constants C1, C2 fixed by p(0) = p0 and q(0) = q0."""
    A, C, mu = cfg.A, cfg.C, cfg.mu
    if A == C or cfg.r0 == 0:
        return BesselSolutionParams(cfg.p0, cfg.q0, -0.5, 0.0, 0.0, "decoupled")
    kappa = C * abs(cfg.r0) * np.sqrt((A - C) ** 2) / (A * mu)
    sense = float(np.sign((A - C) * cfg.r0))
    scale = np.sqrt(np.pi * kappa / 2.0)
    ck, sk = np.cos(kappa), np.sin(kappa)
    C1 = scale * (cfg.p0 * ck + sense * cfg.q0 * sk)
    C2 = scale * (cfg.p0 * sk - sense * cfg.q0 * ck)
    return BesselSolutionParams(float(C1), float(C2), bessel_order(cfg), float(kappa), sense)


def axial_rate(t, cfg):
    """r = r0 e^{-mu t / C}."""
    return cfg.r0 * np.exp(-cfg.mu * np.asarray(t, float) / cfg.C)


def _bessel_parts(t, cfg, bp):
    # returns decay E, P(x), P'(x), x with P = a_c cos x + a_s sin x
    t = np.asarray(t, float)
    decay = np.exp(-cfg.mu * t / cfg.A)
    x = bp.arg_scale * np.exp(-cfg.mu * t / cfg.C)
    bv = bessel_half(x)
    # J(t) = sqrt(x / kappa) J_{-1/2}(x), Y(t) = sqrt(x / kappa) Y_{-1/2}(x)
    shrink = np.sqrt(x / bp.arg_scale)
    j_t, y_t = shrink * bv.j_val, shrink * bv.y_val
    P = bp.C1 * j_t + bp.C2 * y_t
    dP = bp.norm * (-bp.C1 * np.sin(x) + bp.C2 * np.cos(x))
    return decay, P, dP, x


def equatorial_rates(t, cfg):
    """(p, q) at times ``t``.

    q follows from p through q = e^{mu t / C} (A p' + mu p) / (r0 (A - C)),
    with A p' + mu p formed analytically so no cancellation occurs.
    """
    bp = bessel_params(cfg)
    t = np.asarray(t, float)
    if np.any(t < 0) or not np.all(np.isfinite(t)):
        raise DomainError("times must be finite and non-negative")
    if bp.branch == "decoupled":
        decay = np.exp(-cfg.mu * t / cfg.A)
        return cfg.p0 * decay, cfg.q0 * decay
    decay, P, dP, x = _bessel_parts(t, cfg, bp)
    mu, A, C = cfg.mu, cfg.A, cfg.C
    # A p' + mu p = A decay P'(x) x', and e^{mu t / C} x' = -(mu / C) kappa
    grown_xdot = -(mu / C) * bp.arg_scale
    q = A * decay * dP * grown_xdot / (cfg.r0 * (A - C))
    return decay * P, q


def rates(t, cfg):
    """(p, q, r) at times ``t``."""
    p, q = equatorial_rates(t, cfg)
    return p, q, axial_rate(t, cfg)


def rate_derivatives(t, cfg):
    """First and second time derivatives of (p, q, r) from the Euler equations."""
    A, C, mu = cfg.A, cfg.C, cfg.mu
    p, q, r = rates(t, cfg)
    dp = ((A - C) * q * r - mu * p) / A
    dq = ((C - A) * r * p - mu * q) / A
    dr = -mu * r / C
    ddp = ((A - C) * (dq * r + q * dr) - mu * dp) / A
    ddq = ((C - A) * (dr * p + r * dp) - mu * dq) / A
    ddr = -mu * dr / C
    return (p, q, r), (dp, dq, dr), (ddp, ddq, ddr)


def euler_residual(t, cfg):
    """Residuals of the damped Euler equations with the closed-form rates.

    The derivatives are differentiated analytically from the Bessel form,
    independently of the equations being checked.
    """
    A, C, mu = cfg.A, cfg.C, cfg.mu
    p, q, r = rates(t, cfg)
    dp, _, dq = _p_derivatives(t, cfg)
    dr = -mu * r / C
    return (A * dp - (A - C) * q * r + mu * p,
            A * dq + (A - C) * p * r + mu * q,
            C * dr + mu * r)


def _p_derivatives(t, cfg):
    # analytic p', p'' and q' from the Bessel form
    bp = bessel_params(cfg)
    t = np.asarray(t, float)
    mu, A, C = cfg.mu, cfg.A, cfg.C
    k = mu / A
    if bp.branch == "decoupled":
        decay = np.exp(-k * t)
        return -k * cfg.p0 * decay, k * k * cfg.p0 * decay, -k * cfg.q0 * decay
    decay, P, dP, x = _bessel_parts(t, cfg, bp)
    xdot = -(mu / C) * x
    xddot = (mu / C) ** 2 * x
    d1 = decay * (-k * P + dP * xdot)
    d2 = decay * (k * k * P - 2.0 * k * dP * xdot - P * xdot ** 2 + dP * xddot)
    # q = q_scale decay P'(x), and P'' = -P
    q_scale = -A * (mu / C) * bp.arg_scale / (cfg.r0 * (A - C))
    dq = q_scale * decay * (-k * dP - P * xdot)
    return d1, d2, dq


def verify_p_ode(t, cfg):
    """Residual of p'' + a p' + (b e^{lambda t} + c) p with analytic derivatives.

    Returns the residual divided by the sum of the magnitudes of its terms,
    so it is a relative quantity.
    """
    a, b, c, lam = p_ode_coefficients(cfg)
    t = np.asarray(t, float)
    p, _ = equatorial_rates(t, cfg)
    d1, d2, _ = _p_derivatives(t, cfg)
    stiff = b * np.exp(lam * t) + c
    res = d2 + a * d1 + stiff * p
    scale = np.abs(d2) + np.abs(a * d1) + np.abs(stiff * p)
    return res / np.where(scale > 0, scale, 1.0)


def kinetic_energy(t, cfg):
    """(A p^2 + A q^2 + C r^2) / 2."""
    p, q, r = rates(t, cfg)
    return 0.5 * (cfg.A * (p * p + q * q) + cfg.C * r * r)


# direction cosines

def _f_coeffs(t, cfg):
    (p, q, r), (dp, dq, dr), (ddp, ddq, ddr) = rate_derivatives(t, cfg)
    f1 = -(q * q + r * r)
    f2 = dr + p * q
    f3 = r * p - dq
    df1 = -2.0 * (q * dq + r * dr)
    df2 = ddr + dp * q + p * dq
    df3 = dr * p + r * dp - ddq
    g1 = df1 - r * f2 + q * f3
    g2 = df2 + r * f1 - p * f3
    g3 = df3 - q * f1 + p * f2
    return (p, q, r), (f1, f2, f3), (g1, g2, g3)


def resolvent_denominator(t, cfg):
    """Denominator r f3 + q f2 of the cosine recovery, and its scale."""
    (p, q, r), (_, f2, f3), _ = _f_coeffs(t, cfg)
    w2 = p * p + q * q + r * r
    w = np.sqrt(w2)
    return r * f3 + q * f2, w2 * w + cfg.mu * w2 / min(cfg.A, cfg.C)


def _poisson_rhs(cfg):
    def rhs(t, g):
        p, q, r = rates(t, cfg)
        return np.array([r * g[1] - q * g[2], p * g[2] - r * g[0], q * g[0] - p * g[1]])
    return rhs


def _resolvent_rhs(cfg):
    def rhs(t, y):
        _, (f1, f2, f3), (g1, g2, g3) = _f_coeffs(t, cfg)
        (_, q, r) = rates(t, cfg)
        det = r * f3 + q * f2
        a2 = (q * g2 + r * g3) / det
        a1 = (g2 * f3 - g3 * f2) / det
        a0 = g1 - f1 * a2
        return np.array([y[1], y[2], a2 * y[2] + a1 * y[1] + a0 * y[0]])
    return rhs


def _resolvent_state(t, gamma, cfg):
    # (gamma1, gamma1', gamma1'') from a full cosine triple
    (_, q, r), (f1, f2, f3), _ = _f_coeffs(t, cfg)
    g1, g2, g3 = gamma
    return np.array([g1, r * g2 - q * g3, f1 * g1 + f2 * g2 + f3 * g3])


def _recover(t, y, cfg):
    # gamma2, gamma3 from (gamma1, gamma1', gamma1'')
    (_, q, r), (f1, f2, f3), _ = _f_coeffs(t, cfg)
    det = r * f3 + q * f2
    rest = y[2] - f1 * y[0]
    return np.array([y[0], (f3 * y[1] + q * rest) / det, (r * rest - f2 * y[1]) / det])


@dataclass
class GammaSolution:
    """Piecewise dense solution for the direction cosines.

    ``spans`` lists (t_start, t_end, route) with route "resolvent" or
    "poisson"; Poisson spans are the ones flagged because the resolvent
    denominator came too close to zero.
    """

    spans: list
    _pieces: list = field(repr=False, default_factory=list)
    cfg: ViscousConfig = field(repr=False, default=None)

    @property
    def flagged(self):
        return [(a, b) for a, b, route in self.spans if route == "poisson"]

    def __call__(self, t):
        t = np.atleast_1d(np.asarray(t, float))
        out = np.empty((3, t.size))
        for i, ti in enumerate(t):
            out[:, i] = self._eval_one(ti)
        return out

    def _eval_one(self, ti):
        for (a, b, route), sol in zip(self.spans, self._pieces):
            if ti <= b or (a, b, route) == self.spans[-1]:
                y = sol(ti)
                return _recover(ti, y, self.cfg) if route == "resolvent" else y
        raise DomainError("time outside the solved span")


def _switch_points(t_end, cfg, ratio):
    # spans where |det| / scale < ratio, with exit at 2 * ratio (hysteresis)
    period_guess = 2.0 * np.pi / max(np.sqrt(cfg.p0 ** 2 + cfg.q0 ** 2 + cfg.r0 ** 2)
                                     * max(abs(cfg.A - cfg.C) / cfg.A, 1.0), 1e-300)
    n = int(np.clip(64 * t_end / period_guess, 2000, 200000))
    tt = np.linspace(0.0, t_end, n)
    det, scale = resolvent_denominator(tt, cfg)
    rel = np.abs(det) / np.where(scale > 0, scale, 1.0)
    spans = []
    i = 0
    route = "resolvent" if rel[0] >= ratio else "poisson"
    start = 0.0
    while i < n - 1:
        limit = ratio if route == "resolvent" else 2.0 * ratio
        nxt = np.nonzero((rel[i + 1:] < limit) if route == "resolvent"
                         else (rel[i + 1:] >= limit))[0]
        if nxt.size == 0:
            break
        j = i + 1 + nxt[0]
        tj = _refine(tt[j - 1], tt[j], cfg, limit)
        spans.append((start, tj, route))
        start = tj
        route = "poisson" if route == "resolvent" else "resolvent"
        i = j
    spans.append((start, t_end, route))
    return spans


def _refine(a, b, cfg, level):
    from scipy.optimize import brentq

    def f(t):
        det, scale = resolvent_denominator(t, cfg)
        return abs(det) / scale - level

    fa, fb = f(a), f(b)
    if fa * fb > 0:
        return b
    return brentq(f, a, b, xtol=1e-14)


def solve_gamma(t_end, cfg, route="resolvent", rtol=_RTOL, atol=_ATOL):
    """Direction cosines on [0, t_end].

    ``route="resolvent"`` integrates the third-order equation for gamma1 and
    recovers gamma2, gamma3 algebraically, switching to the Poisson
    equations wherever the recovery denominator is small.  ``route="poisson"``
    integrates the Poisson equations throughout.
    """
    if not (np.isfinite(t_end) and t_end > 0):
        raise DomainError("t_end must be positive")
    g0 = np.asarray(cfg.gamma0, float)
    if route == "poisson":
        spans = [(0.0, float(t_end), "poisson")]
    elif route == "resolvent":
        spans = _switch_points(float(t_end), cfg, SWITCH_RATIO)
    else:
        raise DomainError(f"unknown route {route!r}")
    pieces = []
    gamma = g0
    for a, b, kind in spans:
        if kind == "resolvent":
            y0 = _resolvent_state(a, gamma, cfg)
            sol = solve_ivp(_resolvent_rhs(cfg), (a, b), y0, method="DOP853", rtol=rtol,
                            atol=atol, dense_output=True)
            gamma = _recover(b, sol.y[:, -1], cfg)
        else:
            sol = solve_ivp(_poisson_rhs(cfg), (a, b), gamma, method="DOP853", rtol=rtol,
                            atol=atol, dense_output=True)
            gamma = sol.y[:, -1]
        pieces.append(sol.sol)
    return GammaSolution(spans, pieces, cfg)


def gamma_cosines(t_grid, cfg, route="resolvent"):
    """(gamma1, gamma2, gamma3) sampled on ``t_grid`` (non-negative, increasing)."""
    t = _check_grid(t_grid)
    sol = solve_gamma(max(t[-1], 1e-12), cfg, route)
    g = sol(t)
    return g[0], g[1], g[2]


def _check_grid(t_grid):
    t = np.atleast_1d(np.asarray(t_grid, float))
    if t.size == 0 or not np.all(np.isfinite(t)) or t[0] < 0 or np.any(np.diff(t) < 0):
        raise DomainError("time grid must be finite, non-negative and non-decreasing")
    return t


def _psi_rate(t, sol, cfg):
    p, q, r = rates(t, cfg)
    g1, g2, g3 = sol(t)[:, 0]
    sin2 = 1.0 - g3 * g3
    if abs(g3) >= _COS_GUARD:
        # (r - phi') / cos(theta), phi' from tan(phi) = gamma1 / gamma2
        dg1 = r * g2 - q * g3
        dg2 = p * g3 - r * g1
        phi_dot = (dg1 * g2 - g1 * dg2) / sin2
        return (r - phi_dot) / g3
    return (p * g1 + q * g2) / sin2


@dataclass
class ViscousAngles:
    """Euler angles on a grid plus the spans where a guard was active."""

    t: np.ndarray
    theta: np.ndarray
    phi: np.ndarray
    psi: np.ndarray
    gamma: np.ndarray
    resolvent_flags: list
    cos_theta_flags: list

    def __iter__(self):
        return iter((self.theta, self.phi, self.psi))


def euler_angles_viscous(t_grid, cfg, psi0=0.0):
    """(theta, phi, psi) on ``t_grid``.

    theta = arccos(gamma3) and phi = atan2(gamma1, gamma2), unwrapped.
    psi is integrated between grid points from (r - phi') / cos(theta);
    where |cos(theta)| < 0.1 the equivalent regular form
    (p gamma1 + q gamma2) / sin^2(theta) is used and the span is flagged.
    """
    t = _check_grid(t_grid)
    sol = solve_gamma(max(t[-1], 1e-12), cfg)
    g = sol(t)
    if np.any(1.0 - g[2] ** 2 < 1e-14):
        raise DomainError("the figure axis passes through the vertical (|gamma3| = 1)")
    theta = np.arccos(np.clip(g[2], -1.0, 1.0))
    phi = np.unwrap(np.arctan2(g[0], g[1]))
    psi = np.empty_like(t)
    psi[0] = psi0
    for i in range(1, t.size):
        inc = quad(_psi_rate, t[i - 1], t[i], args=(sol, cfg), epsabs=1e-13, epsrel=1e-12,
                   limit=200)[0] if t[i] > t[i - 1] else 0.0
        psi[i] = psi[i - 1] + inc
    near = np.abs(g[2]) < _COS_GUARD
    cos_flags = []
    if np.any(near):
        edges = np.flatnonzero(np.diff(np.concatenate([[0], near.astype(int), [0]])))
        cos_flags = [(t[a], t[b - 1]) for a, b in zip(edges[::2], edges[1::2])]
    return ViscousAngles(t, theta, phi, psi, g, sol.flagged, cos_flags)
