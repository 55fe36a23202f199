"""Numerical reference solutions for the rigid-body systems.

Everything here integrates the governing ODEs directly (Euler equations
plus Poisson kinematics) with an adaptive embedded Runge-Kutta pair.  It
deliberately shares no code with :mod:`gyrokit.specfun` or the closed-form
solvers, so disagreement between the two is meaningful.

State vector: (p, q, r, gamma1, gamma2, gamma3) with gamma the body-frame
components of the space-fixed upward unit vector, optionally followed by
the Euler angles (psi, phi) when ``with_angles`` is set.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .errors import DomainError, SingularityError


@dataclass
class DynamicalSystem:
    """Right-hand side, optional invariants and a suggested initial state."""

    dimension: int
    rhs: object
    invariants: object = None
    invariant_names: tuple = ()
    initial_state: np.ndarray = None
    jacobian: object = None


@dataclass
class IntegrationResult:
    """Samples, dense interpolant and invariant drift of one integration."""

    t: np.ndarray
    y: np.ndarray
    max_drift: np.ndarray
    n_steps: int
    n_rhs: int
    solution: object = field(repr=False, default=None)
    t_events: list = field(default_factory=list)

    def __call__(self, t):
        return self.solution(t)


def integrate(sys, y0, t_span, rtol=1e-12, atol=1e-13, t_eval=None, events=None,
              method="DOP853"):
    """Integrate ``sys`` from ``y0`` over ``t_span``.

    Invariant drift is measured against the initial values at every
    accepted step (not just at ``t_eval``).

    Raises
    ------
    SingularityError
        If the step size underflows; ``time`` is the last good time.
    """
    y0 = np.asarray(y0, float)
    if y0.shape != (sys.dimension,):
        raise DomainError(f"initial state must have shape ({sys.dimension},)")
    t0, t1 = map(float, t_span)
    if not (np.isfinite(t0) and np.isfinite(t1)):
        raise DomainError("time span must be finite")
    if rtol <= 0 or atol <= 0:
        raise DomainError("tolerances must be positive")
    sol = solve_ivp(sys.rhs, (t0, t1), y0, method=method, rtol=rtol, atol=atol,
                    dense_output=True, events=events)
    if sol.status == -1:
        t_bad = float(sol.t[-1]) if sol.t.size else t0
        raise SingularityError("integrate", sol.message, time=t_bad)
    if sys.invariants is not None:
        ref = np.asarray(sys.invariants(y0), float)
        vals = np.array([sys.invariants(col) for col in sol.y.T], float)
        drift = np.max(np.abs(vals - ref), axis=0)
    else:
        drift = np.zeros(0)
    if t_eval is not None:
        t_out = np.asarray(t_eval, float)
        y_out = sol.sol(t_out)
    else:
        t_out, y_out = sol.t, sol.y
    return IntegrationResult(t_out, y_out, drift, sol.t.size - 1, sol.nfev, sol.sol,
                             [] if sol.t_events is None else list(sol.t_events))


def _poisson(w, g):
    p, q, r = w
    g1, g2, g3 = g
    return np.array([r * g2 - q * g3, p * g3 - r * g1, q * g1 - p * g2])


def _angle_rates(w, g):
    # psi_dot and phi_dot from the vertical cosines (regular while |g3| < 1)
    p, q, r = w
    g1, g2, g3 = g
    psi_dot = (p * g1 + q * g2) / (1.0 - g3 * g3)
    return np.array([psi_dot, r - psi_dot * g3])


def _euler_state(theta, phi, theta_dot, psi_dot, r):
    st, ct = np.sin(theta), np.cos(theta)
    sf, cf = np.sin(phi), np.cos(phi)
    p = theta_dot * cf + psi_dot * st * sf
    q = -theta_dot * sf + psi_dot * st * cf
    return np.array([p, q, r, st * sf, st * cf, ct])


def build_heavy_top_system(cfg, with_angles=False):
    """Euler equations under gravity plus Poisson kinematics.

    ``cfg`` is a :class:`gyrokit.lagrange.SymmetricTopConfig`.  Invariants:
    total energy, vertical momentum, |gamma|^2.
    """
    A, C, mgz = cfg.A, cfg.C, cfg.M * cfg.g * cfg.z_G

    def rhs(t, y):
        p, q, r = y[:3]
        g = y[3:6]
        # torque of the weight about O is M g z_G (gamma2, -gamma1, 0)
        dw = np.array([((A - C) * q * r + mgz * g[1]) / A,
                       ((C - A) * r * p - mgz * g[0]) / A,
                       0.0])
        out = np.concatenate([dw, _poisson(y[:3], g)])
        if with_angles:
            out = np.concatenate([out, _angle_rates(y[:3], g)])
        return out

    def invariants(y):
        p, q, r, g1, g2, g3 = y[:6]
        return np.array([0.5 * A * (p * p + q * q) + 0.5 * C * r * r + mgz * g3,
                         A * (p * g1 + q * g2) + C * r * g3,
                         g1 * g1 + g2 * g2 + g3 * g3])

    s0 = np.cos(cfg.theta0)
    sin2 = 1.0 - s0 * s0
    psi_dot = (cfg.K_z0 - C * cfg.r0 * s0) / (A * sin2)
    pq2 = 2.0 * (cfg.E0 - 0.5 * C * cfg.r0 ** 2 - mgz * s0) / A
    theta_dot2 = max(pq2 - psi_dot ** 2 * sin2, 0.0)
    # ds/dt = -sin(theta) theta_dot carries the sign of the nutation
    theta_dot = -cfg.nutation_sign * np.sqrt(theta_dot2)
    y0 = _euler_state(cfg.theta0, cfg.phi0, theta_dot, psi_dot, cfg.r0)
    if with_angles:
        y0 = np.concatenate([y0, [cfg.psi0, cfg.phi0]])
    return DynamicalSystem(8 if with_angles else 6, rhs, invariants,
                           ("energy", "K_z", "gamma_norm"), y0)


def build_free_body_system(cfg, with_angles=False):
    """Torque-free Euler equations plus Poisson kinematics.

    ``cfg`` is a :class:`gyrokit.poinsot.FreeBodyConfig`.  The vertical is
    taken along the angular momentum, so gamma = (A p, B q, C r) / |K|.
    Initial state: q = 0, p >= 0, r >= 0.  Invariants: 2 T and |K|^2.
    """
    A, B, C = cfg.A, cfg.B, cfg.C
    K = cfg.K_norm

    def rhs(t, y):
        p, q, r = y[:3]
        dw = np.array([(B - C) * q * r / A, (C - A) * r * p / B, (A - B) * p * q / C])
        out = np.concatenate([dw, _poisson(y[:3], y[3:6])])
        if with_angles:
            out = np.concatenate([out, _angle_rates(y[:3], y[3:6])])
        return out

    def invariants(y):
        p, q, r = y[:3]
        return np.array([A * p * p + B * q * q + C * r * r,
                         A * A * p * p + B * B * q * q + C * C * r * r])

    two_t = 2.0 * cfg.E0
    p2 = (K * K - two_t * C) / (A * (A - C))
    r2 = (K * K - two_t * A) / (C * (C - A))
    p0, r0 = np.sqrt(max(p2, 0.0)), np.sqrt(max(r2, 0.0))
    y0 = np.array([p0, 0.0, r0, A * p0 / K, 0.0, C * r0 / K])
    if with_angles:
        y0 = np.concatenate([y0, [cfg.psi0, 0.5 * np.pi]])
    return DynamicalSystem(8 if with_angles else 6, rhs, invariants, ("2T", "K^2"), y0)


def build_viscous_system(cfg, with_angles=False):
    """Symmetric body (A = B) under viscous torque -mu omega, plus Poisson.

    Invariant: |gamma|^2.  The kinetic energy is available from
    :func:`kinetic_energy` and must decrease.
    """
    A, C, mu = cfg.A, cfg.C, cfg.mu

    def rhs(t, y):
        p, q, r = y[:3]
        dw = np.array([((A - C) * q * r - mu * p) / A,
                       ((C - A) * r * p - mu * q) / A,
                       -mu * r / C])
        out = np.concatenate([dw, _poisson(y[:3], y[3:6])])
        if with_angles:
            out = np.concatenate([out, _angle_rates(y[:3], y[3:6])])
        return out

    def invariants(y):
        g = y[3:6]
        return np.array([g @ g])

    y0 = np.concatenate([[cfg.p0, cfg.q0, cfg.r0], np.asarray(cfg.gamma0, float)])
    return DynamicalSystem(6, rhs, invariants, ("gamma_norm",), y0) if not with_angles else \
        DynamicalSystem(8, rhs, invariants, ("gamma_norm",), np.concatenate([y0, [0.0, 0.0]]))


def kinetic_energy(y, A, B, C):
    """Rotational kinetic energy for states stored column-wise."""
    p, q, r = y[0], y[1], y[2]
    return 0.5 * (A * p * p + B * q * q + C * r * r)
