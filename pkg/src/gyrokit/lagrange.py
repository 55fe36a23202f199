"""Heavy symmetric top (Lagrange-Poisson case) in closed form.

The body has A = B, the centre of gravity on the figure axis at height
``z_G`` above the fixed point, and Euler angles (psi, theta, phi) in the
z-x-z convention: psi precession, theta nutation, phi spin.  With
s = cos(theta), rho = sqrt(2 M g z_G / A) and the constants

    h = E0 / (M g z_G),  c = C / A,  k = K_z0 / (A rho),  lam = r0 / rho,

the nutation obeys ds/dt^2 = rho^2 (s - s1)(s - s2)(s - s3) and

    s(t) = s1 + (s2 - s1) sn^2(u, k_nut),   u = rho sqrt(s3 - s1) / 2 * t + u0.

Precession and spin then follow from the cubic-radical integrals in
:mod:`gyrokit.integrals`:

    psi - psi0 = int (k - c lam s) / (1 - s^2) ds / sqrt(...)
    phi - phi0 = r0 t - int (k - c lam s) s / (1 - s^2) ds / sqrt(...)

Both are accumulated monotone leg by monotone leg of the nutation.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import AssumptionError, DomainError, SingularityError
from .integrals import weighted, weighted_from_amplitude
from .specfun.elliptic import _ellipf_m, _ellipk_m, _jacobi_m

GIMBAL_GUARD = 1e-9
# relative gap below which s1, s2 count as a double root
DOUBLE_ROOT_GAP = 1e-7


@dataclass(frozen=True)
class SymmetricTopConfig:
    """Physical data and initial state of a heavy symmetric top.

    ``E0`` is the total energy (kinetic plus potential M g z_G cos(theta)).
    The six initial values fix the motion up to the direction in which the
    nutation starts; ``nutation_sign`` picks it (+1: cos(theta) increasing,
    i.e. the figure axis rising, at t = 0).
    """

    A: float
    C: float
    M: float
    g: float
    z_G: float
    theta0: float
    phi0: float
    psi0: float
    r0: float
    K_z0: float
    E0: float
    nutation_sign: int = 1

    def __post_init__(self):
        for name in ("A", "C", "M", "g", "z_G"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise AssumptionError("positive body data", f"{name} must be positive, got {v}")
        for name in ("theta0", "phi0", "psi0", "r0", "K_z0", "E0"):
            if not np.isfinite(getattr(self, name)):
                raise AssumptionError("finite initial data", f"{name} is not finite")
        if self.nutation_sign not in (1, -1):
            raise DomainError("nutation_sign must be +1 or -1")

    @classmethod
    def from_rates(cls, A, C, M, g, z_G, theta0, phi0, psi0, theta_dot0, psi_dot0, r0):
        """Build a configuration from initial Euler angles and rates."""
        s0 = np.cos(theta0)
        sin2 = np.sin(theta0) ** 2
        K_z0 = A * psi_dot0 * sin2 + C * r0 * s0
        E0 = (0.5 * A * (theta_dot0 ** 2 + psi_dot0 ** 2 * sin2) + 0.5 * C * r0 ** 2
              + M * g * z_G * s0)
        # ds/dt = -sin(theta) theta_dot
        sign = 1 if -np.sin(theta0) * theta_dot0 >= 0 else -1
        return cls(A, C, M, g, z_G, theta0, phi0, psi0, r0, K_z0, E0, sign)


@dataclass(frozen=True)
class DerivedTopParams:
    """Dimensionless constants of the nutation resolvent.

    ``lam`` is r0 / rho_hat (``lambda`` is reserved in Python).
    """

    rho_hat: float
    h: float
    c: float
    k_hat: float
    lam: float


@dataclass(frozen=True)
class ResolventRoots:
    """Ordered roots s1 < s2 < s3 of the resolvent, nutation modulus ``k``
    and the phase constant ``L`` (time-like, in units of 1/rho_hat)."""

    s1: float
    s2: float
    s3: float
    k: float
    L: float

    @property
    def m(self):
        return self.k * self.k

    @property
    def phase_scale(self):
        return 0.5 * np.sqrt(self.s3 - self.s1)

    @property
    def u0(self):
        return self.L * self.phase_scale


def derive_params(cfg):
    """Dimensionless constants rho_hat, h, c, k_hat, lam of ``cfg``."""
    weight = cfg.M * cfg.g * cfg.z_G
    rho = np.sqrt(2.0 * weight / cfg.A)
    return DerivedTopParams(
        rho_hat=float(rho),
        h=cfg.E0 / weight,
        c=cfg.C / cfg.A,
        k_hat=cfg.K_z0 / (cfg.A * rho),
        lam=cfg.r0 / rho,
    )


def resolvent(s, dp):
    """f(s) = rho^2 [(h - c lam^2 - s)(1 - s^2) - (k - c lam s)^2]."""
    s = np.asarray(s, float)
    H = dp.h - dp.c * dp.lam ** 2
    return dp.rho_hat ** 2 * ((H - s) * (1.0 - s * s) - (dp.k_hat - dp.c * dp.lam * s) ** 2)


def _monic(dp):
    # f / rho^2 = s^3 + b2 s^2 + b1 s + b0
    H = dp.h - dp.c * dp.lam ** 2
    cl = dp.c * dp.lam
    return (-(H + cl * cl), 2.0 * dp.k_hat * cl - 1.0, H - dp.k_hat ** 2)


def _cubic_roots(b2, b1, b0):
    # trigonometric solution of the depressed cubic x^3 + p x + q
    shift = b2 / 3.0
    p = b1 - b2 * b2 / 3.0
    q = 2.0 * b2 ** 3 / 27.0 - b2 * b1 / 3.0 + b0
    if p >= 0:
        raise AssumptionError("Assumption 3", "resolvent has fewer than three real roots")
    amp = 2.0 * np.sqrt(-p / 3.0)
    arg = 3.0 * q / (p * amp)
    if abs(arg) > 1.0 + 1e-12:
        raise AssumptionError("Assumption 3", "resolvent has fewer than three real roots")
    theta = np.arccos(np.clip(arg, -1.0, 1.0)) / 3.0
    roots = np.sort(amp * np.cos(theta - 2.0 * np.pi * np.arange(3) / 3.0) - shift)
    # Newton polish, keeping a step only if it shrinks the residual (near a
    # double root the derivative vanishes and an unguarded step diverges)
    def cubic(x):
        return ((x + b2) * x + b1) * x + b0

    for _ in range(2):
        der = (3.0 * roots + 2.0 * b2) * roots + b1
        with np.errstate(divide="ignore", invalid="ignore"):
            trial = roots - cubic(roots) / der
        better = np.isfinite(trial) & (np.abs(cubic(trial)) < np.abs(cubic(roots)))
        roots = np.where(better, trial, roots)
    return np.sort(roots)


def resolvent_roots(dp, s0, nutation_sign=1):
    """Roots of the resolvent cubic bracketing the initial cosine ``s0``.

    Raises
    ------
    AssumptionError
        Names the violated assumption: 1 (c lam = +-k_hat), 2 (f(+-1) >= 0)
        or 3 (s0 outside the oscillation band, or a double root meaning
        steady precession).
    """
    cl = dp.c * dp.lam
    scale = max(1.0, abs(cl), abs(dp.k_hat))
    if abs(cl - dp.k_hat) <= 1e-12 * scale or abs(cl + dp.k_hat) <= 1e-12 * scale:
        raise AssumptionError("Assumption 1", "c*lambda equals +-k_hat (gimbal-lock motion)")
    if not (resolvent(-1.0, dp) < 0 and resolvent(1.0, dp) < 0):
        raise AssumptionError("Assumption 2", "f(-1) and f(1) must be negative")
    if not -1.0 < s0 < 1.0:
        raise AssumptionError("Assumption 2", "initial figure axis must not be vertical")
    fs0 = resolvent(s0, dp)
    tol = 1e-12 * dp.rho_hat ** 2 * max(1.0, abs(dp.h) + cl * cl + dp.k_hat ** 2)
    if fs0 < -tol:
        raise AssumptionError("Assumption 3", f"f(s0) = {fs0:.3e} < 0: energy too low for s0")
    s1, s2, s3 = _cubic_roots(*_monic(dp))
    if not (-1.0 < s1 and s2 < 1.0 < s3):
        raise AssumptionError("Assumption 3", "roots not ordered as -1 < s1 <= s2 < 1 < s3")
    # round-off splits a double root by about sqrt(eps)
    if s2 - s1 <= DOUBLE_ROOT_GAP * (s3 - s1):
        raise AssumptionError("Assumption 3", "double root s1 = s2 (steady precession)")
    s0c = min(max(s0, s1), s2)
    if abs(s0c - s0) > 1e-9:
        raise AssumptionError("Assumption 3", "s0 outside [s1, s2]")
    m = (s2 - s1) / (s3 - s1)
    start = np.arcsin(np.sqrt((s0c - s1) / (s2 - s1)))
    u0 = nutation_sign * float(_ellipf_m(start, m))
    L = 2.0 * u0 / np.sqrt(s3 - s1)
    return ResolventRoots(float(s1), float(s2), float(s3), float(np.sqrt(m)), float(L))


@lru_cache(maxsize=256)
def _setup(cfg):
    dp = derive_params(cfg)
    rr = resolvent_roots(dp, float(np.cos(cfg.theta0)), cfg.nutation_sign)
    return dp, rr


def nutation_phase(t, cfg):
    """Jacobi argument u(t) of the nutation."""
    dp, rr = _setup(cfg)
    return dp.rho_hat * rr.phase_scale * np.asarray(t, float) + rr.u0


def nutation_period(cfg):
    """Time for cos(theta) to complete one oscillation s1 -> s2 -> s1."""
    dp, rr = _setup(cfg)
    return float(2.0 * _ellipk_m(rr.m) / (dp.rho_hat * rr.phase_scale))


def nutation(t, rr, dp):
    """s(t) = cos(theta(t)) = s1 + (s2 - s1) sn^2(u(t))."""
    u = dp.rho_hat * rr.phase_scale * np.asarray(t, float) + rr.u0
    sn = np.sin(_jacobi_m(u, rr.m))
    out = rr.s1 + (rr.s2 - rr.s1) * sn * sn
    return out[()] if out.ndim == 0 else out


def _leg_values(value, half, branch):
    branch = np.asarray(branch)
    odd = branch % 2 == 1
    return branch * half + np.where(odd, half - value, value)


def _theta_to_s(theta, rr):
    s = np.cos(np.asarray(theta, float))
    slack = 1e-12
    if np.any(s < rr.s1 - slack) or np.any(s > rr.s2 + slack):
        raise DomainError("cos(theta) outside the nutation band [s1, s2]")
    return np.clip(s, rr.s1, rr.s2)


def _angle_of_theta(theta, rr, dp, branch, form, times_u):
    s = _theta_to_s(theta, rr)
    w0, w1 = dp.k_hat, dp.c * dp.lam
    g = np.asarray(weighted(rr.s3, rr.s2, rr.s1, w0, w1, s, times_u, form))
    half = float(weighted(rr.s3, rr.s2, rr.s1, w0, w1, rr.s2, times_u, "elliptic"))
    out = _leg_values(g, half, branch)
    return out[()] if np.ndim(out) == 0 else out


def precession_of_theta(theta, rr, dp, branch=0, form="hypergeometric"):
    """Precession accumulated since the figure axis last left s1 = cos(theta1).

    Parameters
    ----------
    theta : array_like
        Nutation angle with cos(theta) in [s1, s2].
    branch : int or array_like
        Monotone-leg index: even legs rise s1 -> s2, odd legs fall back;
        leg ``j`` adds ``j`` half-oscillation increments.
    form : {"hypergeometric", "elliptic", "quadrature"}

    Returns
    -------
    psi increment, measured so that branch 0 at cos(theta) = s1 gives 0.
    """
    return _angle_of_theta(theta, rr, dp, branch, form, times_u=False)


def spin_of_theta(theta, rr, dp, branch=0, form="hypergeometric"):
    """Geometric part of the spin, -int psi_dot cos(theta) dt, per leg.

    The full spin is ``phi - phi0 = r0 t + spin_of_theta(t) - spin_of_theta(0)``;
    the ``r0 t`` term is not a function of theta alone.
    """
    return -np.asarray(_angle_of_theta(theta, rr, dp, branch, form, times_u=True))[()]


def _psi_phi_parts(u, rr, dp, form):
    # accumulated precession and geometric spin as functions of the phase
    amp = _jacobi_m(u, rr.m)
    w0, w1 = dp.k_hat, dp.c * dp.lam
    args = (rr.s3, rr.s2, rr.s1, w0, w1)
    if form == "elliptic":
        psi = weighted_from_amplitude(*args, amp, times_u=False)
        spin = -np.asarray(weighted_from_amplitude(*args, amp, times_u=True))
        return np.asarray(psi), spin
    K = float(_ellipk_m(rr.m))
    branch = np.floor(u / K).astype(int)
    sn = np.sin(amp)
    s = rr.s1 + (rr.s2 - rr.s1) * sn * sn
    theta = np.arccos(s)
    psi = precession_of_theta(theta, rr, dp, branch, form)
    spin = spin_of_theta(theta, rr, dp, branch, form)
    return np.asarray(psi), np.asarray(spin)


def angles_of_t(t, cfg, form="elliptic"):
    """Euler angles (theta, psi, phi) at times ``t``.

    ``form="elliptic"`` drives the elliptic integrals directly with the
    unwrapped Jacobi amplitude; ``"hypergeometric"`` evaluates the
    Lauricella closed forms on each monotone leg and stitches them.
    """
    dp, rr = _setup(cfg)
    t = np.asarray(t, float)
    u = dp.rho_hat * rr.phase_scale * t + rr.u0
    u_all = np.append(np.ravel(u), rr.u0)
    psi_u, spin_u = _psi_phi_parts(u_all, rr, dp, form)
    psi_u, spin_u = np.ravel(psi_u), np.ravel(spin_u)
    sn = np.sin(_jacobi_m(u, rr.m))
    s = rr.s1 + (rr.s2 - rr.s1) * sn * sn
    theta = np.arccos(s)
    psi = cfg.psi0 + (psi_u[:-1] - psi_u[-1]).reshape(t.shape)
    phi = cfg.phi0 + cfg.r0 * t + (spin_u[:-1] - spin_u[-1]).reshape(t.shape)
    if t.ndim == 0:
        return float(theta), float(psi), float(phi)
    return theta, psi, phi


def _s_and_sdot(t, cfg):
    dp, rr = _setup(cfg)
    rate = dp.rho_hat * rr.phase_scale
    u = rate * np.asarray(t, float) + rr.u0
    amp = _jacobi_m(u, rr.m)
    sn, cn = np.sin(amp), np.cos(amp)
    dn = np.sqrt(1.0 - rr.m * sn * sn)
    s = rr.s1 + (rr.s2 - rr.s1) * sn * sn
    sdot = 2.0 * (rr.s2 - rr.s1) * sn * cn * dn * rate
    return s, sdot


def direction_cosines(t, cfg):
    """Body-frame components (gamma1, gamma2, gamma3) of the upward vertical."""
    theta, _, phi = angles_of_t(t, cfg)
    st = np.sin(theta)
    return st * np.sin(phi), st * np.cos(phi), np.cos(theta)


def body_rates(t, cfg):
    """Body angular velocity (p, q, r) at times ``t``.

    p and q come from the vertical momentum component and the third
    Poisson equation; r = r0 throughout.
    """
    dp, _ = _setup(cfg)
    g1, g2, g3 = direction_cosines(t, cfg)
    _, g3dot = _s_and_sdot(t, cfg)
    sin2 = 1.0 - g3 * g3
    if np.any(np.abs(g3) > 1.0 - GIMBAL_GUARD):
        raise SingularityError("body_rates", "figure axis vertical (gimbal degeneracy)")
    w = dp.rho_hat * (dp.k_hat - dp.c * dp.lam * g3)
    p = (w * g1 - g3dot * g2) / sin2
    q = (w * g2 + g3dot * g1) / sin2
    r = np.full(np.shape(p), cfg.r0)[()]
    return p, q, r


def first_integrals(t, cfg):
    """Energy, vertical momentum and cosine norm along the closed form."""
    p, q, r = body_rates(t, cfg)
    g1, g2, g3 = direction_cosines(t, cfg)
    energy = (0.5 * cfg.A * (p * p + q * q) + 0.5 * cfg.C * r * r
              + cfg.M * cfg.g * cfg.z_G * g3)
    kz = cfg.A * (p * g1 + q * g2) + cfg.C * r * g3
    return energy, kz, g1 * g1 + g2 * g2 + g3 * g3


def rotation_matrix(theta, psi, phi):
    """Body-to-space direction-cosine matrix for z-x-z Euler angles.

    Rows are the space axes X, Y, Z; the third row is (gamma1, gamma2,
    gamma3).  Array inputs give a stack of shape ``(..., 3, 3)``.
    """
    ct, st = np.cos(theta), np.sin(theta)
    cs, ss = np.cos(psi), np.sin(psi)
    cf, sf = np.cos(phi), np.sin(phi)
    R = np.array([
        [cs * cf - ss * sf * ct, -cs * sf - ss * cf * ct, st * ss],
        [ss * cf + cs * sf * ct, -ss * sf + cs * cf * ct, -st * cs],
        [st * sf, st * cf, ct * np.ones_like(cf)],
    ], dtype=float)
    return np.moveaxis(R, (0, 1), (-2, -1))


def _space_vectors(t, cfg):
    theta, psi, phi = angles_of_t(t, cfg)
    R = rotation_matrix(theta, psi, phi)
    w = np.stack(np.broadcast_arrays(*body_rates(t, cfg)), axis=-1)
    return R, w


def point_trajectory(t, cfg, body_point):
    """Space position and velocity of a point fixed in the body.

    Returns
    -------
    position, velocity : ndarray of shape ``(..., 3)``
    """
    R, w = _space_vectors(t, cfg)
    x = np.asarray(body_point, float)
    pos = R @ x
    omega = (R @ w[..., None])[..., 0]
    return pos, np.cross(omega, pos)


def _body_accel(cfg, p, q, g1, g2):
    mgz = cfg.M * cfg.g * cfg.z_G
    pdot = ((cfg.A - cfg.C) * q * cfg.r0 + mgz * g2) / cfg.A
    qdot = ((cfg.C - cfg.A) * cfg.r0 * p - mgz * g1) / cfg.A
    return np.stack([pdot, qdot, np.zeros_like(pdot)], axis=-1)


def constraint_reaction(t, cfg):
    """Reaction force at the support, M a_G + M g Z_hat, in space axes."""
    R, w = _space_vectors(t, cfg)
    p, q, _ = (w[..., 0], w[..., 1], w[..., 2])
    g1, g2, _ = direction_cosines(t, cfg)
    wdot = _body_accel(cfg, p, q, g1, g2)
    # d(R w)/dt = R (w_dot + w x w) = R w_dot
    omega = (R @ w[..., None])[..., 0]
    alpha = (R @ wdot[..., None])[..., 0]
    rg = R @ np.array([0.0, 0.0, cfg.z_G])
    accel = np.cross(alpha, rg) + np.cross(omega, np.cross(omega, rg))
    return cfg.M * accel + np.array([0.0, 0.0, cfg.M * cfg.g])


def initial_state(cfg):
    """Body rates and vertical cosines at t = 0 (oracle initial condition)."""
    p, q, r = body_rates(0.0, cfg)
    g1, g2, g3 = direction_cosines(0.0, cfg)
    return np.array([p, q, r, g1, g2, g3], float)


def trajectory(t, cfg):
    """Trajectory records (t, angles, rates, cosines, apex position)."""
    t = np.asarray(t, float)
    theta, psi, phi = angles_of_t(t, cfg)
    p, q, r = body_rates(t, cfg)
    g1, g2, g3 = direction_cosines(t, cfg)
    apex, _ = point_trajectory(t, cfg, (0.0, 0.0, 1.0))
    return {
        "t": t, "theta": theta, "psi": psi, "phi": phi, "p": p, "q": q,
        "r": np.broadcast_to(r, t.shape), "gamma1": g1, "gamma2": g2, "gamma3": g3,
        "X": apex[..., 0], "Y": apex[..., 1], "Z": apex[..., 2],
    }
