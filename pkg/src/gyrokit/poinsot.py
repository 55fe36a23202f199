"""Torque-free asymmetric body (Euler-Poinsot case) in closed form.

Conventions: ``E0`` is the kinetic energy T, so that

    A p^2 + B q^2 + C r^2 = 2 E0,    A^2 p^2 + B^2 q^2 + C^2 r^2 = |K|^2.

The motion starts with q = 0, p >= 0, r >= 0 and the rates are

    p = p_M cn(tau, k),  q = sigma q_M sn(tau, k),  r = r_M dn(tau, k),

with tau = tau_rate * t and sigma = sign(C - A) (q grows with the sense of
the Euler coupling (C - A) r p / B).

The formulas hold for either extreme axis as the spin axis: C > B > A
with 2 E0 B < |K|^2 <= 2 E0 C, or A > B > C with 2 E0 C <= |K|^2 < 2 E0 B.
Every radicand is validated instead of assuming an ordering.

The attitude uses z-x-z Euler angles with the space Z axis along K.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import AssumptionError, DomainError
from .integrals import i3_param, i4_param
from .specfun.elliptic import _ellipk_m, _jacobi_m


@dataclass(frozen=True)
class FreeBodyConfig:
    """Principal moments, kinetic energy ``E0``, |K| and initial precession."""

    A: float
    B: float
    C: float
    E0: float
    K_norm: float
    psi0: float = 0.0

    def __post_init__(self):
        for name in ("A", "B", "C", "E0", "K_norm"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise AssumptionError("positive free-body data", f"{name} must be positive")
        if not np.isfinite(self.psi0):
            raise AssumptionError("finite initial data", "psi0 is not finite")

    @classmethod
    def from_rates(cls, A, B, C, p0, r0, psi0=0.0):
        """Configuration whose motion starts from (p0, 0, r0)."""
        E0 = 0.5 * (A * p0 * p0 + C * r0 * r0)
        K = np.hypot(A * p0, C * r0)
        return cls(A, B, C, E0, float(K), psi0)


@dataclass(frozen=True)
class FreeBodyDerived:
    """Amplitudes, modulus, time scale and precession parameters.

    ``delta2 = (B q_M / (A p_M))^2``, ``eps2 = 1 - delta2`` (never positive)
    and ``gamma2 = eps2 / (1 + eps2)``.  ``ratio`` is B q_M^2 / (A p_M^2)
    and ``q_sign`` is sign(C - A).
    """

    p_M: float
    q_M: float
    r_M: float
    k_hat: float
    tau_rate: float
    delta2: float
    eps2: float
    gamma2: float
    ratio: float
    q_sign: float = 1.0

    @property
    def period(self):
        """Rate period 4 K(k_hat) in tau."""
        return 4.0 * float(_ellipk_m(self.k_hat ** 2))


def _radicand(name, num, den):
    if den == 0:
        raise AssumptionError("inertia ordering", f"{name}: zero denominator (equal moments)")
    val = num / den
    if val < 0:
        raise AssumptionError(
            "inertia ordering",
            f"{name} radicand is negative ({val:.6g}); the constants need either "
            "C > B > A with 2*E0*B < K^2 <= 2*E0*C or A > B > C with 2*E0*C <= K^2 < 2*E0*B")
    return val


def derive_free(cfg):
    """Validate ``cfg`` and compute the closed-form constants."""
    A, B, C = cfg.A, cfg.B, cfg.C
    two_t = 2.0 * cfg.E0
    K2 = cfg.K_norm ** 2
    if A == C:
        raise AssumptionError("inertia ordering", "A = C leaves no spin axis")
    p2 = _radicand("p_M", two_t * C - K2, A * (C - A))
    q2 = _radicand("q_M", two_t * C - K2, B * (C - B)) if B != C else None
    if q2 is None:
        raise AssumptionError("inertia ordering", "B = C: the intermediate axis is degenerate")
    r2 = _radicand("r_M", K2 - two_t * A, C * (C - A))
    tau2 = _radicand("tau_rate", (C - B) * (K2 - two_t * A), A * B * C)
    if tau2 == 0:
        raise AssumptionError("inertia ordering", "tau_rate vanishes (rotation about the "
                              "intermediate axis or K^2 = 2*E0*A)")
    k2 = _radicand("k_hat", (B - A) * (two_t * C - K2), (C - B) * (K2 - two_t * A))
    if k2 >= 1.0:
        raise AssumptionError("inertia ordering",
                              f"modulus k_hat^2 = {k2:.6g} >= 1 (separatrix or wrong side of "
                              "2*E0*B)")
    delta2 = B * (C - A) / (A * (C - B))
    eps2 = 1.0 - delta2
    if eps2 > 1e-15:
        raise AssumptionError("inertia ordering", "delta^2 < 1 is incompatible with the radicands")
    eps2 = min(eps2, 0.0)
    gamma2 = eps2 / (1.0 + eps2)
    return FreeBodyDerived(
        p_M=float(np.sqrt(p2)), q_M=float(np.sqrt(q2)), r_M=float(np.sqrt(r2)),
        k_hat=float(np.sqrt(k2)), tau_rate=float(np.sqrt(tau2)), delta2=float(delta2),
        eps2=float(eps2), gamma2=float(gamma2), ratio=float((C - A) / (C - B)),
        q_sign=1.0 if C > A else -1.0)


@lru_cache(maxsize=256)
def _derived(cfg):
    return derive_free(cfg)


def body_rates_free(tau, d):
    """(p, q, r) at dimensionless time ``tau``."""
    m = d.k_hat ** 2
    am = _jacobi_m(tau, m)
    sn, cn = np.sin(am), np.cos(am)
    dn = np.sqrt(1.0 - m * sn * sn)
    out = (d.p_M * cn, d.q_sign * d.q_M * sn, d.r_M * dn)
    return tuple(v[()] if np.ndim(v) == 0 else v for v in out)


def angles_free(tau, d, cfg):
    """Nutation and spin (theta, phi) at dimensionless time ``tau``.

    cos(theta) = C r / |K|; phi satisfies tan(phi) = A p / (B q) and is
    lifted to a continuous function starting from pi/2 at tau = 0.
    """
    if cfg.K_norm <= 0:
        raise DomainError("|K| = 0 leaves the attitude undefined")
    m = d.k_hat ** 2
    am = _jacobi_m(tau, m)
    dn = np.sqrt(1.0 - m * np.sin(am) ** 2)
    cos_t = np.clip(cfg.C * d.r_M * dn / cfg.K_norm, -1.0, 1.0)
    theta = np.arccos(cos_t)
    # cot(phi) = delta tan(am); lift atan across the poles of tan
    delta = np.sqrt(d.delta2)
    j = np.round(am / np.pi)
    phi = 0.5 * np.pi - d.q_sign * (j * np.pi + np.arctan(delta * np.tan(am - j * np.pi)))
    return theta[()] if np.ndim(theta) == 0 else theta, phi[()] if np.ndim(phi) == 0 else phi


def precession_free(tau, d, cfg):
    """Precession psi(tau) from third-kind elliptic integrals.

    With cn^2 + ratio sn^2 over 1 - eps2 sn^2 as the rate profile,

        psi = psi0 + |K| / (A tau_rate) * [I4(tau; eps2) + ratio * I3(tau; eps2)].
    """
    k = d.k_hat
    t4 = np.asarray(i4_param(tau, d.eps2, k))
    t3 = np.asarray(i3_param(tau, d.eps2, k))
    out = cfg.psi0 + cfg.K_norm / (cfg.A * d.tau_rate) * (t4 + d.ratio * t3)
    return out[()] if out.ndim == 0 else out


def precession_two_term(tau, d, cfg):
    """Alternative two-term precession formula with its closed-form constants.

    psi0 + |K|/(A (delta2 + eps2)) T1 + |K| B delta2 / A^2 T2 with
    T1 = (Pi(am, eps2) - tau)/eps2 and T2 = ((gamma2 - 1) Pi(am, gamma2) + tau)/gamma2.
    Kept to report its discrepancy against :func:`precession_free`; it does
    not solve the precession equation.
    """
    k = d.k_hat
    t1 = np.asarray(i3_param(tau, d.eps2, k))
    t2 = np.asarray(i4_param(tau, d.gamma2, k))
    out = (cfg.psi0 + cfg.K_norm / (cfg.A * (d.delta2 + d.eps2)) * t1
           + cfg.K_norm * cfg.B * d.delta2 / cfg.A ** 2 * t2)
    return out[()] if out.ndim == 0 else out


def precession_rate(tau, d, cfg):
    """dpsi/dt = |K| (A p^2 + B q^2) / (A^2 p^2 + B^2 q^2)."""
    p, q, _ = body_rates_free(tau, d)
    A, B = cfg.A, cfg.B
    return cfg.K_norm * (A * p * p + B * q * q) / (A * A * p * p + B * B * q * q)


def state_of_t(t, cfg):
    """All closed-form quantities at physical times ``t``.

    Returns a dict with tau, p, q, r, theta, phi, psi and the direction
    cosines gamma = (A p, B q, C r) / |K| of the angular momentum.
    """
    d = _derived(cfg)
    t = np.asarray(t, float)
    tau = d.tau_rate * t
    p, q, r = body_rates_free(tau, d)
    theta, phi = angles_free(tau, d, cfg)
    psi = precession_free(tau, d, cfg)
    K = cfg.K_norm
    return {"t": t, "tau": tau, "p": p, "q": q, "r": r, "theta": theta, "phi": phi,
            "psi": psi, "gamma1": cfg.A * p / K, "gamma2": cfg.B * q / K,
            "gamma3": cfg.C * r / K}


def rate_period(cfg):
    """Physical period of the body rates."""
    d = _derived(cfg)
    return d.period / d.tau_rate
