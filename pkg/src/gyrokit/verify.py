"""Randomised closed-form versus oracle verification.

Each case draws valid configurations from a fixed parameter box with a
seeded generator and reports, per check, the largest error observed and
the tolerance it is held to.  The same seed always yields the same report.

Parameter boxes
---------------
specfun     u in [-20, 20], k in [0, 0.999]; phi in [-3 pi, 3 pi].
lauricella  1 to 4 variables, a in (0.1, 3), c - a in (0.1, 3),
            b_i in [-2, 3], x_i in [-0.5, 0.5].
integrals   I1/I2: -0.9 < c < b < 0.95, a - b in (0.05, 3), alpha in [-2, 2];
            I3/I4: n in [-3, 0.9], k in [0, 0.95], y in [0, 3 K];
            I5/I6: c in [-3, -0.1], band ends in [0.2, 4] in random order;
            I7: a > b > c in [-2, 3].
lagrange    A in [1, 3], C/A in [0.2, 1.8], M g z_G in [0.5, 3],
            theta0 in [0.3, 2.8], theta_dot0 in [-2, 2], psi_dot0 in [-3, 3],
            r0 in [-12, 12]; rejects motions reaching within 1e-3 of the vertical.
poinsot     three distinct moments in [1, 4] ordered either C > B > A or
            A > B > C, p0 in [0.2, 2], r0 from the admissible range with the
            modulus kept below 0.95.
herpolhode  distinct moments in [1, 4] in either admissible order, D uniform
            in the central 90 % of the admissible interval.
viscous     A in [1, 3], C/A in [0.3, 1.9] avoiding |C/A - 1| < 0.1,
            mu/A in [0.05, 0.5], p0, q0 in [-2, 2], |r0| in [1, 5],
            gamma0 uniform on the sphere.
"""

from dataclasses import asdict, dataclass
import json

import numpy as np
from scipy.special import ellipj

from . import herpolhode, integrals, lagrange, poinsot, viscous
from .errors import GyrokitError, SingularityError
from .oracle import (build_free_body_system, build_heavy_top_system, build_viscous_system,
                     integrate)
from .specfun import ellip_F, jacobi_am_sn_cn_dn, lauricella

CASES = ("specfun", "lauricella", "integrals", "lagrange", "poinsot", "herpolhode", "viscous")

# number of random draws per case in a default run
DEFAULT_DRAWS = {"specfun": 10000, "lauricella": 1000, "integrals": 200, "lagrange": 100,
                 "poinsot": 100, "herpolhode": 50, "viscous": 12}


@dataclass
class Check:
    """One named comparison: worst error against a tolerance.

    ``informational`` rows are reported but never fail a run.
    """

    case: str
    name: str
    max_error: float
    tolerance: float
    draws: int
    informational: bool = False
    note: str = ""

    @property
    def passed(self):
        return bool(np.isfinite(self.max_error) and self.max_error <= self.tolerance)


class _Tracker:
    # running maxima keyed by check name, in insertion order
    def __init__(self, case):
        self.case = case
        self.rows = {}

    def add(self, name, err, tol, informational=False):
        err = float(np.max(np.abs(err))) if np.size(err) else 0.0
        if not np.isfinite(err):
            err = float("inf")
        row = self.rows.get(name)
        if row is None:
            self.rows[name] = Check(self.case, name, err, tol, 1, informational)
        else:
            row.max_error = max(row.max_error, err)
            row.draws += 1

    def checks(self):
        return list(self.rows.values())


# special functions

def check_specfun(rng, n):
    """Jacobi identities and the F / am round trip."""
    tr = _Tracker("specfun")
    u = rng.uniform(-20.0, 20.0, n)
    k = rng.uniform(0.0, 0.999, n)
    _, sn, cn, dn = jacobi_am_sn_cn_dn(u, k)
    tr.add("sn^2+cn^2-1", sn * sn + cn * cn - 1.0, 1e-10)
    tr.add("dn^2+k^2 sn^2-1", dn * dn + k * k * sn * sn - 1.0, 1e-10)
    phi = rng.uniform(-3.0 * np.pi, 3.0 * np.pi, n)
    am, _, _, _ = jacobi_am_sn_cn_dn(ellip_F(phi, k), k)
    tr.add("am(F(phi)) - phi", am - phi, 1e-10)
    for row in tr.rows.values():
        row.draws = n
    return tr.checks()


def draw_lauricella(rng):
    nvar = int(rng.integers(1, 5))
    a = rng.uniform(0.1, 3.0)
    c = a + rng.uniform(0.1, 3.0)
    b = rng.uniform(-2.0, 3.0, nvar)
    x = rng.uniform(-0.5, 0.5, nvar)
    return a, tuple(b), c, tuple(x)


def check_lauricella(rng, n):
    """Integral representation against the truncated series."""
    tr = _Tracker("lauricella")
    for _ in range(n):
        a, b, c, x = draw_lauricella(rng)
        quad_val = lauricella(a, b, c, x, method="integral")
        series_val = lauricella(a, b, c, x, method="series")
        tr.add("integral vs series", quad_val - series_val, 1e-9)
    return tr.checks()


# cubic-radical integrals

def draw_cubic(rng):
    c = rng.uniform(-0.9, 0.85)
    b = rng.uniform(c + 0.05, 0.95)
    a = b + rng.uniform(0.05, 3.0)
    alpha = rng.uniform(-2.0, 2.0)
    y = c + (b - c) * rng.uniform(0.0, 1.0)
    return integrals.CubicParams(a, b, c, alpha, y)


def draw_band(rng):
    c = rng.uniform(-3.0, -0.1)
    ends = rng.uniform(0.2, 4.0, 2)
    while abs(ends[0] - ends[1]) < 0.05:
        ends = rng.uniform(0.2, 4.0, 2)
    a, b = ends
    x = b + (a - b) * rng.uniform(0.0, 1.0)
    return a, b, c, float(np.sqrt(x))


def _i34_quadrature(y, n, k, cn_weight):
    from scipy.integrate import quad

    def f(u):
        sn, cn, _, _ = ellipj(u, k * k)
        return (cn * cn if cn_weight else sn * sn) / (1.0 - n * sn * sn)

    return quad(f, 0.0, y, epsabs=1e-14, epsrel=1e-13, limit=400)[0]


def check_integrals(rng, n):
    """I1..I6 across forms and the I7 inversion round trip."""
    tr = _Tracker("integrals")
    for _ in range(n):
        p = draw_cubic(rng)
        for name, fn in (("I1", integrals.i1), ("I2", integrals.i2)):
            ell = fn(p, "elliptic")
            tr.add(f"{name} hypergeometric vs elliptic", fn(p, "hypergeometric") - ell, 1e-8)
            tr.add(f"{name} elliptic vs quadrature", fn(p, "quadrature") - ell, 1e-7)
    for _ in range(n):
        nn = rng.uniform(-3.0, 0.9)
        k = rng.uniform(0.0, 0.95)
        y = rng.uniform(0.0, 3.0) * float(integrals._ellipk_m(k * k))
        tr.add("I3 elliptic vs quadrature",
               integrals.i3_param(y, nn, k) - _i34_quadrature(y, nn, k, False), 1e-7)
        tr.add("I4 elliptic vs quadrature",
               integrals.i4_param(y, nn, k) - _i34_quadrature(y, nn, k, True), 1e-7)
    for _ in range(n):
        a, b, c, y = draw_band(rng)
        e5 = integrals.i5(a, b, c, y, "elliptic")
        tr.add("I5 appell vs elliptic", integrals.i5(a, b, c, y, "appell") - e5, 1e-8)
        tr.add("I5 elliptic vs quadrature", integrals.i5(a, b, c, y, "quadrature") - e5, 1e-7)
        e6 = integrals.i6(a, b, c, y, "elliptic")
        tr.add("I6 lauricella vs elliptic", integrals.i6(a, b, c, y, "lauricella") - e6, 1e-8)
        tr.add("I6 elliptic vs quadrature", integrals.i6(a, b, c, y, "quadrature") - e6, 1e-7)
    for _ in range(n):
        c, b, a = np.sort(rng.uniform(-2.0, 3.0, 3))
        while not (a - b > 1e-3 and b - c > 1e-3):
            c, b, a = np.sort(rng.uniform(-2.0, 3.0, 3))
        L = rng.uniform(0.0, 1.0) * integrals.i7_bound(a, b, c)
        tr.add("I7 inversion round trip", integrals.i7(a, b, c, integrals.i7_invert(a, b, c, L))
               - L, 1e-10)
    return tr.checks()


# heavy symmetric top

def draw_lagrange(rng):
    """A heavy-top configuration whose motion stays clear of the vertical."""
    while True:
        A = rng.uniform(1.0, 3.0)
        C = A * rng.uniform(0.2, 1.8)
        weight = rng.uniform(0.5, 3.0)
        cfg = lagrange.SymmetricTopConfig.from_rates(
            A, C, 1.0, 9.81, weight / 9.81, rng.uniform(0.3, 2.8),
            rng.uniform(0.0, 2.0 * np.pi), rng.uniform(0.0, 2.0 * np.pi),
            rng.uniform(-2.0, 2.0), rng.uniform(-3.0, 3.0), rng.uniform(-12.0, 12.0))
        try:
            _, rr = lagrange._setup(cfg)
        except GyrokitError:
            continue
        if rr.s1 > -1.0 + 1e-3 and rr.s2 < 1.0 - 1e-3 and rr.s2 - rr.s1 > 1e-6:
            return cfg


def lagrange_errors(cfg, periods=3.0, samples=301):
    """Worst deviations of the closed form from the oracle for one top."""
    T = lagrange.nutation_period(cfg)
    t = np.linspace(0.0, periods * T, samples)
    theta, psi, phi = lagrange.angles_of_t(t, cfg)
    p, q, _ = lagrange.body_rates(t, cfg)
    system = build_heavy_top_system(cfg, with_angles=True)
    ref = integrate(system, system.initial_state, (0.0, t[-1]), t_eval=t).y
    energy, kz, norm = lagrange.first_integrals(t, cfg)
    return {
        "theta": np.abs(theta - np.arccos(np.clip(ref[5], -1.0, 1.0))).max(),
        "psi": np.abs(psi - ref[6]).max(),
        "phi": np.abs(phi - ref[7]).max(),
        "p": np.abs(p - ref[0]).max(),
        "q": np.abs(q - ref[1]).max(),
        "energy": (np.abs(energy - cfg.E0) / max(abs(cfg.E0), 1e-300)).max(),
        "K_z": (np.abs(kz - cfg.K_z0) / max(abs(cfg.K_z0), 1e-300)).max(),
        "gamma_norm": np.abs(norm - 1.0).max(),
    }


def check_lagrange(rng, n):
    tr = _Tracker("lagrange")
    for _ in range(n):
        errs = lagrange_errors(draw_lagrange(rng))
        for key in ("theta", "psi", "phi", "p", "q"):
            tr.add(f"{key} vs oracle", errs[key], 1e-6)
        for key in ("energy", "K_z", "gamma_norm"):
            tr.add(f"{key} relative residual", errs[key], 1e-9)
    return tr.checks()


# free body

def draw_poinsot(rng):
    while True:
        A, B, C = np.sort(rng.uniform(1.0, 4.0, 3))
        if min(B - A, C - B) < 0.05:
            continue
        if rng.uniform() < 0.5:
            A, C = C, A
        p0 = rng.uniform(0.2, 2.0)
        r_min = np.sqrt(A * (B - A) * p0 * p0 / (C * (C - B)))
        r0 = r_min * (1.0 + rng.uniform(0.05, 2.0))
        cfg = poinsot.FreeBodyConfig.from_rates(A, B, C, p0, r0, rng.uniform(0.0, 2 * np.pi))
        try:
            d = poinsot.derive_free(cfg)
        except GyrokitError:
            continue
        if d.k_hat < 0.95:
            return cfg


def poinsot_errors(cfg, periods=3.0, samples=301):
    T = poinsot.rate_period(cfg)
    t = np.linspace(0.0, periods * T, samples)
    st = poinsot.state_of_t(t, cfg)
    system = build_free_body_system(cfg, with_angles=True)
    ref = integrate(system, system.initial_state, (0.0, t[-1]), t_eval=t).y
    A, B, C = cfg.A, cfg.B, cfg.C
    p, q, r = st["p"], st["q"], st["r"]
    two_t = A * p * p + B * q * q + C * r * r
    k2 = A * A * p * p + B * B * q * q + C * C * r * r
    out = {
        "p": np.abs(p - ref[0]).max(), "q": np.abs(q - ref[1]).max(),
        "r": np.abs(r - ref[2]).max(),
        "theta": np.abs(st["theta"] - np.arccos(np.clip(ref[5], -1.0, 1.0))).max(),
        "phi": np.abs(st["phi"] - ref[7]).max(),
        "psi": np.abs(st["psi"] - ref[6]).max(),
        "2T": (np.abs(two_t - 2.0 * cfg.E0) / (2.0 * cfg.E0)).max(),
        "K^2": (np.abs(k2 - cfg.K_norm ** 2) / cfg.K_norm ** 2).max(),
    }
    d = poinsot._derived(cfg)
    try:
        two_term = poinsot.precession_two_term(st["tau"], d, cfg)
        out["psi two-term"] = np.abs(two_term - ref[6]).max()
    except SingularityError:
        out["psi two-term"] = float("inf")
    return out


def check_poinsot(rng, n):
    tr = _Tracker("poinsot")
    singular = 0
    for _ in range(n):
        errs = poinsot_errors(draw_poinsot(rng))
        for key in ("p", "q", "r", "theta", "phi", "psi"):
            tr.add(f"{key} vs oracle", errs[key], 1e-6)
        for key in ("2T", "K^2"):
            tr.add(f"{key} relative residual", errs[key], 1e-10)
        if np.isfinite(errs["psi two-term"]):
            tr.add("psi two-term constants vs oracle", errs["psi two-term"], 1e-6,
                   informational=True)
        else:
            singular += 1
    row = tr.rows.get("psi two-term constants vs oracle")
    if row is None:
        row = Check("poinsot", "psi two-term constants vs oracle", float("inf"), 1e-6, 0, True)
        tr.rows[row.name] = row
    row.note = (f"alternative two-term constants; singular (gamma^2 > 1) in {singular} of {n} "
                "configs; psi itself uses the I3/I4 form")
    return tr.checks()


# herpolhode

def draw_herpolhode(rng):
    while True:
        A, B, C = np.sort(rng.uniform(1.0, 4.0, 3))
        if min(B - A, C - B) < 0.05:
            continue
        if rng.uniform() < 0.5:
            A, C = C, A
        lo, hi = sorted((B, C))
        D = lo + (hi - lo) * rng.uniform(0.05, 0.95)
        return herpolhode.herpolhode_constants(A, B, C, D, 1.0)


def herpolhode_errors(hc, samples=12):
    rho = np.linspace(hc.rho_min, hc.rho_max, samples)
    ell = herpolhode.chi_elliptic(rho, hc)
    hyp = herpolhode.chi_hypergeometric(rho, hc)
    quad_val = herpolhode.chi_quadrature(rho, hc)
    trace = herpolhode.trace_curve(hc, 200, 3)
    outside = np.maximum(hc.rho_min - trace["rho"], trace["rho"] - hc.rho_max)
    return {"dual": np.abs(ell - hyp).max(),
            "quad": max(np.abs(ell - quad_val).max(), np.abs(hyp - quad_val).max()),
            "annulus": max(float(outside.max()), 0.0),
            "monotone": int(np.sum(np.diff(trace["chi"]) <= 0))}


def check_herpolhode(rng, n):
    tr = _Tracker("herpolhode")
    for _ in range(n):
        errs = herpolhode_errors(draw_herpolhode(rng))
        tr.add("elliptic vs hypergeometric", errs["dual"], 1e-8)
        tr.add("closed forms vs quadrature", errs["quad"], 1e-7)
        tr.add("annulus violation", errs["annulus"], 0.0)
        tr.add("non-increasing chi steps", errs["monotone"], 0.0)
    for _ in range(max(1, n // 5)):
        A = rng.uniform(1.0, 4.0)
        C = rng.uniform(1.0, 4.0)
        while abs(C - A) < 0.05:
            C = rng.uniform(1.0, 4.0)
        lo, hi = sorted((A, C))
        hc = herpolhode.herpolhode_constants(A, A, C, lo + (hi - lo) * rng.uniform(0.05, 0.95))
        rho = herpolhode.trace_curve(hc, 100, 2)["rho"]
        tr.add("A = B radius spread", rho.max() - rho.min(), 1e-10)
    return tr.checks()


# viscous top

def _unit_vector(rng):
    v = rng.normal(size=3)
    v /= np.linalg.norm(v)
    return v


def draw_viscous(rng):
    A = rng.uniform(1.0, 3.0)
    ratio = rng.uniform(0.3, 1.9)
    while abs(ratio - 1.0) < 0.1:
        ratio = rng.uniform(0.3, 1.9)
    r0 = rng.uniform(1.0, 5.0) * rng.choice([-1.0, 1.0])
    return viscous.ViscousConfig(A, A * ratio, A * rng.uniform(0.05, 0.5),
                                 rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0), r0,
                                 tuple(_unit_vector(rng)))


def viscous_errors(cfg, samples=201):
    T = 5.0 * cfg.A / cfg.mu
    t = np.linspace(0.0, T, samples)
    p, q, r = viscous.rates(t, cfg)
    res = viscous.euler_residual(t, cfg)
    mag = np.hypot(p, q)
    law = np.hypot(cfg.p0, cfg.q0) * np.exp(-cfg.mu * t / cfg.A)
    system = build_viscous_system(cfg)
    ref = integrate(system, system.initial_state, (0.0, T), t_eval=t).y
    g_res = np.array(viscous.gamma_cosines(t, cfg, "resolvent"))
    g_poi = np.array(viscous.gamma_cosines(t, cfg, "poisson"))
    energy = viscous.kinetic_energy(t, cfg)
    return {
        "euler": max(np.abs(v).max() for v in res),
        "p ode": np.abs(viscous.verify_p_ode(t, cfg)).max(),
        "law": (np.abs(mag - law) / np.maximum(law, 1e-300)).max(),
        "oracle": max(np.abs(p - ref[0]).max(), np.abs(q - ref[1]).max(),
                      np.abs(r - ref[2]).max()),
        "gamma routes": np.abs(g_res - g_poi).max(),
        "gamma oracle": np.abs(g_poi - ref[3:6]).max(),
        "gamma norm": max(np.abs(np.sum(g_res ** 2, 0) - 1.0).max(),
                          np.abs(np.sum(g_poi ** 2, 0) - 1.0).max()),
        "energy": int(np.sum(np.diff(energy) >= 0)),
    }


def viscous_limit_error(A, C, p0, r0, mu_scale=1e-6, samples=10):
    """Largest rate deviation from the symmetric free body for tiny mu.

    mu = mu_scale * A / T with T the free-body rate period, so the damping
    accumulated over the sampled period is mu_scale in relative terms.
    """
    free = poinsot.FreeBodyConfig.from_rates(A, A, C, p0, r0)
    period = poinsot.rate_period(free)
    cfg = viscous.ViscousConfig(A, C, mu_scale * A / period, p0, 0.0, r0)
    t = np.linspace(0.0, period, samples)
    st = poinsot.state_of_t(t, free)
    p, q, r = viscous.rates(t, cfg)
    return max(np.abs(p - st["p"]).max(), np.abs(q - st["q"]).max(), np.abs(r - st["r"]).max())


def check_viscous(rng, n):
    tr = _Tracker("viscous")
    for _ in range(n):
        errs = viscous_errors(draw_viscous(rng))
        tr.add("Euler equation residual", errs["euler"], 1e-8)
        tr.add("p equation relative residual", errs["p ode"], 1e-8)
        tr.add("equatorial magnitude law", errs["law"], 1e-9)
        tr.add("rates vs oracle", errs["oracle"], 1e-7)
        tr.add("gamma resolvent vs Poisson", errs["gamma routes"], 1e-7)
        tr.add("gamma Poisson vs oracle", errs["gamma oracle"], 1e-7)
        tr.add("gamma norm", errs["gamma norm"], 1e-8)
        tr.add("non-decreasing energy steps", errs["energy"], 0.0)
    for _ in range(n):
        A = rng.uniform(1.0, 3.0)
        ratio = rng.uniform(0.3, 1.9)
        while abs(ratio - 1.0) < 0.1:
            ratio = rng.uniform(0.3, 1.9)
        err = viscous_limit_error(A, A * ratio, rng.uniform(0.2, 2.0), rng.uniform(0.5, 3.0))
        tr.add("mu -> 0 free-body limit", err, 1e-4)
    return tr.checks()


_RUNNERS = {"specfun": check_specfun, "lauricella": check_lauricella,
            "integrals": check_integrals, "lagrange": check_lagrange,
            "poinsot": check_poinsot, "herpolhode": check_herpolhode,
            "viscous": check_viscous}


def verify_all(seed=0, cases=CASES, draws=None, tolerances=None):
    """Run the randomised suites and collect a report.

    Parameters
    ----------
    seed : int
        Seed of the generator; each case gets its own stream derived from it.
    cases : sequence of str
    draws : int, optional
        Overrides the per-case number of draws in :data:`DEFAULT_DRAWS`.
    tolerances : dict, optional
        Maps a check name to a replacement tolerance.

    Returns
    -------
    dict
        ``{"seed", "passed", "checks": [...]}`` with one entry per check.
    """
    unknown = set(cases) - set(CASES)
    if unknown:
        raise ValueError(f"unknown cases: {sorted(unknown)}")
    checks = []
    for index, case in enumerate(CASES):
        if case not in cases:
            continue
        rng = np.random.default_rng([int(seed), index])
        n = DEFAULT_DRAWS[case] if draws is None else int(draws)
        checks.extend(_RUNNERS[case](rng, n))
    for row in checks:
        if tolerances and row.name in tolerances:
            row.tolerance = float(tolerances[row.name])
    passed = all(row.passed for row in checks if not row.informational)
    rows = []
    for row in checks:
        entry = asdict(row)
        entry["passed"] = row.passed
        entry["max_error"] = _finite_or_str(row.max_error)
        rows.append(entry)
    return {"seed": int(seed), "passed": passed, "checks": rows}


def _finite_or_str(v):
    return float(v) if np.isfinite(v) else "inf"


def format_report(report, as_json=False):
    """Render a report as stable JSON or as aligned text lines."""
    if as_json:
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    lines = [f"seed {report['seed']}"]
    for row in report["checks"]:
        err = row["max_error"]
        err_text = err if isinstance(err, str) else f"{err:.3e}"
        status = "INFO" if row["informational"] else ("PASS" if row["passed"] else "FAIL")
        line = (f"{status}  {row['case']:<10}  {row['name']:<36}  max {err_text:>9}  "
                f"tol {row['tolerance']:.0e}  n={row['draws']}")
        if row["note"]:
            line += f"  ({row['note']})"
        lines.append(line)
    lines.append("overall " + ("PASS" if report["passed"] else "FAIL"))
    return "\n".join(lines) + "\n"
