"""Acceptance criteria 1-8 at full draw counts and their stated tolerances.

Each test prints (and records for the terminal summary) one PASS/FAIL line.
"""

import subprocess
import sys

import numpy as np
import pytest

from gyrokit.verify import verify_all

from conftest import ACCEPTANCE_LINES

SEED = 0


def _rows(case):
    return {row["name"]: row for row in verify_all(seed=SEED, cases=(case,))["checks"]}


def _report(number, title, ok, detail=""):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}"
    if detail:
        line += f"  [{detail}]"
    print(line)
    ACCEPTANCE_LINES.append(line)


def _judge(number, title, rows, expected):
    """Every expected row must exist, carry the stated tolerance and pass."""
    missing = [name for name in expected if name not in rows]
    worst = {name: rows[name]["max_error"] for name in expected if name in rows}
    ok = not missing and all(rows[n]["passed"] for n in worst)
    _report(number, title, ok, ", ".join(f"{n}={v:.2e}" if not isinstance(v, str) else f"{n}={v}"
                                         for n, v in worst.items()))
    assert not missing, missing
    for name, tol in expected.items():
        assert rows[name]["tolerance"] == tol, name
        assert rows[name]["passed"], (name, rows[name]["max_error"])


def test_criterion_1_jacobi_identities():
    rows = _rows("specfun")
    assert all(r["draws"] == 10000 for r in rows.values())
    _judge(1, "Jacobi identities and F/am round trip", rows,
           {"sn^2+cn^2-1": 1e-10, "dn^2+k^2 sn^2-1": 1e-10, "am(F(phi)) - phi": 1e-10})


def test_criterion_2_lauricella_dual_evaluation():
    rows = _rows("lauricella")
    assert rows["integral vs series"]["draws"] == 1000
    _judge(2, "Lauricella integral vs series", rows, {"integral vs series": 1e-9})


def test_criterion_3_cubic_radical_integrals():
    rows = _rows("integrals")
    expected = {}
    for name in ("I1", "I2"):
        expected[f"{name} hypergeometric vs elliptic"] = 1e-8
        expected[f"{name} elliptic vs quadrature"] = 1e-7
    expected["I3 elliptic vs quadrature"] = 1e-7
    expected["I4 elliptic vs quadrature"] = 1e-7
    expected["I5 appell vs elliptic"] = 1e-8
    expected["I5 elliptic vs quadrature"] = 1e-7
    expected["I6 lauricella vs elliptic"] = 1e-8
    expected["I6 elliptic vs quadrature"] = 1e-7
    expected["I7 inversion round trip"] = 1e-10
    assert all(rows[n]["draws"] == 200 for n in expected)
    _judge(3, "cubic-radical integrals I1-I7", rows, expected)


def test_criterion_4_lagrange_vs_oracle():
    rows = _rows("lagrange")
    expected = {f"{k} vs oracle": 1e-6 for k in ("theta", "psi", "phi", "p", "q")}
    expected.update({f"{k} relative residual": 1e-9 for k in ("energy", "K_z", "gamma_norm")})
    assert all(rows[n]["draws"] == 100 for n in expected if n in rows)
    _judge(4, "heavy symmetric top vs oracle", rows, expected)


def test_criterion_5_poinsot_vs_oracle():
    rows = _rows("poinsot")
    expected = {f"{k} vs oracle": 1e-6 for k in ("p", "q", "r", "theta", "phi", "psi")}
    expected.update({f"{k} relative residual": 1e-10 for k in ("2T", "K^2")})
    two_term = rows.get("psi two-term constants vs oracle")
    # the two-term precession constants are reported, never silently dropped
    assert two_term is not None and two_term["informational"]
    _judge(5, "free body vs oracle (two-term psi reported as INFO)", rows, expected)


def test_criterion_6_herpolhode():
    rows = _rows("herpolhode")
    expected = {"elliptic vs hypergeometric": 1e-8, "closed forms vs quadrature": 1e-7,
                "annulus violation": 0.0, "A = B radius spread": 1e-10}
    assert rows["elliptic vs hypergeometric"]["draws"] == 50
    _judge(6, "herpolhode dual forms, annulus, A = B circle", rows, expected)


def test_criterion_7_viscous_top():
    rows = _rows("viscous")
    expected = {"Euler equation residual": 1e-8, "equatorial magnitude law": 1e-9,
                "rates vs oracle": 1e-7, "gamma resolvent vs Poisson": 1e-7,
                "mu -> 0 free-body limit": 1e-4}
    _judge(7, "viscous top closed form, routes and mu -> 0 limit", rows, expected)


def _run_verify(seed):
    cmd = [sys.executable, "-m", "gyrokit", "verify", "--seed", str(seed), "--n", "3"]
    return subprocess.run(cmd, capture_output=True, check=False)


@pytest.mark.parametrize("seed", [11])
def test_criterion_8_determinism(seed):
    first, second = _run_verify(seed), _run_verify(seed)
    ok = (first.returncode == second.returncode == 0 and first.stdout == second.stdout
          and len(first.stdout) > 0)
    _report(8, "verify --seed is byte-identical across runs", ok,
            f"{len(first.stdout)} bytes, rc={first.returncode}")
    assert first.returncode == 0, first.stderr.decode()
    assert first.stdout == second.stdout
    assert np.char.startswith(first.stdout.decode().splitlines()[-1], "overall")
