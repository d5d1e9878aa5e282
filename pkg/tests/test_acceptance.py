"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -s` to see the per-criterion lines.
The heavy integer-side criteria share one module-scoped sieve at X = 1e8.
"""

import math
import time
from fractions import Fraction

import numpy as np
import pytest

from zvar import integers, partitions, rmt
from zvar.characters import rh_check, verify_b_series_identity, verify_variance_identity
from zvar.ffield import variance_brute
from zvar.series import FormalPowerSeries, one_minus_u_pow

HALF = Fraction(1, 2)
X_BIG = 10**8


def _report(num: int, ok: bool, detail: str):
    print(f"ACCEPTANCE {num:2d}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, f"criterion {num}: {detail}"


@pytest.fixture(scope="module")
def sieve_big():
    h_max = int(X_BIG**0.7) + 10
    return integers.sieve_b(2 * X_BIG + h_max, threads=4)


def test_criterion_01_normalization():
    t0 = time.monotonic()
    zs = (HALF, Fraction(1, 3), Fraction(2), Fraction(5, 2))
    for n in range(31):
        for z in zs:
            total = sum(
                partitions.z_measure(n, z, lam)
                for lam in partitions.enumerate_partitions(n)
            )
            assert total == 1, (n, z)
    dt = time.monotonic() - t0
    _report(1, dt < 10.0, f"exact normalization n<=30, 4 parameters, {dt:.1f}s")


def test_criterion_02_degenerate_cases():
    ok = True
    for n in range(1, 16):
        ok &= partitions.z_measure(n, 1, (n,)) == 1
        ok &= partitions.prob_lambda1_le(n, 1, n - 1) == 0
        for m in (1, 2, 3):
            ok &= partitions.prob_lambda1_le(n, Fraction(-m), min(m, n)) == 1
    _report(2, ok, "z=1 concentrates on one row; z=-m truncates at m (exact)")


def test_criterion_03_variance_charsum_identity():
    t0 = time.monotonic()
    worst = 0.0
    cases = 0
    for q in (3, 5):
        for n in range(2, 7):
            for h in range(0, n - 1):
                for alpha, z in (
                    ("b", None),
                    ("dz", Fraction(1, 2)),
                    ("dz", Fraction(2)),
                ):
                    rep = verify_variance_identity(q, n, h, alpha, z=z)
                    worst = max(worst, rep.abs_diff)
                    cases += 1
    dt = time.monotonic() - t0
    _report(
        3,
        worst <= 1e-6 and dt < 120.0,
        f"{cases} variance/character-sum cases, worst |diff| {worst:.2e}, {dt:.0f}s",
    )


def test_criterion_04_b_series_identity():
    rows = verify_b_series_identity(3, 4, 8)
    worst = max(r.abs_diff for r in rows)
    # telescoping square-root identity, exact through order 16
    order = 16
    lhs = one_minus_u_pow(1, order, scale=1).pow_fractional(Fraction(-1, 2))
    rhs = FormalPowerSeries.one(order)
    i = 1
    while 2 ** (i - 1) <= order:
        k = 2 ** (i - 1)
        num = FormalPowerSeries((1,) + (0,) * (k - 1) + (1,) + (0,) * (order - k))
        den = FormalPowerSeries((1,) + (0,) * (k - 1) + (-1,) + (0,) * (order - k))
        rhs = rhs * (num * den.inverse()).pow_fractional(Fraction(1, 2 ** (i + 1)))
        i += 1
    _report(
        4,
        worst <= 1e-6 and lhs == rhs,
        f"{len(rows)} coefficient checks mod T^4 at q=3, worst {worst:.2e}; "
        "telescoping identity exact to order 16",
    )


def test_criterion_05_rh_moduli():
    worst = 0.0
    checked = 0
    for q in (3, 5, 7):
        for m in (2, 3, 4):
            c, w = rh_check(q, m)
            checked += c
            worst = max(worst, w)
    _report(
        5,
        worst <= 1e-6,
        f"{checked} L-polynomials, inverse-root moduli within {worst:.2e} of "
        "{1, sqrt q}",
    )


def _mc_with_retry(n, z, zp, N, samples, seed, m=None):
    est, se, ref = rmt.mc_verify_thm42(n, z, zp, N, samples=samples, seed=seed, m=m)
    if abs(est - ref) > 3 * se:
        est, se, ref = rmt.mc_verify_thm42(
            n, z, zp, N, samples=4 * samples, seed=seed + 1, m=m
        )
    return est, se, ref


def test_criterion_06_moment_identity():
    exact_ok = True
    for n in range(6):
        for N in range(1, 5):
            for z in (HALF, Fraction(1, 3), Fraction(2), Fraction(5, 2)):
                lhs = rmt.schur_route_integral(n, z, z, N)
                rhs = rmt.rmt_integral_exact(n, z, z, N)
                exact_ok &= lhs == rhs
    mc_ok = True
    details = []
    for n, N, z in ((1, 3, HALF), (2, 3, HALF), (2, 2, Fraction(2))):
        est, se, ref = _mc_with_retry(n, float(z), float(z), N, 10**6, 100 + n)
        mc_ok &= abs(est - ref) <= 3 * se
        details.append(f"(n={n},N={N}): {(est - ref) / se:+.2f} sigma")
    est, se, ref = _mc_with_retry(2, 0.5, 0.5, 3, 10**6, 777, m=3)
    mc_ok &= abs(est) <= 3 * se
    _report(
        6,
        exact_ok and mc_ok,
        "Schur route == closed form exactly (n<=5, N<=4, 4 parameters); MC "
        + "; ".join(details)
        + f"; cross term {est / se:+.2f} sigma",
    )


def test_criterion_07_variance_trend_b():
    t0 = time.monotonic()
    tref = float(partitions.t_coefficient(8, 6))
    devs = []
    for q in (3, 5, 7):
        r = variance_brute("b", q, 8, 1)
        devs.append(abs(r.value / q**2 - tref) / tref)
    dt = time.monotonic() - t0
    ok = devs[0] > devs[1] > devs[2] and devs[2] <= 0.5 and dt < 600
    _report(
        7,
        ok,
        f"relative deviations {[f'{d:.3f}' for d in devs]} decreasing, "
        f"{devs[2]:.3f} <= 0.5 at q=7, {dt:.0f}s",
    )


def test_criterion_08_variance_trend_dz():
    ref = float(
        partitions.pochhammer(Fraction(1, 4), 7)
        / math.factorial(7)
        * partitions.prob_lambda1_le(7, HALF, 4)
    )
    devs = []
    for q in (3, 5, 7):
        r = variance_brute("dz", q, 7, 1, z=0.5, exact=False)
        devs.append(abs(r.value / q**2 - ref) / ref)
    ok = devs[0] > devs[1] > devs[2]
    _report(8, ok, f"d_(1/2) deviations {[f'{d:.3f}' for d in devs]} decreasing in q")


def test_criterion_09_self_convergence():
    g50 = partitions.g_curve(50, [0.5])[0][1]
    g100 = partitions.g_curve(100, [0.5])[0][1]
    diff = abs(g50 - g100)
    _report(9, diff < 0.05, f"|g50(0.5) - g100(0.5)| = {diff:.4f} < 0.05")


def test_criterion_10_constants():
    K = integers.landau_K()
    ok = abs(K - 0.7642) <= 5e-4
    ok &= abs(integers.zeta_real(2.0) - math.pi**2 / 6) <= 1e-10
    ok &= abs(integers.l4_real(1.0) - math.pi / 4) <= 1e-10
    a1, _ = integers.a_z_euler(1.0)
    ok &= a1 == 1.0
    a2, _ = integers.a_z_euler(2.0)
    fit = integers.a2_dirichlet_fit(10**7)
    rel = abs(fit - a2) / a2
    ok &= rel <= 0.01
    _report(
        10,
        ok,
        f"K={K:.6f}; zeta(2), L(1) at 1e-10; a_1 = {a1}; a_2 routes differ "
        f"by {rel:.2%}",
    )


def test_criterion_11_figure2(sieve_big):
    t0 = time.monotonic()
    deltas = [0.2 + 0.04 * i for i in range(16)]
    rows = integers.fig2_rows(sieve_big, X_BIG, deltas)
    errs = [abs(r.normalized - r.prediction) for r in rows]
    dt = time.monotonic() - t0
    ok = (
        len(rows) >= 15
        and float(np.mean(errs)) <= 0.08
        and max(errs) <= 0.15
        and dt < 900
    )
    _report(
        11,
        ok,
        f"{len(rows)} primes, mean |data-pred| {np.mean(errs):.4f} <= 0.08, "
        f"max {max(errs):.4f} <= 0.15, {dt:.0f}s",
    )


def test_criterion_12_figure1(sieve_big):
    rows = integers.fig1_rows(
        sieve_big, X_BIG, [0.3, 0.5, 0.7], samples=10**5, seed=12
    )
    errs = [abs(r.normalized - r.prediction) for r in rows]
    ok = all(e <= 0.12 for e in errs)
    xs = np.array([10**3, 10**4, 10**5, 10**6, 10**7], dtype=float)
    smooth = integers.dirichlet_eval().bbar_many(xs)
    counts = sieve_big.count_many(xs)
    envelope_ok = bool((np.abs(smooth - counts) <= xs**0.6).all())
    _report(
        12,
        ok and envelope_ok,
        f"interval errors {[f'{e:.3f}' for e in errs]} <= 0.12; "
        "|B - Bbar| <= x^0.6 on sampled [1e3, 1e7]",
    )


def test_criterion_13_appendix_c(sieve_big):
    rows = integers.appendix_c_rows(sieve_big, X_BIG, 20)
    errs = [abs(r.normalized - r.prediction) for r in rows[:10]]
    mean_err = float(np.mean(errs))
    dmax = math.log(2.0) / math.log(X_BIG)
    grid = np.linspace(dmax / 40, dmax, 40)
    vals = [integers.hl_prediction(X_BIG, d) for d in grid]
    argmax = grid[int(np.argmax(vals))]
    dstar = integers.hl_delta_max(X_BIG)
    max_ok = abs(argmax - dstar) <= 2 * (grid[1] - grid[0])
    _report(
        13,
        mean_err <= 0.05 and max_ok,
        f"mean |data-pred| {mean_err:.4f} <= 0.05 over 10 large primes; "
        f"prediction max at {argmax:.5f} vs log(1/K)/log X = {dstar:.5f}",
    )


def test_criterion_14_gamma_identity():
    ok = partitions.gamma_k_mc(2, -0.5, 1000, 0) == (0.0, 0.0)
    ok &= partitions.gamma_k_mc(2, 2.5, 1000, 0) == (0.0, 0.0)
    details = []
    for s in (0.6, 0.8):
        est, se = partitions.gamma_k_mc(2, 1.0 / s, samples=10**6, seed=14)
        ident = partitions.gamma_k_identity_value(2, s, est)
        fz = partitions.fz_curve(2, 60, [s])[0][1]
        ok &= abs(ident - fz) <= 0.05
        details.append(f"s={s}: |{ident:.4f} - {fz:.4f}| = {abs(ident - fz):.4f}")
    _report(14, ok, "; ".join(details) + "; zero outside [0, k]")
