"""Acceptance suite: eleven desk-scale criteria, one test each.

Each test prints a single PASS/FAIL line with the measured quantities so a
`pytest -v -s` run doubles as a summary report.  Full-size tables (X = 10^6)
come from session fixtures and are built once.
"""

import math
import time

import numpy as np
import pytest

from mfsi import cache
from mfsi.arith import (build_factor_table, divisor_spec,
                        evaluate_multiplicative, one_spec, planted_twist_spec,
                        sieve_primes)
from mfsi.catalog import (delta_grid_oracle, lambda_alpha_spec, tau_table,
                          tau_bruteforce)
from mfsi.cli import run_cli
from mfsi.hooley import hooley_interval_experiment, sandwich_scan
from mfsi.lambda_log import lambda_exact_compositions, lambda_f_at_prime
from mfsi.pretentious import minimize_t0
from mfsi.satotate import moment_constants, pnt_rs_ratio, quant_st_check
from mfsi.short_interval import variance_bruteforce, variance_mrfull
from mfsi.smooth import dde_residual, dickman_rho, psi_smooth
from mfsi.dirichlet import large_sieve_harness, perron_window_check


def _verdict(ok: bool, label: str, detail: str) -> None:
    print(f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}")
    assert ok, f"{label}: {detail}"


def test_criterion_01_moment_constants():
    m2 = moment_constants(2.0)
    m4 = moment_constants(4.0)
    gap = max(abs(moment_constants(a).c_alpha - moment_constants(a).c_alpha_quad)
              for a in (0.5, 1.0, 2.0, 3.0, 4.0))
    ok = (abs(m2.c_alpha - 1) < 1e-12 and abs(m2.d_alpha - 1) < 1e-12
          and gap < 1e-9 and abs(m4.c_alpha - 2) < 1e-9)
    _verdict(ok, "criterion 1 moment constants",
             f"c_2={m2.c_alpha:.15f} d_2={m2.d_alpha:.15f} "
             f"c_4={m4.c_alpha:.12f} max Gamma-vs-quad gap={gap:.2e}")


def test_criterion_02_log_derivative_engine():
    worst = 0.0
    for B in (1, 2, 3):
        spec = divisor_spec(B)
        for p in (2, 3, 5):
            table = lambda_f_at_prime(spec, p, 6)
            worst = max(worst, max(abs(table.lambda_f[nu - 1] - B * math.log(p))
                                   for nu in range(1, 7)))
    # composition-enumeration oracle on |lambda|^2 at p = 2
    spec = lambda_alpha_spec(tau_table(64), 2.0)
    got = lambda_f_at_prime(spec, 2, 5)
    worst2 = max(abs(got.lambda_f[nu - 1]
                     - lambda_exact_compositions(spec, 2, nu))
                 for nu in range(1, 6))
    ok = worst < 1e-12 and worst2 < 1e-9
    _verdict(ok, "criterion 2 log-derivative engine",
             f"zeta^B deviation={worst:.2e} oracle gap={worst2:.2e}")


def test_criterion_03_dickman():
    grid1 = dickman_rho(1, u_max=6.0)
    err2 = abs(grid1.at(2.0) - (1 - math.log(2)))
    per = int(round(1 / grid1.step))
    jumps, residuals = [], []
    for k in (1, 2, 3):
        g = dickman_rho(k, u_max=6.0)
        left = 2 * g.values[per - 1] - g.values[per - 2]
        jumps.append(abs(left - g.values[per]))
        residuals.append(float(np.max(np.abs(dde_residual(g)))))
    ok = (err2 < 1e-6 and max(jumps) < 1e-6
          and max(residuals) <= 10 * grid1.step ** 2)
    _verdict(ok, "criterion 3 Dickman",
             f"|rho_1(2)-(1-ln2)|={err2:.2e} max jump={max(jumps):.2e} "
             f"max DDE residual={max(residuals):.2e} "
             f"(cap {10 * grid1.step ** 2:.2e})")


def test_criterion_04_cusp_form_table(tau_big, pt_big):
    start = time.time()
    oracle = tau_bruteforce(10)
    ok_tau = (int(tau_big.tau[2]) == -24 == oracle[2]
              and int(tau_big.tau[3]) == 252 == oracle[3])
    primes = pt_big.primes
    lam_p = np.abs(tau_big.lambda_at_primes(primes))
    violations = int(np.sum(lam_p > 2.0))
    # Hecke relation lambda(p) lambda(p^k) = lambda(p^{k+1}) + lambda(p^{k-1})
    from mfsi.rng import Xorshift64Star
    rng = Xorshift64Star(0xC0FFEE)
    lam = tau_big.lam
    worst = 0.0
    for _ in range(10**4):
        p = int(primes[rng.randint(0, len(primes) - 1)])
        kmax = int(math.log(10**6) / math.log(p)) - 1
        k = rng.randint(1, max(1, kmax))
        if p ** (k + 1) > 10**6:
            continue
        lhs = lam[p] * lam[p ** k]
        rhs = lam[p ** (k + 1)] + (lam[p ** (k - 1)] if k > 1 else 1.0)
        worst = max(worst, abs(lhs - rhs) / max(1.0, abs(lhs)))
    ratio = pnt_rs_ratio(tau_big, 10**6, pt_big)
    elapsed = time.time() - start
    ok = (ok_tau and violations == 0 and worst <= 1e-9
          and 0.9 <= ratio <= 1.1 and elapsed < 120)
    _verdict(ok, "criterion 4 cusp-form table",
             f"tau(2)={int(tau_big.tau[2])} tau(3)={int(tau_big.tau[3])} "
             f"Deligne violations={violations} Hecke worst={worst:.2e} "
             f"PNT ratio={ratio:.4f} time={elapsed:.1f}s")


def test_criterion_05_sato_tate(tau_big, pt_big):
    intervals = [(a, a + 0.5) for a in np.arange(-2.0, 2.0, 0.5)]
    reports = quant_st_check(tau_big, 10**6, intervals, pt_big)
    sup = max(r.discrepancy for r in reports)
    _verdict(sup <= 0.02, "criterion 5 Sato-Tate equidistribution",
             f"sup discrepancy over 8 half-width intervals = {sup:.4f}")


def test_criterion_06_variance_decay(tau_big, ft_big, pt_big):
    spec = lambda_alpha_spec(tau_big, 2.0)
    values = evaluate_multiplicative(spec, ft_big)
    V = {}
    for h0 in (10.0, 100.0, 1000.0):
        V[h0] = variance_mrfull(spec, values, 10**6, h0, pt_big).variance
    decay = V[1000.0] <= 0.6 * V[10.0]
    monotone = (V[100.0] <= 1.1 * V[10.0] and V[1000.0] <= 1.1 * V[100.0])
    # tiny-X oracle
    ft4 = build_factor_table(10**4)
    pt4 = sieve_primes(10**4)
    v4 = evaluate_multiplicative(divisor_spec(2), ft4)
    vr = variance_mrfull(divisor_spec(2), v4, 10**4, 10.0, pt4)
    brute = variance_bruteforce(v4, 10**4, vr.h)
    exact = abs(vr.variance - brute) < 1e-9
    ok = decay and monotone and exact
    _verdict(ok, "criterion 6 variance decay",
             f"V(10)={V[10.0]:.5f} V(100)={V[100.0]:.5f} "
             f"V(1000)={V[1000.0]:.5f} brute gap={abs(vr.variance - brute):.2e}")


def test_criterion_07_t0_calibration(tau_big, pt_big):
    prof = minimize_t0(lambda_alpha_spec(tau_big, 2.0), 10**6, 10.0, pt_big)
    cap = 1 / (4 * math.log(10**6))
    twist = minimize_t0(planted_twist_spec(0.5), 10**6, 2.0, pt_big)
    ok = abs(prof.t0) <= cap and abs(twist.t0 - 0.5) <= 1e-4
    _verdict(ok, "criterion 7 t0 calibration",
             f"|t0(|lambda|^2)|={abs(prof.t0):.2e} (cap {cap:.2e}) "
             f"planted twist t0={twist.t0:.6f}")


def test_criterion_08_hooley_sandwich(ft_big):
    start = time.time()
    ft4 = build_factor_table(10**4)
    sc = sandwich_scan(ft4, 10**4)
    finite = (np.all(np.isfinite(sc.ratio_low[1:]))
              and np.all(np.isfinite(sc.ratio_up[1:])))
    low_lo = float(sc.ratio_low[: 5000 + 1].max())
    low_hi = float(sc.ratio_low[5000 + 1:].max())
    up_lo = float(sc.ratio_up[: 5000 + 1].max())
    up_hi = float(sc.ratio_up[5000 + 1:].max())
    stable = low_hi <= 1.2 * low_lo and up_hi <= 1.2 * up_lo
    delta12 = delta_grid_oracle(12, ft=ft4)
    rep = hooley_interval_experiment(10**6, 1.0, 50.0, ft_big, samples=4096)
    windows_ok = bool(np.all(rep.window_averages >= 1.0))
    median_ok = 0.5 <= rep.median_ratio <= 2.0
    elapsed = time.time() - start
    ok = (finite and stable and delta12 == 3 and windows_ok and median_ok
          and elapsed < 300)
    _verdict(ok, "criterion 8 Hooley sandwich",
             f"constant growth low={low_hi / low_lo:.3f} up={up_hi / up_lo:.3f} "
             f"Delta(12)={delta12} min window avg={rep.min_average:.3f} "
             f"median ratio={rep.median_ratio:.3f} time={elapsed:.1f}s")


def test_criterion_09_smooth_sums(ft_big):
    ft100 = build_factor_table(100)
    psi = psi_smooth(100, 5.0, one_spec(), ft100).psi
    ratios = {}
    for expo in (1 / 3, 1 / 4):
        y = float(10**6) ** expo
        ratios[expo] = psi_smooth(10**6, y, divisor_spec(2), ft_big).ratio
    ok = psi == 34.0 and all(0.8 <= r <= 1.25 for r in ratios.values())
    _verdict(ok, "criterion 9 smooth sums",
             f"Psi_1(100,5)={psi:.0f} d_2 ratios "
             f"y=x^(1/3):{ratios[1 / 3]:.4f} y=x^(1/4):{ratios[1 / 4]:.4f}")


def test_criterion_10_large_sieve_and_perron():
    growths = {}
    for kind in ("LSInts-a", "LSInts-b", "LSInts-c"):
        rep = large_sieve_harness(kind, trials=50)
        growths[kind] = rep.max_constants[-1] / rep.max_constants[0]
    ft = build_factor_table(10**5)
    values = evaluate_multiplicative(one_spec(), ft)
    X, h = 10**5, 10**3
    T = (X / h) * math.log(X) ** 2
    res = perron_window_check(values, 0.9 * X, h, T)
    ok = all(g <= 1.5 for g in growths.values()) and res.rel_err <= 1e-3
    _verdict(ok, "criterion 10 large sieve / Perron",
             "constant growth " + " ".join(f"{k}={g:.3f}"
                                           for k, g in growths.items())
             + f" Perron rel err={res.rel_err:.2e}")


def test_criterion_11_reproducibility(tmp_path, monkeypatch):
    monkeypatch.setenv("MFSI_CACHE_DIR", str(tmp_path / "cache"))
    args = ["hooley", "--xmax", "20000", "--samples", "256", "--seed", "7",
            "--threads", "1"]
    assert run_cli(args + ["--out", str(tmp_path / "a.csv")]) == 0
    assert run_cli(args + ["--out", str(tmp_path / "b.csv")]) == 0
    identical = (tmp_path / "a.csv").read_bytes() == \
        (tmp_path / "b.csv").read_bytes()
    ft = build_factor_table(10**5)
    cache.save_spf(ft, tmp_path / "spf.mfsi")
    spf_ok = np.array_equal(cache.load_spf(tmp_path / "spf.mfsi").spf, ft.spf)
    tt = tau_table(10**4)
    cache.save_tau(tt, tmp_path / "tau.mfsi")
    back = cache.load_tau(tmp_path / "tau.mfsi")
    tau_ok = (all(int(a) == int(b) for a, b in zip(tt.tau[1:], back.tau[1:]))
              and np.array_equal(tt.lam, back.lam))
    ok = identical and spf_ok and tau_ok
    _verdict(ok, "criterion 11 reproducibility",
             f"CLI byte-identical={identical} spf roundtrip={spf_ok} "
             f"tau roundtrip={tau_ok}")
