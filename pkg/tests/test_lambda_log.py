import math

import numpy as np
import pytest

from mfsi.arith import divisor_spec
from mfsi.catalog import lambda_alpha_spec, tau_table
from mfsi.lambda_log import (lambda_exact_compositions, lambda_f_at_prime,
                             partition_count)


def test_zeta_power_log_derivative():
    # the local factor of zeta^B forces Lambda(p^nu) = B log p for all nu
    for B in (1, 2, 3):
        spec = divisor_spec(B)
        for p in (2, 3, 5):
            table = lambda_f_at_prime(spec, p, 6)
            for nu in range(1, 7):
                assert abs(table.lambda_f[nu - 1] - B * math.log(p)) < 1e-12


def test_first_coefficient_is_fp_logp():
    spec = divisor_spec(2.5, C=1.0)
    for p in (2, 7, 13):
        table = lambda_f_at_prime(spec, p, 3)
        assert table.lambda_f[0] == pytest.approx(spec(p, 1) * math.log(p))


def test_newton_recurrence_vs_composition_oracle():
    table = tau_table(64)
    spec = lambda_alpha_spec(table, 2.0)
    got = lambda_f_at_prime(spec, 2, 5)
    for nu in range(1, 6):
        oracle = lambda_exact_compositions(spec, 2, nu)
        assert got.lambda_f[nu - 1] == pytest.approx(oracle, abs=1e-10)


def test_composition_oracle_on_d3():
    spec = divisor_spec(3)
    for nu in range(1, 6):
        assert lambda_exact_compositions(spec, 3, nu) == pytest.approx(
            3 * math.log(3), abs=1e-12)


def test_partition_counts():
    assert partition_count(1).p_count == 1
    assert partition_count(5).p_count == 7
    assert partition_count(100).p_count == 190569292


def test_partition_direct_dp_oracle():
    # independent route: coin-change DP over parts
    N = 40
    dp = [1] + [0] * N
    for part in range(1, N + 1):
        for s in range(part, N + 1):
            dp[s] += dp[s - part]
    for nu in range(N + 1):
        assert partition_count(nu).p_count == dp[nu]


def test_partition_bound_on_lambda():
    # |Lambda_f(p^nu)| <= p(nu) * (max_k |f(p^k)|)^nu * nu log p
    spec = divisor_spec(2, C=2.0)
    p = 2
    table = lambda_f_at_prime(spec, p, 10)
    fmax = max(abs(spec(p, k)) for k in range(1, 11))
    for nu in range(1, 11):
        bound = partition_count(nu).p_count * fmax ** nu * nu * math.log(p)
        assert abs(table.lambda_f[nu - 1]) <= bound + 1e-9


def test_prime_power_growth_envelope():
    # |d_B^C(p^nu)| <= c (5/4)^nu (1 + nu/(B-1))^{(B-1)C} with one c per (B,C)
    for B, C in ((2, 1.0), (3, 2.0)):
        spec = divisor_spec(B, C=C)
        ratios = []
        for nu in range(1, 51):
            envelope = (5 / 4) ** nu * (1 + nu / (B - 1)) ** ((B - 1) * C)
            ratios.append(abs(spec(2, nu)) / envelope)
        c = max(ratios)
        assert np.isfinite(c) and c <= 2.0


def test_convergent_prime_power_tail():
    # sum over p^nu <= X, nu >= 2 of |f(p^nu)| / p^{(1-eta) nu} stays bounded
    eta = 0.25
    spec = divisor_spec(2, C=1.5)
    totals = []
    from mfsi.arith import sieve_primes
    primes = sieve_primes(1000).primes
    for X in (10**4, 10**5, 10**6):
        total = 0.0
        for p in primes:
            if p * p > X:
                break
            nu = 2
            while p ** nu <= X:
                total += abs(spec(int(p), nu)) / p ** ((1 - eta) * nu)
                nu += 1
        totals.append(total)
    # partial sums of a convergent series: increments shrink, total bounded
    assert totals[2] - totals[1] < totals[1] - totals[0]
    assert max(totals) < 20.0
