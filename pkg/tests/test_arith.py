import math

import numpy as np
import pytest

from mfsi.arith import (EmptyTableError, NumericRuleError, MultiplicativeSpec,
                        build_factor_table, divisor_spec, evaluate_multiplicative,
                        one_spec, planted_twist_spec, prime_values, sieve_primes)
from mfsi.rng import Xorshift64Star


def trial_factorize(n):
    out = []
    d = 2
    while d * d <= n:
        k = 0
        while n % d == 0:
            n //= d
            k += 1
        if k:
            out.append((d, k))
        d += 1
    if n > 1:
        out.append((n, 1))
    return out


def test_prime_counts():
    pt = sieve_primes(10**4)
    assert len(pt.primes) == 1229
    assert pt.primes[0] == 2 and pt.primes[-1] == 9973
    assert sieve_primes(10).primes.tolist() == [2, 3, 5, 7]


def test_sieve_empty():
    with pytest.raises(EmptyTableError):
        sieve_primes(1)


def test_pi_function():
    pt = sieve_primes(1000)
    assert pt.pi(100) == 25
    assert pt.pi(2) == 1
    assert pt.pi(1) == 0


def test_spf_matches_trial_division():
    ft = build_factor_table(3000)
    rng = Xorshift64Star(7)
    for _ in range(200):
        n = rng.randint(2, 3000)
        assert ft.factorize(n) == trial_factorize(n)


def test_divisors_of_12():
    ft = build_factor_table(100)
    assert sorted(ft.divisors(12)) == [1, 2, 3, 4, 6, 12]


def test_divisor_spec_prime_powers():
    for B in (1, 2, 3):
        spec = divisor_spec(B)
        for p in (2, 3, 5):
            for k in range(1, 7):
                assert spec(p, k) == pytest.approx(math.comb(B + k - 1, k))


def test_divisor_spec_real_order():
    # Gamma form at non-integer B against the rising-factorial product
    spec = divisor_spec(1.5)
    for k in range(1, 6):
        expect = 1.0
        for j in range(k):
            expect *= (1.5 + j) / (j + 1)
        assert spec(7, k) == pytest.approx(expect, rel=1e-12)


def test_evaluate_multiplicative_d2():
    ft = build_factor_table(2000)
    table = evaluate_multiplicative(divisor_spec(2), ft)
    for n in range(1, 2001):
        dn = sum(1 for d in range(1, n + 1) if n % d == 0) if n <= 200 else None
        if dn is not None:
            assert table.values[n].real == pytest.approx(dn)
    assert table.values[1] == 1


def test_evaluate_multiplicative_is_multiplicative():
    ft = build_factor_table(10**4)
    spec = planted_twist_spec(0.3)
    table = evaluate_multiplicative(spec, ft)
    rng = Xorshift64Star(11)
    for _ in range(100):
        m = rng.randint(2, 90)
        n = rng.randint(2, 90)
        if math.gcd(m, n) == 1:
            assert table.values[m * n] == pytest.approx(
                table.values[m] * table.values[n], rel=1e-12)


def test_nonfinite_rule_rejected():
    bad = MultiplicativeSpec(name="bad",
                             value_at_prime_power=lambda p, k: float("inf"))
    with pytest.raises(NumericRuleError):
        bad(2, 1)


def test_prime_values_vectorized(pt_small):
    primes = pt_small.primes[:50]
    vals = prime_values(one_spec(), primes)
    assert np.allclose(vals, 1.0)


def test_rng_reproducible():
    a = Xorshift64Star(0xC0FFEE)
    b = Xorshift64Star(0xC0FFEE)
    assert [a.next_u64() for _ in range(10)] == [b.next_u64() for _ in range(10)]
    u = [Xorshift64Star(3).uniform() for _ in range(1)][0]
    assert 0.0 <= u < 1.0


def test_rng_uniform_range():
    rng = Xorshift64Star(42)
    xs = [rng.uniform() for _ in range(10000)]
    assert all(0.0 <= x < 1.0 for x in xs)
    assert abs(sum(xs) / len(xs) - 0.5) < 0.02
