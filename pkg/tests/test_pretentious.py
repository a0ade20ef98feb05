import math

import numpy as np
import pytest

from mfsi.arith import (divisor_spec, evaluate_multiplicative, one_spec,
                        planted_twist_spec)
from mfsi.pretentious import (ClassParams, class_membership_report,
                              euler_products, minimize_t0, rho_squared)


def test_rho_of_one_at_zero_vanishes(pt_small):
    assert rho_squared(one_spec(), 0.0, 10**4, pt_small) == pytest.approx(0.0)


def test_rho_nonnegative(pt_small):
    for t in (-2.0, -0.3, 0.0, 0.7, 5.0):
        assert rho_squared(divisor_spec(2), t, 10**4, pt_small) >= -1e-12


def test_rho_direct_sum_oracle(pt_small):
    # independent evaluation of the defining prime sum
    spec = planted_twist_spec(0.4)
    t = 1.1
    X = 5000
    total = 0.0
    for p in pt_small.primes[pt_small.primes <= X]:
        fp = complex(spec(int(p), 1))
        total += (abs(fp) - (fp * p ** (-1j * t)).real) / p
    assert rho_squared(spec, t, X, pt_small) == pytest.approx(total, abs=1e-9)


def test_minimize_t0_trivial(pt_small):
    prof = minimize_t0(one_spec(), 10**4, 5.0, pt_small)
    assert prof.t0 == 0.0
    assert prof.M == pytest.approx(0.0, abs=1e-12)


def test_minimize_t0_planted_twist(pt_small):
    prof = minimize_t0(planted_twist_spec(0.5), 10**4, 2.0, pt_small)
    assert prof.t0 == pytest.approx(0.5, abs=1e-4)


def test_minimize_t0_symmetric_tiebreak(pt_small):
    # a real nonnegative function has symmetric rho^2; the reported
    # minimizer must be the canonical t0 = 0, not a negative mirror
    prof = minimize_t0(divisor_spec(2), 10**4, 3.0, pt_small)
    assert prof.t0 >= 0.0
    assert abs(prof.t0) <= prof.grid_step


def test_euler_products_one(pt_small):
    ep = euler_products(one_spec(), 10**4, pt_small)
    assert ep.H == pytest.approx(1.0)
    assert ep.P == pytest.approx(1.0)


def test_euler_products_direct(pt_small):
    spec = divisor_spec(2)
    X = 10**4
    parr = pt_small.primes[pt_small.primes <= X].astype(float)
    H = float(np.prod(1 + (2 - 1) ** 2 / parr))
    P = float(np.prod(1 + (2 - 1) / parr))
    ep = euler_products(spec, X, pt_small)
    assert ep.H == pytest.approx(H, rel=1e-12)
    assert ep.P == pytest.approx(P, rel=1e-12)


def test_class_params_kappa():
    params = ClassParams(A=1.0, B=2.0, C=1.0)
    assert params.kappa == pytest.approx(params.sigma_hat / (8 * 2.0 + 21))


def test_membership_report_d2(pt_small, ft_small):
    spec = divisor_spec(2)
    values = evaluate_multiplicative(spec, ft_small)
    params = ClassParams(A=1.0, B=2.0, C=1.0)
    rep = class_membership_report(spec, 10**4, params, pt_small, values=values)
    assert rep.passes_i and rep.passes_ii
    assert rep.max_fp <= 2.0 + 1e-12
    assert math.isfinite(rep.sieve_constant)
    assert math.isfinite(rep.rho_constant)
