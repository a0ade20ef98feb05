import math

import numpy as np
import pytest
from scipy.integrate import quad

from mfsi.arith import divisor_spec, evaluate_multiplicative
from mfsi.dirichlet import (WellSpacedSet, build_ladder, decomposition_check,
                            eval_polynomial, factored_set_filter,
                            halasz_sup_ratio, large_sieve_harness, make_handle,
                            mean_value_integral, omega_window,
                            perron_window_check, _exact_l2_integral,
                            _perron_kernel)
from mfsi.rng import Xorshift64Star


@pytest.fixture(scope="module")
def d2_values(ft_small):
    return evaluate_multiplicative(divisor_spec(2), ft_small)


def test_perron_kernel_vs_quadrature():
    for u in (-2.0, -0.5, 0.3, 1.7):
        for T in (5.0, 40.0):
            re = quad(lambda t: math.cos(t * u) / (1 + t * t), 0, T,
                      limit=400)[0]
            im = quad(lambda t: t * math.sin(t * u) / (1 + t * t), 0, T,
                      limit=400)[0]
            got = _perron_kernel(np.array([u]), T)[0]
            # the kernel is 2 Re Phi with Phi = int_0^T e^{itu}/(1+it) dt
            assert got == pytest.approx(2 * (re + im), abs=1e-10)


def test_perron_kernel_at_zero():
    got = _perron_kernel(np.array([0.0]), 7.0)[0]
    assert got == pytest.approx(2 * math.atan(7.0), abs=1e-12)


def test_perron_window(d2_values):
    X = 10**4
    h = X / 50
    T = (X / h) * math.log(X) ** 2
    res = perron_window_check(d2_values, 0.8 * X, h, T)
    assert res.rel_err < 0.05


def test_eval_polynomial_direct(d2_values):
    handle = make_handle(d2_values, 100, 200)
    t = 1.5
    direct = sum(d2_values.values[n] / n * n ** (-1j * t)
                 for n in range(101, 201))
    assert eval_polynomial(handle, t) == pytest.approx(direct, abs=1e-10)


def test_mean_value_integral_converges(d2_values):
    handle = make_handle(d2_values, 100, 300)
    res = mean_value_integral(handle, -5.0, 5.0, 10**4)
    assert res.value > 0
    assert res.rel_change < 0.5


def test_well_spaced_rejects_close_points():
    with pytest.raises(ValueError):
        WellSpacedSet(points=np.array([0.0, 0.5]), T=10.0)
    with pytest.raises(ValueError):
        WellSpacedSet(points=np.array([0.0, 20.0]), T=10.0)
    ws = WellSpacedSet(points=np.array([-3.0, 0.0, 2.5]), T=10.0)
    assert len(ws.points) == 3


def test_exact_l2_integral_vs_quadrature():
    rng = Xorshift64Star(23)
    n = np.arange(50, 60, dtype=np.int64)
    coeffs = (np.array([rng.uniform() - 0.5 for _ in n])
              + 1j * np.array([rng.uniform() - 0.5 for _ in n]))
    T = 4.0

    def f(t):
        return abs(np.sum(coeffs * np.exp(-1j * t * np.log(n)))) ** 2

    expect = quad(f, -T, T, limit=800)[0]
    got = _exact_l2_integral(n, coeffs[None, :], T)[0]
    assert got == pytest.approx(expect, rel=1e-9)


def test_ladder_identities():
    lad = build_ladder(10**3, 10**6, 1.0, 0.05)
    logP1 = lad.logP[0]
    logQ1 = lad.logQ[0]
    for j in range(1, len(lad.logQ) + 1):
        assert lad.logP[j - 1] == pytest.approx(
            j ** (4 * j - 2) * logQ1 ** (j - 1) * logP1, rel=1e-12)
        assert lad.logQ[j - 1] == pytest.approx(
            j ** (4 * j) * logQ1 ** j, rel=1e-12)
        # ratio identity: logP_j / logQ_j = logP_1 / (j^2 logQ_1)
        assert lad.logP[j - 1] / lad.logQ[j - 1] == pytest.approx(
            logP1 / (j * j * logQ1), rel=1e-12)
    assert 0 <= lad.J <= len(lad.logQ)


def test_ladder_eta_guard():
    with pytest.raises(ValueError):
        build_ladder(10**3, 10**6, 1.0, 0.2)


def test_factored_set_filter_bruteforce(ft_small):
    # indicator of n with a prime factor in every closed window [P_j, Q_j]
    mask = factored_set_filter(ft_small, [3.0, 20.0], [10.0, 100.0])
    for n in range(1, 500):
        ps = [p for p, _ in ft_small.factorize(n)]
        ok = (any(3 <= p <= 10 for p in ps)
              and any(20 <= p <= 100 for p in ps))
        assert bool(mask[n]) == ok


def test_omega_window_counts(pt_small):
    w = omega_window(1000, pt_small, 2.0, 10.0)
    assert w[12] == 2  # 2 and 3, closed window
    assert w[35] == 2  # 5 and 7
    assert w[49] == 1
    assert w[1] == 0


def test_decomposition_identity(pt_small, ft_small, d2_values):
    rep = decomposition_check(divisor_spec(2), d2_values, 10**4, 11.0, 31.0,
                              8.0, pt_small)
    assert rep.identity_defect <= rep.defect_bound
    assert np.all(np.isfinite(rep.lemma_ratios))


def test_halasz_ratio_finite(pt_small, ft_small, d2_values):
    rep = halasz_sup_ratio(divisor_spec(2), d2_values, 10**4, 11.0, 31.0,
                           2.0, pt_small)
    assert rep.sup_value > 0
    assert rep.ratio < 5.0


def test_large_sieve_all_kinds_quick():
    for kind in ("LSInts-a", "LSInts-b", "LSInts-c", "LSPrim-a", "LSPrim-b",
                 "MixedMom"):
        rep = large_sieve_harness(kind, trials=3, sizes=(1 << 8, 1 << 10))
        assert len(rep.max_constants) == 2
        assert all(np.isfinite(c) and c > 0 for c in rep.max_constants)
