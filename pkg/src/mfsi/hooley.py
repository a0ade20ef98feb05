"""Characteristic-function integrals for the divisor-concentration function
Delta, the two-sided sandwich, and the short-interval Delta experiment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arith import FactorTable, evaluate_multiplicative
from .catalog import delta_table, f_theta_spec, hooley_delta
from .rng import DEFAULT_SEED, Xorshift64Star


@dataclass
class CharFunIntegrals:
    n: int
    lower: float  # (1/d(n)) int_0^1 |d(n,theta)|^2 dtheta
    upper: float  # int_0^1 |d(n,theta)| dtheta
    exact: bool   # lower computed from the divisor double sum


def _sinc(x: np.ndarray) -> np.ndarray:
    out = np.ones_like(x)
    nz = x != 0
    out[nz] = np.sin(x[nz]) / x[nz]
    return out


def charfun_integrals(n: int, ft: FactorTable | None = None,
                      exact_cutoff: int = 64) -> CharFunIntegrals:
    """Both theta-integrals of the twisted divisor function.

    The squared integral has the exact closed form
    (1/d(n)) sum_{d, d'} sinc(log d - log d') from int_0^1 e^{i theta u}
    dtheta; it is used whenever d(n) <= exact_cutoff.  The modulus
    integral (and the squared one beyond the cutoff) use composite
    Simpson with panel doubling to relative change < 1e-9.
    """
    if n > 10**6:
        raise ValueError("n beyond supported range")
    profile = hooley_delta(n, ft)
    divs = np.array(profile.divisors, dtype=np.float64)
    dn = len(divs)

    logd = np.log(divs)
    exact = dn <= exact_cutoff
    if exact:
        u = logd[:, None] - logd[None, :]
        lower = float(np.sum(_sinc(u))) / dn
    else:
        lower = _simpson_theta(
            lambda th: np.abs(np.exp(1j * np.outer(th, logd)).sum(axis=1)) ** 2
        ) / dn
    # |d(n, theta)| has |cos|-style kinks where the sum vanishes, so this
    # integral refines further than the squared one
    upper = _simpson_theta(
        lambda th: np.abs(np.exp(1j * np.outer(th, logd)).sum(axis=1)))
    return CharFunIntegrals(n=n, lower=lower, upper=upper, exact=exact)


def _simpson_theta(f, tol: float = 1e-9, max_panels: int = 1 << 19) -> float:
    """Composite Simpson on [0, 1] with panel doubling.

    `f` maps an array of theta values to an array of integrand values.
    """
    panels = 16
    prev = None
    while panels <= max_panels:
        xs = np.linspace(0.0, 1.0, panels + 1)
        ys = np.asarray(f(xs), dtype=np.float64)
        h = 1.0 / panels
        val = h / 3 * (ys[0] + ys[-1] + 4 * np.sum(ys[1:-1:2])
                       + 2 * np.sum(ys[2:-1:2]))
        if prev is not None and abs(val - prev) <= tol * max(abs(val), 1e-300):
            return float(val)
        prev = val
        panels *= 2
    raise ArithmeticError("theta quadrature did not converge")


@dataclass
class SandwichScan:
    N: int
    ratio_low: np.ndarray  # lower integral / Delta(n), index n (1 at n=1)
    ratio_up: np.ndarray   # Delta(n) / upper integral


def sandwich_scan(ft: FactorTable, N: int, panels: int = 256) -> SandwichScan:
    """Both sandwich ratios for every n <= N.

    The squared integral uses the exact divisor double sum; the modulus
    integral uses composite Simpson with a fixed panel count, vectorized
    over the theta grid (the integrand is smooth on [0, 1], so a fixed
    grid is accurate far beyond the ratio tolerances tracked here).
    """
    if panels % 2 == 1:
        panels += 1
    thetas = np.linspace(0.0, 1.0, panels + 1)
    weights = np.ones(panels + 1)
    weights[1:-1:2] = 4.0
    weights[2:-1:2] = 2.0
    weights *= 1.0 / (3 * panels)

    ratio_low = np.ones(N + 1)
    ratio_up = np.ones(N + 1)
    for n in range(2, N + 1):
        profile = hooley_delta(n, ft)
        logd = np.log(np.array(profile.divisors, dtype=np.float64))
        dn = len(logd)
        u = logd[:, None] - logd[None, :]
        lower = float(np.sum(_sinc(u))) / dn
        vals = np.abs(np.exp(1j * np.outer(thetas, logd)).sum(axis=1))
        upper = float(weights @ vals)
        ratio_low[n] = lower / profile.delta
        ratio_up[n] = profile.delta / upper
    return SandwichScan(N=N, ratio_low=ratio_low, ratio_up=ratio_up)


@dataclass
class IntervalExperimentReport:
    X: int
    delta: float
    h0: float
    h: float
    samples: int
    long_average: float
    window_averages: np.ndarray
    median_ratio: float        # median window avg / long avg
    min_average: float
    threshold_fractions: dict  # theta -> fraction of windows >= theta*delta*loglog X


def hooley_interval_experiment(X: int, delta: float, h0: float,
                               ft: FactorTable, samples: int = 4096,
                               seed: int = DEFAULT_SEED,
                               deltas: np.ndarray | None = None
                               ) -> IntervalExperimentReport:
    """Window averages of Delta(n) over sampled short intervals.

    h = h0 (log X)^{(1+delta)/2}; windows (x-h, x] for sampled
    x in [X/2, X]; prefix sums over a full Delta table make each window
    O(1).
    """
    if not (0 < delta <= 1):
        raise ValueError("delta must lie in (0, 1]")
    h = h0 * math.log(X) ** ((1 + delta) / 2)
    if not (10 <= h0 and h <= X / 10):
        raise ValueError("h0 out of range")
    if deltas is None:
        deltas = delta_table(ft, X)
    prefix = np.concatenate([[0.0], np.cumsum(deltas[1:])])

    long_avg = (prefix[X] - prefix[X // 2]) / (X - X // 2)
    rng = Xorshift64Star(seed)
    half = X // 2
    averages = np.empty(samples)
    for i in range(samples):
        x = half + h + rng.uniform() * (X - half - h)
        averages[i] = (prefix[int(x)] - prefix[int(x - h)]) / h

    llX = math.log(math.log(X))
    thetas = (0.1, 0.25, 0.5, 1.0)
    fractions = {th: float(np.mean(averages >= th * delta * llX))
                 for th in thetas}
    return IntervalExperimentReport(
        X=X, delta=delta, h0=h0, h=h, samples=samples,
        long_average=float(long_avg), window_averages=averages,
        median_ratio=float(np.median(averages)) / float(long_avg),
        min_average=float(averages.min()), threshold_fractions=fractions)


@dataclass
class LongSumLowBoundReport:
    X: int
    Y: float
    delta: float
    integral: float       # int_{1/log Y}^1 (2/X) sum f_theta(n) dtheta
    comparand: float      # delta * loglog X
    ratio: float
    endpoint_value: float  # integrand at theta = 1


def ftheta_longsum_lowbound(X: int, delta: float, ft: FactorTable,
                            n_theta: int = 64) -> LongSumLowBoundReport:
    """The theta-integral of long averages of f_theta over (X/2, X].

    Y = exp((log X)^delta); integration by Simpson in log theta from
    1/log Y to 1, with each long average computed from one pass over the
    divisor lists via d(n, theta) evaluated multiplicatively.
    """
    Y = math.exp(math.log(X) ** delta)
    th_lo = 1.0 / math.log(Y)
    if th_lo >= 1.0:
        raise ValueError("degenerate theta range; X too small for this delta")
    if n_theta % 2 == 1:
        n_theta += 1
    logs = np.linspace(math.log(th_lo), 0.0, n_theta + 1)
    thetas = np.exp(logs)

    half = X // 2
    vals = np.empty(len(thetas))
    for j, th in enumerate(thetas):
        table = evaluate_multiplicative(f_theta_spec(float(th)), ft)
        vals[j] = float(np.sum(table.values[half + 1 : X + 1].real)) * 2.0 / X

    # Simpson in log theta: integral of f(theta)/theta d(log theta)... the
    # measure dtheta = theta d(log theta), so integrate vals * theta in logs
    hstep = (logs[-1] - logs[0]) / n_theta
    integrand = vals * thetas
    integral = hstep / 3 * (integrand[0] + integrand[-1]
                            + 4 * np.sum(integrand[1:-1:2])
                            + 2 * np.sum(integrand[2:-1:2]))
    comparand = delta * math.log(math.log(X))
    return LongSumLowBoundReport(X=X, Y=Y, delta=delta,
                                 integral=float(integral),
                                 comparand=comparand,
                                 ratio=float(integral) / comparand,
                                 endpoint_value=float(vals[-1]))
