"""Short-interval window sums, variance against the twisted main term, and
Lipschitz-type long-sum comparisons, all on O(1) prefix-sum lookups.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .arith import MultiplicativeSpec, PrimeTable, ValueTable
from .pretentious import ClassParams, euler_products
from .rng import DEFAULT_SEED, Xorshift64Star


@dataclass
class WindowPrefix:
    X: int
    t0: float
    prefix: np.ndarray          # S(x) = sum_{n<=x} f(n), index x
    twisted_prefix: np.ndarray  # S_t0(x) = sum_{n<=x} f(n) n^{-i t0}

    def window_sum(self, x: float, h: float) -> complex:
        """Sum of f over (x-h, x]."""
        return complex(self.prefix[int(x)] - self.prefix[int(x - h)])

    def twisted_window_sum(self, x: float, h: float) -> complex:
        return complex(self.twisted_prefix[int(x)]
                       - self.twisted_prefix[int(x - h)])


@dataclass
class VarianceReport:
    X: int
    h0: float
    h: float
    t0: float
    variance: float
    trivial_bound: float   # P_f(X)^2
    rhs_envelope: float
    samples: int


@dataclass
class LipschitzReport:
    w: float
    lhs: float
    envelope: float
    ratio: float


@dataclass
class LongSumReport:
    h: float
    lhs: float
    envelope: float
    ratio: float


def build_window_prefix(values: ValueTable, t0: float) -> WindowPrefix:
    if not math.isfinite(t0):
        raise ValueError("t0 must be finite")
    X = values.limit
    prefix = np.concatenate([[0.0 + 0.0j], np.cumsum(values.values[1:])])
    if t0 == 0.0:
        twisted = prefix
    else:
        n = np.arange(1, X + 1, dtype=np.float64)
        tw = values.values[1:] * np.exp(-1j * t0 * np.log(n))
        twisted = np.concatenate([[0.0 + 0.0j], np.cumsum(tw)])
    return WindowPrefix(X=X, t0=t0, prefix=prefix, twisted_prefix=twisted)


def main_term(x: float, h: float, t0: float, long_avg_twisted: complex) -> complex:
    """(1/h) int_{x-h}^x u^{it0} du times the twisted long average."""
    if not (0 < h <= x):
        raise ValueError("need 0 < h <= x")
    if t0 == 0.0:
        return long_avg_twisted
    s = 1.0 + 1j * t0
    factor = (x ** s - (x - h) ** s) / (h * s)
    return factor * long_avg_twisted


def variance_mrfull(spec: MultiplicativeSpec, values: ValueTable, X: int,
                    h0: float, primes: PrimeTable, t0: float = 0.0,
                    params: Optional[ClassParams] = None,
                    samples: Optional[int] = None,
                    seed: int = DEFAULT_SEED,
                    prefix: Optional[WindowPrefix] = None) -> VarianceReport:
    """Mean-square discrepancy between the short average over (x-h, x] and
    the twisted main term, for x over (X/2, X].

    h = h0 * H(f;X).  With samples=None every integer x in (X/2, X] is
    used (unit-step Riemann sum); otherwise `samples` uniform random x.
    """
    if params is None:
        if spec.declared_bounds is None:
            raise ValueError("need ClassParams or declared bounds on the spec")
        A, B, C = spec.declared_bounds
        params = ClassParams(A=A, B=B, C=C, sigma=min(1.0, A))
    ep = euler_products(spec, X, primes)
    h = h0 * ep.H
    if not (10 <= h0 and h <= X / 10):
        raise ValueError(f"h0={h0} gives h={h:.3g} outside [10*H, X/10]")
    if prefix is None:
        prefix = build_window_prefix(values, t0)

    half = X // 2
    long_avg = complex(prefix.twisted_prefix[X] - prefix.twisted_prefix[half]) \
        * (2.0 / X)

    if samples is None:
        xs = np.arange(half + 1, X + 1, dtype=np.float64)
    else:
        rng = Xorshift64Star(seed)
        xs = np.array([half + 1 + rng.uniform() * (X - half - 1)
                       for _ in range(samples)])
    hi = np.floor(xs).astype(np.int64)
    lo = np.floor(xs - h).astype(np.int64)
    short_avg = (prefix.prefix[hi] - prefix.prefix[lo]) / h
    if t0 == 0.0:
        main = np.full(len(xs), long_avg, dtype=np.complex128)
        short = short_avg
    else:
        s = 1.0 + 1j * t0
        factor = (xs ** s - (xs - h) ** s) / (h * s)
        main = factor * long_avg
        short = short_avg
    variance = float(np.mean(np.abs(short - main) ** 2))

    llh0 = math.log(math.log(h0)) if h0 > math.e else 1e-9
    llX = math.log(math.log(X))
    A = params.A
    envelope = ((max(llh0, 1e-9) / math.log(h0)) ** A
                + (llX / math.log(X) ** params.kappa) ** min(1.0, A)) * ep.P ** 2
    return VarianceReport(X=X, h0=h0, h=h, t0=t0, variance=variance,
                          trivial_bound=ep.P ** 2, rhs_envelope=envelope,
                          samples=len(xs))


def variance_bruteforce(values: ValueTable, X: int, h: float, t0: float = 0.0
                        ) -> float:
    """Double-loop oracle for the variance at tiny X (t0 = 0 main term)."""
    vals = values.values
    half = X // 2
    long_avg = complex(np.sum(vals[half + 1 : X + 1])) * (2.0 / X)
    total = 0.0
    for x in range(half + 1, X + 1):
        s = 0.0 + 0.0j
        n = int(math.floor(x - h)) + 1
        while n <= x:
            s += vals[n]
            n += 1
        total += abs(s / h - long_avg) ** 2
    return total / (X - half)


def lipschitz_scan(spec: MultiplicativeSpec, values: ValueTable, X: int,
                   w_grid, primes: PrimeTable, t0: float = 0.0,
                   params: Optional[ClassParams] = None
                   ) -> tuple[list[LipschitzReport], list[LongSumReport]]:
    """Long-average Lipschitz discrepancies over w, plus the medium-length
    comparisons at h = X/(log X)^{sigma/2} and h = X/10.
    """
    if params is None:
        A, B, C = spec.declared_bounds
        params = ClassParams(A=A, B=B, C=C, sigma=min(1.0, A))
    sg = params.sigma_hat
    ep = euler_products(spec, X, primes)
    prefix = build_window_prefix(values, t0)
    lX = math.log(X)
    llX = math.log(lX)
    full = complex(prefix.twisted_prefix[X]) / X

    lips = []
    for w in w_grid:
        if not (1 <= w <= X ** (1 / 3) + 1e-9):
            raise ValueError(f"w={w} outside [1, X^(1/3)]")
        part = complex(prefix.twisted_prefix[int(X / w)]) * (w / X)
        lhs = abs(part - full)
        lew = math.log(math.e * w)
        envelope = math.log(lX / lew) * ((lew + llX) / lX) ** sg * ep.P
        lips.append(LipschitzReport(w=float(w), lhs=lhs, envelope=envelope,
                                    ratio=lhs / envelope if envelope > 0 else 0.0))

    longs = []
    for h in (X / lX ** (sg / 2), X / 10):
        tail = complex(prefix.twisted_prefix[X]
                       - prefix.twisted_prefix[int(X - h)]) / h
        lhs = abs(tail - full)
        envelope = llX ** (sg + 1) / lX ** (sg / 2) * ep.P
        longs.append(LongSumReport(h=h, lhs=lhs, envelope=envelope,
                                   ratio=lhs / envelope))
    return lips, longs


def shiu_ratio(values: ValueTable, X: int, y: float, primes: PrimeTable,
               spec: MultiplicativeSpec, n_windows: int = 1000,
               seed: int = DEFAULT_SEED) -> float:
    """max over random windows (Y-y, Y] of sum |f(n)| / (y * P_f(X))."""
    P = euler_products(spec, X, primes).P
    abs_prefix = np.concatenate([[0.0], np.cumsum(np.abs(values.values[1:]))])
    rng = Xorshift64Star(seed)
    worst = 0.0
    lo_limit = int(X ** 0.5 + y) + 1
    for _ in range(n_windows):
        Y = lo_limit + rng.uniform() * (X - lo_limit)
        s = abs_prefix[int(Y)] - abs_prefix[int(Y - y)]
        worst = max(worst, s / (y * P))
    return worst
