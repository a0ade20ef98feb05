"""Log-derivative coefficients of local Euler factors, and partition counts.

For a multiplicative f, the Dirichlet series -L'/L(s,f) has coefficients
Lambda_f supported on prime powers.  At a fixed prime p they are read off
from the formal power-series logarithm of the local factor
1 + sum_k f(p^k) x^k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .arith import MultiplicativeSpec


@dataclass
class LogDerivativeTable:
    p: int
    nu_max: int
    lambda_f: np.ndarray  # complex, lambda_f[nu-1] = Lambda_f(p^nu)


@dataclass
class PartitionBound:
    nu: int
    p_count: int


def lambda_f_at_prime(spec: MultiplicativeSpec, p: int, nu_max: int,
                      xmax: float | None = None) -> LogDerivativeTable:
    """Lambda_f(p^nu) for 1 <= nu <= nu_max.

    Uses the O(nu^2) recurrence for log-series coefficients: with
    F(x) = 1 + sum f_k x^k and log F = sum l_k x^k,
        nu*l_nu = nu*f_nu - sum_{j<nu} j*l_j*f_{nu-j},
    then Lambda_f(p^nu) = nu*log(p)*l_nu.  Prime powers above `xmax`
    (when given) contribute 0 to the local factor.
    """
    f = np.zeros(nu_max + 1, dtype=np.complex128)
    f[0] = 1.0
    for k in range(1, nu_max + 1):
        if xmax is not None and p ** k > xmax:
            break
        f[k] = spec(p, k)
    l = np.zeros(nu_max + 1, dtype=np.complex128)
    for nu in range(1, nu_max + 1):
        acc = nu * f[nu]
        for j in range(1, nu):
            acc -= j * l[j] * f[nu - j]
        l[nu] = acc / nu
        if not np.isfinite(l[nu]):
            raise ArithmeticError(f"log-series overflow at p={p}, nu={nu}")
    logp = math.log(p)
    lam = np.array([nu * logp * l[nu] for nu in range(1, nu_max + 1)],
                   dtype=np.complex128)
    return LogDerivativeTable(p=p, nu_max=nu_max, lambda_f=lam)


def lambda_exact_compositions(spec: MultiplicativeSpec, p: int, nu: int,
                              xmax: float | None = None) -> complex:
    """Independent oracle: the alternating composition sum for Lambda_f(p^nu).

    Enumerates ordered tuples (nu_1,...,nu_k) with sum nu via the
    bars-and-stars bijection; exponential in nu, intended for nu <= ~8.
    """
    total = 0.0 + 0.0j
    for k in range(1, nu + 1):
        sign = (-1) ** (k - 1)
        ksum = 0.0 + 0.0j
        # compositions of nu into k positive parts <-> (k-1)-subsets of cuts
        for cuts in combinations(range(1, nu), k - 1):
            parts = []
            prev = 0
            for c in cuts:
                parts.append(c - prev)
                prev = c
            parts.append(nu - prev)
            if xmax is not None and any(p ** part > xmax for part in parts):
                continue
            prod = 1.0 + 0.0j
            for part in parts:
                prod *= spec(p, part)
            ksum += prod
        total += sign * ksum / k
    return nu * math.log(p) * total


def partition_count(nu: int) -> PartitionBound:
    """Exact partition number via Euler's pentagonal recurrence."""
    if nu < 0 or nu > 10**4:
        raise ValueError("nu outside supported range")
    p = [1] + [0] * nu
    for n in range(1, nu + 1):
        total = 0
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > n:
                break
            sign = -1 if k % 2 == 0 else 1
            total += sign * p[n - g1]
            g2 = k * (3 * k + 1) // 2
            if g2 <= n:
                total += sign * p[n - g2]
            k += 1
        p[n] = total
    return PartitionBound(nu=nu, p_count=p[nu])
