"""Concrete arithmetic functions: cusp-form coefficients, twisted divisor
functions, sums of two squares, the Hooley concentration function, and the
combinatorial coefficient bound for higher-rank L-functions.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass

import numpy as np

from .arith import FactorTable, MultiplicativeSpec
from .ntt import NTT_PRIMES, crt_combine, square_mod

E = math.e


# ---------------------------------------------------------------------------
# Weight-12 level-1 cusp form


@dataclass
class CuspFormTable:
    """Exact tau(n) and normalized lambda(n) = tau(n) / n^{11/2}."""

    limit: int
    tau: np.ndarray      # object array of Python ints, index n (0 unused)
    lam: np.ndarray      # float64, lam[n] = tau(n) * n^{-5.5}

    def lambda_at_primes(self, primes: np.ndarray) -> np.ndarray:
        return self.lam[primes]


def _eta3_coefficients(n_terms: int) -> np.ndarray:
    """Coefficients of eta-cube's q-series: sum (-1)^k (2k+1) q^{k(k+1)/2}."""
    out = np.zeros(n_terms, dtype=np.int64)
    k = 0
    while k * (k + 1) // 2 < n_terms:
        out[k * (k + 1) // 2] = (2 * k + 1) * (-1 if k & 1 else 1)
        k += 1
    return out


def tau_table(X: int) -> CuspFormTable:
    """tau(n) for n <= X by cubing-and-squaring the eta-cube series.

    tau(n) is the coefficient of q^{n-1} in the 8th power of the sparse
    eta-cube series; three truncated squarings under each NTT modulus,
    then exact CRT reconstruction.  The modulus product is checked
    against the Ramanujan-Deligne bound d(n) n^{11/2} before combining.
    """
    if X > 10**7:
        raise ValueError("tau table limited to X <= 10^7")
    n_terms = X  # coefficients of q^0 .. q^{X-1}
    base = _eta3_coefficients(n_terms)

    # pick enough moduli that the CRT range covers 2 * max |tau(n)|
    bound = 2 * _tau_bound(X)
    moduli: list[int] = []
    M = 1
    for p in NTT_PRIMES:
        moduli.append(p)
        M *= p
        if M > bound:
            break
    if M <= bound:
        raise ArithmeticError("CRT modulus product too small for tau range")

    residues = []
    for p in moduli:
        a = base % p
        for _ in range(3):  # ^2 -> ^4 -> ^8
            a = square_mod(a, n_terms, p)
        residues.append(a)
    coeffs = crt_combine(residues, moduli)

    tau = np.zeros(X + 1, dtype=object)
    tau[1:] = coeffs[: X]
    lam = np.zeros(X + 1, dtype=np.float64)
    n = np.arange(1, X + 1, dtype=np.float64)
    lam[1:] = coeffs[:X].astype(np.float64) / n ** 5.5
    return CuspFormTable(limit=X, tau=tau, lam=lam)


def _tau_bound(X: int) -> int:
    # |tau(n)| <= d(n) n^{11/2} and d(n) <= 1536 for n <= 10^7
    return 1536 * (math.isqrt(X) + 1) ** 11


def tau_bruteforce(X: int) -> list[int]:
    """Schoolbook expansion of q * prod (1-q^m)^24; oracle for small X."""
    coeffs = [0] * X
    coeffs[0] = 1
    for m in range(1, X):
        # multiply by (1 - q^m)^24 term by term
        for _ in range(24):
            for i in range(X - 1, m - 1, -1):
                coeffs[i] -= coeffs[i - m]
    return [0] + coeffs  # tau(n) = coeffs[n-1]


def lambda_alpha_spec(table: CuspFormTable, alpha: float) -> MultiplicativeSpec:
    """|lambda_f|^alpha as a multiplicative spec backed by the tau table."""

    def rule(p: int, k: int) -> complex:
        v = abs(table.lam[p ** k])
        return complex(v ** alpha)

    # prime density: the alpha-th absolute moment of the semicircle law
    c_alpha = (2.0 ** alpha / math.sqrt(math.pi)
               * math.gamma((alpha + 1) / 2) / math.gamma(alpha / 2 + 2))
    return MultiplicativeSpec(name=f"lambda{alpha:g}", value_at_prime_power=rule,
                              declared_bounds=(c_alpha, 2.0 ** alpha,
                                               max(1.0, alpha)))


def g_f(n: int, table: CuspFormTable) -> float:
    """sum over d^2 | n of lambda(n/d^2)^2."""
    if n > table.limit:
        raise ValueError("n beyond table limit")
    total = 0.0
    d = 1
    while d * d <= n:
        if n % (d * d) == 0:
            total += table.lam[n // (d * d)] ** 2
        d += 1
    return total


def g_f_spec(table: CuspFormTable) -> MultiplicativeSpec:
    def rule(p: int, k: int) -> complex:
        total = 0.0
        j = 0
        while 2 * j <= k:
            total += table.lam[p ** (k - 2 * j)] ** 2
            j += 1
        return complex(total)

    return MultiplicativeSpec(name="gf", value_at_prime_power=rule,
                              declared_bounds=(1.0, 4.0, 3.0))


# ---------------------------------------------------------------------------
# r(n)/4 and twisted divisor functions


def chi4(d: int) -> int:
    r = d & 3
    return 1 if r == 1 else (-1 if r == 3 else 0)


def r_quarter(n: int) -> int:
    """Number of lattice points on x^2+y^2 = n, divided by 4: sum chi4(d)."""
    if n < 1:
        raise ValueError("n must be positive")
    total = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            total += chi4(d)
            if d * d != n:
                total += chi4(n // d)
        d += 1
    return total


def r_quarter_spec() -> MultiplicativeSpec:
    def rule(p: int, k: int) -> complex:
        if p == 2:
            return 1.0 + 0.0j
        if p % 4 == 1:
            return complex(k + 1)
        return complex(1 if k % 2 == 0 else 0)

    return MultiplicativeSpec(name="rquarter", value_at_prime_power=rule,
                              declared_bounds=(1.0, 2.0, 1.0))


def twisted_divisor(n: int, theta: float, ft: FactorTable | None = None) -> complex:
    """d(n, theta) = sum over d | n of d^{i theta}, computed multiplicatively."""
    if theta == 0.0:
        return complex(len(_divisors(n, ft)))
    total = 1.0 + 0.0j
    for p, k in _factorize(n, ft):
        z = complex(math.cos(theta * math.log(p)), math.sin(theta * math.log(p)))
        # geometric sum 1 + z + ... + z^k over prime powers d = p^j
        zz = z
        s = 1.0 + 0.0j
        for _ in range(k):
            s += zz
            zz *= z
        total *= s
    return total


def f_theta(n: int, theta: float, ft: FactorTable | None = None) -> float:
    """|d(n,theta)|^2 / d(n)."""
    d = twisted_divisor(n, theta, ft)
    dn = 1
    for _, k in _factorize(n, ft):
        dn *= k + 1
    return abs(d) ** 2 / dn


def twisted_divisor_spec(theta: float) -> MultiplicativeSpec:
    def rule(p: int, k: int) -> complex:
        return twisted_divisor(p ** k, theta)

    return MultiplicativeSpec(name=f"dtheta{theta:g}", value_at_prime_power=rule,
                              declared_bounds=(None, 2.0, 1.0))


def f_theta_spec(theta: float) -> MultiplicativeSpec:
    def rule(p: int, k: int) -> complex:
        return complex(f_theta(p ** k, theta))

    return MultiplicativeSpec(name=f"ftheta{theta:g}", value_at_prime_power=rule,
                              declared_bounds=(1.0, 2.0, 1.0))


@dataclass
class TwistedDivisorParams:
    theta: float
    X: int

    @property
    def beta(self) -> float:
        if self.theta == 0:
            return math.log(self.X)
        return min(1.0 / self.theta, math.log(self.X))


# ---------------------------------------------------------------------------
# Hooley Delta


@dataclass
class DivisorProfile:
    n: int
    divisors: list[int]
    delta: int

    @property
    def concentration(self) -> float:
        return self.delta / len(self.divisors)

    def distribution(self, v: float) -> float:
        """D_n(v) = fraction of divisors <= e^v."""
        cut = bisect.bisect_right([math.log(d) for d in self.divisors], v)
        return cut / len(self.divisors)


def _factorize(n: int, ft: FactorTable | None):
    if ft is not None and n <= ft.limit:
        return ft.factorize(n)
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            k = 0
            while n % d == 0:
                n //= d
                k += 1
            out.append((d, k))
        d += 1
    if n > 1:
        out.append((n, 1))
    return out


def _divisors(n: int, ft: FactorTable | None) -> list[int]:
    divs = [1]
    for p, k in _factorize(n, ft):
        pk = 1
        new = []
        for _ in range(k):
            pk *= p
            new.extend(d * pk for d in divs)
        divs.extend(new)
    divs.sort()
    return divs


def delta_of_divisors(divs: list[int]) -> int:
    """max over divisors d of #{d' | n : d <= d' < e*d}.

    Because divisors are discrete, the sliding-window maximum over real u
    is attained with the window anchored at some divisor, so a two-pointer
    pass over the sorted list is exact.
    """
    best = 1
    j = 0
    m = len(divs)
    for i in range(m):
        hi = E * divs[i]
        if j < i:
            j = i
        while j < m and divs[j] < hi:
            j += 1
        if j - i > best:
            best = j - i
    return best


def hooley_delta(n: int, ft: FactorTable | None = None) -> DivisorProfile:
    divs = _divisors(n, ft)
    return DivisorProfile(n=n, divisors=divs, delta=delta_of_divisors(divs))


def delta_grid_oracle(n: int, step: float = 1e-4,
                      ft: FactorTable | None = None) -> int:
    """Brute-force Delta over a dense u-grid; validation oracle."""
    divs = _divisors(n, ft)
    logs = [math.log(d) for d in divs]
    best = 0
    u = -step
    top = logs[-1] + 1.0
    while u <= top:
        lo = bisect.bisect_right(logs, u)
        hi = bisect.bisect_right(logs, u + 1.0)
        best = max(best, hi - lo)
        u += step
    return best


def delta_table(ft: FactorTable, limit: int | None = None) -> np.ndarray:
    """Delta(n) for all n <= limit as float64 (Delta(1) = 1)."""
    X = limit or ft.limit
    spf = ft.spf
    out = np.ones(X + 1, dtype=np.float64)
    out[0] = 0.0
    for n in range(2, X + 1):
        m = n
        divs = [1]
        while m > 1:
            p = int(spf[m])
            k = 0
            while m % p == 0:
                m //= p
                k += 1
            pk = 1
            new = []
            for _ in range(k):
                pk *= p
                new.extend(d * pk for d in divs)
            divs.extend(new)
        divs.sort()
        out[n] = delta_of_divisors(divs)
    return out


# ---------------------------------------------------------------------------
# GRC combinatorial bound


def grc_divisor_bound_check(m: int, r: int) -> tuple[int, int]:
    """Count weak compositions of r into m parts two ways.

    Returns (dp_count, binomial); the dynamic-programming count is the
    independent route, the binomial is d_m(p^r).
    """
    if not (1 <= m <= 12) or not (0 <= r <= 30):
        raise ValueError("arguments outside supported range")
    # counts[j] = number of weak compositions of j into i parts; the one-part
    # row is all ones, and each further part is a prefix sum
    counts = [1] * (r + 1)
    for _ in range(m - 1):
        acc = 0
        new = []
        for j in range(r + 1):
            acc += counts[j]
            new.append(acc)
        counts = new
    count = counts[r]
    bound = math.comb(m + r - 1, r)
    if count != bound:
        raise AssertionError(f"composition count {count} != binom {bound}")
    return count, bound
