"""Prime sieves, smallest-prime-factor tables and multiplicative evaluation.

Everything downstream (catalog functions, prefix sums, Dirichlet
polynomials) is built from the two tables here: a plain prime list and a
smallest-prime-factor (spf) array giving O(log n) factorization of every
n up to the table limit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np

SEGMENT_SIZE = 1 << 20


class EmptyTableError(ValueError):
    pass


class NumericRuleError(ArithmeticError):
    """A multiplicative rule returned a non-finite value."""


@dataclass
class PrimeTable:
    """All primes up to `limit`, with a counting accessor."""

    limit: int
    primes: np.ndarray  # int64, ascending

    def pi(self, y: float) -> int:
        """pi(y) = number of primes <= y (y <= limit)."""
        if y > self.limit:
            raise ValueError(f"pi({y}) beyond table limit {self.limit}")
        return int(np.searchsorted(self.primes, y, side="right"))


@dataclass
class FactorTable:
    """spf[n] = smallest prime factor of n, for 2 <= n <= limit."""

    limit: int
    spf: np.ndarray  # uint32

    def factorize(self, n: int) -> list[Tuple[int, int]]:
        """Prime factorization [(p, k), ...] of n <= limit."""
        if n < 1 or n > self.limit:
            raise ValueError(f"n={n} outside table range")
        out = []
        spf = self.spf
        while n > 1:
            p = int(spf[n])
            k = 0
            while n % p == 0:
                n //= p
                k += 1
            out.append((p, k))
        return out

    def divisors(self, n: int) -> list[int]:
        """All divisors of n, sorted ascending."""
        divs = [1]
        for p, k in self.factorize(n):
            pk = 1
            new = []
            for _ in range(k):
                pk *= p
                new.extend(d * pk for d in divs)
            divs.extend(new)
        divs.sort()
        return divs


@dataclass
class MultiplicativeSpec:
    """A multiplicative function, given by its values on prime powers.

    `value_at_prime_power(p, k)` must be deterministic and finite; the
    value at k=0 is implicitly 1.  `declared_bounds` optionally carries
    (A, B, C) constants the function is believed to satisfy.
    """

    name: str
    value_at_prime_power: Callable[[int, int], complex]
    declared_bounds: Optional[Tuple[float, float, float]] = None

    def __call__(self, p: int, k: int) -> complex:
        if k == 0:
            return 1.0 + 0.0j
        v = complex(self.value_at_prime_power(p, k))
        if not (math.isfinite(v.real) and math.isfinite(v.imag)):
            raise NumericRuleError(f"{self.name}: non-finite value at (p={p}, k={k})")
        return v


@dataclass
class ValueTable:
    """values[n] = f(n) for 1 <= n <= limit (index 0 unused)."""

    limit: int
    values: np.ndarray  # complex128, length limit+1
    spec_name: str = ""

    def real_values(self) -> np.ndarray:
        return self.values.real.copy()


def sieve_primes(X: int) -> PrimeTable:
    """Segmented sieve of Eratosthenes up to X."""
    if X < 2:
        raise EmptyTableError(f"no primes below {X}")
    if X > 1 << 40:
        raise ValueError("limit beyond supported range")
    root = math.isqrt(X)
    base = np.ones(root + 1, dtype=bool)
    base[:2] = False
    for p in range(2, math.isqrt(root) + 1):
        if base[p]:
            base[p * p :: p] = False
    base_primes = np.nonzero(base)[0]

    chunks = [base_primes[base_primes <= X]]
    lo = root + 1
    while lo <= X:
        hi = min(lo + SEGMENT_SIZE, X + 1)
        seg = np.ones(hi - lo, dtype=bool)
        for p in base_primes:
            p = int(p)
            start = ((lo + p - 1) // p) * p
            if start < p * p:
                start = p * p
            if start < hi:
                seg[start - lo :: p] = False
        chunks.append(np.nonzero(seg)[0] + lo)
        lo = hi
    primes = np.concatenate(chunks).astype(np.int64)
    return PrimeTable(limit=X, primes=primes)


def build_factor_table(X: int) -> FactorTable:
    """Smallest-prime-factor array, filled segment by segment.

    Peak extra memory per step is one segment of marks; the spf array
    itself is 4 bytes per integer.
    """
    if X < 2:
        raise EmptyTableError(f"factor table needs X >= 2, got {X}")
    try:
        spf = np.zeros(X + 1, dtype=np.uint32)
    except MemoryError as exc:  # pragma: no cover
        raise MemoryError(f"cannot allocate spf array for X={X}") from exc
    root = math.isqrt(X)
    root_primes = sieve_primes(max(root, 2)).primes
    for lo in range(0, X + 1, SEGMENT_SIZE):
        hi = min(lo + SEGMENT_SIZE, X + 1)
        for p in root_primes:
            p = int(p)
            if p * p >= hi:
                break
            start = max(((lo + p - 1) // p) * p, p * p)
            if start >= hi:
                continue
            view = spf[start:hi:p]
            view[view == 0] = p
    unmarked = np.nonzero(spf[2:] == 0)[0] + 2
    spf[unmarked] = unmarked.astype(np.uint32)
    return FactorTable(limit=X, spf=spf)


def evaluate_multiplicative(spec: MultiplicativeSpec, ft: FactorTable) -> ValueTable:
    """Tabulate f(n) for all n <= limit using the spf factorization.

    Walks n ascending keeping, for each n, the exponent of its smallest
    prime factor and the complementary cofactor, so each value is one
    complex multiply.
    """
    X = ft.limit
    spf = ft.spf
    values = np.empty(X + 1, dtype=np.complex128)
    values[0] = 0.0
    values[1] = 1.0

    # f(p^k) cache; the k >= 2 entries are hit only for powerful spf parts.
    ppcache: dict[tuple[int, int], complex] = {}

    def pp(p: int, k: int) -> complex:
        key = (p, k)
        v = ppcache.get(key)
        if v is None:
            v = spec(p, k)
            ppcache[key] = v
        return v

    exp = np.zeros(X + 1, dtype=np.uint8)
    cof = np.zeros(X + 1, dtype=np.int64)
    vals = values  # local alias for the hot loop
    for n in range(2, X + 1):
        p = int(spf[n])
        m = n // p
        if m % p == 0:
            e = exp[m] + 1
            c = cof[m]
        else:
            e = 1
            c = m
        exp[n] = e
        cof[n] = c
        vals[n] = vals[c] * pp(p, int(e))
    return ValueTable(limit=X, values=values, spec_name=spec.name)


# ---------------------------------------------------------------------------
# Common specs


def divisor_spec(B: float, C: float = 1.0) -> MultiplicativeSpec:
    """The generalized divisor function d_B (optionally raised to C).

    d_B(p^k) = binom(B+k-1, k); exact for integer B, via Gamma otherwise.
    """
    integral = float(B).is_integer() and float(C).is_integer()

    def rule(p: int, k: int) -> complex:
        if integral:
            v = math.comb(int(B) + k - 1, k) ** int(C)
            return complex(v)
        lb = math.lgamma(B + k) - math.lgamma(B) - math.lgamma(k + 1)
        return complex(math.exp(C * lb))

    name = f"d{B:g}" + (f"^{C:g}" if C != 1.0 else "")
    return MultiplicativeSpec(name=name, value_at_prime_power=rule,
                              declared_bounds=(B, B, C))


def one_spec() -> MultiplicativeSpec:
    return MultiplicativeSpec(name="one", value_at_prime_power=lambda p, k: 1.0,
                              declared_bounds=(1.0, 1.0, 1.0))


def planted_twist_spec(t: float) -> MultiplicativeSpec:
    """f(p^k) = p^{ikt}: the pure twist n^{it}; used for t0 recovery tests."""

    def rule(p: int, k: int) -> complex:
        return complex(math.cos(k * t * math.log(p)), math.sin(k * t * math.log(p)))

    return MultiplicativeSpec(name=f"twist{t:g}", value_at_prime_power=rule,
                              declared_bounds=(1.0, 1.0, 1.0))


def prime_values(spec: MultiplicativeSpec, primes: np.ndarray) -> np.ndarray:
    """f(p) over a prime array, vectorized over the spec rule."""
    out = np.empty(len(primes), dtype=np.complex128)
    for i, p in enumerate(primes):
        out[i] = spec(int(p), 1)
    if not np.all(np.isfinite(out)):
        bad = int(primes[int(np.nonzero(~np.isfinite(out))[0][0])])
        raise NumericRuleError(f"{spec.name}: non-finite value at (p={bad}, k=1)")
    return out
