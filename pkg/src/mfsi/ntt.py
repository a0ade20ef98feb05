"""Exact integer convolution: vectorized NTT under CRT-combined moduli.

Used to expand the eta-product q-series for the tau table.  Each modulus
is a prime c*2^e + 1 with e >= 25, so transforms up to length 2^25 are
available; products of residues are reconstructed to signed Python ints
by the Chinese remainder theorem.
"""

from __future__ import annotations

import numpy as np

# primes c*2^e+1 with e >= 25, all below 2^31 so int64 products never overflow
NTT_PRIMES = (2013265921, 1811939329, 469762049, 1107296257, 167772161)


def _primitive_root(p: int) -> int:
    factors = []
    m = p - 1
    d = 2
    while d * d <= m:
        if m % d == 0:
            factors.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        factors.append(m)
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in factors):
            return g
    raise ArithmeticError(f"no primitive root found for {p}")


_ROOTS = {p: _primitive_root(p) for p in NTT_PRIMES}


def _bit_reverse_perm(n: int) -> np.ndarray:
    bits = n.bit_length() - 1
    idx = np.arange(n, dtype=np.int64)
    rev = np.zeros(n, dtype=np.int64)
    for _ in range(bits):
        rev = (rev << 1) | (idx & 1)
        idx >>= 1
    return rev


def _pow_range(base: int, count: int, p: int) -> np.ndarray:
    """[base^0, ..., base^(count-1)] mod p, by vectorized binary powering."""
    e = np.arange(count, dtype=np.int64)
    out = np.ones(count, dtype=np.int64)
    b = base % p
    while e.max(initial=0) > 0:
        odd = (e & 1).astype(bool)
        out[odd] = out[odd] * b % p
        b = b * b % p
        e >>= 1
    return out


def ntt(a: np.ndarray, p: int, inverse: bool = False) -> np.ndarray:
    """In-place-style radix-2 transform mod p; len(a) must be a power of 2."""
    n = len(a)
    assert n & (n - 1) == 0
    assert (p - 1) % n == 0, f"transform length {n} unsupported by modulus {p}"
    g = _ROOTS[p]
    root = pow(g, (p - 1) // n, p)
    if inverse:
        root = pow(root, p - 2, p)
    a = a[_bit_reverse_perm(n)].astype(np.int64)
    half = 1
    while half < n:
        w = pow(root, n // (2 * half), p)
        wp = _pow_range(w, half, p)
        view = a.reshape(-1, 2 * half)
        u = view[:, :half].copy()
        v = view[:, half:] * wp % p
        view[:, :half] = (u + v) % p
        view[:, half:] = (u - v) % p
        half *= 2
    if inverse:
        a = a * pow(n, p - 2, p) % p
    return a


def square_mod(a: np.ndarray, out_len: int, p: int) -> np.ndarray:
    """First out_len coefficients of (a*a) mod p via one forward/backward pass."""
    need = 2 * len(a) - 1
    size = 1 << (need - 1).bit_length()
    buf = np.zeros(size, dtype=np.int64)
    buf[: len(a)] = np.asarray(a, dtype=np.int64) % p
    fa = ntt(buf, p)
    fa = fa * fa % p
    res = ntt(fa, p, inverse=True)
    return res[:out_len]


def crt_combine(residues: list[np.ndarray], moduli: list[int]) -> np.ndarray:
    """Signed CRT reconstruction into an object array of Python ints."""
    M = 1
    for p in moduli:
        M *= p
    coeffs = []
    for p in moduli:
        Mi = M // p
        yi = pow(Mi % p, p - 2, p)
        coeffs.append(Mi * yi % M)
    total = np.zeros(len(residues[0]), dtype=object)
    for r, c in zip(residues, coeffs):
        total = total + r.astype(object) * c
    total = total % M
    half = M >> 1
    big = total > half
    total[big] -= M
    return total
