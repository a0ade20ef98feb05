"""Pretentious-distance functionals, minimizing twists and Euler products.

rho(f, n^{it}; X)^2 = sum_{p<=X} (|f(p)| - Re(f(p) p^{-it})) / p is the
squared distance between f and the twist n^{it}; its minimizer t0 over
[-T, T] is the natural phase for short-interval main terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .arith import MultiplicativeSpec, PrimeTable, ValueTable, divisor_spec, prime_values

GOLDEN = (math.sqrt(5) - 1) / 2


@dataclass
class DistanceProfile:
    name: str
    X: int
    T: float
    t0: float
    M: float  # rho^2 at t0
    grid_step: float

    rho_sq: Callable[[float], float] = field(repr=False, default=None)


@dataclass
class ClassParams:
    """Parameter bundle (A, B, C; gamma, sigma) with the derived constants."""

    A: float
    B: float
    C: float
    gamma: float = 1.0
    sigma: float = 1.0

    def __post_init__(self):
        if not (0 < self.A <= self.B) or self.B < 1 or self.C < 1:
            raise ValueError("need 0 < A <= B and B, C >= 1")
        if self.sigma <= 0 or self.sigma > self.A:
            raise ValueError("need sigma in (0, A]")

    @property
    def sigma_hat(self) -> float:
        return min(1.0, self.sigma)

    @property
    def kappa(self) -> float:
        return self.sigma_hat / (8 * self.B + 21)

    @property
    def sigma_AB(self) -> float:
        return (self.A / 3) * (1 - sinc(math.pi * self.A / (2 * self.B)))

    @property
    def kappa_AB(self) -> float:
        return min(1.0, self.sigma_AB) / (16 * self.B + 21)


@dataclass
class EulerProducts:
    H: float
    P: float
    H_equiv: float  # the asymptotic comparand for H


def sinc(t: float) -> float:
    return 1.0 if t == 0 else math.sin(t) / t


def rho_squared_from_values(fp: np.ndarray, inv_p: np.ndarray,
                            logp: np.ndarray, t: float) -> float:
    """rho^2 at one t, given precomputed f(p), 1/p and log p arrays."""
    tw = fp * np.exp(-1j * t * logp)
    return float(np.sum((np.abs(fp) - tw.real) * inv_p))


def rho_squared(spec: MultiplicativeSpec, t: float, X: int,
                primes: PrimeTable) -> float:
    p = primes.primes[primes.primes <= X].astype(np.float64)
    fp = prime_values(spec, p.astype(np.int64))
    return rho_squared_from_values(fp, 1.0 / p, np.log(p), t)


def minimize_t0(spec: MultiplicativeSpec, X: int, T: float,
                primes: PrimeTable, refine_width: float = 1e-6) -> DistanceProfile:
    """Grid scan at step 1/(4 log X) followed by golden-section refinement.

    Ties on the grid are broken toward smallest |t|, then nonnegative t,
    matching the canonical t0 = 0 choices for real nonnegative functions.
    """
    if T < 1:
        raise ValueError("search radius T must be >= 1")
    parr = primes.primes[primes.primes <= X].astype(np.float64)
    fp = prime_values(spec, parr.astype(np.int64))
    inv_p = 1.0 / parr
    logp = np.log(parr)
    absfp = np.abs(fp)
    base = float(np.sum(absfp * inv_p))
    w = fp * inv_p  # rho^2(t) = base - Re(sum w_p e^{-it log p})

    def rho_sq(t: float) -> float:
        return base - float(np.sum(w * np.exp(-1j * t * logp)).real)

    step = 1.0 / (4 * math.log(X))
    n_side = int(math.ceil(T / step))
    grid = np.arange(-n_side, n_side + 1) * step
    grid = grid[np.abs(grid) <= T + 1e-15]

    # chunked vectorized scan over the grid
    vals = np.empty(len(grid))
    chunk = max(1, (1 << 22) // max(len(parr), 1))
    for i in range(0, len(grid), chunk):
        tt = grid[i : i + chunk]
        phase = np.exp(-1j * np.outer(tt, logp))
        vals[i : i + chunk] = base - (phase @ w).real
    vmin = float(vals.min())
    cands = np.nonzero(vals <= vmin + 1e-12)[0]
    best = min(cands, key=lambda i: (abs(grid[i]), 0 if grid[i] >= 0 else 1))
    t_best = float(grid[best])

    lo = max(-T, t_best - step)
    hi = min(T, t_best + step)
    while hi - lo > refine_width:
        m1 = hi - GOLDEN * (hi - lo)
        m2 = lo + GOLDEN * (hi - lo)
        if rho_sq(m1) <= rho_sq(m2):
            hi = m2
        else:
            lo = m1
    t0 = 0.5 * (lo + hi)
    # snap near-zero refinements onto the canonical choice
    if abs(t0) < refine_width and rho_sq(0.0) <= rho_sq(t0) + 1e-12:
        t0 = 0.0
    return DistanceProfile(name=spec.name, X=X, T=T, t0=t0, M=rho_sq(t0),
                           grid_step=step, rho_sq=rho_sq)


def euler_products(spec: MultiplicativeSpec, X: int,
                   primes: PrimeTable) -> EulerProducts:
    """H(f;X), P_f(X), and the equivalent-form comparand for H."""
    parr = primes.primes[primes.primes <= X].astype(np.float64)
    a = np.abs(prime_values(spec, parr.astype(np.int64)))
    inv_p = 1.0 / parr
    logH = float(np.sum(np.log1p((a - 1.0) ** 2 * inv_p)))
    logP = float(np.sum(np.log1p((a - 1.0) * inv_p)))
    log_equiv = float(np.sum(np.log1p((a * a - 1.0) * inv_p))) - 2.0 * logP
    return EulerProducts(H=math.exp(logH), P=math.exp(logP),
                         H_equiv=math.exp(log_equiv))


@dataclass
class MembershipReport:
    name: str
    X: int
    params: ClassParams
    max_fp: float                 # vs B, hypothesis (i)
    max_ratio_dB: float           # max |f(n)| / d_B(n)^C over sample, vs 1
    sieve_deficit: float          # worst (iii') deficit on the dyadic grid
    sieve_constant: float         # implied constant: deficit * (log z)^gamma
    rho_margin_min: float         # min over t of rho^2 - sigma*min{...}
    rho_constant: float           # implied O(1): max(0, -rho_margin_min)
    passes_i: bool
    passes_ii: bool


def class_membership_report(spec: MultiplicativeSpec, X: int,
                            params: ClassParams, primes: PrimeTable,
                            values: Optional[ValueTable] = None,
                            sample_limit: int = 10**5,
                            t_max: float | None = None) -> MembershipReport:
    """Empirical check of hypotheses (i), (ii), (iii'), (iv).

    Violations of the O(.)-form hypotheses are reported as measured
    implied constants, never raised.
    """
    parr = primes.primes[primes.primes <= X].astype(np.float64)
    fp = prime_values(spec, parr.astype(np.int64))
    absfp = np.abs(fp)
    inv_p = 1.0 / parr
    logp = np.log(parr)

    max_fp = float(absfp.max())

    # (ii) over a sample of n
    nmax = min(X, sample_limit)
    if values is not None and values.limit >= nmax:
        fvals = np.abs(values.values[1 : nmax + 1])
        from .arith import build_factor_table, evaluate_multiplicative
        ft_small = build_factor_table(nmax)
        dB = np.abs(evaluate_multiplicative(divisor_spec(params.B), ft_small)
                    .values[1 : nmax + 1]) ** params.C
        max_ratio = float(np.max(fvals / dB))
    else:
        max_ratio = float("nan")

    # (iii') on a dyadic (z, w) grid
    recip = absfp * inv_p
    cum_f = np.cumsum(recip)
    cum_1 = np.cumsum(inv_p)
    worst_deficit = 0.0
    worst_const = 0.0
    zs = [2 ** a for a in range(2, int(math.log2(X)))]
    for z in zs:
        iz = int(np.searchsorted(parr, z, side="right"))
        for w in zs + [X]:
            if w <= z:
                continue
            iw = int(np.searchsorted(parr, w, side="right"))
            sf = cum_f[iw - 1] - (cum_f[iz - 1] if iz > 0 else 0.0)
            s1 = cum_1[iw - 1] - (cum_1[iz - 1] if iz > 0 else 0.0)
            deficit = params.A * s1 - sf
            worst_deficit = max(worst_deficit, deficit)
            worst_const = max(worst_const, deficit * math.log(z) ** params.gamma)

    # (iv) on a mixed linear/geometric t-grid
    if t_max is None:
        t_max = min(2.0 * X, 1e4)
    step = 1.0 / (4 * math.log(X))
    t_lin = np.arange(0.0, min(4.0, t_max) + step, step)
    t_geo = np.geomspace(4.0, t_max, 200) if t_max > 4 else np.array([])
    ts = np.unique(np.concatenate([t_lin, t_geo, -t_lin, -t_geo]))
    base = float(np.sum(absfp * inv_p))
    w_arr = fp * inv_p
    llX = math.log(math.log(X))
    lX = math.log(X)
    margin_min = math.inf
    chunk = max(1, (1 << 22) // max(len(parr), 1))
    for i in range(0, len(ts), chunk):
        tt = ts[i : i + chunk]
        rho = base - (np.exp(-1j * np.outer(tt, logp)) @ w_arr).real
        cap = np.minimum(llX, np.log1p(np.abs(tt) * lX))
        margin_min = min(margin_min, float(np.min(rho - params.sigma * cap)))

    return MembershipReport(
        name=spec.name, X=X, params=params,
        max_fp=max_fp, max_ratio_dB=max_ratio,
        sieve_deficit=worst_deficit, sieve_constant=worst_const,
        rho_margin_min=margin_min, rho_constant=max(0.0, -margin_min),
        passes_i=max_fp <= params.B + 1e-9,
        passes_ii=(not math.isnan(max_ratio)) and max_ratio <= 1.0 + 1e-9,
    )
