"""Sato-Tate measure, moment constants by two routes, and the prime-sum
lower-bound diagnostics for Hecke eigenvalue statistics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .arith import PrimeTable
from .catalog import CuspFormTable


@dataclass
class STInterval:
    a: float
    b: float
    measure: float


@dataclass
class MomentConstants:
    alpha: float
    c_alpha: float       # Gamma closed form
    c_alpha_quad: float  # moment-integral form
    d_alpha: float       # c_{2 alpha} - 2 c_alpha + 1


@dataclass
class STIntervalReport:
    a: float
    b: float
    measure: float
    frequency: float
    discrepancy: float
    envelope: float
    ratio: float


def _density(v: float) -> float:
    return math.sqrt(max(0.0, 1.0 - (v / 2.0) ** 2)) / math.pi


def _adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, depth):
    m = 0.5 * (a + b)
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm = f(lm)
    frm = f(rm)
    left = (m - a) / 6 * (fa + 4 * flm + fm)
    right = (b - m) / 6 * (fm + 4 * frm + fb)
    if depth <= 0 or abs(left + right - whole) <= 15 * tol:
        return left + right + (left + right - whole) / 15
    return (_adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2, depth - 1)
            + _adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2, depth - 1))


def st_measure(a: float, b: float, tol: float = 1e-12) -> float:
    """mu_ST([a,b]) = (1/pi) int_a^b sqrt(1-(v/2)^2) dv, adaptive Simpson."""
    if not (-2.0 <= a <= b <= 2.0):
        raise ValueError("interval must satisfy -2 <= a <= b <= 2")
    if a == b:
        return 0.0
    fa, fb = _density(a), _density(b)
    m = 0.5 * (a + b)
    fm = _density(m)
    whole = (b - a) / 6 * (fa + 4 * fm + fb)
    return _adaptive_simpson(_density, a, b, fa, fm, fb, whole, tol, 50)


def st_measure_closed(a: float, b: float) -> float:
    """Antiderivative oracle: (1/pi)[(v/2)sqrt(1-v^2/4) + arcsin(v/2)]."""

    def F(v: float) -> float:
        return (v / 2) * math.sqrt(max(0.0, 1 - v * v / 4)) + math.asin(v / 2)

    return (F(b) - F(a)) / math.pi


def quant_st_check(table: CuspFormTable, X: int, intervals, primes: PrimeTable
                   ) -> list[STIntervalReport]:
    """Empirical frequency of lambda(p) in each interval vs mu_ST.

    Envelope is the quantitative-equidistribution error, normalized by
    pi(X): log(12 log X)/sqrt(log X).
    """
    if X > table.limit:
        raise ValueError("X beyond table limit")
    parr = primes.primes[primes.primes <= X]
    lam = table.lam[parr]
    total = len(parr)
    envelope = math.log(12 * math.log(X)) / math.sqrt(math.log(X))
    out = []
    for a, b in intervals:
        mu = st_measure(a, b)
        freq = float(np.count_nonzero((lam >= a) & (lam <= b))) / total
        disc = abs(freq - mu)
        out.append(STIntervalReport(a=a, b=b, measure=mu, frequency=freq,
                                    discrepancy=disc, envelope=envelope,
                                    ratio=disc / envelope))
    return out


def moment_constants(alpha: float) -> MomentConstants:
    """c_alpha by the Gamma closed form and by direct moment quadrature."""
    if not (0 < alpha <= 16):
        raise ValueError("alpha outside (0, 16]")

    def gamma_form(b: float) -> float:
        return (2.0 ** b / math.sqrt(math.pi)
                * math.gamma((b + 1) / 2) / math.gamma(b / 2 + 2))

    def quad_form(b: float) -> float:
        val, _ = quad(lambda v: (v / 2) ** b * math.sqrt(1 - (v / 2) ** 2),
                      0.0, 2.0, epsabs=1e-13, limit=200)
        return 2.0 ** (b + 1) / math.pi * val

    c = gamma_form(alpha)
    return MomentConstants(alpha=alpha, c_alpha=c, c_alpha_quad=quad_form(alpha),
                           d_alpha=gamma_form(2 * alpha) - 2 * c + 1)


@dataclass
class MertensSTReport:
    alpha: float
    z: float
    w: float
    lhs: float            # sum_{z<p<=w} |lambda(p)|^alpha / p
    main: float           # c_alpha * sum_{z<p<=w} 1/p
    deficit: float
    scaled_deficit: float  # deficit * sqrt(log z)


def mertens_st(table: CuspFormTable, alpha: float, z: float, w: float,
               primes: PrimeTable) -> MertensSTReport:
    if w > table.limit:
        raise ValueError("w beyond table limit")
    parr = primes.primes[(primes.primes > z) & (primes.primes <= w)]
    if len(parr) == 0:
        return MertensSTReport(alpha, z, w, 0.0, 0.0, 0.0, 0.0)
    inv_p = 1.0 / parr.astype(np.float64)
    lhs = float(np.sum(np.abs(table.lam[parr]) ** alpha * inv_p))
    main = moment_constants(alpha).c_alpha * float(np.sum(inv_p))
    deficit = main - lhs
    return MertensSTReport(alpha=alpha, z=z, w=w, lhs=lhs, main=main,
                           deficit=deficit,
                           scaled_deficit=deficit * math.sqrt(math.log(max(z, 2))))


@dataclass
class GoldLiReport:
    Y: float
    t: float
    eta: float
    count: int
    threshold: float
    passes: bool


def goldli_count(table: CuspFormTable, Y: float, t: float,
                 primes: PrimeTable, eta: float = 1.0 / 128) -> GoldLiReport:
    """Primes in (Y, 2Y] with |lambda(p)| > eta and |1 - p^{it}| > eta."""
    if abs(t) < 1:
        raise ValueError("need |t| >= 1")
    if Y < (abs(t) + 3) ** 2 or 2 * Y > table.limit:
        raise ValueError("Y outside supported range")
    parr = primes.primes[(primes.primes > Y) & (primes.primes <= 2 * Y)]
    lam_ok = np.abs(table.lam[parr]) > eta
    phase = t * np.log(parr.astype(np.float64))
    twist_ok = np.abs(1.0 - np.exp(1j * phase)) > eta
    count = int(np.count_nonzero(lam_ok & twist_ok))
    threshold = Y / (10 * math.log(Y))
    return GoldLiReport(Y=Y, t=t, eta=eta, count=count, threshold=threshold,
                        passes=count >= threshold)


@dataclass
class Check4Report:
    X: int
    alpha: float
    t_grid: np.ndarray
    rho_sq: np.ndarray
    caps: np.ndarray        # min{loglog X, log(1+|t| log X)}
    best_delta: float       # largest delta with rho_sq >= delta*cap over grid
    offset: float           # worst additive shortfall at that delta


def check4_scan(table: CuspFormTable, X: int, t_grid, primes: PrimeTable,
                alpha: float = 2.0) -> Check4Report:
    """rho(|lambda|^alpha, n^{it}; X)^2 against the distance lower envelope."""
    parr = primes.primes[primes.primes <= X]
    fp = np.abs(table.lam[parr]) ** alpha
    inv_p = 1.0 / parr.astype(np.float64)
    logp = np.log(parr.astype(np.float64))
    ts = np.asarray(t_grid, dtype=np.float64)
    rho = np.array([float(np.sum(fp * (1.0 - np.cos(t * logp)) * inv_p))
                    for t in ts])
    caps = np.minimum(math.log(math.log(X)),
                      np.log1p(np.abs(ts) * math.log(X)))
    mask = caps > 1e-9
    best = float(np.min(rho[mask] / caps[mask])) if mask.any() else 0.0
    best = max(0.0, best)
    offset = float(np.max(best * caps - rho))
    return Check4Report(X=X, alpha=alpha, t_grid=ts, rho_sq=rho, caps=caps,
                        best_delta=best, offset=max(0.0, offset))


def pnt_rs_ratio(table: CuspFormTable, X: int, primes: PrimeTable) -> float:
    """sum_{p<=X} lambda(p)^2 log p / X; tends to 1 for the Rankin-Selberg
    prime sum."""
    parr = primes.primes[primes.primes <= X]
    return float(np.sum(table.lam[parr] ** 2
                        * np.log(parr.astype(np.float64)))) / X
