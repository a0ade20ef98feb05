"""Generalized Dickman-de Bruijn functions and smooth-weighted sums.

rho_k solves u rho_k'(u) = (k-1) rho_k(u) - k rho_k(u-1) with
rho_k(u) = u^{k-1}/Gamma(k) on [0,1).  Smooth sums Psi_g(x,y) are compared
against e^{-gamma k} x rho_k(u) G(1,y)/log y.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arith import FactorTable, MultiplicativeSpec


@dataclass
class DickmanGrid:
    k: int
    step: float
    values: np.ndarray  # rho_k on u = 0, step, 2*step, ...

    def at(self, u: float) -> float:
        """Linear interpolation on the grid."""
        if u < 0:
            return 0.0
        pos = u / self.step
        i = int(pos)
        if i + 1 >= len(self.values):
            raise ValueError(f"u={u} beyond grid")
        frac = pos - i
        return float((1 - frac) * self.values[i] + frac * self.values[i + 1])


@dataclass
class SmoothSumReport:
    x: int
    y: float
    u: float
    psi: float
    G1y: float
    predicted: float
    ratio: float


def dickman_rho(k: int, u_max: float = 20.0, step: float = 1.0 / 1024) -> DickmanGrid:
    """Integrate the delay equation in its integrating-factor form.

    With y(u) = u^{1-k} rho_k(u), the equation becomes
    y'(u) = -k u^{-k} rho_k(u-1), so
    y(u) = 1/Gamma(k) - k * int_1^u t^{-k} rho_k(t-1) dt,
    which avoids both the u -> 0 singularity and the stiffness of the raw
    form.  The history integral is accumulated by the trapezoid rule.
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    if step > 1.0 / 256:
        raise ValueError("step too large for the stated tolerance")
    if u_max > 30:
        raise ValueError("u_max beyond supported range")
    n = int(round(u_max / step))
    if abs(n * step - u_max) > 1e-12 or int(round(1.0 / step)) * step != 1.0:
        # the delay rho_k(u-1) must land on grid points exactly
        raise ValueError("step must divide 1 and u_max exactly")
    per_unit = int(round(1.0 / step))
    u = np.arange(n + 1) * step
    rho = np.zeros(n + 1)
    gk = math.gamma(k)
    head = u < 1.0
    rho[head] = u[head] ** (k - 1) / gk

    # y[i] = u_i^{1-k} rho[i]; integral accumulated trapezoidally
    i0 = per_unit  # index of u = 1
    rho[i0] = 1.0 / gk  # continuity: rho_k(1) = lim_{u->1-} u^{k-1}/Gamma(k)
    integral = 0.0
    for i in range(i0 + 1, n + 1):
        ui = u[i]
        um = u[i - 1]
        g_prev = um ** (-k) * rho[i - 1 - per_unit]
        g_cur = ui ** (-k) * rho[i - per_unit]
        integral += 0.5 * step * (g_prev + g_cur)
        rho[i] = ui ** (k - 1) * (1.0 / gk - k * integral)
    return DickmanGrid(k=k, step=step, values=rho)


def dde_residual(grid: DickmanGrid) -> np.ndarray:
    """|u rho' - (k-1) rho(u) + k rho(u-1)| at interior points u > 1.

    rho' by central differences; the residual should be O(step^2).
    """
    rho = grid.values
    step = grid.step
    per_unit = int(round(1.0 / step))
    n = len(rho) - 1
    idx = np.arange(per_unit + 1, n)
    u = idx * step
    drho = (rho[idx + 1] - rho[idx - 1]) / (2 * step)
    # rho is only piecewise smooth across integer u (the delay propagates
    # the kink at 1), so difference one-sidedly into the right piece there
    kinks = idx[(idx % per_unit == 0) & (idx + 2 < len(rho))]
    fwd = (-3 * rho[kinks] + 4 * rho[kinks + 1] - rho[kinks + 2]) / (2 * step)
    drho[kinks - (per_unit + 1)] = fwd
    return np.abs(u * drho - (grid.k - 1) * rho[idx] + grid.k * rho[idx - per_unit])


def largest_prime_factor_table(X: int, ft: FactorTable) -> np.ndarray:
    """lpf[n] = P+(n) for 2 <= n <= X (lpf[1] = 1)."""
    lpf = np.ones(X + 1, dtype=np.int64)
    lpf[0] = 0
    spf = ft.spf[: X + 1]
    primes = np.nonzero(spf[2:] == np.arange(2, X + 1, dtype=spf.dtype))[0] + 2
    for p in primes:  # ascending, so the last write wins with the largest p
        lpf[p::p] = p
    return lpf


def psi_smooth(x: int, y: float, spec: MultiplicativeSpec, ft: FactorTable,
               k: int | None = None, grid: DickmanGrid | None = None,
               lpf: np.ndarray | None = None) -> SmoothSumReport:
    """Exact Psi_g(x,y) and the predicted main term.

    k defaults to round(g(p)) at small primes (the density of g on primes);
    G(1,y) is the Euler product over p <= y truncated at prime powers <= x.
    """
    if y > x or x > ft.limit:
        raise ValueError("need y <= x <= table limit")
    if lpf is None:
        lpf = largest_prime_factor_table(x, ft)
    smooth_n = np.nonzero(lpf[1 : x + 1] <= y)[0] + 1

    psi = 0.0
    for n in smooth_n:
        v = 1.0
        for p, e in ft.factorize(int(n)):
            v *= spec(p, e).real
        psi += v

    primes = np.nonzero(ft.spf[2 : int(y) + 1]
                        == np.arange(2, int(y) + 1, dtype=ft.spf.dtype))[0] + 2
    if k is None:
        k = int(round(float(np.mean([spec(int(p), 1).real for p in primes[:25]]))))
    logG = 0.0
    for p in primes:
        p = int(p)
        local = 1.0
        pk = p
        e = 1
        while pk <= x:
            local += spec(p, e).real / pk
            pk *= p
            e += 1
        logG += math.log(local)
    G1y = math.exp(logG)

    u = math.log(x) / math.log(y)
    if grid is None or grid.k != k:
        grid = dickman_rho(k, u_max=min(30.0, max(2.0, math.ceil(u) + 1.0)))
    predicted = math.exp(-np.euler_gamma * k) * x * grid.at(u) * G1y / math.log(y)
    return SmoothSumReport(x=x, y=y, u=u, psi=psi, G1y=G1y,
                           predicted=predicted,
                           ratio=psi / predicted if predicted > 0 else math.inf)
