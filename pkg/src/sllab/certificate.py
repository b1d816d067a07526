"""Quantify the comparison criterion for the arctan-eigenvalue operator.

delta(theta, tau) is the infimum of F(X + tau*I) - F(X) over symmetric X
with F(X) = theta.  Since F depends on X only through its eigenvalues and
X + tau*I shares the eigenbasis, the infimum reduces to

    min { sum_i [arctan(l_i + tau) - arctan(l_i)] :
          l in [-cap, cap]^n, sum_i arctan(l_i) = theta }

over a truncated eigenvalue box.  The minimum is found by scanning n - 1
free eigenvalues on a uniform grid, solving the last one from the phase
constraint by monotone bisection, and polishing the best grid point with a
golden-section line search per free coordinate.  delta stays bounded away
from 0 as the cap grows when theta avoids the special values, and decays
like 1/cap^2 at them: the numerical shadow of the comparison argument.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import slop
from .slop import Phase

_BISECT_ITERS = 80
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class InfeasibleQueryError(ValueError):
    """The phase constraint has no solution inside the eigenvalue box."""


class UnsupportedDimensionError(ValueError):
    """The scan is only guaranteed at desk scale (n <= 3)."""


@dataclass(frozen=True)
class DeltaQuery:
    n: int
    theta: Phase
    tau: float
    cap: float
    resolution: int = 2000

    def __post_init__(self):
        if abs(self.theta.value) >= self.n * math.pi / 2:
            raise ValueError("theta must lie strictly inside the phase range")
        if self.tau <= 0:
            raise ValueError("tau must be positive")
        if self.cap <= math.tan(abs(self.theta.value) / self.n):
            raise ValueError("cap too small for the constraint to be feasible")
        if self.resolution < 2:
            raise ValueError("resolution must be >= 2")


def _gain(lam: np.ndarray, tau: float) -> np.ndarray:
    return np.arctan(lam + tau) - np.arctan(lam)


def _solve_last(rem: np.ndarray, cap: float) -> tuple[np.ndarray, np.ndarray]:
    """Bisection solve of arctan(l) = rem on [-cap, cap], with feasibility mask."""
    rem = np.asarray(rem, dtype=float)
    edge = math.atan(cap)
    feasible = (rem >= -edge) & (rem <= edge)
    lo = np.full(rem.shape, -cap)
    hi = np.full(rem.shape, cap)
    for _ in range(_BISECT_ITERS):
        mid = 0.5 * (lo + hi)
        below = np.arctan(mid) < rem
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return 0.5 * (lo + hi), feasible


def _objective_free(free: np.ndarray, q: DeltaQuery) -> np.ndarray:
    """Objective as a function of the free eigenvalues (last one solved)."""
    free = np.atleast_2d(free)
    rem = q.theta.value - np.arctan(free).sum(axis=1)
    last, feasible = _solve_last(rem, q.cap)
    total = _gain(free, q.tau).sum(axis=1) + _gain(last, q.tau)
    return np.where(feasible, total, np.inf)


def _golden_refine(fun, lo: float, hi: float, iters: int = 80) -> tuple[float, float]:
    """Golden-section minimum of a scalar function on [lo, hi]; returns (t, f(t))."""
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = fun(c), fun(d)
    for _ in range(iters):
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = fun(d)
    mid = 0.5 * (a + b)
    cands = [(fc, c), (fd, d), (fun(mid), mid), (fun(lo), lo), (fun(hi), hi)]
    fbest, tbest = min(cands)
    return tbest, fbest


def delta(q: DeltaQuery) -> float:
    """The truncated infimum described in the module docstring; always >= 0."""
    if q.n > 3:
        raise UnsupportedDimensionError("delta scan supports n <= 3 only")
    if q.n == 1:
        lam, feasible = _solve_last(np.array([q.theta.value]), q.cap)
        if not feasible[0]:
            raise InfeasibleQueryError("constraint unreachable within the cap")
        return float(max(_gain(lam, q.tau)[0], 0.0))

    axis = np.linspace(-q.cap, q.cap, q.resolution)
    if q.n == 2:
        free = axis[:, None]
    else:
        g1, g2 = np.meshgrid(axis, axis, indexing="ij")
        free = np.stack([g1.ravel(), g2.ravel()], axis=-1)
    vals = _objective_free(free, q)
    best = int(np.argmin(vals))
    if not np.isfinite(vals[best]):
        raise InfeasibleQueryError("constraint unreachable within the cap")

    # polish by coordinate-wise golden-section around the best grid point
    step = axis[1] - axis[0]
    point = free[best].copy()
    result = float(vals[best])
    for _ in range(3 if q.n == 3 else 1):
        for j in range(q.n - 1):
            lo = max(point[j] - step, -q.cap)
            hi = min(point[j] + step, q.cap)

            def line(t, j=j):
                trial = point.copy()
                trial[j] = t
                return float(_objective_free(trial, q)[0])

            tbest, fbest = _golden_refine(line, lo, hi)
            if fbest < result:
                result = fbest
                point[j] = tbest
    return float(max(result, 0.0))


def comparison_condition_holds(lo: Phase, hi: Phase, n: int) -> bool:
    """True when any continuous phase with range in [lo, hi] admits comparison."""
    return slop.avoids_special_values(lo, hi, n)
