"""Counterexample families on the unit infinity-norm ball.

For parameters (n, k, p) with 0 <= k <= n and 1 < p < 2:

    v(x) = 1/4 - sum_{i<k} |x_i| + sum_{i>=k} (1/2)|x_i|^p      (0-based i)
    u(x) = -v'(Jx)   with v' the (n, n-k, p) family and J the exchange matrix
    f(x) = -sum_{i<k} c(x_i) + sum_{i>=k} c(x_i)

where c(t) = arctan(a_p |t|^(p-2)), a_p = p(p-1)/2, extended by c(0) = pi/2.
With the default p = 3/2 the coefficient is a_p = 3/8.  v is a viscosity
subsolution and u a supersolution of F(Hess w) = f, yet v - u peaks at the
origin with value 1/2 while being <= 0 on the boundary of the box.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .slop import Phase
from .symmat import SymMatrix

HALF_PI = math.pi / 2


class OffAxisRequiredError(ValueError):
    """Raised when a classical-derivative formula is evaluated on an axis."""


@dataclass(frozen=True)
class Family:
    n: int
    k: int
    p: float = 1.5

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not 0 <= self.k <= self.n:
            raise ValueError(f"k must be in 0..{self.n}, got {self.k}")
        if not 1.0 < self.p < 2.0:
            raise ValueError(f"p must be in (1, 2), got {self.p}")

    @property
    def a_p(self) -> float:
        return self.p * (self.p - 1.0) / 2.0

    @property
    def mirror(self) -> "Family":
        return Family(self.n, self.n - self.k, self.p)


@dataclass(frozen=True)
class DomainBox:
    """The open unit ball in the infinity norm."""

    n: int

    def contains(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.max(np.abs(x)) < 1.0)

    def closure_contains(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.max(np.abs(x)) <= 1.0)


def _points(fam: Family, x) -> np.ndarray:
    pts = np.atleast_2d(np.asarray(x, dtype=float))
    if pts.shape[-1] != fam.n:
        raise ValueError(f"points of dimension {pts.shape[-1]} for n = {fam.n}")
    return pts


def v_many(fam: Family, pts: np.ndarray) -> np.ndarray:
    pts = _points(fam, pts)
    a = np.abs(pts)
    return 0.25 - a[:, : fam.k].sum(axis=1) + 0.5 * (a[:, fam.k :] ** fam.p).sum(axis=1)


def u_many(fam: Family, pts: np.ndarray) -> np.ndarray:
    pts = _points(fam, pts)
    return -v_many(fam.mirror, pts[:, ::-1])


def c_many(fam: Family, t: np.ndarray) -> np.ndarray:
    """c(t) elementwise, with the on-axis limit pi/2 at t = 0."""
    t = np.asarray(t, dtype=float)
    out = np.full(t.shape, HALF_PI)
    nz = t != 0.0
    out[nz] = np.arctan(fam.a_p * np.abs(t[nz]) ** (fam.p - 2.0))
    return out


def f_many(fam: Family, pts: np.ndarray) -> np.ndarray:
    pts = _points(fam, pts)
    cv = c_many(fam, pts)
    return -cv[:, : fam.k].sum(axis=1) + cv[:, fam.k :].sum(axis=1)


def diff_many(fam: Family, pts: np.ndarray) -> np.ndarray:
    pts = _points(fam, pts)
    return v_many(fam, pts) - u_many(fam, pts)


def v(fam: Family, x) -> float:
    return float(v_many(fam, x)[0])


def u(fam: Family, x) -> float:
    return float(u_many(fam, x)[0])


def c(fam: Family, t: float) -> float:
    if t == 0.0:
        return HALF_PI
    return math.atan(fam.a_p * abs(t) ** (fam.p - 2.0))


def f(fam: Family, x) -> Phase:
    return Phase(float(f_many(fam, x)[0]), fam.n)


def diff(fam: Family, x) -> float:
    """v(x) - u(x).  Equals 1/2 + sum_i ((1/2)|x_i|^p - |x_i|) for any k."""
    return float(diff_many(fam, x)[0])


def hessian_v_offaxis(fam: Family, x) -> SymMatrix:
    """Hessian of v where it is smooth: diagonal with entries 0 for the kink
    coordinates and a_p |x_i|^(p-2) for the power coordinates.

    Requires x_i != 0 for every power coordinate i >= k.
    """
    pts = _points(fam, x)[0]
    power = pts[fam.k :]
    if np.any(power == 0.0):
        raise OffAxisRequiredError("power coordinates must be nonzero")
    d = np.zeros(fam.n)
    d[fam.k :] = fam.a_p * np.abs(power) ** (fam.p - 2.0)
    return SymMatrix.diag(d)


def gradient_v_offkink(fam: Family, x) -> np.ndarray:
    """Gradient of v away from the kinks of its nonsmooth coordinates.

    Requires x_i != 0 for i < k (the |x_i| terms) and for i >= k (the power
    terms are C^1 but their second derivative blows up on the axes; the
    gradient itself extends by 0 there, which is what this returns).
    """
    pts = _points(fam, x)[0]
    g = np.zeros(fam.n)
    kink = pts[: fam.k]
    if np.any(kink == 0.0):
        raise OffAxisRequiredError("kink coordinates must be nonzero")
    g[: fam.k] = -np.sign(kink)
    power = pts[fam.k :]
    nz = power != 0.0
    g[fam.k :][nz] = 0.5 * fam.p * np.sign(power[nz]) * np.abs(power[nz]) ** (fam.p - 1.0)
    return g
