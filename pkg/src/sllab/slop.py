"""The arctan-eigenvalue operator F(X) = sum_i arctan(lambda_i(X)).

F is degenerate elliptic, odd, and invariant under orthogonal conjugation.
Its range for n x n arguments is the open interval (-n*pi/2, n*pi/2); the
closed endpoints are reachable only in the limit but may be stored in a
Phase when describing ranges.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from . import symmat
from .symmat import SymMatrix


class PhaseRangeError(ValueError):
    """Raised for a phase value outside [-n*pi/2, n*pi/2]."""


@dataclass(frozen=True)
class Phase:
    """A phase value together with the dimension it refers to."""

    value: float
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise PhaseRangeError("dimension must be >= 1")
        if not math.isfinite(self.value) or abs(self.value) > self.n * math.pi / 2:
            raise PhaseRangeError(
                f"phase {self.value} outside [-{self.n}*pi/2, {self.n}*pi/2]"
            )


def F(x: SymMatrix) -> Phase:
    """Sum of arctans of the eigenvalues of x."""
    lam = symmat.eigenvalues(x)
    return Phase(float(sum(math.atan(v) for v in lam.values)), x.n)


def special_phase(n: int, k: int) -> Phase:
    """theta_k = (n - 2k) * pi / 2 for k = 0, ..., n."""
    if not 0 <= k <= n:
        raise ValueError(f"k must be in 0..{n}, got {k}")
    return Phase((n - 2 * k) * math.pi / 2, n)


def avoids_special_values(lo: Phase, hi: Phase, n: int) -> bool:
    """True iff [lo, hi] lies inside [theta_n, theta_0] and contains no theta_k.

    This is the admissibility test for a phase range: when it holds, no
    special value (k = 0, ..., n) is attained and comparison arguments apply.
    """
    if lo.value > hi.value:
        raise ValueError("lo must be <= hi")
    theta0 = n * math.pi / 2
    if lo.value < -theta0 or hi.value > theta0:
        return False
    for k in range(n + 1):
        th = (n - 2 * k) * math.pi / 2
        if lo.value <= th <= hi.value:
            return False
    return True
