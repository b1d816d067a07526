"""Dense symmetric-matrix linear algebra for small (n <= 16) matrices.

Eigenvalues are computed with a cyclic Jacobi iteration.  All operations are
pure functions on immutable values and safe to share across threads.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Jacobi settings: a sweep visits every off-diagonal pair once.
SWEEP_CAP = 30
OFFDIAG_TOL = 1e-13

ORTH_TOL = 1e-12
LOEWNER_DEFAULT_TOL = 1e-10
CSV_SYMMETRY_TOL = 1e-12


class InvalidInputError(ValueError):
    """Raised for non-finite or malformed matrix input."""


class NumericalFailureError(RuntimeError):
    """Raised when the Jacobi iteration fails to converge within the sweep cap."""


class DimensionMismatchError(ValueError):
    """Raised when operand dimensions disagree."""


class SymMatrix:
    """Immutable symmetric n x n matrix.

    Only the upper triangle of the input is read; the lower triangle is
    mirrored, so symmetry is structural rather than checked.
    """

    __slots__ = ("mat",)

    def __init__(self, entries):
        a = np.asarray(entries, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise InvalidInputError(f"expected a square matrix, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise InvalidInputError("matrix entries must be finite")
        upper = np.triu(a)
        m = upper + upper.T - np.diag(np.diag(a))
        m.flags.writeable = False
        object.__setattr__(self, "mat", m)

    def __setattr__(self, name, value):  # immutability guard
        raise AttributeError("SymMatrix is immutable")

    @property
    def n(self) -> int:
        return self.mat.shape[0]

    @staticmethod
    def diag(values) -> "SymMatrix":
        return SymMatrix(np.diag(np.asarray(values, dtype=float)))

    @staticmethod
    def zero(n: int) -> "SymMatrix":
        return SymMatrix(np.zeros((n, n)))

    def __add__(self, other: "SymMatrix") -> "SymMatrix":
        if other.n != self.n:
            raise DimensionMismatchError("dimension mismatch")
        return SymMatrix(self.mat + other.mat)

    def __neg__(self) -> "SymMatrix":
        return SymMatrix(-self.mat)

    def shifted(self, tau: float) -> "SymMatrix":
        """X + tau*I."""
        return SymMatrix(self.mat + tau * np.eye(self.n))

    def __repr__(self):
        return f"SymMatrix({self.mat.tolist()!r})"


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues sorted ascending."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if not np.all(np.isfinite(v)):
            raise InvalidInputError("spectrum values must be finite")
        if np.any(np.diff(v) < 0):
            raise InvalidInputError("spectrum must be sorted ascending")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return self.values.shape[0]


class OrthMatrix:
    """Real orthogonal matrix; Q^T Q = I is checked on construction."""

    __slots__ = ("mat",)

    def __init__(self, entries):
        a = np.asarray(entries, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise InvalidInputError(f"expected a square matrix, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise InvalidInputError("matrix entries must be finite")
        defect = np.max(np.abs(a.T @ a - np.eye(a.shape[0])))
        if defect > ORTH_TOL:
            raise InvalidInputError(f"not orthogonal: max |Q^T Q - I| = {defect:.3e}")
        a = a.copy()
        a.flags.writeable = False
        object.__setattr__(self, "mat", a)

    def __setattr__(self, name, value):
        raise AttributeError("OrthMatrix is immutable")

    @property
    def n(self) -> int:
        return self.mat.shape[0]

    @staticmethod
    def identity(n: int) -> "OrthMatrix":
        return OrthMatrix(np.eye(n))


def _jacobi(a: np.ndarray):
    """Cyclic Jacobi diagonalization.  Returns (diag, V) with A = V diag V^T
    (columns of V unsorted)."""
    a = a.copy()
    n = a.shape[0]
    v = np.eye(n)
    scale = float(np.linalg.norm(a))
    if n == 1 or scale == 0.0:
        return np.diag(a).copy(), v
    thresh = OFFDIAG_TOL * scale
    skip = thresh / (n * n)
    for _ in range(SWEEP_CAP):
        off = float(np.linalg.norm(a - np.diag(np.diag(a))))
        if off <= thresh:
            return np.diag(a).copy(), v
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= skip:
                    continue
                theta = (a[p, p] - a[q, q]) / (2.0 * apq)
                if theta == 0.0:
                    t = 1.0
                else:
                    t = -np.sign(theta) / (abs(theta) + np.hypot(theta, 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # a <- G^T a G with G the (p,q) rotation [[c, s], [-s, c]]
                ap = c * a[p, :] - s * a[q, :]
                aq = s * a[p, :] + c * a[q, :]
                a[p, :], a[q, :] = ap, aq
                ap = c * a[:, p] - s * a[:, q]
                aq = s * a[:, p] + c * a[:, q]
                a[:, p], a[:, q] = ap, aq
                a[p, q] = a[q, p] = 0.0
                vp = c * v[:, p] - s * v[:, q]
                vq = s * v[:, p] + c * v[:, q]
                v[:, p], v[:, q] = vp, vq
    off = float(np.linalg.norm(a - np.diag(np.diag(a))))
    if off <= thresh:
        return np.diag(a).copy(), v
    raise NumericalFailureError(
        f"Jacobi iteration did not converge in {SWEEP_CAP} sweeps "
        f"(off-diagonal norm {off:.3e}, threshold {thresh:.3e})"
    )


def eigenvalues(x: SymMatrix) -> Spectrum:
    """All eigenvalues of x, sorted ascending."""
    d, _ = _jacobi(x.mat)
    return Spectrum(np.sort(d))


def eigen_decomposition(x: SymMatrix):
    """Returns (Spectrum, OrthMatrix Q) with x = Q diag Q^T, eigenvalues ascending."""
    d, v = _jacobi(x.mat)
    order = np.argsort(d, kind="stable")
    return Spectrum(d[order]), OrthMatrix(v[:, order])


def exchange_matrix(n: int) -> OrthMatrix:
    """Anti-diagonal permutation matrix J (symmetric, orthogonal, involutive)."""
    if n < 1:
        raise InvalidInputError("n must be >= 1")
    return OrthMatrix(np.eye(n)[::-1])


def conjugate(x: SymMatrix, q: OrthMatrix) -> SymMatrix:
    """Q X Q^T, symmetrized to kill rounding skew."""
    if x.n != q.n:
        raise DimensionMismatchError("dimension mismatch")
    m = q.mat @ x.mat @ q.mat.T
    return SymMatrix(0.5 * (m + m.T))


def loewner_leq(x: SymMatrix, y: SymMatrix, tol: float = LOEWNER_DEFAULT_TOL) -> bool:
    """True iff y - x is positive semidefinite up to -tol on its lowest eigenvalue."""
    if x.n != y.n:
        raise DimensionMismatchError("dimension mismatch")
    lam = eigenvalues(SymMatrix(y.mat - x.mat))
    return bool(lam.values[0] >= -tol)


def read_matrix_csv(path) -> SymMatrix:
    """Read a full square matrix from plain-text CSV (row-major).

    Asymmetry beyond 1e-12 (relative to the Frobenius norm, absolute for
    near-zero matrices) is rejected.
    """
    a = np.loadtxt(path, delimiter=",", ndmin=2)
    if a.shape[0] != a.shape[1]:
        raise InvalidInputError(f"matrix in {path} is not square: shape {a.shape}")
    scale = max(float(np.linalg.norm(a)), 1.0)
    skew = float(np.max(np.abs(a - a.T)))
    if skew > CSV_SYMMETRY_TOL * scale:
        raise InvalidInputError(f"matrix in {path} is asymmetric: max skew {skew:.3e}")
    return SymMatrix(a)


def write_matrix_csv(path, x: SymMatrix) -> None:
    np.savetxt(path, x.mat, delimiter=",", fmt="%.17g")
