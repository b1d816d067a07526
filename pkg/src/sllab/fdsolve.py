"""Monotone wide-stencil finite differences for F(Hess w) = f on [-1,1]^2.

In two dimensions the extreme eigenvalues of the Hessian are the minimum and
maximum of the second directional derivatives over unit directions; the
scheme discretizes these over a finite direction set.  The solver is a
damped explicit fixed-point iteration

    w <- w + rho * (F_h(w) - f),    rho = h^2 / (4 * (1 + max |e|^2)),

which is monotone because arctan is 1-Lipschitz and each centered second
difference carries a -2/(h|e|)^2 coefficient on the center node.  Only
n = 2 is supported: the directional min/max characterization of the
eigenvalues is exact only for 2 x 2 Hessians.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

DEFAULT_DIRECTIONS = ((1, 0), (0, 1), (1, 1), (1, -1), (2, 1), (1, 2), (2, -1), (1, -2))
AXIS_DIRECTIONS = ((1, 0), (0, 1))


class SolverFailureError(RuntimeError):
    """Raised when the fixed-point residual grows persistently."""


@dataclass(frozen=True)
class StencilSet:
    """Integer offset directions; (1,0) and (0,1) must be present, none parallel."""

    directions: tuple = DEFAULT_DIRECTIONS

    def __post_init__(self):
        dirs = tuple(tuple(int(c) for c in d) for d in self.directions)
        if (1, 0) not in dirs or (0, 1) not in dirs:
            raise ValueError("stencil must contain the axis directions")
        for i, a in enumerate(dirs):
            if a == (0, 0):
                raise ValueError("zero direction not allowed")
            for b in dirs[i + 1 :]:
                if a[0] * b[1] - a[1] * b[0] == 0:
                    raise ValueError(f"parallel directions {a} and {b}")
        object.__setattr__(self, "directions", dirs)

    @property
    def max_sq_length(self) -> int:
        return max(a * a + b * b for a, b in self.directions)

    @property
    def reach(self) -> int:
        return max(max(abs(a), abs(b)) for a, b in self.directions)


@dataclass
class Grid2D:
    """Uniform nodal grid over [-1, 1]^2; m odd so the origin is a node."""

    m: int
    values: np.ndarray

    def __post_init__(self):
        if self.m < 5 or self.m % 2 == 0:
            raise ValueError("m must be odd and >= 5")
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.m, self.m):
            raise ValueError(f"values must have shape ({self.m}, {self.m})")
        if not np.all(np.isfinite(v)):
            raise ValueError("grid values must be finite")
        self.values = v

    @property
    def h(self) -> float:
        return 2.0 / (self.m - 1)

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(-1.0, 1.0, self.m)

    def meshgrid(self):
        return np.meshgrid(self.nodes, self.nodes, indexing="ij")


@dataclass
class Problem2D:
    """Phase f on the closed box, Dirichlet data g, optional exact solution.

    phase and boundary take meshgrid arrays (X, Y) and return arrays.
    """

    phase: Callable[[np.ndarray, np.ndarray], np.ndarray]
    boundary: Callable[[np.ndarray, np.ndarray], np.ndarray]
    exact: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = None
    name: str = ""


def _second_differences(values: np.ndarray, h: float, stencil: StencilSet):
    """(lam_min, lam_max) arrays of extreme second differences.

    Wide directions are used where every stencil neighbor is in the grid;
    the remaining interior ring falls back to the axis-only stencil.
    Boundary entries are NaN.
    """
    m = values.shape[0]
    lam_min = np.full((m, m), np.nan)
    lam_max = np.full((m, m), np.nan)

    def diffs(dirs, sl_i, sl_j):
        out = []
        for a, b in dirs:
            i0, i1 = sl_i.start, sl_i.stop
            j0, j1 = sl_j.start, sl_j.stop
            center = values[sl_i, sl_j]
            plus = values[i0 + a : i1 + a, j0 + b : j1 + b]
            minus = values[i0 - a : i1 - a, j0 - b : j1 - b]
            out.append((plus - 2.0 * center + minus) / (h * h * (a * a + b * b)))
        return out

    inner = slice(1, m - 1)
    axis = diffs(AXIS_DIRECTIONS, inner, inner)
    lam_min[inner, inner] = np.minimum(*axis)
    lam_max[inner, inner] = np.maximum(*axis)

    r = stencil.reach
    if m > 2 * r:
        wide = slice(r, m - r)
        full = diffs(stencil.directions, wide, wide)
        stackmin = full[0]
        stackmax = full[0]
        for d in full[1:]:
            stackmin = np.minimum(stackmin, d)
            stackmax = np.maximum(stackmax, d)
        lam_min[wide, wide] = stackmin
        lam_max[wide, wide] = stackmax
    return lam_min, lam_max


def hessian_extremes(grid: Grid2D, node, stencil: StencilSet = StencilSet()):
    """Extreme second directional differences at one interior node."""
    i, j = node
    if not (0 < i < grid.m - 1 and 0 < j < grid.m - 1):
        raise IndexError(f"node {node} is not interior for m = {grid.m}")
    lam_min, lam_max = _second_differences(grid.values, grid.h, stencil)
    return float(lam_min[i, j]), float(lam_max[i, j])


def residual(grid: Grid2D, prob: Problem2D, stencil: StencilSet = StencilSet()) -> np.ndarray:
    """arctan(lam_min) + arctan(lam_max) - f at interior nodes; 0 on the boundary."""
    x, y = grid.meshgrid()
    fvals = prob.phase(x, y)
    lam_min, lam_max = _second_differences(grid.values, grid.h, stencil)
    res = np.zeros_like(grid.values)
    inner = slice(1, grid.m - 1)
    res[inner, inner] = (np.arctan(lam_min[inner, inner])
                         + np.arctan(lam_max[inner, inner])
                         - fvals[inner, inner])
    return res


@dataclass
class SolveResult:
    grid: Grid2D
    iterations: int
    achieved_residual: float
    converged: bool
    residual_history: list = field(default_factory=list)


def solve(prob: Problem2D, m: int, stencil: StencilSet = StencilSet(),
          tol: float = 1e-6, max_iters: int = 200_000,
          w0: Optional[np.ndarray] = None, rho: Optional[float] = None,
          log: Optional[Callable[[int, float], None]] = None,
          keep_history: bool = False) -> SolveResult:
    """Damped fixed-point solve of the Dirichlet problem.

    Stops when the sup-norm residual drops below tol, or reports the
    achieved residual after max_iters.  Raises SolverFailureError if the
    residual grows over 100 consecutive iterations.  The iteration is
    deterministic for given inputs.

    rho defaults to the conservative bound h^2 / (4 * (1 + max|e|^2)).  Any
    rho <= h^2/4 keeps the update monotone (at most two directions are
    active in the min/max and arctan is 1-Lipschitz); larger values than
    the default trade the documented safety margin for speed.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    grid = Grid2D(m, np.zeros((m, m)))
    x, y = grid.meshgrid()
    gvals = prob.boundary(x, y)
    w = np.zeros((m, m)) if w0 is None else np.array(w0, dtype=float)
    if w.shape != (m, m):
        raise ValueError("w0 has wrong shape")
    w[0, :], w[-1, :], w[:, 0], w[:, -1] = gvals[0, :], gvals[-1, :], gvals[:, 0], gvals[:, -1]
    fvals = prob.phase(x, y)

    h = grid.h
    if rho is None:
        rho = h * h / (4.0 * (1.0 + stencil.max_sq_length))
    elif not 0.0 < rho <= h * h / 4.0:
        raise ValueError("rho must lie in (0, h^2/4]")
    inner = slice(1, m - 1)
    f_inner = fvals[inner, inner]
    prev = math.inf
    growth = 0
    history: list = []
    sup = math.inf
    it = 0
    for it in range(max_iters):
        lam_min, lam_max = _second_differences(w, h, stencil)
        res = np.arctan(lam_min[inner, inner])
        res += np.arctan(lam_max[inner, inner])
        res -= f_inner
        sup = float(np.max(np.abs(res)))
        if log is not None:
            log(it, sup)
        if keep_history:
            history.append(sup)
        if sup <= tol:
            return SolveResult(Grid2D(m, w), it, sup, True, history)
        if sup > prev * (1.0 + 1e-12):
            growth += 1
            if growth >= 100:
                raise SolverFailureError(
                    f"residual grew over 100 consecutive iterations (now {sup:.3e})")
        else:
            growth = 0
        prev = sup
        res *= rho
        w[inner, inner] += res
    return SolveResult(Grid2D(m, w), it + 1, sup, False, history)


def prolong(values: np.ndarray) -> np.ndarray:
    """Bilinear interpolation from an m-grid to the (2m - 1)-grid."""
    m = values.shape[0]
    out = np.zeros((2 * m - 1, 2 * m - 1))
    out[::2, ::2] = values
    out[1::2, ::2] = 0.5 * (values[:-1, :] + values[1:, :])
    out[::2, 1::2] = 0.5 * (values[:, :-1] + values[:, 1:])
    out[1::2, 1::2] = 0.25 * (values[:-1, :-1] + values[1:, :-1]
                              + values[:-1, 1:] + values[1:, 1:])
    return out


def write_grid_csv(path, values: np.ndarray) -> None:
    """Grid CSV: first line the node count per side, then row-major values."""
    values = np.asarray(values, dtype=float)
    with open(path, "w") as fh:
        fh.write(f"{values.shape[0]}\n")
        for row in values:
            fh.write(",".join("%.17g" % val for val in row) + "\n")


def read_grid_csv(path) -> np.ndarray:
    with open(path) as fh:
        first = fh.readline().strip()
        if not first:
            raise ValueError(f"{path}: empty grid file")
        m = int(first)
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    if data.shape != (m, m):
        raise ValueError(f"{path}: expected {m}x{m} values, got {data.shape}")
    return data


def radial_problem(floor_factor: float = 0.3) -> Problem2D:
    """Exact solution |x|^(3/2); the phase is its radial operator value.

    The continuous phase reaches pi at the origin, which a finite difference
    of arctans can never attain, so the discrete problem would be insoluble
    there.  The singularity is excised by flooring the radius at
    floor_factor * h when the phase is sampled on a grid (h inferred from
    the node spacing); only the origin node is affected, and the factor 0.3
    matches the second differences of the exact solution at the origin to
    leading order.  Off-grid evaluation keeps the continuous extension pi.
    """

    def phase(x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        r = np.hypot(x, y)
        floor = 0.0
        if x.ndim == 2 and x.shape[0] > 1:
            floor = floor_factor * abs(x[1, 0] - x[0, 0])
        reff = np.maximum(r, floor)
        out = np.full(r.shape, math.pi)
        nz = reff > 0
        rs = np.sqrt(reff[nz])
        out[nz] = np.arctan(0.75 / rs) + np.arctan(1.5 / rs)
        return out

    def exact(x, y):
        return np.hypot(x, y) ** 1.5

    return Problem2D(phase, exact, exact, name="radial32")


def constant_problem(theta: float) -> Problem2D:
    """Constant phase with the isotropic quadratic exact solution."""
    if abs(theta) >= math.pi:
        raise ValueError("theta must lie in (-pi, pi) for n = 2")
    a = math.tan(theta / 2.0)

    def phase(x, y):
        return np.full(np.shape(x), theta)

    def exact(x, y):
        return 0.5 * a * (x * x + y * y)

    return Problem2D(phase, exact, exact, name=f"constant:{theta}")


def counterexample_problem(k: int) -> Problem2D:
    """The n = 2 family phase with the subsolution as Dirichlet data.

    No outcome is asserted for this problem; it exposes the regime where the
    phase range crosses a special value.
    """
    from .family import Family, f_many, v_many

    fam = Family(2, k)

    def phase(x, y):
        pts = np.stack([np.ravel(x), np.ravel(y)], axis=-1)
        return f_many(fam, pts).reshape(np.shape(x))

    def boundary(x, y):
        pts = np.stack([np.ravel(x), np.ravel(y)], axis=-1)
        return v_many(fam, pts).reshape(np.shape(x))

    return Problem2D(phase, boundary, None, name=f"counterexample:{k}")
