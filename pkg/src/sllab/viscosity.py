"""Sub/supersolution checks for the counterexample families.

Two routes are combined.  The analytic certificate evaluates the eigenvalue
lower bound available at any admissible touching point and returns its margin
over the phase; it is nonnegative wherever a test function can touch.  The
randomized probe tries to falsify the viscosity inequalities directly with
quadratic test functions: each sampled quadratic is verified to touch on a
small local grid before its operator value is compared with the phase.
"""
from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, asdict

import numpy as np

from . import family as fam_mod
from . import slop
from .family import Family, HALF_PI
from .symmat import SymMatrix

CERT_TOL = 1e-12
PROBE_TOL = 1e-9
TOUCH_TOL = 1e-12


@dataclass(frozen=True)
class TouchingQuadratic:
    """A quadratic test function anchored at a base point.

    side = "above" means the quadratic dominates the target near the base
    point (candidate test function for the subsolution inequality);
    "below" means it is dominated (supersolution side).
    """

    base: np.ndarray
    gradient: np.ndarray
    hessian: SymMatrix
    side: str

    def __post_init__(self):
        if self.side not in ("above", "below"):
            raise ValueError("side must be 'above' or 'below'")

    def values(self, base_value: float, offsets: np.ndarray) -> np.ndarray:
        """Evaluate at base + offsets given the target value at the base."""
        h = self.hessian.mat
        quad = 0.5 * np.einsum("ij,jk,ik->i", offsets, h, offsets)
        return base_value + offsets @ self.gradient + quad


@dataclass
class Violation:
    point: list
    kind: str
    margin: float
    detail: str = ""


@dataclass
class VerificationRecord:
    """Outcome of probing one point."""

    point: list
    trials: int
    touched: int
    min_margin: float | None
    violations: list = field(default_factory=list)
    vacuous: bool = False


@dataclass
class VerificationReport:
    n: int
    k: int
    p: float
    grid: int
    points_checked: int
    min_margin: float | None
    violations: list = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, default=float)

    @property
    def passed(self) -> bool:
        return not self.violations


def subsolution_certificate(fam: Family, xstar) -> float | None:
    """Margin of the certified eigenvalue bound over the phase at xstar.

    Returns None when some power coordinate vanishes: no C^2 function can
    touch v from above there, so the subsolution condition is vacuous.
    The returned value equals sum of c(x_i) over nonzero kink coordinates
    and is always >= 0 up to rounding.
    """
    pts = np.atleast_2d(np.asarray(xstar, dtype=float))
    m = certificate_margins(fam, pts)[0]
    return None if math.isnan(m) else float(m)


def certificate_margins(fam: Family, pts: np.ndarray) -> np.ndarray:
    """Vectorized certificate margins; NaN at points where touching is impossible."""
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    cv = fam_mod.c_many(fam, pts)
    kink = pts[:, : fam.k]
    lower = -HALF_PI * (kink == 0.0).sum(axis=1) + cv[:, fam.k :].sum(axis=1)
    margins = lower - fam_mod.f_many(fam, pts)
    margins[(pts[:, fam.k :] == 0.0).any(axis=1)] = np.nan
    return margins


def _local_offsets(fam: Family, radius: float, rng: np.random.Generator) -> np.ndarray:
    """Sample displacements: 4 per axis plus a few random directions."""
    n = fam.n
    rows = []
    for i in range(n):
        e = np.zeros(n)
        e[i] = 1.0
        for d in (radius, radius / 2, -radius / 2, -radius):
            rows.append(d * e)
    extra = rng.normal(size=(8, n))
    extra /= np.linalg.norm(extra, axis=1, keepdims=True)
    for scale in (radius, radius / 2):
        rows.extend(scale * extra)
    return np.array(rows)


def _candidate_quadratics(fam: Family, xstar: np.ndarray, trials: int,
                          rng: np.random.Generator):
    """Candidate above-touching quadratics for v at an admissible point.

    Trial 0 is the exact second-order expansion plus 0.1*I.  Later trials
    sample a subgradient in the kink coordinates sitting on an axis and add a
    random negative-semidefinite perturbation there, plus a random multiple
    of the identity.
    """
    n, k = fam.n, fam.k
    kink_zero = [i for i in range(k) if xstar[i] == 0.0]
    g0 = np.zeros(n)
    h0 = np.zeros((n, n))
    for i in range(n):
        t = xstar[i]
        if i < k:
            g0[i] = -np.sign(t)  # 0 on an axis: one valid subgradient
        else:
            g0[i] = 0.5 * fam.p * np.sign(t) * abs(t) ** (fam.p - 1.0)
            h0[i, i] = fam.a_p * abs(t) ** (fam.p - 2.0)
    for trial in range(trials):
        if trial == 0:
            g, h = g0, h0 + 0.1 * np.eye(n)
        else:
            g = g0.copy()
            for i in kink_zero:
                g[i] = rng.uniform(-0.9, 0.9)
            h = h0 + rng.uniform(1e-3, 1.0) * np.eye(n)
            if kink_zero:
                m = len(kink_zero)
                b = rng.normal(size=(m, m)) * rng.uniform(0.0, 5.0)
                h[np.ix_(kink_zero, kink_zero)] -= b @ b.T
        yield TouchingQuadratic(xstar, g, SymMatrix(0.5 * (h + h.T)), "above")


def probe_subsolution(fam: Family, xstar, trials: int, radius: float,
                      seed: int) -> VerificationRecord:
    """Try to falsify F(Hess phi) >= f(xstar) with touching quadratics.

    Each candidate is accepted only if it dominates v on the local sample
    grid; accepted candidates must then satisfy the operator inequality up
    to a 1e-9 slack.
    """
    xstar = np.asarray(xstar, dtype=float)
    if np.max(np.abs(xstar)) >= 1.0:
        raise ValueError("probe point must lie in the open box")
    rec = VerificationRecord(point=xstar.tolist(), trials=trials, touched=0,
                             min_margin=None)
    if trials == 0:
        return rec
    if np.any(xstar[fam.k :] == 0.0):
        rec.vacuous = True  # no quadratic can touch v from above here
        return rec
    rng = np.random.default_rng(seed)
    offsets = _local_offsets(fam, radius, rng)
    vbase = fam_mod.v(fam, xstar)
    vvals = fam_mod.v_many(fam, xstar + offsets)
    fstar = fam_mod.f(fam, xstar).value
    for quad in _candidate_quadratics(fam, xstar, trials, rng):
        qvals = quad.values(vbase, offsets)
        if np.all(qvals >= vvals - TOUCH_TOL):
            rec.touched += 1
            margin = slop.F(quad.hessian).value - fstar
            if rec.min_margin is None or margin < rec.min_margin:
                rec.min_margin = margin
            if margin < -PROBE_TOL:
                rec.violations.append(Violation(xstar.tolist(), "subsolution",
                                                margin))
    return rec


def supersolution_by_symmetry(fam: Family, xstar, trials: int = 64,
                              radius: float = 1e-3, seed: int = 0) -> VerificationRecord:
    """Check F(Hess psi) <= f(xstar) for quadratics psi touching u from below.

    Candidates are produced through the reversal map psi(x) = -phi(Jx) from
    above-touching quadratics phi of the mirror family at Jx*; each psi is
    re-verified to touch u from below on the local grid before the operator
    inequality is asserted.  The oddness of F is spot-checked on the probed
    Hessians as well.
    """
    xstar = np.asarray(xstar, dtype=float)
    if np.max(np.abs(xstar)) >= 1.0:
        raise ValueError("probe point must lie in the open box")
    rec = VerificationRecord(point=xstar.tolist(), trials=trials, touched=0,
                             min_margin=None)
    if trials == 0:
        return rec
    mirror = fam.mirror
    ystar = xstar[::-1].copy()
    if np.any(ystar[mirror.k :] == 0.0):
        rec.vacuous = True  # equivalently: no below-touching of u at xstar
        return rec
    rng = np.random.default_rng(seed)
    offsets = _local_offsets(fam, radius, rng)
    ubase = fam_mod.u(fam, xstar)
    uvals = fam_mod.u_many(fam, xstar + offsets)
    fstar = fam_mod.f(fam, xstar).value
    vbase_mirror = fam_mod.v(mirror, ystar)
    vvals_mirror = fam_mod.v_many(mirror, ystar + offsets[:, ::-1])
    for phi in _candidate_quadratics(mirror, ystar, trials, rng):
        # phi must touch v_mirror from above at Jx*
        qvals = phi.values(vbase_mirror, offsets[:, ::-1])
        if not np.all(qvals >= vvals_mirror - TOUCH_TOL):
            continue
        h_phi = phi.hessian.mat
        h_psi = SymMatrix(-h_phi[::-1, ::-1])
        g_psi = -phi.gradient[::-1]
        psi = TouchingQuadratic(xstar, g_psi, h_psi, "below")
        psivals = psi.values(ubase, offsets)
        if not np.all(psivals <= uvals + TOUCH_TOL):
            rec.violations.append(Violation(xstar.tolist(), "reversal-transport",
                                            float(np.max(psivals - uvals)),
                                            "psi(x) = -phi(Jx) failed to touch u from below"))
            continue
        rec.touched += 1
        odd_defect = slop.F(SymMatrix(-h_phi)).value + slop.F(phi.hessian).value
        if abs(odd_defect) > PROBE_TOL:
            rec.violations.append(Violation(xstar.tolist(), "oddness", odd_defect))
        margin = fstar - slop.F(h_psi).value
        if rec.min_margin is None or margin < rec.min_margin:
            rec.min_margin = margin
        if margin < -PROBE_TOL:
            rec.violations.append(Violation(xstar.tolist(), "supersolution", margin))
    return rec


def power_kink_defeats_quadratic(p: float, slope: float, curvature: float,
                                 radius: float = 1e-3) -> float:
    """Witness that no quadratic can touch t -> (1/2)|t|^p from above at 0.

    For any quadratic q(t) = slope*t + curvature*t^2/2 with q(0) = 0, returns
    a |t| <= radius with (1/2)|t|^p > q(t), exploiting that |t|^p with p < 2
    dominates t^2 near the origin.  Raises if no witness is found (cannot
    happen for 1 < p < 2).
    """
    if not 1.0 < p < 2.0:
        raise ValueError("p must be in (1, 2)")
    sign = -1.0 if slope > 0 else 1.0
    t = sign * radius
    for _ in range(2000):
        if 0.5 * abs(t) ** p > slope * t + 0.5 * curvature * t * t:
            return t
        t *= 0.5
    raise RuntimeError("no witness found; quadratic appears to dominate the kink")


def grid_points(n: int, grid: int, max_points: int = 100_000,
                seed: int = 0) -> np.ndarray:
    """Cartesian grid over the closed box, subsampled above max_points."""
    axis = np.linspace(-1.0, 1.0, grid)
    mesh = np.meshgrid(*([axis] * n), indexing="ij")
    pts = np.stack(mesh, axis=-1).reshape(-1, n)
    if len(pts) > max_points:
        rng = np.random.default_rng(seed)
        idx = rng.choice(len(pts), size=max_points, replace=False)
        pts = pts[np.sort(idx)]
    return pts


def _thread_count(threads: int | None) -> int:
    if threads is not None:
        return max(1, threads)
    env = os.environ.get("SLLAB_THREADS")
    return max(1, int(env)) if env else 1


def verify_family(fam: Family, grid: int = 41, trials: int = 64,
                  radius: float = 1e-3, seed: int = 0, probe_points: int = 60,
                  max_points: int = 100_000, threads: int | None = None) -> VerificationReport:
    """Run every family and viscosity invariant for one parameter set.

    Checks, in order: the origin identities, the boundary sign of v - u, the
    strict interior maximum, the symmetry identities on random points, the
    certificate margin on the full grid, and the randomized touching probes
    on a seeded subsample of fully off-axis grid points.
    """
    rng = np.random.default_rng(seed)
    violations: list[Violation] = []
    origin = np.zeros(fam.n)

    theta_k = slop.special_phase(fam.n, fam.k).value
    f0 = fam_mod.f(fam, origin).value
    if abs(f0 - theta_k) > CERT_TOL:
        violations.append(Violation(origin.tolist(), "origin-phase", f0 - theta_k))
    d0 = fam_mod.diff(fam, origin)
    if d0 != 0.5:
        violations.append(Violation(origin.tolist(), "origin-gap", d0 - 0.5))

    pts = grid_points(fam.n, grid, max_points=max_points, seed=seed)

    # boundary sign and interior maximum of v - u
    dvals = fam_mod.diff_many(fam, pts)
    on_boundary = np.max(np.abs(pts), axis=1) == 1.0
    bad = on_boundary & (dvals > CERT_TOL)
    for i in np.flatnonzero(bad)[:10]:
        violations.append(Violation(pts[i].tolist(), "boundary-sign", float(dvals[i])))
    nonzero = np.any(pts != 0.0, axis=1)
    bad = nonzero & (dvals >= 0.5)
    for i in np.flatnonzero(bad)[:10]:
        violations.append(Violation(pts[i].tolist(), "interior-maximum", float(dvals[i])))

    # symmetry identities on random points
    rnd = rng.uniform(-1.0, 1.0, size=(2000, fam.n))
    mirror = fam.mirror
    u_def = fam_mod.u_many(fam, rnd)
    u_sym = -fam_mod.v_many(mirror, rnd[:, ::-1])
    if np.max(np.abs(u_def - u_sym)) > 0.0:
        violations.append(Violation([], "u-symmetry", float(np.max(np.abs(u_def - u_sym)))))
    f_def = fam_mod.f_many(fam, rnd)
    f_sym = -fam_mod.f_many(mirror, rnd[:, ::-1])
    worst = float(np.max(np.abs(f_def - f_sym)))
    if worst > CERT_TOL:
        violations.append(Violation([], "f-symmetry", worst))

    # certificate sweep over the full grid
    margins = certificate_margins(fam, pts)
    admissible = ~np.isnan(margins)
    min_margin = float(np.min(margins[admissible])) if admissible.any() else None
    bad = admissible & (margins < -CERT_TOL)
    for i in np.flatnonzero(bad)[:10]:
        violations.append(Violation(pts[i].tolist(), "certificate", float(margins[i])))

    # randomized probes on a subsample of interior fully off-axis points
    interior = np.max(np.abs(pts), axis=1) < 1.0
    off_axis = np.all(pts != 0.0, axis=1)
    candidates = np.flatnonzero(interior & off_axis)
    if len(candidates) > probe_points:
        candidates = candidates[rng.choice(len(candidates), size=probe_points,
                                           replace=False)]

    def probe(idx: int) -> list[Violation]:
        point_seed = seed + 1000 + int(idx)
        sub = probe_subsolution(fam, pts[idx], trials, radius, point_seed)
        sup = supersolution_by_symmetry(fam, pts[idx], trials, radius, point_seed)
        return sub.violations + sup.violations

    workers = _thread_count(threads)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(probe, candidates))
    else:
        results = [probe(i) for i in candidates]
    for vlist in results:  # deterministic order: candidates are index-sorted chunks
        violations.extend(vlist)

    return VerificationReport(n=fam.n, k=fam.k, p=fam.p, grid=grid,
                              points_checked=len(pts), min_margin=min_margin,
                              violations=[asdict(x) for x in violations])
