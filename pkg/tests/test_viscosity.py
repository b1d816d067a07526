import math

import numpy as np
import pytest

from sllab import family as fm
from sllab import slop, viscosity
from sllab.family import Family
from sllab.symmat import SymMatrix
from sllab.viscosity import TouchingQuadratic


def test_certificate_on_axis_branch():
    # kink coordinate on the axis: -pi/2 bound meets the phase exactly
    assert viscosity.subsolution_certificate(Family(2, 1), [0.0, 0.25]) == 0.0


def test_certificate_off_axis():
    fam = Family(2, 1)
    got = viscosity.subsolution_certificate(fam, [0.5, 0.25])
    assert abs(got - fm.c(fam, 0.5)) < 1e-14
    assert got > 0


def test_certificate_k0_exact():
    rng = np.random.default_rng(0)
    fam = Family(3, 0)
    for _ in range(20):
        x = rng.uniform(0.05, 0.95, size=3) * rng.choice([-1.0, 1.0], size=3)
        assert viscosity.subsolution_certificate(fam, x) == 0.0


def test_certificate_vacuous_when_power_coordinate_vanishes():
    assert viscosity.subsolution_certificate(Family(2, 1), [0.5, 0.0]) is None
    assert viscosity.subsolution_certificate(Family(2, 0), [0.0, 0.5]) is None


def test_probe_zero_trials_vacuous():
    rec = viscosity.probe_subsolution(Family(2, 1), [0.5, 0.25], 0, 1e-3, 0)
    assert rec.trials == 0 and rec.touched == 0 and rec.min_margin is None
    assert not rec.violations


def test_probe_taylor_margin():
    fam = Family(2, 1)
    x = [0.5, 0.25]
    rec = viscosity.probe_subsolution(fam, x, 64, 1e-3, 42)
    assert rec.touched > 0
    assert not rec.violations
    # every touching quadratic beats the phase by at least the kink-sum
    assert rec.min_margin >= fm.c(fam, 0.5) - 1e-9


def test_probe_pure_kink_n1():
    # v = 1/4 - |x|: every quadratic with |slope| < 1 touches at 0, and
    # F is always strictly above the phase value -pi/2 there
    fam = Family(1, 1)
    rec = viscosity.probe_subsolution(fam, [0.0], 64, 1e-3, 3)
    assert rec.touched > 0
    assert not rec.violations
    assert rec.min_margin > 0


def test_probe_rejects_points_outside_domain():
    with pytest.raises(ValueError):
        viscosity.probe_subsolution(Family(2, 1), [1.0, 0.0], 8, 1e-3, 0)


def test_hessian_transport_identity():
    # for quadratic psi, Hess of x -> -psi(Jx) at Jx equals -J Hess psi J
    rng = np.random.default_rng(1)
    for n in (2, 3):
        h = rng.normal(size=(n, n))
        h = 0.5 * (h + h.T)
        j = np.eye(n)[::-1]
        transported = -(j @ h @ j)
        np.testing.assert_array_equal(transported, -h[::-1, ::-1])


def test_supersolution_mirrors_certificate():
    fam = Family(2, 1)
    rec = viscosity.supersolution_by_symmetry(fam, [0.25, 0.0], 64, 1e-3, 11)
    # Jx* = (0, 0.25): the mirrored subsolution point of the on-axis branch
    assert rec.touched > 0
    assert not rec.violations
    assert rec.min_margin >= -1e-9


def test_supersolution_off_axis():
    fam = Family(2, 1)
    rec = viscosity.supersolution_by_symmetry(fam, [0.25, 0.5], 64, 1e-3, 11)
    assert rec.touched > 0
    assert not rec.violations
    # mirror margin: the phase beats F by the (mirrored) kink-sum
    assert rec.min_margin >= fm.c(fam, 0.5) - 1e-9


def test_touching_quadratic_validation():
    with pytest.raises(ValueError):
        TouchingQuadratic(np.zeros(2), np.zeros(2), SymMatrix(np.eye(2)), "sideways")


def test_no_touching_at_power_kink():
    rng = np.random.default_rng(2)
    for p in (1.2, 1.5, 1.8):
        for _ in range(50):
            slope = float(rng.uniform(-10.0, 10.0))
            curvature = float(rng.uniform(-100.0, 100.0))
            t = viscosity.power_kink_defeats_quadratic(p, slope, curvature)
            assert 0.5 * abs(t) ** p > slope * t + 0.5 * curvature * t * t


def test_verify_family_passes():
    rep = viscosity.verify_family(Family(2, 1), grid=21, probe_points=10, seed=0)
    assert rep.passed
    assert rep.min_margin >= -1e-12
    assert rep.points_checked == 21 * 21
    data = rep.to_json()
    assert '"violations": []' in data


def test_verify_family_threads_deterministic():
    kw = dict(grid=13, probe_points=8, seed=5)
    a = viscosity.verify_family(Family(2, 1), threads=1, **kw)
    b = viscosity.verify_family(Family(2, 1), threads=4, **kw)
    assert a.to_json() == b.to_json()


def test_grid_points_capped():
    pts = viscosity.grid_points(3, 41, max_points=1000, seed=0)
    assert pts.shape == (1000, 3)
    again = viscosity.grid_points(3, 41, max_points=1000, seed=0)
    np.testing.assert_array_equal(pts, again)
