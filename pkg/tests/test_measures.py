import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from tracemt.constants import DomainError, unit_ball_volume
from tracemt.grid import Annulus, Ball, BoxDomain, GridFunction, grid_for, symmetric_box
from tracemt.measures import (
    RadonMeasure,
    ball_mass,
    ball_masses,
    certify_growth,
    certify_nondegeneracy,
    load_atoms,
    make_hyperplane,
    make_lebesgue,
    make_radial_power,
    radial_lebesgue,
)

DISK = Ball((0.0, 0.0), 1.0)


@pytest.fixture(scope="module")
def leb64():
    return make_lebesgue(DISK, 1 / 64)


def test_domains():
    pts = np.array([[0.0, 0.0], [0.5, 0.0], [1.5, 0.0]])
    assert Ball((0.0, 0.0), 1.0).contains(pts).tolist() == [True, True, False]
    assert Annulus((0.0, 0.0), 0.25, 1.0).contains(pts).tolist() == [False, True, False]
    assert BoxDomain((-1.0, -1.0), (2.0, 1.0)).contains(pts).tolist() == [True, True, True]
    assert Ball((0.0, 0.0, 0.0), 2.0).diameter == 4.0


def test_grid_roundtrip(tmp_path):
    spec = symmetric_box(2, 1.0, 1 / 8)
    f = GridFunction.from_function(spec, lambda p: p[:, 0] ** 2 - p[:, 1])
    path = tmp_path / "f.csv"
    f.to_csv(path, meta="kind=test")
    g = GridFunction.from_csv(path)
    assert g.spec == spec
    assert np.array_equal(f.values, g.values)
    assert np.array_equal(f.sample(spec.centers()[:5]), f.values.ravel()[:5])


def test_grid_for_covers_domain():
    spec = grid_for(Ball((0.1, 0.0), 0.5), 1 / 16)
    lo, hi = np.array(spec.lo), np.array(spec.hi)
    assert np.all(lo <= [-0.4, -0.5]) and np.all(hi >= [0.6, 0.5])


def test_lebesgue_ball_mass(leb64):
    assert ball_mass(leb64, (0, 0), 1.0) == pytest.approx(math.pi, rel=0.02)
    assert ball_mass(leb64, (0.3, 0.1), 0.0) == 0.0
    assert leb64.total_mass == pytest.approx(leb64.weights.sum(), rel=1e-12)


def test_hyperplane_mass():
    h = 1 / 128
    nu = make_hyperplane(DISK, h, plane=(1, h / 2))
    for r in (0.1, 0.3, 0.6):
        assert ball_mass(nu, (0.0, h / 2), r) == pytest.approx(2 * r, rel=0.02)
    nu3 = make_hyperplane(Ball((0.0, 0.0, 0.0), 1.0), 1 / 64, plane=(2, 1 / 128))
    assert ball_mass(nu3, (0, 0, 1 / 128), 0.5) == pytest.approx(math.pi * 0.25, rel=0.02)
    with pytest.raises(DomainError):
        make_hyperplane(DISK, h, plane=(1, 3.0))


def test_radial_power_masses():
    nu = make_radial_power(DISK, 1 / 128, 1.5)
    for r in np.linspace(0.1, 1.0, 7):
        assert ball_mass(nu, (0, 0), r) == pytest.approx(r**1.5, rel=0.03)
    with pytest.raises(DomainError):
        make_radial_power(DISK, 1 / 32, 2.5)


def test_radial_lebesgue_total():
    nu = radial_lebesgue(3, 1.0, 1e-9, 500)
    assert nu.total_mass == pytest.approx(4 * math.pi / 3, rel=1e-12)


def test_growth_certificates(leb64):
    assert certify_growth(leb64, 2.0, math.pi).passed
    assert certify_growth(leb64, 1.0, math.pi * 2.0).passed
    assert not certify_growth(leb64, 3.0, math.pi).passed
    hyp = make_hyperplane(DISK, 1 / 64, plane=(1, 1 / 128))
    assert certify_growth(hyp, 1.0, 2.0).passed


def test_radial_power_certificates():
    nu12 = make_radial_power(DISK, 1 / 64, 1.2)
    assert certify_growth(nu12, 1.2, 1.0).passed
    assert not certify_growth(nu12, 1.4, 1.0).passed
    nd = certify_nondegeneracy(nu12, (0.0, 0.0), 0.5, 1.2)
    assert nd.passed and nd.C0 == pytest.approx(1.0, rel=0.05)


def test_nondegeneracy(leb64):
    nd = certify_nondegeneracy(leb64, (0.0, 0.0), 0.5, 2.0)
    assert nd.passed and nd.C0 == pytest.approx(math.pi, rel=0.05)
    hyp = make_hyperplane(DISK, 1 / 64, plane=(1, 0.3))
    bad = certify_nondegeneracy(hyp, (0.0, 0.0), 0.2, 1.0)
    assert not bad.passed and bad.C0 == 0.0
    with pytest.raises(DomainError):
        certify_nondegeneracy(leb64, (0.0, 0.0), 1 / 128, 2.0)


def test_atoms_csv_roundtrip(tmp_path, leb64):
    sub = leb64.restrict(leb64.points[:, 0] > 0.5)
    path = tmp_path / "atoms.csv"
    sub.to_csv(path)
    back = load_atoms(path)
    assert back.total_mass == pytest.approx(sub.total_mass, rel=1e-12)
    assert np.allclose(back.points, sub.points)


def test_negative_weights_rejected():
    with pytest.raises(DomainError):
        RadonMeasure(np.zeros((2, 2)), np.array([1.0, -1.0]))


atoms_st = st.integers(1, 40).flatmap(lambda m: st.tuples(
    st.lists(st.tuples(st.floats(-1, 1), st.floats(-1, 1)), min_size=m, max_size=m),
    st.lists(st.floats(0, 5), min_size=m, max_size=m),
))


@given(atoms_st, st.floats(-1, 1), st.floats(0, 2), st.floats(0, 2))
def test_ball_mass_monotone_and_additive(atoms, cx, r1, r2):
    pts, w = np.array(atoms[0]), np.array(atoms[1])
    nu = RadonMeasure(pts, w)
    a, b = sorted((r1, r2))
    assert ball_mass(nu, (cx, 0.0), a) <= ball_mass(nu, (cx, 0.0), b)
    left = pts[:, 0] < 0
    total = ball_mass(nu.restrict(left), (cx, 0.0), b) + ball_mass(nu.restrict(~left), (cx, 0.0), b)
    assert total == pytest.approx(ball_mass(nu, (cx, 0.0), b), abs=1e-12)
    many = ball_masses(nu, np.array([[cx, 0.0]]), np.array([a, b]))[0]
    assert many == pytest.approx([ball_mass(nu, (cx, 0.0), a), ball_mass(nu, (cx, 0.0), b)], abs=1e-12)


@given(st.floats(0.01, 100))
def test_scaling(lam):
    nu = make_lebesgue(DISK, 1 / 16)
    assert ball_mass(nu.scaled(lam), (0.1, 0.2), 0.4) == pytest.approx(lam * ball_mass(nu, (0.1, 0.2), 0.4), rel=1e-12)
