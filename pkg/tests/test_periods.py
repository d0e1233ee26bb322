import numpy as np
import pytest

from conftest import pipeline
from trigonal_sigma.basis import nu_I
from trigonal_sigma.curve import cyclic_action, lift_x
from trigonal_sigma.inversion import random_points

NAMES = ["e", "345", "047", "378"]


@pytest.mark.parametrize("name", NAMES)
def test_legendre_relation(name):
    curve, pd, ev = pipeline(name)
    assert pd.legendre_residual() < 1e-10


@pytest.mark.parametrize("name", NAMES)
def test_riemann_bilinear(name):
    curve, pd, ev = pipeline(name)
    tau = pd.tau
    assert np.max(np.abs(tau - tau.T)) < 1e-10
    assert np.min(np.linalg.eigvalsh(tau.imag)) > 0


@pytest.mark.parametrize("name", NAMES)
def test_yr_divisor_is_principal(name):
    curve, pd, ev = pipeline(name)
    e = curve.exponents
    u = sum(e[i] * pd.abel.branch(i) for i in range(curve.r + curve.s))
    assert pd.lattice_residual(u) < 1e-8


@pytest.mark.parametrize("name", NAMES)
def test_fiber_sum_is_principal(name, rng):
    curve, pd, ev = pipeline(name)
    for _ in range(3):
        x = complex(rng.normal() + 1j * rng.normal())
        assert pd.lattice_residual(pd.abel.divisor(lift_x(curve, x))) < 1e-8


@pytest.mark.parametrize("name", NAMES)
def test_branch_points_are_torsion(name):
    curve, pd, ev = pipeline(name)
    for i in range(curve.r + curve.s):
        assert pd.lattice_residual(3 * pd.abel.branch(i)) < 1e-8


@pytest.mark.parametrize("name", NAMES)
def test_cyclic_action_on_abel_map(name, rng):
    # infinity is fixed by the automorphism and nu_i is an eigenvector, so
    # w(zeta P) = diag(eigenvalues) w(P) modulo the lattice
    curve, pd, ev = pipeline(name)
    P = random_points(curve, 1, rng)[0]
    Q = cyclic_action(P)
    rot = nu_I(curve, Q) / nu_I(curve, P)
    assert pd.lattice_residual(pd.abel.point(Q) - rot * pd.abel.point(P)) < 1e-8


@pytest.mark.parametrize("name", NAMES)
def test_lattice_reduction(name, rng):
    curve, pd, ev = pipeline(name)
    g = curve.genus
    l1, l2 = rng.integers(-3, 4, g), rng.integers(-3, 4, g)
    v = pd.lattice_vector(l1, l2)
    assert pd.lattice_residual(v) < 1e-10
    u = rng.normal(size=g) + 1j * rng.normal(size=g)
    a, b = pd.lattice_coordinates(pd.reduce(u + v))
    assert np.all(np.abs(np.concatenate([a, b])) <= 0.5 + 1e-12)
