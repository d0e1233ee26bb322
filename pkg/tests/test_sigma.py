import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from conftest import pipeline
from oracles import WeierstrassOracle, eisenstein_invariants, equianharmonic_half_periods, reduce_tau
from trigonal_sigma.curve import build_curve
from trigonal_sigma.periods import period_matrices
from trigonal_sigma.semigroup import build_semigroup, u_weights, young_diagram
from trigonal_sigma.sigma import SigmaError, build_sigma, schur_polynomial, theta_char


def same_modular_point(t1, t2, tol=1e-9):
    a, b = reduce_tau(t1), reduce_tau(t2)
    # the two vertical edges of the fundamental domain are identified
    if abs(abs(a.real) - 0.5) < tol:
        a = complex(0.5, a.imag)
    if abs(abs(b.real) - 0.5) < tol:
        b = complex(0.5, b.imag)
    return abs(a - b) < tol


@pytest.fixture(scope="module")
def oracle():
    w1, w3 = equianharmonic_half_periods()
    return w1, w3, WeierstrassOracle(w1, w3)


def test_oracle_is_equianharmonic(oracle):
    w1, w3, _ = oracle
    g2, g3 = eisenstein_invariants(w1, w3)
    assert abs(g2) < 1e-8 and abs(g3 + 1) < 1e-7


def test_genus1_lattice_matches_oracle(genus1, oracle):
    curve, pd, ev = genus1
    w1, w3, _ = oracle
    assert same_modular_point(pd.tau[0, 0], complex(w3 / w1))
    B = np.array([complex(2 * w1), complex(2 * w3)])
    R = np.array([B.real, B.imag])
    coords = [np.linalg.solve(R, [v.real, v.imag]) for v in (2 * pd.omega1[0, 0], 2 * pd.omega2[0, 0])]
    M = np.array(coords)
    assert np.allclose(M, np.round(M), atol=1e-9)
    assert abs(abs(np.linalg.det(np.round(M))) - 1) < 1e-12


def test_genus1_sigma_and_wp_match_oracle(genus1, oracle):
    curve, pd, ev = genus1
    O = oracle[2]
    assert ev.calibrated
    for re in np.linspace(-1.2, 1.2, 4):
        for im in np.linspace(-0.9, 0.9, 4):
            u = complex(re + 0.05, im + 0.03)
            s_ref, p_ref = complex(O.sigma(u)), complex(O.wp(u))
            assert abs(ev.sigma([u]) - s_ref) < 1e-9 * abs(s_ref)
            assert abs(ev.wp(1, 1, [u]) - p_ref) < 1e-9 * abs(p_ref)


def test_schur_polynomials():
    u1, u2 = sympy.symbols("u1 u2")
    S = schur_polynomial((1, 1))
    assert sympy.expand(S.expr - (u2 ** 2 / 2 - u1)) == 0
    assert sympy.expand(schur_polynomial((1,)).expr - sympy.Symbol("u1")) == 0


@settings(max_examples=15)
@given(st.integers(0, 3), st.integers(1, 4), st.floats(0.1, 3.0))
def test_schur_is_weight_homogeneous(r, ds, lam):
    s = r + ds
    try:
        H = build_semigroup(r, s)
    except ValueError:
        return
    rows = young_diagram(H).rows
    if sum(rows) > 12:
        return
    S = schur_polynomial(rows)
    wts = np.array(u_weights(rows))
    u = np.array([0.3 + 0.1j * k for k in range(len(rows))])
    assert abs(S(u * lam ** wts) - lam ** sum(rows) * S(u)) < 1e-9 * max(1.0, abs(S(u * lam ** wts)))


@pytest.mark.parametrize("name", ["e", "345", "047", "378"])
def test_quasi_periodicity(name, rng):
    curve, pd, ev = pipeline(name)
    g = curve.genus
    for _ in range(3):
        u = 0.3 * (rng.normal(size=g) + 1j * rng.normal(size=g))
        l1, l2 = rng.integers(-1, 2, g), rng.integers(-1, 2, g)
        assert ev.quasi_periodicity_residual(u, l1, l2) < 1e-8


@pytest.mark.parametrize("name", ["e", "345", "047", "378"])
def test_parity(name, rng):
    curve, pd, ev = pipeline(name)
    g = curve.genus
    u = 0.4 * (rng.normal(size=g) + 1j * rng.normal(size=g))
    a, b = ev.sigma(u), ev.sigma(-u)
    # r = 0: parity of |Lambda|; r > 0: the characteristic is even, so sigma is even
    sign = (-1) ** sum(young_diagram(curve.semigroup).rows) if curve.r == 0 else 1
    assert abs(b - sign * a) < 1e-9 * abs(a)


@pytest.mark.parametrize("name", ["e", "047"])
def test_sigma_vanishes_at_origin_when_symmetric(name):
    curve, pd, ev = pipeline(name)
    assert abs(ev.sigma(np.zeros(curve.genus))) < 1e-12


@pytest.mark.parametrize("name", ["345", "378"])
def test_sigma_nonzero_at_origin_for_nonsymmetric(name):
    # the vanishing characteristic is even here, so no constant can give a
    # Schur leading term at u = 0 and calibration must refuse
    curve, pd, ev = pipeline(name)
    assert not ev.calibrated
    assert abs(ev.sigma(np.zeros(curve.genus)) - 1) < 1e-12
    with pytest.raises(SigmaError):
        ev.calibrate()


@pytest.mark.parametrize("name", ["345", "378"])
def test_centered_sigma_has_schur_leading_term(name, rng):
    curve, pd, _ = pipeline(name)
    cen = build_sigma(curve, pd, centered=True)
    assert cen.calibrated
    S = schur_polynomial(cen.rows)
    # below eps ~ 1e-2 the value eps^|Lambda| drowns in roundoff for genus 4
    eps = 1e-2
    for _ in range(3):
        v = rng.normal(size=curve.genus) + 1j * rng.normal(size=curve.genus)
        v /= np.linalg.norm(v)
        assert abs(cen.scaled(v, eps) - S(v)) < 10 * eps


def test_centered_sigma_is_a_shift(c345, rng):
    curve, pd, ev = c345
    cen = build_sigma(curve, pd, centered=True)
    u = 0.3 * (rng.normal(size=2) + 1j * rng.normal(size=2))
    ratio = cen.sigma(u) / ev.sigma(u - pd.shift)
    assert abs(ratio - cen.c / ev.c) < 1e-9 * abs(ratio)
    assert abs(cen.sigma(np.zeros(2))) < 1e-12


def test_theta_characteristic_is_half_integer(c378):
    curve, pd, ev = c378
    assert np.all(np.isin(2 * pd.delta, [0, 1]))
    z = np.zeros(curve.genus)
    parity = int(round(4 * pd.delta[:curve.genus] @ pd.delta[curve.genus:])) % 2
    assert parity == 0  # even characteristic for r > 0
    assert abs(theta_char(z, pd.tau, pd.delta)) > 1e-8


def test_wp_is_periodic(c345, rng):
    curve, pd, ev = c345
    u = 0.3 * (rng.normal(size=2) + 1j * rng.normal(size=2))
    v = pd.lattice_vector([1, 0], [0, -1])
    assert np.allclose(ev.wp_matrix(u + v), ev.wp_matrix(u), rtol=1e-8)
    assert np.allclose(ev.wp_matrix(u), ev.wp_matrix(u).T)


def test_independent_of_homology_seed():
    curve = build_curve(1, 2, [0, 1, -1.3 + 0.4j])
    pd0 = period_matrices(curve, seed=0)
    pd1 = period_matrices(curve, seed=3)
    e0, e1 = build_sigma(curve, pd0, centered=True), build_sigma(curve, pd1, centered=True)
    u = np.array([0.2 + 0.1j, -0.3 + 0.2j])
    assert abs(e0.wp(1, 2, u) - e1.wp(1, 2, u)) < 1e-8 * abs(e0.wp(1, 2, u))
