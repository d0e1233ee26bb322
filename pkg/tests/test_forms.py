import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from trigonal_sigma.basis import phi_hat_basis
from trigonal_sigma.curve import build_curve, cyclic_action, lift_x
from trigonal_sigma.forms import (
    PoleError, appendix_identity_residual, diagonal_coefficients, eq34_residual, fundamental_form,
    omega_symmetry_residual, residue, second_kind_basis, sigma_kernel, third_kind,
)
from trigonal_sigma.inversion import random_points

CURVES = {
    "e": (0, 2, [0, 1]),
    "345": (1, 2, [0, 1, -1.3 + 0.4j]),
    "047": (0, 4, [0, 1, -1.3 + 0.4j, 0.7j]),
    "378": (2, 3, [0, 1, -1.3 + 0.4j, 0.7j, 2]),
}


@pytest.fixture(params=sorted(CURVES))
def curve(request):
    r, s, b = CURVES[request.param]
    return build_curve(r, s, b)


def test_omega_symmetric_and_eq34(curve, rng):
    basis = second_kind_basis(curve)
    for _ in range(10):
        P, Q = random_points(curve, 2, rng)
        assert omega_symmetry_residual(curve, P, Q, basis) < 1e-10
        assert eq34_residual(curve, P, Q, basis) < 1e-10


def test_omega_diagonal(curve, rng):
    basis = second_kind_basis(curve)
    for P in random_points(curve, 3, rng):
        lead, res = diagonal_coefficients(curve, P, basis)
        assert abs(lead - 1) < 1e-9 and abs(res) < 1e-9


def test_omega_invariant_under_cyclic_action(curve, rng):
    basis = second_kind_basis(curve)
    P, Q = random_points(curve, 2, rng)
    a = fundamental_form(curve, P, Q, basis)
    b = fundamental_form(curve, cyclic_action(P), cyclic_action(Q), basis)
    assert abs(a - b) < 1e-10 * abs(a)


def test_top_second_kind_numerator_is_pure(curve):
    # the numerator of the last nu^II is phi_hat_g alone, with no holomorphic part
    g = curve.genus
    nu = second_kind_basis(curve)[-1]
    a, er, es = phi_hat_basis(curve, g + 1)[g]
    expected_r = np.zeros_like(nu.p_r)
    expected_s = np.zeros_like(nu.p_s)
    (expected_r if er else expected_s)[a] = 1.0
    if er and es:
        pytest.skip("phi_hat_g is x^a K")
    assert np.allclose(nu.p_r, expected_r) and np.allclose(nu.p_s, expected_s)


def test_third_kind_residues(curve, rng):
    P1, P2 = random_points(curve, 2, rng)
    f = lambda P: third_kind(curve, P, P1, P2)
    assert abs(residue(curve, f, P1) - 1) < 1e-8
    assert abs(residue(curve, f, P2) + 1) < 1e-8
    # other sheets over x(P1) carry no residue
    other = [Q for Q in lift_x(curve, P1.x) if abs(Q.yr - P1.yr) > 1e-8][0]
    assert abs(residue(curve, f, other)) < 1e-8


def test_kernel_pole_guard(curve):
    P = lift_x(curve, 0.3 + 0.1j)[0]
    with pytest.raises(PoleError):
        sigma_kernel(curve, P, P)


@settings(max_examples=30)
@given(st.complex_numbers(max_magnitude=2, allow_nan=False),
       st.complex_numbers(max_magnitude=2, allow_nan=False))
def test_divided_difference_identity(xp, xq):
    if abs(xp - xq) < 1e-2:
        return
    curve = build_curve(2, 3, [0, 1, -1.3 + 0.4j, 0.7j, 2])
    assert appendix_identity_residual(curve, xp, xq) < 1e-9
