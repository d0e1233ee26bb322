import numpy as np
import pytest

from trigonal_sigma.basis import (
    canonical_divisor_data, g_split, holomorphic_basis, monomial_weight, nu_I,
    phi_basis, phi_hat_basis,
)
from trigonal_sigma.curve import build_curve, lift_x
from trigonal_sigma.semigroup import u_weights, young_diagram

CASES = [(0, 2, [0, 1]), (1, 2, [0, 1, -1.3 + 0.4j]), (0, 4, [0, 1, -1.3 + 0.4j, 0.7j]),
         (2, 3, [0, 1, -1.3 + 0.4j, 0.7j, 2]), (1, 3, [0, 1, 2j, -1])]


@pytest.mark.parametrize("r,s,b", CASES)
def test_phi_weights_are_semigroup_elements(r, s, b):
    curve = build_curve(r, s, b)
    H = curve.semigroup
    B = phi_basis(curve, 12)
    assert list(B.weights) == H.elements(10 ** 4)[:12]
    assert all(monomial_weight(m, H) == w for m, w in zip(B.monomials, B.weights))


@pytest.mark.parametrize("r,s,b", CASES)
def test_holomorphic_split(r, s, b):
    curve = build_curve(r, s, b)
    g = curve.genus
    Bh = phi_hat_basis(curve, g + 3)
    assert all(w <= 3 * g - 1 for w in Bh.weights[:g])
    assert all(w >= 3 * g for w in Bh.weights[g:])
    gr, gs = g_split(curve)
    assert gr + gs == g
    assert sum(1 for m in Bh.monomials[:g] if m[1] == 1) == gr


@pytest.mark.parametrize("r,s,b", CASES)
def test_u_weights_from_orders(r, s, b):
    curve = build_curve(r, s, b)
    g = curve.genus
    rows = young_diagram(curve.semigroup).rows
    # nu_i vanishes to order wt(u_i) - 1 at infinity
    orders = [d.order_at_infinity for d in holomorphic_basis(curve)]
    assert tuple(o + 1 for o in orders) == u_weights(rows)
    assert tuple(3 * g - w for w in phi_hat_basis(curve, g).weights) == u_weights(rows)


@pytest.mark.parametrize("r,s,b", CASES)
def test_canonical_divisor_degree(r, s, b):
    curve = build_curve(r, s, b)
    for d in canonical_divisor_data(curve):
        assert sum(d.values()) == 2 * curve.genus - 2
        assert all(v > 0 for v in d.values())


def test_canonical_divisors_345():
    curve = build_curve(1, 2, [0, 1, -1.3 + 0.4j])
    d1, d2 = canonical_divisor_data(curve)
    assert d1 == {"B3": 1, "inf": 1}
    assert d2 == {"B1": 1, "B2": 1}
    B = phi_hat_basis(curve, 5)
    assert B.weights == (4, 5, 7, 8, 9)


def test_nu_I_is_cyclic_eigenvector():
    curve = build_curve(2, 3, [0, 1, -1.3 + 0.4j, 0.7j, 2])
    P0, P1, _ = lift_x(curve, 0.4 + 0.3j)
    ratio = nu_I(curve, P1) / nu_I(curve, P0)
    assert np.allclose(np.abs(ratio), 1)
    assert np.allclose(ratio ** 3, 1)
