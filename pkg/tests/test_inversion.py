import numpy as np
import pytest

from conftest import pipeline
from trigonal_sigma.basis import phi_hat_basis
from trigonal_sigma.curve import lift_x
from trigonal_sigma.inversion import (
    InversionError, alpha_abel_residual, alpha_map, fs_det, fs_matrix, jacobi_inversion_check,
    mu, mu_coeffs, negation_check, random_points, riemann_fundamental_check, serre_involution_check,
    vanishing_check, vector_field_check, zero_set_residual, sample_stratum,
)

NAMES = ["e", "345", "047", "378"]


@pytest.mark.parametrize("name", NAMES)
@pytest.mark.parametrize("kind", ["phi", "phi_hat"])
def test_mu_determinant_ratio_matches_coefficients(name, kind, rng):
    curve, pd, ev = pipeline(name)
    pts = random_points(curve, curve.genus, rng)
    muf = mu_coeffs(curve, kind, pts)
    for P in pts:
        assert abs(muf(P)) < 1e-9 * max(1.0, np.max(np.abs(muf.linear)))
    Q = random_points(curve, 1, rng)[0]
    assert abs(mu(curve, kind, pts, Q) - muf(Q)) < 1e-8 * abs(muf(Q))
    assert muf.coeffs[-1] == 1


def test_confluent_columns_match_limit(c345):
    curve = c345[0]
    P = lift_x(curve, 0.4 + 0.3j)[1]
    h = 1e-5
    from trigonal_sigma.inversion import _branch_points_along
    Ph = _branch_points_along(curve, P, [P.x + h])[0]
    Q = lift_x(curve, -0.5 + 0.2j)[0]
    limit = fs_det(curve, "phi_hat", (P, Ph, Q)) / h
    confluent = fs_det(curve, "phi_hat", (P, P, Q))
    assert abs(limit - confluent) < 1e-4 * abs(confluent)
    assert fs_matrix(curve, "phi_hat", (P, P, Q)).matrix.shape == (3, 3)


def test_special_divisor_rejected(c345):
    curve = c345[0]
    P, Q, R = lift_x(curve, 0.3 + 0.2j)
    # on a full fiber the rows 1 and x of the phi matrix are proportional
    with pytest.raises(InversionError):
        mu_coeffs(curve, "phi", (P, Q, R))


@pytest.mark.parametrize("name", NAMES)
def test_jacobi_inversion(name, rng):
    curve, pd, ev = pipeline(name)
    g = curve.genus
    for _ in range(3):
        D = random_points(curve, g, rng)
        rep = jacobi_inversion_check(curve, pd, ev, D, random_points(curve, 2, rng))
        assert rep["coefficient_residual"] < 1e-7
        assert rep["mu_residual"] < 1e-7


@pytest.mark.parametrize("name", ["345", "047", "378"])
def test_vanishing_on_strata(name, rng):
    curve, pd, ev = pipeline(name)
    g = curve.genus
    for k in range(1, g + 1):
        rep = vanishing_check(curve, pd, ev, random_points(curve, k, rng))
        assert rep["ratio_residual"] < 1e-7, (k, rep)
        assert rep["low_order"] < 1e-7
        assert rep["ug_order_ok"]
        if k == 1:
            assert abs(rep["ratios"][0] - rep["phi_ratio"]) < 1e-7 * abs(rep["phi_ratio"])


@pytest.mark.parametrize("name", ["345", "047", "378"])
def test_zero_set_and_negation(name):
    curve, pd, ev = pipeline(name)
    st = sample_stratum(curve, pd, curve.genus - 1, 4, seed=7)
    assert max(zero_set_residual(ev, u) for u in st.images) < 1e-9
    assert negation_check(curve, pd, ev, count=3, seed=8)["residual"] < 1e-9
    # a generic point is not on the zero set
    assert zero_set_residual(ev, st.images[0] + 0.1) > 1e-3


@pytest.mark.parametrize("name", NAMES)
@pytest.mark.parametrize("kind", ["phi", "phi_hat"])
def test_alpha_map_linear_equivalence(name, kind, rng):
    curve, pd, ev = pipeline(name)
    for n in range(1, curve.genus + 2):
        pts = random_points(curve, n, rng)
        img = alpha_map(curve, kind, pts)
        assert len(img.points) == img.expected_count
        assert img.tail < 1e-8
        assert alpha_abel_residual(curve, pd, kind, pts) < 1e-8


@pytest.mark.parametrize("name", ["345", "378"])
def test_alpha_hat_is_an_involution_on_classes(name, rng):
    curve, pd, ev = pipeline(name)
    pts = random_points(curve, curve.genus - 1, rng)
    assert serre_involution_check(curve, pd, pts) < 1e-8


@pytest.mark.parametrize("name", NAMES)
def test_riemann_fundamental_relation(name, rng):
    curve, pd, ev = pipeline(name)
    P, *D = random_points(curve, curve.genus + 1, rng)
    assert riemann_fundamental_check(curve, pd, ev, P, D)["residual"] < 1e-7


@pytest.mark.parametrize("name", ["345", "378"])
def test_vector_fields(name, rng):
    curve, pd, ev = pipeline(name)
    rep = vector_field_check(curve, pd, random_points(curve, curve.genus, rng))
    assert rep["residual"] < 1e-6
    assert rep["inverse_residual"] < 1e-10


def test_alpha_counts_345(c345, rng):
    curve = c345[0]
    assert phi_hat_basis(curve, 4).weights == (4, 5, 7, 8)
    img = alpha_map(curve, "phi_hat", random_points(curve, 1, rng))
    # mu_hat_1 has weight 5; removing P, B_1..B_3 leaves g - 1 = 1 zero
    assert img.expected_count == 5 - 1 - 2 - 1
