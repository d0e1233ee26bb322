import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from trigonal_sigma.curve import (
    CurveError, build_curve, check_nonsingular, cyclic_action, expand_at_infinity,
    infinity_chart, lift_x, on_curve, relation_residuals,
)

complexes = st.complex_numbers(max_magnitude=3.0, allow_nan=False, allow_infinity=False)


@settings(max_examples=50)
@given(complexes)
def test_lifts_satisfy_relations(x):
    curve = build_curve(1, 2, [0, 1, -1.3 + 0.4j])
    for P in lift_x(curve, x):
        assert np.all(relation_residuals(curve, P) < 1e-10)
        Q = cyclic_action(P)
        assert on_curve(curve, Q)
        assert cyclic_action(P, 3) == P


def test_lift_over_branch_point():
    curve = build_curve(2, 3, [0, 1, -1.3 + 0.4j, 0.7j, 2])
    pts = lift_x(curve, 0.7j)
    assert all(P.is_branch for P in pts)
    assert len({P.branch_index for P in pts}) == 1


def test_three_distinct_points_over_generic_x():
    curve = build_curve(2, 3, [0, 1, -1.3 + 0.4j, 0.7j, 2])
    pts = lift_x(curve, 0.3 + 0.2j)
    ys = [P.yr for P in pts]
    assert min(abs(a - b) for i, a in enumerate(ys) for b in ys[i + 1:]) > 1e-3


def test_singular_curve_rejected():
    with pytest.raises(CurveError):
        build_curve(1, 2, [0, 1, 1])
    assert check_nonsingular([0, 1, 1]) == (False, (2, 3))
    with pytest.raises(CurveError):
        build_curve(1, 2, [0, 1])


def test_expansion_at_infinity_exact_series():
    # y^3 = x^2 - x, i.e. y = t^-2 (1 - t^3)^(1/3)
    curve = build_curve(0, 2, [0, 1])
    E = expand_at_infinity(curve, 9)
    assert E.pole_orders() == (3, 2, 1) or E.pole_orders()[0] == 3
    expected = [1, 0, 0, -1 / 3, 0, 0, -1 / 9, 0, 0, -5 / 81]
    ser = E.yr if curve.r_hat == 2 else E.ys
    assert np.allclose(ser, expected)


@pytest.mark.parametrize("rs,b", [((1, 2), [0, 1, -1.3 + 0.4j]), ((2, 3), [0, 1, -1.3 + 0.4j, 0.7j, 2])])
def test_infinity_chart(rs, b):
    curve = build_curve(*rs, b)
    E = expand_at_infinity(curve, 30)
    assert E.pole_orders() == (3, curve.r_hat, curve.s_hat)
    for t in [0.05, 0.03j, 0.02 - 0.04j]:
        P = infinity_chart(curve, t)
        x, yr, ys = E.evaluate(t)
        assert abs(yr - P.yr) / abs(P.yr) < 1e-12
        assert abs(ys - P.ys) / abs(P.ys) < 1e-12
        assert on_curve(curve, P)
