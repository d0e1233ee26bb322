"""Monomial bases ordered by pole order at infinity, and holomorphic differentials.

A monomial is an exponent triple (a, e_r, e_s) meaning x^a y_r^e_r y_s^e_s
with e_r, e_s in {0, 1}.  The triple (a, 1, 1) equals x^a K(x).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curve import CurveModel, CurvePoint, expand_at_infinity
from .semigroup import NumericalSemigroup


def monomial_weight(mono, H: NumericalSemigroup) -> int:
    a, er, es = mono
    return 3 * a + er * H.r_hat + es * H.s_hat


def _sg(obj) -> NumericalSemigroup:
    return obj.semigroup if isinstance(obj, CurveModel) else obj


@dataclass(frozen=True)
class MonomialBasis:
    monomials: tuple
    weights: tuple
    hatted: bool

    def __len__(self):
        return len(self.monomials)

    def __getitem__(self, n):
        return self.monomials[n]


def _merge(candidates, H, count):
    cands = sorted(candidates, key=lambda m: monomial_weight(m, H))
    ws = [monomial_weight(m, H) for m in cands]
    assert len(set(ws)) == len(ws), "weight tie among reduced monomials"
    return cands[:count], ws[:count]


def phi_basis(curve, count: int) -> MonomialBasis:
    """First `count` monomials of the coordinate ring, ordered by pole order."""
    H = _sg(curve)
    amax = count + 1
    cands = [(a, 0, 0) for a in range(amax)] + [(a, 1, 0) for a in range(amax)] \
        + [(a, 0, 1) for a in range(amax)]
    monos, ws = _merge(cands, H, count)
    return MonomialBasis(tuple(monos), tuple(ws), False)


def phi_hat_basis(curve, count: int) -> MonomialBasis:
    """First `count` elements of the ideal of functions vanishing on all B_i."""
    H = _sg(curve)
    amax = count + 1
    cands = [(a, 1, 0) for a in range(amax)] + [(a, 0, 1) for a in range(amax)] \
        + [(a, 1, 1) for a in range(amax)]
    monos, ws = _merge(cands, H, count)
    return MonomialBasis(tuple(monos), tuple(ws), True)


def g_split(H) -> tuple:
    """(g_r, g_s): how many holomorphic numerators carry y_r and y_s."""
    H = _sg(H)
    return (H.s_hat - 1) // 3, (H.r_hat - 1) // 3


def evaluate_monomial(curve: CurveModel, mono, P: CurvePoint) -> complex:
    a, er, es = mono
    x = P.x
    if er and es:
        return x ** a * complex(curve.K(x))
    return x ** a * (P.yr if er else 1) * (P.ys if es else 1)


def evaluate_basis(curve: CurveModel, basis: MonomialBasis, P: CurvePoint) -> np.ndarray:
    return np.array([evaluate_monomial(curve, m, P) for m in basis.monomials], dtype=complex)


@dataclass(frozen=True)
class DifferentialFirstKind:
    index: int          # 1..g
    numerator: tuple    # phi_hat_{index-1}
    order_at_infinity: int

    def describe(self) -> str:
        a, er, es = self.numerator
        xs = "" if a == 0 else ("x" if a == 1 else f"x^{a}")
        ys = "y_r" if er else "y_s"
        return f"nu{self.index} = {xs + '*' if xs else ''}{ys} dx/(3 y_r y_s)"


def holomorphic_basis(curve: CurveModel) -> list:
    g = curve.genus
    basis = phi_hat_basis(curve, g)
    out = []
    for i, m in enumerate(basis.monomials, start=1):
        out.append(DifferentialFirstKind(i, m, order_at_infinity_series(curve, m)))
    return out


def nu_I(curve: CurveModel, P: CurvePoint) -> np.ndarray:
    """dx-coefficients of the holomorphic differentials at an affine non-branch point."""
    basis = phi_hat_basis(curve, curve.genus)
    return evaluate_basis(curve, basis, P) / (3.0 * complex(curve.K(P.x)))


def order_at_infinity_series(curve: CurveModel, mono, order: int = 30) -> int:
    """Vanishing order at infinity of mono * dx / (3K), read off the t-series."""
    a, er, es = mono
    E = expand_at_infinity(curve, order)
    # K = y_r y_s has t-series t^-(r_hat+s_hat) * (yr * ys)
    k_series = np.convolve(E.yr, E.ys)[: order + 1]
    num = np.zeros(order + 1, dtype=complex)
    num[0] = 1.0
    lead = -3 * a
    if er:
        num = np.convolve(num, E.yr)[: order + 1]
        lead -= curve.r_hat
    if es:
        num = np.convolve(num, E.ys)[: order + 1]
        lead -= curve.s_hat
    # divide series num / k_series
    q = np.zeros(order + 1, dtype=complex)
    for n in range(order + 1):
        q[n] = (num[n] - np.dot(q[:n], k_series[n:0:-1])) / k_series[0]
    nz = np.flatnonzero(np.abs(q) > 1e-12)
    # dx = -3 t^-4 dt and the 1/3 cancels the 3
    return lead + (curve.r_hat + curve.s_hat) - 4 + int(nz[0])


def _poly_order_at(a, b, tol=1e-14):
    return a if abs(b) <= tol else 0


def differential_divisor(curve: CurveModel, mono) -> dict:
    """Divisor of mono * dx / (3K) as {label: multiplicity}; label 'inf', 'B<i>' or 'x=0'."""
    a, er, es = mono
    div = {}
    e = curve.exponents
    zero_is_branch = False
    for j, b in enumerate(curve.branch_points):
        o = 3 * _poly_order_at(a, b)
        zero_is_branch |= abs(b) <= 1e-14
        if er and es:
            o += 3 + 2 - 3
        elif er:
            o += e[j] - 1
        else:
            o += 2 - e[j]
        if o:
            div[f"B{j + 1}"] = int(o)
    if a and not zero_is_branch:
        div["x=0"] = 3 * a  # a at each of the three points over x=0
    oinf = order_at_infinity_series(curve, mono)
    if oinf:
        div["inf"] = oinf
    return div


def canonical_divisor_data(curve: CurveModel) -> list:
    """Divisors of nu^I_1..nu^I_g; each has degree 2g-2."""
    basis = phi_hat_basis(curve, curve.genus)
    out = []
    for m in basis.monomials:
        d = differential_divisor(curve, m)
        deg = sum(d.values())
        if deg != 2 * curve.genus - 2:
            raise AssertionError(f"canonical divisor degree {deg} != {2 * curve.genus - 2}")
        out.append(d)
    return out
