"""Cyclic trigonal curves y_r^3 = k_r^2 k_s, y_s^3 = k_s^2 k_r.

Here y_r and y_s are the functions with pole orders r_hat = 2r+s and
s_hat = r+2s at the single point at infinity.  The polynomial k_s has
roots b_1..b_s and k_r has roots b_{s+1}..b_{s+r}.  Their product K
satisfies y_r y_s = K(x).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .semigroup import NumericalSemigroup, build_semigroup

ZETA3 = np.exp(2j * np.pi / 3)


class CurveError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class CurveModel:
    semigroup: NumericalSemigroup
    branch_points: np.ndarray
    k_r: np.ndarray  # monic, highest degree first
    k_s: np.ndarray
    k_rs: np.ndarray
    _derivs: dict = field(default_factory=dict, repr=False)

    @property
    def r(self) -> int:
        return self.semigroup.r

    @property
    def s(self) -> int:
        return self.semigroup.s

    @property
    def genus(self) -> int:
        return self.semigroup.genus

    @property
    def r_hat(self) -> int:
        return self.semigroup.r_hat

    @property
    def s_hat(self) -> int:
        return self.semigroup.s_hat

    @property
    def exponents(self) -> np.ndarray:
        """Exponent e_i of (x - b_i) in y_r^3: 1 for roots of k_s, 2 for roots of k_r."""
        return np.array([1] * self.s + [2] * self.r)

    def lambda_coefficients(self):
        """(lambda^(r), lambda^(s), lambda^(r+s)) without the leading 1; wt(lambda_i) = 3i."""
        return self.k_r[1:].copy(), self.k_s[1:].copy(), self.k_rs[1:].copy()

    # polynomial evaluations
    def kr(self, x):
        return np.polyval(self.k_r, x)

    def ks(self, x):
        return np.polyval(self.k_s, x)

    def K(self, x):
        return np.polyval(self.k_rs, x)

    def F_r(self, x):
        """y_r^3 = k_r^2 k_s."""
        return self.kr(x) ** 2 * self.ks(x)

    def F_s(self, x):
        """y_s^3 = k_s^2 k_r."""
        return self.ks(x) ** 2 * self.kr(x)

    def _deriv(self, name):
        if name not in self._derivs:
            self._derivs[name] = np.polyder(getattr(self, name)) if len(getattr(self, name)) > 1 \
                else np.zeros(1, dtype=complex)
        return self._derivs[name]

    def dkr(self, x):
        return np.polyval(self._deriv("k_r"), x)

    def dks(self, x):
        return np.polyval(self._deriv("k_s"), x)

    def dK(self, x):
        return np.polyval(self._deriv("k_rs"), x)

    def sigma_r(self, x):
        """3K * dlog(y_r)/dx = 2 k_r' k_s + k_r k_s'."""
        return 2 * self.dkr(x) * self.ks(x) + self.kr(x) * self.dks(x)

    def sigma_s(self, x):
        """3K * dlog(y_s)/dx = 2 k_s' k_r + k_s k_r'."""
        return 2 * self.dks(x) * self.kr(x) + self.ks(x) * self.dkr(x)

    def scale(self) -> float:
        return float(max(1.0, np.max(np.abs(self.branch_points))))


@dataclass(frozen=True)
class CurvePoint:
    x: complex = 0j
    yr: complex = 0j
    ys: complex = 0j
    at_infinity: bool = False
    branch_index: int | None = None  # 0-based index of B_i when ramified

    @property
    def is_branch(self) -> bool:
        return self.branch_index is not None


INFINITY = CurvePoint(at_infinity=True)


def build_curve(r: int, s: int, b) -> CurveModel:
    H = build_semigroup(r, s)
    b = np.asarray(b, dtype=complex).ravel()
    if b.size != r + s:
        raise CurveError(f"expected {r + s} branch points, got {b.size}")
    ok, pair = _distinct(b)
    if not ok:
        raise CurveError(f"branch points {pair[0] + 1} and {pair[1] + 1} coincide")
    k_s = np.poly(b[:s]).astype(complex)
    k_r = np.poly(b[s:]).astype(complex) if r else np.ones(1, dtype=complex)
    k_rs = np.convolve(k_r, k_s)
    return CurveModel(H, b, k_r, k_s, k_rs)


def _distinct(b, rtol=1e-12):
    sc = max(1.0, float(np.max(np.abs(b)))) if b.size else 1.0
    for i in range(b.size):
        for j in range(i + 1, b.size):
            if abs(b[i] - b[j]) <= rtol * sc:
                return False, (i, j)
    return True, None


def check_nonsingular(curve_or_points, r=None, s=None):
    """Return (True, None) if the branch points are distinct, else (False, (i, j)) 1-based."""
    b = curve_or_points.branch_points if isinstance(curve_or_points, CurveModel) \
        else np.asarray(curve_or_points, dtype=complex)
    ok, pair = _distinct(b)
    return (True, None) if ok else (False, (pair[0] + 1, pair[1] + 1))


def branch_point(curve: CurveModel, i: int) -> CurvePoint:
    """B_i for 1-based i."""
    return CurvePoint(complex(curve.branch_points[i - 1]), 0j, 0j, branch_index=i - 1)


def find_branch_index(curve: CurveModel, x, rtol=1e-12):
    d = np.abs(curve.branch_points - x)
    k = int(np.argmin(d))
    return k if d[k] <= rtol * curve.scale() else None


def point_from_yr(curve: CurveModel, x, yr) -> CurvePoint:
    x = complex(x)
    yr = complex(yr)
    return CurvePoint(x, yr, complex(curve.K(x)) / yr)


def lift_x(curve: CurveModel, x) -> tuple:
    """The three points over x, sorted by arg(y_r).  Over b_i all three coincide with B_i."""
    x = complex(x)
    k = find_branch_index(curve, x)
    if k is not None:
        B = branch_point(curve, k + 1)
        return (B, B, B)
    rho = complex(curve.F_r(x)) ** (1.0 / 3.0)
    pts = [point_from_yr(curve, x, rho * ZETA3 ** j) for j in range(3)]
    return tuple(sorted(pts, key=lambda P: np.angle(P.yr)))


def cyclic_action(P: CurvePoint, power: int = 1) -> CurvePoint:
    if P.at_infinity or P.is_branch:
        return P
    z = ZETA3 ** (power % 3)
    return CurvePoint(P.x, P.yr * z, P.ys * z * z)


def relation_residuals(curve: CurveModel, P: CurvePoint) -> np.ndarray:
    """Scale-relative residuals of f_{2r}, f_{r+s}, f_{2s} at an affine point."""
    x, yr, ys = P.x, P.yr, P.ys
    kr, ks = curve.kr(x), curve.ks(x)
    res = np.array([abs(yr * yr - ys * kr),
                    abs(yr * ys - kr * ks),
                    abs(ys * ys - yr * ks)])
    sc = max(1.0, abs(x)) ** (2 * curve.s_hat / 3.0)
    return res / sc


def on_curve(curve: CurveModel, P: CurvePoint, tol=1e-10) -> bool:
    if P.at_infinity:
        return True
    return bool(np.all(relation_residuals(curve, P) < tol))


def _binomial_product_series(roots, powers, order):
    """Coefficients c_0..c_order of prod (1 - b w)^p as a series in w."""
    c = np.zeros(order + 1, dtype=complex)
    c[0] = 1.0
    for b, p in zip(roots, powers):
        f = np.zeros(order + 1, dtype=complex)
        f[0] = 1.0
        for k in range(1, order + 1):
            f[k] = f[k - 1] * (p - k + 1) / k * (-b)
        c = np.convolve(c, f)[: order + 1]
    return c


@dataclass(frozen=True, eq=False)
class LocalExpansion:
    """Laurent series at infinity in t with x = t^-3 exactly.

    `yr[k]` is the coefficient of t^(k - r_hat) and `ys[k]` that of
    t^(k - s_hat), for k = 0..order.
    """
    order: int
    r_hat: int
    s_hat: int
    yr: np.ndarray
    ys: np.ndarray

    def pole_orders(self):
        lead = lambda c: int(np.flatnonzero(np.abs(c) > 0)[0])
        return (3, self.r_hat - lead(self.yr), self.s_hat - lead(self.ys))

    def evaluate(self, t):
        t = complex(t)
        pw = t ** np.arange(self.order + 1)
        return (t ** -3, t ** -self.r_hat * np.dot(self.yr, pw),
                t ** -self.s_hat * np.dot(self.ys, pw))


def expand_at_infinity(curve: CurveModel, order: int) -> LocalExpansion:
    """Expansion in t with x = t^-3; y_r = t^-r_hat prod (1 - b_i t^3)^(e_i/3)."""
    if order < 1:
        raise ValueError("order must be >= 1")
    e = curve.exponents
    nw = order // 3
    cr = _binomial_product_series(curve.branch_points, e / 3.0, nw)
    cs = _binomial_product_series(curve.branch_points, (3 - e) / 3.0, nw)
    yr = np.zeros(order + 1, dtype=complex)
    ys = np.zeros(order + 1, dtype=complex)
    yr[::3] = cr[: len(yr[::3])]
    ys[::3] = cs[: len(ys[::3])]
    return LocalExpansion(order, curve.r_hat, curve.s_hat, yr, ys)


def infinity_chart(curve: CurveModel, t) -> CurvePoint:
    """Point with local parameter t near infinity, computed exactly from the product formula."""
    t = complex(t)
    w = t ** 3
    e = curve.exponents
    b = curve.branch_points
    gr = np.prod((1 - b * w) ** (e / 3.0))
    gs = np.prod((1 - b * w) ** ((3 - e) / 3.0))
    return CurvePoint(1 / w, t ** -curve.r_hat * gr, t ** -curve.s_hat * gs)
