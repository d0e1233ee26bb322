"""Algebraic kernel Sigma(P, Q), second-kind differentials and the fundamental 2-form.

All forms are handled through their dx-coefficients.  A one-form
f(P) dx is represented by the callable f, and a two-form by the
coefficient of dx_1 (x) dx_2.

Second-kind differentials are nu^II_i = h_i dx / (3K).  Each h_i is
stored as two polynomials in x, one multiplying y_r and one multiplying
y_s.  They are extracted from the bivariate polynomial

    G(x_P, x_Q) = [3(K(x_Q) - K(x_P)) + (x_P - x_Q)(sigma_s(x_Q) + sigma_r(x_P))] / (x_P - x_Q)^2

which satisfies

    d_Q Sigma(P, Q) - d_P Sigma(Q, P)
        = [y_r,P y_s,Q G(x_P, x_Q) - y_r,Q y_s,P G(x_Q, x_P)] / (9 K_P K_Q).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import g_split, nu_I, phi_hat_basis
from .curve import CurveModel, CurvePoint


class PoleError(ValueError):
    pass


def _check_apart(P, Q, tol=1e-14):
    if P.at_infinity or Q.at_infinity:
        raise PoleError("kernel is evaluated at affine points only")
    if abs(P.x - Q.x) <= tol * max(1.0, abs(P.x)):
        raise PoleError("x_P == x_Q: kernel has a pole here")


def sigma_kernel(curve: CurveModel, P: CurvePoint, Q: CurvePoint) -> complex:
    """dx_P-coefficient of Sigma(P, Q)."""
    _check_apart(P, Q)
    d = P.x - Q.x
    KP = complex(curve.K(P.x))
    return 1.0 / (3 * d) + (P.yr * Q.ys + Q.yr * P.ys) / (3 * d * KP)


def _dy(curve, P):
    """(dy_r/dx, dy_s/dx) at an affine non-branch point."""
    K3 = 3.0 * complex(curve.K(P.x))
    return P.yr * complex(curve.sigma_r(P.x)) / K3, P.ys * complex(curve.sigma_s(P.x)) / K3


def d_sigma_dxQ(curve: CurveModel, P: CurvePoint, Q: CurvePoint) -> complex:
    """Coefficient of dx_P (x) dx_Q in d_Q Sigma(P, Q)."""
    _check_apart(P, Q)
    d = P.x - Q.x
    KP = complex(curve.K(P.x))
    dyr, dys = _dy(curve, Q)
    num = P.yr * Q.ys + Q.yr * P.ys
    dnum = P.yr * dys + dyr * P.ys
    return 1.0 / (3 * d * d) + (dnum * d + num) / (3 * d * d * KP)


# bivariate polynomials: M[a, b] is the coefficient of x_P^a x_Q^b

def _bivar_eval(M, xp, xq):
    return complex(np.polynomial.polynomial.polyval2d(xp, xq, M))


def _divide_by_diff(M):
    """Exact quotient of M(x_P, x_Q) by (x_P - x_Q)."""
    n = M.shape[0] - 1
    Q = np.zeros((n, M.shape[1] + 1), dtype=complex)
    Mx = np.zeros((n + 1, M.shape[1] + 1), dtype=complex)
    Mx[:, : M.shape[1]] = M
    carry = np.zeros(M.shape[1] + 1, dtype=complex)
    for a in range(n, 0, -1):
        # q_{a-1} = m_a + x_Q q_a
        row = Mx[a] + carry
        Q[a - 1] = row
        carry = np.roll(row, 1)
        carry[0] = 0
    rem = Mx[0] + carry
    if np.max(np.abs(rem)) > 1e-9 * max(1.0, np.max(np.abs(M))):
        raise ArithmeticError("polynomial is not divisible by x_P - x_Q")
    return Q


def _poly_to_bivar(c_lowfirst, in_p, size):
    M = np.zeros((size, size), dtype=complex)
    for k, c in enumerate(c_lowfirst):
        if in_p:
            M[k, 0] += c
        else:
            M[0, k] += c
    return M


def _mul_diff(M):
    """Multiply a bivariate polynomial by (x_P - x_Q)."""
    out = np.zeros((M.shape[0] + 1, M.shape[1] + 1), dtype=complex)
    out[1:, :-1] += M
    out[:-1, 1:] -= M
    return out


def g_polynomial(curve: CurveModel) -> np.ndarray:
    """Coefficients of G(x_P, x_Q), total degree at most g - 1."""
    n = curve.r + curve.s
    size = n + 2
    low = lambda p: np.asarray(p, dtype=complex)[::-1]
    K = low(curve.k_rs)
    kr, ks = low(curve.k_r), low(curve.k_s)
    dkr = np.polynomial.polynomial.polyder(kr) if kr.size > 1 else np.zeros(1, dtype=complex)
    dks = np.polynomial.polynomial.polyder(ks)
    P = np.polynomial.polynomial
    sig_r = P.polyadd(2 * P.polymul(dkr, ks), P.polymul(kr, dks))
    sig_s = P.polyadd(2 * P.polymul(dks, kr), P.polymul(ks, dkr))
    N = 3 * (_poly_to_bivar(K, False, size) - _poly_to_bivar(K, True, size))
    S = _poly_to_bivar(sig_s, False, size - 1) + _poly_to_bivar(sig_r, True, size - 1)
    N = N + _mul_diff(S)[:size, :size]
    G = _divide_by_diff(_divide_by_diff(N))
    return G[: n - 1 if n > 1 else 1, : n - 1 if n > 1 else 1] if n > 1 else np.zeros((1, 1), complex)


@dataclass(frozen=True, eq=False)
class DPolynomials:
    plus: np.ndarray    # D^(+)_{s,r}(x_P, x_Q)
    minus: np.ndarray   # D^(-)_{s,r}(x_P, x_Q)
    G: np.ndarray       # the polynomial that produces nu^II

    def D(self) -> np.ndarray:
        """D_{r,s}(P, Q) = D^(+)(P, Q) - D^(-)(Q, P)."""
        return self.plus - self.minus.T

    def evaluate(self, which, xp, xq):
        return _bivar_eval(getattr(self, which) if which != "D" else self.D(), xp, xq)


def _lam(poly_highfirst, j):
    """lambda_j: coefficient of x^(deg - j); lambda_0 = 1, zero outside the range."""
    return complex(poly_highfirst[j]) if 0 <= j < len(poly_highfirst) else 0j


def build_d_polynomials(curve: CurveModel) -> DPolynomials:
    """D^(+) and D^(-) from the triple-sum formulas, together with G."""
    r, s = curve.r, curve.s
    n = r + s
    size = max(n, 2) + r + s
    Dp = np.zeros((size, size), dtype=complex)
    Dm = np.zeros((size, size), dtype=complex)
    for j in range(0, n - 1):
        lj = _lam(curve.k_rs, j)
        for i in range(0, n - j - 1):
            Dp[n - j - i - 2, i] += (i + 1) * lj
            Dm[i, n - j - i - 2] += (i + 1) * lj
    for j in range(0, s - 1):
        for i in range(0, s - j - 1):
            for k in range(0, r + 1):
                Dp[s - j - i - 2, k + i] += (i + 1) * _lam(curve.k_s, j) * _lam(curve.k_r, r - k)
    for j in range(0, r - 1):
        for i in range(0, r - j - 1):
            for k in range(0, s + 1):
                Dm[k + i, r - j - i - 2] += (i + 1) * _lam(curve.k_r, j) * _lam(curve.k_s, s - k)
    return DPolynomials(Dp, Dm, g_polynomial(curve))


def appendix_identity_residual(curve: CurveModel, xp, xq) -> float:
    """|LHS - RHS| of the divided-difference identity for k_{r+s}."""
    K = curve.k_rs
    n = len(K) - 1
    lhs = ((np.polyval(K, xq) - np.polyval(K, xp)) / (xq - xp) - np.polyval(np.polyder(K), xq)) / (xq - xp)
    rhs = 0j
    for j in range(0, n - 1):
        for i in range(0, n - j - 1):
            rhs -= (i + 1) * K[j] * xp ** (n - j - i - 2) * xq ** i
    return abs(lhs - rhs) / max(1.0, abs(lhs))


@dataclass(frozen=True, eq=False)
class DifferentialSecondKind:
    """nu^II_i = (p_r(x) y_r + p_s(x) y_s) dx / (3K); p_r, p_s low-degree-first."""
    index: int
    p_r: np.ndarray
    p_s: np.ndarray

    def numerator(self, P: CurvePoint) -> complex:
        pol = np.polynomial.polynomial.polyval
        return complex(pol(P.x, self.p_r) * P.yr + pol(P.x, self.p_s) * P.ys)


def second_kind_basis(curve: CurveModel) -> list:
    g = curve.genus
    gr, gs = g_split(curve)
    basis = phi_hat_basis(curve, g)
    index = {m: i for i, m in enumerate(basis.monomials)}
    G = g_polynomial(curve)
    pr = np.zeros((g, g + 1), dtype=complex)
    ps = np.zeros((g, g + 1), dtype=complex)
    for a in range(G.shape[0]):
        for b in range(G.shape[1]):
            c = G[a, b]
            if c == 0:
                continue
            if b < gs:
                pr[index[(b, 0, 1)], a] += c
            else:
                if a >= gr:
                    raise ArithmeticError("term of G outside the holomorphic range")
                ps[index[(a, 1, 0)], b] -= c
    _normalize_top(pr, ps, index, g)
    return [DifferentialSecondKind(i + 1, pr[i], ps[i]) for i in range(g)]


def _normalize_top(pr, ps, index, g):
    """Make the numerator of nu^II_g free of holomorphic monomials.

    G fixes nu^II only up to nu^II -> nu^II + C nu^I with C symmetric.  Near
    infinity Omega(P, Q) = -nu^II_g(Q) dt + O(t), so this choice makes the
    constant term of Omega at infinity the pure pole part phi_hat_g dx/3K.
    Only row g and column g of C are used.
    """
    C = np.zeros(g, dtype=complex)
    for (a, er, es), j in index.items():
        C[j] = -(pr[g - 1, a] if er == 1 else ps[g - 1, a])
    top = [m for m, j in index.items() if j == g - 1][0]
    for (a, er, es), j in index.items():
        if er == 1:
            pr[g - 1, a] += C[j]
        else:
            ps[g - 1, a] += C[j]
    for i in range(g - 1):
        if top[1] == 1:
            pr[i, top[0]] += C[i]
        else:
            ps[i, top[0]] += C[i]


def nu_II(curve: CurveModel, P: CurvePoint, basis=None) -> np.ndarray:
    """dx-coefficients of nu^II_1..nu^II_g at P."""
    basis = basis or second_kind_basis(curve)
    K3 = 3.0 * complex(curve.K(P.x))
    return np.array([b.numerator(P) for b in basis]) / K3


def eq34_residual(curve: CurveModel, P: CurvePoint, Q: CurvePoint, basis=None) -> float:
    """Relative residual of d_Q Sigma(P,Q) - d_P Sigma(Q,P) = sum(nuI(Q)nuII(P) - nuI(P)nuII(Q))."""
    lhs = d_sigma_dxQ(curve, P, Q) - d_sigma_dxQ(curve, Q, P)
    b2 = basis or second_kind_basis(curve)
    rhs = np.dot(nu_I(curve, Q), nu_II(curve, P, b2)) - np.dot(nu_I(curve, P), nu_II(curve, Q, b2))
    return abs(lhs - rhs) / max(1.0, abs(lhs))


def fundamental_form(curve: CurveModel, P1: CurvePoint, P2: CurvePoint, basis=None) -> complex:
    """Coefficient of dx_1 (x) dx_2 in Omega(P1, P2)."""
    return d_sigma_dxQ(curve, P1, P2) + np.dot(nu_I(curve, P1), nu_II(curve, P2, basis))


def F_polynomial_value(curve: CurveModel, P1: CurvePoint, P2: CurvePoint, basis=None) -> complex:
    """F(P1, P2) = 9 (x1 - x2)^2 K_1 K_2 Omega(P1, P2)."""
    return 9 * (P1.x - P2.x) ** 2 * complex(curve.K(P1.x)) * complex(curve.K(P2.x)) \
        * fundamental_form(curve, P1, P2, basis)


def third_kind(curve: CurveModel, P: CurvePoint, P1: CurvePoint, P2: CurvePoint) -> complex:
    """dx-coefficient of Pi^{P2}_{P1}(P); residue +1 at P1 and -1 at P2."""
    return sigma_kernel(curve, P, P1) - sigma_kernel(curve, P, P2)


def small_loop_integral(curve: CurveModel, f, P0: CurvePoint, radius: float, n: int = 64):
    """Integral of f(P) dx over a circle |x - x0| = radius lifted on P0's sheet."""
    from .periods import continue_yr  # local import, periods depends on forms
    th = 2 * np.pi * np.arange(n) / n
    xs = P0.x + radius * np.exp(1j * th)
    yr = continue_yr(curve, np.concatenate([[P0.x], xs]), P0.yr)[1:]
    tot = 0j
    for x, y in zip(xs, yr):
        Q = CurvePoint(complex(x), complex(y), complex(curve.K(x)) / complex(y))
        tot += f(Q) * 1j * (x - P0.x)
    return tot * 2 * np.pi / n


def residue(curve: CurveModel, f, P0: CurvePoint, radius=None, tol=1e-10):
    """Residue of f dx at an affine non-branch point, by trapezoid rule with doubling."""
    if radius is None:
        dmin = np.min(np.abs(curve.branch_points - P0.x))
        radius = 1e-3 * dmin
    n, prev = 64, None
    while True:
        val = small_loop_integral(curve, f, P0, radius, n) / (2j * np.pi)
        if prev is not None and abs(val - prev) < tol:
            return val
        if n > 4096:
            return val
        prev, n = val, n * 2


def omega_double_integral(curve: CurveModel, path_P, path_Q, basis=None) -> complex:
    """Double integral of Omega over P in path_P and Q in path_Q.

    Paths are objects from `periods.Path`; the value is
    int_P (Sigma(P, Q_end) - Sigma(P, Q_start)) dx + sum_i int_P nu^I_i * int_Q nu^II_i.
    """
    basis = basis or second_kind_basis(curve)
    Q1, Q0 = path_Q.end_point, path_Q.start_point
    if path_P.start_point.x == path_P.end_point.x and path_P.start_point.yr == path_P.end_point.yr \
            and path_P.length() == 0:
        return 0j
    third = path_P.integrate(lambda P: np.array([sigma_kernel(curve, P, Q1) - sigma_kernel(curve, P, Q0)]))[0]
    iI = path_P.integrate(lambda P: nu_I(curve, P))
    iII = path_Q.integrate(lambda Q: nu_II(curve, Q, basis))
    return third + np.dot(iI, iII)


def omega_symmetry_residual(curve: CurveModel, P: CurvePoint, Q: CurvePoint, basis=None) -> float:
    """|Omega(P,Q) - Omega(Q,P)| relative to |Omega(P,Q)|."""
    a = fundamental_form(curve, P, Q, basis)
    b = fundamental_form(curve, Q, P, basis)
    return abs(a - b) / max(abs(a), 1e-300)


def diagonal_coefficients(curve: CurveModel, P: CurvePoint, basis=None, n: int = 64):
    """(double-pole coefficient, residue) of Omega(P, Q) dx_Q as Q -> P, in the chart x.

    Omega = dx dx' / (x - x')^2 + regular gives (1, 0).
    """
    basis = basis or second_kind_basis(curve)
    radius = 0.25 * np.min(np.abs(curve.branch_points - P.x))
    lead = small_loop_integral(curve, lambda Q: (Q.x - P.x) * fundamental_form(curve, P, Q, basis),
                               P, radius, n) / (2j * np.pi)
    res = small_loop_integral(curve, lambda Q: fundamental_form(curve, P, Q, basis),
                              P, radius, n) / (2j * np.pi)
    return complex(lead), complex(res)
