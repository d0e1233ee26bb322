"""Theta series with characteristics, the sigma function and its derivatives.

sigma(u) = c exp(-1/2 u^T eta' omega'^-1 u) theta[delta](1/2 omega'^-1 u; tau)

theta[delta](z) = sum_n exp(pi i (n+d'')^T tau (n+d'') + 2 pi i (n+d'')^T (z + d'))

Derivatives in u are exact: a lattice sum of monomials in the frequency
vectors for theta, a Hermite-type recursion for the Gaussian prefactor, and
the Leibniz rule to combine them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb, factorial

import numpy as np
import sympy

from . import kernels
from .curve import lift_x
from .periods import PeriodData
from .semigroup import u_weights


class SigmaError(ValueError):
    pass


# theta ----------------------------------------------------------------------

def _ellipsoid_offsets(Y, tol, extra=0.0):
    g = Y.shape[0]
    lam = np.linalg.eigvalsh(Y)
    if lam[0] <= 0:
        raise SigmaError("Im tau is not positive definite")
    R2 = (-np.log(tol) + extra) / np.pi
    R = np.sqrt(R2) + 0.5 * np.sqrt(g * lam[-1])
    box = int(np.ceil(R / np.sqrt(lam[0])))
    rng = np.arange(-box, box + 1)
    pts = np.array(list(itertools.product(rng, repeat=g)), dtype=float)
    q = np.einsum("mi,ij,mj->m", pts, Y, pts)
    return pts[q <= R * R]


@dataclass(eq=False)
class ThetaSeries:
    tau: np.ndarray
    tol: float = 1e-16
    extra: float = 12.0
    offsets: np.ndarray = field(init=False)

    def __post_init__(self):
        self.tau = np.asarray(self.tau, dtype=complex)
        self.Y = self.tau.imag
        self.Yinv = np.linalg.inv(self.Y)
        self.offsets = _ellipsoid_offsets(self.Y, self.tol, self.extra)

    def sums(self, z, d1, d2, L=None, alphas=None):
        """Lattice sums with monomial weights (L v)^alpha; returns (S, logscale) per point."""
        z = np.atleast_2d(np.asarray(z, dtype=complex))
        g = self.tau.shape[0]
        d1 = np.asarray(d1, dtype=float)
        d2 = np.asarray(d2, dtype=float)
        zb = z + d1
        vstar = -(self.Yinv @ zb.imag.T).T
        centers = np.round(vstar - d2)
        if L is None:
            L = np.eye(g, dtype=complex)
        if alphas is None:
            alphas = np.zeros((1, g), dtype=np.int64)
        return kernels.theta_sums(self.tau, d2, zb, centers, self.offsets, L,
                                  np.asarray(alphas, dtype=np.int64))


def theta_char(z, tau, delta, tol=1e-16) -> complex:
    """theta[delta](z; tau) with delta = (delta', delta'') stacked (length 2g)."""
    tau = np.asarray(tau, dtype=complex)
    g = tau.shape[0]
    delta = np.asarray(delta, dtype=float)
    S, sc = ThetaSeries(tau, tol).sums(np.asarray(z, dtype=complex).reshape(1, g),
                                       delta[:g], delta[g:])
    return complex(S[0, 0] * np.exp(sc[0]))


def theta_normalized(ts: ThetaSeries, z, delta):
    """|theta| divided by the sum of absolute values of the terms (scale-free zero test)."""
    g = ts.tau.shape[0]
    z = np.atleast_2d(z)
    S, sc = ts.sums(z, delta[:g], delta[g:])
    # bound: the dominant term has modulus 1 after scaling; compare with the full modulus sum
    d1, d2 = delta[:g], delta[g:]
    out = []
    for p in range(z.shape[0]):
        zb = z[p] + d1
        centers = np.round(-(ts.Yinv @ zb.imag) - d2)
        v = ts.offsets + centers + d2
        ex = (1j * np.pi * np.einsum("mi,ij,mj->m", v, ts.tau, v) + 2j * np.pi * v @ zb).real
        den = np.sum(np.exp(ex - sc[p]))
        out.append(abs(S[p, 0]) / den)
    return np.array(out)


# characteristics ------------------------------------------------------------------

def all_characteristics(g):
    for bits in itertools.product((0, 1), repeat=2 * g):
        yield np.array(bits, dtype=float) / 2


def find_characteristic(curve, pd: PeriodData, samples: int = 20, seed: int = 0, tol: float = 1e-6):
    """The half-integer delta with theta[delta] vanishing on w_s(S^{g-1} X).

    For g = 1 the only test point is w_s(empty) = w(B).  Raises if no candidate
    or more than one candidate passes.
    """
    g = curve.genus
    rng = np.random.default_rng(seed)
    Winv = np.linalg.inv(pd.omega1)
    pts = []
    n = samples if g > 1 else 1
    for _ in range(n):
        u = pd.shift.copy()
        for _k in range(g - 1):
            x = complex(rng.normal() + 1j * rng.normal())
            P = lift_x(curve, x)[rng.integers(3)]
            u = u + pd.abel.point(P)
        pts.append(0.5 * Winv @ u)
    pts = np.array(pts)
    ts = ThetaSeries(pd.tau)
    passing = []
    for d in all_characteristics(g):
        vals = theta_normalized(ts, pts, d)
        if np.max(vals) < tol:
            passing.append(d)
    if len(passing) != 1:
        raise SigmaError(f"{len(passing)} characteristics vanish on the shifted theta divisor")
    pd.delta = passing[0]
    return passing[0]


# Schur polynomials --------------------------------------------------------------------

@dataclass(frozen=True)
class SchurPolynomial:
    rows: tuple
    expr: object            # sympy expression in u1..ug
    symbols: tuple
    terms: tuple            # ((exponent tuple), coefficient as float)

    def __call__(self, u):
        u = np.asarray(u, dtype=complex)
        tot = 0j
        for ex, c in self.terms:
            tot += c * np.prod(u ** np.array(ex))
        return tot

    @property
    def weights(self):
        return u_weights(self.rows)


@lru_cache(maxsize=None)
def schur_polynomial(rows) -> SchurPolynomial:
    """S_Lambda(T) with T_{Lambda_i+g-i} = u_i and the other T_k set to 0."""
    rows = tuple(int(r) for r in rows)
    g = len(rows)
    n = rows[0] + g if rows else 1
    z = sympy.Symbol("z")
    T = sympy.symbols(f"T1:{n + 1}")
    gen = sympy.exp(sum(T[k - 1] * z ** k for k in range(1, n + 1)))
    ser = sympy.series(gen, z, 0, n + 1).removeO()
    h = [sympy.expand(ser.coeff(z, k)) for k in range(n + 1)]

    def hk(k):
        return h[k] if 0 <= k <= n else 0

    m = len(rows)
    M = sympy.Matrix(m, m, lambda i, j: hk(rows[i] - i + j))
    s = sympy.expand(M.det())
    u = sympy.symbols(f"u1:{g + 1}")
    wts = u_weights(rows)
    sub = {T[k - 1]: 0 for k in range(1, n + 1)}
    for i, w in enumerate(wts):
        sub[T[w - 1]] = u[i]
    expr = sympy.expand(s.subs(sub))
    poly = sympy.Poly(expr, *u)
    terms = tuple((tuple(int(e) for e in mon), float(c)) for mon, c in poly.terms())
    return SchurPolynomial(rows, expr, u, terms)


# sigma ---------------------------------------------------------------------------------

def _multi_indices_below(alpha):
    return list(itertools.product(*[range(a + 1) for a in alpha]))


class SigmaEvaluator:
    """sigma bound to one set of periods.

    `center` moves the expansion point: the evaluator returns sigma(u + center).
    With center = -w(B) (B the shift divisor) the Taylor expansion at u = 0
    starts with the Schur polynomial; with center = 0 it is the plain sigma.
    """

    def __init__(self, pd: PeriodData, delta=None, rows=None, tol=1e-16, center=None):
        if delta is None:
            delta = pd.delta
        if delta is None:
            raise SigmaError("characteristic not set; run find_characteristic first")
        self.pd = pd
        self.g = pd.genus
        self.delta = np.asarray(delta, dtype=float)
        self.d1, self.d2 = self.delta[: self.g], self.delta[self.g:]
        self.Winv = np.linalg.inv(pd.omega1)
        self.Q = pd.eta1 @ self.Winv
        self.Q = (self.Q + self.Q.T) / 2
        self.L = np.pi * 1j * self.Winv.T
        self.theta = ThetaSeries(pd.tau, tol)
        self.rows = tuple(rows) if rows is not None else None
        self.center = np.zeros(self.g, dtype=complex) if center is None \
            else np.asarray(center, dtype=complex)
        self.c = None

    # raw pieces
    def z_of(self, u):
        return 0.5 * (self.Winv @ np.asarray(u, dtype=complex))

    def _theta_derivs(self, U, alphas):
        Z = np.array([self.z_of(u) for u in U])
        S, sc = self.theta.sums(Z, self.d1, self.d2, self.L, alphas)
        return S, sc

    def _gauss_table(self, u, alpha):
        """Values H_gamma(u) for all gamma <= alpha, with d^gamma e^f = e^f H_gamma."""
        v = -self.Q @ u
        H = {tuple([0] * self.g): 1.0 + 0j}
        order = sorted(_multi_indices_below(alpha), key=sum)
        for gam in order:
            if gam in H:
                continue
            i = next(k for k in range(self.g) if gam[k] > 0)
            base = list(gam)
            base[i] -= 1
            base = tuple(base)
            val = v[i] * H[base]
            for j in range(self.g):
                if base[j] > 0:
                    lower = list(base)
                    lower[j] -= 1
                    val += base[j] * (-self.Q[i, j]) * H[tuple(lower)]
            H[gam] = val
        return H

    def raw_partials(self, u, alphas):
        """Derivatives of exp(-u Q u / 2) theta(z(u)) for each multi-index (no constant c)."""
        u = np.asarray(u, dtype=complex)
        alphas = [tuple(a) for a in alphas]
        need = sorted({b for a in alphas for b in _multi_indices_below(a)})
        S, sc = self._theta_derivs([u], np.array(need, dtype=np.int64))
        th = {b: S[0, k] for k, b in enumerate(need)}
        f = -0.5 * u @ self.Q @ u
        pref = np.exp(f + sc[0])
        out = []
        for a in alphas:
            H = self._gauss_table(u, a)
            tot = 0j
            for b in _multi_indices_below(a):
                coef = np.prod([comb(a[i], b[i]) for i in range(self.g)])
                gam = tuple(a[i] - b[i] for i in range(self.g))
                tot += coef * H[gam] * th[b]
            out.append(pref * tot)
        return np.array(out)

    # calibrated sigma
    def calibrate(self, rows=None):
        """Fix c from one Taylor coefficient of the Schur polynomial."""
        rows = tuple(rows) if rows is not None else self.rows
        if rows is None:
            raise SigmaError("need the Young diagram to calibrate")
        self.rows = rows
        S = schur_polynomial(rows)
        ex, coef = max(S.terms, key=lambda t: abs(t[1]))
        wts = np.array(u_weights(rows))
        lower = [a for a in itertools.product(*[range(sum(rows) // w + 1) for w in wts])
                 if int(np.dot(a, wts)) < sum(rows)]
        vals = self.raw_partials(self.center, [ex] + lower)
        taylor = vals[0] / np.prod([factorial(e) for e in ex])
        low = [abs(v) / np.prod([factorial(e) for e in a]) for a, v in zip(lower, vals[1:])]
        self.lower_weight_ratio = max(low) / abs(taylor) if low and abs(taylor) > 0 else 0.0
        if abs(taylor) == 0 or self.lower_weight_ratio > 1e-6:
            raise SigmaError("Taylor expansion at the center has terms below the Schur weight "
                             f"(ratio {self.lower_weight_ratio:.3g}); no constant c normalizes it")
        self.c = coef / taylor
        self.calibration_monomial = ex
        return self.c

    def _need_c(self):
        if self.c is None:
            raise SigmaError("sigma is not calibrated; call calibrate()")

    def sigma(self, u) -> complex:
        self._need_c()
        u = np.asarray(u, dtype=complex) + self.center
        return complex(self.c * self.raw_partials(u, [tuple([0] * self.g)])[0])

    def partial(self, indices, u) -> complex:
        """sigma_{i1...in}(u) with 1-based indices."""
        self._need_c()
        alpha = [0] * self.g
        for i in indices:
            alpha[i - 1] += 1
        u = np.asarray(u, dtype=complex) + self.center
        return complex(self.c * self.raw_partials(u, [tuple(alpha)])[0])

    def partials(self, alphas, u) -> np.ndarray:
        """Several derivatives at once; alphas are multi-indices."""
        self._need_c()
        u = np.asarray(u, dtype=complex) + self.center
        return self.c * self.raw_partials(u, alphas)

    def gradient_hessian(self, u):
        """(sigma, gradient, Hessian) at u; uses c when it is set."""
        g = self.g
        idx = [tuple([0] * g)]
        idx += [tuple(int(k == i) for k in range(g)) for i in range(g)]
        pairs = [(i, j) for i in range(g) for j in range(i, g)]
        idx += [tuple(int(k == i) + int(k == j) for k in range(g)) for i, j in pairs]
        vals = self.raw_partials(np.asarray(u, dtype=complex) + self.center, idx)
        if self.c is not None:
            vals = vals * self.c
        s0 = vals[0]
        grad = vals[1: g + 1]
        H = np.zeros((g, g), dtype=complex)
        for (i, j), v in zip(pairs, vals[g + 1:]):
            H[i, j] = H[j, i] = v
        return s0, grad, H

    def wp_matrix(self, u, tol=1e-12):
        """wp_ij = -d_i d_j log sigma; raises on the theta divisor."""
        s0, grad, H = self.gradient_hessian(u)
        scale = np.max(np.abs(grad)) + abs(s0) + 1e-300
        if abs(s0) < tol * scale:
            raise SigmaError("u lies on the zero set of sigma")
        return -(H * s0 - np.outer(grad, grad)) / s0 ** 2

    def wp(self, i, j, u):
        return complex(self.wp_matrix(u)[i - 1, j - 1])

    # quasi-periodicity
    def L_form(self, u, v1, v2):
        return 2 * np.asarray(u) @ (self.pd.eta1 @ np.asarray(v1) + self.pd.eta2 @ np.asarray(v2))

    def chi(self, l1, l2):
        l1 = np.asarray(l1, dtype=float)
        l2 = np.asarray(l2, dtype=float)
        return np.exp(1j * np.pi * (2 * (l1 @ self.d2 - l2 @ self.d1) + l1 @ l2))

    def quasi_periodicity_factor(self, u, l1, l2, sign=-1):
        """exp(sign * L(u + l/2, l)) chi(l) for the uncentered sigma.

        sign = -1 is the factor implied by the Gaussian exp(-u eta' omega'^-1 u / 2)
        together with the Legendre relation; sign = +1 is kept for comparison.
        """
        ell = self.pd.lattice_vector(l1, l2)
        return np.exp(sign * self.L_form(np.asarray(u) + 0.5 * ell, l1, l2)) * self.chi(l1, l2)

    def quasi_periodicity_residual(self, u, l1, l2, sign=-1) -> float:
        """|sigma(u+l) - sigma(u) exp(-L(u+l/2, l)) chi(l)| / |sigma(u+l)| (uncentered sigma)."""
        u = np.asarray(u, dtype=complex)
        ell = self.pd.lattice_vector(l1, l2)
        c = self.c if self.c is not None else 1.0
        s_u = c * self.raw_partials(u, [tuple([0] * self.g)])[0]
        s_ul = c * self.raw_partials(u + ell, [tuple([0] * self.g)])[0]
        rhs = s_u * self.quasi_periodicity_factor(u, l1, l2, sign)
        return abs(s_ul - rhs) / max(abs(s_ul), 1e-300)

    def scaled(self, u, eps):
        """sigma(eps^wt o u) / eps^|Lambda|."""
        wts = np.array(u_weights(self.rows))
        return self.sigma(np.asarray(u) * eps ** wts) / eps ** sum(self.rows)


def build_sigma(curve, pd: PeriodData, seed: int = 0, centered: bool = False,
                calibrate: bool = True) -> SigmaEvaluator:
    """Characteristic search, then Schur calibration of c.

    For r > 0 the plain sigma does not vanish at 0 and cannot be calibrated;
    with centered=True the expansion point is moved to -w(B), where it can.
    If calibration is impossible, c is set from the value at the center
    (sigma(center) = 1) and `calibrated` is False.
    """
    from .semigroup import young_diagram
    if pd.delta is None:
        find_characteristic(curve, pd, seed=seed)
    center = -pd.shift if centered else None
    ev = SigmaEvaluator(pd, rows=young_diagram(curve.semigroup).rows, center=center)
    ev.calibrated = False
    if calibrate:
        try:
            ev.calibrate()
            ev.calibrated = True
        except SigmaError:
            ev.c = 1.0 / ev.raw_partials(ev.center, [tuple([0] * ev.g)])[0]
    return ev
