"""Paths on the curve, homology basis, period matrices and the Abel map.

Paths are polylines in the x-plane.  y_r is followed by cube-root
continuation with step length tied to the distance from the nearest
branch point, and integrals use 16-point Gauss-Legendre panels.

Homology: from a base point x_h outside the branch locus, loop gamma_i
runs along a spoke to a small circle around b_i.  The loops whose lift
closes on the surface are generated by the words
gamma_1^k gamma_j gamma_1^-p (Reidemeister-Schreier for the cyclic
cover).  Their intersection numbers are counted from signed crossings
of slightly translated copies.  An integer symplectic reduction then
gives alpha and beta cycles.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .basis import phi_hat_basis
from .curve import (ZETA3, CurveModel, CurvePoint, _binomial_product_series,
                    infinity_chart)
from .forms import second_kind_basis

GL_X, GL_W = np.polynomial.legendre.leggauss(16)
STEP = 0.2


class PathError(RuntimeError):
    pass


class HomologyError(RuntimeError):
    pass


# continuation ---------------------------------------------------------------

def continue_yr(curve: CurveModel, xs, yr0) -> np.ndarray:
    """y_r along the samples xs (xs[0] is the start, yr0 the value there)."""
    xs = np.asarray(xs, dtype=complex)
    return kernels.continue_roots(curve.F_r(xs), complex(yr0))


def _subdivide(curve, a, b, step=STEP):
    """Points a = p_0, ..., p_m = b with |p_{k+1}-p_k| <= step * dist(p_k, branch)."""
    pts = [a]
    x = a
    L = abs(b - a)
    if L == 0:
        return np.array(pts)
    u = (b - a) / L
    done = 0.0
    bp = curve.branch_points
    while done < L:
        d = float(np.min(np.abs(bp - x)))
        if d < 1e-12 * curve.scale():
            raise PathError("path runs through a branch point")
        h = min(step * d, L - done)
        done += h
        x = a + u * done if done < L else b
        pts.append(x)
    return np.array(pts)


@dataclass(eq=False)
class Path:
    """A lifted polyline; holds quadrature nodes and continued y_r values."""
    curve: CurveModel
    nodes: np.ndarray      # x at quadrature nodes
    weights: np.ndarray    # dx-weights
    yr: np.ndarray         # y_r at nodes
    start_point: CurvePoint
    end_point: CurvePoint
    samples: np.ndarray    # x along the polyline (subsegment endpoints)
    sample_yr: np.ndarray

    @property
    def ys(self):
        return self.curve.K(self.nodes) / self.yr

    def length(self) -> float:
        return float(np.sum(np.abs(np.diff(self.samples)))) if self.samples.size > 1 else 0.0

    def integrate_arrays(self, fn) -> np.ndarray:
        """fn(x, yr, ys) -> (k, N) dx-coefficients; returns the k integrals."""
        if self.nodes.size == 0:
            return np.zeros(np.shape(fn(np.zeros(1, complex), np.ones(1, complex), np.ones(1, complex)))[0],
                            dtype=complex)
        return fn(self.nodes, self.yr, self.ys) @ self.weights

    def integrate(self, func) -> np.ndarray:
        """func(CurvePoint) -> vector; pointwise version for ad hoc integrands."""
        tot = None
        for x, y, ys, w in zip(self.nodes, self.yr, self.ys, self.weights):
            v = np.asarray(func(CurvePoint(complex(x), complex(y), complex(ys))), dtype=complex) * w
            tot = v if tot is None else tot + v
        return tot if tot is not None else np.zeros(1, dtype=complex)


def build_path(curve: CurveModel, vertices, yr0, step=STEP) -> Path:
    vertices = np.asarray(vertices, dtype=complex)
    seq = [vertices[0]]
    kinds = [0]  # 0 subsegment endpoint, 1 quadrature node
    wts = []
    samples = [vertices[0]]
    for a, b in zip(vertices[:-1], vertices[1:]):
        pts = _subdivide(curve, a, b, step)
        for p, q in zip(pts[:-1], pts[1:]):
            half = (q - p) / 2
            mid = (q + p) / 2
            seq.extend(mid + half * GL_X)
            kinds.extend([1] * GL_X.size)
            wts.extend(half * GL_W)
            seq.append(q)
            kinds.append(0)
            samples.append(q)
    seq = np.array(seq)
    kinds = np.array(kinds)
    y = continue_yr(curve, seq, yr0)
    nodes = seq[kinds == 1]
    ynodes = y[kinds == 1]
    ysamp = y[kinds == 0]
    K = curve.K
    start = CurvePoint(complex(seq[0]), complex(y[0]), complex(K(seq[0]) / y[0]))
    end = CurvePoint(complex(seq[-1]), complex(y[-1]), complex(K(seq[-1]) / y[-1]))
    return Path(curve, nodes, np.array(wts, dtype=complex), ynodes, start, end,
                np.array(samples), ysamp)


def branch_terminal(curve: CurveModel, xa, yra, i, panels=2) -> Path:
    """Path from (xa, yra) straight into the branch point b_i (0-based i).

    Uses x = b + (xa - b) v^3 so the integrands of both kinds are smooth in v.
    """
    b = curve.branch_points[i]
    e = curve.exponents[i]
    c = xa - b
    vs, ws = [], []
    for k in range(panels):
        lo, hi = k / panels, (k + 1) / panels
        vs.extend((hi + lo) / 2 + (hi - lo) / 2 * GL_X)
        ws.extend((hi - lo) / 2 * GL_W)
    vs = np.array(vs)[::-1]  # from v near 1 down to 0
    ws = np.array(ws)[::-1]
    x = b + c * vs ** 3
    xx = np.concatenate([[xa], x])
    U = kernels.continue_roots(curve.F_r(xx) / (xx - b) ** e, yra / _ucoef(c, e))
    # y_r = (x - b)^(e/3) U with (x - b)^(e/3) := c^(e/3) v^e along this segment
    yr = _ucoef(c, e) * vs ** e * U[1:]
    # integral from xa (v=1) to b (v=0): -int_0^1 f 3 c v^2 dv
    w = -3 * c * vs ** 2 * ws
    start = CurvePoint(complex(xa), complex(yra), complex(curve.K(xa) / yra))
    end = CurvePoint(complex(b), 0j, 0j, branch_index=int(i))
    return _TerminalPath(curve, x, w, yr, start, end, np.array([xa, b]), np.array([yra, 0j]),
                         vs=vs, cpow=_ucoef(c, e), Uvals=U[1:], e=int(e), b=b)


def _ucoef(c, e):
    return complex(c) ** (e / 3.0)


@dataclass(eq=False)
class _TerminalPath(Path):
    vs: np.ndarray = None
    cpow: complex = 0j
    Uvals: np.ndarray = None
    e: int = 1
    b: complex = 0j

    @property
    def ys(self):
        # y_s = K / y_r with K = (x - b) kred and x - b = c v^3, no cancellation
        c = self.samples[0] - self.b
        kred = np.polyval(np.polydiv(self.curve.k_rs, np.array([1, -self.b]))[0], self.nodes)
        return c * self.vs ** (3 - self.e) * kred / (self.cpow * self.Uvals)


# differentials as arrays -------------------------------------------------------

@dataclass(eq=False)
class DifferentialTable:
    """Vectorized dx-coefficients of nu^I_1..g and nu^II_1..g."""
    curve: CurveModel
    first: list = field(default_factory=list)   # (a, er) per nu^I
    second: list = field(default_factory=list)  # DifferentialSecondKind
    chars: np.ndarray = None                     # character c: y_r -> zeta^k gives factor zeta^(k c)

    @classmethod
    def build(cls, curve):
        basis = phi_hat_basis(curve, curve.genus)
        first = [(m[0], m[1]) for m in basis.monomials]
        second = second_kind_basis(curve)
        ch = [1 if er else 2 for _, er in first]
        for h in second:
            ch.append(1 if np.any(h.p_r != 0) or not np.any(h.p_s != 0) else 2)
        return cls(curve, first, second, np.array(ch))

    def __call__(self, x, yr, ys):
        x = np.asarray(x, dtype=complex)
        K3 = 3.0 * self.curve.K(x)
        rows = []
        for a, er in self.first:
            rows.append(x ** a * (yr if er else ys) / K3)
        pv = np.polynomial.polynomial.polyval
        for h in self.second:
            rows.append((pv(x, h.p_r) * yr + pv(x, h.p_s) * ys) / K3)
        return np.array(rows)

    def first_kind(self, x, yr, ys):
        return self(x, yr, ys)[: len(self.first)]


# base point and loops --------------------------------------------------------------

def choose_base_point(curve: CurveModel, n_angles=72):
    b = curve.branch_points
    c = b.mean()
    Rb = float(np.max(np.abs(b - c))) if b.size > 1 else 1.0
    Rb = max(Rb, 1e-3)
    R = 1.5 * Rb + 0.5 * Rb
    best, bestval = None, -1.0
    for th in 2 * np.pi * np.arange(n_angles) / n_angles + 0.0123:
        xh = c + R * np.exp(1j * th)
        worst = np.inf
        for i, bi in enumerate(b):
            for j, bj in enumerate(b):
                if i != j:
                    worst = min(worst, _dist_point_segment(bj, xh, bi))
        worst = min(worst, float(np.min(np.abs(b - xh))))
        if worst > bestval:
            best, bestval = xh, worst
    return complex(best)


def _dist_point_segment(p, a, b):
    d = b - a
    t = np.clip(((p - a) * np.conj(d)).real / abs(d) ** 2, 0, 1)
    return float(abs(p - (a + t * d)))


def loop_radii(curve: CurveModel):
    b = curve.branch_points
    if b.size == 1:
        return np.array([0.5])
    D = np.abs(b[:, None] - b[None, :]) + np.diag(np.full(b.size, np.inf))
    return 0.3 * D.min(axis=1)


def loop_vertices(curve: CurveModel, xh, i, rho, ngon=24):
    """Spoke from xh to the circle around b_i, a CCW polygon, and back."""
    b = curve.branch_points[i]
    u = (xh - b) / abs(xh - b)
    th0 = np.angle(u)
    circle = b + rho * np.exp(1j * (th0 + 2 * np.pi * np.arange(ngon + 1) / ngon))
    return np.concatenate([[xh], circle, [xh]])


def monodromy(curve: CurveModel, vertices) -> tuple:
    """Sheet permutation at vertices[0] after following the closed polyline."""
    lifts = principal_lifts(curve, vertices[0])
    perm = []
    for y0 in lifts:
        p = build_path(curve, vertices, y0)
        perm.append(int(np.argmin(np.abs(lifts - p.end_point.yr))))
    return tuple(perm)


def principal_lifts(curve, x):
    y0 = complex(curve.F_r(x)) ** (1.0 / 3.0)
    return y0 * ZETA3 ** np.arange(3)


# symplectic reduction ---------------------------------------------------------------

def symplectic_reduction(A):
    """Integer change of basis bringing the alternating matrix A to canonical form.

    Returns (alpha_rows, beta_rows): integer combinations with
    <alpha_i, beta_j> = delta_ij and all other pairings zero.  Vectors in
    the radical are dropped.
    """
    A = np.array(A, dtype=object)
    N = A.shape[0]
    if not np.array_equal(A, -A.T):
        raise HomologyError("intersection matrix is not antisymmetric")
    V = np.eye(N, dtype=object)
    A = A.copy()

    def addto(k, j, q):
        # v_k <- v_k + q v_j  (congruence row/column operation)
        V[k] += q * V[j]
        A[k, :] += q * A[j, :]
        A[:, k] += q * A[:, j]

    remaining = list(range(N))
    alphas, betas = [], []
    for _ in range(10 * N * N + 100):
        sub = [(abs(A[i, j]), i, j) for i in remaining for j in remaining if A[i, j] != 0]
        if not sub:
            break
        d, i, j = min(sub)
        if d == 1:
            if A[i, j] == -1:
                i, j = j, i
            for k in remaining:
                if k in (i, j):
                    continue
                aki, akj = A[k, i], A[k, j]
                if akj:
                    addto(k, i, -akj)
                if aki:
                    addto(k, j, aki)
            alphas.append(V[i].copy())
            betas.append(V[j].copy())
            remaining = [k for k in remaining if k not in (i, j)]
            continue
        # reduce the pivot size
        changed = False
        for k in remaining:
            if k != j and A[i, k] % A[i, j]:
                addto(k, j, -(A[i, k] // A[i, j]))
                changed = True
                break
        if changed:
            continue
        for k in remaining:
            for l in remaining:
                if A[k, l] % d:
                    addto(i, k, 1)
                    changed = True
                    break
            if changed:
                break
        if not changed:
            raise HomologyError("intersection form is not unimodular on the generated lattice")
    return np.array(alphas, dtype=np.int64), np.array(betas, dtype=np.int64)


# the surface -----------------------------------------------------------------------

@dataclass(eq=False)
class Homology:
    curve: CurveModel
    base: complex
    radii: np.ndarray
    loops: list          # Path per branch point, starting on sheet 0
    monodromies: np.ndarray
    loop_integrals: np.ndarray  # (2g, n) integrals of nu^I, nu^II over sheet-0 loops
    words: list          # list of [(i, +-1), ...]
    word_integrals: np.ndarray  # (2g, N)
    intersection: np.ndarray
    alpha: np.ndarray    # (g, N) integer rows
    beta: np.ndarray
    table: DifferentialTable

    @property
    def y_base(self):
        return complex(self.curve.F_r(self.base)) ** (1.0 / 3.0)

    def word_integral(self, word, values=None, start_sheet=0):
        vals = self.loop_integrals if values is None else values
        ch = self.table.chars[: vals.shape[0]]
        k = start_sheet
        tot = np.zeros(vals.shape[0], dtype=complex)
        for i, sgn in word:
            m = self.monodromies[i]
            if sgn > 0:
                tot += ZETA3 ** (k * ch) * vals[:, i]
                k += m
            else:
                k -= m
                tot -= ZETA3 ** (k * ch) * vals[:, i]
        return tot


def _word_polyline(hom_loops, mono, word, start_sheet=0):
    xs, ys = [], []
    k = start_sheet
    for i, sgn in word:
        L = hom_loops[i]
        if sgn > 0:
            xs.append(L.samples)
            ys.append(L.sample_yr * ZETA3 ** k)
            k += mono[i]
        else:
            k -= mono[i]
            xs.append(L.samples[::-1])
            ys.append(L.sample_yr[::-1] * ZETA3 ** k)
    return np.concatenate(xs), np.concatenate(ys)


def intersection_number(c1, c2, eps1, eps2) -> int:
    """Signed crossings of two lifted closed polylines (x, y_r) after translation."""
    x1, y1 = c1
    x2, y2 = c2
    x1 = x1 + eps1
    x2 = x2 + eps2
    i, j, s, t, sg = kernels.segment_crossings(x1[:-1], x1[1:], x2[:-1], x2[1:])
    total = 0
    for a, b, sa, tb, sign in zip(i, j, s, t, sg):
        ya = y1[a] + sa * (y1[a + 1] - y1[a])
        yb = y2[b] + tb * (y2[b + 1] - y2[b])
        if abs(ya - yb) < 0.5 * max(abs(ya), abs(yb)):
            total += int(sign)
    return total


def compute_homology(curve: CurveModel, seed: int = 0) -> Homology:
    n = curve.branch_points.size
    xh = choose_base_point(curve)
    radii = loop_radii(curve)
    table = DifferentialTable.build(curve)
    y0 = complex(curve.F_r(xh)) ** (1.0 / 3.0)
    loops, mono, vals = [], [], []
    for i in range(n):
        P = build_path(curve, loop_vertices(curve, xh, i, radii[i]), y0)
        loops.append(P)
        ratio = P.end_point.yr / y0
        m = int(np.argmin(np.abs(ZETA3 ** np.arange(3) - ratio)))
        if abs(ZETA3 ** m - ratio) > 1e-6:
            raise HomologyError("loop continuation did not return to a sheet")
        mono.append(m)
        vals.append(P.integrate_arrays(table))
    mono = np.array(mono)
    if np.any(mono == 0):
        raise HomologyError("a branch point loop has trivial monodromy")
    vals = np.array(vals).T
    m1 = int(mono[0])
    words = []
    for j in range(1, n):
        for k in range(3):
            p = ((k * m1 + int(mono[j])) * m1) % 3
            words.append([(0, 1)] * k + [(j, 1)] + [(0, -1)] * p)
    hom = Homology(curve, xh, radii, loops, mono, vals, words, None, None, None, None, table)
    wint = np.array([hom.word_integral(w) for w in words]).T
    polys = [_word_polyline(loops, mono, w) for w in words]
    rng = np.random.default_rng(seed)
    scale = 1e-3 * float(np.min(radii))
    eps = scale * (rng.normal(size=len(words)) + 1j * rng.normal(size=len(words)))
    N = len(words)
    A = np.zeros((N, N), dtype=np.int64)
    for a in range(N):
        for b in range(a + 1, N):
            A[a, b] = intersection_number(polys[a], polys[b], eps[a], eps[b])
            A[b, a] = -A[a, b]
    alpha, beta = symplectic_reduction(A)
    if alpha.shape[0] != curve.genus:
        raise HomologyError(f"found {alpha.shape[0]} symplectic pairs, expected genus {curve.genus}")
    hom.word_integrals = wint
    hom.intersection = A
    hom.alpha, hom.beta = alpha, beta
    return hom


# periods ------------------------------------------------------------------------------

def canonical_J(g):
    Z = np.zeros((g, g))
    I = np.eye(g)
    return np.block([[Z, -I], [I, Z]])


@dataclass(eq=False)
class PeriodData:
    omega1: np.ndarray   # omega'
    omega2: np.ndarray   # omega''
    eta1: np.ndarray     # eta'
    eta2: np.ndarray     # eta''
    tau: np.ndarray
    homology: Homology = None
    shift: np.ndarray = None   # w(B_{s+1} + ... + B_{s+r})
    delta: np.ndarray = None   # (delta', delta'') stacked, length 2g
    _abel: "AbelMap" = None

    @property
    def genus(self):
        return self.omega1.shape[0]

    @property
    def curve(self):
        return self.homology.curve

    def M(self):
        return np.block([[2 * self.omega1, 2 * self.omega2], [2 * self.eta1, 2 * self.eta2]])

    def legendre_residual(self) -> float:
        J = canonical_J(self.genus)
        M = self.M()
        return float(np.max(np.abs(M @ J @ M.T - 2j * np.pi * J)))

    def lattice_vector(self, l1, l2):
        return 2 * self.omega1 @ np.asarray(l1) + 2 * self.omega2 @ np.asarray(l2)

    def lattice_coordinates(self, u):
        """Real (l', l'') with u = 2 omega' l' + 2 omega'' l''."""
        g = self.genus
        B = np.hstack([2 * self.omega1, 2 * self.omega2])
        R = np.vstack([B.real, B.imag])
        rhs = np.concatenate([np.real(u), np.imag(u)])
        sol = np.linalg.solve(R, rhs)
        return sol[:g], sol[g:]

    def lattice_residual(self, u) -> float:
        l1, l2 = self.lattice_coordinates(u)
        lam = np.concatenate([l1, l2])
        return float(np.max(np.abs(lam - np.round(lam))))

    def reduce(self, u):
        """Representative of u modulo the lattice with coordinates in [-1/2, 1/2)."""
        l1, l2 = self.lattice_coordinates(u)
        return u - self.lattice_vector(np.round(l1), np.round(l2))

    @property
    def abel(self) -> "AbelMap":
        if self._abel is None:
            self._abel = AbelMap(self)
        return self._abel


def period_matrices(curve: CurveModel, homology: Homology = None, seed: int = 0,
                    check: bool = True) -> PeriodData:
    hom = homology or compute_homology(curve, seed=seed)
    g = curve.genus
    W = hom.word_integrals
    A_per = W @ hom.alpha.T.astype(float)   # (2g, g): row = differential, column = alpha_i
    B_per = W @ hom.beta.T.astype(float)
    omega1 = A_per[:g] / 2
    omega2 = B_per[:g] / 2
    eta1 = A_per[g:] / 2
    eta2 = B_per[g:] / 2
    tau = np.linalg.solve(omega1, omega2)
    pd = PeriodData(omega1, omega2, eta1, eta2, tau, hom)
    if check:
        if np.max(np.abs(tau - tau.T)) > 1e-8 * max(1.0, np.max(np.abs(tau))):
            raise HomologyError("tau is not symmetric")
        if np.min(np.linalg.eigvalsh((tau.imag + tau.imag.T) / 2)) <= 0:
            raise HomologyError("Im tau is not positive definite")
    pd.shift = np.zeros(g, dtype=complex)
    if curve.r:
        pd.shift = sum(pd.abel.branch(i) for i in range(curve.s, curve.s + curve.r))
    return pd


# Abel map ---------------------------------------------------------------------------

class AbelMap:
    """w(P) = int_infinity^P nu^I along explicit paths built from the homology loops."""

    def __init__(self, pd: PeriodData, terms: int = 120):
        self.pd = pd
        hom = pd.homology
        self.curve = curve = hom.curve
        self.hom = hom
        self.g = curve.genus
        c = curve.branch_points.mean()
        bmax = float(np.max(np.abs(curve.branch_points)))
        d = hom.base - c
        lam = max(1.0, (4 * bmax + 1.0 + abs(c)) / abs(d) + 1.0)
        self.x_far = complex(c + d * lam)
        t0 = self.x_far ** (-1.0 / 3.0)
        self.t0 = t0
        self._inf_part = self._infinity_integral(t0, terms)
        Pf = infinity_chart(curve, t0)
        seg = build_path(curve, [self.x_far, hom.base], Pf.yr)
        self._inf_part = self._inf_part + seg.integrate_arrays(hom.table)
        ratio = seg.end_point.yr / hom.y_base
        self.k0 = int(np.argmin(np.abs(ZETA3 ** np.arange(3) - ratio)))

    def _infinity_integral(self, t0, terms):
        """Integrals from infinity to x_far of nu^I (exact) and nu^II (regularized, 0)."""
        curve = self.curve
        e = curve.exponents
        b = curve.branch_points
        inv_gr = _binomial_product_series(b, -e / 3.0, terms)
        inv_gs = _binomial_product_series(b, -(3 - e) / 3.0, terms)
        out = np.zeros(2 * self.g, dtype=complex)
        k = np.arange(terms + 1)
        for j, (a, er) in enumerate(self.hom.table.first):
            if er:   # nu = -t^(s_hat - 3a - 4) / G_s dt
                m, c = curve.s_hat - 3 * a - 4, inv_gs
            else:
                m, c = curve.r_hat - 3 * a - 4, inv_gr
            pw = m + 3 * k + 1
            out[j] = -np.sum(c * t0 ** pw / pw)
        return out

    def _sheet_shift(self, k_target):
        """Integrals of gamma_1 repeated until the sheet index moves from k0 to k_target."""
        hom = self.hom
        m1 = int(hom.monodromies[0])
        k = self.k0
        tot = np.zeros(2 * self.g, dtype=complex)
        for _ in range(3):
            if k % 3 == k_target % 3:
                return tot
            tot = tot + ZETA3 ** (k * hom.table.chars) * hom.loop_integrals[:, 0]
            k += m1
        raise PathError("could not reach the requested sheet")

    def _route(self, x_end, avoid=None):
        """Polyline from the base point to x_end that keeps clear of branch points."""
        hom = self.hom
        xh = hom.base
        verts = [xh]
        b = self.curve.branch_points
        for _ in range(8):
            a = verts[-1]
            bad = None
            for i, bi in enumerate(b):
                if avoid is not None and i == avoid:
                    continue
                if _dist_point_segment(bi, a, x_end) < 0.5 * hom.radii[i]:
                    t = ((bi - a) * np.conj(x_end - a)).real / abs(x_end - a) ** 2
                    if 0 < t < 1 and (bad is None or t < bad[1]):
                        bad = (i, t)
            if bad is None:
                break
            i = bad[0]
            u = (x_end - a) / abs(x_end - a)
            perp = 1j * u
            verts.append(b[i] - u * hom.radii[i] + perp * hom.radii[i])
            verts.append(b[i] + u * hom.radii[i] + perp * hom.radii[i])
        verts.append(x_end)
        return np.array(verts)

    def point_full(self, P: CurvePoint) -> np.ndarray:
        """Integrals of (nu^I, nu^II) from infinity to P along the standard route.

        The nu^II part is the regularized value (the t-chart piece is omitted).
        """
        if P.at_infinity:
            return np.zeros(2 * self.g, dtype=complex)
        hom = self.hom
        if P.is_branch:
            return self.branch_full(P.branch_index)
        route = build_path(self.curve, self._route(P.x), hom.y_base)
        ratio = P.yr / route.end_point.yr
        k = int(np.argmin(np.abs(ZETA3 ** np.arange(3) - ratio)))
        if abs(ZETA3 ** k - ratio) > 1e-6:
            raise PathError("point does not lie over the route end")
        return self._inf_part + self._sheet_shift(k) + ZETA3 ** (k * hom.table.chars) \
            * route.integrate_arrays(hom.table)

    def branch_full(self, i) -> np.ndarray:
        hom = self.hom
        b = self.curve.branch_points[i]
        u = (hom.base - b) / abs(hom.base - b)
        xa = b + u * hom.radii[i]
        route = build_path(self.curve, self._route(xa, avoid=i), hom.y_base)
        term = branch_terminal(self.curve, xa, route.end_point.yr, i)
        tot = route.integrate_arrays(hom.table) + term.integrate_arrays(hom.table)
        return self._inf_part + self._sheet_shift(0) + tot

    def point(self, P: CurvePoint) -> np.ndarray:
        return self.point_full(P)[: self.g]

    def branch(self, i) -> np.ndarray:
        """w(B_{i+1}) for 0-based i."""
        return self.branch_full(i)[: self.g]

    def divisor(self, points) -> np.ndarray:
        tot = np.zeros(self.g, dtype=complex)
        for P in points:
            tot = tot + self.point(P)
        return tot


def abel_map(curve: CurveModel, periods: PeriodData, divisor) -> np.ndarray:
    """Sum of w(P) over the points of the divisor (repeat points for multiplicity)."""
    return periods.abel.divisor(divisor)


def shifted_abel_map(curve: CurveModel, periods: PeriodData, points) -> np.ndarray:
    return periods.abel.divisor(points) + periods.shift
