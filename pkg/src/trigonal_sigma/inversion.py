"""Frobenius-Stickelberger determinants, mu functions and the inversion checks.

Conventions for the mu coefficients:

    mu_n(P) = phi_n(P) + sum_{k<n} (-1)^(n-k) mu_{n,k} phi_k(P),   mu_{n,n} = 1.

With this convention the Jacobi inversion formula reads

    wp_{g,k+1}(w_s(P_1..P_g)) = (-1)^(g-k+1) mu_hat_{g,k},

equivalently mu_hat_g(P) = phi_hat_g(P) - sum_j wp_{gj} phi_hat_{j-1}(P).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .basis import evaluate_basis, nu_I, phi_basis, phi_hat_basis
from .curve import ZETA3, CurveModel, CurvePoint, lift_x
from .forms import fundamental_form
from .periods import PeriodData, abel_map, shifted_abel_map
from .semigroup import frobenius_data, young_diagram
from .sigma import SigmaEvaluator


class InversionError(ValueError):
    pass


KINDS = ("phi", "phi_hat")


def _basis(curve, kind, count):
    if kind == "phi":
        return phi_basis(curve, count)
    if kind == "phi_hat":
        return phi_hat_basis(curve, count)
    raise InversionError(f"unknown basis kind {kind!r}; use one of {KINDS}")


def _same_point(P: CurvePoint, Q: CurvePoint, tol=1e-12) -> bool:
    scale = 1.0 + abs(P.x) + abs(P.yr)
    return abs(P.x - Q.x) < tol * scale and abs(P.yr - Q.yr) < tol * scale


def _branch_points_along(curve: CurveModel, P: CurvePoint, xs):
    """Points over xs on the sheet of P (xs close to P.x, away from branch points)."""
    b = curve.branch_points
    e = curve.exponents
    logs = np.array([np.sum(e / 3.0 * np.log((x - b) / (P.x - b))) for x in xs])
    yr = P.yr * np.exp(logs)
    return [CurvePoint(complex(x), complex(y), complex(curve.K(x)) / complex(y))
            for x, y in zip(xs, yr)]


def derivative_column(curve: CurveModel, basis, P: CurvePoint, m: int, n_nodes: int = 64):
    """(1/m!) d^m/dx^m of the basis functions along the sheet of P, by Cauchy's formula."""
    if P.at_infinity or P.is_branch:
        raise InversionError("confluent columns need an affine non-branch point")
    if m == 0:
        return evaluate_basis(curve, basis, P)
    rho = 0.5 * np.min(np.abs(curve.branch_points - P.x))
    th = 2 * np.pi * np.arange(n_nodes) / n_nodes
    xs = P.x + rho * np.exp(1j * th)
    vals = np.array([evaluate_basis(curve, basis, Q) for Q in _branch_points_along(curve, P, xs)])
    return (vals * np.exp(-1j * m * th)[:, None]).mean(axis=0) / rho ** m


def basis_dx(curve: CurveModel, basis, P: CurvePoint) -> np.ndarray:
    """d/dx of the basis monomials x^a y_r^i y_s^j along the sheet of P."""
    b = curve.branch_points
    e = curve.exponents
    lr = np.sum(e / (3.0 * (P.x - b)))          # y_r'/y_r
    ls = np.sum((3 - e) / (3.0 * (P.x - b)))    # y_s'/y_s
    vals = evaluate_basis(curve, basis, P)
    out = np.empty(len(vals), dtype=complex)
    for n, (a, i, j) in enumerate(basis.monomials):
        out[n] = vals[n] * ((a / P.x if a else 0.0) + i * lr + j * ls)
    return out


@dataclass(frozen=True, eq=False)
class FSMatrix:
    """(phi_i(P_j)) with repeated points replaced by derivative columns."""
    matrix: np.ndarray
    points: tuple
    kind: str

    @property
    def det(self) -> complex:
        return complex(np.linalg.det(self.matrix))

    @property
    def hadamard_scale(self) -> float:
        return float(np.prod(np.linalg.norm(self.matrix, axis=0)))


def fs_matrix(curve: CurveModel, kind: str, points, rows: int = None) -> FSMatrix:
    points = tuple(points)
    n = len(points) if rows is None else rows
    basis = _basis(curve, kind, n)
    cols = []
    for j, P in enumerate(points):
        m = sum(1 for Q in points[:j] if _same_point(P, Q))
        cols.append(derivative_column(curve, basis, P, m))
    M = np.array(cols, dtype=complex).T if cols else np.zeros((n, 0), dtype=complex)
    return FSMatrix(M, points, kind)


def fs_det(curve: CurveModel, kind: str, points) -> complex:
    """psi_n or psi_hat_n; confluent points use derivative columns."""
    if len(points) == 0:
        return 1.0 + 0j
    return fs_matrix(curve, kind, points).det


def check_general_position(curve, kind, points, rel_tol=1e-8):
    F = fs_matrix(curve, kind, points)
    if abs(F.det) < rel_tol * F.hadamard_scale:
        raise InversionError(f"points are special for the {kind} basis "
                             f"(|det| = {abs(F.det):.3g}, scale {F.hadamard_scale:.3g})")
    return F


@dataclass(frozen=True, eq=False)
class MuFunction:
    """mu_n (or mu_hat_n) for a fixed tuple of base points."""
    kind: str
    points: tuple
    coeffs: np.ndarray      # mu_{n,k}, k = 0..n, coeffs[n] = 1
    linear: np.ndarray      # a_k with mu_n = sum_k a_k phi_k, a_n = 1
    curve: CurveModel

    @property
    def n(self) -> int:
        return len(self.points)

    def __call__(self, P: CurvePoint) -> complex:
        vals = evaluate_basis(self.curve, _basis(self.curve, self.kind, self.n + 1), P)
        return complex(np.dot(self.linear, vals))


def mu_coeffs(curve: CurveModel, kind: str, points, rel_tol=1e-8) -> MuFunction:
    """Coefficients of mu_n from the FS matrix: the unique combination vanishing at the points."""
    points = tuple(points)
    n = len(points)
    full = fs_matrix(curve, kind, points, rows=n + 1).matrix
    if n:
        check_general_position(curve, kind, points, rel_tol)
        c = np.linalg.solve(full[:n, :].T, full[n, :])
    else:
        c = np.zeros(0, dtype=complex)
    linear = np.concatenate([-c, [1.0]])
    coeffs = np.array([(-1) ** (n - k) * linear[k] for k in range(n)] + [1.0], dtype=complex)
    return MuFunction(kind, points, coeffs, linear, curve)


def mu(curve: CurveModel, kind: str, points, P: CurvePoint) -> complex:
    """psi_{n+1}(P_1..P_n, P) / psi_n(P_1..P_n), straight from the definition."""
    points = tuple(points)
    den = fs_det(curve, kind, points)
    if abs(den) == 0:
        raise InversionError("degenerate base tuple")
    return fs_det(curve, kind, points + (P,)) / den


# alpha maps -------------------------------------------------------------------------

def _norm_polynomial(curve, muf: MuFunction, degree: int, radius: float):
    """Coefficients (low first) of prod over the three sheets of mu, a polynomial in x."""
    m = 2 * (degree + 1)
    xs = radius * np.exp(2j * np.pi * np.arange(m) / m)
    vals = np.empty(m, dtype=complex)
    for i, x in enumerate(xs):
        yr = lift_x(curve, x)[0].yr
        prod = 1.0 + 0j
        for j in range(3):
            yrj = yr * ZETA3 ** j
            prod *= muf(CurvePoint(complex(x), complex(yrj), complex(curve.K(x)) / yrj))
        vals[i] = prod
    coef = np.fft.fft(vals) / m / radius ** np.arange(m)
    return coef[: degree + 1], coef[degree + 1:]


@dataclass(frozen=True, eq=False)
class AlphaImage:
    points: tuple       # the residual divisor Q_1..Q_m
    expected_count: int
    degree: int
    tail: float         # size of the norm-polynomial coefficients above the degree


def alpha_map(curve: CurveModel, kind: str, points) -> AlphaImage:
    """Remaining zeros of mu_n (phi) or of mu_hat_n dx / 3K (phi_hat)."""
    points = tuple(points)
    n = len(points)
    basis = _basis(curve, kind, n + 1)
    degree = int(basis.weights[n])
    g = curve.genus
    muf = mu_coeffs(curve, kind, points)
    known = [P.x for P in points]
    if kind == "phi_hat":
        known += list(curve.branch_points)
        expected = degree - n - g - 1
    else:
        expected = degree - n
    radius = 1.0 + max(np.max(np.abs(curve.branch_points)), max((abs(x) for x in known), default=0))
    coef, tail = _norm_polynomial(curve, muf, degree, radius)
    roots = list(np.roots(coef[::-1]))
    for x0 in known:
        if not roots:
            raise InversionError("norm polynomial has fewer roots than known zeros")
        roots.pop(int(np.argmin([abs(x - x0) for x in roots])))
    if len(roots) != expected:
        raise InversionError(f"expected {expected} residual zeros, found {len(roots)}")
    polished = []
    for x in roots:
        x = complex(x)
        for _ in range(3):  # Newton polish on the norm polynomial
            p = np.polynomial.polynomial.polyval(x, coef)
            dp = np.polynomial.polynomial.polyval(x, np.polynomial.polynomial.polyder(coef))
            if dp == 0:
                break
            x -= p / dp
        polished.append(x)
    # multiple roots come back only to about eps^(1/m): snap them onto a known fiber
    snap = 1e-4 * radius
    for i, x in enumerate(polished):
        near = [x0 for x0 in [P.x for P in points] + polished[:i] if abs(x - x0) < snap]
        if near:
            polished[i] = complex(near[0])
    # a fiber can hold several zeros; give each a distinct sheet not taken by a base point
    tol = 1e-9 * radius
    out = []
    used = [P for P in points]
    for x in polished:
        lifts = lift_x(curve, x)
        if lifts[0].is_branch:
            out.append(lifts[0])
            continue
        free = [P for P in lifts if not any(abs(P.x - Q.x) < tol and abs(P.yr - Q.yr) < tol * (1 + abs(P.yr))
                                            for Q in used)]
        best = _polish(curve, muf, basis, min(free or lifts, key=lambda P: abs(muf(P))))
        used.append(best)
        out.append(best)
    rel_tail = float(np.max(np.abs(tail)) / np.max(np.abs(coef))) if tail.size else 0.0
    return AlphaImage(tuple(out), expected, degree, rel_tail)


def _polish(curve, muf, basis, P, steps=6):
    """Newton iteration on mu along the sheet of P (skipped next to branch points)."""
    for _ in range(steps):
        if P.is_branch or np.min(np.abs(curve.branch_points - P.x)) < 1e-8:
            return P
        f = muf(P)
        df = np.dot(muf.linear, basis_dx(curve, basis, P))
        if df == 0 or abs(f) == 0:
            return P
        dx = f / df
        if abs(dx) > 0.25 * np.min(np.abs(curve.branch_points - P.x)):
            return P
        P = _branch_points_along(curve, P, [P.x - dx])[0]
    return P


def alpha_abel_residual(curve: CurveModel, pd: PeriodData, kind: str, points) -> float:
    """Lattice residual of the linear equivalence produced by alpha_n or alpha_hat_n."""
    Q = alpha_map(curve, kind, points).points
    if kind == "phi":
        u = abel_map(curve, pd, list(points)) + abel_map(curve, pd, list(Q))
    else:
        u = shifted_abel_map(curve, pd, list(points)) + shifted_abel_map(curve, pd, list(Q))
    return pd.lattice_residual(u)


# checks -------------------------------------------------------------------------------

def _rel(a, b) -> float:
    a, b = np.asarray(a), np.asarray(b)
    return float(np.linalg.norm(a - b) / max(np.linalg.norm(b), 1e-300))


def random_points(curve: CurveModel, count: int, rng, spread: float = 1.0):
    """Random affine points, each on a random sheet."""
    out = []
    for _ in range(count):
        x = complex(spread * (rng.normal() + 1j * rng.normal()))
        out.append(lift_x(curve, x)[rng.integers(3)])
    return out


def jacobi_inversion_check(curve: CurveModel, pd: PeriodData, ev: SigmaEvaluator, points,
                           probes=None) -> dict:
    """Compare wp_{g,j}(w_s(D)) with the mu_hat coefficients of D, and mu_hat_g at probe points."""
    g = curve.genus
    points = list(points)
    if len(points) != g:
        raise InversionError(f"need g = {g} points")
    muf = mu_coeffs(curve, "phi_hat", points)
    u = shifted_abel_map(curve, pd, points)
    W = ev.wp_matrix(u)
    predicted = np.array([(-1) ** (g - k + 1) * muf.coeffs[k] for k in range(g)])
    part2 = _rel(W[g - 1, :], predicted)
    part1 = 0.0
    basis = phi_hat_basis(curve, g + 1)
    for P in probes or []:
        vals = evaluate_basis(curve, basis, P)
        rhs = vals[g] - np.dot(W[g - 1, :], vals[:g])
        part1 = max(part1, abs(muf(P) - rhs) / max(abs(muf(P)), abs(vals[g]), 1e-300))
    return {"check": "jacobi_inversion", "wp_row": W[g - 1, :], "predicted": predicted,
            "residual": max(part2, part1), "coefficient_residual": part2, "mu_residual": part1}


def _alpha(indices, g):
    a = [0] * g
    for i in indices:
        a[i - 1] += 1
    return tuple(a)


def vanishing_check(curve: CurveModel, pd: PeriodData, ev: SigmaEvaluator, points) -> dict:
    """Vanishing orders and derivative ratios of sigma at u = w_s(P_1..P_k)."""
    g = curve.genus
    points = list(points)
    k = len(points)
    if not 1 <= k <= g:
        raise InversionError(f"need 1..{g} points, got {k}")
    muf = mu_coeffs(curve, "phi_hat", points)
    u = shifted_abel_map(curve, pd, points)
    if k == g:
        vals = ev.partials([_alpha((), g)] + [_alpha((i,), g) for i in range(1, g + 1)]
                           + [_alpha((g, i), g) for i in range(1, g + 1)], u)
        s0, d1, d2 = vals[0], vals[1:g + 1], vals[g + 1:]
        lhs = (d1 * d1[g - 1] - d2 * s0) / s0 ** 2
        pred = np.array([(-1) ** (g - i) * muf.coeffs[i - 1] for i in range(1, g + 1)])
        return {"check": "vanishing", "k": k, "ratios": lhs, "predicted": pred,
                "ratio_residual": _rel(lhs, pred), "low_order": 0.0, "ug_order_ok": True}
    fd = frobenius_data(young_diagram(curve.semigroup), k)
    nk = fd.rank
    low = sorted({_alpha(t, g) for m in range(nk)
                  for t in itertools.product(range(1, g + 1), repeat=m)})
    sharp = ev.partials([_alpha(fd.sharp, g)], u)[0]
    low_vals = np.abs(ev.partials(low, u)) if low else np.zeros(1)
    low_order = float(np.max(low_vals) / abs(sharp))
    ratios = np.array([ev.partials([_alpha((i,) + fd.sharp[1:], g)], u)[0] / sharp
                       for i in range(1, g + 1)])
    pred = np.array([(-1) ** (k - i + 1) * muf.coeffs[i - 1] for i in range(1, k + 1)]
                    + [1.0] + [0.0] * (g - k - 1), dtype=complex)
    ug = np.abs(ev.partials([_alpha((g,) * ell, g) for ell in range(fd.N + 1)], u))
    ug_rel = ug[:-1] / ug[-1] if fd.N > 0 else np.zeros(0)
    out = {"check": "vanishing", "k": k, "ratios": ratios, "predicted": pred,
           "ratio_residual": _rel(ratios, pred), "low_order": low_order,
           "ug_orders": ug_rel, "ug_order_ok": bool(np.all(ug_rel < 1e-5)), "N_k": fd.N}
    if k == 1:
        phi = evaluate_basis(curve, phi_hat_basis(curve, 2), points[0])
        out["phi_ratio"] = -phi[1] / phi[0]
    return out


def riemann_fundamental_check(curve: CurveModel, pd: PeriodData, ev: SigmaEvaluator,
                              P: CurvePoint, points) -> dict:
    """sum wp_ij(w(P) - u) nu_i(P) nu_j(P_a) = Omega(P, P_a) for every a, u = w_s(P_1..P_g)."""
    points = list(points)
    check_general_position(curve, "phi_hat", points)
    u = shifted_abel_map(curve, pd, points)
    W = ev.wp_matrix(abel_map(curve, pd, [P]) - u)
    vP = nu_I(curve, P)
    res = 0.0
    for Pa in points:
        lhs = vP @ W @ nu_I(curve, Pa)
        rhs = fundamental_form(curve, P, Pa)
        res = max(res, abs(lhs - rhs) / max(abs(rhs), 1e-300))
    return {"check": "riemann_fundamental", "residual": res}


def vector_field_check(curve: CurveModel, pd: PeriodData, points, h: float = 1e-4) -> dict:
    """du/dx_a from finite differences of the Abel map against phi_hat_{i-1}(P_a) / 3K_a.

    Also checks that Psi_hat_g^{-1} diag(3K) inverts the Jacobian, i.e. that
    d/du = Psi_hat_g^{-1} (3 y_r y_s d/dx).
    """
    g = curve.genus
    points = list(points)
    F = check_general_position(curve, "phi_hat", points)
    Kd = np.array([3 * complex(curve.K(P.x)) for P in points])
    jac = F.matrix / Kd[None, :]          # du_i/dx_a
    res = 0.0
    for a, P in enumerate(points):
        Pm, Pp = _branch_points_along(curve, P, [P.x - h, P.x + h])
        fd = (abel_map(curve, pd, [Pp]) - abel_map(curve, pd, [Pm])) / (2 * h)
        res = max(res, _rel(fd, jac[:, a]))
    inv = np.linalg.inv(F.matrix) * Kd[:, None]   # dx_a/du_i
    res_inv = float(np.max(np.abs(inv @ jac - np.eye(g))))
    return {"check": "vector_field", "residual": res, "inverse_residual": res_inv}


@dataclass(frozen=True, eq=False)
class Stratum:
    """Sampled images of S^k X under the (shifted) Abel map."""
    k: int
    images: np.ndarray
    label: str


def sample_stratum(curve: CurveModel, pd: PeriodData, k: int, count: int, seed: int = 0,
                   shifted: bool = True) -> Stratum:
    rng = np.random.default_rng(seed)
    imgs = []
    for _ in range(count):
        pts = random_points(curve, k, rng)
        imgs.append(shifted_abel_map(curve, pd, pts) if shifted else abel_map(curve, pd, pts))
    return Stratum(k, np.array(imgs), f"W_s^{k}" if shifted else f"W^{k}")


def zero_set_residual(ev: SigmaEvaluator, u) -> float:
    """|sigma(u)| relative to |grad sigma(u)|; small on the zero set of sigma."""
    s0, grad, _ = ev.gradient_hessian(u)
    return abs(s0) / max(np.max(np.abs(grad)), 1e-300)


def negation_check(curve: CurveModel, pd: PeriodData, ev: SigmaEvaluator, count=5, seed=0) -> dict:
    """-W_s^{g-1} lies in the zero set of sigma, as W_s^{g-1} does."""
    st = sample_stratum(curve, pd, curve.genus - 1, count, seed)
    on = max(zero_set_residual(ev, u) for u in st.images)
    neg = max(zero_set_residual(ev, -u) for u in st.images)
    return {"check": "negation", "samples": count, "residual": max(on, neg)}


def serre_involution_check(curve: CurveModel, pd: PeriodData, points) -> float:
    """Applying alpha_hat_{g-1} twice returns a divisor with the same shifted Abel image."""
    Q = alpha_map(curve, "phi_hat", points).points
    R = alpha_map(curve, "phi_hat", Q).points
    u = shifted_abel_map(curve, pd, list(points)) - shifted_abel_map(curve, pd, list(R))
    return pd.lattice_residual(u)
