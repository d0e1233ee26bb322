"""Pure numpy versions of the hot loops.  Same signatures as the compiled module."""

from __future__ import annotations

import numpy as np

_ZETA = np.exp(2j * np.pi / 3 * np.arange(3))


def continue_roots(F, y0):
    """Follow a branch of F**(1/3) along samples F[0..n-1], starting next to y0.

    At every step the cube root closest to the previous value is kept.
    """
    F = np.asarray(F, dtype=complex)
    out = np.empty(F.size, dtype=complex)
    base = F ** (1.0 / 3.0)
    prev = complex(y0)
    for k in range(F.size):
        cands = base[k] * _ZETA
        prev = cands[np.argmin(np.abs(cands - prev))]
        out[k] = prev
    return out


def theta_sums(tau, a, zb, centers, offsets, L, alphas):
    """Lattice sums  S[p, r] = sum_m (L v)^alpha_r exp(pi i v.tau.v + 2 pi i v.zb_p),
    v = centers[p] + offsets[m] + a.

    Returned as (S * exp(-scale), scale) with scale[p] the largest real
    exponent over the lattice block, so huge arguments do not overflow.
    """
    tau = np.asarray(tau, dtype=complex)
    zb = np.atleast_2d(np.asarray(zb, dtype=complex))
    centers = np.atleast_2d(np.asarray(centers, dtype=float))
    offsets = np.asarray(offsets, dtype=float)
    alphas = np.atleast_2d(np.asarray(alphas, dtype=np.int64))
    P = zb.shape[0]
    R = alphas.shape[0]
    S = np.empty((P, R), dtype=complex)
    scale = np.empty(P)
    for p in range(P):
        v = offsets + centers[p] + a
        ex = 1j * np.pi * np.einsum("mi,ij,mj->m", v, tau, v) + 2j * np.pi * (v @ zb[p])
        mx = ex.real.max()
        w = np.exp(ex - mx)
        k = v @ np.asarray(L).T
        for r in range(R):
            mono = np.prod(k ** alphas[r], axis=1)
            S[p, r] = np.dot(w, mono)
        scale[p] = mx
    return S, scale


def segment_crossings(p0, p1, q0, q1):
    """Transversal crossings between segments p0->p1 and q0->q1 (complex endpoints).

    Returns index arrays (i, j), parameters (s, t) in [0, 1) and the sign
    of Im(conj(dp) dq).
    """
    p0, p1, q0, q1 = (np.asarray(v, dtype=complex) for v in (p0, p1, q0, q1))
    dp = (p1 - p0)[:, None]
    dq = (q1 - q0)[None, :]
    w = q0[None, :] - p0[:, None]
    den = (dp.conj() * dq).imag
    with np.errstate(divide="ignore", invalid="ignore"):
        s = (w.conj() * dq).imag / den
        t = (w.conj() * dp).imag / den
    ok = (den != 0) & (s >= 0) & (s < 1) & (t >= 0) & (t < 1)
    i, j = np.nonzero(ok)
    return i, j, s[i, j], t[i, j], np.sign(den[i, j]).astype(int)
