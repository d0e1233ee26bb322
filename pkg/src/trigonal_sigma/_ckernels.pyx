# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot loops; see _kernels_py for the reference code."""

import numpy as np
cimport numpy as cnp
from libc.math cimport M_PI, atan2, cos, sin, exp, cbrt, hypot, log, sqrt

cnp.import_array()


cdef inline double complex _cbrt_principal(double complex z):
    cdef double r = hypot(z.real, z.imag)
    if r == 0.0:
        return 0.0
    cdef double th = atan2(z.imag, z.real) / 3.0
    cdef double m = cbrt(r)
    return m * cos(th) + 1j * m * sin(th)


def continue_roots(F, y0):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] Fa = np.ascontiguousarray(F, dtype=np.complex128)
    cdef Py_ssize_t n = Fa.shape[0], k, j
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.empty(n, dtype=np.complex128)
    cdef double complex z0 = 1.0
    cdef double complex z1 = -0.5 + 0.8660254037844386j
    cdef double complex z2 = -0.5 - 0.8660254037844386j
    cdef double complex prev = y0, b, c, best
    cdef double d, dbest
    for k in range(n):
        b = _cbrt_principal(Fa[k])
        best = b
        dbest = hypot((b - prev).real, (b - prev).imag)
        c = b * z1
        d = hypot((c - prev).real, (c - prev).imag)
        if d < dbest:
            best = c
            dbest = d
        c = b * z2
        d = hypot((c - prev).real, (c - prev).imag)
        if d < dbest:
            best = c
        out[k] = best
        prev = best
    return out


def theta_sums(tau, a, zb, centers, offsets, L, alphas):
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] T = np.ascontiguousarray(tau, dtype=np.complex128)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] A = np.ascontiguousarray(a, dtype=np.float64)
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] Z = np.ascontiguousarray(np.atleast_2d(zb), dtype=np.complex128)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] C = np.ascontiguousarray(np.atleast_2d(centers), dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] O = np.ascontiguousarray(offsets, dtype=np.float64)
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] LM = np.ascontiguousarray(L, dtype=np.complex128)
    cdef cnp.ndarray[cnp.int64_t, ndim=2] AL = np.ascontiguousarray(np.atleast_2d(alphas), dtype=np.int64)
    cdef Py_ssize_t P = Z.shape[0], M = O.shape[0], g = T.shape[0], R = AL.shape[0]
    cdef Py_ssize_t p, m, i, j, r, e
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] S = np.zeros((P, R), dtype=np.complex128)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] scale = np.empty(P, dtype=np.float64)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] ex = np.empty(M, dtype=np.complex128)
    cdef double[:] v = np.empty(g, dtype=np.float64)
    cdef double complex[:] k = np.empty(g, dtype=np.complex128)
    cdef double complex q, lin, w, mono
    cdef double mx, wr
    for p in range(P):
        mx = -1e300
        for m in range(M):
            for i in range(g):
                v[i] = C[p, i] + O[m, i] + A[i]
            q = 0.0
            lin = 0.0
            for i in range(g):
                for j in range(g):
                    q = q + v[i] * T[i, j] * v[j]
                lin = lin + v[i] * Z[p, i]
            w = 1j * M_PI * q + 2j * M_PI * lin
            ex[m] = w
            if w.real > mx:
                mx = w.real
        scale[p] = mx
        for m in range(M):
            wr = exp(ex[m].real - mx)
            w = wr * (cos(ex[m].imag) + 1j * sin(ex[m].imag))
            for i in range(g):
                v[i] = C[p, i] + O[m, i] + A[i]
            for i in range(g):
                k[i] = 0.0
                for j in range(g):
                    k[i] = k[i] + LM[i, j] * v[j]
            for r in range(R):
                mono = w
                for i in range(g):
                    for e in range(AL[r, i]):
                        mono = mono * k[i]
                S[p, r] = S[p, r] + mono
    return S, scale


def segment_crossings(p0, p1, q0, q1):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] P0 = np.ascontiguousarray(p0, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] P1 = np.ascontiguousarray(p1, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] Q0 = np.ascontiguousarray(q0, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] Q1 = np.ascontiguousarray(q1, dtype=np.complex128)
    cdef Py_ssize_t n = P0.shape[0], m = Q0.shape[0], i, j
    cdef double complex dp, dq, w
    cdef double den, s, t
    ii, jj, ss, tt, sg = [], [], [], [], []
    for i in range(n):
        dp = P1[i] - P0[i]
        for j in range(m):
            dq = Q1[j] - Q0[j]
            den = dp.real * dq.imag - dp.imag * dq.real
            if den == 0.0:
                continue
            w = Q0[j] - P0[i]
            s = (w.real * dq.imag - w.imag * dq.real) / den
            if s < 0.0 or s >= 1.0:
                continue
            t = (w.real * dp.imag - w.imag * dp.real) / den
            if t < 0.0 or t >= 1.0:
                continue
            ii.append(i)
            jj.append(j)
            ss.append(s)
            tt.append(t)
            sg.append(1 if den > 0 else -1)
    return (np.array(ii, dtype=np.intp), np.array(jj, dtype=np.intp),
            np.array(ss, dtype=float), np.array(tt, dtype=float), np.array(sg, dtype=int))
