"""Compare the compiled kernels with the numpy fallback.

Run with `python benchmarks/bench_kernels.py`.  Each kernel is timed on the
same inputs under both backends, and the outputs are checked for agreement.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from trigonal_sigma import _kernels_py

try:
    from trigonal_sigma import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def theta_case(g=3, points=8, rng=None):
    from trigonal_sigma.sigma import _ellipsoid_offsets
    rng = rng or np.random.default_rng(0)
    A = rng.normal(size=(g, g))
    Y = A @ A.T + g * np.eye(g)
    X = rng.normal(size=(g, g))
    tau = (X + X.T) / 2 + 1j * Y
    offsets = _ellipsoid_offsets(Y, 1e-16, 12.0)
    zb = rng.normal(size=(points, g)) + 1j * rng.normal(size=(points, g))
    centers = np.round(-(np.linalg.inv(Y) @ zb.imag.T).T)
    a = np.full(g, 0.5)
    L = np.eye(g, dtype=complex) * 1j * np.pi
    alphas = np.array([[0] * g] + [[int(i == j) for j in range(g)] for i in range(g)], dtype=np.int64)
    return (tau, a, zb, centers, offsets, L, alphas)


def roots_case(n=20000, rng=None):
    rng = rng or np.random.default_rng(1)
    x = np.linspace(0, 1, n)
    F = (2 + np.exp(2j * np.pi * x)) ** 3 * (1 + 0.1 * rng.normal(size=n) * 1e-3)
    return (F, complex(F[0] ** (1 / 3)))


def crossings_case(n=600, rng=None):
    rng = rng or np.random.default_rng(2)
    p = np.cumsum(rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1)) * 0.1
    q = np.cumsum(rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1)) * 0.1
    return (p[:-1], p[1:], q[:-1], q[1:])


def agree(a, b):
    if isinstance(a, tuple):
        return all(agree(x, y) for x, y in zip(a, b))
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape:
        return False
    return bool(np.allclose(a, b, rtol=1e-10, atol=1e-12))


def run(repeat=5):
    cases = {
        "theta_sums": theta_case(),
        "continue_roots": roots_case(),
        "segment_crossings": crossings_case(),
    }
    rows = []
    for name, args in cases.items():
        f_py = getattr(_kernels_py, name)
        t_py = min(timeit.repeat(lambda: f_py(*args), number=1, repeat=repeat))
        if _ckernels is None:
            rows.append((name, t_py, None, None))
            continue
        f_c = getattr(_ckernels, name)
        t_c = min(timeit.repeat(lambda: f_c(*args), number=1, repeat=repeat))
        rows.append((name, t_py, t_c, agree(f_py(*args), f_c(*args))))
    return rows


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args(argv)
    print(f"{'kernel':<20}{'numpy [ms]':>12}{'cython [ms]':>13}{'speedup':>9}  agree")
    for name, t_py, t_c, ok in run(args.repeat):
        if t_c is None:
            print(f"{name:<20}{1e3 * t_py:>12.2f}{'n/a':>13}{'':>9}  (extension not built)")
        else:
            print(f"{name:<20}{1e3 * t_py:>12.2f}{1e3 * t_c:>13.2f}{t_py / t_c:>8.1f}x  {ok}")


if __name__ == "__main__":
    main()
