import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from trigonal_sigma import _kernels_py, kernels

ck = pytest.importorskip("trigonal_sigma._ckernels")

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "benchmarks"))
import bench_kernels  # noqa: E402


def test_backend_selected():
    assert kernels.BACKEND == "cython"


def test_pure_fallback_env():
    out = subprocess.run([sys.executable, "-c", "from trigonal_sigma import kernels; print(kernels.BACKEND)"],
                         env={**os.environ, "TRIGONAL_SIGMA_PURE": "1"}, capture_output=True, text=True)
    assert out.stdout.strip() == "python"


@pytest.mark.parametrize("case", ["theta_case", "roots_case", "crossings_case"])
def test_backends_agree_on_benchmark_inputs(case):
    args = getattr(bench_kernels, case)()
    name = {"theta_case": "theta_sums", "roots_case": "continue_roots",
            "crossings_case": "segment_crossings"}[case]
    assert bench_kernels.agree(getattr(_kernels_py, name)(*args), getattr(ck, name)(*args))


@settings(max_examples=30)
@given(st.integers(0, 2 ** 31), st.integers(1, 3), st.integers(1, 4))
def test_theta_sums_agree(seed, g, points):
    args = bench_kernels.theta_case(g=g, points=points, rng=np.random.default_rng(seed))
    assert bench_kernels.agree(_kernels_py.theta_sums(*args), ck.theta_sums(*args))


@settings(max_examples=30)
@given(st.integers(0, 2 ** 31), st.integers(2, 60))
def test_segment_crossings_agree(seed, n):
    args = bench_kernels.crossings_case(n=n, rng=np.random.default_rng(seed))
    assert bench_kernels.agree(_kernels_py.segment_crossings(*args), ck.segment_crossings(*args))


@settings(max_examples=30)
@given(st.integers(0, 2 ** 31), st.integers(2, 400))
def test_continue_roots_agree(seed, n):
    rng = np.random.default_rng(seed)
    F = np.cumsum(rng.normal(size=n) + 1j * rng.normal(size=n)) * 0.01 + 2.0
    y0 = complex(F[0]) ** (1 / 3)
    a, b = _kernels_py.continue_roots(F, y0), ck.continue_roots(F, y0)
    assert np.allclose(a, b, rtol=1e-13, atol=1e-13)
    assert np.allclose(a ** 3, F)
