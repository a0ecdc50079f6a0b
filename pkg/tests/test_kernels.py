from __future__ import annotations

import os
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpkit import _scan_py, kernels

compiled = pytest.mark.skipif(kernels.BACKEND != "cython", reason="compiled kernel not built")


@st.composite
def scan_inputs(draw):
    n = draw(st.integers(0, 3))
    r = draw(st.integers(0, 4))
    coefs = [draw(st.lists(st.integers(-60, 60), min_size=n, max_size=n)) for _ in range(r)]
    consts = draw(st.lists(st.integers(-500, 500), min_size=r, max_size=r))
    divs = draw(st.lists(st.integers(1, 40), min_size=r, max_size=r))
    uppers = draw(st.lists(st.integers(0, 200), min_size=r, max_size=r))
    lo = draw(st.lists(st.integers(-15, 3), min_size=n, max_size=n))
    hi = [l + draw(st.integers(-1, 20)) for l in lo]
    return consts, coefs, divs, uppers, lo, hi


def reference(consts, coefs, divs, uppers, lo, hi):
    import itertools

    out = []
    for p in itertools.product(*(range(l, h + 1) for l, h in zip(lo, hi))):
        ok = True
        for c, a, d, u in zip(consts, coefs, divs, uppers):
            v = c + sum(x * y for x, y in zip(a, p))
            if v % d or not 0 <= v <= u:
                ok = False
                break
        if ok:
            out.append(tuple(p))
    return out


@settings(max_examples=300, deadline=None)
@given(scan_inputs())
def test_python_kernel_matches_reference(args):
    assert _scan_py.scan(*args) == reference(*args)


@compiled
@settings(max_examples=300, deadline=None)
@given(scan_inputs())
def test_compiled_kernel_matches_python(args):
    from helpkit import _scan

    assert _scan.scan(*args) == _scan_py.scan(*args)


def test_dispatch_respects_int64_limit():
    huge = [[1 << 61]]
    assert not kernels.fits_int64([0], huge, [1], [1 << 62], [0], [3])
    assert kernels.fits_int64([5], [[3, -2]], [7], [40], [-5, -5], [5, 5])
    # big numbers still give exact answers through the fallback
    assert kernels.scan([0], [[1 << 61]], [1 << 61], [1 << 63], [0], [3]) == [(0,), (1,), (2,), (3,)]


def test_empty_box_and_zero_dimensional_scan():
    assert kernels.scan([1], [[1]], [1], [5], [3], [2]) == []
    assert kernels.scan([4], [[]], [2], [5], [], []) == [()]
    assert kernels.scan([3], [[]], [2], [5], [], []) == []


def test_pure_python_switch():
    env = dict(os.environ, HELPKIT_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "import helpkit.kernels as k; print(k.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"
