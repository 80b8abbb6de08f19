import os
import subprocess
import sys

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pdyn import _kernels_py as py
from pdyn import kernels

ck = pytest.importorskip("pdyn._ckernels")

ints = st.integers(-10**30, 10**30)
small = st.integers(-50, 50)
coeff_lists = st.lists(small, min_size=1, max_size=8)
primes = st.sampled_from([2, 3, 5, 7, 11, 101, 1009])


@given(st.lists(ints, min_size=1, max_size=6), ints, ints)
def test_hom_eval(coeffs, a, b):
    assert ck.hom_eval(coeffs, a, b) == py.hom_eval(coeffs, a, b)


@given(ints, ints)
def test_normalize_pair(a, b):
    if a == 0 and b == 0:
        for impl in (py, ck):
            with pytest.raises(ValueError):
                impl.normalize_pair(a, b)
    else:
        assert ck.normalize_pair(a, b) == py.normalize_pair(a, b)


@given(coeff_lists, small, st.integers(1, 50), st.integers(0, 5))
def test_orbit(p, a, b, n):
    q = [1] + [0] * (len(p) - 1)  # the form Y^d
    try:
        want = py.orbit(p, q, a, b, n)
    except ValueError:
        with pytest.raises(ValueError):
            ck.orbit(p, q, a, b, n)
        return
    assert ck.orbit(p, q, a, b, n) == want


@given(st.integers(1, 3), st.data())
def test_multihom_eval(n, data):
    exps = st.tuples(*[st.integers(0, 4)] * (2 * n))
    terms = data.draw(st.lists(st.tuples(exps, small), max_size=10))
    xs = data.draw(st.lists(ints, min_size=n, max_size=n))
    ys = data.draw(st.lists(ints, min_size=n, max_size=n))
    assert ck.multihom_eval(terms, xs, ys) == py.multihom_eval(terms, xs, ys)


@given(st.lists(ints, max_size=8), st.lists(ints, max_size=8))
def test_poly_mul(a, b):
    assert ck.poly_mul(a, b) == py.poly_mul(a, b)


@given(st.lists(st.integers(-10**20, 10**20), max_size=7), primes)
def test_roots_mod_p(coeffs, p):
    got = ck.roots_mod_p(coeffs, p)
    assert got == py.roots_mod_p(coeffs, p)
    assert got == [r for r in range(p) if sum(c * r**i for i, c in enumerate(coeffs)) % p == 0]


def test_roots_mod_p_degenerate():
    for impl in (py, ck):
        assert impl.roots_mod_p([], 5) == [0, 1, 2, 3, 4]
        assert impl.roots_mod_p([10, 5], 5) == [0, 1, 2, 3, 4]
        assert impl.roots_mod_p([3], 5) == []


def test_backend_selection():
    assert kernels.BACKEND in ("cython", "python")
    env = dict(os.environ, PDYN_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "from pdyn import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
