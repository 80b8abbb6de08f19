# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled versions of the kernels in ``_kernels_py``; same signatures and results."""
from libc.stdlib cimport free, malloc
from math import gcd


def hom_eval(coeffs, object a, object b):
    cdef Py_ssize_t d = len(coeffs) - 1
    cdef Py_ssize_t i
    cdef object r, bp
    if d < 0:
        return 0
    r = coeffs[d]
    bp = 1
    for i in range(d - 1, -1, -1):
        bp = bp * b
        r = r * a + coeffs[i] * bp
    return r


def normalize_pair(object a, object b):
    cdef object g
    if a == 0 and b == 0:
        raise ValueError("(0:0) is not a point of P^1")
    if b == 0:
        return 1, 0
    g = gcd(a, b)
    a = a // g
    b = b // g
    if b < 0:
        return -a, -b
    return a, b


def orbit(p, q, object a, object b, Py_ssize_t n):
    cdef Py_ssize_t k
    cdef list out
    a, b = normalize_pair(a, b)
    out = [(a, b)]
    for k in range(n):
        a, b = normalize_pair(hom_eval(p, a, b), hom_eval(q, a, b))
        out.append((a, b))
    return out


def multihom_eval(terms, xs, ys):
    cdef Py_ssize_t n = len(xs)
    cdef Py_ssize_t i, ex, ey
    cdef dict cache = {}
    cdef object total = 0
    cdef object t, v
    for exps, c in terms:
        t = c
        for i in range(n):
            ex = exps[2 * i]
            ey = exps[2 * i + 1]
            if ex:
                v = cache.get((2 * i, ex))
                if v is None:
                    v = xs[i] ** ex
                    cache[(2 * i, ex)] = v
                t = t * v
            if ey:
                v = cache.get((2 * i + 1, ey))
                if v is None:
                    v = ys[i] ** ey
                    cache[(2 * i + 1, ey)] = v
                t = t * v
        total = total + t
    return total


def poly_mul(a, b):
    cdef Py_ssize_t la = len(a), lb = len(b)
    cdef Py_ssize_t i, j
    cdef list out
    cdef object ai
    if la == 0 or lb == 0:
        return []
    out = [0] * (la + lb - 1)
    for i in range(la):
        ai = a[i]
        if ai:
            for j in range(lb):
                out[i + j] = out[i + j] + ai * b[j]
    return out


def roots_mod_p(coeffs, long long p):
    cdef Py_ssize_t d, k
    cdef long long r, acc
    cdef long long *cs
    cdef list red = [c % p for c in coeffs]
    cdef list out = []
    while red and red[len(red) - 1] == 0:
        red.pop()
    if not red:
        return list(range(p))
    if p >= (1 << 31):
        raise OverflowError("modulus too large for the compiled kernel")
    d = len(red)
    cs = <long long *> malloc(d * sizeof(long long))
    if cs == NULL:
        raise MemoryError()
    try:
        for k in range(d):
            cs[k] = red[d - 1 - k]
        for r in range(p):
            acc = 0
            for k in range(d):
                acc = (acc * r + cs[k]) % p
            if acc == 0:
                out.append(r)
    finally:
        free(cs)
    return out
