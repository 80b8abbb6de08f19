"""Pure-Python implementations of the hot inner loops.

``_ckernels.pyx`` mirrors every function here with identical semantics; the
selection between the two happens in :mod:`pdyn.kernels`.
"""
from math import gcd


def hom_eval(coeffs, a, b):
    """Evaluate the binary form sum(c_i * a**i * b**(d-i)) with d = len(coeffs) - 1."""
    d = len(coeffs) - 1
    if d < 0:
        return 0
    r = coeffs[d]
    bp = 1
    for i in range(d - 1, -1, -1):
        bp *= b
        r = r * a + coeffs[i] * bp
    return r


def normalize_pair(a, b):
    if a == 0 and b == 0:
        raise ValueError("(0:0) is not a point of P^1")
    if b == 0:
        return 1, 0
    g = gcd(a, b)
    a //= g
    b //= g
    if b < 0:
        return -a, -b
    return a, b


def orbit(p, q, a, b, n):
    """Normalized forward orbit [x, f(x), ..., f^n(x)] of x = (a:b) under f = (p:q)."""
    a, b = normalize_pair(a, b)
    out = [(a, b)]
    for _ in range(n):
        a, b = normalize_pair(hom_eval(p, a, b), hom_eval(q, a, b))
        out.append((a, b))
    return out


def multihom_eval(terms, xs, ys):
    """Evaluate sum(c * prod X_i^e_{2i} Y_i^e_{2i+1}) at integer coordinates.

    ``terms`` is a sequence of (exponent tuple of length 2n, int coefficient).
    """
    n = len(xs)
    cache = {}
    total = 0
    for exps, c in terms:
        t = c
        for i in range(n):
            ex = exps[2 * i]
            ey = exps[2 * i + 1]
            if ex:
                key = (2 * i, ex)
                v = cache.get(key)
                if v is None:
                    v = xs[i] ** ex
                    cache[key] = v
                t *= v
            if ey:
                key = (2 * i + 1, ey)
                v = cache.get(key)
                if v is None:
                    v = ys[i] ** ey
                    cache[key] = v
                t *= v
        total += t
    return total


def poly_mul(a, b):
    """Dense product of two coefficient lists (low degree first)."""
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def roots_mod_p(coeffs, p):
    """All r in [0, p) with sum(c_i r^i) = 0 mod p, by exhaustive Horner evaluation."""
    cs = [c % p for c in coeffs]
    while cs and cs[-1] == 0:
        cs.pop()
    if not cs:
        return list(range(p))
    roots = []
    rev = cs[::-1]
    for r in range(p):
        acc = 0
        for c in rev:
            acc = (acc * r + c) % p
        if acc == 0:
            roots.append(r)
    return roots
