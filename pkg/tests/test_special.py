import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pdyn.errors import SingularCurve
from pdyn.p1 import INFINITY, ProjPoint, RatMap1, compose, conjugate, evaluate
from pdyn.special import (
    ChebyshevLike, EllipticCurveQ, PowerLike, Unknown, chebyshev, classification_to_json,
    classify_exceptional, joukowski_map, lattes_from_curve, power_map, rational_kth_roots,
    verify_chebyshev_identity, verify_semiconjugacy,
)

from .conftest import mobius_maps


# ---------------------------------------------------------------------------
# Chebyshev


@pytest.mark.parametrize("r", range(1, 17))
def test_chebyshev_identity(r):
    assert verify_chebyshev_identity(r)
    T = chebyshev(r).poly
    # independent check at a few rationals z
    for z in (Fraction(2), Fraction(-3, 5), Fraction(7, 4)):
        assert 2 * T((z + 1 / z) / 2) == z**r + z**-r


def test_chebyshev_small_cases():
    assert chebyshev(2).poly.coeffs == (-1, 0, 2)
    assert chebyshev(3).poly.coeffs == (0, -3, 0, 4)
    with pytest.raises(ValueError):
        chebyshev(0)


@pytest.mark.parametrize("r", range(1, 7))
@pytest.mark.parametrize("s", range(1, 7))
def test_chebyshev_semigroup(r, s):
    Tr, Ts, Trs = chebyshev(r).as_map(), chebyshev(s).as_map(), chebyshev(r * s).as_map()
    assert compose(Tr, Ts) == Trs == compose(Ts, Tr)


@pytest.mark.parametrize("d", range(1, 9))
def test_joukowski_semiconjugacy(d):
    u = joukowski_map()
    assert verify_semiconjugacy(u, power_map(d), chebyshev(d).as_map())
    if d >= 2:
        assert not verify_semiconjugacy(u, power_map(d), chebyshev(d + 1).as_map())


def test_power_map_forms():
    assert power_map(3).p == (0, 0, 0, 1) and power_map(3).q == (1, 0, 0, 0)
    assert evaluate(power_map(-2), ProjPoint(3)) == ProjPoint(1, 9)


# ---------------------------------------------------------------------------
# elliptic curves: an independent Jacobian-coordinate group law as oracle


def jac_double(E, P):
    X, Y, Z = P
    if Y == 0 or Z == 0:
        return (1, 1, 0)
    S = 4 * X * Y * Y
    M = 3 * X * X + E.a * Z**4
    X3 = M * M - 2 * S
    return (X3, M * (S - X3) - 8 * Y**4, 2 * Y * Z)


def jac_add(E, P, Q):
    if P[2] == 0:
        return Q
    if Q[2] == 0:
        return P
    U1, U2 = P[0] * Q[2] ** 2, Q[0] * P[2] ** 2
    S1, S2 = P[1] * Q[2] ** 3, Q[1] * P[2] ** 3
    if U1 == U2:
        return jac_double(E, P) if S1 == S2 else (1, 1, 0)
    H, R = U2 - U1, S2 - S1
    X3 = R * R - H**3 - 2 * U1 * H * H
    return (X3, R * (U1 * H * H - X3) - S1 * H**3, H * P[2] * Q[2])


def jac_x_of_multiple(E, m, P):
    acc, base = (1, 1, 0), (P[0], P[1], Fraction(1))
    for bit in bin(abs(m))[2:]:
        acc = jac_add(E, acc, acc)
        if bit == "1":
            acc = jac_add(E, acc, base)
    return None if acc[2] == 0 else acc[0] / acc[2] ** 2


def curve_through(rng):
    """A random curve with two known rational points."""
    while True:
        x0, y0 = Fraction(rng.randrange(-4, 5)), Fraction(rng.randrange(1, 5))
        x1 = Fraction(rng.randrange(-4, 5))
        if x1 == x0:
            continue
        a = Fraction(rng.randrange(-5, 6))
        b = y0 * y0 - x0**3 - a * x0
        E = EllipticCurveQ(a, b)
        if E.discriminant == 0:
            continue
        return E, (x0, y0)


def points_on(E, P, count, rng):
    pts, cur = [], P
    while len(pts) < count:
        pts.append(cur)
        nxt = E.add(cur, P if rng.random() < 0.7 else E.neg(P))
        cur = nxt if nxt is not None else E.add(nxt, P)
        if cur is None or len(pts) > 4 and rng.random() < 0.2:
            cur = E.mul(rng.randrange(-3, 4) or 1, P)
            if cur is None:
                cur = P
    return pts


def test_group_law_agrees_with_oracle():
    E = EllipticCurveQ(Fraction(-2), Fraction(1))
    P = (Fraction(0), Fraction(1))
    for m in range(1, 8):
        mP = E.mul(m, P)
        assert E.contains(mP)
        assert (None if mP is None else mP[0]) == jac_x_of_multiple(E, m, P)


def test_singular_curve_rejected():
    with pytest.raises(SingularCurve):
        EllipticCurveQ(Fraction(0), Fraction(0))


def test_torsion_point_of_order_six():
    E = EllipticCurveQ(Fraction(0), Fraction(1))
    P = (Fraction(2), Fraction(3))
    assert E.mul(6, P) is None and E.mul(3, P) is not None
    f = E.division_polynomials(3)
    assert f[3](Fraction(0)) == 0  # (0, +-1) has order 3


@pytest.mark.parametrize("m", [2, 3, 4, -2, -3, -4])
def test_lattes_degree(m):
    rng = random.Random(abs(m) * 10 + (m < 0))
    for _ in range(5):
        E, _ = curve_through(rng)
        assert lattes_from_curve(E, m).map.degree == m * m


def test_lattes_matches_multiplication_on_points():
    rng = random.Random(5)
    for m in (2, 3):
        E, P = curve_through(rng)
        L = lattes_from_curve(E, m)
        for Q in points_on(E, P, 50, rng):
            assert L.check_point(Q)
            want = jac_x_of_multiple(E, m, Q)
            xQ = INFINITY if Q is None else ProjPoint.from_rat(Q[0])
            assert evaluate(L.map, xQ) == (INFINITY if want is None else ProjPoint.from_rat(want))


def test_lattes_composition():
    E = EllipticCurveQ(Fraction(-1), Fraction(1))
    f2, f3, f6 = (lattes_from_curve(E, m).map for m in (2, 3, 6))
    assert compose(f2, f3) == f6 == compose(f3, f2)


def test_lattes_known_map():
    L = lattes_from_curve(EllipticCurveQ(Fraction(0), Fraction(1)), 2)
    assert L.map == RatMap1([0, -8, 0, 0, 1], [4, 0, 0, 4, 0])


# ---------------------------------------------------------------------------
# classification


def _check(c, f):
    if isinstance(c, PowerLike):
        assert conjugate(f, c.sigma) == power_map(c.exponent)
    elif isinstance(c, ChebyshevLike):
        assert conjugate(f, c.sigma) == chebyshev(c.degree).as_map(c.sign)


@settings(max_examples=20)
@given(mobius_maps(), st.integers(2, 4), st.sampled_from([1, -1]))
def test_conjugated_powers_are_recognized(sigma, d, sign):
    f = conjugate(power_map(sign * d), sigma)
    c = classify_exceptional(f)
    assert isinstance(c, PowerLike) and abs(c.exponent) == d
    _check(c, f)


@settings(max_examples=20)
@given(mobius_maps(), st.integers(2, 5), st.sampled_from([1, -1]))
def test_conjugated_chebyshev_is_recognized(sigma, d, sign):
    f = conjugate(chebyshev(d).as_map(sign), sigma)
    c = classify_exceptional(f)
    assert isinstance(c, ChebyshevLike) and c.degree == d
    _check(c, f)


def test_non_exceptional_maps_are_unknown():
    for f in (RatMap1.polynomial([-1, 0, 1]), RatMap1.polynomial([1, 1, 1]), RatMap1([1, 0, 1], [1, 1, 0])):
        c = classify_exceptional(f)
        assert isinstance(c, Unknown)
        assert classification_to_json(c)["kind"] == "unknown"


def test_kth_roots():
    assert sorted(rational_kth_roots(Fraction(8, 27), 3)) == [Fraction(2, 3)]
    assert sorted(rational_kth_roots(Fraction(4), 2)) == [-2, 2]
    assert rational_kth_roots(Fraction(2), 2) == []
