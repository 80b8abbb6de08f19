from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pdyn.errors import DegreeOverflow, InvariantViolation, ParseError
from pdyn.p1 import (
    INFINITY, Mobius, ProjPoint, RatMap1, compose, conjugate, evaluate, iterate, map_from_json,
    monomial_budget, point_preimages, points_of_height,
)

from .conftest import mobius_maps, rat_maps

points = st.one_of(
    st.just(INFINITY),
    st.builds(lambda a, b: ProjPoint(a, b), st.integers(-9, 9), st.integers(1, 9)),
)


def affine_value(f: RatMap1, x):
    """Independent evaluation at a rational x (None for infinity) by Fraction arithmetic."""
    if x is None:
        P, Q = Fraction(f.p[-1]), Fraction(f.q[-1])
    else:
        P = sum(Fraction(c) * x**i for i, c in enumerate(f.p))
        Q = sum(Fraction(c) * x**i for i, c in enumerate(f.q))
    return None if Q == 0 else P / Q


def as_affine(pt: ProjPoint):
    return None if pt.is_infinity() else pt.to_rat()


def test_points_and_heights():
    assert ProjPoint(6, -4) == ProjPoint(-3, 2)
    assert ProjPoint(5, 0) is not None and ProjPoint(5, 0) == INFINITY
    assert INFINITY.height == 1
    assert ProjPoint.parse("-3/4").height == 4
    assert str(ProjPoint.parse("inf")) == "inf"
    assert len(points_of_height(1)) == 4  # -1, 0, 1, inf
    pts = points_of_height(3)
    assert len(set(pts)) == len(pts)
    assert all(p.height <= 3 for p in pts)


def test_forms_are_normalized():
    f = RatMap1([0, 0, 2], [2, 0, 0])
    assert f.p == (0, 0, 1) and f.q == (1, 0, 0)
    # common factor (x - 1) is cancelled
    g = RatMap1([-1, 0, 1], [-1, 1, 0])
    assert g.degree == 1
    with pytest.raises(InvariantViolation):
        RatMap1([-1, 0, 1], [-1, 1, 0], reduce=False)
    with pytest.raises(InvariantViolation):
        RatMap1([3], [1])


@settings(max_examples=100)
@given(rat_maps(4), rat_maps(4))
def test_composition_multiplies_degrees(f, g):
    assert compose(f, g).degree == f.degree * g.degree


@settings(max_examples=60)
@given(rat_maps(2), points, st.integers(0, 6))
def test_iterate_matches_repeated_evaluation(f, pt, m):
    fm = iterate(f, m, budget=10**4)
    cur = pt
    for _ in range(m):
        cur = evaluate(f, cur)
    assert evaluate(fm, pt) == cur


@given(rat_maps(3), points)
def test_evaluation_matches_fraction_oracle(f, pt):
    got = evaluate(f, pt)
    want = affine_value(f, as_affine(pt))
    if want is None:
        assert got == INFINITY
    else:
        assert got == ProjPoint.from_rat(want)


@settings(max_examples=80)
@given(rat_maps(3), points)
def test_preimages_contain_the_point(f, pt):
    assert pt in point_preimages(f, evaluate(f, pt))


@given(rat_maps(3), points)
def test_preimages_are_exact(f, pt):
    for x in point_preimages(f, pt):
        assert evaluate(f, x) == pt


@given(rat_maps(3), mobius_maps())
def test_conjugation_round_trip(f, sigma):
    assert conjugate(conjugate(f, sigma), sigma.inverse()) == f


@given(rat_maps(2), mobius_maps(), points)
def test_conjugate_is_inverse_after_map_after_sigma(f, sigma, pt):
    g = conjugate(f, sigma)
    assert evaluate(g, pt) == sigma.inverse()(evaluate(f, sigma(pt)))


def test_conjugate_example():
    f = RatMap1.polynomial([-2, 0, 1])
    assert conjugate(f, Mobius(2, 0, 0, 1)) == RatMap1.polynomial([-1, 0, 2])


def test_mobius():
    s = Mobius(2, 1, 1, 1)
    assert (s @ s.inverse()) == Mobius.identity()
    with pytest.raises(InvariantViolation):
        Mobius(1, 2, 2, 4)
    t = Mobius.sending(ProjPoint(3), ProjPoint(-1))
    assert t(ProjPoint(0)) == ProjPoint(3) and t(INFINITY) == ProjPoint(-1)
    assert Mobius.from_json(s.to_json()) == s


def test_degree_cap(monkeypatch):
    f = RatMap1.polynomial([0, 0, 1])
    with pytest.raises(DegreeOverflow):
        iterate(f, 10, budget=1000)
    monkeypatch.setenv("PDYN_MONOMIAL_BUDGET", "100")
    assert monomial_budget() == 100
    with pytest.raises(DegreeOverflow):
        iterate(f, 7)
    assert iterate(f, 6).degree == 64
    monkeypatch.setenv("PDYN_MONOMIAL_BUDGET", "lots")
    with pytest.raises(ParseError):
        monomial_budget()


def test_map_json_round_trip():
    f = RatMap1([1, -3, 0, 2], [5, 0, 1, 0])
    assert map_from_json(f.to_json()) == f
    assert map_from_json({"num": "x^2 - 2"}) == RatMap1.polynomial([-2, 0, 1])
    with pytest.raises(ParseError):
        map_from_json({"P": ["1"]})
