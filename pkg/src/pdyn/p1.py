"""Dynamics on the projective line over Q.

Points are normalized integer pairs, maps are coprime pairs of binary forms
stored homogeneously so that infinity needs no special casing.
"""
from __future__ import annotations

import os
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence

from . import kernels
from .algebra import UniPoly, clear_denominators, rational_roots, to_rat, uni_gcd
from .errors import DegreeOverflow, InvariantViolation, ParseError

DEFAULT_MONOMIAL_BUDGET = 10**6


def monomial_budget() -> int:
    """Degree cap for iterates; ``PDYN_MONOMIAL_BUDGET`` overrides the default."""
    raw = os.environ.get("PDYN_MONOMIAL_BUDGET")
    if raw:
        try:
            return int(raw)
        except ValueError:
            raise ParseError(f"PDYN_MONOMIAL_BUDGET must be an integer, got {raw!r}")
    return DEFAULT_MONOMIAL_BUDGET


class ProjPoint(tuple):
    """A point (a : b) of P^1(Q): coprime integers, b >= 0, infinity is (1 : 0)."""

    __slots__ = ()

    def __new__(cls, a, b=1):
        if isinstance(a, Fraction) or isinstance(b, Fraction):
            a, b = Fraction(a), Fraction(b)
            den = a.denominator * b.denominator
            a, b = a.numerator * (den // a.denominator), b.numerator * (den // b.denominator)
        return tuple.__new__(cls, kernels.normalize_pair(int(a), int(b)))

    @classmethod
    def _raw(cls, a: int, b: int) -> "ProjPoint":
        return tuple.__new__(cls, (a, b))

    @classmethod
    def from_rat(cls, r) -> "ProjPoint":
        r = to_rat(r)
        return cls._raw(r.numerator, r.denominator)

    @classmethod
    def parse(cls, text) -> "ProjPoint":
        if isinstance(text, (list, tuple)) and len(text) == 2:
            return cls(int(text[0]), int(text[1]))
        if isinstance(text, str) and text.strip().lower() in ("inf", "infinity", "oo"):
            return INFINITY
        return cls.from_rat(to_rat(text))

    @property
    def a(self) -> int:
        return self[0]

    @property
    def b(self) -> int:
        return self[1]

    def is_infinity(self) -> bool:
        return self[1] == 0

    def to_rat(self) -> Fraction:
        if self[1] == 0:
            raise ValueError("the point at infinity has no affine value")
        return Fraction(self[0], self[1])

    @property
    def height(self) -> int:
        """max(|numerator|, |denominator|); infinity has height 1."""
        return max(abs(self[0]), self[1])

    def __str__(self):
        if self[1] == 0:
            return "inf"
        return str(self[0]) if self[1] == 1 else f"{self[0]}/{self[1]}"

    def __repr__(self):
        return f"ProjPoint({self})"


INFINITY = ProjPoint._raw(1, 0)
ZERO = ProjPoint._raw(0, 1)


def points_of_height(H: int) -> list:
    """All points of P^1(Q) of height <= H, sorted by (height, a, b)."""
    pts = [INFINITY]
    for b in range(1, H + 1):
        for a in range(-H, H + 1):
            if gcd(a, b) == 1:
                pts.append(ProjPoint._raw(a, b))
    pts.sort(key=lambda p: (p.height, p[0], p[1]))
    return pts


class Mobius:
    """x -> (a x + b) / (c x + d) with nonzero determinant, entries up to common scalar."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        vals = [to_rat(v) for v in (a, b, c, d)]
        if vals[0] * vals[3] - vals[1] * vals[2] == 0:
            raise InvariantViolation("nonzero determinant", "Mobius matrix is singular")
        ints = clear_denominators(vals)
        # canonical sign: first nonzero entry positive
        if next(v for v in ints if v) < 0:
            ints = [-v for v in ints]
        self.a, self.b, self.c, self.d = ints

    @classmethod
    def identity(cls) -> "Mobius":
        return cls(1, 0, 0, 1)

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def inverse(self) -> "Mobius":
        return Mobius(self.d, -self.b, -self.c, self.a)

    def __matmul__(self, other: "Mobius") -> "Mobius":
        """Composition self o other."""
        return Mobius(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __call__(self, p: ProjPoint) -> ProjPoint:
        return ProjPoint(self.a * p[0] + self.b * p[1], self.c * p[0] + self.d * p[1])

    def as_map(self) -> "RatMap1":
        return RatMap1((self.b, self.a), (self.d, self.c))

    def __eq__(self, other):
        return isinstance(other, Mobius) and (self.a, self.b, self.c, self.d) == (other.a, other.b, other.c, other.d)

    def __hash__(self):
        return hash((self.a, self.b, self.c, self.d))

    def __repr__(self):
        return f"Mobius({self.a}, {self.b}, {self.c}, {self.d})"

    def to_json(self) -> list:
        return [[str(self.a), str(self.b)], [str(self.c), str(self.d)]]

    @classmethod
    def from_json(cls, data) -> "Mobius":
        try:
            (a, b), (c, d) = data
        except (TypeError, ValueError) as exc:
            raise ParseError("Mobius matrix must be [[a, b], [c, d]]") from exc
        return cls(to_rat(a), to_rat(b), to_rat(c), to_rat(d))

    @classmethod
    def sending(cls, zero_to: ProjPoint, inf_to: ProjPoint) -> "Mobius":
        """The map with 0 -> zero_to and infinity -> inf_to (and 1 -> their sum)."""
        return cls(inf_to[0], zero_to[0], inf_to[1], zero_to[1])


class RatMap1:
    """Self-map of P^1 given by coprime binary forms (P : Q) of common degree d >= 1.

    ``p[i]`` is the coefficient of X^i Y^(d-i), so the affine map is
    sum(p_i x^i) / sum(q_i x^i).  Coefficients are coprime integers with the
    top nonzero coefficient of Q positive.
    """

    __slots__ = ("p", "q", "_hash")

    def __init__(self, p: Sequence, q: Sequence, *, reduce: bool = True):
        p = [to_rat(c) for c in p]
        q = [to_rat(c) for c in q]
        n = max(len(p), len(q))
        p += [Fraction(0)] * (n - len(p))
        q += [Fraction(0)] * (n - len(q))
        num, den = UniPoly(p), UniPoly(q)
        if num.is_zero() and den.is_zero():
            raise InvariantViolation("coprime forms", "both forms vanish identically")
        g = uni_gcd(num, den)
        common_at_inf = (n == 0) or (p[-1] == 0 and q[-1] == 0)
        if g.degree > 0 or common_at_inf:
            if not reduce:
                raise InvariantViolation("coprime forms", "P and Q share a common factor")
            num, den = num // g, den // g
        d = max(num.degree, den.degree)
        if d < 1:
            raise InvariantViolation("degree >= 1", "the map is constant")
        pc = [num[i] for i in range(d + 1)]
        qc = [den[i] for i in range(d + 1)]
        ints = clear_denominators(pc + qc)
        top_q = next(v for v in reversed(ints[d + 1:]) if v) if any(ints[d + 1:]) else ints[d]
        if top_q < 0:
            ints = [-v for v in ints]
        self.p = tuple(ints[: d + 1])
        self.q = tuple(ints[d + 1:])
        self._hash = None

    @classmethod
    def _raw(cls, p: Sequence[int], q: Sequence[int]) -> "RatMap1":
        """Trusted constructor for coprime forms; only normalizes content and sign."""
        ints = list(p) + list(q)
        d = len(p) - 1
        g = 0
        for v in ints:
            g = gcd(g, v)
        if g > 1:
            ints = [v // g for v in ints]
        top_q = next((v for v in reversed(ints[d + 1:]) if v), 0)
        if top_q < 0:
            ints = [-v for v in ints]
        obj = cls.__new__(cls)
        obj.p = tuple(ints[: d + 1])
        obj.q = tuple(ints[d + 1:])
        obj._hash = None
        return obj

    @classmethod
    def identity(cls) -> "RatMap1":
        return cls._raw((0, 1), (1, 0))

    @classmethod
    def from_affine(cls, num, den=1) -> "RatMap1":
        num = num if isinstance(num, UniPoly) else UniPoly(num) if not isinstance(num, (int, Fraction)) else UniPoly.constant(num)
        den = den if isinstance(den, UniPoly) else UniPoly(den) if not isinstance(den, (int, Fraction)) else UniPoly.constant(den)
        return cls(num.coeffs, den.coeffs)

    @classmethod
    def polynomial(cls, coeffs: Iterable) -> "RatMap1":
        return cls.from_affine(UniPoly(coeffs), 1)

    @property
    def degree(self) -> int:
        return len(self.p) - 1

    @property
    def num(self) -> UniPoly:
        return UniPoly(self.p)

    @property
    def den(self) -> UniPoly:
        return UniPoly(self.q)

    def is_polynomial(self) -> bool:
        """True when infinity is totally invariant: Q = c * Y^d."""
        return not any(self.q[1:])

    def __eq__(self, other):
        return isinstance(other, RatMap1) and self.p == other.p and self.q == other.q

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.p, self.q))
        return self._hash

    def __call__(self, pt: ProjPoint) -> ProjPoint:
        return evaluate(self, pt)

    def to_str(self) -> str:
        n, d = self.num, self.den
        if d.degree == 0:
            inv = 1 / d.lc
            return (n * inv).to_str()
        return f"({n.to_str()})/({d.to_str()})"

    def __repr__(self):
        return f"RatMap1({self.to_str()!r})"

    def to_json(self) -> dict:
        return {"P": [str(c) for c in self.p], "Q": [str(c) for c in self.q]}


def _form_powers(f: Sequence[int], k: int) -> list:
    out = [[1]]
    for _ in range(k):
        out.append(kernels.poly_mul(out[-1], list(f)))
    return out


def compose(f: RatMap1, g: RatMap1) -> RatMap1:
    """f o g.  Composites of coprime forms are coprime, so only content is removed."""
    d = f.degree
    e = g.degree
    Pp = _form_powers(g.p, d)
    Qp = _form_powers(g.q, d)
    size = d * e + 1
    P = [0] * size
    Q = [0] * size
    for i in range(d + 1):
        if f.p[i] or f.q[i]:
            term = kernels.poly_mul(Pp[i], Qp[d - i])
            for k, v in enumerate(term):
                if v:
                    P[k] += f.p[i] * v
                    Q[k] += f.q[i] * v
    return RatMap1._raw(P, Q)


def iterate(f: RatMap1, m: int, budget: int | None = None) -> RatMap1:
    """f^m by repeated squaring; f^0 is the identity."""
    if m < 0:
        raise ValueError("iterate count must be non-negative")
    cap = monomial_budget() if budget is None else budget
    if m and f.degree > 1 and f.degree**m > cap:
        raise DegreeOverflow(f"deg(f)^{m} = {f.degree}^{m} exceeds the degree cap {cap}")
    result = RatMap1.identity()
    base = f
    while m:
        if m & 1:
            result = compose(result, base)
        m >>= 1
        if m:
            base = compose(base, base)
    return result


def evaluate(f: RatMap1, pt: ProjPoint) -> ProjPoint:
    a, b = pt
    return ProjPoint._raw(*kernels.normalize_pair(kernels.hom_eval(f.p, a, b), kernels.hom_eval(f.q, a, b)))


def orbit(f: RatMap1, pt: ProjPoint, n: int) -> list:
    """[pt, f(pt), ..., f^n(pt)]."""
    return [ProjPoint._raw(a, b) for a, b in kernels.orbit(f.p, f.q, pt[0], pt[1], n)]


@lru_cache(maxsize=200_000)
def _preimages(f: RatMap1, t: ProjPoint) -> tuple:
    a, b = t
    poly = [b * pc - a * qc for pc, qc in zip(f.p, f.q)]
    out = []
    if poly[-1] == 0:
        out.append(INFINITY)
    if any(poly):
        out.extend(ProjPoint.from_rat(r) for r in rational_roots(UniPoly(poly)))
    return tuple(sorted(out, key=lambda p: (p.height, p[0], p[1])))


def point_preimages(f: RatMap1, t: ProjPoint) -> frozenset:
    """All Q-rational x with f(x) = t, including infinity when it qualifies."""
    return frozenset(_preimages(f, t))


def conjugate(f: RatMap1, sigma: Mobius) -> RatMap1:
    """sigma^-1 o f o sigma: the map f written in the coordinate that sigma parametrizes.

    With sigma(x) = 2x this turns x^2 - 2 into 2x^2 - 1.
    """
    s = sigma.as_map()
    return compose(sigma.inverse().as_map(), compose(f, s))


def map_from_json(data) -> RatMap1:
    """Accept ``{"P": [...], "Q": [...]}`` or the affine ``{"num": "...", "den": "..."}``."""
    from .polytext import parse_poly

    if not isinstance(data, dict):
        raise ParseError("a map must be a JSON object")
    if "P" in data or "Q" in data:
        if "P" not in data or "Q" not in data:
            raise ParseError("map needs both 'P' and 'Q'", "P/Q")
        P = [to_rat(c) for c in data["P"]]
        Q = [to_rat(c) for c in data["Q"]]
        if len(P) != len(Q):
            raise ParseError("'P' and 'Q' must list the same number of coefficients", "P/Q")
        return RatMap1(P, Q, reduce=False)
    if "num" in data:
        num = parse_poly(str(data["num"]), ["x"]).to_univariate(0)
        den = parse_poly(str(data.get("den", "1")), ["x"]).to_univariate(0)
        return RatMap1.from_affine(num, den)
    raise ParseError("map must have 'P'/'Q' or 'num'/'den'")


__all__ = [
    "ProjPoint",
    "INFINITY",
    "ZERO",
    "Mobius",
    "RatMap1",
    "compose",
    "iterate",
    "evaluate",
    "orbit",
    "point_preimages",
    "conjugate",
    "points_of_height",
    "map_from_json",
    "monomial_budget",
]
