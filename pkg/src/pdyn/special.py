"""Power maps, Chebyshev polynomials and Lattes maps, with semiconjugacy checks
and a sound but partial recognizer for maps conjugate over Q to x^(+-d) or +-T_d.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Tuple, Union

from .algebra import UniPoly, rational_roots, to_rat
from .errors import InvariantViolation, SingularCurve
from .p1 import INFINITY, ZERO, Mobius, ProjPoint, RatMap1, compose, conjugate, evaluate

# ---------------------------------------------------------------------------
# Chebyshev


@dataclass(frozen=True)
class ChebyshevPoly:
    degree: int
    poly: UniPoly

    def as_map(self, sign: int = 1) -> RatMap1:
        return RatMap1.from_affine(self.poly * sign, 1)


def _chebyshev_recurrence(r: int) -> UniPoly:
    x = UniPoly.x()
    prev, cur = UniPoly.constant(1), x
    if r == 0:
        return prev
    for _ in range(r - 1):
        prev, cur = cur, 2 * x * cur - prev
    return cur


def verify_chebyshev_identity(r: int, poly: Optional[UniPoly] = None) -> bool:
    """Exact check that 2 * x^r * T((x + 1/x)/2) - (x^(2r) + 1) is the zero polynomial.

    ``poly`` defaults to the recurrence-built T_r; pass another polynomial to
    test it as a candidate.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    T = _chebyshev_recurrence(r) if poly is None else poly
    if T.degree > r:
        return False
    # x^r * ((x^2 + 1) / (2x))^k = (x^2 + 1)^k x^(r-k) / 2^k
    x2p1 = UniPoly((1, 0, 1))
    total = UniPoly()
    for k, c in enumerate(T.coeffs):
        if c:
            total = total + (x2p1**k * UniPoly.monomial(c / 2**k, r - k))
    target = UniPoly.monomial(1, 2 * r) + 1
    return (2 * total - target).is_zero()


def chebyshev(r: int) -> ChebyshevPoly:
    """T_r from T_0 = 1, T_1 = x, T_r = 2x T_(r-1) - T_(r-2), checked against its defining identity."""
    if r < 1:
        raise ValueError("Chebyshev degree must be >= 1")
    T = _chebyshev_recurrence(r)
    if not verify_chebyshev_identity(r, T):
        raise ArithmeticError(f"recurrence output for T_{r} fails the defining identity")
    return ChebyshevPoly(r, T)


def power_map(e: int) -> RatMap1:
    """x^e as (X^e : Y^e), or (Y^|e| : X^|e|) for negative e."""
    if e == 0:
        raise ValueError("exponent must be nonzero")
    k = abs(e)
    mono = [0] * k + [1]
    const = [1] + [0] * k
    return RatMap1._raw(mono, const) if e > 0 else RatMap1._raw(const, mono)


def joukowski_map() -> RatMap1:
    """u(x) = (x + 1/x)/2 = (x^2 + 1)/(2x), the map that semiconjugates x^d to T_d."""
    return RatMap1((1, 0, 1), (0, 2, 0))


def verify_semiconjugacy(u: RatMap1, inner: RatMap1, outer: RatMap1) -> bool:
    """u o inner == outer o u as reduced maps."""
    return compose(u, inner) == compose(outer, u)


# ---------------------------------------------------------------------------
# elliptic curves and Lattes maps

Point = Optional[Tuple[Fraction, Fraction]]


@dataclass(frozen=True)
class EllipticCurveQ:
    """y^2 = x^3 + a x + b over Q."""

    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", to_rat(self.a))
        object.__setattr__(self, "b", to_rat(self.b))
        if self.discriminant == 0:
            raise SingularCurve(f"y^2 = x^3 + {self.a}x + {self.b} is singular")

    @property
    def discriminant(self) -> Fraction:
        return -16 * (4 * self.a**3 + 27 * self.b**2)

    def rhs(self) -> UniPoly:
        return UniPoly((self.b, self.a, 0, 1))

    def contains(self, P: Point) -> bool:
        if P is None:
            return True
        x, y = P
        return y * y == x**3 + self.a * x + self.b

    def neg(self, P: Point) -> Point:
        return None if P is None else (P[0], -P[1])

    def add(self, P: Point, Q: Point) -> Point:
        if P is None:
            return Q
        if Q is None:
            return P
        x1, y1 = P
        x2, y2 = Q
        if x1 == x2:
            if y1 == -y2:
                return None
            lam = (3 * x1 * x1 + self.a) / (2 * y1)
        else:
            lam = (y2 - y1) / (x2 - x1)
        x3 = lam * lam - x1 - x2
        return (x3, lam * (x1 - x3) - y1)

    def mul(self, m: int, P: Point) -> Point:
        if m < 0:
            return self.mul(-m, self.neg(P))
        result: Point = None
        base = P
        while m:
            if m & 1:
                result = self.add(result, base)
            m >>= 1
            if m:
                base = self.add(base, base)
        return result

    def division_polynomials(self, n: int) -> list:
        """[f_0, ..., f_n] in x alone: psi_k = f_k for odd k and 2y f_k for even k."""
        a, b = self.a, self.b
        F = self.rhs()
        F2_16 = 16 * F * F
        f = [
            UniPoly(),
            UniPoly.constant(1),
            UniPoly.constant(1),
            UniPoly((-a * a, 12 * b, 6 * a, 0, 3)),
            2 * UniPoly((-8 * b * b - a**3, -4 * a * b, -5 * a * a, 20 * b, 5 * a, 0, 1)),
        ]
        for k in range(5, n + 1):
            m = k // 2
            if k % 2:
                if m % 2 == 0:
                    fk = F2_16 * f[m + 2] * f[m] ** 3 - f[m - 1] * f[m + 1] ** 3
                else:
                    fk = f[m + 2] * f[m] ** 3 - F2_16 * f[m - 1] * f[m + 1] ** 3
            else:
                fk = f[m] * (f[m + 2] * f[m - 1] ** 2 - f[m - 2] * f[m + 1] ** 2)
            f.append(fk)
        return f[: n + 1]

    def to_json(self) -> dict:
        return {"a": str(self.a), "b": str(self.b)}


@dataclass(frozen=True)
class LattesMap:
    curve: EllipticCurveQ
    multiplier: int
    map: RatMap1 = field(compare=False)

    def check_point(self, P: Point) -> bool:
        """f(x(P)) == x(mP), with x(O) = infinity."""
        xP = INFINITY if P is None else ProjPoint.from_rat(P[0])
        mP = self.curve.mul(self.multiplier, P)
        xmP = INFINITY if mP is None else ProjPoint.from_rat(mP[0])
        return evaluate(self.map, xP) == xmP


def lattes_from_curve(E: EllipticCurveQ, m: int) -> LattesMap:
    """The degree-m^2 map with x(mP) = f(x(P)), i.e. phi_m / psi_m^2 written in x alone."""
    if abs(m) < 2:
        raise ValueError("|m| must be at least 2")
    k = abs(m)
    f = E.division_polynomials(k + 1)
    x = UniPoly.x()
    F = E.rhs()
    if k % 2:
        num = x * f[k] ** 2 - 4 * F * f[k + 1] * f[k - 1]
        den = f[k] ** 2
    else:
        num = 4 * x * F * f[k] ** 2 - f[k + 1] * f[k - 1]
        den = 4 * F * f[k] ** 2
    g = RatMap1.from_affine(num, den)
    if g.degree != k * k:
        raise ArithmeticError(f"Lattes map for m={m} has degree {g.degree}, expected {k * k}")
    return LattesMap(E, m, g)


# ---------------------------------------------------------------------------
# recognition of power-like and Chebyshev-like maps


@dataclass(frozen=True)
class PowerLike:
    """conjugate(f, sigma) == x^exponent."""

    sigma: Mobius
    exponent: int
    kind: str = "power"


@dataclass(frozen=True)
class ChebyshevLike:
    """conjugate(f, sigma) == sign * T_degree."""

    sigma: Mobius
    sign: int
    degree: int
    kind: str = "chebyshev"


@dataclass(frozen=True)
class Unknown:
    reason: str
    witness: dict = field(default_factory=dict, compare=False)
    kind: str = "unknown"


Classification = Union[PowerLike, ChebyshevLike, Unknown]


def wronskian(f: RatMap1) -> list:
    """Coefficients of the binary form P_X Q_Y - P_Y Q_X (degree 2d - 2)."""
    d = f.degree

    def dX(c):
        return [i * c[i] for i in range(1, d + 1)]

    def dY(c):
        return [(d - i) * c[i] for i in range(d)]

    from . import kernels

    a = kernels.poly_mul(dX(f.p), dY(f.q))
    b = kernels.poly_mul(dY(f.p), dX(f.q))
    return [u - v for u, v in zip(a, b)]


def rational_critical_points(f: RatMap1) -> dict:
    """Rational critical points -> multiplicity in the Wronskian (ramification index - 1)."""
    W = wronskian(f)
    top = 2 * f.degree - 2
    out = {}
    poly = UniPoly(W)
    if poly.degree < top:
        out[INFINITY] = top - poly.degree
    for r in rational_roots(poly):
        mult = 0
        lin = UniPoly((-r, 1))
        q = poly
        while True:
            quo, rem = divmod(q, lin)
            if not rem.is_zero():
                break
            q = quo
            mult += 1
        out[ProjPoint.from_rat(r)] = mult
    return out


def _iroot(n: int, k: int) -> Optional[int]:
    """Exact integer k-th root of n >= 0, or None."""
    if n < 2:
        return n
    lo, hi = 1, 1 << (n.bit_length() // k + 1)
    while lo <= hi:
        mid = (lo + hi) // 2
        v = mid**k
        if v == n:
            return mid
        if v < n:
            lo = mid + 1
        else:
            hi = mid - 1
    return None


def rational_kth_roots(c: Fraction, k: int) -> list:
    """All rational lambda with lambda^k == c."""
    c = Fraction(c)
    if k == 1:
        return [c]
    if c == 0:
        return [Fraction(0)]
    if c < 0 and k % 2 == 0:
        return []
    n = _iroot(abs(c.numerator), k)
    d = _iroot(c.denominator, k)
    if n is None or d is None:
        return []
    root = Fraction(n, d)
    if c < 0:
        return [-root]
    return [root, -root] if k % 2 == 0 else [root]


def _power_normal_form(f: RatMap1, tot: list) -> Classification | None:
    d = f.degree
    c1, c2 = tot
    image = {evaluate(f, c1), evaluate(f, c2)}
    if image != {c1, c2}:
        return None
    sigma = Mobius.sending(zero_to=c1, inf_to=c2)
    g = conjugate(f, sigma)
    mono = [0] * d
    if list(g.p[:d]) == mono and list(g.q[1:]) == mono:
        e, c = d, Fraction(g.p[d], g.q[0])
        lams = rational_kth_roots(1 / c, d - 1)
    elif list(g.p[1:]) == mono and list(g.q[:d]) == mono:
        e, c = -d, Fraction(g.p[0], g.q[d])
        lams = rational_kth_roots(c, d + 1)
    else:
        return Unknown("critical points are totally ramified but the normal form is not monomial",
                       {"critical_points": [str(c1), str(c2)]})
    for lam in lams:
        total = sigma @ Mobius(lam, 0, 0, 1)
        if conjugate(f, total) == power_map(e):
            return PowerLike(total, e)
    return Unknown("conjugating scalar is not a rational root; an extension field is needed",
                   {"exponent": e, "scalar": str(c)})


def _chebyshev_normal_form(f: RatMap1, c: ProjPoint) -> Classification | None:
    d = f.degree
    other = ZERO if c != ZERO else ProjPoint(1)
    sigma = Mobius.sending(zero_to=other, inf_to=c)
    g = conjugate(f, sigma)
    if not g.is_polynomial():
        return None
    gd = Fraction(g.p[d], g.q[0])
    gd1 = Fraction(g.p[d - 1], g.q[0])
    for sign in (1, -1):
        target = chebyshev(d).as_map(sign)
        for alpha in rational_kth_roots(gd / (sign * 2 ** (d - 1)), d - 1):
            if alpha == 0:
                continue
            beta = alpha * gd1 / (d * gd)
            A = Mobius(alpha, beta, 0, 1)
            total = sigma @ A.inverse()
            if conjugate(f, total) == target:
                return ChebyshevLike(total, sign, d)
    return None


def classify_exceptional(f: RatMap1) -> Classification:
    """Decide whether f is conjugate over Q to x^(+-d) or +-T_d.

    The answer is verified by exact conjugation before it is returned, so a
    positive classification is always correct; ``Unknown`` may also mean the
    conjugacy exists only over an extension of Q.
    """
    d = f.degree
    if d < 2:
        raise InvariantViolation("degree >= 2", "classification needs deg f >= 2")
    crit = rational_critical_points(f)
    tot = sorted((p for p, mult in crit.items() if mult == d - 1), key=lambda p: (p.height, p[0], p[1]))
    witness = {"rational_critical_points": {str(p): m for p, m in sorted(crit.items())}}
    if len(tot) == 2 and sum(crit.values()) == 2 * d - 2:
        res = _power_normal_form(f, tot)
        if isinstance(res, PowerLike):
            return res
    for c in tot:
        if evaluate(f, c) == c:
            res = _chebyshev_normal_form(f, c)
            if res is not None:
                return res
    return Unknown("no rational conjugacy to a power map or a Chebyshev polynomial found", witness)


def classification_to_json(c: Classification) -> dict:
    if isinstance(c, PowerLike):
        return {"kind": "power", "sigma": c.sigma.to_json(), "exponent": c.exponent}
    if isinstance(c, ChebyshevLike):
        return {"kind": "chebyshev", "sigma": c.sigma.to_json(), "sign": c.sign, "degree": c.degree}
    return {"kind": "unknown", "reason": c.reason, "witness": c.witness}
