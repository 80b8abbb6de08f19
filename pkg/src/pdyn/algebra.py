"""Exact arithmetic over Q: rationals, dense univariate and sparse multivariate
polynomials, gcds, resultants, rational roots and matrix rank.

Rationals are :class:`fractions.Fraction`; every operation here is exact.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from functools import reduce
from math import gcd, isqrt, lcm
from typing import Dict, Iterable, Sequence, Tuple

from . import kernels
from .errors import ParseError, VariableAbsent, ZeroPolynomial

Rat = Fraction
Exps = Tuple[int, ...]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def to_rat(value) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ParseError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"not a rational: {value!r}") from exc
    raise ParseError(f"not a rational: {value!r}")


def rat_str(r: Fraction) -> str:
    r = Fraction(r)
    return str(r.numerator) if r.denominator == 1 else f"{r.numerator}/{r.denominator}"


def clear_denominators(values: Iterable[Fraction]) -> list:
    """Scale rationals to coprime integers (content 1), keeping the sign."""
    values = [Fraction(v) for v in values]
    den = reduce(lcm, (v.denominator for v in values), 1)
    ints = [v.numerator * (den // v.denominator) for v in values]
    g = reduce(gcd, ints, 0)
    if g > 1:
        ints = [c // g for c in ints]
    return ints


# ---------------------------------------------------------------------------
# univariate


class UniPoly:
    """Dense polynomial in one variable with rational coefficients, low degree first."""

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable = ()):
        cs = [to_rat(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: Tuple[Fraction, ...] = tuple(cs)
        self._hash = None

    @classmethod
    def x(cls) -> "UniPoly":
        return cls((0, 1))

    @classmethod
    def constant(cls, c) -> "UniPoly":
        return cls((c,))

    @classmethod
    def monomial(cls, c, e: int) -> "UniPoly":
        return cls([0] * e + [c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else _ZERO

    def __getitem__(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else _ZERO

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = UniPoly.constant(other)
        return isinstance(other, UniPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("UniPoly", self.coeffs))
        return self._hash

    def __add__(self, other):
        other = _as_uni(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly(self[i] + other[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return UniPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-_as_uni(other))

    def __rsub__(self, other):
        return _as_uni(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return UniPoly(c * other for c in self.coeffs)
        other = _as_uni(other)
        if self.is_zero() or other.is_zero():
            return UniPoly()
        out = [_ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power")
        result, base = UniPoly((1,)), self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __divmod__(self, other):
        other = _as_uni(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return UniPoly(), self
        quo = [_ZERO] * (dq + 1)
        lead = other.lc
        db = other.degree
        for k in range(dq, -1, -1):
            c = rem[k + db] / lead
            quo[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return UniPoly(quo), UniPoly(rem[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, x):
        acc = _ZERO if not isinstance(x, UniPoly) else UniPoly()
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose(self, inner: "UniPoly") -> "UniPoly":
        return self(inner) if not self.is_zero() else UniPoly()

    def derivative(self) -> "UniPoly":
        return UniPoly(i * c for i, c in enumerate(self.coeffs) if i)

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        return self * (1 / self.lc)

    def integer_coeffs(self) -> list:
        """Coefficients scaled to coprime integers with positive leading term."""
        if self.is_zero():
            return []
        ints = clear_denominators(self.coeffs)
        if ints[-1] < 0:
            ints = [-c for c in ints]
        return ints

    def primitive(self) -> "UniPoly":
        return UniPoly(self.integer_coeffs())

    def __repr__(self):
        return f"UniPoly({self.to_str()!r})"

    def to_str(self, var: str = "x") -> str:
        items = [((i,), c) for i, c in reversed(list(enumerate(self.coeffs))) if c]
        return _format_terms(items, (var,))


def _as_uni(p) -> UniPoly:
    if isinstance(p, UniPoly):
        return p
    return UniPoly.constant(p)


def uni_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd over Q (the gcd of two zero polynomials is zero)."""
    while not b.is_zero():
        a, b = b, (a % b).monic()
    return a.monic()


def uni_squarefree(p: UniPoly) -> UniPoly:
    if p.is_zero():
        raise ZeroPolynomial("squarefree part of the zero polynomial")
    if p.degree <= 1:
        return p.monic()
    g = uni_gcd(p, p.derivative())
    return (p // g).monic()


# ---------------------------------------------------------------------------
# rational roots


_SMALL_COEFF = 10**6


def factorize(n: int) -> Dict[int, int]:
    """Prime factorization of |n| by trial division."""
    n = abs(n)
    out: Dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def divisors(n: int) -> list:
    """Positive divisors of |n| (n != 0), by trial-division factorization."""
    if n == 0:
        raise ValueError("0 has infinitely many divisors")
    divs = [1]
    for p, e in factorize(n).items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def _roots_by_divisors(F: list) -> set:
    found = set()
    for q in divisors(F[-1]):
        for p in divisors(F[0]):
            for s in (p, -p):
                if gcd(s, q) == 1 and kernels.hom_eval(F, s, q) == 0:
                    found.add(Fraction(s, q))
    return found


def _primes_from(start: int):
    n = start
    while True:
        if n > 1 and all(n % d for d in range(2, isqrt(n) + 1)):
            yield n
        n += 1


def _trim_mod(cs, p):
    cs = [c % p for c in cs]
    while cs and cs[-1] == 0:
        cs.pop()
    return cs


def _divmod_mod_p(a, b, p):
    a = list(a)
    inv = pow(b[-1], -1, p)
    db = len(b) - 1
    for k in range(len(a) - 1 - db, -1, -1):
        c = a[k + db] * inv % p
        if c:
            for j, bj in enumerate(b):
                a[k + j] = (a[k + j] - c * bj) % p
    return _trim_mod(a[:db], p)


def _gcd_degree_mod_p(a, b, p) -> int:
    a, b = _trim_mod(a, p), _trim_mod(b, p)
    while b:
        a, b = b, _divmod_mod_p(a, b, p)
    return len(a) - 1


def _squarefree_mod_p(F, p) -> bool:
    dF = [i * c for i, c in enumerate(F)][1:]
    return _gcd_degree_mod_p(F, dF, p) == 0


def _eval_mod(F, x, m):
    acc = 0
    for c in reversed(F):
        acc = (acc * x + c) % m
    return acc


def _rational_reconstruct(r: int, N: int):
    bound = isqrt(N // 2)
    r0, r1 = N, r % N
    t0, t1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if t1 == 0 or abs(t1) > bound:
        return None
    return Fraction(r1, t1)


def _roots_by_lifting(F: list) -> set:
    """Rational roots of a squarefree-mod-p integer polynomial via Hensel lifting.

    Every rational root u/v has u | F[0] and v | F[-1]; it reduces to a simple
    root mod a prime p not dividing the leading coefficient, whose unique lift
    mod N > 2 max(|F[0]|, |F[-1]|)^2 rationally reconstructs to u/v.
    """
    lead = F[-1]
    prime = None
    for cand in itertools.islice(_primes_from(101), 40):
        if lead % cand and _squarefree_mod_p(F, cand):
            prime = cand
            break
    if prime is None:
        return None
    bound = 2 * max(abs(F[0]), abs(lead)) ** 2
    dF = [i * c for i, c in enumerate(F)][1:]
    found = set()
    for r in kernels.roots_mod_p(F, prime):
        M = prime
        while M <= bound:
            M = M * M
            r = (r - _eval_mod(F, r, M) * pow(_eval_mod(dF, r, M), -1, M)) % M
        cand = _rational_reconstruct(r, M)
        if cand is not None and kernels.hom_eval(F, cand.numerator, cand.denominator) == 0:
            found.add(cand)
    return found


def rational_roots(p: UniPoly) -> frozenset:
    """All rational roots of ``p`` (the point at infinity is the caller's business).

    Small coefficients go through the rational root theorem (divisors of the
    constant term over divisors of the leading term, each candidate checked by
    exact evaluation); large ones through p-adic lifting, which needs no
    integer factorization.
    """
    if not isinstance(p, UniPoly):
        p = UniPoly(p)
    if p.is_zero():
        raise ZeroPolynomial("rational roots of the zero polynomial")
    F = p.integer_coeffs()
    roots = set()
    k = 0
    while F[k] == 0:
        k += 1
    if k:
        roots.add(_ZERO)
        F = F[k:]
    if len(F) == 1:
        return frozenset(roots)
    if len(F) == 2:
        roots.add(Fraction(-F[0], F[1]))
        return frozenset(roots)
    if max(abs(F[0]), abs(F[-1])) <= _SMALL_COEFF:
        roots |= _roots_by_divisors(F)
        return frozenset(roots)
    found = _roots_by_lifting(F)
    if found is None:
        G = uni_squarefree(UniPoly(F)).integer_coeffs()
        found = _roots_by_lifting(G) if len(G) > 2 else {Fraction(-G[0], G[1])} if len(G) == 2 else set()
        if found is None:
            found = _roots_by_divisors(G)
    roots |= found
    return frozenset(roots)


# ---------------------------------------------------------------------------
# multivariate


def _grlex_key(e: Exps):
    return (sum(e), e)


class MultiPoly:
    """Sparse polynomial in ``arity`` variables over Q.

    ``terms`` maps exponent tuples to nonzero Fractions.
    """

    __slots__ = ("arity", "terms", "_hash")

    def __init__(self, terms: Dict[Exps, object] | Iterable = (), arity: int | None = None):
        items = terms.items() if isinstance(terms, dict) else terms
        clean: Dict[Exps, Fraction] = {}
        for e, c in items:
            e = tuple(int(x) for x in e)
            if arity is None:
                arity = len(e)
            elif len(e) != arity:
                raise ValueError(f"exponent {e} does not have length {arity}")
            if any(x < 0 for x in e):
                raise ValueError(f"negative exponent in {e}")
            c = to_rat(c)
            if c:
                s = clean.get(e, _ZERO) + c
                if s:
                    clean[e] = s
                else:
                    clean.pop(e, None)
        if arity is None:
            raise ValueError("arity is required for an empty polynomial")
        self.arity = arity
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[Exps, Fraction], arity: int) -> "MultiPoly":
        obj = cls.__new__(cls)
        obj.arity = arity
        obj.terms = terms
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, arity: int) -> "MultiPoly":
        return cls._raw({}, arity)

    @classmethod
    def constant(cls, c, arity: int) -> "MultiPoly":
        c = to_rat(c)
        return cls._raw({(0,) * arity: c} if c else {}, arity)

    @classmethod
    def one(cls, arity: int) -> "MultiPoly":
        return cls.constant(1, arity)

    @classmethod
    def var(cls, i: int, arity: int) -> "MultiPoly":
        e = [0] * arity
        e[i] = 1
        return cls._raw({tuple(e): _ONE}, arity)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Fraction:
        return self.terms.get((0,) * self.arity, _ZERO)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=-1)

    def min_degree_in(self, i: int) -> int:
        return min((e[i] for e in self.terms), default=-1)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def variables(self) -> list:
        return [i for i in range(self.arity) if self.degree_in(i) > 0]

    def leading_term(self):
        """(exponents, coefficient) of the graded-lex leading monomial."""
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.constant(other, self.arity)
        return isinstance(other, MultiPoly) and self.arity == other.arity and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.arity, frozenset(self.terms.items())))
        return self._hash

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.arity != self.arity:
                raise ValueError(f"arity mismatch: {self.arity} vs {other.arity}")
            return other
        return MultiPoly.constant(other, self.arity)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, _ZERO) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return MultiPoly._raw(out, self.arity)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw({e: -c for e, c in self.terms.items()}, self.arity)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "MultiPoly":
        c = to_rat(c)
        if not c:
            return MultiPoly.zero(self.arity)
        return MultiPoly._raw({e: v * c for e, v in self.terms.items()}, self.arity)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        out: Dict[Exps, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, _ZERO) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return MultiPoly._raw(out, self.arity)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result, base = MultiPoly.one(self.arity), self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def derivative(self, i: int) -> "MultiPoly":
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                out[tuple(ne)] = c * e[i]
        return MultiPoly._raw(out, self.arity)

    def evaluate(self, point: Sequence) -> Fraction:
        total = _ZERO
        point = [to_rat(v) for v in point]
        for e, c in self.terms.items():
            t = c
            for v, k in zip(point, e):
                if k:
                    t *= v**k
            total += t
        return total

    def substitute(self, values: Dict[int, object]) -> "MultiPoly":
        """Set the listed variables to rationals; arity is unchanged."""
        vals = {i: to_rat(v) for i, v in values.items()}
        out: Dict[Exps, Fraction] = {}
        for e, c in self.terms.items():
            ne = list(e)
            for i, v in vals.items():
                if ne[i]:
                    c = c * v ** ne[i]
                    ne[i] = 0
            if c:
                ne = tuple(ne)
                s = out.get(ne, _ZERO) + c
                if s:
                    out[ne] = s
                else:
                    out.pop(ne, None)
        return MultiPoly._raw(out, self.arity)

    def coefficients_in(self, i: int) -> Dict[int, "MultiPoly"]:
        """View as a polynomial in variable ``i``: power -> coefficient (x_i removed)."""
        out: Dict[int, Dict[Exps, Fraction]] = {}
        for e, c in self.terms.items():
            ne = e[:i] + (0,) + e[i + 1:]
            out.setdefault(e[i], {})[ne] = c
        return {k: MultiPoly._raw(v, self.arity) for k, v in out.items()}

    def to_univariate(self, i: int) -> UniPoly:
        if any(e[j] for e in self.terms for j in range(self.arity) if j != i):
            raise ValueError("polynomial involves other variables")
        deg = max(self.degree_in(i), 0)
        cs = [_ZERO] * (deg + 1)
        for e, c in self.terms.items():
            cs[e[i]] = c
        return UniPoly(cs)

    @classmethod
    def from_univariate(cls, p: UniPoly, i: int, arity: int) -> "MultiPoly":
        out = {}
        for k, c in enumerate(p.coeffs):
            if c:
                e = [0] * arity
                e[i] = k
                out[tuple(e)] = c
        return cls._raw(out, arity)

    def drop_variable(self, i: int) -> "MultiPoly":
        if self.degree_in(i) > 0:
            raise ValueError(f"variable {i} still occurs")
        return MultiPoly._raw({e[:i] + e[i + 1:]: c for e, c in self.terms.items()}, self.arity - 1)

    def embed(self, positions: Sequence[int], arity: int) -> "MultiPoly":
        """Re-index variable j as ``positions[j]`` in a ring of the given arity."""
        out = {}
        for e, c in self.terms.items():
            ne = [0] * arity
            for j, k in enumerate(e):
                ne[positions[j]] += k
            out[tuple(ne)] = c
        return MultiPoly._raw(out, arity)

    def integer_terms(self) -> list:
        """Terms scaled to coprime integers, sorted by exponent."""
        keys = sorted(self.terms)
        ints = clear_denominators(self.terms[k] for k in keys)
        return list(zip(keys, ints))

    def primitive(self) -> "MultiPoly":
        """Coprime integer coefficients with positive graded-lex leading coefficient."""
        if self.is_zero():
            return self
        ints = dict(self.integer_terms())
        e, _ = self.leading_term()
        sign = -1 if ints[e] < 0 else 1
        return MultiPoly._raw({k: Fraction(sign * v) for k, v in ints.items()}, self.arity)

    def __repr__(self):
        return f"MultiPoly({self.to_str()!r}, arity={self.arity})"

    def to_str(self, names: Sequence[str] | None = None) -> str:
        if names is None:
            names = [f"x{i + 1}" for i in range(self.arity)]
        items = sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)
        return _format_terms(items, names)


def _format_terms(items, names) -> str:
    parts = []
    for e, c in items:
        mono = "*".join(
            (n if k == 1 else f"{n}^{k}") for n, k in zip(names, e) if k
        )
        c = Fraction(c)
        mag = abs(c)
        if mono:
            body = mono if mag == 1 else f"{rat_str(mag)}*{mono}"
        else:
            body = rat_str(mag)
        parts.append(("-" if c < 0 else "+", body))
    if not parts:
        return "0"
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def _lex_divmod(p: MultiPoly, q: MultiPoly):
    if q.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    lq = max(q.terms)
    cq = q.terms[lq]
    qterms = list(q.terms.items())
    rem = dict(p.terms)
    quo: Dict[Exps, Fraction] = {}
    left: Dict[Exps, Fraction] = {}
    while rem:
        e = max(rem)
        c = rem[e]
        if all(a >= b for a, b in zip(e, lq)):
            shift = tuple(a - b for a, b in zip(e, lq))
            f = c / cq
            quo[shift] = quo.get(shift, _ZERO) + f
            for e2, c2 in qterms:
                k = tuple(a + b for a, b in zip(e2, shift))
                s = rem.get(k, _ZERO) - f * c2
                if s:
                    rem[k] = s
                else:
                    rem.pop(k, None)
        else:
            left[e] = c
            del rem[e]
    return MultiPoly._raw(quo, p.arity), MultiPoly._raw(left, p.arity)


def divides(q: MultiPoly, p: MultiPoly) -> bool:
    """True iff q divides p in Q[x] (single-divisor division has a unique remainder)."""
    return _lex_divmod(p, q)[1].is_zero()


def div_exact(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    quo, rem = _lex_divmod(p, q)
    if not rem.is_zero():
        raise ArithmeticError("inexact polynomial division")
    return quo


def content(p: MultiPoly, i: int) -> MultiPoly:
    """Gcd of the coefficients of ``p`` viewed as a polynomial in variable i."""
    return reduce(poly_gcd, p.coefficients_in(i).values(), MultiPoly.zero(p.arity))


def _prem(a: MultiPoly, b: MultiPoly, v: int) -> MultiPoly:
    db = b.degree_in(v)
    bc = b.coefficients_in(v)
    lb = bc[db]
    unit = [0] * a.arity
    while not a.is_zero() and a.degree_in(v) >= db:
        da = a.degree_in(v)
        la = a.coefficients_in(v)[da]
        e = list(unit)
        e[v] = da - db
        shift = MultiPoly._raw({tuple(e): _ONE}, a.arity)
        a = lb * a - la * shift * b
    return a


def _normalize(p: MultiPoly) -> MultiPoly:
    return p.primitive() if not p.is_zero() else p


def poly_gcd(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    """Gcd over Q, normalized to be primitive with positive graded-lex leading coefficient."""
    if p.is_zero():
        return _normalize(q)
    if q.is_zero():
        return _normalize(p)
    if p.is_constant() or q.is_constant():
        return MultiPoly.one(p.arity)
    vs = sorted(set(p.variables()) | set(q.variables()))
    v = vs[-1]
    if p.degree_in(v) == 0:
        return poly_gcd(p, content(q, v))
    if q.degree_in(v) == 0:
        return poly_gcd(content(p, v), q)
    cp, cq = content(p, v), content(q, v)
    c = poly_gcd(cp, cq)
    a, b = div_exact(p, cp), div_exact(q, cq)
    if a.degree_in(v) < b.degree_in(v):
        a, b = b, a
    while True:
        r = _prem(a, b, v)
        if r.is_zero():
            g = b
            break
        if r.degree_in(v) <= 0:
            g = MultiPoly.one(p.arity)
            break
        a, b = b, div_exact(r, content(r, v))
    g = div_exact(g, content(g, v)) if g.degree_in(v) > 0 else g
    return _normalize(c * g)


def squarefree_part(p: MultiPoly, var_index: int) -> MultiPoly:
    """Remove repeated factors that involve variable ``var_index``.

    Factors free of that variable (the content) are left untouched, so applying
    this for every variable yields the full squarefree part.
    """
    if p.is_zero():
        raise ZeroPolynomial("squarefree part of the zero polynomial")
    if p.degree_in(var_index) <= 0:
        return _normalize(p)
    c = content(p, var_index)
    pp = div_exact(p, c)
    g = poly_gcd(pp, pp.derivative(var_index))
    return _normalize(c * div_exact(pp, g))


def squarefree(p: MultiPoly) -> MultiPoly:
    """Full squarefree part (product of the distinct irreducible factors, up to scalar)."""
    if p.is_zero():
        raise ZeroPolynomial("squarefree part of the zero polynomial")
    out = p
    for i in p.variables():
        out = squarefree_part(out, i)
    return _normalize(out)


def is_squarefree(p: MultiPoly) -> bool:
    return _normalize(p) == squarefree(p)


# ---------------------------------------------------------------------------
# matrices, determinants, resultants


class RatMatrix:
    """Rectangular matrix over Q."""

    __slots__ = ("rows",)

    def __init__(self, rows: Iterable[Iterable]):
        rows = [tuple(to_rat(v) for v in r) for r in rows]
        if rows and len({len(r) for r in rows}) != 1:
            raise ValueError("matrix is not rectangular")
        self.rows = tuple(rows)

    @property
    def shape(self):
        return len(self.rows), (len(self.rows[0]) if self.rows else 0)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        return isinstance(other, RatMatrix) and self.rows == other.rows

    def __repr__(self):
        return f"RatMatrix({[[rat_str(v) for v in r] for r in self.rows]})"

    def transpose(self) -> "RatMatrix":
        return RatMatrix(zip(*self.rows)) if self.rows else RatMatrix([])

    def rank(self) -> int:
        return rank(self)


def rank(m) -> int:
    """Exact rank over Q by fraction-free (Bareiss) elimination with row pivoting."""
    if not isinstance(m, RatMatrix):
        m = RatMatrix(m)
    nr, nc = m.shape
    if nr == 0 or nc == 0:
        return 0
    # integer rows: scaling a row by a nonzero rational keeps the rank
    a = [clear_denominators(r) if any(r) else [0] * nc for r in m.rows]
    r = 0
    prev = 1
    for col in range(nc):
        piv = next((i for i in range(r, nr) if a[i][col]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, nr):
            for j in range(col + 1, nc):
                a[i][j] = (a[r][col] * a[i][j] - a[i][col] * a[r][j]) // prev
            a[i][col] = 0
        prev = a[r][col]
        r += 1
        if r == nr:
            break
    return r


def determinant(rows: Sequence[Sequence]):
    """Fraction-free determinant of a square matrix of MultiPoly (or rational) entries."""
    n = len(rows)
    if n == 0:
        return _ONE
    a = [list(r) for r in rows]
    sign = 1
    prev = None
    for k in range(n - 1):
        piv = next((i for i in range(k, n) if not _is_zero(a[i][k])), None)
        if piv is None:
            return _zero_like(a[0][0])
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[k][k] * a[i][j] - a[i][k] * a[k][j]
                a[i][j] = num if prev is None else _exact_div(num, prev)
        prev = a[k][k]
    d = a[n - 1][n - 1]
    return -d if sign < 0 else d


def _is_zero(x) -> bool:
    return x.is_zero() if isinstance(x, MultiPoly) else x == 0


def _zero_like(x):
    return MultiPoly.zero(x.arity) if isinstance(x, MultiPoly) else _ZERO


def _exact_div(a, b):
    if isinstance(a, MultiPoly) or isinstance(b, MultiPoly):
        if not isinstance(b, MultiPoly):
            return a.scale(1 / to_rat(b))
        if b.is_constant():
            return a.scale(1 / b.constant_value())
        return div_exact(a, b)
    return Fraction(a) / b


def sylvester_matrix(p: MultiPoly, q: MultiPoly, v: int):
    """Matrix of (A, B) -> A*p + B*q in ascending powers of x_v, p's rows first.

    Rows are x_v^j * p (j < deg q) then x_v^j * q (j < deg p); columns are the
    powers 1, x_v, ..., x_v^(deg p + deg q - 1).
    """
    m, n = p.degree_in(v), q.degree_in(v)
    pc, qc = p.coefficients_in(v), q.coefficients_in(v)
    zero = MultiPoly.zero(p.arity)
    size = m + n
    rows = []
    for j in range(n):
        rows.append([pc.get(c - j, zero) for c in range(size)])
    for j in range(m):
        rows.append([qc.get(c - j, zero) for c in range(size)])
    return rows


def resultant(p: MultiPoly, q: MultiPoly, var_index: int) -> MultiPoly:
    """Sylvester resultant eliminating ``var_index``; the result has arity one less.

    The determinant is taken of :func:`sylvester_matrix` (ascending powers,
    p's rows first), e.g. resultant(x - a, x - b) = b - a. The zero set of the
    result contains the projection of the common zeros of p and q; it can also
    contain points where both leading coefficients vanish.
    """
    if p.is_zero() or q.is_zero():
        raise ZeroPolynomial("resultant with the zero polynomial")
    if p.arity != q.arity:
        raise ValueError("arity mismatch")
    if not 0 <= var_index < p.arity:
        raise VariableAbsent(f"variable index {var_index} out of range")
    if p.degree_in(var_index) <= 0 or q.degree_in(var_index) <= 0:
        raise VariableAbsent(f"variable {var_index} does not occur in both polynomials")
    det = determinant(sylvester_matrix(p, q, var_index))
    if not isinstance(det, MultiPoly):
        det = MultiPoly.constant(det, p.arity)
    return det.drop_variable(var_index)
