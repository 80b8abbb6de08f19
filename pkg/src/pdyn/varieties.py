"""Split maps on (P^1)^n and the hypersurfaces and point sets they act on.

A hypersurface is stored as a multihomogeneous polynomial in the variables
X1, Y1, ..., Xn, Yn (variable 2i is X_(i+1), 2i + 1 is Y_(i+1)).  Indices in
this API are 0-based; labels inside reports and witnesses are 1-based.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional, Sequence, Union

from . import kernels
from .algebra import MultiPoly, UniPoly, divides, div_exact, poly_gcd, rank, squarefree, uni_gcd
from .errors import (
    BadDegreePattern, DegreeOverflow, InputSuspect, InvariantViolation, NotCodimOne, ParseError,
    ZeroPolynomial,
)
from .p1 import ProjPoint, RatMap1, compose, evaluate, iterate, map_from_json, monomial_budget
from .polytext import affine_names, homogeneous_names, parse_poly


# ---------------------------------------------------------------------------
# split maps


class SplitMap:
    """f = (f_1, ..., f_n) acting coordinatewise on (P^1)^n."""

    __slots__ = ("components",)

    def __init__(self, components: Iterable[RatMap1]):
        comps = tuple(components)
        if not comps:
            raise InvariantViolation("n >= 1", "a split map needs at least one component")
        for f in comps:
            if not isinstance(f, RatMap1):
                raise TypeError(f"components must be RatMap1, got {type(f).__name__}")
        self.components = comps

    @property
    def n(self) -> int:
        return len(self.components)

    @property
    def degrees(self) -> tuple:
        return tuple(f.degree for f in self.components)

    def __eq__(self, other):
        return isinstance(other, SplitMap) and self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def __repr__(self):
        return f"SplitMap({', '.join(f.to_str() for f in self.components)})"

    def __call__(self, point: Sequence[ProjPoint]) -> tuple:
        return tuple(evaluate(f, x) for f, x in zip(self.components, point))

    def iterate(self, m: int, budget: int | None = None) -> "SplitMap":
        return SplitMap(iterate(f, m, budget) for f in self.components)

    def compose(self, other: "SplitMap") -> "SplitMap":
        if other.n != self.n:
            raise ValueError("split maps of different sizes")
        return SplitMap(compose(f, g) for f, g in zip(self.components, other.components))

    def block(self, indices: Sequence[int]) -> "SplitMap":
        return SplitMap(self.components[i] for i in indices)

    def to_json(self) -> dict:
        return {"components": [f.to_json() for f in self.components]}


def split_map_from_json(data) -> SplitMap:
    if isinstance(data, list):
        comps = data
    elif isinstance(data, dict) and "components" in data:
        comps = data["components"]
    elif isinstance(data, dict):
        comps = [data]
    else:
        raise ParseError("a split map must be a map object, a list of maps, or {'components': [...]}")
    if not isinstance(comps, list) or not comps:
        raise ParseError("'components' must be a non-empty list", "components")
    return SplitMap(map_from_json(c) for c in comps)


# ---------------------------------------------------------------------------
# hypersurfaces


def _dehomogenize(h: MultiPoly) -> MultiPoly:
    """Set every Y_i = 1; the result has one variable x_i per pair."""
    n = h.arity // 2
    out = {}
    for e, c in h.terms.items():
        k = tuple(e[2 * i] for i in range(n))
        out[k] = out.get(k, 0) + c
    return MultiPoly({k: v for k, v in out.items() if v}, n)


def _homogenize(p: MultiPoly, multidegree: Sequence[int]) -> MultiPoly:
    n = p.arity
    out = {}
    for e, c in p.terms.items():
        k = []
        for i in range(n):
            if e[i] > multidegree[i]:
                raise ValueError("multidegree too small for the affine polynomial")
            k += [e[i], multidegree[i] - e[i]]
        out[tuple(k)] = c
    return MultiPoly._raw(out, 2 * n)


def multidegree_of(h: MultiPoly) -> tuple:
    """Per-pair degrees of a multihomogeneous h; raises if h is not multihomogeneous."""
    if h.is_zero():
        raise ZeroPolynomial("the zero polynomial defines no hypersurface")
    if h.arity % 2:
        raise InvariantViolation("multihomogeneous", "odd number of homogeneous variables")
    n = h.arity // 2
    degs = None
    for e in h.terms:
        cur = tuple(e[2 * i] + e[2 * i + 1] for i in range(n))
        if degs is None:
            degs = cur
        elif cur != degs:
            raise InvariantViolation(
                "multihomogeneous", f"terms of pair degrees {degs} and {cur} are mixed")
    return degs


def _univariate_squarefree(u: UniPoly) -> bool:
    return u.degree <= 0 or uni_gcd(u, u.derivative()).degree == 0


def _specializations_squarefree(p: MultiPoly) -> bool:
    """Sufficient test for squarefreeness.

    A repeated factor G^2 with deg_v G > 0 survives every specialization of the
    other variables that keeps deg_v p, so squarefree univariate
    specializations (one per variable) rule out repeated factors.
    """
    for v in p.variables():
        dv = p.degree_in(v)
        lead = p.coefficients_in(v)[dv]
        others = [i for i in p.variables() if i != v]
        for shift in range(2, 40):
            vals = {i: shift + 3 * k for k, i in enumerate(others)}
            if lead.substitute(vals).is_zero():
                continue
            u = p.substitute(vals).to_univariate(v)
            if not _univariate_squarefree(u):
                return False
            break
        else:
            return False
    return True


def squarefree_multihom(h: MultiPoly) -> MultiPoly:
    """Squarefree part of a multihomogeneous form, keeping it multihomogeneous.

    Factors Y_i (points at infinity) are invisible in the chart Y_i = 1 and are
    restored separately, with multiplicity at most one.
    """
    degs = multidegree_of(h)
    n = len(degs)
    y_power = [degs[i] - max(e[2 * i] for e in h.terms) for i in range(n)]
    aff = _dehomogenize(h)
    if not _specializations_squarefree(aff):
        aff = squarefree(aff)
    new_degs = [aff.degree_in(i) + min(y_power[i], 1) for i in range(n)]
    return _homogenize(aff, new_degs).primitive()


class Hypersurface:
    """V(h) in (P^1)^n, h squarefree and multihomogeneous of multidegree (a_1, ..., a_n)."""

    def __init__(self, h: MultiPoly, *, check_squarefree: bool = True):
        degs = multidegree_of(h)
        if not any(degs):
            raise InvariantViolation("multidegree not all zero", "a nonzero constant defines the empty set")
        h = h.primitive()
        if check_squarefree and not _specializations_squarefree(_dehomogenize(h)):
            if squarefree_multihom(h) != h:
                raise InvariantViolation("squarefree", "the defining polynomial has a repeated factor")
        if check_squarefree:
            n = len(degs)
            for i in range(n):
                if degs[i] - max(e[2 * i] for e in h.terms) > 1:
                    raise InvariantViolation("squarefree", f"Y{i + 1}^2 divides the defining polynomial")
        self.h = h
        self.multidegree = degs

    @classmethod
    def from_form(cls, h: MultiPoly) -> "Hypersurface":
        """Squarefree reduction first, then construct."""
        return cls(squarefree_multihom(h), check_squarefree=False)

    @classmethod
    def from_affine(cls, p: MultiPoly, multidegree: Sequence[int] | None = None) -> "Hypersurface":
        """Homogenize an affine polynomial in x_1..x_n (each x_i = X_i / Y_i)."""
        if p.is_zero():
            raise ZeroPolynomial("the zero polynomial defines no hypersurface")
        degs = list(multidegree) if multidegree is not None else [p.degree_in(i) for i in range(p.arity)]
        return cls.from_form(_homogenize(p, degs))

    @classmethod
    def parse(cls, text: str, n: int) -> "Hypersurface":
        return cls(parse_poly(text, homogeneous_names(n)))

    @property
    def n(self) -> int:
        return len(self.multidegree)

    @cached_property
    def int_terms(self) -> list:
        return [(e, int(c)) for e, c in sorted(self.h.terms.items())]

    def affine(self) -> MultiPoly:
        return _dehomogenize(self.h)

    def value_at(self, point: Sequence[ProjPoint]) -> int:
        if len(point) != self.n:
            raise ValueError(f"point has {len(point)} coordinates, expected {self.n}")
        return kernels.multihom_eval(self.int_terms, [p[0] for p in point], [p[1] for p in point])

    def contains(self, point: Sequence[ProjPoint]) -> bool:
        return self.value_at(point) == 0

    def __eq__(self, other):
        return isinstance(other, Hypersurface) and self.h == other.h

    def __hash__(self):
        return hash(self.h)

    def to_str(self) -> str:
        return self.h.to_str(homogeneous_names(self.n))

    def __repr__(self):
        return f"Hypersurface({self.to_str()!r}, multidegree={self.multidegree})"

    def to_json(self) -> dict:
        return {"n": self.n, "h": self.to_str(), "multidegree": list(self.multidegree)}


def hypersurface_from_json(data) -> Hypersurface:
    if not isinstance(data, dict) or "n" not in data:
        raise ParseError("a variety must be an object with 'n' and 'h' or 'affine'")
    n = data["n"]
    if not isinstance(n, int) or n < 1:
        raise ParseError("'n' must be a positive integer", "n")
    if "h" in data:
        h = data["h"]
        if isinstance(h, str):
            poly = parse_poly(h, homogeneous_names(n))
        elif isinstance(h, list):
            try:
                poly = MultiPoly([(tuple(t[0]), t[1]) for t in h], 2 * n)
            except (TypeError, ValueError, IndexError) as exc:
                raise ParseError(f"bad term list: {exc}", "h") from exc
        else:
            raise ParseError("'h' must be a string or a list of [exponents, coefficient]", "h")
        return Hypersurface(poly)
    if "affine" in data:
        poly = parse_poly(str(data["affine"]), affine_names(n))
        if n == 1 and poly.arity != 1:
            raise ParseError("affine polynomial arity mismatch", "affine")
        return Hypersurface.from_affine(poly, data.get("multidegree"))
    raise ParseError("a variety needs 'h' or 'affine'")


@dataclass(frozen=True)
class PointSet:
    """Finite set of points of (P^1)^n."""

    points: frozenset

    def __post_init__(self):
        pts = frozenset(tuple(p if isinstance(p, ProjPoint) else ProjPoint.parse(p) for p in pt)
                        for pt in self.points)
        object.__setattr__(self, "points", pts)

    def sorted(self) -> list:
        return sort_points(self.points)

    def __len__(self):
        return len(self.points)

    def __contains__(self, pt):
        return tuple(pt) in self.points


def point_key(pt: Sequence[ProjPoint]):
    return (max(p.height for p in pt), tuple((p[0], p[1]) for p in pt))


def sort_points(points) -> list:
    return sorted(points, key=point_key)


# ---------------------------------------------------------------------------
# pullback and invariance


def _form_power_table(f: RatMap1, a: int) -> list:
    """[P^e Q^(a-e) for e = 0..a] as sparse {X exponent: coeff} dicts."""
    P, Q = list(f.p), list(f.q)
    Ppow = [[1]]
    Qpow = [[1]]
    for _ in range(a):
        Ppow.append(kernels.poly_mul(Ppow[-1], P))
        Qpow.append(kernels.poly_mul(Qpow[-1], Q))
    out = []
    for e in range(a + 1):
        dense = kernels.poly_mul(Ppow[e], Qpow[a - e])
        out.append({i: c for i, c in enumerate(dense) if c})
    return out


def pullback_form(V: Hypersurface, f: SplitMap, budget: int | None = None) -> MultiPoly:
    """h(P_1, Q_1, ..., P_n, Q_n): the unreduced pullback, multidegree (c_i a_i)."""
    if f.n != V.n:
        raise ValueError(f"map acts on (P^1)^{f.n} but the variety lives in (P^1)^{V.n}")
    budget = monomial_budget() if budget is None else budget
    degs = [c * a for c, a in zip(f.degrees, V.multidegree)]
    size = 1
    for d in degs:
        size *= d + 1
    if size > budget:
        raise DegreeOverflow(f"pullback has up to {size} monomials, budget is {budget}")
    tables = [_form_power_table(fi, a) for fi, a in zip(f.components, V.multidegree)]
    acc: dict = {}
    for e, c in V.int_terms:
        partial = {(): c}
        for i, table in enumerate(tables):
            factor = table[e[2 * i]]
            nxt = {}
            for k, v in partial.items():
                for x, w in factor.items():
                    key = k + (x,)
                    nxt[key] = nxt.get(key, 0) + v * w
            partial = nxt
        for k, v in partial.items():
            acc[k] = acc.get(k, 0) + v
    terms = {}
    for k, v in acc.items():
        if v:
            ex = []
            for i, x in enumerate(k):
                ex += [x, degs[i] - x]
            terms[tuple(ex)] = Fraction(v)
    return MultiPoly._raw(terms, 2 * V.n)


def pullback(V: Hypersurface, f: SplitMap, budget: int | None = None) -> Hypersurface:
    """Set-theoretic preimage f^-1(V), squarefree."""
    return Hypersurface.from_form(pullback_form(V, f, budget))


def is_forward_invariant(V: Hypersurface, f: SplitMap) -> bool:
    """f(V) subset of V, i.e. h divides h o f."""
    return divides(V.h, pullback_form(V, f))


def _linear_pair_certifies_irreducible(V: Hypersurface) -> bool:
    """h = A X_i + B Y_i with gcd(A, B) = 1 cannot factor: one factor would divide both A and B."""
    for i, a in enumerate(V.multidegree):
        if a != 1:
            continue
        A = MultiPoly._raw({e: c for e, c in V.h.terms.items() if e[2 * i] == 1}, V.h.arity)
        B = MultiPoly._raw({e: c for e, c in V.h.terms.items() if e[2 * i] == 0}, V.h.arity)
        if A.is_zero() or B.is_zero():
            # h = X_i * A or Y_i * B, irreducible only when the cofactor is constant
            if sum(V.multidegree) == 1:
                return True
            continue
        if poly_gcd(A, B).is_constant():
            return True
    return False


INVARIANT = "Invariant"
FORWARD_ONLY = "ForwardOnly"
NOT_INVARIANT = "NotInvariant"


def is_invariant(V: Hypersurface, f: SplitMap, irreducibility_asserted: bool = False) -> str:
    """One of ``Invariant``, ``ForwardOnly``, ``NotInvariant``.

    f(V) = V follows from f(V) subset of V when V is irreducible, because split
    maps with positive degrees are finite.  Irreducibility is either asserted by
    the caller or certified by a cheap sufficient test.
    """
    if not is_forward_invariant(V, f):
        return NOT_INVARIANT
    if irreducibility_asserted or _linear_pair_certifies_irreducible(V):
        return INVARIANT
    return FORWARD_ONLY


def dominant_projection_profile(V: Hypersurface) -> list:
    """Entry j: V maps dominantly onto the coordinates other than j, i.e. a_j > 0."""
    return [a > 0 for a in V.multidegree]


# ---------------------------------------------------------------------------
# separability


@dataclass(frozen=True)
class Separable:
    h1: MultiPoly
    h2: MultiPoly


@dataclass(frozen=True)
class NotSeparable:
    """A nonzero 2x2 minor of the coefficient matrix, with the monomials indexing it."""

    rows: tuple
    cols: tuple
    minor: tuple

    def determinant(self) -> Fraction:
        (a, b), (c, d) = self.minor
        return a * d - b * c


def coefficient_matrix(h: MultiPoly, block1: Sequence[int], block2: Sequence[int]):
    """Rows: block-1 monomials, columns: block-2 monomials, both ascending."""
    rows, cols = set(), set()
    split = {}
    for e, c in h.terms.items():
        r = tuple(e[i] for i in block1)
        s = tuple(e[i] for i in block2)
        rows.add(r)
        cols.add(s)
        split[(r, s)] = c
    rows, cols = sorted(rows), sorted(cols)
    M = [[split.get((r, s), Fraction(0)) for s in cols] for r in rows]
    return rows, cols, M


def separability_test(h: MultiPoly, split) -> Union[Separable, NotSeparable]:
    """Decide h = h1(block 1) * h2(block 2) via rank(coefficient matrix) <= 1.

    ``split`` is a pair of disjoint index lists covering every variable of h.
    """
    if h.is_zero():
        raise ZeroPolynomial("separability of the zero polynomial")
    block1, block2 = [list(b) for b in split]
    if set(block1) & set(block2) or set(block1) | set(block2) != set(range(h.arity)):
        raise ValueError("split must partition the variables")
    rows, cols, M = coefficient_matrix(h, block1, block2)
    if rank(M) <= 1:
        j0 = next(j for j in range(len(cols)) if any(M[i][j] for i in range(len(rows))))
        h1_terms = {}
        for i, r in enumerate(rows):
            if M[i][j0]:
                e = [0] * h.arity
                for pos, k in zip(block1, r):
                    e[pos] = k
                h1_terms[tuple(e)] = M[i][j0]
        h1 = MultiPoly(h1_terms, h.arity).primitive()
        h2 = div_exact(h, h1)
        return Separable(h1, h2)
    for i in range(len(rows)):
        for k in range(i + 1, len(rows)):
            for j in range(len(cols)):
                for l in range(j + 1, len(cols)):
                    if M[i][j] * M[k][l] != M[i][l] * M[k][j]:
                        return NotSeparable(
                            (rows[i], rows[k]), (cols[j], cols[l]),
                            ((M[i][j], M[i][l]), (M[k][j], M[k][l])),
                        )
    raise ArithmeticError("rank above 1 but every 2x2 minor vanishes")


# ---------------------------------------------------------------------------
# products and projections


class _FullSpace:
    """Marker for the whole ambient (P^1)^m."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "FULL_SPACE"

    def to_json(self):
        return "full_space"


FULL_SPACE = _FullSpace()


@dataclass(frozen=True)
class ProductDecomposition:
    v1: object
    v2: object
    v1_invariant: bool
    v2_invariant: bool

    @property
    def factors_invariant(self) -> bool:
        return self.v1_invariant and self.v2_invariant


def _restrict_pairs(h: MultiPoly, pairs: Sequence[int]):
    """Read h (free of the other pairs) as a form in the listed pairs, or FULL_SPACE if constant."""
    idx = [v for i in pairs for v in (2 * i, 2 * i + 1)]
    terms = {tuple(e[v] for v in idx): c for e, c in h.terms.items()}
    sub = MultiPoly._raw(terms, len(idx))
    if sub.is_constant():
        return FULL_SPACE
    return Hypersurface(sub, check_squarefree=False)


def product_decomposition(V: Hypersurface, f: SplitMap, k: int) -> Optional[ProductDecomposition]:
    """V = V1 x V2 across pairs [0, k) | [k, n) for maps of degree > 1 on the first block
    and degree 1 on the second.  Returns None when h does not separate.
    """
    n = V.n
    if f.n != n:
        raise ValueError("map and variety sizes differ")
    if not 1 <= k <= n - 1:
        raise BadDegreePattern(f"k = {k} must lie in [1, {n - 1}]")
    degs = f.degrees
    if not (all(c > 1 for c in degs[:k]) and all(c == 1 for c in degs[k:])):
        raise BadDegreePattern(f"degrees {list(degs)} are not > 1 on the first {k} and = 1 after")
    first = list(range(2 * k))
    second = list(range(2 * k, 2 * n))
    res = separability_test(V.h, (first, second))
    if isinstance(res, NotSeparable):
        if is_forward_invariant(V, f):
            warnings.warn(
                "forward-invariant hypersurface does not split as a product over the degree blocks; "
                "the input is likely reducible or mis-specified",
                InputSuspect,
                stacklevel=2,
            )
        return None
    v1 = _restrict_pairs(res.h1, range(k))
    v2 = _restrict_pairs(res.h2, range(k, n))
    inv1 = v1 is FULL_SPACE or is_forward_invariant(v1, f.block(range(k)))
    inv2 = v2 is FULL_SPACE or is_forward_invariant(v2, f.block(range(k, n)))
    return ProductDecomposition(v1, v2, inv1, inv2)


def projection_image(V: Hypersurface, keep: Sequence[int], experimental: bool = False):
    """Image of V under the projection onto the pairs in ``keep``.

    For each kept point the fibre of V is the zero set of a multihomogeneous
    form on the dropped factors.  If that form has positive degree it has zeros,
    so the image is everything; otherwise h lives on the kept pairs already.
    """
    keep = sorted(set(keep))
    if any(not 0 <= j < V.n for j in keep):
        raise ValueError("keep indices out of range")
    if len(keep) != V.n - 1 and not experimental:
        raise NotCodimOne(f"projection keeps {len(keep)} of {V.n} coordinates; pass experimental=True")
    dropped = [j for j in range(V.n) if j not in keep]
    if any(V.multidegree[j] > 0 for j in dropped):
        return FULL_SPACE
    if not keep:
        return FULL_SPACE
    return _restrict_pairs(V.h, keep)


__all__ = [
    "SplitMap", "split_map_from_json", "Hypersurface", "hypersurface_from_json", "PointSet",
    "sort_points", "multidegree_of", "squarefree_multihom", "pullback_form", "pullback",
    "is_forward_invariant", "is_invariant", "INVARIANT", "FORWARD_ONLY", "NOT_INVARIANT",
    "dominant_projection_profile", "Separable", "NotSeparable", "coefficient_matrix",
    "separability_test", "FULL_SPACE", "ProductDecomposition", "product_decomposition",
    "projection_image",
]
