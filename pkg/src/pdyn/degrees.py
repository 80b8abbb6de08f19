"""Restricted degrees of split maps on invariant hypersurfaces.

For a hypersurface V of multidegree (a_1, ..., a_n) and beta_i the pullback of
the hyperplane class from factor i, V . prod_{i != j} beta_i = a_j and
f^* beta_i = c_i beta_i.  Pairing f_*[V] = deg(f|_V) [V] against those classes
gives deg(f|_V) * a_j = a_j * prod_{i != j} c_i for every j.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import prod
from typing import Sequence

from .errors import NotInvariant, ParseError, PreconditionFailed
from .varieties import Hypersurface, SplitMap, dominant_projection_profile, is_forward_invariant


@dataclass(frozen=True)
class RestrictedDegree:
    value: int
    certificate: tuple  # 1-based indices j with a_j > 0, all giving the same product


@dataclass(frozen=True)
class Inconsistent:
    """Per-j products disagree: no invariant irreducible V with these degrees exists."""

    products: dict  # 1-based j -> prod_{i != j} c_i


def per_index_products(multidegree: Sequence[int], degrees: Sequence[int]) -> dict:
    """1-based j -> prod_{i != j} c_i, for every j with a_j > 0."""
    return {
        j + 1: prod(c for i, c in enumerate(degrees) if i != j)
        for j, a in enumerate(multidegree)
        if a > 0
    }


def restricted_degree_from_multidegree(multidegree: Sequence[int], degrees: Sequence[int]):
    if len(multidegree) != len(degrees):
        raise ValueError("multidegree and degree vector lengths differ")
    if not any(multidegree):
        raise ValueError("multidegree is identically zero")
    D = per_index_products(multidegree, degrees)
    values = set(D.values())
    if len(values) == 1:
        return RestrictedDegree(values.pop(), tuple(sorted(D)))
    return Inconsistent(D)


def restricted_degree(V: Hypersurface, f: SplitMap, assume_invariant: bool = False):
    """deg(f|_V) with the list of pairings that certify it, or Inconsistent."""
    if not assume_invariant and not is_forward_invariant(V, f):
        raise NotInvariant("V is not forward invariant under f")
    return restricted_degree_from_multidegree(V.multidegree, f.degrees)


def degree_routes(multidegree: Sequence[int], degrees: Sequence[int], block1: Sequence[int], m: int = 1):
    """deg(f^m|_V) read off the two coefficient comparisons for the split block1 | rest.

    Expanding V . (u1 alpha1 + u2 alpha2)^(n-1) with alpha1 = sum_{block1} beta_i,
    the only surviving coefficients are those where the one missing index lies
    in block 1 or in block 2.  Each gives deg = sum a_j D_j^m / sum a_j over
    that block; a route is None when its denominator vanishes.
    """
    n = len(multidegree)
    b1 = set(block1)
    D = [prod(c for i, c in enumerate(degrees) if i != j) ** m for j in range(n)]

    def route(js):
        den = sum(multidegree[j] for j in js)
        if den == 0:
            return None
        return Fraction(sum(multidegree[j] * D[j] for j in js), den)

    return route([j for j in range(n) if j in b1]), route([j for j in range(n) if j not in b1])


def routes_agree_everywhere(multidegree: Sequence[int], degrees: Sequence[int], m: int = 1) -> bool:
    """All block splits with two positive denominators give equal routes."""
    n = len(multidegree)
    for r in range(1, n):
        for block in combinations(range(n), r):
            u, v = degree_routes(multidegree, degrees, block, m)
            if u is not None and v is not None and u != v:
                return False
    return True


@dataclass(frozen=True)
class EqualDegreesRequired:
    degree: int


@dataclass(frozen=True)
class ViolationWitness:
    j: int  # 1-based
    j_prime: int


def equal_degree_check(V: Hypersurface, f: SplitMap, assume_invariant: bool = False):
    """All c_i must agree for an invariant V projecting dominantly onto every n-1 axes."""
    if not all(dominant_projection_profile(V)):
        raise PreconditionFailed("dominance")
    if any(c < 2 for c in f.degrees):
        raise PreconditionFailed("degrees >= 2")
    if not assume_invariant and not is_forward_invariant(V, f):
        raise PreconditionFailed("forward invariance")
    degs = f.degrees
    for j in range(1, len(degs)):
        if degs[j] != degs[0]:
            return ViolationWitness(1, j + 1)
    return EqualDegreesRequired(degs[0])


@dataclass(frozen=True)
class DegreeProfile:
    entries: tuple  # (m, deg(f^m|_V))

    def to_json(self) -> list:
        return [list(e) for e in self.entries]


def degree_growth_profile(V: Hypersurface, f: SplitMap, m_max: int, cross_check_up_to: int = 3) -> DegreeProfile:
    if m_max < 0:
        raise ValueError("m_max must be >= 0")
    if m_max == 0:
        return DegreeProfile(((0, 1),))
    base = restricted_degree(V, f)
    if isinstance(base, Inconsistent):
        raise PreconditionFailed("restricted degree consistent")
    entries = tuple((m, base.value**m) for m in range(1, m_max + 1))
    for m in range(2, min(cross_check_up_to, m_max) + 1):
        direct = restricted_degree(V, f.iterate(m))
        if not isinstance(direct, RestrictedDegree) or direct.value != base.value**m:
            raise ArithmeticError(f"iterate {m} gives {direct}, expected {base.value**m}")
    return DegreeProfile(entries)


# ---------------------------------------------------------------------------
# coefficient comparison replay for user-supplied intersection data


@dataclass(frozen=True)
class IntersectionTable:
    """V . prod_{i in I} beta_i for |I| = d, with V of dimension d in (P^1)^n.

    Index sets are 1-based; missing sets count as zero.  The first k factors
    form the first block.
    """

    n: int
    k: int
    d: int
    d1: int
    d2: int
    d1_prime: int
    degrees: tuple
    values: dict = field(compare=False)
    m_max: int = 3

    @classmethod
    def from_json(cls, data: dict) -> "IntersectionTable":
        errors = []
        for key in ("n", "k", "d", "d1", "d2", "d1_prime", "degrees", "intersections"):
            if key not in data:
                errors.append(key)
        if errors:
            raise ParseError(f"table is missing {', '.join(errors)}", ",".join(errors))
        n, k, d = int(data["n"]), int(data["k"]), int(data["d"])
        if not 1 <= k < n:
            raise ParseError("need 1 <= k < n", "k")
        if not 0 <= d <= n:
            raise ParseError("need 0 <= d <= n", "d")
        degrees = tuple(int(c) for c in data["degrees"])
        if len(degrees) != n:
            raise ParseError(f"'degrees' must have {n} entries", "degrees")
        values = {}
        for pos, item in enumerate(data["intersections"]):
            idx = frozenset(int(i) for i in item["indices"])
            if len(idx) != d or not idx <= set(range(1, n + 1)):
                raise ParseError(f"intersection {pos} needs {d} distinct indices in 1..{n}",
                                 f"intersections[{pos}]")
            values[idx] = Fraction(item["value"])
        return cls(n, k, d, int(data["d1"]), int(data["d2"]), int(data["d1_prime"]), degrees, values,
                   int(data.get("m_max", 3)))

    def coefficient(self, p: int, q: int, m: int) -> Fraction:
        """Coefficient of u1^p u2^q in V . (u1 f^m*alpha1 + u2 f^m*alpha2)^d, divided by d!."""
        b1 = range(1, self.k + 1)
        b2 = range(self.k + 1, self.n + 1)
        total = Fraction(0)
        for S in combinations(b1, p):
            for T in combinations(b2, q):
                idx = frozenset(S) | frozenset(T)
                val = self.values.get(idx)
                if val:
                    total += val * prod(self.degrees[i - 1] ** m for i in idx)
        return total


def lemma21_replay(table: IntersectionTable) -> dict:
    """Compare deg(f^m|_V) as read from the two coefficients the block argument uses.

    Route A reads u1^(d + d1' - d2) u2^(d2 - d1'), route B reads u1^(d - d2) u2^(d2).
    """
    t = table
    routes = {
        "A": (t.d + t.d1_prime - t.d2, t.d2 - t.d1_prime),
        "B": (t.d - t.d2, t.d2),
    }
    rows = []
    agree_all = True
    for m in range(1, t.m_max + 1):
        row = {"m": m}
        vals = {}
        for name, (p, q) in routes.items():
            if p < 0 or q < 0 or p > t.k or q > t.n - t.k:
                row[name] = None
                continue
            den = t.coefficient(p, q, 0)
            if den == 0:
                row[name] = None
                continue
            v = t.coefficient(p, q, m) / den
            vals[name] = v
            row[name] = str(v)
        row["agree"] = len(vals) == 2 and vals["A"] == vals["B"]
        if len(vals) == 2 and not row["agree"]:
            agree_all = False
        rows.append(row)
    return {
        "routes": {name: {"u1": p, "u2": q} for name, (p, q) in routes.items()},
        "rows": rows,
        "routes_agree": agree_all,
    }


__all__ = [
    "RestrictedDegree", "Inconsistent", "per_index_products", "restricted_degree_from_multidegree",
    "restricted_degree", "degree_routes", "routes_agree_everywhere", "EqualDegreesRequired",
    "ViolationWitness", "equal_degree_check", "DegreeProfile", "degree_growth_profile",
    "IntersectionTable", "lemma21_replay",
]
