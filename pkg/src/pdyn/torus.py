"""Torsion-order arithmetic for power maps on the split torus.

Roots of unity are represented only by their multiplicative orders: a
primitive k-th root of unity has degree phi(k) over Q, and lambda^(d^m) = 1
exactly when k divides d^m.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Optional

from .algebra import divisors, factorize
from .errors import InvariantViolation


def euler_phi(k: int) -> int:
    if k < 1:
        raise ValueError("euler_phi needs k >= 1")
    out = k
    for p in factorize(k):
        out = out // p * (p - 1)
    return out


def radical(k: int) -> int:
    out = 1
    for p in factorize(k):
        out *= p
    return out


@dataclass(frozen=True)
class TorsionOrderSet:
    orders: frozenset
    d: int
    B: int

    def sorted(self) -> list:
        return sorted(self.orders)


def bounded_degree_torsion_orders(d: int, B: int) -> TorsionOrderSet:
    """All k whose prime support divides d and with phi(k) <= B."""
    if d < 2 or B < 1:
        raise ValueError("need d >= 2 and B >= 1")
    primes = sorted(factorize(d))
    found = set()

    def walk(i: int, k: int, phi: int):
        if i == len(primes):
            found.add(k)
            return
        p = primes[i]
        walk(i + 1, k, phi)
        # phi(p^e) = p^(e-1)(p-1) grows with e, so stop at the first overshoot
        pk, ph = p, phi * (p - 1)
        while ph <= B:
            walk(i + 1, k * pk, ph)
            pk *= p
            ph *= p

    walk(0, 1, 1)
    return TorsionOrderSet(frozenset(found), d, B)


def order_level(k: int, d: int) -> int:
    """min{m >= 0 : k | d^m}; raises if k has a prime factor not dividing d."""
    dk = factorize(d)
    m = 0
    for p, e in factorize(k).items():
        f = dk.get(p)
        if not f:
            raise ValueError(f"{k} never divides a power of {d}")
        m = max(m, -(-e // f))
    return m


def s1_bound(d: int, B: int) -> int:
    return max(order_level(k, d) for k in bounded_degree_torsion_orders(d, B).orders)


def bound_from_extension(D: int, n: int, field_degree: int = 1) -> int:
    """Degree bound (D * 2^n)^n * [K:Q] for coordinates of torsion translates."""
    if D < 1 or n < 1 or field_degree < 1:
        raise ValueError("D, n and the field degree must be positive")
    return (D * 2**n) ** n * field_degree


@dataclass(frozen=True)
class MonomialCharacter:
    exponents: tuple

    def __post_init__(self):
        exps = tuple(int(r) for r in self.exponents)
        if not exps or all(r == 0 for r in exps):
            raise InvariantViolation("nonzero character", "monomial character exponents are all zero")
        object.__setattr__(self, "exponents", exps)

    @property
    def content(self) -> int:
        g = 0
        for r in self.exponents:
            g = gcd(g, abs(r))
        return g


@dataclass(frozen=True)
class TorusTranslate:
    """V(x^r - epsilon) with epsilon a primitive root of unity of the given order.

    When ``d`` is supplied the constraint epsilon^d = epsilon, i.e. ord(epsilon) | d - 1,
    is enforced.
    """

    character: MonomialCharacter
    epsilon_order: int = 1
    d: Optional[int] = None

    def __post_init__(self):
        if not isinstance(self.character, MonomialCharacter):
            object.__setattr__(self, "character", MonomialCharacter(tuple(self.character)))
        if self.epsilon_order < 1:
            raise InvariantViolation("epsilon_order >= 1", f"got {self.epsilon_order}")
        if self.d is not None:
            check_epsilon(self.epsilon_order, self.d)


def check_epsilon(epsilon_order: int, d: int) -> None:
    if (d - 1) % epsilon_order:
        raise InvariantViolation(
            "epsilon^d = epsilon",
            f"order {epsilon_order} of epsilon does not divide d - 1 = {d - 1}",
        )


def translate_preimage_orders(W: TorusTranslate, d: int, levels: int) -> list:
    """Level s: orders of epsilon * lambda over all lambda with lambda^(d^s) = 1.

    ord(epsilon) divides d - 1, hence is coprime to every divisor t of d^s and
    ord(epsilon * lambda) = ord(epsilon) * t.
    """
    if levels < 0:
        raise ValueError("levels must be >= 0")
    check_epsilon(W.epsilon_order, d)
    e = W.epsilon_order
    return [sorted({e * t for t in divisors(d**s)}) for s in range(levels + 1)]


def filtered_stabilization_level(W: TorusTranslate, d: int, B: int, extra_levels: int = 2) -> int:
    """First level after which the phi <= B part of the level sets stops growing."""
    horizon = s1_bound(d, B) + extra_levels
    sets = [frozenset(o for o in lvl if euler_phi(o) <= B)
            for lvl in translate_preimage_orders(W, d, horizon)]
    level = horizon
    while level > 0 and sets[level - 1] == sets[horizon]:
        level -= 1
    return level


def torus_stabilization_level(W: TorusTranslate, d: int, B: int) -> int:
    """s1 = s1_bound(d, B); for epsilon = 1 this is checked against the filtered level sets."""
    s1 = s1_bound(d, B)
    if W.epsilon_order == 1:
        seen = filtered_stabilization_level(W, d, B)
        if seen != s1:
            raise ArithmeticError(f"filtered level sets stabilize at {seen}, bound says {s1}")
    else:
        check_epsilon(W.epsilon_order, d)
    return s1


def orders_report(d: int, B: int) -> dict:
    orders = bounded_degree_torsion_orders(d, B).sorted()
    return {"d": d, "B": B, "orders": orders, "s1": max(order_level(k, d) for k in orders)}


__all__ = [
    "euler_phi", "radical", "TorsionOrderSet", "bounded_degree_torsion_orders", "order_level",
    "s1_bound", "bound_from_extension", "MonomialCharacter", "TorusTranslate",
    "translate_preimage_orders", "filtered_stabilization_level", "torus_stabilization_level",
    "orders_report",
]
