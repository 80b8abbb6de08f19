"""Preimage towers V, f^-1(V), f^-2(V), ... and their rational points of bounded height.

Points at level s are found by pushing candidates forward rather than by
expanding the level polynomial: all coordinates but one are enumerated, pushed
through f^s, and the remaining coordinate is recovered as a rational
preimage under f_j^s of the roots of the level-0 polynomial.
"""
from __future__ import annotations

import itertools
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence

from . import kernels
from .algebra import UniPoly, rational_roots
from .errors import BudgetExceeded, DegreeOverflow, InputSuspect, InvariantViolation, MismatchedBudgets, NotInvariant
from .p1 import INFINITY, ProjPoint, RatMap1, evaluate, monomial_budget, point_preimages, points_of_height
from .varieties import (
    FORWARD_ONLY, NOT_INVARIANT, Hypersurface, SplitMap, is_invariant, pullback, sort_points,
)

DEFAULT_MAX_ASSIGNMENTS = 2_000_000


@dataclass(frozen=True)
class SearchConfig:
    height_bound: int
    s_max: int = 0
    n_max: int = 1
    threads: int = 1

    def __post_init__(self):
        if self.height_bound < 1:
            raise InvariantViolation("H >= 1", f"height bound {self.height_bound}")
        if self.s_max < 0:
            raise InvariantViolation("s_max >= 0", f"s_max {self.s_max}")
        if self.n_max < 0:
            raise InvariantViolation("n_max >= 0", f"n_max {self.n_max}")
        if self.threads < 1:
            raise InvariantViolation("threads >= 1", f"threads {self.threads}")


def _pmap(fn: Callable, items: Sequence, threads: int) -> list:
    """Order-preserving map, optionally over a thread pool."""
    if threads <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def point_json(pt: Sequence[ProjPoint]) -> list:
    return [str(p) for p in pt]


def points_from_json(data) -> list:
    return [tuple(ProjPoint.parse(c) for c in pt) for pt in data]


# ---------------------------------------------------------------------------
# levels


def tower_level(V: Hypersurface, f: SplitMap, s: int) -> Hypersurface:
    """f^-s(V) as a squarefree hypersurface; level 0 is V."""
    if s < 0:
        raise ValueError("level must be >= 0")
    if s == 0:
        return V
    return pullback(V, f.iterate(s))


class _Slicer:
    """Specializes h at all coordinates except ``j`` and returns the binary form in pair j."""

    def __init__(self, V: Hypersurface, j: int):
        self.j = j
        self.a = V.multidegree[j]
        groups: Dict[int, list] = {}
        for e, c in V.int_terms:
            rest = e[: 2 * j] + e[2 * j + 2:]
            groups.setdefault(e[2 * j], []).append((rest, c))
        self.groups = groups

    def form(self, others: Sequence[ProjPoint]) -> list:
        xs = [p[0] for p in others]
        ys = [p[1] for p in others]
        coeffs = [0] * (self.a + 1)
        for k, terms in self.groups.items():
            coeffs[k] = kernels.multihom_eval(terms, xs, ys)
        return coeffs


def _form_roots(coeffs: Sequence[int]) -> Optional[list]:
    """Rational zeros of the binary form sum c_k X^k Y^(a-k); None if it vanishes identically."""
    if not any(coeffs):
        return None
    out = []
    if coeffs[-1] == 0:
        out.append(INFINITY)
    out.extend(ProjPoint.from_rat(r) for r in rational_roots(UniPoly(coeffs)))
    return out


def _solve_index(V: Hypersurface) -> int:
    return max(i for i, a in enumerate(V.multidegree) if a > 0)


def _assignments(n_free: int, pts: list, max_assignments: int):
    count = len(pts) ** n_free
    if count > max_assignments:
        raise BudgetExceeded(f"{count} coordinate assignments exceed the budget of {max_assignments}", None)
    return list(itertools.product(pts, repeat=n_free))


def _insert(others, j, xj):
    return tuple(others[:j]) + (xj,) + tuple(others[j:])


def rational_points(W: Hypersurface, H: int, threads: int = 1,
                    max_assignments: int = DEFAULT_MAX_ASSIGNMENTS) -> list:
    """All points of W(Q) whose coordinates have height <= H, sorted."""
    pts = points_of_height(H)
    j = _solve_index(W)
    slicer = _Slicer(W, j)

    def fiber(others):
        roots = _form_roots(slicer.form(others))
        cand = pts if roots is None else [r for r in roots if r.height <= H]
        return [_insert(others, j, x) for x in cand]

    found = set()
    for chunk in _pmap(fiber, _assignments(W.n - 1, pts, max_assignments), threads):
        found.update(chunk)
    return sort_points(found)


# ---------------------------------------------------------------------------
# stabilization report


def _backward(f: RatMap1, targets, steps: int) -> set:
    cur = set(targets)
    for _ in range(steps):
        nxt = set()
        for t in cur:
            nxt.update(point_preimages(f, t))
        cur = nxt
        if not cur:
            break
    return cur


@dataclass
class TowerLevel:
    level: int
    multidegree: tuple
    new_points: list
    seconds: Optional[float] = None

    def to_json(self) -> dict:
        out = {
            "level": self.level,
            "multidegree": list(self.multidegree) if self.multidegree is not None else None,
            "new_points": [point_json(p) for p in self.new_points],
            "count": len(self.new_points),
        }
        if self.seconds is not None:
            out["seconds"] = round(self.seconds, 6)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "TowerLevel":
        md = data.get("multidegree")
        return cls(int(data["level"]), tuple(md) if md is not None else None,
                   points_from_json(data["new_points"]), data.get("seconds"))


@dataclass
class TowerReport:
    height_bound: int
    s_max: int
    levels: List[TowerLevel]
    empirical_s0: int
    stabilized_in_window: bool
    invariance: str
    caveat: str
    torus_comparison: Optional[dict] = None
    complete: bool = True

    def to_json(self) -> dict:
        out = {
            "height_bound": self.height_bound,
            "s_max": self.s_max,
            "invariance": self.invariance,
            "levels": [lvl.to_json() for lvl in self.levels],
            "empirical_s0": self.empirical_s0,
            "stabilized_in_window": self.stabilized_in_window,
            "caveat": self.caveat,
            "complete": self.complete,
        }
        if self.torus_comparison is not None:
            out["torus_comparison"] = self.torus_comparison
        return out

    @classmethod
    def from_json(cls, data: dict) -> "TowerReport":
        return cls(data["height_bound"], data["s_max"], [TowerLevel.from_json(x) for x in data["levels"]],
                   data["empirical_s0"], data["stabilized_in_window"], data["invariance"], data["caveat"],
                   data.get("torus_comparison"), data.get("complete", True))


def points_up_to_level(V: Hypersurface, f: SplitMap, s: int, H: int, threads: int = 1,
                       max_assignments: int = DEFAULT_MAX_ASSIGNMENTS, _orbits=None) -> set:
    """{x : height(x_i) <= H, h(f^s(x)) = 0}."""
    pts = points_of_height(H)
    j = _solve_index(V)
    slicer = _Slicer(V, j)
    others_idx = [i for i in range(V.n) if i != j]
    orbits = _orbits if _orbits is not None else _coordinate_orbits(f, pts, s, others_idx)
    fj = f.components[j]

    def fiber(others):
        images = [orbits[i][x][s] for i, x in zip(others_idx, others)]
        roots = _form_roots(slicer.form(images))
        if roots is None:
            cand = pts
        else:
            cand = [x for x in _backward(fj, roots, s) if x.height <= H]
        return [_insert(others, j, x) for x in cand]

    found = set()
    for chunk in _pmap(fiber, _assignments(V.n - 1, pts, max_assignments), threads):
        found.update(chunk)
    return found


def _coordinate_orbits(f: SplitMap, pts: list, length: int, indices) -> dict:
    """index -> {x: [x, f_i(x), ..., f_i^length(x)]}, only for the coordinates that get specialized."""
    out = {}
    for i in indices:
        g = f.components[i]
        out[i] = {x: [ProjPoint._raw(a, b) for a, b in kernels.orbit(g.p, g.q, x[0], x[1], length)]
                  for x in pts}
    return out


def _extend_orbits(f: SplitMap, orbits: dict, length: int) -> None:
    """Grow every stored orbit in place so it reaches f^length."""
    for i, table in orbits.items():
        g = f.components[i]
        for orb in table.values():
            while len(orb) <= length:
                orb.append(evaluate(g, orb[-1]))


def _first_hit(V: Hypersurface, f: SplitMap, x, upto: int) -> Optional[int]:
    """Least t <= upto with f^t(x) in V, by forward evaluation."""
    cur = tuple(x)
    for t in range(upto + 1):
        if V.contains(cur):
            return t
        cur = f(cur)
    return None


def _torus_comparison(V: Hypersurface, f: SplitMap) -> Optional[dict]:
    from .special import PowerLike, classify_exceptional
    from .torus import bound_from_extension, s1_bound

    degs = set(abs(c) for c in f.degrees)
    if len(degs) != 1 or min(degs) < 2:
        return None
    d = degs.pop()
    kinds = [classify_exceptional(g) for g in f.components]
    if not all(isinstance(k, PowerLike) for k in kinds):
        return None
    D = sum(V.multidegree)
    B = bound_from_extension(D, V.n)
    return {"d": d, "degree_bound_B": B, "variety_degree": D, "s1": s1_bound(d, B)}


def stabilization_report(V: Hypersurface, f: SplitMap, cfg: SearchConfig, *,
                         irreducibility_asserted: bool = False, with_timing: bool = False,
                         with_multidegrees: bool = True,
                         max_assignments: int = DEFAULT_MAX_ASSIGNMENTS) -> TowerReport:
    """Rational points of height <= H new at each level 0..s_max, and the empirical s0.

    s0 is the last level s >= 1 that contributes new points (0 if none), so that
    f^-(s+1)(V) minus f^-s(V) has no points in the window for every s0 <= s < s_max.
    """
    verdict = is_invariant(V, f, irreducibility_asserted)
    if verdict == NOT_INVARIANT:
        raise NotInvariant("V is not forward invariant under f")
    if verdict == FORWARD_ONLY:
        warnings.warn("V is forward invariant but not certified irreducible", InputSuspect, stacklevel=2)
    H = cfg.height_bound
    pts = points_of_height(H)
    j = _solve_index(V)
    orbits = _coordinate_orbits(f, pts, 0, [i for i in range(V.n) if i != j])
    cap = monomial_budget()
    levels: List[TowerLevel] = []
    seen: set = set()
    try:
        for s in range(cfg.s_max + 1):
            worst = max(abs(c) for c in f.degrees) ** s
            if worst > cap:
                raise DegreeOverflow(f"level {s} needs iterates of degree {worst}, over the cap {cap}")
            t0 = time.perf_counter()
            _extend_orbits(f, orbits, s)
            mdeg = tower_level(V, f, s).multidegree if with_multidegrees else None
            found = points_up_to_level(V, f, s, H, cfg.threads, max_assignments, orbits)
            missing = seen - found
            if missing:
                raise ArithmeticError(f"level {s} lost points {sorted(missing)[:3]}")
            new = sort_points(found - seen)
            for x in new:
                if _first_hit(V, f, x, s) != s:
                    raise ArithmeticError(f"point {point_json(x)} does not first reach V at step {s}")
            seen |= found
            levels.append(TowerLevel(s, mdeg, new, time.perf_counter() - t0 if with_timing else None))
    except BudgetExceeded as exc:
        exc.partial = _finish(V, f, cfg, levels, verdict, complete=False)
        raise
    return _finish(V, f, cfg, levels, verdict)


def _finish(V, f, cfg, levels, verdict, complete=True) -> TowerReport:
    with_new = [lvl.level for lvl in levels if lvl.new_points and lvl.level >= 1]
    s0 = max(with_new) if with_new else 0
    top = levels[-1].level if levels else -1
    stabilized = s0 < top
    H = cfg.height_bound
    caveat = (
        f"searched points of height <= {H} at levels 0..{top}; "
        + (f"no new points at levels {s0 + 1}..{top}" if stabilized else "no stabilization seen in this window")
        + "; larger heights and deeper levels were not examined"
    )
    return TowerReport(H, cfg.s_max, levels, s0, stabilized, verdict, caveat,
                       _torus_comparison(V, f), complete)


# ---------------------------------------------------------------------------
# cancellation


@dataclass(frozen=True)
class CollidingPair:
    a: ProjPoint
    b: ProjPoint
    merge_index: int  # least s with f^s(a) = f^s(b)

    def to_json(self) -> dict:
        return {"a": str(self.a), "b": str(self.b), "first_collision": self.merge_index,
                "merge_index": self.merge_index}

    @classmethod
    def from_json(cls, data: dict) -> "CollidingPair":
        return cls(ProjPoint.parse(data["a"]), ProjPoint.parse(data["b"]), int(data["merge_index"]))


@dataclass
class CancellationReport:
    height_bound: int
    n_max: int
    pairs: List[CollidingPair]
    empirical_N: int

    def merge_histogram(self) -> dict:
        out: Dict[int, int] = {}
        for p in self.pairs:
            out[p.merge_index] = out.get(p.merge_index, 0) + 1
        return dict(sorted(out.items()))

    def to_json(self) -> dict:
        return {
            "height_bound": self.height_bound,
            "n_max": self.n_max,
            "pair_count": len(self.pairs),
            "merge_histogram": {str(k): v for k, v in self.merge_histogram().items()},
            "pairs": [p.to_json() for p in self.pairs],
            "empirical_N": self.empirical_N,
        }

    @classmethod
    def from_json(cls, data: dict) -> "CancellationReport":
        return cls(data["height_bound"], data["n_max"], [CollidingPair.from_json(x) for x in data["pairs"]],
                   data["empirical_N"])


def cancellation_report(f: RatMap1, cfg: SearchConfig, max_pairs: int = 1_000_000) -> CancellationReport:
    """Unordered pairs a != b of height <= H with f^n(a) = f^n(b) for some n <= n_max."""
    if f.degree < 2:
        raise InvariantViolation("degree >= 2", "cancellation needs deg f >= 2")
    pts = points_of_height(cfg.height_bound)
    rank_of = {p: i for i, p in enumerate(pts)}
    orbs = {p: kernels.orbit(f.p, f.q, p[0], p[1], cfg.n_max) for p in pts}
    pairs: List[CollidingPair] = []
    for n in range(1, cfg.n_max + 1):
        buckets: Dict[tuple, Dict[tuple, list]] = {}
        for p in pts:
            o = orbs[p]
            buckets.setdefault(o[n], {}).setdefault(o[n - 1], []).append(p)
        for sub in buckets.values():
            if len(sub) < 2:
                continue
            groups = list(sub.values())
            for g1, g2 in itertools.combinations(groups, 2):
                for a in g1:
                    for b in g2:
                        if rank_of[a] > rank_of[b]:
                            a, b = b, a
                        pairs.append(CollidingPair(a, b, n))
                        if len(pairs) > max_pairs:
                            raise BudgetExceeded(f"more than {max_pairs} colliding pairs", None)
    pairs.sort(key=lambda c: (c.merge_index, rank_of[c.a], rank_of[c.b]))
    N = max((c.merge_index for c in pairs), default=0)
    return CancellationReport(cfg.height_bound, cfg.n_max, pairs, N)


def diagonal_tower_equivalence(g: RatMap1, cfg: SearchConfig,
                               cancel_cfg: Optional[SearchConfig] = None) -> bool:
    """Empirical s0 of the diagonal under (g, g) equals the empirical cancellation index N.

    Both searches must use the same height bound and the same depth
    (s_max = n_max); otherwise MismatchedBudgets is raised.
    """
    if g.degree < 2:
        raise InvariantViolation("degree >= 2", "needs deg g >= 2")
    if cancel_cfg is None:
        cancel_cfg = SearchConfig(cfg.height_bound, cfg.s_max, cfg.s_max, cfg.threads)
    if cancel_cfg.height_bound != cfg.height_bound:
        raise MismatchedBudgets(
            f"height bounds differ: tower {cfg.height_bound}, cancellation {cancel_cfg.height_bound}")
    if cancel_cfg.n_max != cfg.s_max:
        raise MismatchedBudgets(f"depths differ: tower s_max {cfg.s_max}, cancellation n_max {cancel_cfg.n_max}")
    diag = Hypersurface.parse("X1*Y2 - X2*Y1", 2)
    rep = stabilization_report(diag, SplitMap([g, g]), cfg, irreducibility_asserted=True,
                               with_multidegrees=False)
    canc = cancellation_report(g, cancel_cfg)
    return rep.empirical_s0 == canc.empirical_N


__all__ = [
    "SearchConfig", "tower_level", "rational_points", "points_up_to_level", "TowerLevel",
    "TowerReport", "stabilization_report", "CollidingPair", "CancellationReport",
    "cancellation_report", "diagonal_tower_equivalence", "point_json", "points_from_json",
]
