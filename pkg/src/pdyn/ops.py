"""JSON-in, JSON-out wrappers around the library, shared by the CLI and the fixture corpus.

Every operation takes a dict of JSON values and returns a JSON-serializable
value.  Maps, varieties and points use the formats documented in the README.
"""
from __future__ import annotations

import warnings
from typing import Callable, Dict

from . import algebra, degrees, special, torus, tower, varieties
from .algebra import rat_str, to_rat
from .errors import ParseError
from .p1 import (
    Mobius, ProjPoint, RatMap1, compose, conjugate, evaluate, iterate, map_from_json,
    point_preimages,
)
from .polytext import affine_names, parse_poly

# ---------------------------------------------------------------------------
# decoding


def decode_map(data) -> RatMap1:
    if isinstance(data, str):
        return map_from_json({"num": data})
    return map_from_json(data)


def decode_split_map(data) -> varieties.SplitMap:
    if isinstance(data, list):
        return varieties.SplitMap(decode_map(c) for c in data)
    if isinstance(data, dict) and "components" in data:
        return decode_split_map(data["components"])
    return varieties.SplitMap([decode_map(data)])


def decode_variety(data) -> varieties.Hypersurface:
    return varieties.hypersurface_from_json(data)


def decode_point(data) -> ProjPoint:
    try:
        return ProjPoint.parse(data)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise ParseError(f"bad point {data!r}: {exc}") from exc


def decode_mobius(data) -> Mobius:
    if isinstance(data, str):
        m = decode_map(data)
        if m.degree != 1:
            raise ParseError(f"{data!r} is not a Mobius map")
        return Mobius(m.p[1], m.p[0], m.q[1], m.q[0])
    return Mobius.from_json(data)


def _poly(args, key="poly"):
    names = args.get("vars")
    text = args[key]
    if names is None:
        names = ["x"]
    return parse_poly(text, names), names


# ---------------------------------------------------------------------------
# encoding


def encode_map(f: RatMap1) -> dict:
    out = f.to_json()
    out["text"] = f.to_str()
    return out


def encode_points(points) -> list:
    return [str(p) for p in sorted(points, key=lambda p: (p.height, p[0], p[1]))]


def encode_classification(c) -> dict:
    return special.classification_to_json(c)


# ---------------------------------------------------------------------------
# exact algebra


def op_resultant(args):
    names = args["vars"]
    p = parse_poly(args["p"], names)
    q = parse_poly(args["q"], names)
    v = names.index(args["eliminate"])
    r = algebra.resultant(p, q, v)
    rest = [n for n in names if n != args["eliminate"]]
    return r.to_str(rest)


def op_rational_roots(args):
    p, _ = _poly(args)
    return [rat_str(r) for r in sorted(algebra.rational_roots(p.to_univariate(0)))]


def op_rank(args):
    return algebra.rank([[to_rat(v) for v in row] for row in args["matrix"]])


def op_squarefree(args):
    p, names = _poly(args)
    return algebra.squarefree(p).to_str(names)


# ---------------------------------------------------------------------------
# P^1


def op_compose(args):
    return encode_map(compose(decode_map(args["f"]), decode_map(args["g"])))


def op_iterate(args):
    return encode_map(iterate(decode_map(args["f"]), int(args["m"])))


def op_evaluate(args):
    return str(evaluate(decode_map(args["f"]), decode_point(args["point"])))


def op_point_preimages(args):
    return encode_points(point_preimages(decode_map(args["f"]), decode_point(args["point"])))


def op_conjugate(args):
    return encode_map(conjugate(decode_map(args["f"]), decode_mobius(args["sigma"])))


def op_check_map(args):
    f = decode_map(args["f"])
    return {"degree": f.degree, "map": encode_map(f)}


# ---------------------------------------------------------------------------
# special maps


def op_chebyshev(args):
    r = int(args["degree"])
    sign = int(args.get("sign", 1))
    T = special.chebyshev(r)
    return {
        "degree": r,
        "sign": sign,
        "poly": (T.poly * sign).to_str(),
        "identity_verified": True,
        "map": encode_map(T.as_map(sign)),
    }


def op_verify_chebyshev_identity(args):
    r = int(args["degree"])
    cand = None
    if "candidate" in args:
        cand = parse_poly(args["candidate"], ["x"]).to_univariate(0)
    return special.verify_chebyshev_identity(r, cand)


def op_power_map(args):
    return encode_map(special.power_map(int(args["e"])))


def op_lattes(args):
    E = special.EllipticCurveQ(to_rat(args["a"]), to_rat(args["b"]))
    L = special.lattes_from_curve(E, int(args["m"]))
    return {"curve": E.to_json(), "m": L.multiplier, "degree": L.map.degree, "map": encode_map(L.map)}


def op_verify_semiconjugacy(args):
    return special.verify_semiconjugacy(decode_map(args["u"]), decode_map(args["inner"]), decode_map(args["outer"]))


def op_classify(args):
    # the fixtures name the map "f", the CLI passes it as "map"
    f = decode_map(args["f"] if "f" in args else args["map"])
    return encode_classification(special.classify_exceptional(f))


# ---------------------------------------------------------------------------
# varieties


def op_pullback(args):
    V = decode_variety(args["variety"])
    f = decode_split_map(args["map"])
    return varieties.pullback(V, f).to_json()


def op_check_invariant(args):
    V = decode_variety(args["variety"])
    f = decode_split_map(args["map"])
    asserted = bool(args.get("irreducibility_asserted", False))
    return {
        "forward_invariant": varieties.is_forward_invariant(V, f),
        "verdict": varieties.is_invariant(V, f, asserted),
        "irreducibility_asserted": asserted,
        "multidegree": list(V.multidegree),
        "dominant_projection_profile": varieties.dominant_projection_profile(V),
    }


def op_dominant_projection_profile(args):
    return varieties.dominant_projection_profile(decode_variety(args["variety"]))


def _split_from_args(args, arity):
    left = [int(i) - 1 for i in args["left"]]
    right = [int(i) - 1 for i in args["right"]] if "right" in args else [i for i in range(arity) if i not in left]
    return left, right


def op_separability(args):
    n = int(args.get("n", 0)) or None
    names = args.get("vars") or affine_names(n or 2)
    if names == ["x"]:
        names = ["x1"]
    h = parse_poly(args["poly"], names)
    left, right = _split_from_args(args, h.arity)
    res = varieties.separability_test(h, (left, right))
    if isinstance(res, varieties.Separable):
        return {"separable": True, "h1": res.h1.to_str(names), "h2": res.h2.to_str(names)}

    def mono(block, e):
        return "*".join(f"{names[i]}^{k}" if k > 1 else names[i] for i, k in zip(block, e) if k) or "1"

    return {
        "separable": False,
        "rows": [mono(left, e) for e in res.rows],
        "cols": [mono(right, e) for e in res.cols],
        "minor": [[rat_str(v) for v in row] for row in res.minor],
    }


def _encode_part(v):
    return v.to_json() if v is not varieties.FULL_SPACE else "full_space"


def op_product_decomposition(args):
    V = decode_variety(args["variety"])
    f = decode_split_map(args["map"])
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        res = varieties.product_decomposition(V, f, int(args["k"]))
    suspect = any(issubclass(w.category, varieties.InputSuspect) for w in caught) if caught else False
    if res is None:
        return {"decomposed": False, "input_suspect": suspect}
    return {
        "decomposed": True,
        "v1": _encode_part(res.v1),
        "v2": _encode_part(res.v2),
        "v1_invariant": res.v1_invariant,
        "v2_invariant": res.v2_invariant,
    }


def op_projection_image(args):
    V = decode_variety(args["variety"])
    keep = [int(i) - 1 for i in args["keep"]]
    return _encode_part(varieties.projection_image(V, keep, bool(args.get("experimental", False))))


# ---------------------------------------------------------------------------
# degrees


def op_restricted_degree(args):
    V = decode_variety(args["variety"])
    f = decode_split_map(args["map"])
    res = degrees.restricted_degree(V, f)
    if isinstance(res, degrees.Inconsistent):
        return {"consistent": False, "products": {str(k): v for k, v in res.products.items()}}
    return {"consistent": True, "value": res.value, "certificate": list(res.certificate)}


def op_equal_degree_check(args):
    V = decode_variety(args["variety"])
    f = decode_split_map(args["map"])
    res = degrees.equal_degree_check(V, f, bool(args.get("assume_invariant", False)))
    if isinstance(res, degrees.EqualDegreesRequired):
        return {"verdict": "EqualDegreesRequired", "degree": res.degree}
    return {"verdict": "ViolationWitness", "indices": [res.j, res.j_prime]}


def op_degree_growth(args):
    V = decode_variety(args["variety"])
    f = decode_split_map(args["map"])
    prof = degrees.degree_growth_profile(V, f, int(args["m_max"]))
    return {"multidegree": list(V.multidegree), "degrees": list(f.degrees), "profile": prof.to_json()}


def op_lemma21_replay(args):
    return degrees.lemma21_replay(degrees.IntersectionTable.from_json(args["table"]))


# ---------------------------------------------------------------------------
# torus


def op_euler_phi(args):
    return torus.euler_phi(int(args["k"]))


def _B(args):
    if "B" in args:
        return int(args["B"])
    return torus.bound_from_extension(int(args["ext_degree"]), int(args["n"]), int(args.get("field_degree", 1)))


def op_torsion_orders(args):
    return torus.bounded_degree_torsion_orders(int(args["d"]), _B(args)).sorted()


def op_s1(args):
    return torus.orders_report(int(args["d"]), _B(args))


def _translate(args):
    chars = args.get("character", [1])
    return torus.TorusTranslate(torus.MonomialCharacter(tuple(chars)), int(args.get("epsilon_order", 1)))


def op_translate_preimage_orders(args):
    return torus.translate_preimage_orders(_translate(args), int(args["d"]), int(args["levels"]))


def op_torus_stabilization_level(args):
    return torus.torus_stabilization_level(_translate(args), int(args["d"]), int(args["B"]))


# ---------------------------------------------------------------------------
# towers


def _config(args):
    return tower.SearchConfig(
        int(args["height"]), int(args.get("s_max", 0)), int(args.get("n_max", 1)), int(args.get("threads", 1)))


def op_tower_level(args):
    V = decode_variety(args["variety"])
    f = decode_split_map(args["map"])
    return tower.tower_level(V, f, int(args["s"])).to_json()


def op_rational_points(args):
    V = decode_variety(args["variety"])
    pts = tower.rational_points(V, int(args["height"]), int(args.get("threads", 1)))
    return [tower.point_json(p) for p in pts]


def op_tower(args):
    V = decode_variety(args["variety"])
    f = decode_split_map(args["map"])
    rep = tower.stabilization_report(
        V, f, _config(args),
        irreducibility_asserted=bool(args.get("irreducibility_asserted", False)),
        with_timing=bool(args.get("timing", False)),
    )
    return rep.to_json()


def op_cancel(args):
    f = decode_map(args["map"])
    return tower.cancellation_report(f, _config(args)).to_json()


def op_diagonal_equivalence(args):
    g = decode_map(args["map"])
    cfg = tower.SearchConfig(int(args["height"]), int(args["s_max"]))
    cancel_cfg = None
    if "cancel_height" in args or "n_max" in args:
        cancel_cfg = tower.SearchConfig(int(args.get("cancel_height", args["height"])), 0,
                                        int(args.get("n_max", args["s_max"])))
    return tower.diagonal_tower_equivalence(g, cfg, cancel_cfg)


OPS: Dict[str, Callable] = {
    "resultant": op_resultant,
    "rational_roots": op_rational_roots,
    "rank": op_rank,
    "squarefree": op_squarefree,
    "compose": op_compose,
    "iterate": op_iterate,
    "evaluate": op_evaluate,
    "point_preimages": op_point_preimages,
    "conjugate": op_conjugate,
    "check_map": op_check_map,
    "chebyshev": op_chebyshev,
    "verify_chebyshev_identity": op_verify_chebyshev_identity,
    "power_map": op_power_map,
    "lattes": op_lattes,
    "verify_semiconjugacy": op_verify_semiconjugacy,
    "classify": op_classify,
    "pullback": op_pullback,
    "check_invariant": op_check_invariant,
    "dominant_projection_profile": op_dominant_projection_profile,
    "separability": op_separability,
    "product_decomposition": op_product_decomposition,
    "projection_image": op_projection_image,
    "restricted_degree": op_restricted_degree,
    "equal_degree_check": op_equal_degree_check,
    "degree_growth": op_degree_growth,
    "lemma21_replay": op_lemma21_replay,
    "euler_phi": op_euler_phi,
    "torsion_orders": op_torsion_orders,
    "s1": op_s1,
    "translate_preimage_orders": op_translate_preimage_orders,
    "torus_stabilization_level": op_torus_stabilization_level,
    "tower_level": op_tower_level,
    "rational_points": op_rational_points,
    "tower": op_tower,
    "cancel": op_cancel,
    "diagonal_equivalence": op_diagonal_equivalence,
}


def run_op(name: str, args: dict):
    if name not in OPS:
        raise ParseError(f"unknown operation {name!r}")
    try:
        return OPS[name](args)
    except KeyError as exc:
        raise ParseError(f"missing argument {exc.args[0]!r} for {name}") from exc
