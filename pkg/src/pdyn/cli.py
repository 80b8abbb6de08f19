"""Command-line front end: ``pdyn <subcommand> ...`` prints a JSON report.

Exit codes: 0 success, 1 invalid input, 2 degree or search budget exceeded,
3 tower search finished without observing stabilization inside its window.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from . import __version__, ops
from .errors import BudgetExceeded, InputErrors, PdynError

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_BUDGET = 2
EXIT_NOT_STABILIZED = 3

# input name -> decoder, per subcommand
INPUT_KINDS: Dict[str, Dict[str, str]] = {
    "tower": {"map": "split", "variety": "variety"},
    "cancel": {"map": "map"},
    "degree-growth": {"map": "split", "variety": "variety"},
    "check-invariant": {"map": "split", "variety": "variety"},
    "classify": {"map": "map"},
    "lemma21-replay": {"table": "table"},
}

_DECODERS = {
    "map": ops.decode_map,
    "split": ops.decode_split_map,
    "variety": ops.decode_variety,
    "table": lambda data: ops.degrees.IntersectionTable.from_json(data),
}


@dataclass
class RunManifest:
    subcommand: str
    inputs: Dict[str, str] = field(default_factory=dict)  # name -> file path or inline JSON
    params: Dict[str, object] = field(default_factory=dict)
    seed: Optional[int] = None


@dataclass
class LoadedInput:
    data: object
    source: str
    sha256: str


def load_input(value: str) -> LoadedInput:
    """Read a JSON file, or accept inline JSON, or a bare affine map such as ``x^2 - 1``."""
    if os.path.isfile(value):
        with open(value, "rb") as fh:
            raw = fh.read()
        try:
            data = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ops.ParseError(f"{value}: invalid JSON ({exc.msg})", f"line {exc.lineno}") from exc
        return LoadedInput(data, value, hashlib.sha256(raw).hexdigest())
    raw = value.encode()
    text = value.strip()
    if text.startswith(("{", "[")):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ops.ParseError(f"inline JSON is invalid ({exc.msg})", f"column {exc.colno}") from exc
    elif text.endswith(".json"):
        raise ops.ParseError(f"file not found: {value}")
    else:
        data = text
    return LoadedInput(data, "inline", hashlib.sha256(raw).hexdigest())


def parse_inputs(manifest: RunManifest) -> Dict[str, object]:
    """Decode every input named in the manifest, reporting all failures together."""
    kinds = INPUT_KINDS.get(manifest.subcommand, {})
    typed: Dict[str, object] = {}
    errors: List[tuple] = []
    for name, kind in kinds.items():
        if name not in manifest.inputs:
            errors.append((name, "missing"))
            continue
        try:
            loaded = load_input(manifest.inputs[name])
            typed[name] = _DECODERS[kind](loaded.data)
        except PdynError as exc:
            errors.append((name, str(exc)))
        except (ValueError, TypeError, KeyError) as exc:
            errors.append((name, f"{type(exc).__name__}: {exc}"))
    if errors:
        raise InputErrors(errors)
    return typed


def _op_args(manifest: RunManifest) -> tuple:
    args = dict(manifest.params)
    digests = {}
    for name, value in manifest.inputs.items():
        loaded = load_input(value)
        args[name] = loaded.data
        digests[name] = {"source": loaded.source, "sha256": loaded.sha256}
    return args, digests


_OP_NAMES = {
    "chebyshev": "chebyshev",
    "lattes": "lattes",
    "s1": "s1",
    "tower": "tower",
    "cancel": "cancel",
    "degree-growth": "degree_growth",
    "lemma21-replay": "lemma21_replay",
    "separability": "separability",
    "classify": "classify",
    "check-invariant": "check_invariant",
}


def run(manifest: RunManifest) -> tuple:
    """Dispatch; returns (report dict, exit code)."""
    report = {
        "tool": "pdyn",
        "version": __version__,
        "subcommand": manifest.subcommand,
        "params": dict(sorted(manifest.params.items())),
    }
    if manifest.seed is not None:
        report["seed"] = manifest.seed
    try:
        parse_inputs(manifest)
        args, digests = _op_args(manifest)
        report["inputs"] = digests
        op = _OP_NAMES.get(manifest.subcommand, manifest.subcommand)
        result = ops.run_op(op, args)
    except BudgetExceeded as exc:
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        if exc.partial is not None and hasattr(exc.partial, "to_json"):
            report["partial"] = exc.partial.to_json()
        return report, EXIT_BUDGET
    except PdynError as exc:
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, InputErrors):
            report["error"]["errors"] = [{"input": n, "message": m} for n, m in exc.errors]
        return report, exc.exit_code
    except (ValueError, TypeError) as exc:
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        return report, EXIT_INPUT
    report["result"] = result
    code = EXIT_OK
    if manifest.subcommand == "tower" and not result.get("stabilized_in_window", True):
        code = EXIT_NOT_STABILIZED
    return report, code


# ---------------------------------------------------------------------------
# argument parsing


def _positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _nonneg(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be a non-negative integer")
    return v


def _index_list(text):
    try:
        return [int(t) for t in text.replace(" ", "").split(",") if t]
    except ValueError:
        raise argparse.ArgumentTypeError("expected comma-separated 1-based indices")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="pdyn",
        description="Exact preimage towers and exceptional maps for split maps of (P^1)^n over Q.",
    )
    p.add_argument("--version", action="version", version=f"pdyn {__version__}")
    p.add_argument("--output", "-o", help="write the JSON report here instead of stdout")
    p.add_argument("--seed", type=int, help="recorded in the report for reproducibility")
    sub = p.add_subparsers(dest="subcommand", required=True)

    s = sub.add_parser("chebyshev", help="Chebyshev polynomial T_r as a map")
    s.add_argument("--degree", type=_positive, required=True)
    s.add_argument("--sign", type=int, choices=(1, -1), default=1)

    s = sub.add_parser("lattes", help="Lattes map x(P) -> x(mP) on y^2 = x^3 + a x + b")
    s.add_argument("--a", required=True, help="rational, e.g. 0 or -3/4")
    s.add_argument("--b", required=True)
    s.add_argument("--m", type=int, required=True)

    s = sub.add_parser("s1", help="torsion orders of bounded degree and the level bound s1")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--B", type=_positive, help="degree bound for the roots of unity")
    s.add_argument("--ext-degree", type=_positive, help="D in B = (D * 2^n)^n * [K:Q]")
    s.add_argument("--n", type=_positive)
    s.add_argument("--field-degree", type=_positive, default=1)

    s = sub.add_parser("tower", help="rational points of a preimage tower and the empirical s0")
    s.add_argument("--map", required=True, help="JSON file or inline JSON for the split map")
    s.add_argument("--variety", required=True, help="JSON file or inline JSON for the hypersurface")
    s.add_argument("--height", type=_positive, required=True)
    s.add_argument("--smax", type=_nonneg, required=True)
    s.add_argument("--threads", type=_positive, default=1)
    s.add_argument("--assert-irreducible", action="store_true")
    s.add_argument("--timing", action="store_true", help="include per-level wall time (not deterministic)")

    s = sub.add_parser("cancel", help="orbit collisions f^n(a) = f^n(b) among bounded-height points")
    s.add_argument("--map", required=True)
    s.add_argument("--height", type=_positive, required=True)
    s.add_argument("--nmax", type=_nonneg, required=True)

    s = sub.add_parser("degree-growth", help="deg(f^m|V) for m = 1..M")
    s.add_argument("--map", required=True)
    s.add_argument("--variety", required=True)
    s.add_argument("--mmax", type=_nonneg, required=True)

    s = sub.add_parser("lemma21-replay", help="coefficient comparison for user intersection data")
    s.add_argument("--table", required=True)

    s = sub.add_parser("separability", help="test h = h1(left block) * h2(right block)")
    s.add_argument("--poly", required=True, help="affine polynomial in x1..xn")
    s.add_argument("--n", type=_positive, required=True)
    s.add_argument("--left", type=_index_list, required=True, help="1-based variable indices, e.g. 1,2")

    s = sub.add_parser("classify", help="recognize maps conjugate to x^(+-d) or +-T_d over Q")
    s.add_argument("--map", required=True)

    s = sub.add_parser("check-invariant", help="forward invariance and invariance verdict")
    s.add_argument("--map", required=True)
    s.add_argument("--variety", required=True)
    s.add_argument("--assert-irreducible", action="store_true")

    s = sub.add_parser("corpus", help="run the fixture regression corpus")
    s.add_argument("--dir", default=None, help="fixture directory (default: the shipped fixtures/)")
    s.add_argument("--verbose", "-v", action="store_true")
    return p


def manifest_from_args(ns: argparse.Namespace) -> RunManifest:
    cmd = ns.subcommand
    inputs, params = {}, {}
    if cmd == "chebyshev":
        params = {"degree": ns.degree, "sign": ns.sign}
    elif cmd == "lattes":
        params = {"a": ns.a, "b": ns.b, "m": ns.m}
    elif cmd == "s1":
        if ns.B is not None:
            params = {"d": ns.d, "B": ns.B}
        elif ns.ext_degree is not None and ns.n is not None:
            params = {"d": ns.d, "ext_degree": ns.ext_degree, "n": ns.n, "field_degree": ns.field_degree}
        else:
            raise ops.ParseError("s1 needs --B, or --ext-degree together with --n")
    elif cmd == "tower":
        inputs = {"map": ns.map, "variety": ns.variety}
        params = {"height": ns.height, "s_max": ns.smax, "threads": ns.threads,
                  "irreducibility_asserted": ns.assert_irreducible, "timing": ns.timing}
    elif cmd == "cancel":
        inputs = {"map": ns.map}
        params = {"height": ns.height, "n_max": ns.nmax}
    elif cmd == "degree-growth":
        inputs = {"map": ns.map, "variety": ns.variety}
        params = {"m_max": ns.mmax}
    elif cmd == "lemma21-replay":
        inputs = {"table": ns.table}
    elif cmd == "separability":
        params = {"poly": ns.poly, "n": ns.n, "left": ns.left}
    elif cmd == "classify":
        inputs = {"map": ns.map}
    elif cmd == "check-invariant":
        inputs = {"map": ns.map, "variety": ns.variety}
        params = {"irreducibility_asserted": ns.assert_irreducible}
    return RunManifest(cmd, inputs, params, ns.seed)


def _emit(obj, path: Optional[str]):
    text = json.dumps(obj, indent=2) + "\n"
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    if ns.subcommand == "corpus":
        from .corpus import run_corpus

        summary = run_corpus(ns.dir, verbose=ns.verbose)
        _emit(summary, ns.output)
        return EXIT_OK if summary["failed"] == 0 else EXIT_INPUT
    try:
        manifest = manifest_from_args(ns)
    except PdynError as exc:
        _emit({"tool": "pdyn", "version": __version__, "error": {"type": type(exc).__name__, "message": str(exc)}},
              ns.output)
        return exc.exit_code
    report, code = run(manifest)
    _emit(report, ns.output)
    return code


if __name__ == "__main__":
    sys.exit(main())
