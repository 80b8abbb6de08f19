"""Regression corpus runner.

A fixture file holds one case or a list of cases.  Each case names either a
library operation (``op`` + ``args``) or a command line (``cli``), and one of:

- ``expect``: the exact JSON result,
- ``expect_subset``: {dotted.path: value} checked inside the result,
- ``expect_error``: the exception class name,
- ``expect_exit``: the exit code (command-line cases only).
"""
from __future__ import annotations

import contextlib
import io
import json
import os
from pathlib import Path
from typing import Optional

from . import ops
from .errors import PdynError


def default_fixture_dir() -> Path:
    return Path(__file__).resolve().parents[2] / "fixtures"


def _lookup(obj, path: str):
    for part in path.split("."):
        if isinstance(obj, list):
            obj = obj[int(part)]
        else:
            obj = obj[part]
    return obj


def _check_value(case: dict, result) -> Optional[str]:
    if "expect" in case and result != case["expect"]:
        return f"expected {case['expect']!r}, got {result!r}"
    for path, want in case.get("expect_subset", {}).items():
        try:
            got = _lookup(result, path)
        except (KeyError, IndexError, TypeError, ValueError):
            return f"{path} missing from result"
        if got != want:
            return f"{path}: expected {want!r}, got {got!r}"
    return None


@contextlib.contextmanager
def _patched_env(extra: dict):
    saved = {k: os.environ.get(k) for k in extra}
    os.environ.update({k: str(v) for k, v in extra.items()})
    try:
        yield
    finally:
        for k, v in saved.items():
            if v is None:
                os.environ.pop(k, None)
            else:
                os.environ[k] = v


def run_case(case: dict) -> Optional[str]:
    """None on success, else a failure message."""
    with _patched_env(case.get("env", {})):
        return _run_case(case)


def _run_case(case: dict) -> Optional[str]:
    if "cli" in case:
        from .cli import main

        buf = io.StringIO()
        with contextlib.redirect_stdout(buf):
            code = main(list(case["cli"]))
        report = json.loads(buf.getvalue())
        if "expect_exit" in case and code != case["expect_exit"]:
            return f"exit code {code}, expected {case['expect_exit']}"
        if "expect_error" in case:
            got = report.get("error", {}).get("type")
            return None if got == case["expect_error"] else f"error {got!r}, expected {case['expect_error']!r}"
        return _check_value(case, report)
    try:
        result = ops.run_op(case["op"], case.get("args", {}))
    except PdynError as exc:
        if case.get("expect_error") == type(exc).__name__:
            return None
        return f"raised {type(exc).__name__}: {exc}"
    if "expect_error" in case:
        return f"expected {case['expect_error']}, got result {result!r}"
    return _check_value(case, result)


def load_cases(directory: Optional[str] = None) -> list:
    root = Path(directory) if directory else default_fixture_dir()
    cases = []
    for path in sorted(root.glob("*.json")):
        data = json.loads(path.read_text())
        items = data if isinstance(data, list) else [data]
        for i, case in enumerate(items):
            cases.append((f"{path.stem}:{case.get('name', i)}", case))
    return cases


def run_corpus(directory: Optional[str] = None, verbose: bool = False) -> dict:
    results = []
    for name, case in load_cases(directory):
        msg = run_case(case)
        results.append({"case": name, "ok": msg is None, **({"message": msg} if msg else {})})
    failed = [r for r in results if not r["ok"]]
    out = {"total": len(results), "passed": len(results) - len(failed), "failed": len(failed),
           "failures": failed}
    if verbose:
        out["cases"] = results
    return out
