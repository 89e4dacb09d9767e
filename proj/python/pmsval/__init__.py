"""Python bindings for the pmsval engine.

Every command takes a problem as a dict, a JSON string or a path and returns
the report as a dict. Reports with a non-zero verdict (disagreement, failed
probe) carry ``exit_code`` instead of raising.
"""

import json
import os

from ._core import (
    IndeterminateError,
    InvariantError,
    PmsvalError,
    SchemaError,
    decision_tree_dot,
    schema_version,
)
from ._core import run as _run

__all__ = [
    "IndeterminateError",
    "InvariantError",
    "PmsvalError",
    "SchemaError",
    "classify",
    "decision_tree_dot",
    "leaves",
    "oracle_check",
    "probe",
    "rank",
    "run",
    "schema_version",
    "sup",
    "ve",
]


def _text(problem):
    if isinstance(problem, dict):
        return json.dumps(problem)
    if isinstance(problem, os.PathLike) or (isinstance(problem, str) and not problem.lstrip().startswith("{")):
        with open(problem, encoding="utf-8") as f:
            return f.read()
    return problem


def run(command, problem, *, tail_window=None, rank=None, probes=None, dot=False):
    """Run ``command`` and return ``(report, exit_code, dot_source)``."""
    probe_text = json.dumps(probes) if probes is not None else None
    report, code, dot_src = _run(command, _text(problem), tail_window, rank, probe_text, dot)
    out = json.loads(report)
    out["exit_code"] = code
    return out, code, dot_src


def classify(problem):
    return run("classify", problem)[0]


def ve(problem):
    return run("ve", problem)[0]


def rank(problem, *, dot=False):
    report, _, src = run("rank", problem, dot=dot)
    if dot:
        report["dot"] = src
    return report


def sup(problem):
    return run("sup", problem)[0]


def probe(problem, probes=None):
    return run("probe", problem, probes=probes)[0]


def oracle_check(problem, tail_window=None):
    return run("oracle-check", problem, tail_window=tail_window)[0]


def leaves(n, kind="pcs"):
    return run("leaves", {"rank": n, "kind": kind})[0]
