"""JSON reports and CSV traces, written atomically."""

from __future__ import annotations

import hashlib
import json
import math
import os
import tempfile
from fractions import Fraction
from pathlib import Path

from . import __version__

SCHEMA = 1


def rational(v) -> str | int | None:
    if v is None:
        return None
    if isinstance(v, float) and math.isinf(v):
        return "inf"
    if isinstance(v, Fraction):
        return str(v)
    return v


def inequality(name: str, lhs, op: str, rhs, holds: bool | None) -> dict:
    """A checked inequality with both sides as exact rational strings."""
    def side(v):
        return rational(v) if isinstance(v, float) else str(Fraction(v))
    return {"name": name, "lhs": side(lhs), "op": op, "rhs": side(rhs), "pass": holds}


def file_digest(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 16), b""):
            h.update(block)
    return h.hexdigest()


def new_report(command: str, source: dict, parameters: dict) -> dict:
    return {
        "schema": SCHEMA,
        "tool": "orientlab",
        "version": __version__,
        "command": command,
        "source": source,
        "parameters": parameters,
        "results": {},
        "checks": [],
    }


def to_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, default=rational) + "\n"


def write_atomic(path: str | Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
